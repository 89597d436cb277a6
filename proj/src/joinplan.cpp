#include "iocost/joinplan.hpp"

#include "iocost/errors.hpp"

namespace iocost {

std::string_view to_string(JoinStrategy s) {
  switch (s) {
    case JoinStrategy::Broadcast: return "broadcast";
    case JoinStrategy::Shuffle: return "shuffle";
    case JoinStrategy::Auto: return "auto";
  }
  return "?";
}

JoinStrategy parse_join_strategy(std::string_view text) {
  for (auto s : {JoinStrategy::Broadcast, JoinStrategy::Shuffle, JoinStrategy::Auto}) {
    if (to_string(s) == text) return s;
  }
  throw ValidationError("unknown join strategy '" + std::string(text) + "'");
}

JoinStrategy resolve_strategy(const JoinSpec& spec) {
  if (spec.strategy != JoinStrategy::Auto) return spec.strategy;
  return spec.build_bytes <= spec.broadcast_threshold ? JoinStrategy::Broadcast : JoinStrategy::Shuffle;
}

JoinIoPlan plan_join(const JoinSpec& spec, std::int64_t request_bytes) {
  if (request_bytes <= 0) throw ValidationError("request bytes must be > 0");
  if (spec.workers < 1) throw ValidationError("join needs at least one worker");
  if (spec.build_bytes < 0 || spec.probe_bytes < 0) throw ValidationError("table sizes must be >= 0");

  JoinIoPlan plan;
  plan.strategy = resolve_strategy(spec);
  const std::int64_t single_copy = checked_add(spec.build_bytes, spec.probe_bytes, "join bytes");
  if (plan.strategy == JoinStrategy::Broadcast) {
    plan.storage_bytes =
        checked_add(checked_mul(spec.workers, spec.build_bytes, "broadcast bytes"), spec.probe_bytes, "join bytes");
  } else {
    plan.storage_bytes = single_copy;
    plan.shuffle_network_bytes = single_copy;
  }
  plan.duplicated_bytes = plan.storage_bytes - single_copy;
  plan.storage_requests = ceil_div(plan.storage_bytes, request_bytes);
  return plan;
}

bool WasteFraction::equals(DecimalFactor d) const {
  // numerator / denominator == millionths / 10^6
  return static_cast<__int128>(numerator) * DecimalFactor::kScale ==
         static_cast<__int128>(d.millionths()) * denominator;
}

std::string WasteFraction::to_string(int places) const {
  __int128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const __int128 scaled = (static_cast<__int128>(numerator) * scale + denominator / 2) / denominator;
  const auto whole = static_cast<std::int64_t>(scaled / scale);
  auto frac = std::to_string(static_cast<std::int64_t>(scaled % scale));
  frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
  return std::to_string(whole) + (places > 0 ? "." + frac : "");
}

WasteFraction waste_fraction(std::int64_t workers) {
  if (workers < 1) throw ValidationError("waste fraction needs at least one worker");
  return {workers - 1, workers};
}

std::int64_t fleet_aggregate(const FleetParams& params) {
  if (params.queries_per_day < 0 || params.workers < 1 || params.build_bytes < 0) {
    throw ValidationError("fleet parameters out of range");
  }
  if (params.broadcast_fraction.millionths() > DecimalFactor::kScale) {
    throw ValidationError("broadcast fraction must be within [0, 1]");
  }
  const std::int64_t per_query = checked_mul(params.workers, params.build_bytes, "fleet aggregate");
  return params.broadcast_fraction.apply(checked_mul(per_query, params.queries_per_day, "fleet aggregate"));
}

std::int64_t fleet_api_calls(std::int64_t bytes_per_day, std::int64_t request_bytes) {
  if (request_bytes <= 0) throw ValidationError("request bytes must be > 0");
  return ceil_div(bytes_per_day, request_bytes);
}

JoinIoPlan fleet_join_io(const FleetParams& params, std::int64_t probe_bytes, JoinStrategy strategy,
                         std::int64_t broadcast_threshold, std::int64_t request_bytes) {
  const JoinSpec one{params.build_bytes, probe_bytes, params.workers, strategy, broadcast_threshold};
  const JoinIoPlan per_query = plan_join(one, request_bytes);

  FleetParams build_side = params;
  if (per_query.strategy == JoinStrategy::Shuffle) build_side.workers = 1;
  FleetParams probe_side = params;
  probe_side.workers = 1;
  probe_side.build_bytes = probe_bytes;

  JoinIoPlan plan;
  plan.strategy = per_query.strategy;
  plan.storage_bytes = checked_add(fleet_aggregate(build_side), fleet_aggregate(probe_side), "fleet join bytes");
  FleetParams single = params;
  single.workers = 1;
  const std::int64_t single_copy = checked_add(fleet_aggregate(single), fleet_aggregate(probe_side), "fleet join bytes");
  plan.duplicated_bytes = plan.storage_bytes - single_copy;
  if (plan.strategy == JoinStrategy::Shuffle) plan.shuffle_network_bytes = single_copy;
  plan.storage_requests = fleet_api_calls(plan.storage_bytes, request_bytes);
  return plan;
}

nlohmann::json to_json(const JoinIoPlan& plan) {
  return {{"strategy", std::string(to_string(plan.strategy))},
          {"storage_bytes", plan.storage_bytes},
          {"storage_requests", plan.storage_requests},
          {"duplicated_bytes", plan.duplicated_bytes},
          {"shuffle_network_bytes", plan.shuffle_network_bytes}};
}

}  // namespace iocost
