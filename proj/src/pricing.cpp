#include "iocost/pricing.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "iocost/errors.hpp"
#include "iocost/units.hpp"

namespace iocost {
namespace {

constexpr std::int64_t kNanoPerUsd = 1'000'000'000;

std::string usd_digits(Money m, bool grouped) {
  const bool negative = m.nano_usd < 0;
  const auto magnitude =
      negative ? static_cast<std::uint64_t>(-(m.nano_usd + 1)) + 1 : static_cast<std::uint64_t>(m.nano_usd);
  std::string whole = std::to_string(magnitude / kNanoPerUsd);
  if (grouped) {
    for (int pos = static_cast<int>(whole.size()) - 3; pos > 0; pos -= 3) {
      whole.insert(static_cast<std::size_t>(pos), ",");
    }
  }
  std::string frac = std::to_string(magnitude % kNanoPerUsd);
  frac.insert(0, 9 - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();

  std::string out = negative ? "-" : "";
  if (grouped) out += "$";
  out += whole;
  if (!frac.empty()) out += "." + frac;
  return out;
}

OperationClass op_class(BillingClass billing, std::string label, std::vector<RequestKind> kinds,
                        std::int64_t nano) {
  return OperationClass{billing, std::move(label), std::move(kinds), nano};
}

PriceBook azure_book(std::string tier, std::int64_t write_nano, std::int64_t read_nano) {
  using K = RequestKind;
  return PriceBook("azure-gpv2-" + tier,
                   {op_class(BillingClass::Write, "Write operations", {K::Put, K::Post, K::Copy}, write_nano),
                    op_class(BillingClass::Read, "Read operations",
                             {K::Get, K::Head, K::List, K::Select, K::GetBucketConfig}, read_nano)});
}

std::vector<PriceBook> make_builtins() {
  using K = RequestKind;
  std::vector<PriceBook> books;
  // Per-1,000-request list prices divided by 1,000, in nanoUSD.
  books.emplace_back(
      "s3-standard",
      std::vector<OperationClass>{
          op_class(BillingClass::Write, "PUT, COPY, POST, LIST requests", {K::Put, K::Copy, K::Post, K::List}, 5'000),
          op_class(BillingClass::Read, "GET, SELECT, and all other requests",
                   {K::Get, K::Select, K::Head, K::GetBucketConfig}, 400)});
  books.emplace_back(
      "gcs-standard-xml",
      std::vector<OperationClass>{
          op_class(BillingClass::Write, "GET Service, GET Bucket (object listing), PUT, POST",
                   {K::List, K::Put, K::Post, K::Copy}, 5'000),
          op_class(BillingClass::Read, "GET Bucket (configuration), GET Object, HEAD",
                   {K::Get, K::Head, K::GetBucketConfig, K::Select}, 400)});
  books.push_back(azure_book("premium", 2'280, 190));
  books.push_back(azure_book("hot", 6'500, 500));
  books.push_back(azure_book("cool", 13'000, 1'300));
  books.push_back(azure_book("archive", 13'000, 650'000));
  return books;
}

}  // namespace

std::string_view to_string(RequestKind kind) {
  switch (kind) {
    case RequestKind::Get: return "get";
    case RequestKind::Put: return "put";
    case RequestKind::Post: return "post";
    case RequestKind::Copy: return "copy";
    case RequestKind::List: return "list";
    case RequestKind::Head: return "head";
    case RequestKind::Select: return "select";
    case RequestKind::GetBucketConfig: return "get-bucket-config";
  }
  return "unknown";
}

RequestKind parse_request_kind(std::string_view name) {
  for (auto kind : kAllRequestKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw ClassificationError("unknown request kind '" + std::string(name) + "'");
}

std::string_view to_string(BillingClass c) { return c == BillingClass::Read ? "read" : "write"; }

Money operator+(Money a, Money b) { return Money{checked_add(a.nano_usd, b.nano_usd, "money total")}; }

std::string format_usd(Money m) { return usd_digits(m, false); }
std::string format_usd_grouped(Money m) { return usd_digits(m, true); }

PriceBook::PriceBook(std::string id, std::vector<OperationClass> classes)
    : id_(std::move(id)), classes_(std::move(classes)) {
  if (id_.empty()) throw ValidationError("price book id must not be empty");
  std::set<RequestKind> seen;
  for (const auto& c : classes_) {
    if (c.nano_usd_per_request < 0) {
      throw ValidationError("price book '" + id_ + "': negative price in class '" + c.label + "'");
    }
    for (auto kind : c.kinds) {
      if (!seen.insert(kind).second) {
        throw ValidationError("price book '" + id_ + "': request kind '" + std::string(to_string(kind)) +
                              "' listed in more than one class");
      }
    }
  }
}

const OperationClass& PriceBook::classify(RequestKind kind) const {
  for (const auto& c : classes_) {
    if (std::find(c.kinds.begin(), c.kinds.end(), kind) != c.kinds.end()) return c;
  }
  throw ClassificationError("price book '" + id_ + "' has no class for request kind '" +
                            std::string(to_string(kind)) + "'");
}

const std::vector<PriceBook>& builtin_pricebooks() {
  static const std::vector<PriceBook> books = make_builtins();
  return books;
}

const PriceBook& find_pricebook(std::string_view id) {
  for (const auto& book : builtin_pricebooks()) {
    if (book.id() == id) return book;
  }
  throw ValidationError("unknown price book '" + std::string(id) + "'");
}

PriceBook pricebook_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("price book must be a JSON object");
  if (!j.contains("id") || !j["id"].is_string()) throw ValidationError("price book: missing string field 'id'");
  if (!j.contains("classes") || !j["classes"].is_array()) {
    throw ValidationError("price book: missing array field 'classes'");
  }
  std::vector<OperationClass> classes;
  for (const auto& c : j["classes"]) {
    OperationClass oc;
    const auto billing = c.value("class", std::string{});
    if (billing == "read") {
      oc.billing = BillingClass::Read;
    } else if (billing == "write") {
      oc.billing = BillingClass::Write;
    } else {
      throw ValidationError("price book: field 'class' must be \"read\" or \"write\"");
    }
    if (!c.contains("kinds") || !c["kinds"].is_array()) throw ValidationError("price book: missing array field 'kinds'");
    for (const auto& k : c["kinds"]) oc.kinds.push_back(parse_request_kind(k.get<std::string>()));
    if (!c.contains("nanousd_per_request") || !c["nanousd_per_request"].is_number_integer()) {
      throw ValidationError("price book: missing integer field 'nanousd_per_request'");
    }
    oc.nano_usd_per_request = c["nanousd_per_request"].get<std::int64_t>();
    oc.label = c.value("label", std::string(to_string(oc.billing)));
    classes.push_back(std::move(oc));
  }
  return PriceBook(j["id"].get<std::string>(), std::move(classes));
}

nlohmann::json to_json(const PriceBook& book) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : book.classes()) {
    nlohmann::json kinds = nlohmann::json::array();
    for (auto k : c.kinds) kinds.push_back(std::string(to_string(k)));
    classes.push_back({{"class", std::string(to_string(c.billing))},
                       {"label", c.label},
                       {"kinds", kinds},
                       {"nanousd_per_request", c.nano_usd_per_request}});
  }
  return {{"id", book.id()}, {"classes", classes}};
}

PriceBook load_pricebook_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open price book file '" + path + "'");
  try {
    return pricebook_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("price book file '" + path + "': " + e.what());
  }
}

void RequestTally::add(RequestKind kind, std::int64_t count, std::int64_t bytes) {
  if (count < 0 || bytes < 0) throw ValidationError("tally counts and bytes must be non-negative");
  if (count == 0) {
    if (bytes != 0) throw ValidationError("tally has bytes for zero requests of kind '" + std::string(to_string(kind)) + "'");
    return;
  }
  auto& e = entries_[kind];
  e.count = checked_add(e.count, count, "request count");
  e.bytes = checked_add(e.bytes, bytes, "byte count");
}

RequestTally& RequestTally::merge(const RequestTally& other) {
  for (const auto& [kind, t] : other.entries_) add(kind, t.count, t.bytes);
  return *this;
}

KindTally RequestTally::at(RequestKind kind) const {
  auto it = entries_.find(kind);
  return it == entries_.end() ? KindTally{} : it->second;
}

std::int64_t RequestTally::total_requests() const {
  std::int64_t n = 0;
  for (const auto& [_, t] : entries_) n = checked_add(n, t.count, "request count");
  return n;
}

std::int64_t RequestTally::total_bytes() const {
  std::int64_t n = 0;
  for (const auto& [_, t] : entries_) n = checked_add(n, t.bytes, "byte count");
  return n;
}

RequestTally operator+(RequestTally a, const RequestTally& b) { return a.merge(b); }

RequestTally tally_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("tally must be a JSON object keyed by request kind");
  RequestTally tally;
  for (const auto& [name, value] : j.items()) {
    const auto kind = parse_request_kind(name);
    if (value.is_number_integer()) {
      tally.add(kind, value.get<std::int64_t>());
    } else if (value.is_object()) {
      tally.add(kind, value.value("count", std::int64_t{0}), value.value("bytes", std::int64_t{0}));
    } else {
      throw ValidationError("tally entry '" + name + "' must be an integer or {count, bytes}");
    }
  }
  return tally;
}

nlohmann::json to_json(const RequestTally& tally) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [kind, t] : tally.entries()) {
    j[std::string(to_string(kind))] = {{"count", t.count}, {"bytes", t.bytes}};
  }
  return j;
}

Money cost_of(const PriceBook& book, const RequestTally& tally) {
  Money total;
  for (const auto& [kind, t] : tally.entries()) {
    total.nano_usd = checked_add(total.nano_usd, checked_mul(t.count, book.price_of(kind), "request cost"), "money total");
  }
  return total;
}

}  // namespace iocost
