#include "iocost/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "iocost/errors.hpp"

namespace iocost {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Parses "123" or "123.456" into (integer mantissa, decimal places).
std::pair<std::int64_t, int> parse_decimal(std::string_view digits,
                                           std::string_view original) {
  std::int64_t mantissa = 0;
  int places = -1;
  bool any = false;
  for (char c : digits) {
    if (c == '.') {
      if (places >= 0) throw ValidationError("malformed number '" + std::string(original) + "'");
      places = 0;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ValidationError("malformed number '" + std::string(original) + "'");
    }
    any = true;
    mantissa = checked_add(checked_mul(mantissa, 10, original), c - '0', original);
    if (places >= 0) ++places;
  }
  if (!any) throw ValidationError("malformed number '" + std::string(original) + "'");
  return {mantissa, places < 0 ? 0 : places};
}

std::int64_t pow10(int n) {
  std::int64_t r = 1;
  for (int i = 0; i < n; ++i) r = checked_mul(r, 10, "power of ten");
  return r;
}

}  // namespace

std::int64_t checked_add(std::int64_t a, std::int64_t b, std::string_view what) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("arithmetic overflow in " + std::string(what));
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, std::string_view what) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("arithmetic overflow in " + std::string(what));
  }
  return out;
}

std::int64_t ceil_div(std::int64_t numerator, std::int64_t divisor) {
  if (divisor <= 0) throw ValidationError("divisor must be positive");
  if (numerator < 0) throw ValidationError("numerator must be non-negative");
  return numerator / divisor + (numerator % divisor != 0 ? 1 : 0);
}

std::int64_t parse_bytes(std::string_view text) {
  static constexpr std::array<std::pair<std::string_view, std::int64_t>, 5> kUnits{{
      {"PB", kPB}, {"TB", kTB}, {"GB", kGB}, {"MB", kMB}, {"KB", kKB}}};

  std::string s = upper(trim(text));
  if (s.empty()) throw ValidationError("empty byte value");
  std::int64_t multiplier = 1;
  for (const auto& [suffix, scale] : kUnits) {
    if (s.size() > suffix.size() && s.ends_with(suffix)) {
      multiplier = scale;
      s.resize(s.size() - suffix.size());
      break;
    }
  }
  if (multiplier == 1 && s.size() > 1 && s.back() == 'B') s.pop_back();
  s = trim(s);

  auto [mantissa, places] = parse_decimal(s, text);
  const std::int64_t divisor = pow10(places);
  const __int128 scaled = static_cast<__int128>(mantissa) * multiplier;
  if (scaled % divisor != 0) {
    throw ValidationError("byte value '" + std::string(text) + "' is not a whole number of bytes");
  }
  const __int128 bytes = scaled / divisor;
  if (bytes > INT64_MAX) throw OverflowError("byte value '" + std::string(text) + "' overflows");
  return static_cast<std::int64_t>(bytes);
}

std::string format_bytes(std::int64_t bytes) {
  static constexpr std::array<std::pair<const char*, std::int64_t>, 5> kUnits{{
      {"PB", kPB}, {"TB", kTB}, {"GB", kGB}, {"MB", kMB}, {"KB", kKB}}};
  if (bytes > 0) {
    for (const auto& [suffix, scale] : kUnits) {
      if (bytes % scale == 0) return std::to_string(bytes / scale) + suffix;
    }
  }
  return std::to_string(bytes) + "B";
}

DecimalFactor DecimalFactor::parse(std::string_view text) {
  const std::string s = trim(text);
  auto [mantissa, places] = parse_decimal(s, text);
  if (places > 6) {
    throw ValidationError("factor '" + std::string(text) + "' has more than 6 decimal places");
  }
  return from_millionths(checked_mul(mantissa, pow10(6 - places), "decimal factor"));
}

DecimalFactor DecimalFactor::from_double(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError("factor must be a finite non-negative number");
  }
  const double scaled = value * kScale;
  if (scaled > 9.0e18) throw OverflowError("decimal factor overflows");
  const auto m = static_cast<std::int64_t>(std::llround(scaled));
  if (std::fabs(scaled - static_cast<double>(m)) > 1e-6 * std::max(1.0, scaled)) {
    throw ValidationError("factor " + std::to_string(value) + " has more than 6 decimal places");
  }
  return from_millionths(m);
}

std::int64_t DecimalFactor::apply(std::int64_t value) const {
  const __int128 product = static_cast<__int128>(value) * millionths_;
  const __int128 half = kScale / 2;
  const __int128 rounded = product >= 0 ? (product + half) / kScale : -((-product + half) / kScale);
  if (rounded > INT64_MAX || rounded < INT64_MIN) {
    throw OverflowError("arithmetic overflow applying factor " + to_string());
  }
  return static_cast<std::int64_t>(rounded);
}

bool DecimalFactor::divides_exactly(std::int64_t value) const {
  return (static_cast<__int128>(value) * millionths_) % kScale == 0;
}

std::string DecimalFactor::to_string() const {
  std::string out = std::to_string(millionths_ / kScale);
  std::int64_t frac = millionths_ % kScale;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 6 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

}  // namespace iocost
