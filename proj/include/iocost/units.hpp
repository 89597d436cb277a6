#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace iocost {

// Decimal byte units. 1 PB = 10^15 bytes.
inline constexpr std::int64_t kKB = 1'000;
inline constexpr std::int64_t kMB = 1'000'000;
inline constexpr std::int64_t kGB = 1'000'000'000;
inline constexpr std::int64_t kTB = 1'000'000'000'000;
inline constexpr std::int64_t kPB = 1'000'000'000'000'000;

inline constexpr std::int64_t kMsPerHour = 3'600'000;
inline constexpr std::int64_t kMsPerDay = 24 * kMsPerHour;

// Parses "4096", "10KB", "1.5MB", "2 PB" (case-insensitive, optional
// trailing "B"). The result must be a whole number of bytes.
std::int64_t parse_bytes(std::string_view text);

// Renders with the largest unit that divides evenly, e.g. "10KB", "2PB".
std::string format_bytes(std::int64_t bytes);

// Checked arithmetic; throws OverflowError naming `what`.
std::int64_t checked_add(std::int64_t a, std::int64_t b,
                         std::string_view what = "sum");
std::int64_t checked_mul(std::int64_t a, std::int64_t b,
                         std::string_view what = "product");

// Ceiling division for non-negative numerator and positive divisor.
std::int64_t ceil_div(std::int64_t numerator, std::int64_t divisor);

// A non-negative decimal factor held exactly in millionths ("0.2", "5",
// "0.000001"). Used for fractions and multipliers so that products with
// byte counts stay exact integers.
class DecimalFactor {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr DecimalFactor() = default;
  static DecimalFactor parse(std::string_view text);
  // Rejects values with more than six decimal places of precision.
  static DecimalFactor from_double(double value);
  static constexpr DecimalFactor from_millionths(std::int64_t m) {
    DecimalFactor f;
    f.millionths_ = m;
    return f;
  }

  std::int64_t millionths() const { return millionths_; }
  double value() const { return static_cast<double>(millionths_) / kScale; }

  // value × factor rounded to the nearest integer (ties away from zero).
  std::int64_t apply(std::int64_t value) const;
  // True when value × factor is an exact integer.
  bool divides_exactly(std::int64_t value) const;

  std::string to_string() const;

  friend bool operator==(DecimalFactor, DecimalFactor) = default;
  friend auto operator<=>(DecimalFactor, DecimalFactor) = default;

 private:
  std::int64_t millionths_ = 0;
};

}  // namespace iocost
