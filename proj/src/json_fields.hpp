#pragma once

// Typed field access for JSON inputs. Errors name the offending key.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "iocost/errors.hpp"
#include "iocost/units.hpp"

namespace iocost::detail {

inline const nlohmann::json& require(const nlohmann::json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(where + ": missing field '" + key + "'");
  return *it;
}

inline std::int64_t as_int(const nlohmann::json& v, const std::string& key, const std::string& where) {
  if (!v.is_number_integer()) throw ValidationError(where + ": field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

// Integer bytes or a unit string such as "10KB".
inline std::int64_t as_bytes(const nlohmann::json& v, const std::string& key, const std::string& where) {
  if (v.is_string()) {
    try {
      return parse_bytes(v.get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": field '" + key + "': " + e.what());
    }
  }
  return as_int(v, key, where);
}

// Decimal number or numeric string such as "0.2".
inline DecimalFactor as_factor(const nlohmann::json& v, const std::string& key, const std::string& where) {
  try {
    if (v.is_string()) return DecimalFactor::parse(v.get<std::string>());
    if (v.is_number_integer()) return DecimalFactor::from_millionths(checked_mul(v.get<std::int64_t>(), DecimalFactor::kScale));
    if (v.is_number()) return DecimalFactor::from_double(v.get<double>());
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": field '" + key + "': " + e.what());
  }
  throw ValidationError(where + ": field '" + key + "' must be a number");
}

inline std::string as_string(const nlohmann::json& v, const std::string& key, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::int64_t int_field(const nlohmann::json& j, const std::string& key, const std::string& where) {
  return as_int(require(j, key, where), key, where);
}
inline std::int64_t bytes_field(const nlohmann::json& j, const std::string& key, const std::string& where) {
  return as_bytes(require(j, key, where), key, where);
}
inline std::int64_t bytes_field_or(const nlohmann::json& j, const std::string& key, const std::string& where,
                                   std::int64_t fallback) {
  return j.contains(key) ? as_bytes(j.at(key), key, where) : fallback;
}
inline std::string string_field(const nlohmann::json& j, const std::string& key, const std::string& where) {
  return as_string(require(j, key, where), key, where);
}

}  // namespace iocost::detail
