#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace iocost {

// Request kinds an object store bills for. `GetBucketConfig` exists for
// stores that price bucket-configuration reads apart from listings.
enum class RequestKind { Get, Put, Post, Copy, List, Head, Select, GetBucketConfig };

inline constexpr RequestKind kAllRequestKinds[] = {
    RequestKind::Get,  RequestKind::Put,  RequestKind::Post,   RequestKind::Copy,
    RequestKind::List, RequestKind::Head, RequestKind::Select, RequestKind::GetBucketConfig};

std::string_view to_string(RequestKind kind);
// Throws ClassificationError naming the kind.
RequestKind parse_request_kind(std::string_view name);

enum class BillingClass { Read, Write };
std::string_view to_string(BillingClass c);

// Exact money in nanoUSD (10^-9 USD).
struct Money {
  std::int64_t nano_usd = 0;

  friend Money operator+(Money a, Money b);
  friend bool operator==(Money, Money) = default;
  friend auto operator<=>(Money, Money) = default;
};

// "0.0004", "80000", "-12.5": nine decimal places with trailing zeros trimmed.
std::string format_usd(Money m);
// "$80,000", "$0.0004": thousands-grouped for human-readable tables.
std::string format_usd_grouped(Money m);

// One priced operation class of a price book, e.g. S3 "GET, SELECT, and
// all other requests" at 400 nanoUSD per request.
struct OperationClass {
  BillingClass billing = BillingClass::Read;
  std::string label;
  std::vector<RequestKind> kinds;
  std::int64_t nano_usd_per_request = 0;
};

class PriceBook {
 public:
  // Validates: non-empty id, non-negative prices, no kind listed twice.
  PriceBook(std::string id, std::vector<OperationClass> classes);

  const std::string& id() const { return id_; }
  const std::vector<OperationClass>& classes() const { return classes_; }

  // Class of a request kind; throws ClassificationError if absent.
  const OperationClass& classify(RequestKind kind) const;
  std::int64_t price_of(RequestKind kind) const { return classify(kind).nano_usd_per_request; }

 private:
  std::string id_;
  std::vector<OperationClass> classes_;
};

// Per-request prices for s3-standard, gcs-standard-xml and
// azure-gpv2-{premium,hot,cool,archive}.
const std::vector<PriceBook>& builtin_pricebooks();
// Throws ValidationError naming the id when unknown.
const PriceBook& find_pricebook(std::string_view id);

// Price-book JSON: {"id": ..., "classes": [{"class": "read"|"write",
// "kinds": [...], "nanousd_per_request": int, "label"?: string}]}.
PriceBook pricebook_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PriceBook& book);
PriceBook load_pricebook_file(const std::string& path);

struct KindTally {
  std::int64_t count = 0;
  std::int64_t bytes = 0;
  friend bool operator==(const KindTally&, const KindTally&) = default;
};

// Request counts and transferred bytes per request kind.
class RequestTally {
 public:
  RequestTally() = default;

  // Throws ValidationError on negative values or bytes without requests.
  void add(RequestKind kind, std::int64_t count, std::int64_t bytes = 0);
  RequestTally& merge(const RequestTally& other);

  KindTally at(RequestKind kind) const;
  const std::map<RequestKind, KindTally>& entries() const { return entries_; }
  std::int64_t total_requests() const;
  std::int64_t total_bytes() const;
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const RequestTally&, const RequestTally&) = default;

 private:
  std::map<RequestKind, KindTally> entries_;
};

RequestTally operator+(RequestTally a, const RequestTally& b);

// Tally JSON: {"get": 1000} or {"get": {"count": 1000, "bytes": 10000}}.
RequestTally tally_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RequestTally& tally);

// Σ count × per-request price. Exact; throws OverflowError.
Money cost_of(const PriceBook& book, const RequestTally& tally);

}  // namespace iocost
