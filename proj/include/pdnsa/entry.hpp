#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdnsa/fqdn.hpp"
#include "pdnsa/rrtype.hpp"

namespace pdnsa {

class PublicSuffixList;

using Timestamp = std::chrono::sys_seconds;
using Day = std::chrono::sys_days;

/// Parses "YYYY-MM-DD HH:MM:SS" (UTC). Anything else, including out-of-range
/// fields, yields nullopt.
std::optional<Timestamp> parse_time_seen(std::string_view text);
std::string format_time_seen(Timestamp t);

/// Parses "YYYY-MM-DD".
std::optional<Day> parse_day(std::string_view text);
std::string format_day(Day d);
inline Day day_of(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

/// One passive-DNS record, field for field as the feed delivers it.
struct PdnsEntry {
  /// Registrable domain as given by the feed; may be missing in rrname-only inputs.
  std::optional<Fqdn> domain;
  Timestamp time_seen{};
  std::optional<Fqdn> bailiwick;
  Fqdn rrname;
  std::string rrclass = "IN";
  RRType rrtype;
  std::vector<std::string> rdata;
};

/// Byte length of rdata rendered as a compact JSON string array,
/// `["v1","v2"]`, with JSON string escaping and no whitespace.
std::size_t rdata_serialized_size(const std::vector<std::string>& rdata);
std::string serialize_rdata(const std::vector<std::string>& rdata);

/// Appends `s` as a JSON string literal (quotes included). Bytes >= 0x80 are
/// copied verbatim.
void append_json_string(std::string& out, std::string_view s);

struct SldResult {
  Fqdn sld;
  /// The feed's domain field was present but not a suffix of rrname.
  bool suffix_mismatch = false;
};

/// Resolves the second-level (registrable) domain of an entry.
///
/// The feed's `domain` field wins when it is a suffix of rrname. Otherwise the
/// registrable domain from the public suffix list is used when one is
/// configured, falling back to the last two labels of rrname.
class SldResolver {
 public:
  SldResolver() = default;
  explicit SldResolver(const PublicSuffixList* psl) : psl_(psl) {}

  SldResult resolve(const PdnsEntry& entry) const;
  /// From an rrname alone (no domain field).
  Fqdn from_rrname(const Fqdn& rrname) const;

 private:
  const PublicSuffixList* psl_ = nullptr;
};

inline SldResult second_level_domain(const PdnsEntry& entry, const PublicSuffixList* psl = nullptr) {
  return SldResolver(psl).resolve(entry);
}

}  // namespace pdnsa
