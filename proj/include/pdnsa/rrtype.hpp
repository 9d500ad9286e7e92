#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace pdnsa {

/// DNS resource record type as seen in a pDNS feed.
///
/// The enumerated kinds cover every type that shows up in newly observed
/// hostname traffic; anything else is kept verbatim (uppercased) as `Other`
/// so that parsing never fails.  Enumeration order is also the display order
/// of share tables (A, AAAA, MX, NS, CNAME, TXT, NULL first).
class RRType {
 public:
  enum class Kind : std::uint8_t {
    A,
    AAAA,
    MX,
    NS,
    CNAME,
    TXT,
    Null,
    SOA,
    WKS,
    PTR,
    DNAME,
    RP,
    HINFO,
    SRV,
    SPF,
    NAPTR,
    TLSA,
    LOC,
    SSHFP,
    CAA,
    DHCID,
    Other,
  };

  static constexpr std::size_t kKnownCount = static_cast<std::size_t>(Kind::Other);

  RRType() = default;
  RRType(Kind kind) : kind_(kind) {}  // NOLINT: implicit by design of the enum wrapper

  /// Case-insensitive; unknown names become `Other(NAME)`.
  static RRType parse(std::string_view text);
  static RRType other(std::string_view name);

  Kind kind() const { return kind_; }
  bool is_other() const { return kind_ == Kind::Other; }

  /// Canonical uppercase text ("A", "NULL", "TYPE65", ...).
  std::string to_string() const;

  friend bool operator==(const RRType&, const RRType&) = default;
  friend std::strong_ordering operator<=>(const RRType& a, const RRType& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.other_ <=> b.other_;
  }

 private:
  Kind kind_ = Kind::A;
  std::string other_;
};

}  // namespace pdnsa

template <>
struct std::hash<pdnsa::RRType> {
  std::size_t operator()(const pdnsa::RRType& t) const noexcept {
    return std::hash<std::string>{}(t.to_string());
  }
};
