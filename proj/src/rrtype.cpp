#include "pdnsa/rrtype.hpp"

#include <array>
#include <cctype>

namespace pdnsa {
namespace {

constexpr std::array<std::string_view, RRType::kKnownCount> kNames = {
    "A",   "AAAA", "MX",  "NS",    "CNAME", "TXT",  "NULL", "SOA",   "WKS", "PTR",  "DNAME",
    "RP",  "HINFO", "SRV", "SPF",  "NAPTR", "TLSA", "LOC",  "SSHFP", "CAA", "DHCID",
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

RRType RRType::parse(std::string_view text) {
  const std::string up = upper(text);
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == up) return RRType(static_cast<Kind>(i));
  }
  RRType t(Kind::Other);
  t.other_ = up;
  return t;
}

// Known names map to their enumerated kind so Other("a") == A.
RRType RRType::other(std::string_view name) { return parse(name); }

std::string RRType::to_string() const {
  if (kind_ == Kind::Other) return other_;
  return std::string(kNames[static_cast<std::size_t>(kind_)]);
}

}  // namespace pdnsa
