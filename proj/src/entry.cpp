#include "pdnsa/entry.hpp"

#include <charconv>
#include <cstdio>

#include "pdnsa/public_suffix.hpp"

namespace pdnsa {
namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t width, int& out) {
  if (pos + width > s.size()) return false;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + width, out);
  return ec == std::errc() && p == s.data() + pos + width;
}

std::optional<Day> parse_date_prefix(std::string_view s) {
  int y = 0, m = 0, d = 0;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!read_int(s, 0, 4, y) || !read_int(s, 5, 2, m) || !read_int(s, 8, 2, d)) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Day(ymd);
}

}  // namespace

std::optional<Timestamp> parse_time_seen(std::string_view text) {
  if (text.size() != 19 || text[10] != ' ' || text[13] != ':' || text[16] != ':') return std::nullopt;
  auto day = parse_date_prefix(text.substr(0, 10));
  if (!day) return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (!read_int(text, 11, 2, hh) || !read_int(text, 14, 2, mm) || !read_int(text, 17, 2, ss)) {
    return std::nullopt;
  }
  if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
  return Timestamp(*day) + std::chrono::hours(hh) + std::chrono::minutes(mm) + std::chrono::seconds(ss);
}

std::string format_time_seen(Timestamp t) {
  const Day d = day_of(t);
  const std::chrono::year_month_day ymd{d};
  const auto secs = (t - Timestamp(d)).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02lld:%02lld:%02lld", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(secs / 3600), static_cast<long long>(secs / 60 % 60),
                static_cast<long long>(secs % 60));
  return buf;
}

std::optional<Day> parse_day(std::string_view text) {
  if (text.size() != 10) return std::nullopt;
  return parse_date_prefix(text);
}

std::string format_day(Day d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

void append_json_string(std::string& out, std::string_view s) {
  static constexpr char kHex[] = "0123456789abcdef";
  out.push_back('"');
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          out += "\\u00";
          out.push_back(kHex[c >> 4]);
          out.push_back(kHex[c & 0xf]);
        } else {
          out.push_back(ch);
        }
    }
  }
  out.push_back('"');
}

std::size_t rdata_serialized_size(const std::vector<std::string>& rdata) {
  std::size_t size = 2;  // brackets
  if (!rdata.empty()) size += rdata.size() - 1;  // commas
  for (const auto& value : rdata) {
    size += 2;
    for (char ch : value) {
      const auto c = static_cast<unsigned char>(ch);
      if (c == '"' || c == '\\' || c == '\b' || c == '\f' || c == '\n' || c == '\r' || c == '\t') {
        size += 2;
      } else if (c < 0x20) {
        size += 6;
      } else {
        size += 1;
      }
    }
  }
  return size;
}

std::string serialize_rdata(const std::vector<std::string>& rdata) {
  std::string out = "[";
  for (std::size_t i = 0; i < rdata.size(); ++i) {
    if (i) out.push_back(',');
    append_json_string(out, rdata[i]);
  }
  out.push_back(']');
  return out;
}

Fqdn SldResolver::from_rrname(const Fqdn& rrname) const {
  if (psl_) {
    if (auto reg = psl_->registrable_domain(rrname)) return *reg;
  }
  return rrname.suffix(2);
}

SldResult SldResolver::resolve(const PdnsEntry& entry) const {
  if (entry.domain) {
    if (entry.rrname.is_subdomain_of(*entry.domain)) return {*entry.domain, false};
    return {from_rrname(entry.rrname), true};
  }
  return {from_rrname(entry.rrname), false};
}

}  // namespace pdnsa
