#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pdnsa/entry.hpp"

namespace support {

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pdnsa_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

inline pdnsa::PdnsEntry entry(const std::string& rrname, const std::string& type = "A",
                              const std::string& time = "2017-07-01 00:00:00",
                              std::vector<std::string> rdata = {"127.0.0.1"},
                              std::optional<std::string> domain = std::nullopt) {
  pdnsa::PdnsEntry e;
  e.rrname = pdnsa::Fqdn::parse(rrname);
  e.rrtype = pdnsa::RRType::parse(type);
  e.time_seen = *pdnsa::parse_time_seen(time);
  e.rdata = std::move(rdata);
  if (domain) {
    e.domain = pdnsa::Fqdn::parse(*domain);
    e.bailiwick = e.domain;
  }
  return e;
}

inline std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

/// Random but well-formed entries over a small name and type universe, so
/// that SLDs, names and days repeat.
inline std::vector<pdnsa::PdnsEntry> random_entries(std::mt19937_64& rng, std::size_t n, std::size_t slds = 20,
                                                    std::size_t days = 5) {
  static const char* kTypes[] = {"A", "AAAA", "TXT", "NULL", "CNAME", "MX", "NS", "PTR", "SRV", "CAA"};
  static const char* kTlds[] = {"com", "net", "de", "in"};
  static const char* kAlpha = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::vector<pdnsa::PdnsEntry> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = pick(rng, slds);
    const std::string sld = "d" + std::to_string(s) + "." + kTlds[s % 4];
    std::string name;
    const std::size_t extra = pick(rng, 5);
    for (std::size_t l = 0; l < extra; ++l) {
      std::string label;
      const std::size_t len = 1 + pick(rng, l == 0 ? 40 : 3);
      for (std::size_t k = 0; k < len; ++k) label.push_back(kAlpha[pick(rng, 36)]);
      if (pick(rng, 4) == 0) label[0] = static_cast<char>(label[0] >= 'a' ? label[0] - 32 : label[0]);
      name += label + ".";
    }
    name += sld;
    std::vector<std::string> rdata;
    const std::size_t parts = pick(rng, 3);
    for (std::size_t p = 0; p < parts; ++p) {
      std::string v(pick(rng, 2) ? pick(rng, 60) : pick(rng, 700), 'x');
      if (!v.empty() && pick(rng, 3) == 0) v[0] = '"';
      rdata.push_back(v);
    }
    char time[32];
    std::snprintf(time, sizeof time, "2017-07-%02d %02d:%02d:%02d", static_cast<int>(1 + pick(rng, days)),
                  static_cast<int>(pick(rng, 24)), static_cast<int>(pick(rng, 60)), static_cast<int>(pick(rng, 60)));
    auto e = entry(name + (pick(rng, 2) ? "." : ""), kTypes[pick(rng, 10)], time, rdata,
                   pick(rng, 5) ? std::optional<std::string>(sld) : std::nullopt);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace support
