#include <algorithm>
#include <map>

#include "pdnsa/error.hpp"
#include "pdnsa/hashing.hpp"
#include "pdnsa/tunnelgen.hpp"

namespace pdnsa {
namespace {

using K = RRType::Kind;

const std::vector<K>& concrete_types() {
  static const std::vector<K> kTypes{K::A,   K::AAAA, K::MX,  K::NS,  K::CNAME, K::TXT,  K::Null,
                                     K::PTR, K::SOA,  K::SRV, K::SPF, K::NAPTR, K::CAA};
  return kTypes;
}

std::size_t type_index(K k) {
  const auto& t = concrete_types();
  return static_cast<std::size_t>(std::find(t.begin(), t.end(), k) - t.begin());
}

const std::vector<K> kOthers{K::PTR, K::SOA, K::SRV, K::SPF, K::NAPTR, K::CAA};

std::vector<K> with_others(std::vector<K> head, bool others_at_end = true) {
  if (others_at_end) head.insert(head.end(), kOthers.begin(), kOthers.end());
  return head;
}

std::string base36(std::uint64_t v, std::size_t width) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out(width, '0');
  for (std::size_t i = width; i > 0; --i) {
    out[i - 1] = kDigits[v % 36];
    v /= 36;
  }
  return out;
}

// Odd-multiplier and xorshift steps are bijections on 40-bit values.
std::uint64_t permute40(std::uint64_t x, std::uint64_t key) {
  constexpr std::uint64_t mask = (1ULL << 40) - 1;
  x = (x ^ key) & mask;
  x = (x * 0x9E3779B97F4A7C15ULL) & mask;
  x ^= x >> 20;
  x = (x * 0xD6E8FEB86659FD93ULL) & mask;
  x ^= x >> 13;
  return x;
}

std::vector<std::string> rdata_for(K k, const std::string& sld, std::uint64_t r) {
  const std::string a = std::to_string(r & 0xff), b = std::to_string((r >> 8) & 0xff);
  switch (k) {
    case K::A: return {"93.184." + a + "." + b};
    case K::AAAA: return {"2001:db8::" + a + ":" + b};
    case K::MX: return {"10 mx." + sld + "."};
    case K::NS: return {"ns1." + sld + ".", "ns2." + sld + "."};
    case K::CNAME: return {"edge-" + a + "." + sld + "."};
    case K::TXT: return {"site-verification=" + base36(r, 12)};
    case K::Null: return {base36(r, 12)};
    case K::PTR: return {"host-" + a + "-" + b + ".example."};
    case K::SOA: return {"ns1." + sld + ". hostmaster." + sld + ". 1 7200 3600 1209600 300"};
    case K::SRV: return {"0 5 443 svc." + sld + "."};
    case K::SPF: return {"v=spf1 -all"};
    case K::NAPTR: return {"100 10 \"U\" \"E2U+sip\" \"!^.*$!sip:info@example.com!\" ."};
    case K::CAA: return {"0 issue \"letsencrypt.org\""};
    default: return {};
  }
}

}  // namespace

const std::vector<std::pair<std::string, int>>& ShapedGenerator::rrtype_targets() {
  static const std::vector<std::pair<std::string, int>> kTargets{
      {"A", 5490},   {"AAAA", 967}, {"MX", 3},    {"NS", 38},   {"CNAME", 768}, {"TXT", 204},  {"NULL", 2117},
      {"PTR", 165},  {"SOA", 103},  {"SRV", 62},  {"SPF", 41},  {"NAPTR", 21},  {"CAA", 21}};
  return kTargets;
}

const std::vector<std::pair<std::string, int>>& ShapedGenerator::sld_targets() {
  static const std::vector<std::pair<std::string, int>> kTargets{
      {"ampproject.net", 3337}, {"53r.de", 943},          {"spotilocal.com", 939}, {"8u6.de", 907},
      {"1yf.de", 617},          {"mts.ru", 258},          {"imrworldwide.com", 174}, {"dotnxdomain.net", 114},
      {"cnr.io", 102},          {"dynapsis.info", 97}};
  return kTargets;
}

struct ShapedGenerator::State {
  struct Cell {
    std::size_t sld;
    K type;
    std::uint64_t count;
  };
  std::vector<std::string> slds;
  std::vector<Cell> cells;
  std::size_t cell = 0;
  std::uint64_t in_cell = 0;
  std::uint64_t emitted = 0;
  std::uint64_t key = 0;
  std::size_t days = 7;
  Day start = Day(std::chrono::year{2017} / 7 / 1);
  std::mt19937_64 rng;
};

ShapedGenerator::ShapedGenerator(std::uint64_t seed, std::uint64_t total, std::size_t tail_slds, std::size_t days)
    : state_(std::make_unique<State>()) {
  if (days < 1) throw ConfigError("shaped generator needs at least one day");
  State& s = *state_;
  s.days = days;
  s.rng.seed(mix64(seed ^ 0x5a9ed));
  s.key = mix64(seed);

  // SLD masses: fixed heads plus a 1/(i+10) tail sharing the remainder.
  std::vector<double> sld_weights;
  int head_bp = 0;
  for (const auto& [name, bp] : sld_targets()) {
    s.slds.push_back(name);
    sld_weights.push_back(bp);
    head_bp += bp;
  }
  double tail_norm = 0.0;
  for (std::size_t i = 1; i <= tail_slds; ++i) tail_norm += 1.0 / static_cast<double>(i + 10);
  static const char* kTlds[] = {"com", "net", "org", "de", "ru", "io"};
  for (std::size_t i = 1; i <= tail_slds; ++i) {
    s.slds.push_back("site" + base36(i, 3) + "." + kTlds[i % 6]);
    sld_weights.push_back((10000 - head_bp) * (1.0 / static_cast<double>(i + 10)) / tail_norm);
  }
  std::vector<std::uint64_t> sld_left = apportion(total, sld_weights);

  std::vector<double> type_weights;
  for (const auto& t : rrtype_targets()) type_weights.push_back(t.second);
  std::vector<std::uint64_t> type_left = apportion(total, type_weights);

  // Greedy fill of the SLD x type matrix; every preference list falls back
  // to any type with mass left, so rows and columns both sum exactly.
  auto preference = [&](const std::string& sld) -> std::vector<K> {
    if (sld == "spotilocal.com") return {K::A};
    if (sld.size() == 6 && sld.ends_with(".de") && !sld.starts_with("site")) {
      return with_others({K::Null, K::TXT});
    }
    if (sld == "ampproject.net") return {K::A, K::AAAA, K::CNAME};
    return with_others({K::A, K::AAAA, K::CNAME, K::MX, K::NS, K::TXT});
  };
  std::vector<std::size_t> order(s.slds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_partition(order.begin(), order.end(), [&](std::size_t i) {
    return preference(s.slds[i]).front() == K::Null || s.slds[i] == "spotilocal.com";
  });
  for (std::size_t i : order) {
    std::vector<K> prefs = preference(s.slds[i]);
    for (K k : concrete_types()) {
      if (std::find(prefs.begin(), prefs.end(), k) == prefs.end()) prefs.push_back(k);
    }
    for (K k : prefs) {
      if (sld_left[i] == 0) break;
      auto& avail = type_left[type_index(k)];
      const std::uint64_t take = std::min(avail, sld_left[i]);
      if (take == 0) continue;
      s.cells.push_back({i, k, take});
      avail -= take;
      sld_left[i] -= take;
    }
  }
}

ShapedGenerator::~ShapedGenerator() = default;
ShapedGenerator::ShapedGenerator(ShapedGenerator&&) noexcept = default;

bool ShapedGenerator::next(PdnsEntry& out) {
  State& s = *state_;
  while (s.cell < s.cells.size() && s.in_cell >= s.cells[s.cell].count) {
    ++s.cell;
    s.in_cell = 0;
  }
  if (s.cell >= s.cells.size()) return false;
  const State::Cell& c = s.cells[s.cell];
  ++s.in_cell;
  const std::string& sld = s.slds[c.sld];
  const std::string id = base36(permute40(s.emitted, s.key), 8);
  const std::uint64_t r = s.rng();
  std::string name;
  switch (s.emitted % 3) {
    case 0: name = id + "." + sld; break;
    case 1: name = id + ".www." + sld; break;
    default: name = id + ".c" + std::to_string(r % 10) + ".edge." + sld; break;
  }
  ++s.emitted;
  out.rrname = Fqdn::parse(name + ".");
  out.domain = Fqdn::parse(sld + ".");
  out.bailiwick = out.domain;
  out.rrclass = "IN";
  out.rrtype = RRType(c.type);
  out.time_seen = Timestamp(s.start + std::chrono::days((r >> 8) % s.days)) + std::chrono::seconds((r >> 24) % 86400);
  out.rdata = rdata_for(c.type, sld, r >> 4);
  return true;
}

}  // namespace pdnsa
