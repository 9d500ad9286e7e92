#include "pdnsa/tunnelgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "pdnsa/error.hpp"
#include "pdnsa/hashing.hpp"
#include "pdnsa/ingest.hpp"

namespace pdnsa {
namespace {

using K = RRType::Kind;

// Bounded draw that does not depend on the standard library's distribution
// implementations, so corpora are identical across toolchains.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

std::uint64_t between(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + below(rng, hi - lo + 1);
}

enum class Codec { Base32, Hex, Base64Url, Base64, NetBios };

constexpr char kBase32[] = "abcdefghijklmnopqrstuvwxyz234567";
constexpr char kHex[] = "0123456789abcdef";
constexpr char kBase64Url[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
constexpr char kBase64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::size_t bits_per_char(Codec c) {
  switch (c) {
    case Codec::Base32: return 5;
    case Codec::Hex:
    case Codec::NetBios: return 4;
    case Codec::Base64Url:
    case Codec::Base64: return 6;
  }
  return 4;
}

void encode_bits(const std::vector<std::uint8_t>& in, std::size_t bits, const char* alphabet, std::string& out) {
  std::uint32_t acc = 0;
  std::size_t nbits = 0;
  for (std::uint8_t b : in) {
    acc = (acc << 8) | b;
    nbits += 8;
    while (nbits >= bits) {
      nbits -= bits;
      out.push_back(alphabet[(acc >> nbits) & ((1u << bits) - 1)]);
    }
  }
  if (nbits > 0) out.push_back(alphabet[(acc << (bits - nbits)) & ((1u << bits) - 1)]);
}

std::string encode(Codec c, const std::vector<std::uint8_t>& in) {
  std::string out;
  switch (c) {
    case Codec::Base32: encode_bits(in, 5, kBase32, out); break;
    case Codec::Hex: encode_bits(in, 4, kHex, out); break;
    case Codec::Base64Url: encode_bits(in, 6, kBase64Url, out); break;
    case Codec::Base64: encode_bits(in, 6, kBase64, out); break;
    case Codec::NetBios:
      for (std::uint8_t b : in) {
        out.push_back(static_cast<char>('a' + (b >> 4)));
        out.push_back(static_cast<char>('a' + (b & 0xf)));
      }
      break;
  }
  return out;
}

std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> v(n);
  for (std::size_t i = 0; i < n; i += 8) {
    std::uint64_t r = rng();
    for (std::size_t j = i; j < std::min(n, i + 8); ++j, r >>= 8) v[j] = static_cast<std::uint8_t>(r);
  }
  return v;
}

enum class SldPool { Custom, DeProvider, InProvider };

// Query-name layout of one implementation:
//   [prefix.]<data labels>[.<extra labels>].<third>.<sld>
// Data labels are cut right-aligned, so every data label but the leftmost
// has exactly `label_len` bytes.
struct TunnelStyle {
  std::string name;
  Codec codec;
  std::size_t label_len;
  std::size_t max_data_chars;
  std::string header_alphabet;  // one header byte per query when non-empty
  std::string prefix_label;
  bool session_id_labels = false;  // "id-NNNNN.up" between data and third
  std::vector<K> types;            // cycled per query
  std::vector<std::string> markers;
  SldPool pool = SldPool::Custom;
};

const std::vector<TunnelStyle>& styles() {
  static const std::vector<TunnelStyle> kStyles = [] {
    const std::string iodine_header = "0123456789abcdef";
    std::vector<TunnelStyle> v;
    for (auto [suffix, type] : {std::pair{"NULL", K::Null}, {"TXT", K::TXT}, {"SRV", K::SRV}, {"MX", K::MX},
                                {"CNAME", K::CNAME}, {"A", K::A}}) {
      v.push_back({std::string("iodine-") + suffix, Codec::Base32, 63, 230, iodine_header, "", false, {type}, {},
                   SldPool::Custom});
    }
    v.push_back({"dns2tcp", Codec::Base64Url, 48, 150, "", "", false, {K::TXT}, {}, SldPool::Custom});
    v.push_back({"dnscat2", Codec::Hex, 56, 200, "", "dnscat", false, {K::TXT, K::CNAME, K::MX, K::Null},
                 {"dnscat"}, SldPool::Custom});
    v.push_back({"dnscat", Codec::NetBios, 30, 160, "", "", false, {K::CNAME}, {}, SldPool::Custom});
    v.push_back({"OzymanDNS", Codec::Base32, 50, 180, "", "", true, {K::TXT}, {".id-", ".up."}, SldPool::Custom});
    v.push_back({"your-freedom", Codec::Hex, 40, 200, "", "", false, {K::Null}, {}, SldPool::DeProvider});
    v.push_back({"tunnelguru", Codec::Base32, 40, 160, "", "", false, {K::Null}, {}, SldPool::InProvider});
    return v;
  }();
  return kStyles;
}

const TunnelStyle& style_of(const std::string& name) {
  for (const auto& s : styles()) {
    if (s.name == name) return s;
  }
  throw UnknownProfile("unknown tunnel implementation: " + name);
}

const std::vector<std::string>& de_provider_pool() {
  static const std::vector<std::string> kPool{"53r.de", "8u6.de", "1yf.de", "2yf.de"};
  return kPool;
}

const std::vector<std::string>& in_provider_pool() {
  static const std::vector<std::string> kPool{"qv4.in", "mm4.in", "na2.in"};
  return kPool;
}

std::size_t extra_labels_length(const TunnelStyle& s) {
  // ".id-NNNNN.up"
  return s.session_id_labels ? 12 : 0;
}

// Largest data-character count whose name fits in the 253-byte bound.
std::size_t data_chars_capacity(const TunnelStyle& s, std::size_t suffix_len) {
  const std::size_t fixed =
      (s.prefix_label.empty() ? 0 : s.prefix_label.size() + 1) + extra_labels_length(s) + 1 + suffix_len;
  for (std::size_t d = s.max_data_chars; d > 0; --d) {
    const std::size_t labels = (d + s.label_len - 1) / s.label_len;
    if (fixed + d + labels - 1 <= kMaxNameLength) return d;
  }
  return 0;
}

std::size_t capacity_bytes(const TunnelStyle& s, std::size_t suffix_len) {
  const std::size_t d = data_chars_capacity(s, suffix_len);
  const std::size_t header = s.header_alphabet.empty() ? 0 : 1;
  if (d <= header) return 0;
  return (d - header) * bits_per_char(s.codec) / 8;
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

// Bijection on [0, 2^bits): distinct counters give distinct identifiers.
std::uint64_t permute(std::uint64_t x, std::uint64_t key, unsigned bits) {
  const std::uint64_t mask = (bits == 64) ? ~0ULL : ((1ULL << bits) - 1);
  x = (x ^ key) & mask;
  x = (x * 0x9E3779B97F4A7C15ULL) & mask;
  x ^= x >> (bits / 2);
  x = (x * 0xD6E8FEB86659FD93ULL) & mask;
  x ^= x >> (bits / 3);
  x = (x + (key >> 7)) & mask;
  return x;
}

std::string random_ip(std::mt19937_64& rng, bool private_range) {
  const auto r = rng();
  std::string ip = private_range ? "10" : std::to_string(1 + (r & 0x7f) + ((r >> 7) & 1) * 100);
  for (int i = 1; i < 4; ++i) ip += '.' + std::to_string((r >> (8 * i)) & 0xff);
  return ip;
}

Timestamp random_time(std::mt19937_64& rng, Day day) {
  return Timestamp(day) + std::chrono::seconds(below(rng, 86400));
}

PdnsEntry make_entry(const std::string& name, const std::string& sld, RRType type, Timestamp t,
                     std::vector<std::string> rdata) {
  PdnsEntry e;
  e.rrname = Fqdn::parse(name + ".");
  e.domain = Fqdn::parse(sld + ".");
  e.bailiwick = e.domain;
  e.time_seen = t;
  e.rrtype = type;
  e.rdata = std::move(rdata);
  return e;
}

std::vector<std::string> txt_chunks(std::string text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); i += 255) out.push_back(text.substr(i, 255));
  if (out.empty()) out.emplace_back();
  return out;
}

// Downstream payload sizes: a mix that reaches all three rdata size classes.
std::size_t downstream_bytes(std::mt19937_64& rng) {
  const auto bucket = below(rng, 10);
  if (bucket < 2) return between(rng, 8, 44);
  if (bucket < 8) return between(rng, 50, 490);
  return between(rng, 500, 900);
}

std::vector<std::string> tunnel_rdata(std::mt19937_64& rng, RRType type, const std::string& third,
                                      const std::string& sld) {
  const auto reply_name = [&] {
    return encode(Codec::Base32, random_bytes(rng, between(rng, 10, 30))) + "." + third + "." + sld + ".";
  };
  switch (type.kind()) {
    case K::Null: return {encode(Codec::Hex, random_bytes(rng, downstream_bytes(rng)))};
    case K::TXT: return txt_chunks(encode(Codec::Base64, random_bytes(rng, downstream_bytes(rng))));
    case K::CNAME: return {reply_name()};
    case K::MX: return {"10 " + reply_name()};
    case K::SRV: return {"0 0 53 " + reply_name()};
    case K::A: {
      std::vector<std::string> ips;
      const auto n = between(rng, 1, 4);
      for (std::uint64_t i = 0; i < n; ++i) ips.push_back(random_ip(rng, true));
      return ips;
    }
    default: return {};
  }
}

}  // namespace

const std::vector<std::string>& implementation_names() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> v;
    for (const auto& s : styles()) v.push_back(s.name);
    return v;
  }();
  return kNames;
}

std::string_view to_string(BenignClass c) {
  switch (c) {
    case BenignClass::PlainA: return "plain-A";
    case BenignClass::CdnLike: return "cdn-like";
    case BenignClass::SpfTxt: return "spf-txt";
    case BenignClass::DkimTxt: return "dkim-txt";
    case BenignClass::RdnsArpa: return "rdns-arpa";
    case BenignClass::LocalhostStyle: return "localhost-style";
  }
  return "?";
}

std::optional<BenignClass> parse_benign_class(std::string_view s) {
  for (std::size_t i = 0; i < kBenignClassCount; ++i) {
    const auto c = static_cast<BenignClass>(i);
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Label::Kind k) { return k == Label::Kind::Tunnel ? "tunnel" : "benign"; }

std::size_t query_capacity(const std::string& profile, const std::string& third, const std::string& sld) {
  return capacity_bytes(style_of(profile), third.size() + 1 + sld.size());
}

std::vector<std::string> implementation_markers(const std::string& profile) { return style_of(profile).markers; }

void GenConfig::validate() const {
  if (days < 1) throw ConfigError("generator needs at least one day");
  for (const auto& t : tunnels) {
    style_of(t.profile);
    if (t.payload_bytes < 1) throw ConfigError("tunnel payload must be >= 1 byte");
    if (t.queries && *t.queries < 1) throw ConfigError("tunnel queries must be >= 1");
    Fqdn::parse(t.third + "." + t.sld);
    const std::size_t cap = query_capacity(t.profile, t.third, t.sld);
    if (cap == 0) throw ConfigError("SLD too long for tunnel queries: " + t.sld);
    if (t.queries && (t.payload_bytes + *t.queries - 1) / *t.queries > cap) {
      throw ConfigError("payload does not fit in " + std::to_string(*t.queries) + " queries for " + t.sld);
    }
  }
  for (const auto& b : background) {
    if (b.queries < 1) throw ConfigError("background queries must be >= 1");
    Fqdn::parse(b.sld);
  }
}

struct Generator::State {
  GenConfig config;
  std::size_t job = 0;       // tunnels first, then background
  std::size_t emitted = 0;   // within the current job
  std::size_t job_queries = 0;
  std::mt19937_64 rng;
  // Tunnel job
  std::size_t chunk_base = 0, chunk_extra = 0;
  std::size_t burst_start = 0, burst_len = 1;
  std::string session_id;
  // Background job
  std::uint64_t name_key = 0;

  std::size_t job_count() const { return config.tunnels.size() + config.background.size(); }

  void start_job() {
    emitted = 0;
    rng.seed(mix64(config.seed * 0x9E3779B97F4A7C15ULL + job + 1));
    if (job < config.tunnels.size()) {
      const auto& t = config.tunnels[job];
      const std::size_t cap = query_capacity(t.profile, t.third, t.sld);
      job_queries = t.queries ? *t.queries : (t.payload_bytes + cap - 1) / cap;
      chunk_base = t.payload_bytes / job_queries;
      chunk_extra = t.payload_bytes % job_queries;
      burst_start = below(rng, config.days);
      burst_len = std::min<std::size_t>(1 + below(rng, 3), config.days - burst_start);
      session_id = "id-";
      for (int i = 0; i < 5; ++i) session_id.push_back(static_cast<char>('2' + below(rng, 6)));
    } else {
      job_queries = config.background[job - config.tunnels.size()].queries;
      name_key = rng();
    }
  }

  Day tunnel_day(const TunnelSpec& t, std::size_t i) {
    if (t.every_day) return config.start + std::chrono::days(i % config.days);
    return config.start + std::chrono::days(burst_start + below(rng, burst_len));
  }

  LabeledEntry tunnel_query(const TunnelSpec& t, std::size_t i) {
    const TunnelStyle& s = style_of(t.profile);
    const std::size_t bytes = chunk_base + (i < chunk_extra ? 1 : 0);
    std::string data;
    if (!s.header_alphabet.empty()) data.push_back(s.header_alphabet[below(rng, s.header_alphabet.size())]);
    data += encode(s.codec, random_bytes(rng, std::max<std::size_t>(bytes, 1)));

    std::string name;
    if (!s.prefix_label.empty()) name = s.prefix_label + ".";
    const std::size_t n_labels = (data.size() + s.label_len - 1) / s.label_len;
    std::size_t pos = 0;
    for (std::size_t l = 0; l < n_labels; ++l) {
      const std::size_t len = l == 0 ? data.size() - (n_labels - 1) * s.label_len : s.label_len;
      if (l) name.push_back('.');
      name.append(data, pos, len);
      pos += len;
    }
    if (s.session_id_labels) name += "." + session_id + ".up";
    name += "." + t.third + "." + t.sld;

    const RRType type = t.rrtype ? *t.rrtype : RRType(s.types[i % s.types.size()]);
    const Timestamp ts = random_time(rng, tunnel_day(t, i));
    LabeledEntry out;
    out.entry = make_entry(name, t.sld, type, ts, tunnel_rdata(rng, type, t.third, t.sld));
    out.label = {Label::Kind::Tunnel, t.profile};
    return out;
  }

  LabeledEntry background_query(const BackgroundSpec& b, std::size_t i) {
    static const char* kHosts[] = {"www", "mail", "shop", "api", "img", "m", "blog", "static"};
    static const char* kSelectors[] = {"selector1", "google", "k1", "s2048", "mx"};
    const std::string id = base36(permute(i, name_key, 40), 8);
    const Timestamp ts = random_time(rng, config.start + std::chrono::days(below(rng, config.days)));
    const std::string& S = b.sld;
    std::string name;
    RRType type(K::A);
    std::vector<std::string> rdata;
    switch (b.cls) {
      case BenignClass::PlainA:
        name = std::string(kHosts[i % 8]) + "-" + id + "." + S;
        rdata = {random_ip(rng, false)};
        break;
      case BenignClass::CdnLike:
        name = id + ".edge." + S;
        type = K::CNAME;
        rdata = {"e" + base36(rng() & 0xffffff, 5) + ".cdn-provider.net."};
        break;
      case BenignClass::SpfTxt:
        type = K::TXT;
        if (i % 4 == 3) {
          name = "_spf." + id + ".mail." + S;
        } else {
          name = "mx" + std::to_string(i % 7) + "." + id + ".mail." + S;
        }
        rdata = {"v=spf1 ip4:" + random_ip(rng, false) + "/24 include:_spf." + S + " ~all"};
        break;
      case BenignClass::DkimTxt:
        type = K::TXT;
        if (i % 3 == 2) {
          name = "_dmarc." + id + "." + S;
          rdata = {"v=DMARC1; p=none; rua=mailto:dmarc@" + S};
        } else {
          name = std::string(kSelectors[i % 5]) + id + "._domainkey." + S;
          rdata = {"v=DKIM1; k=rsa; p=" + encode(Codec::Base64, random_bytes(rng, 162))};
        }
        break;
      case BenignClass::RdnsArpa: {
        const std::uint64_t ip = permute(i, name_key, 32);
        name = std::to_string(ip & 0xff) + "." + std::to_string((ip >> 8) & 0xff) + "." +
               std::to_string((ip >> 16) & 0xff) + "." + std::to_string(ip >> 24) + "." + S;
        if (i % 10 == 9) {
          type = K::TXT;
          rdata = {"customer link " + id};
        } else {
          type = K::PTR;
          rdata = {"host-" + id + ".isp.example."};
        }
        break;
      }
      case BenignClass::LocalhostStyle:
        name = id + base36(rng() % 1296, 2) + "." + S;
        rdata = {"127.0.0.1"};
        break;
    }
    LabeledEntry out;
    out.entry = make_entry(name, S, type, ts, std::move(rdata));
    out.label = {Label::Kind::Benign, std::string(to_string(b.cls))};
    return out;
  }
};

Generator::Generator(GenConfig config) : state_(std::make_unique<State>()) {
  config.validate();
  state_->config = std::move(config);
  if (state_->job_count() > 0) state_->start_job();
}

Generator::~Generator() = default;
Generator::Generator(Generator&&) noexcept = default;

bool Generator::next(LabeledEntry& out) {
  State& s = *state_;
  while (s.job < s.job_count()) {
    if (s.emitted < s.job_queries) {
      const std::size_t i = s.emitted++;
      if (s.job < s.config.tunnels.size()) {
        out = s.tunnel_query(s.config.tunnels[s.job], i);
      } else {
        out = s.background_query(s.config.background[s.job - s.config.tunnels.size()], i);
      }
      return true;
    }
    if (++s.job < s.job_count()) s.start_job();
  }
  return false;
}

std::vector<LabeledEntry> generate(const GenConfig& config) {
  Generator g(config);
  std::vector<LabeledEntry> out;
  LabeledEntry e;
  while (g.next(e)) out.push_back(std::move(e));
  return out;
}

CorpusWriter::CorpusWriter(const std::string& corpus_path, const std::string& labels_path)
    : corpus_(corpus_path), labels_(labels_path) {
  labels_.write_line("rrname,kind,class");
}

void CorpusWriter::add(const LabeledEntry& e) {
  corpus_.write_line(to_ndjson(e.entry));
  ++entries_;
  if (labeled_.insert(e.entry.rrname.dotted()).second) {
    std::string line = e.entry.rrname.dotted();
    line += ',';
    line += to_string(e.label.kind);
    line += ',';
    line += e.label.cls;
    labels_.write_line(line);
  }
}

void CorpusWriter::close() {
  corpus_.close();
  labels_.close();
}

void write_corpus(const std::vector<LabeledEntry>& entries, const std::string& corpus_path,
                  const std::string& labels_path) {
  CorpusWriter w(corpus_path, labels_path);
  for (const auto& e : entries) w.add(e);
  w.close();
}

std::vector<std::pair<std::string, Label>> read_labels(const std::string& path) {
  LineReader in(path);
  std::vector<std::pair<std::string, Label>> out;
  std::string line;
  bool header = true;
  while (in.next(line)) {
    if (header) {
      header = false;
      if (line == "rrname,kind,class") continue;
    }
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError("malformed labels line: " + line);
    Label l;
    const std::string kind = line.substr(c1 + 1, c2 - c1 - 1);
    if (kind == "tunnel") {
      l.kind = Label::Kind::Tunnel;
    } else if (kind == "benign") {
      l.kind = Label::Kind::Benign;
    } else {
      throw ConfigError("unknown label kind: " + kind);
    }
    l.cls = line.substr(c2 + 1);
    out.emplace_back(line.substr(0, c1), std::move(l));
  }
  return out;
}

namespace {

const char* kSldWords[] = {"relay", "tun", "sync", "proxy", "update", "feed", "cloud", "gate", "pipe", "node"};
const char* kTlds[] = {"com", "net", "org", "io", "nl", "info"};
const char* kThirds[] = {"t", "i", "tunz", "ns", "d", "dns"};

std::string random_sld(std::mt19937_64& rng) {
  return std::string(kSldWords[below(rng, 10)]) + base36(below(rng, 36ULL * 36 * 36 * 36), 4) + "." +
         kTlds[below(rng, 6)];
}

// Sessions for one implementation until `target` queries are covered.
void add_sessions(std::vector<TunnelSpec>& out, const std::string& impl, std::size_t target, std::mt19937_64& rng,
                  std::size_t min_payload, std::size_t max_payload) {
  const TunnelStyle& s = style_of(impl);
  std::size_t covered = 0;
  while (covered < target) {
    TunnelSpec t;
    t.profile = impl;
    t.third = kThirds[below(rng, 6)];
    switch (s.pool) {
      case SldPool::DeProvider: t.sld = de_provider_pool()[below(rng, de_provider_pool().size())]; break;
      case SldPool::InProvider: t.sld = in_provider_pool()[below(rng, in_provider_pool().size())]; break;
      case SldPool::Custom: t.sld = random_sld(rng); break;
    }
    t.payload_bytes = between(rng, min_payload, max_payload);
    const std::size_t cap = query_capacity(impl, t.third, t.sld);
    covered += (t.payload_bytes + cap - 1) / cap;
    out.push_back(std::move(t));
  }
}

}  // namespace

GenConfig classifier_corpus(std::uint64_t seed, std::size_t per_profile) {
  GenConfig c;
  c.seed = seed;
  c.days = 7;
  std::mt19937_64 rng(mix64(seed ^ 0xc1a55));
  for (const auto& name : implementation_names()) add_sessions(c.tunnels, name, per_profile, rng, 2048, 32768);
  return c;
}

GenConfig mixed_corpus(std::uint64_t seed, std::size_t tunnels, std::size_t benign_per_class, std::size_t days) {
  GenConfig c;
  c.seed = seed;
  c.days = days;
  std::mt19937_64 rng(mix64(seed ^ 0x313ed));
  struct Planted {
    const char* profile;
    std::optional<K> type;
  };
  // Tunnel implementations whose traffic the default prefilter keeps.
  const Planted kPlanted[] = {{"iodine-NULL", std::nullopt}, {"iodine-TXT", std::nullopt},
                              {"dns2tcp", std::nullopt},     {"OzymanDNS", std::nullopt},
                              {"dnscat2", K::TXT},           {"dnscat2", K::Null}};
  std::unordered_set<std::string> used;
  auto fresh_sld = [&] {
    std::string s;
    do {
      s = random_sld(rng);
    } while (!used.insert(s).second);
    return s;
  };
  for (std::size_t i = 0; i < tunnels; ++i) {
    const Planted& p = kPlanted[i % 6];
    TunnelSpec t;
    t.profile = p.profile;
    t.sld = fresh_sld();
    t.third = kThirds[below(rng, 6)];
    if (p.type) t.rrtype = RRType(*p.type);
    t.payload_bytes = between(rng, 1024, 16384);
    c.tunnels.push_back(std::move(t));
  }
  static const char* kBenignWords[] = {"shop", "news", "media", "bank", "travel", "games", "mail", "static"};
  for (std::size_t k = 0; k < kBenignClassCount; ++k) {
    const auto cls = static_cast<BenignClass>(k);
    for (std::size_t i = 0; i < benign_per_class; ++i) {
      BackgroundSpec b;
      b.cls = cls;
      if (cls == BenignClass::RdnsArpa) {
        b.sld = i % 2 ? "in-addr.arpa" : "ip6.arpa";
      } else {
        std::string s;
        do {
          s = std::string(kBenignWords[below(rng, 8)]) + base36(below(rng, 46656), 3) + "." + kTlds[below(rng, 6)];
        } while (!used.insert(s).second);
        b.sld = s;
      }
      b.queries = between(rng, 20, 200);
      c.background.push_back(std::move(b));
    }
  }
  return c;
}

GenConfig provider_corpus(std::uint64_t seed, std::size_t days) {
  GenConfig c;
  c.seed = seed;
  c.days = days;
  std::mt19937_64 rng(mix64(seed ^ 0x9e0));
  for (const auto& sld : de_provider_pool()) {
    for (int s = 0; s < 6; ++s) {
      TunnelSpec t;
      t.profile = "your-freedom";
      t.sld = sld;
      t.third = kThirds[below(rng, 6)];
      t.payload_bytes = between(rng, 20000, 60000);
      t.every_day = s == 0;
      c.tunnels.push_back(std::move(t));
    }
  }
  for (const auto& sld : in_provider_pool()) {
    for (int s = 0; s < 3; ++s) {
      TunnelSpec t;
      t.profile = "tunnelguru";
      t.sld = sld;
      t.third = kThirds[below(rng, 6)];
      t.payload_bytes = between(rng, 10000, 30000);
      c.tunnels.push_back(std::move(t));
    }
  }
  for (int i = 0; i < 3; ++i) {
    TunnelSpec t;
    t.profile = "iodine-NULL";
    t.sld = random_sld(rng);
    t.third = "t";
    t.payload_bytes = between(rng, 1000, 4000);
    c.tunnels.push_back(std::move(t));
  }
  const GenConfig bg = mixed_corpus(seed, 0, 3, days);
  c.background = bg.background;
  return c;
}

ProfileSet derive_profiles(std::uint64_t seed, std::size_t samples_per_profile) {
  std::vector<std::string> vocabulary;
  for (const auto& s : styles()) {
    for (const auto& m : s.markers) vocabulary.push_back(m);
  }
  std::sort(vocabulary.begin(), vocabulary.end());
  vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());

  std::vector<ImplementationProfile> out;
  std::mt19937_64 rng(mix64(seed ^ 0xde1));
  for (const auto& s : styles()) {
    GenConfig c;
    c.seed = mix64(seed + out.size());
    add_sessions(c.tunnels, s.name, samples_per_profile, rng, 2048, 32768);
    ProfileBuilder builder(s.name);
    Generator g(c);
    LabeledEntry e;
    while (g.next(e)) builder.add(extract_attributes(e.entry, vocabulary));
    ImplementationProfile p = builder.build(s.markers);
    if (s.pool == SldPool::DeProvider) p.provider_sld = "???.de";
    if (s.pool == SldPool::InProvider) p.provider_sld = "???.in";
    if (p.provider_sld) p.provider_min_digits = 1;
    out.push_back(std::move(p));
  }
  return ProfileSet(std::move(out));
}

std::vector<std::uint64_t> apportion(std::uint64_t total, const std::vector<double>& weights) {
  std::vector<std::uint64_t> out(weights.size(), 0);
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (weights.empty() || sum <= 0.0) return out;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::uint64_t>(std::floor(exact));
    assigned += out[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++out[remainders[k % remainders.size()].second];
  return out;
}

}  // namespace pdnsa
