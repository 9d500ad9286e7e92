#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pdnsa/error.hpp"
#include "pdnsa/fingerprint.hpp"

namespace pdnsa {
namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t parse_count(const std::string& s, std::size_t line_no) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError("profile line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

Range parse_range(const std::string& s, std::size_t line_no) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const std::size_t v = parse_count(s, line_no);
    return {v, v};
  }
  return {parse_count(s.substr(0, dots), line_no), parse_count(s.substr(dots + 2), line_no)};
}

std::string range_text(const Range& r) { return std::to_string(r.lo) + ".." + std::to_string(r.hi); }

}  // namespace

ProfileSet::ProfileSet(std::vector<ImplementationProfile> profiles) : profiles_(std::move(profiles)) {
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    const auto& p = profiles_[i];
    if (p.name.empty() || p.name == kUnknown) throw ConfigError("invalid profile name '" + p.name + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (profiles_[j].name == p.name) throw ConfigError("duplicate profile name " + p.name);
    }
    for (const Range* r : {&p.payload_length, &p.level, &p.len_l4, &p.len_l5}) {
      if (r->lo > r->hi) throw ConfigError("empty range in profile " + p.name);
    }
    for (const auto& m : p.markers) {
      if (m.empty()) throw ConfigError("empty marker in profile " + p.name);
      if (std::find(vocabulary_.begin(), vocabulary_.end(), m) == vocabulary_.end()) vocabulary_.push_back(m);
    }
  }
  std::sort(vocabulary_.begin(), vocabulary_.end());
}

ProfileSet ProfileSet::parse(std::istream& in) {
  std::vector<ImplementationProfile> out;
  std::optional<ImplementationProfile> cur;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> ConfigError {
    return ConfigError("profile line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    if (key == "profile") {
      if (cur) throw fail("nested profile block");
      if (tok.size() != 2) throw fail("expected 'profile NAME'");
      cur.emplace();
      cur->name = tok[1];
      continue;
    }
    if (!cur) throw fail("'" + key + "' outside a profile block");
    if (key == "end") {
      out.push_back(std::move(*cur));
      cur.reset();
      continue;
    }
    if (tok.size() < 2) throw fail("'" + key + "' needs a value");
    if (key == "payload_length") {
      cur->payload_length = parse_range(tok[1], line_no);
    } else if (key == "level") {
      cur->level = parse_range(tok[1], line_no);
    } else if (key == "len_l4") {
      cur->len_l4 = parse_range(tok[1], line_no);
    } else if (key == "len_l5") {
      cur->len_l5 = parse_range(tok[1], line_no);
    } else if (key == "rrtypes") {
      for (std::size_t i = 1; i < tok.size(); ++i) cur->rrtypes.insert(RRType::parse(tok[i]));
    } else if (key == "encodings") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        auto e = parse_encoding(tok[i]);
        if (!e) throw fail("unknown encoding '" + tok[i] + "'");
        cur->encodings.insert(*e);
      }
    } else if (key == "leading") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        auto c = parse_char_class(tok[i]);
        if (!c) throw fail("unknown character class '" + tok[i] + "'");
        cur->leading.insert(*c);
      }
    } else if (key == "markers") {
      for (std::size_t i = 1; i < tok.size(); ++i) cur->markers.push_back(tok[i]);
      std::sort(cur->markers.begin(), cur->markers.end());
    } else if (key == "provider_sld") {
      cur->provider_sld = tok[1];
    } else if (key == "provider_min_digits") {
      cur->provider_min_digits = parse_count(tok[1], line_no);
    } else {
      throw fail("unknown key '" + key + "'");
    }
  }
  if (cur) throw ConfigError("profile " + cur->name + " is missing 'end'");
  return ProfileSet(std::move(out));
}

ProfileSet ProfileSet::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open profile file: " + path);
  return parse(f);
}

std::string ProfileSet::default_path() {
  if (const char* env = std::getenv("PDNSA_PROFILES"); env && *env) return env;
  return std::string(PDNSA_DATA_DIR) + "/profiles.txt";
}

std::string ProfileSet::to_text() const {
  std::ostringstream out;
  for (const auto& p : profiles_) {
    out << "profile " << p.name << '\n';
    out << "  payload_length " << range_text(p.payload_length) << '\n';
    out << "  level " << range_text(p.level) << '\n';
    out << "  len_l4 " << range_text(p.len_l4) << '\n';
    out << "  len_l5 " << range_text(p.len_l5) << '\n';
    out << "  rrtypes";
    for (const auto& t : p.rrtypes) out << ' ' << t.to_string();
    out << "\n  encodings";
    for (auto e : p.encodings) out << ' ' << to_string(e);
    out << "\n  leading";
    for (auto c : p.leading) out << ' ' << to_string(c);
    out << '\n';
    if (!p.markers.empty()) {
      out << "  markers";
      for (const auto& m : p.markers) out << ' ' << m;
      out << '\n';
    }
    if (p.provider_sld) out << "  provider_sld " << *p.provider_sld << '\n';
    if (p.provider_min_digits) out << "  provider_min_digits " << p.provider_min_digits << '\n';
    out << "end\n";
  }
  return out.str();
}

const ImplementationProfile& ProfileSet::at(std::string_view name) const {
  if (auto i = index_of(name)) return profiles_[*i];
  throw UnknownProfile("unknown implementation profile: " + std::string(name));
}

std::optional<std::size_t> ProfileSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    if (profiles_[i].name == name) return i;
  }
  return std::nullopt;
}

}  // namespace pdnsa
