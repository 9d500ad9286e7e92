#include "pdnsa/public_suffix.hpp"

#include <fstream>

#include "pdnsa/error.hpp"

namespace pdnsa {
namespace {

std::string lower_trimmed(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  auto end = s.find_first_of(" \t\r");
  s = s.substr(0, end);
  if (!s.empty() && s.back() == '.') s.remove_suffix(1);
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

PublicSuffixList PublicSuffixList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open public suffix list: " + path);
  return parse(in);
}

PublicSuffixList PublicSuffixList::parse(std::istream& in) {
  PublicSuffixList psl;
  std::string line;
  while (std::getline(in, line)) psl.add_rule(line);
  return psl;
}

void PublicSuffixList::add_rule(std::string_view raw) {
  std::string rule = lower_trimmed(raw);
  if (rule.empty() || rule.starts_with("//")) return;
  if (rule.front() == '!') {
    exception_.insert(rule.substr(1));
  } else if (rule.starts_with("*.")) {
    wildcard_.insert(rule.substr(2));
  } else {
    exact_.insert(rule);
  }
}

std::size_t PublicSuffixList::suffix_labels(const Fqdn& name) const {
  const std::string& d = name.dotted();
  // Walk candidate suffixes from longest to shortest; the first hit is the
  // longest matching rule, and exceptions are checked before plain rules.
  std::size_t pos = 0;
  for (std::size_t labels = name.level(); labels >= 1; --labels) {
    std::string_view candidate(d.data() + pos, d.size() - pos);
    auto dot = candidate.find('.');
    std::string_view parent = dot == std::string_view::npos ? std::string_view{} : candidate.substr(dot + 1);
    if (exception_.contains(std::string(candidate))) return labels - 1;
    if (exact_.contains(std::string(candidate))) return labels;
    if (!parent.empty() && wildcard_.contains(std::string(parent))) return labels;
    if (dot == std::string_view::npos) break;
    pos += dot + 1;
  }
  return 1;
}

std::optional<Fqdn> PublicSuffixList::registrable_domain(const Fqdn& name) const {
  const std::size_t suffix = suffix_labels(name);
  if (suffix >= name.level()) return std::nullopt;
  return name.suffix(suffix + 1);
}

}  // namespace pdnsa
