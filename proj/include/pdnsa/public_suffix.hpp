#pragma once

#include <istream>
#include <optional>
#include <string>
#include <unordered_set>

#include "pdnsa/fqdn.hpp"

namespace pdnsa {

/// Public suffix list in the publicsuffix.org text format: one rule per
/// line, `//` comments, `*.` wildcards and `!` exceptions. Names without any
/// matching rule fall back to the implicit `*` rule (the TLD is the suffix).
class PublicSuffixList {
 public:
  static PublicSuffixList load(const std::string& path);
  static PublicSuffixList parse(std::istream& in);

  void add_rule(std::string_view rule);

  /// Number of labels of the public suffix of `name` (>= 1).
  std::size_t suffix_labels(const Fqdn& name) const;
  /// Public suffix plus one label; nullopt when `name` is itself a suffix.
  std::optional<Fqdn> registrable_domain(const Fqdn& name) const;

  std::size_t size() const { return exact_.size() + wildcard_.size() + exception_.size(); }

 private:
  std::unordered_set<std::string> exact_;
  std::unordered_set<std::string> wildcard_;   // parent of "*.parent"
  std::unordered_set<std::string> exception_;  // name after '!'
};

}  // namespace pdnsa
