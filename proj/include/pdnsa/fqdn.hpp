#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pdnsa/error.hpp"

namespace pdnsa {

inline constexpr std::size_t kMaxLabelLength = 63;
/// Dotted form without the trailing root dot.
inline constexpr std::size_t kMaxNameLength = 253;

enum class NameErrorKind : std::uint8_t {
  EmptyName,     // "" or "."
  EmptyLabel,    // consecutive dots, leading dot
  LabelTooLong,  // label > 63 bytes
  NameTooLong,   // dotted form > 253 bytes
};

std::string_view to_string(NameErrorKind kind);

class NameError : public Error {
 public:
  NameError(NameErrorKind kind, std::string_view raw);
  NameErrorKind kind() const { return kind_; }

 private:
  NameErrorKind kind_;
};

/// A normalized hostname.
///
/// Normalization strips one trailing root dot and folds ASCII letters to
/// lowercase; every other byte (including non-ASCII) is kept as is.  The
/// original text is preserved in `raw()` because tunnel fingerprints look at
/// letter case.
///
/// Levels count from the right with the TLD as level 1, so
/// `www.example.com` has level 3 and `label_at_level(3) == "www"`.
class Fqdn {
 public:
  Fqdn() = default;

  static Fqdn parse(std::string_view raw);  // throws NameError
  static std::variant<Fqdn, NameErrorKind> try_parse(std::string_view raw);

  /// Builds a name from already-normalized labels; used for suffixes.
  static Fqdn from_normalized(std::string_view dotted);

  std::size_t level() const { return level_; }

  /// Leftmost first.
  std::vector<std::string_view> labels() const;
  /// Index 0 is the leftmost label.
  std::string_view label(std::size_t index) const;
  /// Level 1 is the TLD; empty string_view past the top.
  std::string_view label_at_level(std::size_t level_index) const;
  std::string_view tld() const { return label_at_level(1); }

  /// Normalized dotted form without trailing dot ("www.foo.com").
  const std::string& dotted() const { return name_; }
  /// Normalized form with trailing root dot ("www.foo.com.").
  std::string canonical() const { return name_ + '.'; }
  const std::string& raw() const { return raw_; }

  /// The rightmost `n` labels (the whole name when n >= level()).
  Fqdn suffix(std::size_t n) const;
  /// True when `parent` equals this name or is a label-aligned suffix of it.
  bool is_subdomain_of(const Fqdn& parent) const;

  friend bool operator==(const Fqdn& a, const Fqdn& b) { return a.name_ == b.name_; }

 private:
  std::string raw_;
  std::string name_;
  std::uint16_t level_ = 0;
};

/// Byte length of the label at `level_index` (TLD = 1), absent above the top.
std::optional<std::size_t> label_length(const Fqdn& name, std::size_t level_index);

inline std::size_t level(const Fqdn& name) { return name.level(); }

inline Fqdn parse_fqdn(std::string_view raw) { return Fqdn::parse(raw); }

}  // namespace pdnsa
