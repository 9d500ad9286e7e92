#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pdnsa/entry.hpp"

namespace pdnsa {

enum class Encoding : std::uint8_t { Hex, Base32, Base64Like, None };
enum class CharClass : std::uint8_t { Digit, Letter, Other };

std::string_view to_string(Encoding e);
std::string_view to_string(CharClass c);
std::optional<Encoding> parse_encoding(std::string_view s);
std::optional<CharClass> parse_char_class(std::string_view s);

inline constexpr double kDefaultEncodingRatio = 0.95;
inline constexpr std::size_t kDefaultMatchThreshold = 6;
inline constexpr std::size_t kAttributeCount = 8;

/// Classifies the alphabet of `text`.
///
/// Hex and base32 are tested on the ASCII-lowercased text: at least `ratio`
/// of its alphanumeric bytes must fall in the alphabet, and the text must
/// contain both a letter and a digit (plain words like "www" otherwise pass
/// as base32). Base64-like needs a charset within alphanumerics plus
/// `+/-_=`, letters and digits both present, and either mixed case or at
/// least two of `-_+/`.
Encoding detect_encoding(std::string_view text, double ratio = kDefaultEncodingRatio);

CharClass char_class(unsigned char c);

struct AttributeVector {
  /// Bytes left of the third-level label (levels >= 4, dots between them).
  std::size_t a1_payload_length = 0;
  std::size_t a2_level = 0;
  std::optional<std::size_t> a3_len_l4;
  std::optional<std::size_t> a4_len_l5;
  RRType a5_rrtype;
  Encoding a6_encoding = Encoding::None;
  CharClass a7_leading = CharClass::Other;
  /// Markers from the vocabulary found in the name, sorted.
  std::vector<std::string> a8_markers;
};

/// `markers` is the vocabulary to look for; a marker matches anywhere in
/// "." + normalized rrname + ".", so ".up." finds a whole label.
AttributeVector extract_attributes(const PdnsEntry& entry, const std::vector<std::string>& markers = {},
                                   double encoding_ratio = kDefaultEncodingRatio);

struct Range {
  std::size_t lo = 0;
  std::size_t hi = 0;
  bool contains(std::size_t v) const { return lo <= v && v <= hi; }
  friend bool operator==(const Range&, const Range&) = default;
};

struct ImplementationProfile {
  std::string name;
  Range payload_length;
  Range level;
  Range len_l4;
  Range len_l5;
  std::set<RRType> rrtypes;
  std::set<Encoding> encodings;
  std::set<CharClass> leading;
  std::vector<std::string> markers;
  /// SLD glob; `?` stands for one [a-z0-9] byte, other bytes are literal.
  std::optional<std::string> provider_sld;
  /// Minimum digits in the SLD's first label for the provider rule to fire.
  std::size_t provider_min_digits = 0;

  bool provider_matches(const Fqdn& sld) const;
  friend bool operator==(const ImplementationProfile&, const ImplementationProfile&) = default;
};

/// Ordered profile collection; order is the tie-break order.
class ProfileSet {
 public:
  ProfileSet() = default;
  explicit ProfileSet(std::vector<ImplementationProfile> profiles);  // throws ConfigError

  static ProfileSet parse(std::istream& in);       // throws ConfigError
  static ProfileSet load(const std::string& path);  // throws IoError, ConfigError
  /// The profile file shipped in data/, or $PDNSA_PROFILES when set.
  static std::string default_path();

  std::string to_text() const;

  const std::vector<ImplementationProfile>& profiles() const { return profiles_; }
  const std::vector<std::string>& marker_vocabulary() const { return vocabulary_; }
  std::size_t size() const { return profiles_.size(); }
  bool empty() const { return profiles_.empty(); }
  const ImplementationProfile& at(std::string_view name) const;  // throws UnknownProfile
  std::optional<std::size_t> index_of(std::string_view name) const;

 private:
  std::vector<ImplementationProfile> profiles_;
  std::vector<std::string> vocabulary_;
};

inline constexpr std::string_view kUnknown = "unknown";

struct Attribution {
  std::string implementation{kUnknown};
  std::size_t match_count = 0;
  /// a1..a8 results against the reported (or best-scoring) profile.
  std::array<bool, kAttributeCount> per_attribute{};
  /// Every profile sharing the winning count, in profile order.
  std::vector<std::string> tied;
  /// Attributed by the provider SLD rule rather than by attribute votes.
  bool via_provider_rule = false;

  bool known() const { return implementation != kUnknown; }
};

Attribution match_profile(const AttributeVector& attrs, const ImplementationProfile& profile,
                          const std::vector<std::string>& vocabulary);

struct ClassifierOptions {
  std::size_t threshold = kDefaultMatchThreshold;
  double encoding_ratio = kDefaultEncodingRatio;
};

class Classifier {
 public:
  explicit Classifier(ProfileSet profiles, ClassifierOptions options = {});  // throws ConfigError when empty

  Attribution classify(const PdnsEntry& entry, const Fqdn& sld) const;
  Attribution classify(const PdnsEntry& entry) const;
  Attribution classify_attributes(const AttributeVector& attrs) const;

  const ProfileSet& profiles() const { return profiles_; }
  const ClassifierOptions& options() const { return options_; }

 private:
  ProfileSet profiles_;
  ClassifierOptions options_;
};

/// Majority vote over one SLD's entries.
struct SldAttribution {
  std::string implementation{kUnknown};
  /// Winning votes over all entries, unknowns included in the denominator.
  double fraction = 0.0;
  std::uint64_t entries = 0;
  std::uint64_t unknown = 0;
  std::vector<std::string> tied;
};

/// Accumulates per-entry attributions for one SLD.
class SldVote {
 public:
  void add(const Attribution& a);
  void merge(const SldVote& other);
  /// `order` lists implementation names in tie-break order.
  SldAttribution result(const std::vector<std::string>& order) const;
  std::uint64_t entries() const { return entries_; }
  const std::map<std::string, std::uint64_t>& votes() const { return votes_; }

 private:
  std::map<std::string, std::uint64_t> votes_;
  std::uint64_t entries_ = 0;
  std::uint64_t unknown_ = 0;
};

SldAttribution attribute_sld(const std::vector<PdnsEntry>& entries, const Classifier& classifier);

/// Truth x predicted counts over a labeled corpus.
class ConfusionMatrix {
 public:
  void add(const std::string& truth, const std::string& predicted, std::uint64_t n = 1);
  void merge(const ConfusionMatrix& other);

  std::uint64_t total() const { return total_; }
  std::uint64_t correct() const;
  double accuracy() const;
  /// Per truth class: (correct, total).
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> per_class() const;
  const std::map<std::pair<std::string, std::string>, std::uint64_t>& cells() const { return cells_; }

  /// Long form: truth,predicted,count.
  std::string to_csv() const;

 private:
  std::map<std::pair<std::string, std::string>, std::uint64_t> cells_;
  std::uint64_t total_ = 0;
};

/// Per-attribute observations of one implementation, for building profiles
/// from sample traffic.
class ProfileBuilder {
 public:
  explicit ProfileBuilder(std::string name) : name_(std::move(name)) {}
  void add(const AttributeVector& attrs);
  /// Value sets keep values seen in at least `min_share` of samples.
  ImplementationProfile build(const std::vector<std::string>& markers, double min_share = 0.005) const;
  std::uint64_t samples() const { return n_; }

 private:
  std::string name_;
  std::uint64_t n_ = 0;
  std::optional<Range> a1_, a2_, a3_, a4_;
  std::map<RRType, std::uint64_t> types_;
  std::map<Encoding, std::uint64_t> encodings_;
  std::map<CharClass, std::uint64_t> leading_;
};

}  // namespace pdnsa
