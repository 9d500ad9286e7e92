#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "pdnsa/entry.hpp"
#include "pdnsa/fingerprint.hpp"
#include "pdnsa/lineio.hpp"

namespace pdnsa {

/// The twelve tunnel implementations, in profile-file order.
const std::vector<std::string>& implementation_names();

enum class BenignClass : std::uint8_t { PlainA, CdnLike, SpfTxt, DkimTxt, RdnsArpa, LocalhostStyle };
inline constexpr std::size_t kBenignClassCount = 6;

std::string_view to_string(BenignClass c);
std::optional<BenignClass> parse_benign_class(std::string_view s);

struct TunnelSpec {
  std::string profile;
  std::string sld;
  std::string third = "t";
  std::size_t payload_bytes = 4096;
  /// Unset: ceil(payload / per-query capacity).
  std::optional<std::size_t> queries;
  /// Forces every query to this type instead of the implementation's cycle.
  std::optional<RRType> rrtype;
  /// Spread queries over every day of the window instead of a short burst.
  bool every_day = false;
};

struct BackgroundSpec {
  BenignClass cls = BenignClass::PlainA;
  std::string sld;
  std::size_t queries = 100;
};

struct GenConfig {
  std::uint64_t seed = 1;
  Day start = Day(std::chrono::year{2017} / 7 / 1);
  std::size_t days = 7;
  std::vector<TunnelSpec> tunnels;
  std::vector<BackgroundSpec> background;

  void validate() const;  // throws ConfigError, UnknownProfile
};

struct Label {
  enum class Kind : std::uint8_t { Tunnel, Benign };
  Kind kind = Kind::Benign;
  /// Implementation name or benign class name.
  std::string cls;
};

std::string_view to_string(Label::Kind k);

struct LabeledEntry {
  PdnsEntry entry;
  Label label;
};

/// Upstream bytes one query of `profile` can carry under "<third>.<sld>",
/// derived from the implementation's label layout and the 253-byte bound.
std::size_t query_capacity(const std::string& profile, const std::string& third, const std::string& sld);

/// Markers the implementation embeds in its query names.
std::vector<std::string> implementation_markers(const std::string& profile);

/// Pull-style generator; output is a pure function of the config.
class Generator {
 public:
  explicit Generator(GenConfig config);
  ~Generator();
  Generator(Generator&&) noexcept;

  bool next(LabeledEntry& out);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

std::vector<LabeledEntry> generate(const GenConfig& config);

/// Streams a corpus plus its labels sidecar (rrname,kind,class). Each rrname
/// is labeled once, by its first occurrence.
class CorpusWriter {
 public:
  CorpusWriter(const std::string& corpus_path, const std::string& labels_path);
  void add(const LabeledEntry& e);
  void close();
  std::uint64_t entries() const { return entries_; }

 private:
  LineWriter corpus_;
  LineWriter labels_;
  std::unordered_set<std::string> labeled_;
  std::uint64_t entries_ = 0;
};

void write_corpus(const std::vector<LabeledEntry>& entries, const std::string& corpus_path,
                  const std::string& labels_path);

/// Reads a labels sidecar into rrname -> label.
std::vector<std::pair<std::string, Label>> read_labels(const std::string& path);

// Ready-made corpora.

/// At least `per_profile` entries for each of the twelve implementations.
GenConfig classifier_corpus(std::uint64_t seed, std::size_t per_profile);

/// `tunnels` planted NULL/TXT tunnel SLDs (level >= 4, >= 2 names each) and
/// `benign_per_class` SLDs of every benign class.
GenConfig mixed_corpus(std::uint64_t seed, std::size_t tunnels = 20, std::size_t benign_per_class = 10,
                       std::size_t days = 7);

/// Provider tunnels on the known .de/.in domains dominating NULL traffic,
/// plus a few unknown tunnels and background.
GenConfig provider_corpus(std::uint64_t seed, std::size_t days = 7);

/// Profiles built from generated traffic of every implementation.
ProfileSet derive_profiles(std::uint64_t seed, std::size_t samples_per_profile);

/// Corpus with fixed rrtype shares and top-SLD masses (see the target
/// tables), apportioned exactly; the remaining SLD mass is spread over
/// `tail_slds` smaller domains.
class ShapedGenerator {
 public:
  ShapedGenerator(std::uint64_t seed, std::uint64_t total, std::size_t tail_slds = 200, std::size_t days = 7);
  ~ShapedGenerator();
  ShapedGenerator(ShapedGenerator&&) noexcept;

  bool next(PdnsEntry& out);

  /// Target (rrtype, basis points) and (SLD, basis points) tables.
  static const std::vector<std::pair<std::string, int>>& rrtype_targets();
  static const std::vector<std::pair<std::string, int>>& sld_targets();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Largest-remainder apportionment of `total` over `weights`; sums exactly to total.
std::vector<std::uint64_t> apportion(std::uint64_t total, const std::vector<double>& weights);

}  // namespace pdnsa
