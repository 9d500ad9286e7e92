#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdnsa/entry.hpp"
#include "pdnsa/lineio.hpp"

namespace pdnsa {

enum class InputFormat { Auto, Ndjson, Csv };

InputFormat parse_input_format(std::string_view name);  // throws ConfigError

/// Why a single record was rejected. Rejections are counted, never fatal.
enum class RecordError : std::uint8_t {
  Malformed,     // not a JSON object / wrong CSV column count
  MissingField,  // rrname, rrtype or time_seen absent
  BadField,      // a field has the wrong JSON type
  BadTimestamp,
  EmptyName,
  EmptyLabel,
  LabelTooLong,
  NameTooLong,
};

std::string_view to_string(RecordError e);

struct IngestStats {
  std::uint64_t read = 0;
  std::uint64_t accepted = 0;
  std::uint64_t deduplicated = 0;
  std::map<std::string, std::uint64_t> rejected_by_error;
  /// Non-fatal observations on accepted records (e.g. SuffixMismatch).
  std::map<std::string, std::uint64_t> warnings;

  std::uint64_t rejected() const;
  /// read == accepted + rejected + deduplicated
  bool balanced() const { return read == accepted + rejected() + deduplicated; }
  void merge(const IngestStats& other);
};

/// CSV column order; also the optional header line.
inline constexpr std::string_view kCsvHeader = "domain,time_seen,bailiwick,rrname,rrclass,rrtype,rdata";

std::optional<RecordError> parse_ndjson_record(std::string_view line, PdnsEntry& out);
std::optional<RecordError> parse_csv_record(std::string_view line, PdnsEntry& out);

/// One NDJSON line (no newline), fields in feed order, names with trailing dot.
std::string to_ndjson(const PdnsEntry& entry);
/// One CSV line (no newline).
std::string to_csv(const PdnsEntry& entry);

/// Pull-style stream of entries.
class EntrySource {
 public:
  virtual ~EntrySource() = default;
  /// False at end of stream.
  virtual bool next(PdnsEntry& out) = 0;
};

/// Reads one file (or "-" for stdin) record by record. Memory use is bounded
/// by the longest line.
class EntryReader : public EntrySource {
 public:
  explicit EntryReader(const std::string& path, InputFormat format = InputFormat::Auto);

  bool next(PdnsEntry& out) override;
  const IngestStats& stats() const { return stats_; }

 private:
  LineReader lines_;
  InputFormat format_;
  bool first_line_ = true;
  std::string line_;
  IngestStats stats_;
};

enum class DedupKey { Rrname, RrnameRrtype };

std::string dedup_key(const PdnsEntry& entry, DedupKey key);

/// Set of hostnames already seen, giving newly-observed-hostname semantics.
///
/// Exact mode stores every key and never drops a new one; with a capacity it
/// throws CapacityExceeded instead of growing past it. Approximate mode is a
/// Bloom filter sized for `capacity` keys at the declared false-positive
/// rate. `check_and_insert` is atomic, so one state can be shared by
/// concurrent readers.
class FirstSeenState {
 public:
  enum class Policy { Exact, Approximate };

  static FirstSeenState exact(std::optional<std::size_t> capacity = std::nullopt);
  static FirstSeenState approximate(std::size_t capacity, double false_positive_rate);

  FirstSeenState(FirstSeenState&&) noexcept;
  FirstSeenState& operator=(FirstSeenState&&) noexcept;
  ~FirstSeenState();

  /// True when `key` was new (and is now recorded).
  bool check_and_insert(std::string_view key);

  Policy policy() const;
  std::size_t size() const;
  std::optional<std::size_t> capacity() const;
  double declared_false_positive_rate() const;
  std::size_t memory_bytes() const;

 private:
  struct Impl;
  explicit FirstSeenState(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

/// Passes an entry iff its dedup key has not been seen before in `state`.
class FirstSeenFilter : public EntrySource {
 public:
  FirstSeenFilter(EntrySource& source, FirstSeenState& state, DedupKey key = DedupKey::Rrname)
      : source_(source), state_(state), key_(key) {}

  bool next(PdnsEntry& out) override;
  std::uint64_t deduplicated() const { return deduplicated_; }

 private:
  EntrySource& source_;
  FirstSeenState& state_;
  DedupKey key_;
  std::uint64_t deduplicated_ = 0;
};

/// Sequential reading of several files with optional first-seen filtering and
/// combined accounting.
class Ingest : public EntrySource {
 public:
  struct Options {
    InputFormat format = InputFormat::Auto;
    FirstSeenState* first_seen = nullptr;
    DedupKey dedup_key = DedupKey::Rrname;
  };

  Ingest(std::vector<std::string> paths, Options options);

  bool next(PdnsEntry& out) override;
  IngestStats stats() const;

 private:
  bool open_next();

  std::vector<std::string> paths_;
  Options options_;
  std::size_t index_ = 0;
  std::unique_ptr<EntryReader> current_;
  IngestStats finished_;
  std::uint64_t deduplicated_ = 0;
};

/// Reads a whole file into memory; for tests and small fixtures.
std::vector<PdnsEntry> read_all(const std::string& path, InputFormat format = InputFormat::Auto,
                                IngestStats* stats = nullptr);

}  // namespace pdnsa
