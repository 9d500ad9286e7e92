#include "pdnsa/ingest.hpp"

#include <json.hpp>

#include "pdnsa/error.hpp"

namespace pdnsa {
namespace {

using json = nlohmann::json;

RecordError from_name_error(NameErrorKind k) {
  switch (k) {
    case NameErrorKind::EmptyName: return RecordError::EmptyName;
    case NameErrorKind::EmptyLabel: return RecordError::EmptyLabel;
    case NameErrorKind::LabelTooLong: return RecordError::LabelTooLong;
    case NameErrorKind::NameTooLong: return RecordError::NameTooLong;
  }
  return RecordError::Malformed;
}

std::optional<RecordError> set_name(std::string_view text, Fqdn& out) {
  auto parsed = Fqdn::try_parse(text);
  if (auto* err = std::get_if<NameErrorKind>(&parsed)) return from_name_error(*err);
  out = std::get<Fqdn>(std::move(parsed));
  return std::nullopt;
}

std::optional<RecordError> set_optional_name(std::string_view text, std::optional<Fqdn>& out) {
  out.reset();
  if (text.empty()) return std::nullopt;
  Fqdn name;
  if (auto err = set_name(text, name)) return err;
  out = std::move(name);
  return std::nullopt;
}

std::optional<RecordError> set_rdata(const json& value, std::vector<std::string>& out) {
  out.clear();
  if (value.is_null()) return std::nullopt;
  if (value.is_string()) {
    out.push_back(value.get<std::string>());
    return std::nullopt;
  }
  if (!value.is_array()) return RecordError::BadField;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_string()) return RecordError::BadField;
    out.push_back(item.get<std::string>());
  }
  return std::nullopt;
}

// Shared field validation for both input formats. Empty strings count as
// absent for the optional fields.
std::optional<RecordError> fill_entry(std::string_view domain, std::string_view time_seen,
                                      std::string_view bailiwick, std::string_view rrname,
                                      std::string_view rrclass, std::string_view rrtype, PdnsEntry& out) {
  if (rrname.empty() || rrtype.empty() || time_seen.empty()) return RecordError::MissingField;
  auto ts = parse_time_seen(time_seen);
  if (!ts) return RecordError::BadTimestamp;
  out.time_seen = *ts;
  if (auto err = set_name(rrname, out.rrname)) return err;
  if (auto err = set_optional_name(domain, out.domain)) return err;
  if (auto err = set_optional_name(bailiwick, out.bailiwick)) return err;
  out.rrclass = rrclass.empty() ? std::string("IN") : std::string(rrclass);
  out.rrtype = RRType::parse(rrtype);
  return std::nullopt;
}

// Splits one RFC 4180 line. Returns false on an unterminated quote.
bool split_csv(std::string_view line, std::vector<std::string>& fields) {
  fields.clear();
  std::string cur;
  bool quoted = false;
  bool at_field_start = true;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && at_field_start) {
      quoted = true;
      at_field_start = false;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      at_field_start = true;
    } else {
      cur.push_back(c);
      at_field_start = false;
    }
  }
  if (quoted) return false;
  fields.push_back(std::move(cur));
  return true;
}

void append_csv_field(std::string& out, std::string_view v) {
  if (v.find_first_of(",\"\r\n") == std::string_view::npos) {
    out.append(v);
    return;
  }
  out.push_back('"');
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

bool is_blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

}  // namespace

InputFormat parse_input_format(std::string_view name) {
  if (name == "auto") return InputFormat::Auto;
  if (name == "ndjson" || name == "json") return InputFormat::Ndjson;
  if (name == "csv") return InputFormat::Csv;
  throw ConfigError("unknown input format: " + std::string(name));
}

std::string_view to_string(RecordError e) {
  switch (e) {
    case RecordError::Malformed: return "Malformed";
    case RecordError::MissingField: return "MissingField";
    case RecordError::BadField: return "BadField";
    case RecordError::BadTimestamp: return "BadTimestamp";
    case RecordError::EmptyName: return "EmptyName";
    case RecordError::EmptyLabel: return "EmptyLabel";
    case RecordError::LabelTooLong: return "LabelTooLong";
    case RecordError::NameTooLong: return "NameTooLong";
  }
  return "Unknown";
}

std::uint64_t IngestStats::rejected() const {
  std::uint64_t n = 0;
  for (const auto& [_, c] : rejected_by_error) n += c;
  return n;
}

void IngestStats::merge(const IngestStats& other) {
  read += other.read;
  accepted += other.accepted;
  deduplicated += other.deduplicated;
  for (const auto& [k, v] : other.rejected_by_error) rejected_by_error[k] += v;
  for (const auto& [k, v] : other.warnings) warnings[k] += v;
}

std::optional<RecordError> parse_ndjson_record(std::string_view line, PdnsEntry& out) {
  json doc = json::parse(line.begin(), line.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return RecordError::Malformed;

  auto text = [&](const char* key, std::string_view& dst) -> bool {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) {
      dst = {};
      return true;
    }
    if (!it->is_string()) return false;
    dst = it->get_ref<const std::string&>();
    return true;
  };
  std::string_view domain, time_seen, bailiwick, rrname, rrclass, rrtype;
  if (!text("domain", domain) || !text("time_seen", time_seen) || !text("bailiwick", bailiwick) ||
      !text("rrname", rrname) || !text("rrclass", rrclass) || !text("rrtype", rrtype)) {
    return RecordError::BadField;
  }
  if (auto err = fill_entry(domain, time_seen, bailiwick, rrname, rrclass, rrtype, out)) return err;
  auto rd = doc.find("rdata");
  return set_rdata(rd == doc.end() ? json() : *rd, out.rdata);
}

std::optional<RecordError> parse_csv_record(std::string_view line, PdnsEntry& out) {
  thread_local std::vector<std::string> fields;
  if (!split_csv(line, fields) || fields.size() != 7) return RecordError::Malformed;
  if (auto err = fill_entry(fields[0], fields[1], fields[2], fields[3], fields[4], fields[5], out)) return err;
  if (fields[6].empty()) {
    out.rdata.clear();
    return std::nullopt;
  }
  json rd = json::parse(fields[6], nullptr, false);
  if (rd.is_discarded()) return RecordError::BadField;
  return set_rdata(rd, out.rdata);
}

std::string to_ndjson(const PdnsEntry& e) {
  std::string out;
  out.reserve(128 + e.rrname.dotted().size() * 2);
  out += '{';
  if (e.domain) {
    out += "\"domain\":";
    append_json_string(out, e.domain->canonical());
    out += ',';
  }
  out += "\"time_seen\":";
  append_json_string(out, format_time_seen(e.time_seen));
  if (e.bailiwick) {
    out += ",\"bailiwick\":";
    append_json_string(out, e.bailiwick->canonical());
  }
  out += ",\"rrname\":";
  append_json_string(out, e.rrname.raw().empty() ? e.rrname.canonical() : e.rrname.raw());
  out += ",\"rrclass\":";
  append_json_string(out, e.rrclass);
  out += ",\"rrtype\":";
  append_json_string(out, e.rrtype.to_string());
  out += ",\"rdata\":";
  out += serialize_rdata(e.rdata);
  out += '}';
  return out;
}

std::string to_csv(const PdnsEntry& e) {
  std::string out;
  append_csv_field(out, e.domain ? e.domain->canonical() : std::string());
  out += ',';
  append_csv_field(out, format_time_seen(e.time_seen));
  out += ',';
  append_csv_field(out, e.bailiwick ? e.bailiwick->canonical() : std::string());
  out += ',';
  append_csv_field(out, e.rrname.raw().empty() ? e.rrname.canonical() : e.rrname.raw());
  out += ',';
  append_csv_field(out, e.rrclass);
  out += ',';
  append_csv_field(out, e.rrtype.to_string());
  out += ',';
  append_csv_field(out, serialize_rdata(e.rdata));
  return out;
}

EntryReader::EntryReader(const std::string& path, InputFormat format) : lines_(path), format_(format) {}

bool EntryReader::next(PdnsEntry& out) {
  while (lines_.next(line_)) {
    if (is_blank(line_)) continue;
    if (first_line_) {
      first_line_ = false;
      if (format_ == InputFormat::Auto) {
        auto pos = line_.find_first_not_of(" \t");
        format_ = line_[pos] == '{' ? InputFormat::Ndjson : InputFormat::Csv;
      }
      if (format_ == InputFormat::Csv && line_ == kCsvHeader) continue;
    }
    ++stats_.read;
    auto err = format_ == InputFormat::Csv ? parse_csv_record(line_, out) : parse_ndjson_record(line_, out);
    if (err) {
      ++stats_.rejected_by_error[std::string(to_string(*err))];
      continue;
    }
    if (out.domain && !out.rrname.is_subdomain_of(*out.domain)) ++stats_.warnings["SuffixMismatch"];
    ++stats_.accepted;
    return true;
  }
  return false;
}

std::string dedup_key(const PdnsEntry& entry, DedupKey key) {
  if (key == DedupKey::Rrname) return entry.rrname.dotted();
  return entry.rrname.dotted() + '\t' + entry.rrtype.to_string();
}

bool FirstSeenFilter::next(PdnsEntry& out) {
  while (source_.next(out)) {
    if (key_ == DedupKey::Rrname ? state_.check_and_insert(out.rrname.dotted())
                                 : state_.check_and_insert(dedup_key(out, key_))) {
      return true;
    }
    ++deduplicated_;
  }
  return false;
}

Ingest::Ingest(std::vector<std::string> paths, Options options)
    : paths_(std::move(paths)), options_(options) {}

bool Ingest::open_next() {
  if (current_) {
    finished_.merge(current_->stats());
    current_.reset();
  }
  if (index_ >= paths_.size()) return false;
  current_ = std::make_unique<EntryReader>(paths_[index_++], options_.format);
  return true;
}

bool Ingest::next(PdnsEntry& out) {
  while (true) {
    if (!current_ && !open_next()) return false;
    while (current_->next(out)) {
      if (!options_.first_seen) return true;
      const bool fresh = options_.dedup_key == DedupKey::Rrname
                             ? options_.first_seen->check_and_insert(out.rrname.dotted())
                             : options_.first_seen->check_and_insert(dedup_key(out, options_.dedup_key));
      if (fresh) return true;
      ++deduplicated_;
    }
    if (!open_next()) return false;
  }
}

IngestStats Ingest::stats() const {
  IngestStats s = finished_;
  if (current_) s.merge(current_->stats());
  s.accepted -= deduplicated_;
  s.deduplicated += deduplicated_;
  return s;
}

std::vector<PdnsEntry> read_all(const std::string& path, InputFormat format, IngestStats* stats) {
  EntryReader reader(path, format);
  std::vector<PdnsEntry> out;
  PdnsEntry e;
  while (reader.next(e)) out.push_back(e);
  if (stats) *stats = reader.stats();
  return out;
}

}  // namespace pdnsa
