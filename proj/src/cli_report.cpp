#include <cstdio>
#include <filesystem>
#include <sstream>

#include "cli_common.hpp"
#include "pdnsa/cli.hpp"
#include "pdnsa/error.hpp"

namespace pdnsa::cli {
namespace {

using nlohmann::json;

std::string require(const std::string& path, const char* what) {
  if (!std::filesystem::exists(path)) throw IoError(std::string("missing ") + what + ": " + path);
  return read_file(path);
}

std::string stats_section(const json& s, std::size_t top_n) {
  std::ostringstream out;
  char buf[256];
  out << "Corpus statistics\n";
  out << "entries: " << s.value("total", 0ULL) << "  SLDs: " << s.value("distinct_slds", 0ULL);
  if (s.contains("first_day")) {
    out << "  window: " << s["first_day"].get<std::string>() << " .. " << s["last_day"].get<std::string>();
  }
  out << "\n\nRecord types\n";
  for (const auto& r : s.value("rrtype_shares", json::array())) {
    std::snprintf(buf, sizeof buf, "  %-8s %12llu %8s%%\n", r.at("rrtype").get<std::string>().c_str(),
                  static_cast<unsigned long long>(r.at("count").get<std::uint64_t>()),
                  format_fixed(r.at("share").get<double>() * 100.0, 2).c_str());
    out << buf;
  }
  out << "\nTop SLDs by entries\n";
  std::size_t rank = 0;
  for (const auto& r : s.value("top_slds", json::array())) {
    if (rank++ >= top_n) break;
    std::snprintf(buf, sizeof buf, "  %2zu %-32s %10llu entries %8s%%\n", rank, r.at("sld").get<std::string>().c_str(),
                  static_cast<unsigned long long>(r.at("entries").get<std::uint64_t>()),
                  format_fixed(r.at("share").get<double>() * 100.0, 2).c_str());
    out << buf;
  }
  if (s.contains("cdf_rank_at_50")) {
    out << "\nSLDs covering 50% / 80% of FQDNs: " << s["cdf_rank_at_50"].get<std::uint64_t>() << " / "
        << s["cdf_rank_at_80"].get<std::uint64_t>() << "\n";
  }
  return out.str();
}

}  // namespace

int cmd_report(const std::string& stats_path, const std::string& candidates_path, const std::string& out_path,
               std::size_t top_n, Streams io) {
  const std::string stats_text = require(stats_path, "stats artifact");
  const std::string cand_text = require(candidates_path, "candidate artifact");
  const json stats = json::parse(stats_text, nullptr, false);
  if (stats.is_discarded() || !stats.is_object()) throw ConfigError(stats_path + ": not a stats JSON document");
  const CandidateReport report = report_from_json(cand_text);

  const std::string text = stats_section(stats, top_n) + "\n" + report_text(report);
  if (out_path == "-") {
    io.out << text;
  } else {
    write_file(out_path, text);
    io.out << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace pdnsa::cli
