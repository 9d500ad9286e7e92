#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pdnsa/cli.hpp"
#include "pdnsa/filter.hpp"
#include "pdnsa/ingest.hpp"
#include "pdnsa/tunnelgen.hpp"
#include "support.hpp"

using namespace pdnsa;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string p(const fs::path& path) { return path.string(); }

/// A generated mixed corpus in `dir`, shared across test cases.
fs::path mixed_dir() {
  static const fs::path dir = [] {
    const auto d = support::temp_dir("cli_mixed");
    const Run r = run({"gen", "--preset", "mixed", "--seed", "3", "--tunnels", "6", "--benign-per-class", "3", "-o", p(d)});
    REQUIRE(r.code == 0);
    return d;
  }();
  return dir;
}

CandidateReport read_report(const fs::path& dir) { return report_from_json(support::slurp(dir / "candidates.json")); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors and help") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"stats"}).code == kExitUsage);
    CHECK(run({"filter", "x", "--format", "xml"}).code == kExitUsage);
    const Run help = run({"--help"});
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("filter") != std::string::npos);
  }

  TEST_CASE("missing input is an I/O error") {
    const Run r = run({"stats", "/nonexistent/in.ndjson", "-o", p(support::temp_dir("cli_missing"))});
    CHECK(r.code == kExitIo);
    CHECK(r.err.find("/nonexistent/in.ndjson") != std::string::npos);
  }

  TEST_CASE("gen is deterministic") {
    const auto a = support::temp_dir("cli_gen_a"), b = support::temp_dir("cli_gen_b");
    REQUIRE(run({"gen", "--preset", "mixed", "--seed", "3", "--tunnels", "6", "--benign-per-class", "3", "-o", p(a)}).code == 0);
    REQUIRE(run({"gen", "--preset", "mixed", "--seed", "3", "--tunnels", "6", "--benign-per-class", "3", "-o", p(b)}).code == 0);
    CHECK(support::slurp(a / "corpus.ndjson") == support::slurp(b / "corpus.ndjson"));
    CHECK(support::slurp(a / "labels.csv") == support::slurp(b / "labels.csv"));
    CHECK(support::slurp(a / "corpus.ndjson") == support::slurp(mixed_dir() / "corpus.ndjson"));
  }

  TEST_CASE("gzip corpus reads back the same as plain") {
    const auto d = support::temp_dir("cli_gen_gz");
    REQUIRE(run({"gen", "--preset", "mixed", "--seed", "3", "--tunnels", "6", "--benign-per-class", "3", "--gzip", "-o", p(d)}).code == 0);
    REQUIRE(fs::exists(d / "corpus.ndjson.gz"));
    const auto s1 = support::temp_dir("cli_gz_s1"), s2 = support::temp_dir("cli_gz_s2");
    REQUIRE(run({"stats", p(d / "corpus.ndjson.gz"), "-o", p(s1)}).code == 0);
    REQUIRE(run({"stats", p(mixed_dir() / "corpus.ndjson"), "-o", p(s2)}).code == 0);
    CHECK(support::slurp(s1 / "stats.json") == support::slurp(s2 / "stats.json"));
  }

  TEST_CASE("two input files equal their concatenation") {
    const auto d = support::temp_dir("cli_split");
    const std::string text = support::slurp(mixed_dir() / "corpus.ndjson");
    std::size_t cut = text.find('\n', text.size() / 3) + 1;
    support::spit(d / "one.ndjson", text.substr(0, cut));
    support::spit(d / "two.ndjson", text.substr(cut));
    const auto s1 = support::temp_dir("cli_split_s1"), s2 = support::temp_dir("cli_split_s2");
    REQUIRE(run({"stats", p(d / "one.ndjson"), p(d / "two.ndjson"), "-o", p(s1)}).code == 0);
    REQUIRE(run({"stats", p(mixed_dir() / "corpus.ndjson"), "-o", p(s2)}).code == 0);
    for (const char* f : {"stats.json", "rrtype_shares.csv", "sld_cdf.csv", "level_per_day.csv"}) {
      CHECK(support::slurp(s1 / f) == support::slurp(s2 / f));
    }
  }

  TEST_CASE("sharded runs produce identical artifacts") {
    const auto corpus = p(mixed_dir() / "corpus.ndjson");
    const auto f1 = support::temp_dir("cli_shard_f1"), f4 = support::temp_dir("cli_shard_f4");
    REQUIRE(run({"filter", corpus, "-o", p(f1)}).code == 0);
    REQUIRE(run({"filter", corpus, "--shards", "4", "-o", p(f4)}).code == 0);
    for (const char* f : {"candidates.json", "stages.csv", "attribution.csv", "candidates.txt"}) {
      CHECK(support::slurp(f1 / f) == support::slurp(f4 / f));
    }
    const auto s1 = support::temp_dir("cli_shard_s1"), s3 = support::temp_dir("cli_shard_s3");
    REQUIRE(run({"stats", corpus, "-o", p(s1)}).code == 0);
    REQUIRE(run({"stats", corpus, "--shards", "3", "-o", p(s3)}).code == 0);
    CHECK(support::slurp(s1 / "stats.json") == support::slurp(s3 / "stats.json"));
    const auto c1 = support::temp_dir("cli_shard_c1"), c2 = support::temp_dir("cli_shard_c2");
    const auto labels = p(mixed_dir() / "labels.csv");
    const Run a = run({"classify", corpus, "--labels", labels, "-o", p(c1)});
    const Run b = run({"classify", corpus, "--labels", labels, "--shards", "2", "-o", p(c2)});
    CHECK(support::slurp(c1 / "confusion.csv") == support::slurp(c2 / "confusion.csv"));
    CHECK(support::slurp(c1 / "attribution.csv") == support::slurp(c2 / "attribution.csv"));
  }

  TEST_CASE("filter finds the planted tunnels") {
    const auto out = support::temp_dir("cli_filter");
    const Run r = run({"filter", p(mixed_dir() / "corpus.ndjson"), "-o", p(out)});
    REQUIRE(r.code == 0);
    CHECK(r.err.find("6 candidate SLDs") != std::string::npos);
    std::set<std::string> planted;
    for (const auto& [name, label] : read_labels(p(mixed_dir() / "labels.csv"))) {
      if (label.kind == Label::Kind::Tunnel) planted.insert(Fqdn::parse(name).suffix(2).dotted());
    }
    const auto slds = read_report(out).candidate_slds();
    CHECK(std::set<std::string>(slds.begin(), slds.end()) == planted);
    CHECK(support::slurp(out / "attribution.csv").rfind("sld,implementation,agreement,entries\n", 0) == 0);
  }

  TEST_CASE("report joins stats and candidates and names missing artifacts") {
    const auto d = support::temp_dir("cli_report");
    REQUIRE(run({"stats", p(mixed_dir() / "corpus.ndjson"), "-o", p(d)}).code == 0);
    const Run missing = run({"report", p(d)});
    CHECK(missing.code == kExitIo);
    CHECK(missing.err.find("candidates.json") != std::string::npos);
    REQUIRE(run({"filter", p(mixed_dir() / "corpus.ndjson"), "-o", p(d)}).code == 0);
    const Run ok = run({"report", p(d)});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("Record types") != std::string::npos);
    const Run no_stats = run({"report", "--stats", p(d / "nope.json"), "--candidates", p(d / "candidates.json")});
    CHECK(no_stats.code == kExitIo);
    CHECK(no_stats.err.find("nope.json") != std::string::npos);
  }

  TEST_CASE("NULL-only prefilter on a shaped corpus") {
    const auto d = support::temp_dir("cli_shaped");
    REQUIRE(run({"gen", "--preset", "shaped", "--total", "20000", "-o", p(d)}).code == 0);
    REQUIRE(run({"filter", p(d / "corpus.ndjson"), "--types", "NULL", "--no-classify", "-o", p(d)}).code == 0);
    const auto r = read_report(d);
    const double share = 100.0 * static_cast<double>(r.stages[0].entries_out) / static_cast<double>(r.stages[0].entries_in);
    CHECK(r.stages[0].entries_in == 20000);
    CHECK(std::abs(share - 21.17) <= 0.05);
    CHECK_FALSE(fs::exists(d / "attribution.csv"));
  }

  TEST_CASE("watchlist hits are reported") {
    const auto d = support::temp_dir("cli_watch");
    support::spit(d / "in.ndjson",
                  R"({"domain":"teriava.com.","time_seen":"2017-07-01 09:35:04","bailiwick":"teriava.com.",)"
                  R"("rrname":"dsu9jr2czl.teriava.com.","rrclass":"IN","rrtype":"A","rdata":["127.0.0.1"]})"
                  "\n");
    const Run r = run({"filter", p(d / "in.ndjson"), "--watchlist", std::string(PDNSA_DATA_DIR) + "/watchlist_apt.txt",
                       "-o", p(d)});
    REQUIRE(r.code == 0);
    const auto rep = read_report(d);
    REQUIRE(rep.watchlist_hits.size() == 1);
    CHECK(rep.watchlist_hits[0].sld == "teriava.com");
    CHECK(support::slurp(d / "candidates.txt").find("teriava.com") != std::string::npos);
  }

  TEST_CASE("provider domains classify as their provider") {
    const auto d = support::temp_dir("cli_provider");
    REQUIRE(run({"gen", "--preset", "provider", "--seed", "2", "-o", p(d)}).code == 0);
    const Run r = run({"classify", p(d / "corpus.ndjson"), "--labels", p(d / "labels.csv"), "-o", p(d)});
    REQUIRE(r.code == 0);
    const std::string attribution = support::slurp(d / "attribution.csv");
    for (const char* sld : {"53r.de", "8u6.de", "1yf.de", "2yf.de"}) {
      CHECK(attribution.find(std::string("\n") + sld + ",your-freedom,1.0000,") != std::string::npos);
    }
    CHECK(attribution.find("\nqv4.in,tunnelguru,") != std::string::npos);
  }

  TEST_CASE("benign-only corpus is all unknown") {
    const auto d = support::temp_dir("cli_benign");
    support::spit(d / "gen.json", R"({"seed": 4, "background": [
      {"class": "plain-A", "sld": "shop.com", "queries": 50},
      {"class": "cdn-like", "sld": "media.net", "queries": 50},
      {"class": "spf-txt", "sld": "mail.org", "queries": 50},
      {"class": "dkim-txt", "sld": "mail.org", "queries": 50},
      {"class": "rdns-arpa", "sld": "in-addr.arpa", "queries": 50},
      {"class": "localhost-style", "sld": "spotilocal.com", "queries": 50}]})");
    REQUIRE(run({"gen", "--config", p(d / "gen.json"), "-o", p(d)}).code == 0);
    const Run r = run({"classify", p(d / "corpus.ndjson"), "--labels", p(d / "labels.csv"), "-o", p(d)});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("accuracy 1.0000 (300/300)") != std::string::npos);
    CHECK(support::slurp(d / "confusion.csv") == "truth,predicted,count\nunknown,unknown,300\n");
  }

  TEST_CASE("flags override the config file, which overrides defaults") {
    const auto d = support::temp_dir("cli_precedence");
    support::spit(d / "deep.json", R"({"min_level": 12})");
    support::spit(d / "bad.json", R"({"min_levle": 3})");
    support::spit(d / "typed.json", R"({"min_level": "four"})");
    const auto corpus = p(mixed_dir() / "corpus.ndjson");
    REQUIRE(run({"filter", corpus, "--no-classify", "--config", p(d / "deep.json"), "-o", p(d)}).code == 0);
    CHECK(read_report(d).candidates.empty());
    REQUIRE(run({"filter", corpus, "--no-classify", "--config", p(d / "deep.json"), "--min-level", "4", "-o", p(d)}).code == 0);
    CHECK(read_report(d).candidates.size() == 6);
    CHECK(run({"filter", corpus, "--config", p(d / "bad.json"), "-o", p(d)}).code == kExitConfig);
    CHECK(run({"filter", corpus, "--config", p(d / "typed.json"), "-o", p(d)}).code == kExitConfig);
    CHECK(run({"filter", corpus, "--min-level", "0", "-o", p(d)}).code == kExitConfig);
    CHECK(run({"filter", corpus, "--config", p(d / "absent.json"), "-o", p(d)}).code == kExitIo);
  }

  TEST_CASE("empty input gives header-only tables and a warning") {
    const auto d = support::temp_dir("cli_empty");
    support::spit(d / "empty.ndjson", "");
    const Run r = run({"stats", p(d / "empty.ndjson"), "-o", p(d)});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    CHECK(support::slurp(d / "rrtype_shares.csv") == "rrtype,count,share\n");
    const Run f = run({"filter", p(d / "empty.ndjson"), "-o", p(d)});
    CHECK(f.code == 0);
    CHECK(read_report(d).candidates.empty());
  }

  TEST_CASE("deduplication options") {
    const auto d = support::temp_dir("cli_dedup");
    std::string text;
    for (int i = 0; i < 3; ++i) text += to_ndjson(support::entry("a.b.c.x.com", "TXT")) + "\n";
    text += to_ndjson(support::entry("z.b.c.x.com", "TXT")) + "\n";
    support::spit(d / "in.ndjson", text);
    const Run r = run({"stats", p(d / "in.ndjson"), "--dedup", "exact", "-o", p(d)});
    CHECK(r.code == 0);
    CHECK(r.err.find("accepted 2, rejected 0, deduplicated 2") != std::string::npos);
    CHECK(run({"stats", p(d / "in.ndjson"), "--dedup", "exact", "--dedup-capacity", "1", "-o", p(d)}).code ==
          kExitConfig);
    CHECK(run({"stats", p(d / "in.ndjson"), "--dedup", "approx", "-o", p(d)}).code == kExitConfig);
  }

  TEST_CASE("profiles command emits a parseable file") {
    const auto d = support::temp_dir("cli_profiles");
    REQUIRE(run({"profiles", "--samples", "300", "-o", p(d / "p.txt")}).code == 0);
    const std::string text = support::slurp(d / "p.txt");
    CHECK(text.rfind("# Generated by: pdnsa profiles --seed 1 --samples 300\n", 0) == 0);
    CHECK(ProfileSet::load(p(d / "p.txt")).size() == 12);
    const auto c = support::temp_dir("cli_profiles_c");
    CHECK(run({"classify", p(mixed_dir() / "corpus.ndjson"), "--profiles", p(d / "p.txt"), "-o", p(c)}).code == 0);
    CHECK(run({"classify", p(mixed_dir() / "corpus.ndjson"), "--profiles", p(d / "none.txt"), "-o", p(c)}).code ==
          kExitIo);
  }

  TEST_CASE("generator config errors") {
    const auto d = support::temp_dir("cli_gen_bad");
    support::spit(d / "unknown.json", R"({"tunnels": [{"profile": "nope", "sld": "x.com"}]})");
    support::spit(d / "zero.json", R"({"tunnels": [{"profile": "iodine-NULL", "sld": "x.com", "payload_bytes": 0}]})");
    CHECK(run({"gen", "--config", p(d / "unknown.json"), "-o", p(d)}).code == kExitConfig);
    CHECK(run({"gen", "--config", p(d / "zero.json"), "-o", p(d)}).code == kExitConfig);
    CHECK(run({"gen", "--preset", "nope", "-o", p(d)}).code == kExitUsage);
  }
}
