#include <doctest.h>

#include <atomic>
#include <set>
#include <thread>

#include "pdnsa/error.hpp"
#include "pdnsa/ingest.hpp"
#include "support.hpp"

using namespace pdnsa;

namespace {

const char* kTableOne =
    R"({"domain":"teriava.com.","time_seen":"2017-07-01 09:35:04","bailiwick":"teriava.com.",)"
    R"("rrname":"dsu9jr2czl.teriava.com.","rrclass":"IN","rrtype":"A","rdata":["127.0.0.1"],"keys":"","new_rr":""})";

std::vector<std::string> lines_of(const std::vector<PdnsEntry>& v) {
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(to_ndjson(e));
  return out;
}

}  // namespace

TEST_SUITE("ingest") {
  TEST_CASE("record with the feed's example fields") {
    PdnsEntry e;
    REQUIRE_FALSE(parse_ndjson_record(kTableOne, e).has_value());
    REQUIRE(e.domain.has_value());
    CHECK(e.domain->dotted() == "teriava.com");
    CHECK(e.bailiwick->dotted() == "teriava.com");
    CHECK(e.rrname.dotted() == "dsu9jr2czl.teriava.com");
    CHECK(e.rrtype == RRType(RRType::Kind::A));
    CHECK(e.rrclass == "IN");
    CHECK(e.rdata == std::vector<std::string>{"127.0.0.1"});
    CHECK(format_time_seen(e.time_seen) == "2017-07-01 09:35:04");
  }

  TEST_CASE("empty file gives no entries") {
    const auto dir = support::temp_dir("ingest_empty");
    support::spit(dir / "empty.ndjson", "");
    IngestStats st;
    CHECK(read_all((dir / "empty.ndjson").string(), InputFormat::Auto, &st).empty());
    CHECK(st.read == 0);
    CHECK(st.balanced());
  }

  TEST_CASE("rejected records are counted, not fatal") {
    const auto dir = support::temp_dir("ingest_reject");
    std::string text;
    for (int i = 0; i < 3; ++i) {
      text += R"({"rrname":"a)" + std::to_string(i) + R"(.x.com.","rrtype":"A","time_seen":"2017-07-01 00:00:00"})";
      text += "\n";
    }
    text += R"({"rrtype":"A","time_seen":"2017-07-01 00:00:00"})";
    text += "\n";
    support::spit(dir / "in.ndjson", text);
    IngestStats st;
    const auto v = read_all((dir / "in.ndjson").string(), InputFormat::Auto, &st);
    CHECK(v.size() == 3);
    CHECK(st.rejected_by_error == std::map<std::string, std::uint64_t>{{"MissingField", 1}});
    CHECK(st.balanced());
  }

  TEST_CASE("per-record error kinds") {
    PdnsEntry e;
    CHECK(parse_ndjson_record("not json", e) == RecordError::Malformed);
    CHECK(parse_ndjson_record("[1,2]", e) == RecordError::Malformed);
    CHECK(parse_ndjson_record(R"({"rrname":5,"rrtype":"A","time_seen":"2017-07-01 00:00:00"})", e) ==
          RecordError::BadField);
    CHECK(parse_ndjson_record(R"({"rrname":"a.b","rrtype":"A","time_seen":"2017-07-01"})", e) ==
          RecordError::BadTimestamp);
    CHECK(parse_ndjson_record(R"({"rrname":"a..b","rrtype":"A","time_seen":"2017-07-01 00:00:00"})", e) ==
          RecordError::EmptyLabel);
    CHECK(parse_ndjson_record(R"({"rrname":"a.b","rrtype":"A","time_seen":"2017-07-01 00:00:00","rdata":7})", e) ==
          RecordError::BadField);
    REQUIRE_FALSE(
        parse_ndjson_record(R"({"rrname":"a.b","rrtype":"A","time_seen":"2017-07-01 00:00:00","rdata":"x"})", e));
    CHECK(e.rdata == std::vector<std::string>{"x"});
    CHECK(parse_ndjson_record(R"({"rrname":"a.b","rrtype":"A","time_seen":"2017-13-01 00:00:00"})", e) ==
          RecordError::BadTimestamp);
  }

  TEST_CASE("CSV and NDJSON carry the same records") {
    std::mt19937_64 rng(3);
    const auto entries = support::random_entries(rng, 300);
    const auto dir = support::temp_dir("ingest_csv");
    {
      LineWriter csv((dir / "in.csv").string());
      csv.write_line(kCsvHeader);
      LineWriter nd((dir / "in.ndjson").string());
      for (const auto& e : entries) {
        csv.write_line(to_csv(e));
        nd.write_line(to_ndjson(e));
      }
    }
    const auto a = read_all((dir / "in.csv").string());
    const auto b = read_all((dir / "in.ndjson").string());
    CHECK(lines_of(a) == lines_of(entries));
    CHECK(lines_of(b) == lines_of(entries));
  }

  TEST_CASE("gzip input is detected by magic bytes") {
    std::mt19937_64 rng(4);
    const auto entries = support::random_entries(rng, 200);
    const auto dir = support::temp_dir("ingest_gz");
    {
      LineWriter w((dir / "in.ndjson.gz").string());
      for (const auto& e : entries) w.write_line(to_ndjson(e));
    }
    std::filesystem::rename(dir / "in.ndjson.gz", dir / "renamed.dat");
    CHECK(lines_of(read_all((dir / "renamed.dat").string())) == lines_of(entries));
  }

  TEST_CASE("reading a file equals reading any line split of it") {
    std::mt19937_64 rng(5);
    const auto entries = support::random_entries(rng, 500);
    const auto dir = support::temp_dir("ingest_split");
    std::vector<std::string> paths;
    {
      LineWriter whole((dir / "whole.ndjson").string());
      for (const auto& e : entries) whole.write_line(to_ndjson(e));
      std::size_t i = 0;
      for (int part = 0; part < 4; ++part) {
        paths.push_back((dir / ("part" + std::to_string(part))).string());
        LineWriter w(paths.back());
        const std::size_t end = part == 3 ? entries.size() : i + 37 * (part + 1);
        for (; i < end; ++i) w.write_line(to_ndjson(entries[i]));
      }
    }
    Ingest ingest(paths, {});
    std::vector<PdnsEntry> joined;
    PdnsEntry e;
    while (ingest.next(e)) joined.push_back(e);
    CHECK(lines_of(joined) == lines_of(read_all((dir / "whole.ndjson").string())));
    CHECK(ingest.stats().read == entries.size());
  }

  TEST_CASE("unreadable source is fatal") { CHECK_THROWS_AS(LineReader("/nonexistent/file"), IoError); }
}

TEST_SUITE("first_seen") {
  TEST_CASE("duplicate rrnames are dropped, key is rrname only") {
    auto state = FirstSeenState::exact();
    CHECK(state.check_and_insert(dedup_key(support::entry("a.x.com"), DedupKey::Rrname)));
    CHECK_FALSE(state.check_and_insert(dedup_key(support::entry("A.x.com."), DedupKey::Rrname)));
    CHECK(state.check_and_insert(dedup_key(support::entry("b.x.com"), DedupKey::Rrname)));
    CHECK_FALSE(state.check_and_insert(dedup_key(support::entry("a.x.com", "TXT"), DedupKey::Rrname)));
    auto typed = FirstSeenState::exact();
    CHECK(typed.check_and_insert(dedup_key(support::entry("a.x.com"), DedupKey::RrnameRrtype)));
    CHECK(typed.check_and_insert(dedup_key(support::entry("a.x.com", "TXT"), DedupKey::RrnameRrtype)));
  }

  TEST_CASE("filter over a stream") {
    const auto dir = support::temp_dir("first_seen_stream");
    {
      LineWriter w((dir / "in.ndjson").string());
      for (const char* n : {"a.x.com", "a.x.com", "b.x.com"}) w.write_line(to_ndjson(support::entry(n)));
    }
    auto state = FirstSeenState::exact();
    Ingest ingest({(dir / "in.ndjson").string()}, {InputFormat::Auto, &state, DedupKey::Rrname});
    std::vector<std::string> names;
    PdnsEntry e;
    while (ingest.next(e)) names.push_back(e.rrname.dotted());
    CHECK(names == std::vector<std::string>{"a.x.com", "b.x.com"});
    CHECK(ingest.stats().deduplicated == 1);
    CHECK(ingest.stats().balanced());

    support::spit(dir / "empty.ndjson", "");
    Ingest none({(dir / "empty.ndjson").string()}, {InputFormat::Auto, &state, DedupKey::Rrname});
    CHECK_FALSE(none.next(e));
  }

  TEST_CASE("exact mode output has no duplicates, checked against a set") {
    std::mt19937_64 rng(6);
    auto state = FirstSeenState::exact();
    std::set<std::string> seen;
    for (int i = 0; i < 50000; ++i) {
      const std::string key = "k" + std::to_string(rng() % 20000) + ".example.com";
      CHECK(state.check_and_insert(key) == seen.insert(key).second);
    }
    CHECK(state.size() == seen.size());
  }

  TEST_CASE("exact capacity is a hard limit") {
    auto state = FirstSeenState::exact(2);
    CHECK(state.check_and_insert("a"));
    CHECK(state.check_and_insert("b"));
    CHECK_FALSE(state.check_and_insert("a"));
    CHECK_THROWS_AS(state.check_and_insert("c"), CapacityExceeded);
  }

  TEST_CASE("approximate mode stays within its declared false-positive rate") {
    // Sized for all 200k keys, so the filter never exceeds its design load.
    auto state = FirstSeenState::approximate(200000, 0.01);
    for (int i = 0; i < 100000; ++i) state.check_and_insert("in" + std::to_string(i));
    int false_positives = 0;
    for (int i = 0; i < 100000; ++i) false_positives += !state.check_and_insert("fresh" + std::to_string(i)) ? 1 : 0;
    CHECK(false_positives <= 1000);
    CHECK(state.declared_false_positive_rate() == doctest::Approx(0.01));
  }

  TEST_CASE("concurrent inserts admit each key once") {
    auto state = FirstSeenState::exact();
    std::atomic<int> admitted{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&] {
        for (int i = 0; i < 20000; ++i) admitted += state.check_and_insert("key" + std::to_string(i)) ? 1 : 0;
      });
    }
    for (auto& t : threads) t.join();
    CHECK(admitted == 20000);
  }
}
