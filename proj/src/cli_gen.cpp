#include <filesystem>

#include "cli_common.hpp"
#include "pdnsa/cli.hpp"
#include "pdnsa/error.hpp"
#include "pdnsa/tunnelgen.hpp"

namespace pdnsa::cli {
namespace {

using nlohmann::json;

GenConfig config_from_json(const json& doc) {
  try {
    GenConfig c;
    c.seed = doc.value("seed", c.seed);
    if (doc.contains("start")) {
      const auto day = parse_day(doc.at("start").get<std::string>());
      if (!day) throw ConfigError("start must be YYYY-MM-DD");
      c.start = *day;
    }
    c.days = doc.value("days", c.days);
    for (const auto& t : doc.value("tunnels", json::array())) {
      TunnelSpec s;
      s.profile = t.at("profile").get<std::string>();
      s.sld = t.at("sld").get<std::string>();
      s.third = t.value("third", s.third);
      s.payload_bytes = t.value("payload_bytes", s.payload_bytes);
      if (t.contains("queries")) s.queries = t.at("queries").get<std::size_t>();
      if (t.contains("rrtype")) s.rrtype = RRType::parse(t.at("rrtype").get<std::string>());
      s.every_day = t.value("every_day", false);
      c.tunnels.push_back(std::move(s));
    }
    for (const auto& b : doc.value("background", json::array())) {
      BackgroundSpec s;
      const auto name = b.at("class").get<std::string>();
      const auto cls = parse_benign_class(name);
      if (!cls) throw ConfigError("unknown background class: " + name);
      s.cls = *cls;
      s.sld = b.at("sld").get<std::string>();
      s.queries = b.value("queries", s.queries);
      c.background.push_back(std::move(s));
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed generator config: ") + e.what());
  }
}

}  // namespace

int cmd_gen(const GenOptions& g, Streams io) {
  std::error_code ec;
  std::filesystem::create_directories(g.out_dir, ec);
  if (ec) throw IoError("cannot create " + g.out_dir + ": " + ec.message());
  const std::string corpus = (std::filesystem::path(g.out_dir) / (g.gzip ? "corpus.ndjson.gz" : "corpus.ndjson")).string();
  const std::string labels = (std::filesystem::path(g.out_dir) / "labels.csv").string();

  if (g.config_path.empty() && g.preset == "shaped") {
    ShapedGenerator gen(g.seed, g.total, 200, g.days);
    LineWriter w(corpus);
    PdnsEntry e;
    std::uint64_t n = 0;
    while (gen.next(e)) {
      w.write_line(to_ndjson(e));
      ++n;
    }
    w.close();
    io.err << n << " entries\n";
    io.out << corpus << "\n";
    return kExitOk;
  }

  GenConfig config;
  if (!g.config_path.empty()) {
    config = config_from_json(load_config_file(g.config_path));
  } else if (g.preset == "classifier") {
    config = classifier_corpus(g.seed, g.per_profile);
  } else if (g.preset == "provider") {
    config = provider_corpus(g.seed, g.days);
  } else {
    config = mixed_corpus(g.seed, g.tunnels, g.benign_per_class, g.days);
  }
  Generator gen(config);
  CorpusWriter w(corpus, labels);
  LabeledEntry e;
  while (gen.next(e)) w.add(e);
  w.close();
  io.err << w.entries() << " entries\n";
  io.out << corpus << "\n" << labels << "\n";
  return kExitOk;
}

int cmd_profiles(std::uint64_t seed, std::size_t samples, const std::string& out_path, Streams io) {
  const std::string text = "# Generated by: pdnsa profiles --seed " + std::to_string(seed) + " --samples " +
                           std::to_string(samples) + "\n" + derive_profiles(seed, samples).to_text();
  if (out_path == "-") {
    io.out << text;
  } else {
    write_file(out_path, text);
    io.out << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace pdnsa::cli
