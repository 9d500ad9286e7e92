#include <CLI11.hpp>

#include <iostream>

#include "bench_harness.hpp"

int main(int argc, char** argv) {
  pdnsa::bench::BenchOptions o;
  CLI::App app{"Streaming throughput and memory benchmark"};
  app.add_option("-n,--entries", o.entries, "Entries to stream");
  app.add_option("--seed", o.seed, "Seed");
  app.add_option("--tunnels", o.tunnels, "Planted tunnel SLDs");
  app.add_option("--profiles", o.profiles, "Profile file");
  CLI11_PARSE(app, argc, argv);
  try {
    std::cout << pdnsa::bench::run_stream_bench_isolated(o).to_text();
  } catch (const std::exception& e) {
    std::cerr << "pdnsa_bench: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
