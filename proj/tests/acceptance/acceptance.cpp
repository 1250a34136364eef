// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qmc/selftest.hpp"
#include "qmc_cli/cli.hpp"

namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream f(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

int run_plot_cli(const fs::path& dir, unsigned threads) {
  fs::remove_all(dir);
  const std::string out = dir.string(), th = std::to_string(threads);
  const char* argv[] = {"qmc", "plot", "--out", out.c_str(), "--threads", th.c_str()};
  std::ostringstream sink;
  return qmc::cli::run(6, argv, sink, sink);
}

// `plot` with defaults: 3 x 500 points, identical bytes across runs and thread counts,
// both in memory and as written files.
qmc::CriterionResult criterion12() {
  qmc::CriterionResult r;
  r.id = 12;
  r.name = "plot reproducibility";
  r.budget = 60;
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  try {
    auto cfg = qmc::cli::defaults_for("plot");
    std::vector<qmc::cli::PlotOutput> runs;
    for (unsigned threads : {1u, 4u, 1u, 4u}) {
      cfg.threads = threads;
      runs.push_back(qmc::cli::run_plot(cfg));
    }
    const auto& ref = runs.front();
    ok = ok && ref.points == 1500 && ref.csv.size() == 3;
    for (const auto& [name, text] : ref.csv) {
      std::size_t lines = 0;
      for (char ch : text) lines += ch == '\n';
      ok = ok && lines == 501;
    }
    for (const auto& run : runs) ok = ok && run.csv == ref.csv && run.svg == ref.svg;

    const fs::path base = fs::temp_directory_path() / "qmc_acceptance_plot";
    std::vector<std::map<std::string, std::string>> written;
    for (unsigned threads : {1u, 4u, 1u}) {
      const fs::path dir = base / ("t" + std::to_string(threads) + "_" + std::to_string(written.size()));
      ok = ok && run_plot_cli(dir, threads) == 0;
      written.push_back(read_dir(dir));
    }
    ok = ok && written.front().size() == 4;
    for (const auto& w : written) ok = ok && w == written.front();
    for (const auto& [name, text] : ref.csv) ok = ok && written.front()[name] == text;
    fs::remove_all(base);
    detail = std::to_string(ref.points) + " points in " + std::to_string(ref.csv.size()) + " panels";
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.pass = ok && r.seconds <= r.budget;
  r.detail = detail;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  unsigned threads = 1;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--threads") threads = static_cast<unsigned>(std::stoul(argv[i + 1]));

  int failed = 0;
  for (int id = 1; id <= qmc::kSelftestCriteria; ++id) {
    const auto r = qmc::run_criterion(id, threads);
    std::cout << qmc::format_result(r) << std::endl;
    failed += !r.pass;
  }
  const auto r12 = criterion12();
  std::cout << qmc::format_result(r12) << std::endl;
  failed += !r12.pass;
  std::cout << (failed == 0 ? "all 12 criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
