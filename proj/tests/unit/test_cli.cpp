#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "qmc/engine.hpp"
#include "qmc_cli/cli.hpp"

using namespace qmc;
using namespace qmc::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qmc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qmc_cli_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, ConfigRoundTrip) {
  RunConfig c = defaults_for("quality");
  c.p = 5;
  c.matrix = "stirling";
  c.seq = "rat:v=4,alpha=-1/4";
  c.threads = 3;
  EXPECT_EQ(config_from_json(to_canonical_json(c), RunConfig{}), c);
  EXPECT_EQ(to_canonical_json(config_from_json(to_canonical_json(c), RunConfig{})), to_canonical_json(c));
  try {
    config_from_json("{\"colour\": 1}", RunConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConfigError);
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(exit_code(Errc::ConfigError), 2);
  EXPECT_EQ(exit_code(Errc::TooLarge), 4);
  EXPECT_EQ(exit_code(Errc::NotBAdicInteger), 3);
  EXPECT_EQ(run_cli({"gen", "--field", "4"}).code, 2);
  EXPECT_EQ(run_cli({"gen", "--seq", "bogus"}).code, 2);
  EXPECT_EQ(run_cli({"gen", "--frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"gen", "--field", "5", "--seq", "rat:v=5,alpha=0"}).code, 3);
  auto four = run_cli({"disc", "--field", "3", "--s", "4", "--N", "9", "--m", "4"});
  EXPECT_EQ(four.code, 4);
  EXPECT_NE(four.err.find("error: "), std::string::npos);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, GenVanDerCorput) {
  auto r = run_cli({"gen", "--N", "4", "--m", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "n,x1\n0,0/4\n1,2/4\n2,1/4\n3,3/4\n");
  auto f = run_cli({"gen", "--N", "3", "--m", "2", "--mode", "float"});
  EXPECT_EQ(f.out, "n,x1\n0,0\n1,0.5\n2,0.25\n");
  auto j = run_cli({"gen", "--N", "1", "--m", "2", "--format", "json", "--seq", "neg"});
  EXPECT_EQ(j.out, "{\"base\":2,\"s\":1,\"m\":2,\"points\":[{\"n\":0,\"digits\":[[1,1]]}]}\n");
}

TEST(Cli, DiscAndBound) {
  auto d = run_cli({"disc", "--N", "4", "--m", "4"});
  ASSERT_EQ(d.code, 0) << d.err;
  std::istringstream rows(d.out);
  std::string line, last;
  while (std::getline(rows, line)) last = line;
  EXPECT_EQ(last.rfind("4,1/4,0.25,1,1,", 0), 0u) << last;
  auto b = run_cli({"bound"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("\"total\":5"), std::string::npos);
}

TEST(Cli, ConfigFileWithOverrides) {
  auto dir = temp_dir("config");
  std::ofstream(dir / "c.json") << "{\"N\": 2, \"m\": 3, \"mode\": \"float\"}";
  auto r = run_cli({"gen", "--config", (dir / "c.json").string(), "--m", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "n,x1\n0,0\n1,0.5\n");
}

TEST(Cli, PlotDefaults) {
  RunConfig c = defaults_for("plot");
  auto one = run_plot(c);
  EXPECT_EQ(one.points, 1500u);
  ASSERT_EQ(one.csv.size(), 3u);
  for (const auto& [name, text] : one.csv) EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 501) << name;

  // Panel 1 is plain generation with the natural input.
  std::ostringstream natural;
  write_points_csv(natural,
                   generate_block(build_matrix_set(c, c.m), {}, IndexSequence::natural(5), 0, 500, c.m),
                   c.mode == "exact" ? ExportMode::Exact : ExportMode::Float);
  EXPECT_EQ(one.csv[0].second, natural.str());

  c.threads = 4;
  auto four = run_plot(c);
  EXPECT_EQ(four.svg, one.svg);
  EXPECT_EQ(four.csv, one.csv);

  // Circle centres are the float coordinates of panel 3, in order.
  auto pts = generate_block(build_matrix_set(c, c.m), {}, build_sequence(c, c.seq), 0, 500, c.m);
  std::regex circle("<circle cx=\"([^\"]+)\" cy=\"([^\"]+)\"");
  std::vector<std::pair<std::string, std::string>> centres;
  for (auto it = std::sregex_iterator(one.svg.begin(), one.svg.end(), circle); it != std::sregex_iterator(); ++it)
    centres.emplace_back((*it)[1], (*it)[2]);
  ASSERT_EQ(centres.size(), 1500u);
  for (std::size_t n = 0; n < 500; ++n) {
    EXPECT_EQ(centres[1000 + n].first, format_double(point_to_float(pts[n], 0)));
    EXPECT_EQ(centres[1000 + n].second, format_double(point_to_float(pts[n], 1)));
  }
}

TEST(Cli, PlotWritesFiles) {
  auto dir = temp_dir("plot");
  auto r = run_cli({"plot", "--out", dir.string(), "--N", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t files = 0;
  for (auto& e : std::filesystem::directory_iterator(dir)) files += e.is_regular_file();
  EXPECT_EQ(files, 4u);
  EXPECT_TRUE(std::filesystem::exists(dir / "panels.svg"));
}
