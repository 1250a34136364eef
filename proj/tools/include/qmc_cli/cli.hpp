#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmc/engine.hpp"
#include "qmc/error.hpp"
#include "qmc/genmatrix.hpp"
#include "qmc/inputseq.hpp"

namespace qmc::cli {

struct RunConfig {
  std::string command = "gen";
  std::uint32_t p = 2, e = 1;
  std::string matrix = "identity";  // identity | stirling | paper_pairs | path to a matrix-set JSON file
  std::string bijections;           // path to a bijection JSON file; empty for identity maps
  std::string seq = "natural";
  std::size_t s = 1, m = 8;
  std::uint64_t N = 16;
  std::uint64_t k_first = 0, k_last = 0;
  std::string alpha = "0";  // bound only
  std::string out = "-";
  std::string format = "csv";  // csv | json
  std::string mode = "exact";  // exact | float
  unsigned threads = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Defaults for a subcommand (plot differs: base-5 Stirling pair, 500 points).
RunConfig defaults_for(std::string_view command);

// Canonical JSON: every field, fixed key order, no whitespace.
std::string to_canonical_json(const RunConfig& cfg);
// Overlays the keys present in `text` onto `base`; unknown keys are a ConfigError.
RunConfig config_from_json(std::string_view text, RunConfig base);

// Rejects invalid combinations before any computation (ConfigError).
void validate(const RunConfig& cfg);

MatrixSet build_matrix_set(const RunConfig& cfg, std::size_t depth);
BijectionFamily build_bijections(const RunConfig& cfg);
IndexSequence build_sequence(const RunConfig& cfg, std::string_view spec);

struct PlotOutput {
  std::vector<std::pair<std::string, std::string>> csv;  // file name, contents
  std::string svg;
  std::size_t points = 0;  // total over all panels
};

// The three-panel comparison: natural, alt and cfg.seq under the same matrices.
PlotOutput run_plot(const RunConfig& cfg);

// 0 ok, 2 configuration error, 3 mathematical precondition, 4 guard exceeded.
int exit_code(Errc code) noexcept;

// Full command line: argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qmc::cli
