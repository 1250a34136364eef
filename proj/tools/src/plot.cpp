#include <cctype>
#include <sstream>

#include "qmc_cli/cli.hpp"

namespace qmc::cli {

namespace {

std::string file_stem(std::string_view spec) {
  std::string out;
  for (char ch : spec) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-') ? ch : '_';
  return out;
}

constexpr int kPanel = 300;   // panel width and height in px
constexpr int kInner = 280;   // unit square side in px

}  // namespace

PlotOutput run_plot(const RunConfig& cfg) {
  const std::vector<std::string> specs = {"natural", "alt", cfg.seq};
  const MatrixSet set = build_matrix_set(cfg, cfg.m);
  const BijectionFamily bij = build_bijections(cfg);
  const ExportMode mode = cfg.mode == "exact" ? ExportMode::Exact : ExportMode::Float;

  PlotOutput out;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPanel * specs.size() << "\" height=\"" << kPanel + 20
      << "\" viewBox=\"0 0 " << kPanel * specs.size() << ' ' << kPanel + 20 << "\">\n";
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const auto pts = generate_block(set, bij, build_sequence(cfg, specs[k]), 0, cfg.N, cfg.m, cfg.threads);
    out.points += pts.size();
    std::ostringstream csv;
    write_points_csv(csv, pts, mode);
    out.csv.emplace_back("panel" + std::to_string(k + 1) + "_" + file_stem(specs[k]) + ".csv", csv.str());

    const int x0 = static_cast<int>(k) * kPanel + 10;
    svg << "<text x=\"" << x0 << "\" y=\"" << kPanel + 12 << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << specs[k] << " (N=" << cfg.N << ")</text>\n";
    // Unit square with y pointing up; circle centres are the float coordinates.
    svg << "<g transform=\"translate(" << x0 << ',' << 10 + kInner << ") scale(" << kInner << ',' << -kInner << ")\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"none\" stroke=\"black\" "
           "stroke-width=\"1\" vector-effect=\"non-scaling-stroke\"/>\n";
    for (const auto& p : pts)
      svg << "<circle cx=\"" << format_double(point_to_float(p, 0)) << "\" cy=\"" << format_double(point_to_float(p, 1))
          << "\" r=\"0.004\"/>\n";
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  out.svg = svg.str();
  return out;
}

}  // namespace qmc::cli
