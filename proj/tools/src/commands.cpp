#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmc/discrepancy.hpp"
#include "qmc/quality.hpp"
#include "qmc/selftest.hpp"
#include "qmc_cli/cli.hpp"

namespace qmc::cli {

namespace {

const char* const kFooter = R"(Sequence specs (--seq):
  natural                     s_n = n
  neg                         s_n = -n - 1
  alt                         s_n = (-1)^n floor((n+1)/2)
  paper-ex2c                  s_n = (2n-1)/4, the same as affine:a=1/2,c=-1/4
  affine:a=<r>,c=<r>          s_n = a n + c
  rat:v=<int>,alpha=<r>       s_n = n/v + alpha, gcd(v, q) = 1
  quad:a=<r>,c=<r>,d=<r>      s_n = a n^2 + c n + d
  beatty:p=<int>,q=<int>,nmax=<int>
                              s_n = floor(p n / q) for n <= nmax
  <r> is an integer or u/v in lowest terms with v coprime to q.

Digit order: q-adic inputs are read least significant digit first (digit r is
the coefficient of q^r); output coordinates are written most significant digit
first, x = sum_j d_j q^-j, and exact values are printed as a/q^m.

Exit codes: 0 ok, 2 configuration error, 3 mathematical precondition failed,
4 size or precision guard exceeded.)";

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--field", c.p, "field characteristic p")->capture_default_str();
  sub->add_option("--e", c.e, "field degree, q = p^e")->capture_default_str();
  sub->add_option("--matrix", c.matrix, "identity | stirling | paper_pairs | matrix-set JSON file")
      ->capture_default_str();
  sub->add_option("--bijections", c.bijections, "bijection JSON file (default: identity maps)");
  sub->add_option("--seq", c.seq, "input sequence spec (see below)")->capture_default_str();
  sub->add_option("--s", c.s, "dimension")->capture_default_str();
  sub->add_option("--m", c.m, "digits per coordinate (matrix depth used)")->capture_default_str();
  sub->add_option("--N", c.N, "number of points")->capture_default_str();
  sub->add_option("--k-first", c.k_first, "first block index")->capture_default_str();
  sub->add_option("--k-last", c.k_last, "last block index")->capture_default_str();
  sub->add_option("--alpha", c.alpha, "shift alpha of s_n = n + alpha (bound)")->capture_default_str();
  sub->add_option("--out", c.out, "output file, '-' for stdout (plot: output directory)")->capture_default_str();
  sub->add_option("--format", c.format, "csv | json")->capture_default_str();
  sub->add_option("--mode", c.mode, "exact | float")->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads (output does not depend on it)")->capture_default_str();
  sub->add_option("--config", "JSON file with any of the options above; flags given on the command line win");
  sub->footer(kFooter);
}

// Writes to cfg.out, or to `out` when it is "-".
void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error(Errc::ConfigError, "cannot write " + c.out);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::ConfigError, "cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string cmd_gen(const RunConfig& c) {
  const auto set = build_matrix_set(c, c.m);
  const auto pts = generate_block(set, build_bijections(c), build_sequence(c, c.seq), 0, c.N, c.m, c.threads);
  if (c.format == "json") return points_to_json(pts);
  std::ostringstream os;
  write_points_csv(os, pts, c.mode == "exact" ? ExportMode::Exact : ExportMode::Float);
  return os.str();
}

std::string cmd_quality(const RunConfig& c) {
  const auto set = build_matrix_set(c, c.m);
  const auto profile = t_profile(set, c.m);
  const auto nets =
      verify_T_sequence(set, build_bijections(c), build_sequence(c, c.seq), c.m, c.k_first, c.k_last, profile, c.threads);
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(to_canonical_json(c));
  if (set.convention) j["convention"] = *set.convention;
  j["t_profile"] = nlohmann::ordered_json::parse(to_json(profile));
  j["nets"] = nlohmann::ordered_json::parse(to_json(nets));
  return j.dump(2) + "\n";
}

// Rows at N = q, q^2, ... below c.N, then c.N itself.
std::string cmd_disc(const RunConfig& c) {
  const auto set = build_matrix_set(c, c.m);
  const auto pts = to_rational_points(
      generate_block(set, build_bijections(c), build_sequence(c, c.seq), 0, c.N, c.m, c.threads));
  std::vector<std::uint64_t> Ns;
  for (u128 n = set.field.q(); n < c.N; n *= set.field.q()) Ns.push_back(static_cast<std::uint64_t>(n));
  Ns.push_back(c.N);
  auto json_rows = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << "N,D*_exact,D*_float,ND*_exact,ND*_float,witness,closed\n";
  for (auto N : Ns) {
    std::vector<RationalPoint> prefix(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(N));
    DiscrepancyResult d;
    if (c.s == 1) {
      std::vector<Rational> xs;
      for (auto& p : prefix) xs.push_back(p[0]);
      d = star_discrepancy_1d(xs);
    } else {
      d = star_discrepancy_exact(prefix);
    }
    const Rational nd = d.value * Rational(static_cast<std::int64_t>(N));
    std::string corner;
    std::vector<std::string> corner_json;
    for (const auto& y : d.corner) {
      corner += (corner.empty() ? "" : " ") + y.to_string();
      corner_json.push_back(y.to_string());
    }
    csv << N << ',' << d.value << ',' << format_double(d.value_float) << ',' << nd << ',' << format_double(nd.to_double())
        << ',' << corner << ',' << (d.closed ? "closed" : "open") << '\n';
    json_rows.push_back({{"N", N},
                         {"value", d.value.to_string()},
                         {"value_float", d.value_float},
                         {"N_times_value", nd.to_string()},
                         {"witness", corner_json},
                         {"closed", d.closed}});
  }
  if (c.format == "csv") return csv.str();
  nlohmann::ordered_json j;
  j["discrepancy"] = "star";
  j["precision"] = c.m;
  j["rows"] = std::move(json_rows);
  return j.dump(2) + "\n";
}

std::string cmd_bound(const RunConfig& c) {
  const std::uint32_t q = make_field(c.p, c.e).q();
  std::size_t r = 0;
  for (u128 pw = q; pw <= c.N; pw *= q) ++r;
  const auto set = build_matrix_set(c, std::max(c.m, r));
  const auto profile = t_profile(set, r);
  const auto alpha = rational_digits(Rational::parse(c.alpha), q);
  return to_json(prop2_bound(alpha, profile, q, c.s, c.N));
}

int cmd_plot(const RunConfig& c, std::ostream& out) {
  const PlotOutput plot = run_plot(c);
  std::filesystem::create_directories(c.out);
  auto write = [&](const std::string& name, const std::string& text) {
    const auto path = std::filesystem::path(c.out) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::ConfigError, "cannot write " + path.string());
    f << text;
    out << path.string() << '\n';
  };
  for (const auto& [name, text] : plot.csv) write(name, text);
  write("panels.svg", plot.svg);
  return 0;
}

int cmd_selftest(const RunConfig& c, std::ostream& out) {
  bool all = true;
  for (int id = 1; id <= kSelftestCriteria; ++id) {
    const auto r = run_criterion(id, c.threads);
    out << format_result(r) << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

// The subcommand and --config are needed before parsing, to pick defaults.
std::pair<std::string, std::string> prescan(int argc, const char* const* argv) {
  std::string command, config;
  for (int i = 1; i < argc; ++i) {
    const std::string_view a = argv[i];
    if (a == "--config" && i + 1 < argc) config = argv[++i];
    else if (a.rfind("--config=", 0) == 0) config = std::string(a.substr(9));
    else if (command.empty() && !a.empty() && a[0] != '-') command = std::string(a);
  }
  return {command, config};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto [command, config_path] = prescan(argc, argv);
    RunConfig cfg = defaults_for(command.empty() ? "gen" : command);
    if (!config_path.empty()) {
      cfg = config_from_json(read_file(config_path), cfg);
      cfg.command = command.empty() ? cfg.command : command;
    }

    CLI::App app{"Digital (T,s)-sequences over finite fields fed by q-adic integer inputs"};
    app.require_subcommand(1);
    app.footer(kFooter);
    const std::pair<const char*, const char*> subs[] = {
        {"gen", "generate N points at precision m (CSV or JSON)"},
        {"quality", "T-profile from the rank condition and brute-force net checks of blocks k-first..k-last"},
        {"disc", "exact star discrepancy table (s <= 3)"},
        {"bound", "discrepancy bound for s_n = n + alpha as a per-term breakdown (JSON)"},
        {"plot", "three-panel point plot (natural, alt, --seq) as CSV files and one SVG"},
        {"selftest", "run the acceptance checks"},
    };
    for (const auto& [name, help] : subs) add_common(app.add_subcommand(name, help), cfg);

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    validate(cfg);

    if (cfg.command == "gen") emit(cfg, out, cmd_gen(cfg));
    else if (cfg.command == "quality") emit(cfg, out, cmd_quality(cfg));
    else if (cfg.command == "disc") emit(cfg, out, cmd_disc(cfg));
    else if (cfg.command == "bound") emit(cfg, out, cmd_bound(cfg));
    else if (cfg.command == "plot") return cmd_plot(cfg, out);
    else return cmd_selftest(cfg, out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qmc::cli
