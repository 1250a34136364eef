#include <set>

#include <json.hpp>

#include "qmc_cli/cli.hpp"
#include "qmc/field.hpp"
#include "qmc/rational.hpp"

namespace qmc::cli {

namespace {

const std::set<std::string, std::less<>> kCommands = {"gen", "quality", "disc", "bound", "plot", "selftest"};

[[noreturn]] void config_error(const std::string& msg) { throw Error(Errc::ConfigError, msg); }

std::uint32_t field_order(const RunConfig& cfg) {
  u128 q = 1;
  for (std::uint32_t i = 0; i < cfg.e; ++i) {
    q *= cfg.p;
    if (q > kMaxFieldOrder) config_error("field order p^e exceeds " + std::to_string(kMaxFieldOrder));
  }
  return static_cast<std::uint32_t>(q);
}

}  // namespace

RunConfig defaults_for(std::string_view command) {
  RunConfig cfg;
  cfg.command = std::string(command);
  if (command == "plot") {
    cfg.p = 5;
    cfg.matrix = "stirling";
    cfg.s = 2;
    cfg.N = 500;
    cfg.seq = "paper-ex2c";
    cfg.out = "plot";
  } else if (command == "bound") {
    cfg.p = 3;
    cfg.N = 9;
    cfg.format = "json";
  }
  return cfg;
}

std::string to_canonical_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["p"] = c.p;
  j["e"] = c.e;
  j["matrix"] = c.matrix;
  j["bijections"] = c.bijections;
  j["seq"] = c.seq;
  j["s"] = c.s;
  j["m"] = c.m;
  j["N"] = c.N;
  j["k_first"] = c.k_first;
  j["k_last"] = c.k_last;
  j["alpha"] = c.alpha;
  j["out"] = c.out;
  j["format"] = c.format;
  j["mode"] = c.mode;
  j["threads"] = c.threads;
  return j.dump();
}

RunConfig config_from_json(std::string_view text, RunConfig c) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    config_error(std::string("config is not valid JSON: ") + ex.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "command") c.command = v.get<std::string>();
      else if (key == "p") c.p = v.get<std::uint32_t>();
      else if (key == "e") c.e = v.get<std::uint32_t>();
      else if (key == "matrix") c.matrix = v.get<std::string>();
      else if (key == "bijections") c.bijections = v.get<std::string>();
      else if (key == "seq") c.seq = v.get<std::string>();
      else if (key == "s") c.s = v.get<std::size_t>();
      else if (key == "m") c.m = v.get<std::size_t>();
      else if (key == "N") c.N = v.get<std::uint64_t>();
      else if (key == "k_first") c.k_first = v.get<std::uint64_t>();
      else if (key == "k_last") c.k_last = v.get<std::uint64_t>();
      else if (key == "alpha") c.alpha = v.is_string() ? v.get<std::string>() : std::to_string(v.get<std::int64_t>());
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "format") c.format = v.get<std::string>();
      else if (key == "mode") c.mode = v.get<std::string>();
      else if (key == "threads") c.threads = v.get<unsigned>();
      else config_error("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& ex) {
      config_error("config key '" + key + "': " + ex.what());
    }
  }
  return c;
}

void validate(const RunConfig& c) {
  if (!kCommands.count(c.command)) config_error("unknown command '" + c.command + "'");
  if (c.command == "selftest") return;
  if (!is_prime(c.p)) config_error("--field " + std::to_string(c.p) + " is not prime");
  if (c.e < 1) config_error("--e must be >= 1");
  const std::uint32_t q = field_order(c);
  if (c.s < 1) config_error("--s must be >= 1");
  if (c.m < 1) config_error("--m must be >= 1");
  if (c.N < 1) config_error("--N must be >= 1");
  if (c.threads < 1) config_error("--threads must be >= 1");
  if (c.k_first > c.k_last) config_error("--k-first exceeds --k-last");
  if (c.format != "csv" && c.format != "json") config_error("--format must be csv or json");
  if (c.mode != "exact" && c.mode != "float") config_error("--mode must be exact or float");
  if (c.matrix == "paper_pairs" && (c.p != 2 || c.e != 1 || c.s != 1))
    config_error("paper_pairs is a single matrix over GF(2): needs --field 2 --e 1 --s 1");
  if (c.matrix == "stirling" && c.e != 1) config_error("stirling matrices need a prime field (--e 1)");
  if (c.command == "disc" && c.s > 3)
    throw Error(Errc::TooLarge, "disc computes exact star discrepancy for s <= 3 only, got s = " + std::to_string(c.s));
  if (c.command == "plot" && c.s != 2) config_error("plot draws two-dimensional points: needs --s 2");
  if (c.command == "bound") {
    try {
      Rational::parse(c.alpha);
    } catch (const Error& ex) {
      config_error("--alpha: " + std::string(ex.what()));
    }
  } else {
    parse_sequence_spec(c.seq, q);
  }
}

MatrixSet build_matrix_set(const RunConfig& c, std::size_t depth) {
  const FieldSpec f = make_field(c.p, c.e);
  if (c.matrix == "identity") {
    std::vector<GeneratingMatrix> mats(c.s, identity_matrix(f, depth));
    return make_matrix_set(std::move(mats));
  }
  if (c.matrix == "stirling") return stirling_matrix_set(f, c.s, depth);
  if (c.matrix == "paper_pairs") return make_matrix_set({paper_pairs_matrix(depth)});
  MatrixSet set = load_matrix_set(c.matrix);
  if (!(set.field == f))
    config_error("matrix file " + c.matrix + " is over GF(" + std::to_string(set.field.q()) + "), not GF(" +
                 std::to_string(f.q()) + ")");
  if (set.s() != c.s)
    config_error("matrix file " + c.matrix + " has s = " + std::to_string(set.s()) + ", not " + std::to_string(c.s));
  return set;
}

BijectionFamily build_bijections(const RunConfig& c) {
  if (c.bijections.empty()) return {};
  BijectionFamily bij = load_bijections(c.bijections);
  bij.validate(make_field(c.p, c.e).q());
  return bij;
}

IndexSequence build_sequence(const RunConfig& c, std::string_view spec) {
  return parse_sequence_spec(spec, make_field(c.p, c.e).q());
}

int exit_code(Errc code) noexcept {
  switch (code) {
    case Errc::ConfigError:
    case Errc::SchemaError:
    case Errc::EntryOutOfRange:
      return 2;
    case Errc::TooLarge:
    case Errc::DepthExceeded:
    case Errc::PrecisionExhausted:
    case Errc::Overflow:
      return 4;
    default:
      return 3;
  }
}

}  // namespace qmc::cli
