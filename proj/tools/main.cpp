#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wsparse/dictionary.hpp"
#include "wsparse/errors.hpp"
#include "wsparse/greedy.hpp"
#include "wsparse/guarantees.hpp"
#include "wsparse/l1solver.hpp"
#include "wsparse/rng.hpp"
#include "wsparse/weighted_norms.hpp"

namespace {

using wsparse::Dictionary;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> split_params(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> params;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw wsparse::ParseError("generator parameter must be key=value: " + item);
    }
    params.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return params;
}

double parse_double(const std::string& text) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw wsparse::ParseError("not a number: " + text);
  }
  if (pos != text.size()) throw wsparse::ParseError("not a number: " + text);
  return value;
}

std::uint64_t parse_u64(const std::string& text) {
  std::size_t pos = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw wsparse::ParseError("not an unsigned integer: " + text);
  }
  if (pos != text.size()) {
    throw wsparse::ParseError("not an unsigned integer: " + text);
  }
  return value;
}

// Either a JSON file path or "gen:NAME:key=value,...". Generators:
//   gen:two_ortho:n=16[,seed=7]
//   gen:random:n=8,N=16,lo=0.5,hi=2.0,seed=1
Dictionary resolve_dictionary(const std::string& spec) {
  if (spec.rfind("gen:", 0) != 0) {
    return wsparse::load_dictionary_file(spec);
  }
  const auto second = spec.find(':', 4);
  const std::string name =
      second == std::string::npos ? spec.substr(4) : spec.substr(4, second - 4);
  const std::string rest =
      second == std::string::npos ? "" : spec.substr(second + 1);
  const auto params = split_params(rest);

  if (name == "two_ortho") {
    std::optional<int> n;
    std::optional<std::uint64_t> seed;
    for (const auto& [key, value] : params) {
      if (key == "n") {
        n = static_cast<int>(parse_u64(value));
      } else if (key == "seed") {
        seed = parse_u64(value);
      } else {
        throw wsparse::ParseError("unknown two_ortho parameter: " + key);
      }
    }
    if (!n) throw wsparse::ParseError("two_ortho needs n=<power of 2>");
    return wsparse::two_ortho_dictionary(*n, seed);
  }
  if (name == "random") {
    std::optional<int> n, big_n;
    double lo = 0.5, hi = 2.0;
    std::uint64_t seed = 0;
    for (const auto& [key, value] : params) {
      if (key == "n") {
        n = static_cast<int>(parse_u64(value));
      } else if (key == "N") {
        big_n = static_cast<int>(parse_u64(value));
      } else if (key == "lo") {
        lo = parse_double(value);
      } else if (key == "hi") {
        hi = parse_double(value);
      } else if (key == "seed") {
        seed = parse_u64(value);
      } else {
        throw wsparse::ParseError("unknown random parameter: " + key);
      }
    }
    if (!n || !big_n) throw wsparse::ParseError("random needs n= and N=");
    return wsparse::random_dictionary(*n, *big_n, lo, hi, seed);
  }
  throw wsparse::ParseError("unknown generator: " + name);
}

Eigen::VectorXd load_vector_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wsparse::ParseError("cannot open vector file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw wsparse::ParseError(std::string("invalid vector JSON: ") + e.what());
  }
  if (!doc.is_array()) throw wsparse::ParseError("vector JSON must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number()) {
      throw wsparse::ParseError("vector entries must be numbers");
    }
    v[static_cast<Eigen::Index>(i)] = doc[i].get<double>();
  }
  return v;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw wsparse::ParseError("cannot open output file: " + out_path);
  out << text;
}

// Draw an s-sparse coefficient vector with magnitudes in [0.5, 2) and random
// signs on a uniformly random support.
Eigen::VectorXd draw_sparse(int big_n, int s, wsparse::Rng& rng) {
  if (s < 1 || s > big_n) {
    throw wsparse::ParseError("sparsity must lie in [1, N]");
  }
  std::vector<int> pool(static_cast<std::size_t>(big_n));
  for (int i = 0; i < big_n; ++i) pool[static_cast<std::size_t>(i)] = i;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(big_n);
  for (int k = 0; k < s; ++k) {
    const int pick = k + rng.index(big_n - k);
    std::swap(pool[k], pool[pick]);
    const double magnitude = rng.uniform(0.5, 2.0);
    const double sign = (rng.next_u64() & 1u) ? 1.0 : -1.0;
    c[pool[k]] = sign * magnitude;
  }
  return c;
}

int cmd_coherence(const std::string& dict_spec, const std::string& format,
                  const std::string& out_path) {
  const Dictionary dict = resolve_dictionary(dict_spec);
  const double mu = wsparse::coherence(dict);
  const double welch =
      wsparse::welch_lower_bound(dict.ambient_dim(), dict.atom_count());
  const double w_min = dict.weights().minCoeff();
  const double w_max = dict.weights().maxCoeff();

  std::string text;
  if (format == "json") {
    nlohmann::json doc;
    doc["n"] = dict.ambient_dim();
    doc["N"] = dict.atom_count();
    doc["mu"] = mu;
    doc["welch_lower_bound"] = welch;
    doc["weight_min"] = w_min;
    doc["weight_max"] = w_max;
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "n: " << dict.ambient_dim() << "\n"
       << "N: " << dict.atom_count() << "\n"
       << "mu: " << format_g12(mu) << "\n"
       << "welch_lower_bound: " << format_g12(welch) << "\n"
       << "weight_min: " << format_g12(w_min) << "\n"
       << "weight_max: " << format_g12(w_max) << "\n";
    text = os.str();
  }
  write_output(out_path, text);
  return kExitOk;
}

int cmd_bounds(double mu, int s, double eta, double eps, double e0,
               const std::string& format, const std::string& out_path) {
  const wsparse::GuaranteeReport report =
      wsparse::error_bound(mu, s, eta, eps, e0);
  std::string text;
  if (format == "json") {
    text = report.to_json() + "\n";
  } else {
    std::ostringstream os;
    os << "applicable: " << (report.applicable ? "true" : "false") << "\n";
    if (report.applicable) {
      os << "C1: " << format_g12(*report.c1) << "\n"
         << "C2: " << format_g12(*report.c2) << "\n"
         << "bound: " << format_g12(*report.bound) << "\n"
         << "cai_C: " << format_g12(*report.cai) << "\n"
         << "ratio_new_over_old: " << format_g12(*report.c1 / *report.cai)
         << "\n";
    }
    text = os.str();
  }
  write_output(out_path, text);
  return kExitOk;
}

int cmd_omp(const std::string& dict_spec, const std::string& y_path,
            int synthetic_s, std::uint64_t seed, std::optional<int> max_atoms,
            std::optional<double> residual_tol, const std::string& out_path) {
  const Dictionary dict = resolve_dictionary(dict_spec);

  Eigen::VectorXd y;
  Eigen::VectorXd c_true;
  const bool synthetic = synthetic_s > 0;
  if (synthetic) {
    wsparse::Rng rng(seed);
    c_true = draw_sparse(dict.atom_count(), synthetic_s, rng);
    y = wsparse::synthesize(dict, c_true);
  } else {
    if (y_path.empty()) {
      throw wsparse::ParseError("omp needs --y <file> or --synthetic-s <s>");
    }
    y = load_vector_json(y_path);
  }

  wsparse::OmpStop stop;
  stop.max_atoms = synthetic && !max_atoms ? std::optional<int>(synthetic_s)
                                           : max_atoms;
  stop.residual_tol = residual_tol;
  const wsparse::OmpTrace trace = wsparse::omp_recover(dict, y, stop);

  nlohmann::json doc = nlohmann::json::parse(trace.to_json());
  if (synthetic) {
    auto true_support = wsparse::support(c_true);
    std::vector<int> got = trace.selected;
    std::sort(got.begin(), got.end());
    doc["recovered"] = got == true_support;
    auto one_based = nlohmann::json::array();
    for (int idx : true_support) one_based.push_back(idx + 1);
    doc["true_support"] = std::move(one_based);
  }
  write_output(out_path, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_solve(const std::string& dict_spec, const std::string& y_path,
              int synthetic_s, std::uint64_t seed, double eta,
              const std::string& config_path, const std::string& out_path) {
  const Dictionary dict = resolve_dictionary(dict_spec);

  wsparse::SolverConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw wsparse::ParseError("cannot open config: " + config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    cfg = wsparse::SolverConfig::from_json_text(buffer.str());
  }

  Eigen::VectorXd y;
  if (synthetic_s > 0) {
    wsparse::Rng rng(seed);
    y = wsparse::synthesize(dict, draw_sparse(dict.atom_count(), synthetic_s, rng));
  } else {
    if (y_path.empty()) {
      throw wsparse::ParseError("solve needs --y <file> or --synthetic-s <s>");
    }
    y = load_vector_json(y_path);
  }

  const wsparse::SolveResult result = wsparse::solve_p1w(dict, y, eta, cfg);
  nlohmann::json doc;
  doc["coefficients"] = std::vector<double>(
      result.coefficients.data(),
      result.coefficients.data() + result.coefficients.size());
  doc["converged"] = result.converged;
  doc["iterations"] = result.iterations;
  doc["objective"] = result.objective;
  doc["residual_norm"] = result.residual_norm;
  write_output(out_path, doc.dump(2) + "\n");
  return result.converged ? kExitOk : kExitNumerical;
}

struct ExperimentConfig {
  std::string dict_spec;
  int trials = 0;
  std::vector<int> s_grid;
  std::vector<double> eps_grid;
  std::vector<double> eta_grid;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "csv";

  void validate() const {
    if (dict_spec.empty()) throw wsparse::ParseError("experiment needs a dictionary");
    if (trials < 1) throw wsparse::ParseError("trials must be >= 1");
    if (s_grid.empty()) throw wsparse::ParseError("s grid must be nonempty");
    if (eps_grid.empty() || eps_grid.size() != eta_grid.size()) {
      throw wsparse::ParseError("eps and eta grids must be nonempty and paired");
    }
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
      if (eps_grid[i] < 0.0 || eta_grid[i] < eps_grid[i]) {
        throw wsparse::ParseError("each pair needs eta >= eps >= 0");
      }
    }
    for (int s : s_grid) {
      if (s < 1) throw wsparse::ParseError("sparsity levels must be >= 1");
    }
    if (format != "csv" && format != "json") {
      throw wsparse::ParseError("format must be csv or json");
    }
  }

  static ExperimentConfig from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw wsparse::ParseError("cannot open config: " + path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw wsparse::ParseError(std::string("invalid experiment config: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
      cfg.dict_spec = doc.at("dict").get<std::string>();
      cfg.trials = doc.at("trials").get<int>();
      cfg.s_grid = doc.at("s").get<std::vector<int>>();
      cfg.eps_grid = doc.at("eps").get<std::vector<double>>();
      cfg.eta_grid = doc.at("eta").get<std::vector<double>>();
      if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
      if (doc.contains("out")) cfg.out_path = doc["out"].get<std::string>();
      if (doc.contains("format")) cfg.format = doc["format"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw wsparse::ParseError(std::string("invalid experiment config: ") + e.what());
    }
    return cfg;
  }
};

int cmd_experiment(const ExperimentConfig& config) {
  config.validate();
  const Dictionary dict = resolve_dictionary(config.dict_spec);
  const double mu = wsparse::coherence(dict);
  const wsparse::Rng base(config.seed);

  struct Row {
    std::uint64_t trial, seed;
    int s;
    double eps, eta, e0;
    wsparse::GuaranteeReport report;
  };
  std::vector<Row> rows;
  std::uint64_t counter = 0;
  std::uint64_t applicable_count = 0, satisfied_count = 0;

  for (int s : config.s_grid) {
    for (std::size_t pair = 0; pair < config.eps_grid.size(); ++pair) {
      const double eps = config.eps_grid[pair];
      const double eta = config.eta_grid[pair];
      for (int t = 0; t < config.trials; ++t) {
        wsparse::Rng trial_rng = base.fork(counter);
        const Eigen::VectorXd c_true =
            draw_sparse(dict.atom_count(), s, trial_rng);
        wsparse::SolverConfig solver_cfg;
        solver_cfg.seed = trial_rng.next_u64();

        Row row;
        row.trial = counter;
        row.seed = solver_cfg.seed;
        row.s = s;
        row.eps = eps;
        row.eta = eta;
        row.e0 = wsparse::tail_e0(c_true, dict.weights(), s);
        row.report =
            wsparse::verify_recovery(dict, c_true, s, eps, eta, solver_cfg);
        if (row.report.applicable) {
          ++applicable_count;
          if (row.report.satisfied.value_or(false)) ++satisfied_count;
        }
        rows.push_back(std::move(row));
        ++counter;
      }
    }
  }

  const double rate = applicable_count == 0
                          ? 1.0
                          : static_cast<double>(satisfied_count) /
                                static_cast<double>(applicable_count);

  std::string text;
  if (config.format == "csv") {
    std::ostringstream os;
    os << "trial,seed,s,mu,eps,eta,e0,observed,bound,cai_bound,applicable,"
          "satisfied\n";
    for (const Row& row : rows) {
      os << row.trial << ',' << row.seed << ',' << row.s << ','
         << format_g12(mu) << ',' << format_g12(row.eps) << ','
         << format_g12(row.eta) << ',' << format_g12(row.e0) << ','
         << format_g12(*row.report.observed) << ',';
      if (row.report.applicable) {
        // Competitor bound differs from ours only in the (eta+eps) constant.
        const double cai_bound = *row.report.cai * (row.eta + row.eps) +
                                 *row.report.c2 * row.e0;
        os << format_g12(*row.report.bound) << ',' << format_g12(cai_bound)
           << ",true," << (*row.report.satisfied ? "true" : "false") << "\n";
      } else {
        os << ",,false,\n";
      }
    }
    os << "# trials=" << rows.size() << " applicable=" << applicable_count
       << " satisfied=" << satisfied_count
       << " satisfied_rate=" << format_g12(rate) << "\n";
    text = os.str();
  } else {
    nlohmann::json doc;
    auto json_rows = nlohmann::json::array();
    for (const Row& row : rows) {
      nlohmann::json r = nlohmann::json::parse(row.report.to_json());
      r["trial"] = row.trial;
      r["seed"] = row.seed;
      if (row.report.applicable) {
        r["cai_bound"] = *row.report.cai * (row.eta + row.eps) +
                         *row.report.c2 * row.e0;
      }
      json_rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(json_rows);
    doc["aggregate"] = {{"trials", rows.size()},
                        {"applicable", applicable_count},
                        {"satisfied", satisfied_count},
                        {"satisfied_rate", rate}};
    text = doc.dump(2) + "\n";
  }
  write_output(config.out_path, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery toolkit for dictionaries with non-unit-norm atoms"};
  app.require_subcommand(1);

  std::string dict_spec, out_path, format = "text", y_path, config_path;
  double mu = 0.0, eta = 0.0, eps = 0.0, e0 = 0.0;
  int s = 1;
  std::uint64_t seed = 0;
  int synthetic_s = 0;
  std::optional<int> max_atoms;
  std::optional<double> residual_tol;

  auto* coherence_cmd = app.add_subcommand("coherence", "Coherence and Welch bound");
  coherence_cmd->add_option("--dict", dict_spec, "Dictionary file or gen:NAME:params")
      ->required();
  coherence_cmd->add_option("--format", format, "text or json");
  coherence_cmd->add_option("--out", out_path, "Output path (default stdout)");

  auto* bounds_cmd = app.add_subcommand("bounds", "Recovery bound constants");
  bounds_cmd->add_option("--mu", mu, "Coherence")->required();
  bounds_cmd->add_option("--s", s, "Sparsity level")->required();
  bounds_cmd->add_option("--eta", eta, "Constraint radius");
  bounds_cmd->add_option("--eps", eps, "Noise level");
  bounds_cmd->add_option("--e0", e0, "Compressibility tail");
  bounds_cmd->add_option("--format", format, "text or json");
  bounds_cmd->add_option("--out", out_path, "Output path (default stdout)");

  auto* omp_cmd = app.add_subcommand("omp", "Orthogonal matching pursuit");
  omp_cmd->add_option("--dict", dict_spec, "Dictionary file or gen:NAME:params")
      ->required();
  omp_cmd->add_option("--y", y_path, "Measurement vector (JSON array file)");
  omp_cmd->add_option("--synthetic-s", synthetic_s,
                      "Draw a random s-sparse truth and measure it");
  omp_cmd->add_option("--seed", seed, "Seed for synthetic mode");
  omp_cmd->add_option("--max-atoms", max_atoms, "Stop after this many atoms");
  omp_cmd->add_option("--tol", residual_tol, "Stop below this residual norm");
  omp_cmd->add_option("--out", out_path, "Output path (default stdout)");

  auto* solve_cmd = app.add_subcommand("solve", "Weighted l1 recovery (P_1w)");
  solve_cmd->add_option("--dict", dict_spec, "Dictionary file or gen:NAME:params")
      ->required();
  solve_cmd->add_option("--y", y_path, "Measurement vector (JSON array file)");
  solve_cmd->add_option("--synthetic-s", synthetic_s,
                        "Draw a random s-sparse truth and measure it");
  solve_cmd->add_option("--seed", seed, "Seed for synthetic mode");
  solve_cmd->add_option("--eta", eta, "Constraint radius");
  solve_cmd->add_option("--config", config_path, "Solver config JSON");
  solve_cmd->add_option("--out", out_path, "Output path (default stdout)");

  auto* exp_cmd = app.add_subcommand("experiment", "Randomized bound verification");
  std::string exp_config_path;
  ExperimentConfig exp_flags;
  exp_cmd->add_option("--config", exp_config_path, "Experiment config JSON");
  exp_cmd->add_option("--dict", exp_flags.dict_spec, "Dictionary file or gen:NAME:params");
  exp_cmd->add_option("--trials", exp_flags.trials, "Trials per (s, eps, eta) cell");
  exp_cmd->add_option("--s", exp_flags.s_grid, "Sparsity levels");
  exp_cmd->add_option("--eps", exp_flags.eps_grid, "Noise levels (paired with --eta)");
  exp_cmd->add_option("--eta", exp_flags.eta_grid, "Constraint radii (paired with --eps)");
  exp_cmd->add_option("--seed", exp_flags.seed, "Global seed");
  exp_cmd->add_option("--out", exp_flags.out_path, "Output path (default stdout)");
  exp_cmd->add_option("--format", exp_flags.format, "csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (coherence_cmd->parsed()) {
      return cmd_coherence(dict_spec, format, out_path);
    }
    if (bounds_cmd->parsed()) {
      return cmd_bounds(mu, s, eta, eps, e0, format, out_path);
    }
    if (omp_cmd->parsed()) {
      return cmd_omp(dict_spec, y_path, synthetic_s, seed, max_atoms,
                     residual_tol, out_path);
    }
    if (solve_cmd->parsed()) {
      return cmd_solve(dict_spec, y_path, synthetic_s, seed, eta, config_path,
                       out_path);
    }
    if (exp_cmd->parsed()) {
      const ExperimentConfig config = exp_config_path.empty()
                                          ? exp_flags
                                          : ExperimentConfig::from_file(exp_config_path);
      return cmd_experiment(config);
    }
  } catch (const wsparse::RankDeficientActiveSet& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const wsparse::ZeroResidual& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const wsparse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
