// Acceptance harness: runs every acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exits nonzero if
// any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "wsparse/dictionary.hpp"
#include "wsparse/greedy.hpp"
#include "wsparse/guarantees.hpp"
#include "wsparse/l1solver.hpp"
#include "wsparse/rng.hpp"
#include "wsparse/weighted_norms.hpp"

namespace fs = std::filesystem;
using namespace wsparse;
using testing::random_sparse;
using testing::random_vector;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;  // 0: no budget stated
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------- fixtures

std::vector<Dictionary> small_fixtures() {
  std::vector<Dictionary> fixtures;
  fixtures.push_back(testing::orthonormal_basis(4));
  fixtures.push_back(testing::d0());
  fixtures.push_back(two_ortho_dictionary(4));
  fixtures.push_back(two_ortho_dictionary(4, 7u));
  fixtures.push_back(testing::perturbed_identity(6));
  fixtures.push_back(random_dictionary(5, 10, 0.5, 2.0, 3u));
  fixtures.push_back(random_dictionary(6, 12, 1.0, 1.0, 4u));
  fixtures.push_back(random_dictionary(4, 12, 0.5, 2.0, 5u));
  return fixtures;
}

// -------------------------------------------------------------- criteria

// 1. Basic Lemma parts (i)-(iii) on 10^4 randomized draws.
Outcome basic_lemma_suite() {
  Rng rng(1001);
  double worst = 1.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + rng.index(5);
    const int big_n = 3 + rng.index(8);
    const bool unit = (trial % 2) == 0;
    const Dictionary dict = random_dictionary(
        n, big_n, unit ? 1.0 : 0.5, unit ? 1.0 : 2.0, rng.next_u64());

    // disjoint supports so part (i) is exercised on every draw
    const int kc = 1 + rng.index(big_n - 1);
    const int kd = 1 + rng.index(big_n - kc);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(big_n);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(big_n);
    std::vector<int> pool(static_cast<std::size_t>(big_n));
    for (int i = 0; i < big_n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < kc + kd; ++k) {
      const int pick = k + rng.index(big_n - k);
      std::swap(pool[k], pool[pick]);
      (k < kc ? c : d)[pool[k]] = rng.gaussian();
    }

    const auto report = basic_lemma_check(dict, c, d);
    worst = std::min(worst, report.min_relative_slack());
    if (!report.holds(1e-9)) {
      return {false, "slack " + fmt(report.min_relative_slack()) +
                         " at trial " + std::to_string(trial)};
    }
  }
  return {true, "10000 draws, worst slack " + fmt(worst)};
}

// 2. delta_s oracle vs. coherence bound, with the tightness witness.
Outcome delta_oracle_vs_bound() {
  for (const Dictionary& dict : small_fixtures()) {
    const double mu = coherence(dict);
    for (int s = 1; s <= std::min(4, dict.atom_count()); ++s) {
      const double exact = delta_s_exact(dict, s);
      const double bound = delta_s_bound(mu, s);
      if (exact > bound + 1e-9) {
        return {false, "delta_" + std::to_string(s) + " = " + fmt(exact) +
                           " exceeds mu(s-1) = " + fmt(bound)};
      }
    }
  }
  const double witness = delta_s_exact(two_ortho_dictionary(4), 2);
  if (std::abs(witness - 0.5) > 1e-12) {
    return {false, "tightness witness delta_2 = " + fmt(witness) + " != 0.5"};
  }
  return {true, "8 fixtures, s <= 4; witness delta_2 = 0.5 exact"};
}

// 3. Welch bound and scale invariance on 10^3 random dictionaries.
Outcome welch_and_scale_invariance() {
  Rng rng(1003);
  double worst_drift = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + rng.index(7);
    const int big_n = 2 + rng.index(15);
    const Dictionary dict = random_dictionary(n, big_n, 0.5, 2.0, rng.next_u64());
    const double mu = coherence(dict);
    if (mu < welch_lower_bound(n, big_n) - 1e-12 || mu > 1.0 + 1e-10) {
      return {false, "welch violated: mu = " + fmt(mu)};
    }
    Eigen::MatrixXd scaled = dict.atoms();
    for (int j = 0; j < big_n; ++j) {
      const double sign = (rng.next_u64() & 1u) ? 1.0 : -1.0;
      scaled.col(j) *= sign * rng.uniform(0.25, 4.0);
    }
    const double drift = std::abs(coherence(Dictionary(std::move(scaled))) - mu);
    worst_drift = std::max(worst_drift, drift);
    if (drift > 1e-10) {
      return {false, "coherence drifted " + fmt(drift) + " under rescaling"};
    }
  }
  return {true, "1000 dictionaries, max rescaling drift " + fmt(worst_drift)};
}

// 4. OMP exact recovery at mu = 0.25 for s in {1, 2}.
Outcome omp_exact_recovery() {
  const Dictionary dict = two_ortho_dictionary(16);
  Rng rng(1004);
  double worst_coef_err = 0.0;
  for (int s : {1, 2}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const Eigen::VectorXd c = random_sparse(32, s, rng);
      OmpStop stop;
      stop.max_atoms = s;
      const auto trace = omp_recover(dict, synthesize(dict, c), stop);
      std::vector<int> got = trace.selected;
      std::sort(got.begin(), got.end());
      if (got != support(c)) {
        return {false, "support missed at s = " + std::to_string(s)};
      }
      const double err = (trace.coefficients - c).cwiseAbs().maxCoeff();
      worst_coef_err = std::max(worst_coef_err, err);
      if (err >= 1e-8) {
        return {false, "coefficient error " + fmt(err)};
      }
    }
  }
  return {true, "2000 recoveries, max coefficient error " + fmt(worst_coef_err)};
}

// 5. First selection lands in the support whenever delta_s + mu s < 1,
//    exhaustively over supports and sign patterns.
Outcome first_selection_theorem() {
  long checked = 0;
  for (const Dictionary& dict : small_fixtures()) {
    const double mu = coherence(dict);
    const int big_n = dict.atom_count();
    for (int s = 1; s <= std::min(4, big_n); ++s) {
      if (delta_s_exact(dict, s) + mu * s >= 1.0) continue;
      std::vector<int> supp(static_cast<std::size_t>(s));
      for (int i = 0; i < s; ++i) supp[static_cast<std::size_t>(i)] = i;
      while (true) {
        for (std::uint32_t signs = 0; signs < (1u << s); ++signs) {
          Eigen::VectorXd c = Eigen::VectorXd::Zero(big_n);
          for (int i = 0; i < s; ++i) {
            c[supp[static_cast<std::size_t>(i)]] =
                (signs & (1u << i)) ? -1.0 : 1.0;
          }
          const int j0 = select_index(dict, synthesize(dict, c));
          ++checked;
          if (std::find(supp.begin(), supp.end(), j0) == supp.end()) {
            return {false, "selection left the support (s = " +
                               std::to_string(s) + ")"};
          }
        }
        int pos = s - 1;
        while (pos >= 0 && supp[pos] == big_n - s + pos) --pos;
        if (pos < 0) break;
        ++supp[pos];
        for (int i = pos + 1; i < s; ++i) supp[i] = supp[i - 1] + 1;
      }
    }
  }
  return {true, std::to_string(checked) + " sign patterns, all in support"};
}

// 6. Solver agrees with the enumeration oracle on 200 small instances.
Outcome solver_oracle_equivalence() {
  Rng rng(1006);
  double worst_gap = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng.index(5);
    const int big_n = n + 1 + rng.index(10 - n);
    const bool unit = (trial % 2) == 0;
    const Dictionary dict = random_dictionary(
        n, big_n, unit ? 1.0 : 0.5, unit ? 1.0 : 2.0, rng.next_u64());
    const Eigen::VectorXd y =
        (trial % 3 == 0) ? random_vector(n, rng)
                         : synthesize(dict, random_sparse(big_n, 1 + n / 2, rng));

    const double expected =
        weighted_p_norm(oracle_p1w(dict, y), dict.weights(), 1.0);
    const auto result = solve_p1w(dict, y, 0.0);
    const double gap =
        std::abs(result.objective - expected) / std::max(1.0, expected);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6) {
      return {false, "objective gap " + fmt(gap) + " at trial " +
                         std::to_string(trial)};
    }
  }
  return {true, "200 instances, worst relative objective gap " + fmt(worst_gap)};
}

// 7. Theorem-6 dominance across 10^3 randomized applicable trials.
Outcome error_bound_dominance() {
  const Dictionary variants[] = {two_ortho_dictionary(16),
                                 two_ortho_dictionary(16, 11u),
                                 two_ortho_dictionary(16, 23u)};
  Rng rng(1007);
  int satisfied = 0;
  double worst_margin = 0.0;
  const int total = 1000;
  for (int trial = 0; trial < total; ++trial) {
    const Dictionary& dict = variants[trial % 3];
    const int s = 1 + (trial / 3) % 2;
    const double eps = ((trial / 6) % 2 == 0) ? 0.0 : 0.01;
    const Eigen::VectorXd c_true = random_sparse(32, s, rng);
    SolverConfig cfg;
    cfg.seed = rng.next_u64();
    const auto report = verify_recovery(dict, c_true, s, eps, eps, cfg);
    if (!report.applicable) {
      return {false, "unexpectedly inapplicable trial"};
    }
    if (*report.satisfied) {
      ++satisfied;
      worst_margin = std::max(worst_margin, *report.observed - *report.bound);
    } else {
      return {false, "observed " + fmt(*report.observed) + " > bound " +
                         fmt(*report.bound) + " at trial " +
                         std::to_string(trial)};
    }
  }
  return {true, std::to_string(satisfied) + "/" + std::to_string(total) +
                    " satisfied, worst observed-bound margin " +
                    fmt(worst_margin)};
}

// 8. New constant beats Cai-Wang-Xu on the whole applicable grid.
Outcome improvement_over_cai() {
  for (int s = 1; s <= 8; ++s) {
    const double limit = 1.0 / (2 * s - 1);
    for (int k = 1; k <= 100; ++k) {
      const double mu = limit * k / 101.0;
      if (!(recovery_constants(mu, s).c1 < cai_constant(mu, s))) {
        return {false, "C1 >= cai at s = " + std::to_string(s) +
                           ", mu = " + fmt(mu)};
      }
    }
  }
  const double c1 = recovery_constants(0.25, 1).c1;
  const double cai = cai_constant(0.25, 1);
  if (std::abs(c1 - 1.8856181) > 1e-6 || std::abs(cai - 2.5819889) > 1e-6) {
    return {false, "spot values " + fmt(c1) + ", " + fmt(cai)};
  }
  return {true, "800 grid points; spot s=1, mu=0.25: " + fmt(c1) + " < " +
                    fmt(cai)};
}

// 9. F(mu) monotone on [0, 1/(2s-1)] with the stated endpoint identity.
Outcome f_mu_checks() {
  for (int s = 1; s <= 8; ++s) {
    const double limit = 1.0 / (2 * s - 1);
    double prev = f_mu(0.0, s);
    for (int k = 1; k < 1000; ++k) {
      const double value = f_mu(limit * k / 999.0, s);
      if (value < prev - 1e-12) {
        return {false, "F decreased at s = " + std::to_string(s)};
      }
      prev = value;
    }
    const double endpoint = f_mu(limit, s);
    const double expected = (6.0 * s - 4.0) / (2.0 * s - 1.0);
    if (std::abs(endpoint - expected) > 1e-12) {
      return {false, "endpoint identity off by " + fmt(endpoint - expected)};
    }
  }
  return {true, "8000 grid points monotone; endpoints match (6s-4)/(2s-1)"};
}

// 10. The experiment command is byte-deterministic for a fixed seed.
Outcome experiment_determinism() {
  const fs::path dir = fs::temp_directory_path() / "wsparse_acceptance";
  fs::create_directories(dir);
  const fs::path out_a = dir / "run_a.csv";
  const fs::path out_b = dir / "run_b.csv";
  const std::string base =
      std::string(WSPARSE_CLI_PATH) +
      " experiment --dict gen:two_ortho:n=16 --trials 25 --s 1 2 "
      "--eps 0 0.01 --eta 0 0.01 --seed 20240501 --format csv --out ";
  for (const fs::path& out : {out_a, out_b}) {
    const int status = std::system((base + out.string()).c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      return {false, "experiment command failed"};
    }
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  const std::string a = slurp(out_a);
  const std::string b = slurp(out_b);
  if (a.empty() || a != b) {
    return {false, "outputs differ across runs"};
  }
  if (a.find("satisfied_rate=1") == std::string::npos) {
    return {false, "satisfaction rate below 1"};
  }
  return {true, "two runs byte-identical (" + std::to_string(a.size()) +
                    " bytes), satisfied_rate=1"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"basic lemma suite (10^4 draws)", 30.0, basic_lemma_suite},
      {"delta_s oracle vs bound", 60.0, delta_oracle_vs_bound},
      {"welch bound + scale invariance", 10.0, welch_and_scale_invariance},
      {"omp exact recovery", 30.0, omp_exact_recovery},
      {"first-selection theorem (exhaustive)", 0.0, first_selection_theorem},
      {"solver-oracle equivalence", 300.0, solver_oracle_equivalence},
      {"error-bound dominance (10^3 trials)", 600.0, error_bound_dominance},
      {"improvement over Cai-Wang-Xu", 1.0, improvement_over_cai},
      {"F(mu) monotonicity + endpoint", 0.0, f_mu_checks},
      {"experiment determinism", 0.0, experiment_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (criteria[i].budget_seconds > 0.0 &&
        elapsed > criteria[i].budget_seconds) {
      outcome.pass = false;
      outcome.detail += " [over " + fmt(criteria[i].budget_seconds) +
                        " s budget]";
    }
    std::printf("[%s] %2zu. %s — %s (%.2f s)\n",
                outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].name.c_str(),
                outcome.detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu acceptance criteria passed\n", criteria.size());
  return 0;
}
