#include "wsparse/l1solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <nlohmann/json.hpp>

#include "wsparse/errors.hpp"
#include "wsparse/linalg.hpp"
#include "wsparse/rng.hpp"
#include "wsparse/weighted_norms.hpp"

namespace wsparse {

void SolverConfig::validate() const {
  if (max_iters < 1) throw InvalidRange("max_iters must be >= 1");
  if (!(rel_tol > 0.0) || !(feas_tol > 0.0)) {
    throw InvalidRange("tolerances must be positive");
  }
  if (!(step_scale > 0.0) || step_scale > 1.0 || !(step_balance > 0.0)) {
    throw InvalidRange("step policy needs 0 < step_scale <= 1, step_balance > 0");
  }
}

SolverConfig SolverConfig::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid solver config JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("solver config must be a JSON object");
  }
  SolverConfig cfg;
  if (doc.contains("max_iters")) cfg.max_iters = doc["max_iters"].get<int>();
  if (doc.contains("rel_tol")) cfg.rel_tol = doc["rel_tol"].get<double>();
  if (doc.contains("feas_tol")) cfg.feas_tol = doc["feas_tol"].get<double>();
  if (doc.contains("step_scale")) cfg.step_scale = doc["step_scale"].get<double>();
  if (doc.contains("step_balance"))
    cfg.step_balance = doc["step_balance"].get<double>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  cfg.validate();
  return cfg;
}

namespace {

Eigen::VectorXd project_ball(const Eigen::VectorXd& u, const Eigen::VectorXd& center,
                             double radius) {
  const Eigen::VectorXd diff = u - center;
  const double dist = diff.norm();
  if (dist <= radius) return u;
  return center + diff * (radius / dist);
}

Eigen::VectorXd shrink(const Eigen::VectorXd& x, const Eigen::VectorXd& thresh) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double magnitude = std::abs(x[i]) - thresh[i];
    out[i] = magnitude > 0.0 ? std::copysign(magnitude, x[i]) : 0.0;
  }
  return out;
}

// Least-squares refit on the support of the final iterate. Accepted only when
// it stays feasible and does not raise the weighted l1 objective beyond a
// small margin, so it can only sharpen exact-recovery solutions.
void polish_on_support(const Dictionary& dict, const Eigen::VectorXd& y,
                       double eta, const SolverConfig& cfg, SolveResult& result) {
  const auto active = support(result.coefficients, kSolverSupportTol);
  if (active.empty() || static_cast<int>(active.size()) > dict.ambient_dim()) {
    return;
  }
  Eigen::MatrixXd sub(dict.ambient_dim(), static_cast<int>(active.size()));
  for (std::size_t i = 0; i < active.size(); ++i) {
    sub.col(static_cast<Eigen::Index>(i)) = dict.atom(active[i]);
  }
  const Eigen::VectorXd fit = sub.colPivHouseholderQr().solve(y);
  Eigen::VectorXd candidate = Eigen::VectorXd::Zero(dict.atom_count());
  for (std::size_t i = 0; i < active.size(); ++i) {
    candidate[active[i]] = fit[static_cast<Eigen::Index>(i)];
  }
  const double candidate_residual = (y - sub * fit).norm();
  const double candidate_obj =
      weighted_p_norm(candidate, dict.weights(), 1.0);
  if (candidate_residual <= eta + cfg.feas_tol &&
      candidate_obj <= result.objective + 1e-7 * (1.0 + result.objective)) {
    result.coefficients = std::move(candidate);
    result.objective = candidate_obj;
    result.residual_norm = candidate_residual;
  }
}

}  // namespace

SolveResult solve_p1w(const Dictionary& dict, const Eigen::VectorXd& y,
                      double eta, const SolverConfig& cfg) {
  if (y.size() != dict.ambient_dim()) {
    throw DimensionMismatch("measurement length != ambient dimension");
  }
  if (eta < 0.0) throw InvalidRange("eta must be nonnegative");
  cfg.validate();

  const Eigen::MatrixXd& op = dict.atoms();
  const Eigen::VectorXd& w = dict.weights();
  const int big_n = dict.atom_count();

  SolveResult result;
  result.coefficients = Eigen::VectorXd::Zero(big_n);
  result.residual_norm = y.norm();
  result.objective = 0.0;

  // The zero vector is already optimal whenever y itself is inside the ball.
  if (result.residual_norm <= eta) {
    result.converged = true;
    return result;
  }

  const double op_norm = operator_norm_power(op);
  const double tau = cfg.step_scale * cfg.step_balance / op_norm;
  const double sigma = cfg.step_scale / (cfg.step_balance * op_norm);
  const Eigen::VectorXd thresh = tau * w;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(big_n);
  Eigen::VectorXd dual = Eigen::VectorXd::Zero(dict.ambient_dim());
  Eigen::VectorXd tc = Eigen::VectorXd::Zero(dict.ambient_dim());
  Eigen::VectorXd tc_prev = tc;

  double best_obj = std::numeric_limits<double>::infinity();
  bool best_found = false;
  Eigen::VectorXd best_c = c;
  double best_residual = result.residual_norm;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    // Dual ascent on the ball constraint, via Moreau: v - sigma P_B(v/sigma).
    // The extrapolated point 2 c_k - c_{k-1} enters through its synthesis.
    const Eigen::VectorXd v = dual + sigma * (2.0 * tc - tc_prev);
    dual = v - sigma * project_ball(v / sigma, y, eta);

    const Eigen::VectorXd c_next = shrink(c - tau * (op.transpose() * dual), thresh);
    const double change = (c_next - c).norm();

    c = c_next;
    tc_prev = tc;
    tc = op * c;

    const double residual = (y - tc).norm();
    const bool feasible = residual <= eta + cfg.feas_tol;
    if (feasible) {
      const double obj = c.cwiseAbs().dot(w);
      if (obj < best_obj) {
        best_obj = obj;
        best_c = c;
        best_residual = residual;
        best_found = true;
      }
    }

    result.iterations = iter;
    if (feasible && change <= cfg.rel_tol * std::max(1.0, c.norm())) {
      result.converged = true;
      break;
    }
  }

  if (result.converged || !best_found) {
    result.coefficients = c;
    result.residual_norm = (y - tc).norm();
    result.objective = c.cwiseAbs().dot(w);
  } else {
    result.coefficients = std::move(best_c);
    result.residual_norm = best_residual;
    result.objective = best_obj;
  }

  polish_on_support(dict, y, eta, cfg, result);
  return result;
}

Eigen::VectorXd oracle_p1w(const Dictionary& dict, const Eigen::VectorXd& y) {
  if (y.size() != dict.ambient_dim()) {
    throw DimensionMismatch("measurement length != ambient dimension");
  }
  const int big_n = dict.atom_count();
  if (big_n > 12) throw TooLarge("oracle enumeration is limited to N <= 12");
  const int n = dict.ambient_dim();
  const Eigen::VectorXd& w = dict.weights();

  double best_cost = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best = Eigen::VectorXd::Zero(big_n);
  bool found = y.norm() < 1e-10;  // the empty support fits y = 0

  for (std::uint32_t mask = 1; mask < (1u << big_n); ++mask) {
    std::vector<int> supp;
    for (int j = 0; j < big_n; ++j) {
      if (mask & (1u << j)) supp.push_back(j);
    }
    const int k = static_cast<int>(supp.size());
    if (k > n) continue;

    Eigen::MatrixXd sub(n, k);
    for (int i = 0; i < k; ++i) sub.col(i) = dict.atom(supp[i]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    if (qr.rank() < k) continue;  // dependent atoms never form a vertex

    const Eigen::VectorXd fit = qr.solve(y);
    if ((y - sub * fit).norm() >= 1e-10) continue;

    double cost = 0.0;
    for (int i = 0; i < k; ++i) cost += std::abs(fit[i]) * w[supp[i]];
    if (cost < best_cost) {
      best_cost = cost;
      best.setZero();
      for (int i = 0; i < k; ++i) best[supp[i]] = fit[i];
      found = true;
    }
  }
  if (!found) {
    throw Error("no exact fit found; dictionary does not span the signal");
  }
  return best;
}

GuaranteeReport verify_recovery(const Dictionary& dict,
                                const Eigen::VectorXd& c_true, int s,
                                double eps, double eta,
                                const SolverConfig& cfg) {
  if (c_true.size() != dict.atom_count()) {
    throw DimensionMismatch("coefficient vector length != atom count");
  }
  if (eps < 0.0 || eta < eps) {
    throw InvalidRange("verify_recovery needs eta >= eps >= 0");
  }

  const Eigen::VectorXd& w = dict.weights();
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(dict.ambient_dim());
  if (eps > 0.0) {
    Rng rng(cfg.seed);
    do {
      for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = rng.gaussian();
    } while (noise.norm() < 1e-12);
    noise *= eps / noise.norm();  // uniform direction, ||z|| exactly eps
  }
  const Eigen::VectorXd y = synthesize(dict, c_true) + noise;

  const SolveResult sol = solve_p1w(dict, y, eta, cfg);

  GuaranteeReport report =
      error_bound(coherence(dict), s, eta, eps, tail_e0(c_true, w, s));
  const double observed =
      std::sqrt(weighted_inner(c_true - sol.coefficients,
                               c_true - sol.coefficients, w));
  report.observed = observed;
  if (report.applicable) {
    report.satisfied = observed <= *report.bound + 1e-6;
  }
  const double true_obj = weighted_p_norm(c_true, w, 1.0);
  report.l1_hypothesis_ok =
      true_obj >= sol.objective - 1e-9 * (1.0 + true_obj);
  return report;
}

}  // namespace wsparse
