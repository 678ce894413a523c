#include "wsparse/guarantees.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "wsparse/errors.hpp"
#include "wsparse/linalg.hpp"
#include "wsparse/weighted_norms.hpp"

namespace wsparse {

namespace {

double relative_slack(double lhs, double rhs) {
  return (rhs - lhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

// Largest integer strictly below `bound`. 1/mu is snapped to an integer when
// within 1e-9 so that e.g. mu = 1/3 stored in a double still yields the
// mathematical threshold.
int max_integer_strictly_below(double bound) {
  const double rounded = std::round(bound);
  if (std::abs(bound - rounded) <= 1e-9 * std::max(1.0, std::abs(bound))) {
    bound = rounded;
  }
  const double floored = std::floor(bound);
  return static_cast<int>(floored) - (floored == bound ? 1 : 0);
}

void check_coherence_range(double mu) {
  if (!(mu > 0.0) || mu > 1.0 + 1e-10) {
    throw InvalidCoherence("coherence must lie in (0, 1]");
  }
}

std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  double value = 1.0;
  for (int i = 1; i <= k; ++i) {
    value *= static_cast<double>(n - k + i) / i;
    if (value > static_cast<double>(cap) * 2.0) {
      return cap + 1;
    }
  }
  return static_cast<std::uint64_t>(std::llround(value));
}

}  // namespace

double BasicLemmaReport::min_relative_slack() const {
  double slack = std::min({relative_slack(general_lower, tc_norm_sq),
                           relative_slack(tc_norm_sq, general_upper),
                           relative_slack(sparse_lower, tc_norm_sq),
                           relative_slack(tc_norm_sq, sparse_upper)});
  if (disjoint_supports) {
    slack = std::min(slack, relative_slack(cross_abs, cross_bound));
  }
  return slack;
}

BasicLemmaReport basic_lemma_check(const Dictionary& dict,
                                   const Eigen::VectorXd& c,
                                   const Eigen::VectorXd& d) {
  if (c.size() != dict.atom_count() || d.size() != dict.atom_count()) {
    throw DimensionMismatch("lemma vectors must have length N");
  }
  const Eigen::VectorXd& w = dict.weights();
  const double mu = coherence(dict);

  BasicLemmaReport report;
  report.mu = mu;

  const auto supp_c = support(c);
  const auto supp_d = support(d);
  std::vector<int> overlap;
  std::set_intersection(supp_c.begin(), supp_c.end(), supp_d.begin(),
                        supp_d.end(), std::back_inserter(overlap));
  report.disjoint_supports = overlap.empty();
  if (report.disjoint_supports) {
    report.cross_abs = std::abs(synthesize(dict, c).dot(synthesize(dict, d)));
    report.cross_bound =
        mu * weighted_p_norm(c, w, 1.0) * weighted_p_norm(d, w, 1.0);
  }

  const double l1w = weighted_p_norm(c, w, 1.0);
  const double l2w_sq = weighted_inner(c, c, w);
  report.tc_norm_sq = synthesize(dict, c).squaredNorm();
  report.general_lower = (1.0 + mu) * l2w_sq - mu * l1w * l1w;
  report.general_upper = (1.0 - mu) * l2w_sq + mu * l1w * l1w;

  report.sparsity = static_cast<int>(supp_c.size());
  report.sparse_lower = (1.0 - mu * (report.sparsity - 1)) * l2w_sq;
  report.sparse_upper = (1.0 + mu * (report.sparsity - 1)) * l2w_sq;
  return report;
}

int uniqueness_max_sparsity(double mu) {
  check_coherence_range(mu);
  return std::max(0, max_integer_strictly_below(0.5 * (1.0 / mu + 1.0)));
}

int independence_max_size(double mu) {
  check_coherence_range(mu);
  return std::max(0, max_integer_strictly_below(1.0 + 1.0 / mu));
}

double delta_s_bound(double mu, int s) {
  if (s < 1) throw InvalidSparsity("delta_s needs s >= 1");
  return mu * (s - 1);
}

double delta_s_exact(const Dictionary& dict, int s, std::uint64_t enum_cap) {
  const int big_n = dict.atom_count();
  if (s < 1 || s > big_n) throw InvalidSparsity("delta_s needs 1 <= s <= N");
  if (binomial_capped(big_n, s, enum_cap) > enum_cap) {
    throw TooLarge("support enumeration exceeds cap");
  }

  // Weight-normalized Gram matrix; its diagonal is exactly 1 by definition.
  const Eigen::VectorXd inv_w = dict.weights().cwiseInverse();
  Eigen::MatrixXd gram =
      inv_w.asDiagonal() * (dict.atoms().transpose() * dict.atoms()) *
      inv_w.asDiagonal();
  gram.diagonal().setOnes();

  std::vector<int> supp(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) supp[static_cast<std::size_t>(i)] = i;

  double delta = 0.0;
  Eigen::MatrixXd deviation(s, s);
  while (true) {
    for (int a = 0; a < s; ++a) {
      for (int b = 0; b < s; ++b) {
        deviation(a, b) = gram(supp[a], supp[b]) - (a == b ? 1.0 : 0.0);
      }
    }
    delta = std::max(delta, sym_spectral_norm(deviation));

    // next lexicographic combination
    int pos = s - 1;
    while (pos >= 0 && supp[pos] == big_n - s + pos) --pos;
    if (pos < 0) break;
    ++supp[pos];
    for (int i = pos + 1; i < s; ++i) supp[i] = supp[i - 1] + 1;
  }
  return delta;
}

RecoveryConstants recovery_constants(double mu, int s) {
  if (s < 1) throw InvalidSparsity("recovery constants need s >= 1");
  if (mu < 0.0) throw InvalidCoherence("coherence must be nonnegative");
  const double gap = 1.0 - mu * (2 * s - 1);
  if (!(gap > 0.0)) {
    throw NotApplicable("requires mu (2s - 1) < 1");
  }
  RecoveryConstants out;
  out.c1 = std::sqrt(3.0 - 1.0 / (2 * s - 1)) / gap;
  out.c2 = 2.0 * std::sqrt(mu * s * (1.0 + mu)) / gap;
  return out;
}

double cai_constant(double mu, int s) {
  if (s < 1) throw InvalidSparsity("cai constant needs s >= 1");
  if (mu < 0.0) throw InvalidCoherence("coherence must be nonnegative");
  const double gap = 1.0 - (2 * s - 1) * mu;
  if (!(gap > 0.0)) {
    throw NotApplicable("requires mu (2s - 1) < 1");
  }
  return std::sqrt(3.0 * (1.0 + mu)) / gap;
}

double f_mu(double mu, int s) {
  const double a = 8.0 * s * s - 8.0 * s + 1.0;
  return (a * mu * mu + 2.0 * mu + 1.0) / (1.0 + mu);
}

GuaranteeReport error_bound(double mu, int s, double eta, double eps,
                            double e0) {
  GuaranteeReport report;
  report.mu = mu;
  report.s = s;
  report.eta = eta;
  report.eps = eps;
  report.e0 = e0;
  report.applicable = mu * (2 * s - 1) < 1.0;
  if (report.applicable) {
    const RecoveryConstants rc = recovery_constants(mu, s);
    report.c1 = rc.c1;
    report.c2 = rc.c2;
    report.cai = cai_constant(mu, s);
    report.bound = rc.c1 * (eta + eps) + rc.c2 * e0;
  }
  return report;
}

std::string GuaranteeReport::to_json() const {
  nlohmann::json doc;
  doc["mu"] = mu;
  doc["s"] = s;
  doc["eta"] = eta;
  doc["eps"] = eps;
  doc["e0"] = e0;
  doc["applicable"] = applicable;
  if (c1) doc["C1"] = *c1;
  if (c2) doc["C2"] = *c2;
  if (cai) doc["cai_C"] = *cai;
  if (bound) doc["bound"] = *bound;
  if (observed) doc["observed"] = *observed;
  if (satisfied) doc["satisfied"] = *satisfied;
  if (l1_hypothesis_ok) doc["l1_hypothesis_ok"] = *l1_hypothesis_ok;
  return doc.dump(2);
}

}  // namespace wsparse
