#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "wsparse/dictionary.hpp"

namespace wsparse {

// Evaluated sides of the coherence lemma for one (c, d) pair:
//   cross:   |<Tc, Td>| <= mu ||c||_1w ||d||_1w      (disjoint supports only)
//   general: (1+mu)||c||_2w^2 - mu||c||_1w^2 <= ||Tc||^2
//                                 <= (1-mu)||c||_2w^2 + mu||c||_1w^2
//   sparse:  [1 - mu(s-1)]||c||_2w^2 <= ||Tc||^2 <= [1 + mu(s-1)]||c||_2w^2
// with s the exact support size of c.
struct BasicLemmaReport {
  double mu = 0.0;
  bool disjoint_supports = false;  // cross part is vacuous when false
  double cross_abs = 0.0;
  double cross_bound = 0.0;
  double tc_norm_sq = 0.0;
  double general_lower = 0.0;
  double general_upper = 0.0;
  int sparsity = 0;
  double sparse_lower = 0.0;
  double sparse_upper = 0.0;

  // Smallest (rhs - lhs) / max(1, |lhs|, |rhs|) over the applicable parts.
  double min_relative_slack() const;
  bool holds(double rel_slack = 1e-9) const {
    return min_relative_slack() >= -rel_slack;
  }
};

BasicLemmaReport basic_lemma_check(const Dictionary& dict,
                                   const Eigen::VectorXd& c,
                                   const Eigen::VectorXd& d);

// Largest s with s < (1/mu + 1)/2: pairs of distinct s-sparse vectors cannot
// synthesize the same signal below this level.
int uniqueness_max_sparsity(double mu);

// Largest s with s < 1 + 1/mu: any s atoms are linearly independent.
int independence_max_size(double mu);

// Coherence bound mu(s-1) on the restricted-isometry-type constant.
double delta_s_bound(double mu, int s);

// Exact delta_s = sup over s-sparse c of |  ||Tc||^2 - ||c||_2w^2 | / ||c||_2w^2,
// computed as the max over all size-s supports S of the spectral norm of
// (G_S - I), where G is the weight-normalized Gram matrix. Enumerates all
// C(N, s) supports; throws TooLarge past `enum_cap`.
double delta_s_exact(const Dictionary& dict, int s,
                     std::uint64_t enum_cap = 1000000);

struct RecoveryConstants {
  double c1;  // multiplies ||Tv|| (and eta + eps in the noisy bound)
  double c2;  // multiplies the compressibility tail e0
};

// Constants of the weighted recovery bound
//   ||v||_2w <= C1 ||Tv|| + C2 e0,
//   C1 = sqrt(3 - 1/(2s-1)) / (1 - mu(2s-1)),
//   C2 = 2 sqrt(mu s (1+mu)) / (1 - mu(2s-1)).
// Requires mu(2s-1) < 1; throws NotApplicable otherwise.
RecoveryConstants recovery_constants(double mu, int s);

// The Cai-Wang-Xu unit-norm constant sqrt(3(1+mu)) / (1 - (2s-1)mu), kept for
// side-by-side comparison; C1 above is strictly smaller wherever both apply.
double cai_constant(double mu, int s);

// F(mu) = ((8s^2 - 8s + 1)mu^2 + 2mu + 1) / (1 + mu); nondecreasing on
// [0, 1/(2s-1)] with F(1/(2s-1)) = (6s-4)/(2s-1).
double f_mu(double mu, int s);

// A fully evaluated recovery guarantee. When the hypothesis mu(2s-1) < 1
// fails, `applicable` is false and every derived quantity is absent (never
// NaN); `observed`/`satisfied` are filled by the verification harness.
struct GuaranteeReport {
  double mu = 0.0;
  int s = 0;
  double eta = 0.0;
  double eps = 0.0;
  double e0 = 0.0;
  bool applicable = false;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<double> cai;
  std::optional<double> bound;
  std::optional<double> observed;
  std::optional<bool> satisfied;
  std::optional<bool> l1_hypothesis_ok;  // ||c_true||_1w >= ||c*||_1w

  std::string to_json() const;
};

// Evaluate the right-hand side C1 (eta + eps) + C2 e0 when applicable.
GuaranteeReport error_bound(double mu, int s, double eta, double eps, double e0);

}  // namespace wsparse
