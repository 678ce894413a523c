#include "wsparse/greedy.hpp"

#include <algorithm>
#include <cmath>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "wsparse/errors.hpp"
#include "wsparse/guarantees.hpp"
#include "wsparse/rng.hpp"
#include "wsparse/weighted_norms.hpp"

using namespace wsparse;
using testing::d0;
using testing::orthonormal_basis;
using testing::random_sparse;
using testing::vec;

TEST_CASE("selection picks the largest normalized correlation") {
  const Dictionary ortho = orthonormal_basis(3);
  CHECK(select_index(ortho, vec({0, 1, 0})) == 1);

  // |<r, f3>| / 2 = 2 beats |<r, f1>| / 1 = sqrt(2)
  CHECK(select_index(d0(), vec({std::sqrt(2.0), std::sqrt(2.0)})) == 2);

  // atom scale cancels: a stretched first atom still wins on its own axis
  const Dictionary stretched =
      Dictionary::from_atoms({{10.0, 0.0}, {0.0, 1.0}, {std::sqrt(2.0), std::sqrt(2.0)}});
  CHECK(select_index(stretched, vec({1, 0})) == 0);

  CHECK_THROWS_AS(select_index(d0(), vec({0, 0})), ZeroResidual);
  CHECK_THROWS_AS(select_index(d0(), vec({0, 0, 0})), DimensionMismatch);
}

TEST_CASE("selection is invariant under atom rescaling") {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + rng.index(4);
    const int big_n = 4 + rng.index(7);
    const Dictionary dict = random_dictionary(n, big_n, 0.5, 2.0, rng.next_u64());
    const Eigen::VectorXd y =
        synthesize(dict, random_sparse(big_n, 1 + rng.index(2), rng));

    Eigen::MatrixXd scaled = dict.atoms();
    for (int j = 0; j < big_n; ++j) {
      const double sign = (rng.next_u64() & 1u) ? 1.0 : -1.0;
      scaled.col(j) *= sign * rng.uniform(0.1, 10.0);
    }
    const Dictionary rescaled{std::move(scaled)};

    OmpStop stop;
    stop.residual_tol = 1e-9 * y.norm();
    const auto a = omp_recover(dict, y, stop);
    const auto b = omp_recover(rescaled, y, stop);
    CHECK(a.selected == b.selected);
  }
}

TEST_CASE("one exact step on an orthonormal basis") {
  const Dictionary ortho = orthonormal_basis(4);
  const auto trace = omp_recover(ortho, vec({3, 0, 0, 0}), {});
  CHECK(trace.selected == std::vector<int>{0});
  CHECK(trace.coefficients[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(l0(trace.coefficients) == 1);
  CHECK(trace.residual_norms.back() < 1e-12);
}

TEST_CASE("exact recovery under the coherence condition") {
  const Dictionary dict = two_ortho_dictionary(16);  // mu = 0.25 < 1/3
  Rng rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd c = random_sparse(32, 2, rng);
    const Eigen::VectorXd y = synthesize(dict, c);
    OmpStop stop;
    stop.max_atoms = 2;
    const auto trace = omp_recover(dict, y, stop);

    std::vector<int> got = trace.selected;
    std::sort(got.begin(), got.end());
    REQUIRE(got == support(c));
    REQUIRE((trace.coefficients - c).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(trace.residual_norms.back() < 1e-10);
  }
}

TEST_CASE("exact recovery survives random atom scaling") {
  const Dictionary dict = two_ortho_dictionary(4, 7u);  // mu = 0.5 < 1
  Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd c = random_sparse(8, 1, rng);
    const auto trace = omp_recover(dict, synthesize(dict, c), {});
    REQUIRE(trace.selected == support(c));
    REQUIRE((trace.coefficients - c).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("first selection lands in the support (corollary regime)") {
  const Dictionary dict = two_ortho_dictionary(16);
  Rng rng(73);
  for (int s : {1, 2}) {
    for (int trial = 0; trial < 500; ++trial) {
      const Eigen::VectorXd c = random_sparse(32, s, rng);
      const int j0 = select_index(dict, synthesize(dict, c));
      const auto supp = support(c);
      REQUIRE(std::find(supp.begin(), supp.end(), j0) != supp.end());
    }
  }
}

TEST_CASE("first selection under the delta_s + mu s < 1 hypothesis") {
  // exhaustive sign patterns on every support of the fixtures
  for (const Dictionary& dict :
       {testing::perturbed_identity(6), two_ortho_dictionary(4, 3u), d0()}) {
    const double mu = coherence(dict);
    const int big_n = dict.atom_count();
    for (int s = 1; s <= std::min(3, big_n); ++s) {
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
          REQUIRE(std::find(supp.begin(), supp.end(), j0) != supp.end());
        }
        int pos = s - 1;
        while (pos >= 0 && supp[pos] == big_n - s + pos) --pos;
        if (pos < 0) break;
        ++supp[pos];
        for (int i = pos + 1; i < s; ++i) supp[i] = supp[i - 1] + 1;
      }
    }
  }
}

TEST_CASE("residuals decrease and end orthogonal to the active atoms") {
  const Dictionary dict = two_ortho_dictionary(8, 5u);
  Rng rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd c = random_sparse(16, 3, rng);
    const Eigen::VectorXd y = synthesize(dict, c);
    for (int k = 1; k <= 3; ++k) {
      OmpStop stop;
      stop.max_atoms = k;
      stop.residual_tol = 0.0;
      const auto trace = omp_recover(dict, y, stop);
      const Eigen::VectorXd residual = y - synthesize(dict, trace.coefficients);
      for (int j : trace.selected) {
        CHECK(std::abs(residual.dot(dict.atom(j))) < 1e-8 * y.norm());
      }
      for (std::size_t i = 1; i < trace.residual_norms.size(); ++i) {
        CHECK(trace.residual_norms[i] < trace.residual_norms[i - 1]);
      }
    }
  }
}

TEST_CASE("residual tolerance stopping") {
  const Dictionary dict = two_ortho_dictionary(16);
  Rng rng(83);
  const Eigen::VectorXd y = synthesize(dict, random_sparse(32, 2, rng));
  OmpStop stop;
  stop.residual_tol = 1e-10;
  const auto trace = omp_recover(dict, y, stop);
  CHECK(trace.residual_norms.back() < 1e-10);
}

TEST_CASE("trace serializes with 1-based indices") {
  const auto trace = omp_recover(orthonormal_basis(3), vec({0, 0, 2}), {});
  const auto doc = nlohmann::json::parse(trace.to_json());
  CHECK(doc["selected"] == nlohmann::json::array({3}));
  CHECK(doc["coefficients"].size() == 3);
  CHECK(doc["residual_norms"].size() == 1);
}

TEST_CASE("invalid stopping configuration") {
  OmpStop stop;
  stop.max_atoms = 0;
  CHECK_THROWS_AS(omp_recover(orthonormal_basis(3), vec({1, 0, 0}), stop),
                  InvalidSparsity);
}
