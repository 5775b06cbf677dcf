#include <phs/boundary.hpp>
#include <phs/rng.hpp>

#include <doctest.h>

#include "generators.hpp"

#include <cmath>
#include <stdexcept>

using namespace phs;

namespace {

/// Convenience: the 2x1 orthonormal column (g1, g2)/|(g1, g2)|.
BoundarySubspace line(double g1, double g2) {
  ComplexMatrix basis(2, 1);
  basis << g1, g2;
  basis /= basis.norm();
  return BoundarySubspace(1, basis);
}

ComplexMatrix row2(double w1, double w2) {
  ComplexMatrix w(1, 2);
  w << w1, w2;
  return w;
}

}  // namespace

TEST_CASE("BoundarySubspace insists on orthonormal bases") {
  ComplexMatrix skewed(2, 1);
  skewed << 1.0, 1.0;  // norm sqrt(2): not a unit column
  CHECK_THROWS_AS(BoundarySubspace(1, skewed), std::invalid_argument);
  CHECK_THROWS_AS(BoundarySubspace(2, skewed), std::invalid_argument);

  const BoundarySubspace v = BoundarySubspace::from_span(1, skewed);
  CHECK(v.dim() == 1);
  CHECK(std::abs(std::abs(v.basis()(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-12);

  // A duplicated column is dropped by the rank-revealing orthonormalization.
  ComplexMatrix dup(2, 2);
  dup << 1.0, 2.0, 1.0, 2.0;
  CHECK(BoundarySubspace::from_span(1, dup).dim() == 1);
}

TEST_CASE("dissipativity of one-dimensional trace lines") {
  CHECK(is_dissipative_subspace(line(1.0, 1.0)));        // Re<1,1> = 1
  CHECK_FALSE(is_dissipative_subspace(line(1.0, -1.0)));  // Re<1,-1> = -1
  CHECK(is_dissipative_subspace(BoundarySubspace(1, ComplexMatrix(2, 0))));

  CHECK(is_maximal_dissipative_subspace(line(1.0, 1.0)));
  CHECK_FALSE(
      is_maximal_dissipative_subspace(BoundarySubspace(1, ComplexMatrix(2, 0))));

  // d = 2 but only one basis direction: dissipative yet not maximal.
  ComplexMatrix thin = ComplexMatrix::Zero(4, 1);
  thin(0, 0) = thin(2, 0) = 1.0 / std::sqrt(2.0);
  const BoundarySubspace v(2, thin);
  CHECK(is_dissipative_subspace(v));
  CHECK_FALSE(is_maximal_dissipative_subspace(v));
}

TEST_CASE("phi on hand-checked lines") {
  // g1 = g2: the difference map sends g1+g2 to 0.
  const PartialContraction flat = phi(line(1.0, 1.0));
  REQUIRE(flat.domain_basis.cols() == 1);
  CHECK(std::abs(flat.action(0, 0)) < 1e-14);
  CHECK(std::abs(flat.zero_extension().matrix()(0, 0)) < 1e-14);

  // The g1 = 0 line: 1 maps to -1.
  const ContractionK k = phi(line(0.0, 1.0)).zero_extension();
  CHECK(std::abs(k.matrix()(0, 0) - Complex(-1.0)) < 1e-14);

  // Empty subspace: empty domain.
  const PartialContraction none = phi(BoundarySubspace(1, ComplexMatrix(2, 0)));
  CHECK(none.domain_basis.cols() == 0);

  CHECK_THROWS_AS((void)phi(line(1.0, -1.0)), std::invalid_argument);
}

TEST_CASE("psi on hand-checked contractions") {
  ComplexMatrix zero1 = ComplexMatrix::Zero(1, 1);
  const BoundarySubspace diag = psi(ContractionK(zero1));
  ComplexMatrix expected(2, 1);
  expected << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(subspace_gap(diag.basis(), expected) < 1e-12);

  const Index d = 3;
  const BoundarySubspace lower =
      psi(ContractionK((-ComplexMatrix::Identity(d, d)).eval()));
  ComplexMatrix lower_expected = ComplexMatrix::Zero(2 * d, d);
  lower_expected.bottomRows(d) = ComplexMatrix::Identity(d, d);
  CHECK(subspace_gap(lower.basis(), lower_expected) < 1e-12);

  const BoundarySubspace upper =
      psi(ContractionK(ComplexMatrix::Identity(d, d).eval()));
  ComplexMatrix upper_expected = ComplexMatrix::Zero(2 * d, d);
  upper_expected.topRows(d) = ComplexMatrix::Identity(d, d);
  CHECK(subspace_gap(upper.basis(), upper_expected) < 1e-12);
}

TEST_CASE("ContractionK rejects expansions") {
  ComplexMatrix big(1, 1);
  big << 1.5;
  CHECK_THROWS_AS(ContractionK{big}, std::invalid_argument);
  ComplexMatrix edge(1, 1);
  edge << 1.0;
  CHECK(ContractionK(edge).norm() == doctest::Approx(1.0));
}

TEST_CASE("validate_w on hand-checked rows") {
  const WReport absorbing = validate_w(BoundaryMatrixW(row2(1.0, 1.0)));
  CHECK(absorbing.rank_ok);
  CHECK(absorbing.psd_ok);
  CHECK(absorbing.admissible());

  const WReport injecting = validate_w(BoundaryMatrixW(row2(1.0, -1.0)));
  CHECK(injecting.rank_ok);
  CHECK_FALSE(injecting.psd_ok);

  const WReport degenerate = validate_w(BoundaryMatrixW(row2(0.0, 0.0)));
  CHECK_FALSE(degenerate.rank_ok);

  // Skew condition: flux form is exactly zero, which still counts as PSD.
  const WReport conservative = validate_w(BoundaryMatrixW(row2(1.0, 0.0)));
  CHECK(conservative.admissible());

  CHECK_THROWS_AS(BoundaryMatrixW(ComplexMatrix::Zero(2, 3)),
                  std::invalid_argument);
}

TEST_CASE("theta on hand-checked matrices") {
  const Index d = 3;
  ComplexMatrix left(d, 2 * d);
  left << ComplexMatrix::Identity(d, d), ComplexMatrix::Zero(d, d);
  CHECK(operator_norm(theta(BoundaryMatrixW(left)).matrix() +
                      ComplexMatrix::Identity(d, d)) < 1e-12);

  ComplexMatrix right(d, 2 * d);
  right << ComplexMatrix::Zero(d, d), ComplexMatrix::Identity(d, d);
  CHECK(operator_norm(theta(BoundaryMatrixW(right)).matrix() -
                      ComplexMatrix::Identity(d, d)) < 1e-12);

  // -(2+1)^-1 (2-1) = -1/3.
  CHECK(std::abs(theta(BoundaryMatrixW(row2(2.0, 1.0))).matrix()(0, 0) -
                 Complex(-1.0 / 3.0)) < 1e-12);

  // W1 + W2 = 0: theta undefined (W is not admissible).
  CHECK_THROWS_AS((void)theta(BoundaryMatrixW(row2(1.0, -1.0))),
                  std::runtime_error);
}

TEST_CASE("theta_section on hand-checked contractions") {
  ComplexMatrix zero1 = ComplexMatrix::Zero(1, 1);
  CHECK(operator_norm(theta_section(ContractionK(zero1)).matrix() -
                      row2(-1.0, -1.0)) < 1e-14);

  ComplexMatrix minus1(1, 1);
  minus1 << -1.0;
  CHECK(operator_norm(theta_section(ContractionK(minus1)).matrix() -
                      row2(-2.0, 0.0)) < 1e-14);

  ComplexMatrix third(1, 1);
  third << -1.0 / 3.0;
  const ComplexMatrix w = theta_section(ContractionK(third)).matrix();
  CHECK(std::abs(w(0, 0) - Complex(-4.0 / 3.0)) < 1e-14);
  CHECK(std::abs(w(0, 1) - Complex(-2.0 / 3.0)) < 1e-14);
  // ... which is proportional to [2, 1], closing the loop with theta.
  CHECK(std::abs(theta(BoundaryMatrixW(w)).matrix()(0, 0) -
                 Complex(-1.0 / 3.0)) < 1e-12);
}

TEST_CASE("w_kernel_subspace on hand-checked rows") {
  // W = [1, 1]: kernel f = -e, triplet line g1 = g2, the K = 0 condition.
  const BoundarySubspace absorbing =
      w_kernel_subspace(BoundaryMatrixW(row2(1.0, 1.0)));
  CHECK(subspace_gap(absorbing.basis(), line(1.0, 1.0).basis()) < 1e-12);
  CHECK(is_dissipative_subspace(absorbing));
  CHECK(std::abs(phi(absorbing).zero_extension().matrix()(0, 0)) < 1e-12);

  // W = [1, 0]: kernel f = 0, triplet line g1 = 0, the K = -1 condition.
  const BoundarySubspace conservative =
      w_kernel_subspace(BoundaryMatrixW(row2(1.0, 0.0)));
  CHECK(subspace_gap(conservative.basis(), line(0.0, 1.0).basis()) < 1e-12);
  CHECK(std::abs(phi(conservative).zero_extension().matrix()(0, 0) -
                 Complex(-1.0)) < 1e-12);

  // W = [1, -1]: kernel f = e, triplet line g1 = -g2: energy-injecting.
  const BoundarySubspace injecting =
      w_kernel_subspace(BoundaryMatrixW(row2(1.0, -1.0)));
  CHECK_FALSE(is_dissipative_subspace(injecting));

  // W = [0, 0]: rank deficient, so the kernel is everything (dimension 2d);
  // such an oversized subspace can never be dissipative.
  const BoundarySubspace degenerate =
      w_kernel_subspace(BoundaryMatrixW(row2(0.0, 0.0)));
  CHECK(degenerate.dim() == 2);
  CHECK_FALSE(is_dissipative_subspace(degenerate));
  CHECK_FALSE(validate_w(BoundaryMatrixW(row2(0.0, 0.0))).rank_ok);
}

TEST_CASE("psi inverts phi and phi inverts psi on random contractions") {
  Rng rng(301);
  for (int it = 0; it < 200; ++it) {
    const Index d = 1 + it % 6;
    const ComplexMatrix k = testgen::random_contraction(d, rng);
    CAPTURE(it);

    const BoundarySubspace v = psi(ContractionK(k));
    REQUIRE(is_maximal_dissipative_subspace(v));

    const PartialContraction p = phi(v);
    REQUIRE(p.domain_basis.cols() == d);
    const ComplexMatrix k_back = p.zero_extension().matrix();
    CHECK((k_back - k).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(subspace_gap(psi(ContractionK(k_back)).basis(), v.basis()) <= 1e-9);
  }
}

TEST_CASE("phi restricted to a sub-line of a dissipative subspace") {
  Rng rng(302);
  for (int it = 0; it < 50; ++it) {
    const Index d = 2 + it % 4;
    const ComplexMatrix k = testgen::random_contraction(d, rng);
    const BoundarySubspace full = psi(ContractionK(k));
    // Any subset of basis columns is still dissipative, but no longer maximal.
    const BoundarySubspace partial(d, full.basis().leftCols(d - 1).eval());
    CAPTURE(it);
    CHECK(is_dissipative_subspace(partial));
    CHECK_FALSE(is_maximal_dissipative_subspace(partial));

    const PartialContraction p = phi(partial);
    CHECK(p.domain_basis.cols() == d - 1);
    // The partial action is contractive column by column: |action u| <= |u|.
    CHECK(operator_norm(p.action) <= 1.0 + 1e-10);
    CHECK(p.zero_extension().norm() <= 1.0 + 1e-10);
  }
}

TEST_CASE("theta calculus round trips on random admissible boundary "
          "matrices") {
  Rng rng(303);
  for (int it = 0; it < 200; ++it) {
    const Index d = 1 + it % 6;
    CAPTURE(it);

    // theta inverts its section exactly.
    const ComplexMatrix k = testgen::random_contraction(d, rng);
    const BoundaryMatrixW section = theta_section(ContractionK(k));
    REQUIRE(validate_w(section).admissible());
    CHECK((theta(section).matrix() - k).cwiseAbs().maxCoeff() <= 1e-10);

    // Row transforms leave the kernel, hence theta, unchanged.
    const BoundaryMatrixW w = testgen::random_admissible_w(d, rng);
    REQUIRE(validate_w(w).admissible());
    const ContractionK th = theta(w);
    CHECK(th.norm() <= 1.0 + 1e-9);

    const BoundarySubspace kernel = w_kernel_subspace(w);
    REQUIRE(kernel.dim() == d);
    CHECK(subspace_gap(kernel.basis(), psi(th).basis()) <= 1e-9);

    // Domain law on the kernel: (K - 1) f - (K + 1) e = 0 with f = -g1.
    const ComplexMatrix f = -kernel.g1_block();
    const ComplexMatrix e = kernel.g2_block();
    const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
    CHECK(operator_norm((th.matrix() - eye) * f - (th.matrix() + eye) * e) <=
          1e-9);
  }
}

TEST_CASE("flux form expansion W Sigma W* = W1 W2* + W2 W1*") {
  Rng rng(304);
  for (int it = 0; it < 50; ++it) {
    const Index d = 1 + it % 5;
    const ComplexMatrix w = rng.gaussian(d, 2 * d);
    ComplexMatrix sigma = ComplexMatrix::Zero(2 * d, 2 * d);
    sigma.topRightCorner(d, d) = ComplexMatrix::Identity(d, d);
    sigma.bottomLeftCorner(d, d) = ComplexMatrix::Identity(d, d);
    const ComplexMatrix direct = w * sigma * w.adjoint();
    const ComplexMatrix expanded =
        w.leftCols(d) * w.rightCols(d).adjoint() +
        w.rightCols(d) * w.leftCols(d).adjoint();
    CHECK(operator_norm(direct - expanded) < 1e-12 * (1.0 + operator_norm(direct)));
  }
}

TEST_CASE("sections have flux form 2(1 - K K*)") {
  Rng rng(305);
  for (int it = 0; it < 50; ++it) {
    const Index d = 1 + it % 5;
    const ComplexMatrix k = testgen::random_contraction(d, rng);
    const BoundaryMatrixW w = theta_section(ContractionK(k));
    const ComplexMatrix flux =
        w.w1() * w.w2().adjoint() + w.w2() * w.w1().adjoint();
    const ComplexMatrix expected =
        2.0 * (ComplexMatrix::Identity(d, d) - k * k.adjoint());
    CHECK(operator_norm(flux - expected) < 1e-12 * (1.0 + operator_norm(flux)));
  }
}

TEST_CASE("subspaces larger than dimension d are never dissipative") {
  Rng rng(306);
  for (int it = 0; it < 100; ++it) {
    const Index d = 1 + it % 4;
    const ComplexMatrix span = rng.gaussian(2 * d, d + 1);
    const BoundarySubspace v = BoundarySubspace::from_span(d, span);
    CAPTURE(it);
    REQUIRE(v.dim() == d + 1);  // a random span has full column rank
    CHECK_FALSE(is_dissipative_subspace(v));
  }
  // Deterministic witness: the full space C^d x C^d contains (g, -g) pairs.
  const BoundarySubspace everything(1, ComplexMatrix::Identity(2, 2).eval());
  CHECK_FALSE(is_dissipative_subspace(everything));
}
