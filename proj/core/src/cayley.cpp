#include "phs/cayley.hpp"

#include "phs/rng.hpp"

#include <stdexcept>

namespace phs {

namespace {

/// Solve (1 + s*m) X = rhs, refusing numerically singular systems.
ComplexMatrix solve_shifted(const ComplexMatrix& m, double s,
                            const ComplexMatrix& rhs, const Tolerances& tol,
                            const char* what) {
  const Index n = m.rows();
  const ComplexMatrix shifted =
      ComplexMatrix::Identity(n, n) + s * m;
  if (numerical_rank(shifted, tol) < n) {
    throw std::runtime_error(what);
  }
  return Eigen::FullPivLU<ComplexMatrix>(shifted).solve(rhs);
}

}  // namespace

bool is_dissipative(const ComplexMatrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("is_dissipative: matrix must be square");
  }
  if (a.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff() <=
         tol.psd_abs * (1.0 + operator_norm(a));
}

bool resolvent_bound_check(const ComplexMatrix& a,
                           const std::vector<double>& lambdas, int samples,
                           const Tolerances& tol, std::uint64_t seed) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(
        "resolvent_bound_check: matrix must be square");
  }
  if (samples < 1) {
    throw std::invalid_argument("resolvent_bound_check: samples must be >= 1");
  }
  for (double lambda : lambdas) {
    if (lambda <= 0.0) {
      throw std::invalid_argument(
          "resolvent_bound_check: lambda values must be positive");
    }
  }

  Rng rng(seed);
  const Index n = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (double lambda : lambdas) {
    const ComplexMatrix shifted = lambda * id - a;
    for (int s = 0; s < samples; ++s) {
      const ComplexVector x = rng.unit_vector(n);
      if (lambda * x.norm() > (shifted * x).norm() + tol.eq_abs) {
        return false;
      }
    }
  }
  return true;
}

ComplexMatrix cayley_transform(const ComplexMatrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("cayley_transform: matrix must be square");
  }
  const Index n = a.rows();
  // (1+A)(1-A)^{-1} equals (1-A)^{-1}(1+A): both factors are rational
  // functions of A and commute.
  return solve_shifted(a, -1.0, ComplexMatrix::Identity(n, n) + a, tol,
                       "cayley_transform: 1 - a is numerically singular");
}

ComplexMatrix inverse_cayley(const ComplexMatrix& c, const Tolerances& tol) {
  if (c.rows() != c.cols()) {
    throw std::invalid_argument("inverse_cayley: matrix must be square");
  }
  const Index n = c.rows();
  return -solve_shifted(c, 1.0, ComplexMatrix::Identity(n, n) - c, tol,
                        "inverse_cayley: 1 + c is numerically singular");
}

}  // namespace phs
