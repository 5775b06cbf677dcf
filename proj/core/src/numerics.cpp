#include "phs/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace phs {

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

Index numerical_rank(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma(0);
  if (sigma_max == 0.0) return 0;
  const double cutoff = tol.rank_rel * sigma_max;
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  return rank;
}

ComplexMatrix nullspace_basis(const ComplexMatrix& m, const Tolerances& tol) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double cutoff = tol.rank_rel * sigma_max;
  Index rank = 0;
  if (sigma_max > 0.0) {
    while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - rank);
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_part: matrix must be square");
  }
  return 0.5 * (m + m.adjoint());
}

bool is_psd_hermitian(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("is_psd_hermitian: matrix must be square");
  }
  if (m.size() == 0) return true;

  const double scale = 1.0 + operator_norm(m);
  if (operator_norm(m - m.adjoint()) > tol.eq_abs * scale) return false;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol.psd_abs * scale;
}

double subspace_gap(const ComplexMatrix& qa, const ComplexMatrix& qb) {
  if (qa.rows() != qb.rows() || qa.cols() != qb.cols()) {
    throw std::invalid_argument("subspace_gap: bases must have equal shape");
  }
  if (qa.cols() == 0) return 0.0;
  return operator_norm(qa * qa.adjoint() - qb * qb.adjoint());
}

ComplexMatrix orthonormal_columns(const ComplexMatrix& span,
                                  const Tolerances& tol) {
  if (span.cols() == 0) return span;
  Eigen::JacobiSVD<ComplexMatrix> svd(span, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma(0);
  if (sigma_max == 0.0) return ComplexMatrix(span.rows(), 0);
  const double cutoff = tol.rank_rel * sigma_max;
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

}  // namespace phs
