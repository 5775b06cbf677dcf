#include "phs/boundary.hpp"

#include <stdexcept>
#include <utility>

namespace phs {

// ===========================================================================
// Types
// ===========================================================================

BoundarySubspace::BoundarySubspace(Index dim_d, ComplexMatrix orthonormal_basis)
    : dim_d_(dim_d), basis_(std::move(orthonormal_basis)) {
  if (dim_d_ < 1) {
    throw std::invalid_argument("BoundarySubspace: dim_d must be >= 1");
  }
  if (basis_.rows() != 2 * dim_d_) {
    throw std::invalid_argument("BoundarySubspace: basis must have 2*d rows");
  }
  if (basis_.cols() > 2 * dim_d_) {
    throw std::invalid_argument("BoundarySubspace: more columns than ambient dimension");
  }
  const Index k = basis_.cols();
  const double ortho_defect =
      (basis_.adjoint() * basis_ - ComplexMatrix::Identity(k, k)).norm();
  if (ortho_defect > 1e-8) {
    throw std::invalid_argument("BoundarySubspace: basis columns not orthonormal");
  }
}

BoundarySubspace BoundarySubspace::from_span(Index dim_d,
                                             const ComplexMatrix& span,
                                             const Tolerances& tol) {
  if (span.rows() != 2 * dim_d) {
    throw std::invalid_argument("BoundarySubspace: span must have 2*d rows");
  }
  return BoundarySubspace(dim_d, orthonormal_columns(span, tol));
}

ContractionK::ContractionK(ComplexMatrix k, const Tolerances& tol)
    : matrix_(std::move(k)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw std::invalid_argument("ContractionK: matrix must be square and nonempty");
  }
  norm_ = operator_norm(matrix_);
  if (norm_ > 1.0 + tol.eq_abs) {
    throw std::invalid_argument("ContractionK: operator norm exceeds 1");
  }
}

BoundaryMatrixW::BoundaryMatrixW(ComplexMatrix w) : matrix_(std::move(w)) {
  if (matrix_.rows() < 1 || matrix_.cols() != 2 * matrix_.rows()) {
    throw std::invalid_argument("BoundaryMatrixW: matrix must be d x 2d");
  }
}

ContractionK PartialContraction::zero_extension(const Tolerances& tol) const {
  if (domain_basis.rows() != action.rows() ||
      domain_basis.cols() != action.cols()) {
    throw std::invalid_argument("PartialContraction: inconsistent blocks");
  }
  // domain_basis * u |-> action * u, everything orthogonal to the domain
  // |-> 0:  as a matrix this is action * domain_basis^*.
  return ContractionK(action * domain_basis.adjoint(), tol);
}

// ===========================================================================
// Operations
// ===========================================================================

bool is_dissipative_subspace(const BoundarySubspace& v, const Tolerances& tol) {
  if (v.dim() == 0) return true;  // trivial subspace is vacuously dissipative
  const ComplexMatrix g1 = v.g1_block();
  const ComplexMatrix g2 = v.g2_block();
  return is_psd_hermitian(g1.adjoint() * g2 + g2.adjoint() * g1, tol);
}

bool is_maximal_dissipative_subspace(const BoundarySubspace& v,
                                     const Tolerances& tol) {
  return v.dim() == v.dim_d() && is_dissipative_subspace(v, tol);
}

PartialContraction phi(const BoundarySubspace& v, const Tolerances& tol) {
  if (!is_dissipative_subspace(v, tol)) {
    throw std::invalid_argument("phi: subspace is not dissipative");
  }
  const Index k = v.dim();
  const ComplexMatrix sum = v.g1_block() + v.g2_block();   // d x k
  const ComplexMatrix diff = v.g1_block() - v.g2_block();  // d x k

  if (k == 0) {
    return PartialContraction{ComplexMatrix(v.dim_d(), 0),
                              ComplexMatrix(v.dim_d(), 0)};
  }

  // On a dissipative subspace g |-> g1+g2 is injective, so `sum` has full
  // column rank and a thin QR of it is invertible on the right.
  Eigen::HouseholderQR<ComplexMatrix> qr(sum);
  const ComplexMatrix q =
      qr.householderQ() * ComplexMatrix::Identity(sum.rows(), k);
  const ComplexMatrix r =
      qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const double r_min = r.diagonal().cwiseAbs().minCoeff();
  const double r_max = r.diagonal().cwiseAbs().maxCoeff();
  if (r_min <= tol.rank_rel * r_max || r_max == 0.0) {
    throw std::invalid_argument(
        "phi: g1+g2 directions are numerically dependent");
  }

  // sum = q r, so the point q*u of the domain corresponds to the coefficient
  // vector r^{-1} u, and the action sends it to diff * r^{-1} u.
  const ComplexMatrix action =
      r.triangularView<Eigen::Upper>()
          .solve<Eigen::OnTheRight>(diff);
  return PartialContraction{q, action};
}

BoundarySubspace psi(const ContractionK& k, const Tolerances& tol) {
  const Index d = k.dim_d();
  ComplexMatrix span(2 * d, d);
  span.topRows(d) =
      0.5 * (ComplexMatrix::Identity(d, d) + k.matrix());
  span.bottomRows(d) =
      0.5 * (ComplexMatrix::Identity(d, d) - k.matrix());
  // The stacked matrix always has rank d: a kernel vector would have to lie
  // in the kernel of both 1+K and 1-K simultaneously.
  return BoundarySubspace::from_span(d, span, tol);
}

WReport validate_w(const BoundaryMatrixW& w, const Tolerances& tol) {
  WReport report;
  report.rank_ok = numerical_rank(w.matrix(), tol) == w.dim_d();
  const ComplexMatrix w1 = w.w1();
  const ComplexMatrix w2 = w.w2();
  report.psd_ok =
      is_psd_hermitian(w1 * w2.adjoint() + w2 * w1.adjoint(), tol);
  return report;
}

ContractionK theta(const BoundaryMatrixW& w, const Tolerances& tol) {
  const ComplexMatrix sum = w.w1() + w.w2();
  if (numerical_rank(sum, tol) < w.dim_d()) {
    throw std::runtime_error("theta: W1 + W2 is numerically singular");
  }
  const ComplexMatrix k =
      -Eigen::FullPivLU<ComplexMatrix>(sum).solve(w.w1() - w.w2());
  return ContractionK(k, tol);
}

BoundaryMatrixW theta_section(const ContractionK& k) {
  const Index d = k.dim_d();
  ComplexMatrix w(d, 2 * d);
  w.leftCols(d) = k.matrix() - ComplexMatrix::Identity(d, d);
  w.rightCols(d) = -(k.matrix() + ComplexMatrix::Identity(d, d));
  return BoundaryMatrixW(w);
}

BoundarySubspace w_kernel_subspace(const BoundaryMatrixW& w,
                                   const Tolerances& tol) {
  const Index d = w.dim_d();
  ComplexMatrix kernel = nullspace_basis(w.matrix(), tol);  // (f, e) pairs
  // Bridge from flow/effort to triplet coordinates: (g1, g2) = (-f, e).
  // Negating the top block is unitary, so orthonormality is preserved.
  kernel.topRows(d) = -kernel.topRows(d);
  return BoundarySubspace(d, std::move(kernel));
}

}  // namespace phs
