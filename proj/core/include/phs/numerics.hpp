#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

/// Dense complex linear algebra primitives with explicit tolerance policy.
///
/// Every verdict-producing routine in the library (rank decisions, PSD
/// checks, equality-of-residual checks) funnels through the helpers in this
/// header so that a single Tolerances object controls all cutoffs.
namespace phs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Cutoffs shared by every numerical verdict.
///
/// - `rank_rel`: relative singular-value cutoff for rank / kernel decisions.
/// - `psd_abs`:  absolute slack when deciding "smallest eigenvalue >= 0",
///               scaled by (1 + operator norm) of the matrix under test.
/// - `eq_abs`:   absolute slack for residual-equality verdicts, scaled the
///               same way where a natural scale exists.
struct Tolerances {
  double rank_rel = 1e-10;
  double psd_abs = 1e-9;
  double eq_abs = 1e-9;

  /// True iff all cutoffs are strictly positive (the only valid state).
  [[nodiscard]] bool valid() const {
    return rank_rel > 0.0 && psd_abs > 0.0 && eq_abs > 0.0;
  }
};

/// Largest singular value; 0 for an empty matrix.
[[nodiscard]] double operator_norm(const ComplexMatrix& m);

/// Number of singular values exceeding `rank_rel * sigma_max`.
/// The zero matrix has rank 0.
[[nodiscard]] Index numerical_rank(const ComplexMatrix& m,
                                   const Tolerances& tol = {});

/// Orthonormal basis of the (numerical) kernel: the right singular vectors
/// whose singular values fall at or below the rank cutoff.  Always returns
/// exactly `cols - numerical_rank(m)` columns.
[[nodiscard]] ComplexMatrix nullspace_basis(const ComplexMatrix& m,
                                            const Tolerances& tol = {});

/// True iff `m` is Hermitian up to `eq_abs * (1 + |m|)` and the smallest
/// eigenvalue of its Hermitian part is at least `-psd_abs * (1 + |m|)`.
/// An empty (0x0) matrix counts as PSD.  Throws std::invalid_argument for
/// non-square input.
[[nodiscard]] bool is_psd_hermitian(const ComplexMatrix& m,
                                    const Tolerances& tol = {});

/// (m + m^*) / 2.  Throws std::invalid_argument for non-square input.
[[nodiscard]] ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Distance between two subspaces given by orthonormal bases, measured as
/// the operator norm of the difference of the orthogonal projectors
/// (equivalently, the sine of the largest principal angle).  Bases must
/// have the same ambient dimension and the same number of columns.
[[nodiscard]] double subspace_gap(const ComplexMatrix& qa,
                                  const ComplexMatrix& qb);

/// Rank-revealing orthonormalization: an orthonormal basis of the column
/// span of `span`, with exactly `numerical_rank(span)` columns.
[[nodiscard]] ComplexMatrix orthonormal_columns(const ComplexMatrix& span,
                                                const Tolerances& tol = {});

/// True iff every entry of `m` is finite.
[[nodiscard]] bool all_finite(const ComplexMatrix& m);

}  // namespace phs
