#pragma once

#include "phs/numerics.hpp"

/// Calculus of boundary conditions in trace coordinates.
///
/// States of the underlying PDE enter here only through a pair of boundary
/// coordinate vectors (g1, g2) in C^d.  A boundary condition is one of
/// three interchangeable objects:
///
///  - a subspace V of C^d x C^d of admissible (g1, g2) pairs,
///  - a contraction K on C^d, with V = { (g1,g2) : K(g1+g2) = g1-g2 },
///  - a d x 2d matrix W = [W1 W2], with the condition W1 f + W2 e = 0 on
///    the flow/effort traces (f, e).
///
/// The maps between these pictures (`phi`, `psi`, `theta`, `theta_section`,
/// `w_kernel_subspace`) are mutually inverse where defined, and the
/// dissipation verdicts (`is_dissipative_subspace`, `validate_w`) agree
/// across pictures.  The flow/effort picture attaches to the triplet
/// coordinates via (g1, g2) = (-f, e), which flips the sign of the pairing
/// so that dissipation (Re<f, e> <= 0, energy leaving through the boundary)
/// appears as Re<g1, g2> >= 0.
namespace phs {

/// Trace coordinates of a single state.
struct BoundaryPair {
  ComplexVector g1;
  ComplexVector g2;
};

/// Verdict pair for a boundary condition matrix.
struct WReport {
  bool rank_ok = false;  ///< rank W == d (enough independent conditions)
  bool psd_ok = false;   ///< W1 W2^* + W2 W1^* is PSD (no energy injection)
  [[nodiscard]] bool admissible() const { return rank_ok && psd_ok; }
};

/// Subspace of C^d x C^d stored as an orthonormal basis.  The top d rows of
/// the basis are the g1 components, the bottom d rows the g2 components.
class BoundarySubspace {
 public:
  /// Wraps an already orthonormal 2d x k basis; throws std::invalid_argument
  /// if the shape is inconsistent or the columns are not orthonormal.
  BoundarySubspace(Index dim_d, ComplexMatrix orthonormal_basis);

  /// Orthonormalizes the columns of `span` (dropping numerical rank
  /// deficiency) and wraps the result.
  static BoundarySubspace from_span(Index dim_d, const ComplexMatrix& span,
                                    const Tolerances& tol = {});

  [[nodiscard]] Index dim_d() const { return dim_d_; }
  [[nodiscard]] Index dim() const { return basis_.cols(); }
  [[nodiscard]] const ComplexMatrix& basis() const { return basis_; }
  [[nodiscard]] ComplexMatrix g1_block() const {
    return basis_.topRows(dim_d_);
  }
  [[nodiscard]] ComplexMatrix g2_block() const {
    return basis_.bottomRows(dim_d_);
  }

 private:
  Index dim_d_;
  ComplexMatrix basis_;  // 2d x k, orthonormal columns
};

/// A matrix K on C^d with operator norm at most 1 (up to eq_abs slack).
class ContractionK {
 public:
  explicit ContractionK(ComplexMatrix k, const Tolerances& tol = {});

  [[nodiscard]] Index dim_d() const { return matrix_.rows(); }
  [[nodiscard]] const ComplexMatrix& matrix() const { return matrix_; }
  [[nodiscard]] double norm() const { return norm_; }

 private:
  ComplexMatrix matrix_;
  double norm_;
};

/// Boundary condition matrix W = [W1 W2] with d rows and 2d columns.
class BoundaryMatrixW {
 public:
  explicit BoundaryMatrixW(ComplexMatrix w);

  [[nodiscard]] Index dim_d() const { return matrix_.rows(); }
  [[nodiscard]] const ComplexMatrix& matrix() const { return matrix_; }
  [[nodiscard]] ComplexMatrix w1() const {
    return matrix_.leftCols(matrix_.rows());
  }
  [[nodiscard]] ComplexMatrix w2() const {
    return matrix_.rightCols(matrix_.rows());
  }

 private:
  ComplexMatrix matrix_;  // d x 2d
};

/// A contraction defined only on a subspace of C^d: maps
/// `domain_basis * u` to `action * u` with |action u| <= |u|.
struct PartialContraction {
  ComplexMatrix domain_basis;  ///< d x m, orthonormal columns
  ComplexMatrix action;        ///< d x m

  /// Extends by zero on the orthogonal complement of the domain, giving a
  /// genuine contraction on all of C^d.
  [[nodiscard]] ContractionK zero_extension(const Tolerances& tol = {}) const;
};

/// True iff Re<g1, g2> >= 0 on V, i.e. G1^* G2 + G2^* G1 is PSD for the
/// stored basis blocks.  (Subspaces of outgoing-energy trace pairs.)
[[nodiscard]] bool is_dissipative_subspace(const BoundarySubspace& v,
                                           const Tolerances& tol = {});

/// Dissipative and of the largest possible dimension d.
[[nodiscard]] bool is_maximal_dissipative_subspace(const BoundarySubspace& v,
                                                   const Tolerances& tol = {});

/// Forward map of the subspace <-> contraction correspondence: sends a
/// dissipative V to the map g1+g2 |-> g1-g2, which is well defined and
/// contractive on { g1+g2 : (g1,g2) in V }.  Throws std::invalid_argument
/// if V is not dissipative.
[[nodiscard]] PartialContraction phi(const BoundarySubspace& v,
                                     const Tolerances& tol = {});

/// Inverse map: V = { (g1, g2) : K(g1+g2) = g1-g2 }, parametrized by
/// s |-> (g1, g2) = ((s + K s)/2, (s - K s)/2).  Always maximal dissipative.
[[nodiscard]] BoundarySubspace psi(const ContractionK& k,
                                   const Tolerances& tol = {});

/// Rank and energy-flux verdicts for W (see WReport).
[[nodiscard]] WReport validate_w(const BoundaryMatrixW& w,
                                 const Tolerances& tol = {});

/// Contraction encoded by an admissible W:  K = -(W1+W2)^{-1} (W1-W2).
/// Throws std::runtime_error when W1 + W2 is numerically singular (which
/// cannot happen for admissible W).
[[nodiscard]] ContractionK theta(const BoundaryMatrixW& w,
                                 const Tolerances& tol = {});

/// A canonical W representing a given contraction: W = [K - 1, -(K + 1)].
/// Satisfies theta(theta_section(K)) == K.
[[nodiscard]] BoundaryMatrixW theta_section(const ContractionK& k);

/// Kernel of W as a boundary subspace:  solutions (f, e) of
/// W1 f + W2 e = 0, re-expressed in triplet coordinates (g1, g2) = (-f, e).
/// For rank-d W the kernel has dimension d.
[[nodiscard]] BoundarySubspace w_kernel_subspace(const BoundaryMatrixW& w,
                                                 const Tolerances& tol = {});

}  // namespace phs
