#pragma once

#include "phs/boundary.hpp"
#include "phs/grid.hpp"
#include "phs/rng.hpp"

#include <vector>

/// First-order port-Hamiltonian PDE systems on an interval.
///
/// The state law is  dx/dt = P0 (H x) + P1 d/dxi (H x)  on (a, b), with
/// P0 skew-adjoint, P1 Hermitian invertible, and a Hamiltonian density
/// H(xi) that is Hermitian with spectrum in [m, M], 0 < m <= M.  Energy is
/// E(x) = (1/2) <H x, x>; its rate of change is carried entirely by the
/// boundary flow/effort traces
///     f = (1/sqrt 2) P1 (y(b) - y(a)),   e = (1/sqrt 2) (y(b) + y(a)),
/// evaluated on y = H x, and a boundary condition matrix W selects which
/// trace pairs are admissible (W1 f + W2 e = 0).
namespace phs {

/// Hamiltonian density H(xi): Hermitian d x d values with uniform spectral
/// bounds [m, M].
class HamiltonianField {
 public:
  enum class Kind { constant, cells, nodes };

  static HamiltonianField constant(ComplexMatrix value, double m, double M);
  /// Piecewise constant on equal-width cells of the interval (any number of
  /// cells; node evaluation picks the cell containing the node, with the
  /// right endpoint assigned to the last cell).
  static HamiltonianField cells(std::vector<ComplexMatrix> values, double m,
                                double M);
  /// One value per grid node; evaluation requires a grid whose node count
  /// matches exactly.
  static HamiltonianField nodes(std::vector<ComplexMatrix> values, double m,
                                double M);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double lower_bound() const { return m_; }
  [[nodiscard]] double upper_bound() const { return M_; }
  [[nodiscard]] const std::vector<ComplexMatrix>& values() const {
    return values_;
  }
  [[nodiscard]] Index dim() const { return values_.front().rows(); }
  [[nodiscard]] bool is_constant() const { return kind_ == Kind::constant; }

  /// Value of H at node `i` of `g`.
  [[nodiscard]] const ComplexMatrix& at_node(const SpatialGrid& g,
                                             Index i) const;

  /// True iff every stored value is Hermitian (to eq_abs) with eigenvalues
  /// inside [m - psd_abs, M + psd_abs].
  [[nodiscard]] bool spectral_bounds_ok(const Tolerances& tol = {}) const;

 private:
  HamiltonianField(Kind kind, std::vector<ComplexMatrix> values, double m,
                   double M);

  Kind kind_;
  std::vector<ComplexMatrix> values_;
  double m_;
  double M_;
};

/// Complete description of a system: structure matrices, Hamiltonian
/// density, and boundary condition matrix.
struct PHSystem {
  Index d = 1;
  double a = 0.0;
  double b = 1.0;
  ComplexMatrix p0;    // d x d, skew-adjoint
  ComplexMatrix p1;    // d x d, Hermitian invertible
  HamiltonianField h;  // values of dimension d
  BoundaryMatrixW w;   // d x 2d

  [[nodiscard]] SpatialGrid grid(Index n) const { return SpatialGrid(a, b, n); }
};

/// Verdicts of `validate_system`.
struct SystemReport {
  bool p0_skew = false;
  bool p1_hermitian = false;
  bool p1_invertible = false;
  bool h_ok = false;  ///< Hermitian values within the declared bounds
  WReport w;
  [[nodiscard]] bool structure_ok() const {
    return p0_skew && p1_hermitian && p1_invertible && h_ok;
  }
  [[nodiscard]] bool ok() const { return structure_ok() && w.admissible(); }
};

/// A d-component function sampled on a grid; column j holds the value at
/// node j.
struct GridFunction {
  SpatialGrid grid;
  ComplexMatrix values;  // d x (n+1)

  GridFunction(SpatialGrid g, ComplexMatrix v);

  [[nodiscard]] Index dim() const { return values.rows(); }
  [[nodiscard]] ComplexVector at_a() const { return values.col(0); }
  [[nodiscard]] ComplexVector at_b() const {
    return values.col(values.cols() - 1);
  }
  [[nodiscard]] bool finite() const { return values.allFinite(); }

  static GridFunction zero(Index d, const SpatialGrid& g);
};

/// Boundary flow/effort pair of a state.
struct FlowEffort {
  ComplexVector f;
  ComplexVector e;
};

/// Structure verdicts for a system (does not throw; callers that need a
/// valid system, e.g. `assemble`, check `ok()` themselves).
[[nodiscard]] SystemReport validate_system(const PHSystem& sys,
                                           const Tolerances& tol = {});

/// Flow/effort traces of the endpoint values of `x` itself (no H applied):
/// f = (1/sqrt 2) P1 (x(b) - x(a)), e = (1/sqrt 2) (x(b) + x(a)).
[[nodiscard]] FlowEffort flow_effort(const GridFunction& x,
                                     const PHSystem& sys);

/// Triplet coordinates of the endpoint traces: (g1, g2) = (-f, e).
[[nodiscard]] BoundaryPair triplet_boundary(const GridFunction& x,
                                            const PHSystem& sys);

/// The spatial operator P0 (H x) + P1 D (H x) with the summation-by-parts
/// difference matrix D of `x.grid`; second-order accurate on smooth data.
[[nodiscard]] GridFunction apply_operator(const GridFunction& x,
                                          const PHSystem& sys);

/// E(x) = (1/2) <H x, x> by trapezoid quadrature.  Satisfies
/// (m/2)|x|^2 <= E(x) <= (M/2)|x|^2 in the plain L2 norm.
[[nodiscard]] double energy(const GridFunction& x, const PHSystem& sys);

/// Re <f(Hx), e(Hx)>: the instantaneous energy flux through the boundary.
/// Negative values mean energy leaves the domain.
[[nodiscard]] double boundary_power(const GridFunction& x, const PHSystem& sys);

/// Residual of the boundary pairing identity
///   <A x, y> + <x, A y> = <g1(Hx), g2(Hy)> + <g2(Hx), g1(Hy)>,
/// with A = -apply_operator and weighted inner products <u, v> = <H u, v>
/// evaluated by Simpson quadrature.  The trapezoid rule is deliberately not
/// used here: it pairs exactly with the summation-by-parts operator and
/// closes the identity to machine precision, leaving no discretization
/// error to observe.  Simpson weights expose the genuine O(h^2) truncation,
/// so the residual decays at second order on smooth inputs.
[[nodiscard]] double green_identity_residual(const GridFunction& x,
                                             const GridFunction& y,
                                             const PHSystem& sys);

// ---------------------------------------------------------------------------
// Deficiency solves and the canonical triplet (constant H only)
// ---------------------------------------------------------------------------

/// Basis of solutions of A^* x = eps * x for eps = +1 or -1, where
/// A^* x = -(P0 x + P1 x'): each column solves the linear ODE
/// x' = C x with C = -P1^{-1} (eps + P0), integrated with the matrix
/// exponential from initial value e_j at xi = a.
struct DeficiencyBasis {
  int epsilon = 1;
  std::vector<GridFunction> columns;  // d solutions
  ComplexMatrix endpoint_matrix;      // 2d x d: values at a on top, b below
  RealVector residuals;               // sup-norm ODE residual per column

  [[nodiscard]] Index dim() const { return static_cast<Index>(columns.size()); }
};

/// Computes the deficiency-solution basis on an n-cell grid.  Requires a
/// structurally valid system with constant Hamiltonian (the solves address
/// the H-independent reduced operator; see `construct_canonical_triplet`).
[[nodiscard]] DeficiencyBasis deficiency_basis(const PHSystem& sys, int epsilon,
                                               Index n);

/// Splitting x = x1 + (plus-part) + (minus-part) where the trailing parts
/// are combinations of the eps = +1 / eps = -1 deficiency solutions chosen
/// to match the endpoint values of x, so the remainder x1 vanishes at both
/// endpoints.  `endpoint_residual` reports how well the remainder vanishes.
struct DomainDecomposition {
  GridFunction x1;
  ComplexVector alpha;  ///< coefficients in the eps = +1 basis
  ComplexVector beta;   ///< coefficients in the eps = -1 basis
  double endpoint_residual = 0.0;
};

[[nodiscard]] DomainDecomposition domain_decompose(const GridFunction& x,
                                                   const PHSystem& sys);

/// Boundary maps built from the deficiency solves:  with O+ / O- the
/// L2-orthonormalized eps = +1 / eps = -1 bases and (c+, c-) the
/// coordinates of the matched parts of x,
///     Gamma1 x = c+ + c-,   Gamma2 x = c+ - c-.
/// These satisfy the boundary pairing identity and are jointly surjective:
/// `preimage` produces an explicit state hitting any target pair.
class CanonicalTriplet {
 public:
  CanonicalTriplet(const PHSystem& sys, Index n);

  [[nodiscard]] const SpatialGrid& grid() const { return grid_; }
  [[nodiscard]] Index dim_d() const { return d_; }

  [[nodiscard]] ComplexVector gamma1(const GridFunction& x) const;
  [[nodiscard]] ComplexVector gamma2(const GridFunction& x) const;

  /// State x with gamma1(x) = y1 and gamma2(x) = y2 (exact up to the
  /// endpoint linear solve).
  [[nodiscard]] GridFunction preimage(const ComplexVector& y1,
                                      const ComplexVector& y2) const;

  /// Residual of <Ax, y> + <x, Ay> = <G1 x, G2 y> + <G2 x, G1 y> with
  /// trapezoid inner products; O(h^2) on smooth inputs (the error is the
  /// quadrature error of the orthonormalization Gram matrices).
  [[nodiscard]] double pairing_residual(const GridFunction& x,
                                        const GridFunction& y,
                                        const PHSystem& sys) const;

 private:
  /// Coordinates (c+, c-) of the endpoint-matched parts of x.
  [[nodiscard]] std::pair<ComplexVector, ComplexVector> coordinates(
      const GridFunction& x) const;

  SpatialGrid grid_;
  Index d_;
  DeficiencyBasis plus_;
  DeficiencyBasis minus_;
  ComplexMatrix endpoint_system_;  // 2d x 2d: [N+(a) N-(a); N+(b) N-(b)]
  ComplexMatrix r_plus_;           // Cholesky factors of the quadrature Grams
  ComplexMatrix r_minus_;
};

[[nodiscard]] CanonicalTriplet construct_canonical_triplet(const PHSystem& sys,
                                                           Index n);

// ---------------------------------------------------------------------------
// Smooth test fields
// ---------------------------------------------------------------------------

/// A d-component trigonometric polynomial on [a, b], used to generate
/// reproducible smooth test data that can be sampled on any grid.
struct SmoothField {
  double a = 0.0;
  double b = 1.0;
  ComplexMatrix cos_coeff;  // d x (modes+1)
  ComplexMatrix sin_coeff;  // d x modes

  [[nodiscard]] GridFunction sample(const SpatialGrid& g) const;
};

/// Random smooth field with decaying mode amplitudes.
[[nodiscard]] SmoothField random_smooth_field(Index d, double a, double b,
                                              int modes, Rng& rng);

}  // namespace phs
