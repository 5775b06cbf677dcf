#pragma once

#include "phs/model.hpp"

#include <vector>

/// Structure-preserving spatial discretization and time stepping.
///
/// The spatial operator is discretized with the summation-by-parts pair
/// from grid.hpp, so the discrete energy rate  d/dt E = Re<f, e>  holds as
/// an algebraic identity, not merely up to truncation error.  The boundary
/// condition W1 f + W2 e = 0 is enforced by restricting the dynamics to the
/// kernel of the boundary constraint (a Galerkin restriction in the
/// energy inner product).  Consequently:
///
///  - for admissible W the reduced generator is dissipative in the energy
///    inner product and Crank-Nicolson steps are non-expansive;
///  - for skew boundary conditions the steps are isometries;
///  - for inadmissible W the dissipativity margin is strictly positive and
///    grows like 1/h, and trajectories gain energy.
namespace phs {

/// Discrete generator with its constraint and energy geometry.
struct DiscreteGenerator {
  PHSystem system;
  SpatialGrid grid;
  ComplexMatrix raw;               ///< N x N unconstrained operator, N = d(n+1)
  ComplexMatrix mass;              ///< N x N energy Gram (block diagonal)
  ComplexMatrix constraint_basis;  ///< N x r orthonormal kernel of the constraint
  ComplexMatrix reduced;           ///< r x r generator on the constrained space
  ComplexMatrix reduced_mass;      ///< r x r energy Gram on the constrained space

  [[nodiscard]] Index full_dim() const { return raw.rows(); }
  [[nodiscard]] Index reduced_dim() const { return reduced.rows(); }
};

/// Time history of a simulation, with per-state energy and boundary power.
struct Trajectory {
  std::vector<double> times;
  std::vector<GridFunction> states;
  std::vector<double> energies;
  std::vector<double> boundary_powers;
  /// Energy-norm distance between the requested initial state and its
  /// projection onto the constraint subspace.
  double projection_defect = 0.0;
};

/// Assembles the discrete generator for `sys` on an n-cell grid.  Throws
/// std::invalid_argument when the system structure is invalid or rank W
/// falls short of d (the boundary constraint would be degenerate).
[[nodiscard]] DiscreteGenerator assemble(const PHSystem& sys, Index n,
                                         const Tolerances& tol = {});

/// Largest eigenvalue of the pencil  (1/2)(M G + G^* M) v = lambda M v  on
/// the constrained space: the best bound mu with
/// Re <G z, z>_M <= mu <z, z>_M.  At most rounding-level positive for
/// admissible W; strictly positive (growing like 1/h) otherwise.
[[nodiscard]] double dissipativity_margin(const DiscreteGenerator& g);

/// Eigenvalues of the reduced generator, sorted by descending real part
/// (ties by ascending imaginary part).  Every real part is bounded by the
/// dissipativity margin.
[[nodiscard]] ComplexVector spectrum(const DiscreteGenerator& g);

/// One Crank-Nicolson step of size dt on a reduced state:
/// (1 - dt/2 G) z+ = (1 + dt/2 G) z.  This is exactly the Cayley transform
/// of (dt/2) G, hence non-expansive in the energy norm whenever the margin
/// is <= 0.  Throws std::invalid_argument for dt <= 0 and
/// std::runtime_error if 1 - dt/2 G is numerically singular.
[[nodiscard]] ComplexVector step(const DiscreteGenerator& g,
                                 const ComplexVector& z, double dt);

/// Runs Crank-Nicolson from `x0` (projected onto the constraint subspace;
/// the defect is recorded on the trajectory) up to time `t_final`.
[[nodiscard]] Trajectory simulate(const DiscreteGenerator& g,
                                  const GridFunction& x0, double t_final,
                                  double dt);

/// Max over interior samples of |centered dE/dt - boundary power|: how well
/// the recorded energies honor the discrete power balance.
[[nodiscard]] double power_balance_residual(const Trajectory& traj);

/// Full-grid representation of a reduced state.
[[nodiscard]] GridFunction expand(const DiscreteGenerator& g,
                                  const ComplexVector& z);

/// Energy-orthogonal projection of a grid state onto the constraint
/// subspace, in reduced coordinates.
[[nodiscard]] ComplexVector restrict_state(const DiscreteGenerator& g,
                                           const GridFunction& x);

}  // namespace phs
