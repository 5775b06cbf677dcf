#include "phs/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phs {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

/// Reduced-coordinate energy (1/2) <z, z>_M.
double reduced_energy(const DiscreteGenerator& g, const ComplexVector& z) {
  return 0.5 * z.dot(g.reduced_mass * z).real();
}

}  // namespace

DiscreteGenerator assemble(const PHSystem& sys, Index n,
                           const Tolerances& tol) {
  const SystemReport report = validate_system(sys, tol);
  if (!report.structure_ok()) {
    throw std::invalid_argument(
        "assemble: system structure matrices are invalid");
  }
  if (!report.w.rank_ok) {
    throw std::invalid_argument(
        "assemble: boundary condition matrix is rank deficient");
  }

  const SpatialGrid grid = sys.grid(n);
  const Index d = sys.d;
  const Index nodes = grid.nodes();
  const Index N = d * nodes;

  // Node values of H and the block-diagonal energy Gram M = W_q (x) H.
  const RealVector wq = trapezoid_weights(grid);
  ComplexMatrix mass = ComplexMatrix::Zero(N, N);
  std::vector<ComplexMatrix> h_at(static_cast<std::size_t>(nodes));
  for (Index i = 0; i < nodes; ++i) {
    h_at[static_cast<std::size_t>(i)] = sys.h.at_node(grid, i);
    mass.block(i * d, i * d, d, d) =
        wq(i) * h_at[static_cast<std::size_t>(i)];
  }

  // Unconstrained operator  X |-> (I (x) P0 + D (x) P1) H_blk X.
  const RealMatrix diff = sbp_difference(grid);
  ComplexMatrix raw = ComplexMatrix::Zero(N, N);
  for (Index i = 0; i < nodes; ++i) {
    raw.block(i * d, i * d, d, d) += sys.p0 * h_at[static_cast<std::size_t>(i)];
    for (Index j = 0; j < nodes; ++j) {
      if (diff(i, j) != 0.0) {
        raw.block(i * d, j * d, d, d) +=
            diff(i, j) * (sys.p1 * h_at[static_cast<std::size_t>(j)]);
      }
    }
  }

  // Boundary constraint  W1 f + W2 e = 0  expressed on the grid unknowns:
  // with y_a = H(a) x_a and y_b = H(b) x_b,
  //   sqrt(1/2) [ (W2 - W1 P1) y_a + (W2 + W1 P1) y_b ] = 0.
  const ComplexMatrix w1 = sys.w.w1();
  const ComplexMatrix w2 = sys.w.w2();
  ComplexMatrix constraint = ComplexMatrix::Zero(d, N);
  constraint.leftCols(d) =
      kInvSqrt2 * (w2 - w1 * sys.p1) * h_at.front();
  constraint.rightCols(d) =
      kInvSqrt2 * (w2 + w1 * sys.p1) * h_at.back();

  // rank W = d and P1, H invertible make the constraint full rank.
  if (numerical_rank(constraint, tol) != d) {
    throw std::invalid_argument(
        "assemble: boundary constraint is rank deficient on the grid");
  }

  DiscreteGenerator gen{
      sys, grid, std::move(raw), std::move(mass),
      nullspace_basis(constraint, tol), ComplexMatrix(), ComplexMatrix()};

  // Galerkin restriction in the energy inner product:
  // M_r z' = Q^* M raw Q z  with  M_r = Q^* M Q.
  const ComplexMatrix& q = gen.constraint_basis;
  gen.reduced_mass = q.adjoint() * gen.mass * q;
  const ComplexMatrix rhs = q.adjoint() * (gen.mass * (gen.raw * q));
  Eigen::LLT<ComplexMatrix> llt(gen.reduced_mass);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("assemble: reduced mass is not positive definite");
  }
  gen.reduced = llt.solve(rhs);
  return gen;
}

double dissipativity_margin(const DiscreteGenerator& g) {
  const ComplexMatrix mg = g.reduced_mass * g.reduced;
  const ComplexMatrix herm = 0.5 * (mg + mg.adjoint());
  Eigen::GeneralizedSelfAdjointEigenSolver<ComplexMatrix> ges(
      herm, g.reduced_mass, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  return ges.eigenvalues().maxCoeff();
}

ComplexVector spectrum(const DiscreteGenerator& g) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(g.reduced, false);
  ComplexVector eigs = es.eigenvalues();
  std::sort(eigs.begin(), eigs.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() < y.imag();
  });
  return eigs;
}

ComplexVector step(const DiscreteGenerator& g, const ComplexVector& z,
                   double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step: dt must be positive");
  }
  if (z.size() != g.reduced_dim()) {
    throw std::invalid_argument("step: state has wrong dimension");
  }
  const Index r = g.reduced_dim();
  const ComplexMatrix lhs =
      ComplexMatrix::Identity(r, r) - (0.5 * dt) * g.reduced;
  Eigen::FullPivLU<ComplexMatrix> lu(lhs);
  if (Tolerances tol; numerical_rank(lhs, tol) < r) {
    throw std::runtime_error("step: implicit system is numerically singular");
  }
  return lu.solve(z + (0.5 * dt) * (g.reduced * z));
}

GridFunction expand(const DiscreteGenerator& g, const ComplexVector& z) {
  if (z.size() != g.reduced_dim()) {
    throw std::invalid_argument("expand: state has wrong dimension");
  }
  const ComplexVector full = g.constraint_basis * z;
  ComplexMatrix values(g.system.d, g.grid.nodes());
  for (Index i = 0; i < g.grid.nodes(); ++i) {
    values.col(i) = full.segment(i * g.system.d, g.system.d);
  }
  return GridFunction(g.grid, std::move(values));
}

ComplexVector restrict_state(const DiscreteGenerator& g,
                             const GridFunction& x) {
  if (x.dim() != g.system.d || x.grid.n != g.grid.n) {
    throw std::invalid_argument("restrict_state: state does not match grid");
  }
  ComplexVector full(g.full_dim());
  for (Index i = 0; i < g.grid.nodes(); ++i) {
    full.segment(i * g.system.d, g.system.d) = x.values.col(i);
  }
  // Energy-orthogonal projection: z = (Q^* M Q)^{-1} Q^* M x.
  const ComplexVector rhs = g.constraint_basis.adjoint() * (g.mass * full);
  return Eigen::LLT<ComplexMatrix>(g.reduced_mass).solve(rhs);
}

Trajectory simulate(const DiscreteGenerator& g, const GridFunction& x0,
                    double t_final, double dt) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) {
    throw std::invalid_argument("simulate: need dt > 0 and t_final >= 0");
  }
  if (!x0.finite()) {
    throw std::invalid_argument("simulate: initial state has non-finite values");
  }

  const auto steps = static_cast<Index>(std::llround(t_final / dt));

  ComplexVector z = restrict_state(g, x0);

  Trajectory traj;
  {
    // Defect of the initial projection, measured in the energy norm.
    ComplexVector full(g.full_dim());
    for (Index i = 0; i < g.grid.nodes(); ++i) {
      full.segment(i * g.system.d, g.system.d) = x0.values.col(i);
    }
    const ComplexVector diff = g.constraint_basis * z - full;
    traj.projection_defect =
        std::sqrt(std::max(diff.dot(g.mass * diff).real(), 0.0));
  }

  // One factorization serves every step (dt is fixed).
  const Index r = g.reduced_dim();
  const ComplexMatrix lhs =
      ComplexMatrix::Identity(r, r) - (0.5 * dt) * g.reduced;
  Eigen::PartialPivLU<ComplexMatrix> lu(lhs);

  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.energies.reserve(static_cast<std::size_t>(steps) + 1);
  traj.boundary_powers.reserve(static_cast<std::size_t>(steps) + 1);

  for (Index k = 0;; ++k) {
    traj.times.push_back(static_cast<double>(k) * dt);
    GridFunction state = expand(g, z);
    traj.energies.push_back(reduced_energy(g, z));
    traj.boundary_powers.push_back(boundary_power(state, g.system));
    traj.states.push_back(std::move(state));
    if (k == steps) break;
    z = lu.solve(z + (0.5 * dt) * (g.reduced * z));
    if (!z.allFinite()) {
      throw std::runtime_error("simulate: time step diverged");
    }
  }
  return traj;
}

double power_balance_residual(const Trajectory& traj) {
  const std::size_t count = traj.times.size();
  if (count < 3) return 0.0;
  double residual = 0.0;
  for (std::size_t k = 1; k + 1 < count; ++k) {
    const double dt2 = traj.times[k + 1] - traj.times[k - 1];
    const double rate = (traj.energies[k + 1] - traj.energies[k - 1]) / dt2;
    residual = std::max(residual, std::abs(rate - traj.boundary_powers[k]));
  }
  return residual;
}

}  // namespace phs
