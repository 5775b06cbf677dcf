#include <phs/cayley.hpp>
#include <phs/discretization.hpp>

#include <doctest.h>

#include "generators.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

using namespace phs;
using testgen::sample_component;
using testgen::transport_system;
using testgen::wave_system;

namespace {

double weighted_norm(const ComplexMatrix& gram, const ComplexVector& z) {
  return std::sqrt(std::abs((z.adjoint() * gram * z)(0, 0).real()));
}

GridFunction gaussian_bump(const PHSystem& sys, Index n) {
  return sample_component(sys.d, sys.grid(n), 0, [](double xi) {
    const double t = (xi - 0.5) / 0.1;
    return std::exp(-0.5 * t * t);
  });
}

}  // namespace

TEST_CASE("assemble produces the advertised shapes and an orthonormal "
          "constraint basis") {
  const PHSystem sys = transport_system();
  const DiscreteGenerator gen = assemble(sys, 16);
  CHECK(gen.full_dim() == 17);
  CHECK(gen.reduced_dim() == 16);  // one scalar condition removed
  CHECK(operator_norm(gen.constraint_basis.adjoint() * gen.constraint_basis -
                      ComplexMatrix::Identity(16, 16)) < 1e-12);
  CHECK(is_psd_hermitian(gen.reduced_mass));

  // A d = 2 system loses exactly d degrees of freedom.
  const DiscreteGenerator wgen = assemble(wave_system(), 16);
  CHECK(wgen.full_dim() == 34);
  CHECK(wgen.reduced_dim() == 32);

  CHECK_THROWS_AS((void)assemble(transport_system(0.0, 0.0), 16),
                  std::invalid_argument);
  PHSystem broken = sys;
  broken.p0 = ComplexMatrix::Identity(1, 1);
  CHECK_THROWS_AS((void)assemble(broken, 16), std::invalid_argument);
}

TEST_CASE("every constraint-basis state satisfies the boundary condition") {
  for (const PHSystem& sys : {transport_system(), wave_system()}) {
    const DiscreteGenerator gen = assemble(sys, 16);
    for (Index j = 0; j < gen.reduced_dim(); ++j) {
      ComplexVector z = ComplexVector::Zero(gen.reduced_dim());
      z(j) = 1.0;
      const GridFunction x = expand(gen, z);
      // The condition applies to the H-weighted traces.
      ComplexMatrix weighted = x.values;
      for (Index i = 0; i < x.grid.nodes(); ++i) {
        weighted.col(i) = sys.h.at_node(x.grid, i) * x.values.col(i);
      }
      const FlowEffort fe = flow_effort(GridFunction(x.grid, weighted), sys);
      const ComplexVector violation =
          sys.w.w1() * fe.f + sys.w.w2() * fe.e;
      CHECK(violation.norm() < 1e-10);
    }
  }
}

TEST_CASE("discrete energy rate equals boundary power exactly") {
  // This is the structural heart of the discretization: with the
  // summation-by-parts pair, d/dt E = Re<f, e> holds to machine precision
  // for every constrained state, not merely up to truncation error.
  Rng rng(501);
  for (const PHSystem& sys : {transport_system(), wave_system()}) {
    const DiscreteGenerator gen = assemble(sys, 32);
    for (int it = 0; it < 10; ++it) {
      const ComplexVector z = rng.gaussian(gen.reduced_dim(), 1).col(0);
      const Complex rate =
          (z.adjoint() * gen.reduced_mass * (gen.reduced * z))(0, 0);
      const GridFunction x = expand(gen, z);
      const double scale = 1.0 + std::abs(rate.real());
      CHECK(std::abs(rate.real() - boundary_power(x, sys)) <= 1e-11 * scale);
    }
  }
}

TEST_CASE("dissipativity margin classifies the fixture boundary conditions") {
  CHECK(dissipativity_margin(assemble(transport_system(1.0, 1.0), 64)) <=
        1e-10);
  CHECK(std::abs(dissipativity_margin(
            assemble(transport_system(1.0, 0.0), 64))) <= 1e-10);
  CHECK(dissipativity_margin(assemble(wave_system(), 64)) <= 1e-10);
  // Energy-injecting condition: margin is strictly positive and large.
  CHECK(dissipativity_margin(assemble(transport_system(1.0, -1.0), 64)) >=
        0.1);
}

TEST_CASE("margin is non-positive for random admissible boundary matrices "
          "and positive for definite violations") {
  Rng rng(502);
  int admissible_checked = 0, violating_checked = 0;
  for (int it = 0; it < 40; ++it) {
    const Index d = 1 + it % 3;
    PHSystem sys{d,
                 0.0,
                 1.0,
                 testgen::random_skew(d, rng),
                 ComplexMatrix::Identity(d, d),
                 HamiltonianField::constant(ComplexMatrix::Identity(d, d), 1.0,
                                            1.0),
                 testgen::random_admissible_w(d, rng)};
    CAPTURE(it);
    const double margin = dissipativity_margin(assemble(sys, 24));
    CHECK(margin <= 1e-8);
    ++admissible_checked;

    sys.w = testgen::random_definite_w(d, rng);
    if (!validate_w(sys.w).psd_ok) {
      const double bad_margin = dissipativity_margin(assemble(sys, 24));
      CHECK(bad_margin > 1e-8);
      ++violating_checked;
    }
  }
  CHECK(admissible_checked == 40);
  CHECK(violating_checked > 5);  // the generator mixes PSD and indefinite
}

TEST_CASE("spectrum is sorted and bounded by the margin") {
  const DiscreteGenerator gen = assemble(transport_system(), 32);
  const ComplexVector eigs = spectrum(gen);
  REQUIRE(eigs.size() == gen.reduced_dim());
  const double margin = dissipativity_margin(gen);
  for (Index i = 0; i < eigs.size(); ++i) {
    CHECK(eigs(i).real() <= margin + 1e-9);
    if (i > 0) CHECK(eigs(i).real() <= eigs(i - 1).real() + 1e-15);
  }

  // Conservative case: the whole spectrum is purely imaginary.
  const ComplexVector skew_eigs =
      spectrum(assemble(transport_system(1.0, 0.0), 32));
  for (Index i = 0; i < skew_eigs.size(); ++i) {
    CHECK(std::abs(skew_eigs(i).real()) <= 1e-9);
  }

  // Energy-injecting case: at least one eigenvalue in the right half plane.
  const ComplexVector bad_eigs =
      spectrum(assemble(transport_system(1.0, -1.0), 32));
  CHECK(bad_eigs(0).real() > 0.0);
}

TEST_CASE("a step is the Cayley transform of the half-step generator") {
  Rng rng(503);
  const DiscreteGenerator gen = assemble(transport_system(), 8);
  const ComplexVector z = rng.gaussian(gen.reduced_dim(), 1).col(0);
  const double dt = 0.05;
  const ComplexVector stepped = step(gen, z, dt);
  const ComplexMatrix cay = cayley_transform((0.5 * dt * gen.reduced).eval());
  CHECK((stepped - cay * z).norm() <= 1e-12 * z.norm());
}

TEST_CASE("steps satisfy the implicit midpoint identity exactly") {
  Rng rng(504);
  const DiscreteGenerator gen = assemble(wave_system(), 16);
  const ComplexVector z = rng.gaussian(gen.reduced_dim(), 1).col(0);
  const double dt = 1e-2;
  const ComplexVector z_next = step(gen, z, dt);
  const ComplexVector lhs = (z_next - z) / dt;
  const ComplexVector rhs = gen.reduced * (0.5 * (z + z_next));
  CHECK((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));

  CHECK_THROWS_AS((void)step(gen, z, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)step(gen, z, -1.0), std::invalid_argument);
}

TEST_CASE("stepping error against the matrix exponential is third order "
          "per step") {
  Rng rng(505);
  const DiscreteGenerator gen = assemble(transport_system(), 16);
  const ComplexVector z = rng.gaussian(gen.reduced_dim(), 1).col(0);
  auto one_step_error = [&](double dt) {
    const ComplexMatrix propagator = ((dt * gen.reduced).eval()).exp();
    return (step(gen, z, dt) - propagator * z).norm();
  };
  const double e1 = one_step_error(0.02);
  const double e2 = one_step_error(0.01);
  REQUIRE(e2 > 0.0);
  // Local error O(dt^3): halving dt divides the error by about eight.
  CHECK(e1 / e2 == doctest::Approx(8.0).epsilon(0.25));
}

TEST_CASE("steps are non-expansive for admissible conditions and isometric "
          "for conservative ones") {
  Rng rng(506);
  const DiscreteGenerator absorbing = assemble(transport_system(), 32);
  const DiscreteGenerator conservative =
      assemble(transport_system(1.0, 0.0), 32);
  for (int it = 0; it < 20; ++it) {
    const ComplexVector z = rng.gaussian(absorbing.reduced_dim(), 1).col(0);
    const double before = weighted_norm(absorbing.reduced_mass, z);
    const double after =
        weighted_norm(absorbing.reduced_mass, step(absorbing, z, 1e-2));
    CHECK(after <= before * (1.0 + 1e-12));

    const double c_before = weighted_norm(conservative.reduced_mass, z);
    const double c_after =
        weighted_norm(conservative.reduced_mass, step(conservative, z, 1e-2));
    CHECK(c_after == doctest::Approx(c_before).epsilon(1e-10));
  }
}

TEST_CASE("simulate records a consistent, monotone trajectory") {
  const PHSystem sys = transport_system();
  const DiscreteGenerator gen = assemble(sys, 64);
  const Trajectory traj = simulate(gen, gaussian_bump(sys, 64), 0.5, 1e-2);

  REQUIRE(traj.times.size() == 51);
  REQUIRE(traj.states.size() == traj.times.size());
  REQUIRE(traj.energies.size() == traj.times.size());
  REQUIRE(traj.boundary_powers.size() == traj.times.size());
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    CHECK(traj.times[i] > traj.times[i - 1]);
    CHECK(traj.energies[i] <= traj.energies[i - 1] + 1e-10);
  }
  // The recorded energies follow the recorded boundary powers.
  CHECK(power_balance_residual(traj) <= 1e-2);
  // A narrow bump has tiny boundary traces: projection defect is small.
  CHECK(traj.projection_defect <= 1e-4);

  // Conservative run: energy drift at rounding level.
  const DiscreteGenerator cons = assemble(transport_system(1.0, 0.0), 64);
  const Trajectory flat = simulate(cons, gaussian_bump(sys, 64), 0.5, 1e-2);
  CHECK(std::abs(flat.energies.back() - flat.energies.front()) <=
        1e-8 * flat.energies.front());
  CHECK(power_balance_residual(flat) <= 1e-6);

  // Zero initial state: identically zero trajectory.
  const Trajectory zero =
      simulate(gen, GridFunction::zero(1, sys.grid(64)), 0.1, 1e-2);
  for (double e : zero.energies) CHECK(e == doctest::Approx(0.0));

  CHECK_THROWS_AS((void)simulate(gen, gaussian_bump(sys, 64), 0.5, 0.0),
                  std::invalid_argument);
}

TEST_CASE("restrict and expand are mutually consistent on constrained "
          "states") {
  Rng rng(507);
  const DiscreteGenerator gen = assemble(wave_system(), 16);
  const ComplexVector z = rng.gaussian(gen.reduced_dim(), 1).col(0);
  const GridFunction x = expand(gen, z);
  const ComplexVector back = restrict_state(gen, x);
  CHECK((back - z).norm() <= 1e-10 * (1.0 + z.norm()));
}
