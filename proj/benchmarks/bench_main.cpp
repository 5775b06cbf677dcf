// Microbenchmarks for the hot paths of the boundary-condition pipeline:
// the matrix-level Cayley/theta calculus, generator assembly, the margin
// eigensolve, Crank-Nicolson stepping, and the quadrature-based residuals.

#include <phs/boundary.hpp>
#include <phs/cayley.hpp>
#include <phs/discretization.hpp>
#include <phs/model.hpp>
#include <phs/rng.hpp>

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace phs;

PHSystem transport_system() {
  ComplexMatrix w(1, 2);
  w << 1.0, 1.0;
  return PHSystem{1,
                  0.0,
                  1.0,
                  ComplexMatrix::Zero(1, 1),
                  ComplexMatrix::Identity(1, 1),
                  HamiltonianField::constant(ComplexMatrix::Identity(1, 1), 1.0, 1.0),
                  BoundaryMatrixW(w)};
}

PHSystem wave_system() {
  ComplexMatrix p1(2, 2);
  p1 << 0.0, 1.0, 1.0, 0.0;
  ComplexMatrix w(2, 4);
  w << 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0;
  return PHSystem{2,
                  0.0,
                  1.0,
                  ComplexMatrix::Zero(2, 2),
                  p1,
                  HamiltonianField::constant(ComplexMatrix::Identity(2, 2), 1.0, 1.0),
                  BoundaryMatrixW(w)};
}

ComplexMatrix dissipative_matrix(Index d, Rng& rng) {
  const ComplexMatrix g = rng.gaussian(d, d);
  const ComplexMatrix skew = (g - g.adjoint()) / 2.0;
  const ComplexMatrix h = rng.gaussian(d, d);
  return skew - h * h.adjoint();
}

GridFunction bump_state(const PHSystem& sys, Index n) {
  const SpatialGrid g = sys.grid(n);
  GridFunction x = GridFunction::zero(sys.d, g);
  for (Index i = 0; i < g.nodes(); ++i) {
    const double t = (g.node(i) - 0.5) / 0.1;
    x.values(0, i) = std::exp(-0.5 * t * t);
  }
  return x;
}

void BM_CayleyTransform(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(1);
  const ComplexMatrix a = dissipative_matrix(d, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cayley_transform(a));
  }
}
BENCHMARK(BM_CayleyTransform)->Arg(4)->Arg(16)->Arg(64);

void BM_ThetaOfW(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(2);
  const ComplexMatrix g = rng.gaussian(d, d);
  Eigen::JacobiSVD<ComplexMatrix> svd(
      g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const ComplexMatrix k = svd.matrixU() *
                          (svd.singularValues() / (1.0 + svd.singularValues()(0)))
                              .asDiagonal() *
                          svd.matrixV().adjoint();
  const BoundaryMatrixW w(theta_section(ContractionK(k)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(theta(w));
  }
}
BENCHMARK(BM_ThetaOfW)->Arg(4)->Arg(16);

void BM_ValidateW(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(3);
  const BoundaryMatrixW w(rng.gaussian(d, 2 * d));
  for (auto _ : state) {
    benchmark::DoNotOptimize(validate_w(w));
  }
}
BENCHMARK(BM_ValidateW)->Arg(4)->Arg(16);

void BM_Assemble(benchmark::State& state) {
  const Index n = state.range(0);
  const PHSystem sys = wave_system();
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(sys, n));
  }
}
BENCHMARK(BM_Assemble)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_DissipativityMargin(benchmark::State& state) {
  const Index n = state.range(0);
  const DiscreteGenerator gen = assemble(transport_system(), n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dissipativity_margin(gen));
  }
}
BENCHMARK(BM_DissipativityMargin)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CrankNicolsonStep(benchmark::State& state) {
  const Index n = state.range(0);
  const PHSystem sys = transport_system();
  const DiscreteGenerator gen = assemble(sys, n);
  const ComplexVector z = restrict_state(gen, bump_state(sys, n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(gen, z, 1e-3));
  }
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const Index n = state.range(0);
  const PHSystem sys = transport_system();
  const DiscreteGenerator gen = assemble(sys, n);
  const GridFunction x0 = bump_state(sys, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(gen, x0, 0.1, 1e-3));
  }
}
BENCHMARK(BM_Simulate)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_GreenResidual(benchmark::State& state) {
  const Index n = state.range(0);
  const PHSystem sys = wave_system();
  Rng rng(4);
  const SmoothField fx = random_smooth_field(sys.d, sys.a, sys.b, 4, rng);
  const SmoothField fy = random_smooth_field(sys.d, sys.a, sys.b, 4, rng);
  const GridFunction x = fx.sample(sys.grid(n));
  const GridFunction y = fy.sample(sys.grid(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(green_identity_residual(x, y, sys));
  }
}
BENCHMARK(BM_GreenResidual)->Arg(100)->Arg(200)->Arg(400);

void BM_DeficiencyBasis(benchmark::State& state) {
  const Index n = state.range(0);
  const PHSystem sys = wave_system();
  for (auto _ : state) {
    benchmark::DoNotOptimize(deficiency_basis(sys, +1, n));
  }
}
BENCHMARK(BM_DeficiencyBasis)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_CanonicalTriplet(benchmark::State& state) {
  const Index n = state.range(0);
  const PHSystem sys = transport_system();
  for (auto _ : state) {
    benchmark::DoNotOptimize(CanonicalTriplet(sys, n));
  }
}
BENCHMARK(BM_CanonicalTriplet)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
