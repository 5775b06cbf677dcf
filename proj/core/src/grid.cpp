#include "phs/grid.hpp"

#include <stdexcept>

namespace phs {

SpatialGrid::SpatialGrid(double a_, double b_, Index n_) : a(a_), b(b_), n(n_) {
  if (!(a < b)) {
    throw std::invalid_argument("SpatialGrid: interval must satisfy a < b");
  }
  if (n < 8) {
    throw std::invalid_argument("SpatialGrid: need at least 8 cells");
  }
}

RealVector SpatialGrid::coordinates() const {
  RealVector x(nodes());
  for (Index i = 0; i < nodes(); ++i) x(i) = node(i);
  return x;
}

RealMatrix sbp_difference(const SpatialGrid& g) {
  const Index m = g.nodes();
  const double h = g.h();
  RealMatrix d = RealMatrix::Zero(m, m);
  d(0, 0) = -1.0 / h;
  d(0, 1) = 1.0 / h;
  for (Index i = 1; i + 1 < m; ++i) {
    d(i, i - 1) = -0.5 / h;
    d(i, i + 1) = 0.5 / h;
  }
  d(m - 1, m - 2) = -1.0 / h;
  d(m - 1, m - 1) = 1.0 / h;
  return d;
}

RealVector trapezoid_weights(const SpatialGrid& g) {
  const double h = g.h();
  RealVector w = RealVector::Constant(g.nodes(), h);
  w(0) = 0.5 * h;
  w(g.nodes() - 1) = 0.5 * h;
  return w;
}

RealVector simpson_weights(const SpatialGrid& g) {
  const double h = g.h();
  const Index m = g.nodes();
  RealVector w = RealVector::Zero(m);
  Index even_cells = g.n;
  if (g.n % 2 != 0) even_cells = g.n - 3;  // leave three cells for the 3/8 rule

  // Classic composite Simpson over pairs of cells.
  for (Index i = 0; i + 2 <= even_cells; i += 2) {
    w(i) += h / 3.0;
    w(i + 1) += 4.0 * h / 3.0;
    w(i + 2) += h / 3.0;
  }
  // Newton 3/8 rule over the trailing three cells for odd cell counts.
  if (g.n % 2 != 0) {
    const Index i = even_cells;
    w(i) += 3.0 * h / 8.0;
    w(i + 1) += 9.0 * h / 8.0;
    w(i + 2) += 9.0 * h / 8.0;
    w(i + 3) += 3.0 * h / 8.0;
  }
  return w;
}

}  // namespace phs
