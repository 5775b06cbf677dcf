#pragma once

#include "phs/numerics.hpp"

/// Equispaced grids, the summation-by-parts difference operator, and the
/// quadrature weights used throughout the library.
///
/// The pair (difference matrix D, trapezoid weights M) satisfies the exact
/// algebraic identity  M D + D^T M = diag(-1, 0, ..., 0, +1), which is the
/// discrete analogue of integration by parts.  Energy bookkeeping in the
/// discretization module relies on this identity holding to machine
/// precision, not merely up to truncation error.
namespace phs {

/// Equispaced nodes a = x_0 < x_1 < ... < x_n = b.
struct SpatialGrid {
  double a = 0.0;
  double b = 1.0;
  Index n = 8;  ///< number of cells; nodes() == n + 1

  SpatialGrid(double a_, double b_, Index n_);

  [[nodiscard]] double h() const { return (b - a) / static_cast<double>(n); }
  [[nodiscard]] Index nodes() const { return n + 1; }
  [[nodiscard]] double node(Index i) const {
    return a + static_cast<double>(i) * h();
  }
  [[nodiscard]] RealVector coordinates() const;
};

/// Second-order summation-by-parts difference matrix on `g`:
/// central differences in the interior, one-sided first/last rows.
[[nodiscard]] RealMatrix sbp_difference(const SpatialGrid& g);

/// Trapezoid quadrature weights h * (1/2, 1, ..., 1, 1/2); these form the
/// diagonal mass matrix paired with `sbp_difference`.
[[nodiscard]] RealVector trapezoid_weights(const SpatialGrid& g);

/// Composite Simpson quadrature weights (3/8-rule on the last three cells
/// when the cell count is odd).  Fourth-order accurate; used by diagnostics
/// that need a quadrature finer than the trapezoid rule.
[[nodiscard]] RealVector simpson_weights(const SpatialGrid& g);

}  // namespace phs
