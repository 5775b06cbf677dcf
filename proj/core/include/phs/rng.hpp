#pragma once

#include "phs/numerics.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace phs {

/// Seeded random source with fully specified output.
///
/// std::mt19937_64 is bit-exact by the standard, but the standard
/// distributions are not; the transforms here (53-bit uniforms, Box-Muller
/// normals) are spelled out so that a given seed produces identical streams
/// on every platform.  This is what makes seeded CLI runs byte-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (no cached spare, so the mapping from
  /// engine state to output stream is trivially reproducible).
  double normal() {
    const double u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u));
    return r * std::cos(2.0 * std::numbers::pi * v);
  }

  /// Complex standard normal (unit variance overall).
  Complex cnormal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * std::numbers::sqrt2 / 2.0;
  }

  /// Matrix with i.i.d. complex standard normal entries.
  ComplexMatrix gaussian(Index rows, Index cols) {
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = cnormal();
    return m;
  }

  /// Unit vector drawn uniformly from the complex sphere.
  ComplexVector unit_vector(Index dim) {
    ComplexVector v(dim);
    double norm2 = 0.0;
    do {
      for (Index i = 0; i < dim; ++i) v(i) = cnormal();
      norm2 = v.squaredNorm();
    } while (norm2 == 0.0);
    return v / std::sqrt(norm2);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace phs
