#pragma once

#include "phs/numerics.hpp"

#include <cstdint>
#include <vector>

/// Dissipativity tests and the Cayley transform on finite matrices.
///
/// A matrix A is dissipative when Re<Ax, x> <= 0 for all x, i.e. when its
/// Hermitian part is negative semidefinite.  For such A the Cayley transform
/// (1 + A)(1 - A)^{-1} is a contraction, and it is an isometry exactly when
/// A is skew-adjoint.  These finite-dimensional facts mirror the semigroup
/// generation criteria that the rest of the library discretizes.
namespace phs {

/// True iff the largest eigenvalue of the Hermitian part of `a` is at most
/// `psd_abs * (1 + |a|)`.  Throws std::invalid_argument for non-square input.
[[nodiscard]] bool is_dissipative(const ComplexMatrix& a,
                                  const Tolerances& tol = {});

/// Sampled check of the resolvent characterization of dissipativity:
/// lambda*|x| <= |(lambda - a) x| + eq_abs for every lambda in `lambdas`
/// and `samples` random unit vectors per lambda.  For dissipative `a` this
/// holds for every lambda > 0 and every x.  Throws std::invalid_argument if
/// any lambda is <= 0 or `samples` < 1.
[[nodiscard]] bool resolvent_bound_check(const ComplexMatrix& a,
                                         const std::vector<double>& lambdas,
                                         int samples,
                                         const Tolerances& tol = {},
                                         std::uint64_t seed = 0);

/// (1 + a)(1 - a)^{-1}.  Contractive when `a` is dissipative, an isometry
/// when `a` is skew-adjoint.  Throws std::runtime_error when 1 - a is
/// numerically singular (which cannot happen for dissipative `a`).
[[nodiscard]] ComplexMatrix cayley_transform(const ComplexMatrix& a,
                                             const Tolerances& tol = {});

/// Inverse of the Cayley transform: -(1 - c)(1 + c)^{-1}.  Throws
/// std::runtime_error when 1 + c is numerically singular.
[[nodiscard]] ComplexMatrix inverse_cayley(const ComplexMatrix& c,
                                           const Tolerances& tol = {});

}  // namespace phs
