#include "phs/model.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace phs {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

void check_same_layout(const GridFunction& x, const GridFunction& y,
                       const char* what) {
  if (x.dim() != y.dim() || x.grid.n != y.grid.n || x.grid.a != y.grid.a ||
      x.grid.b != y.grid.b) {
    throw std::invalid_argument(std::string(what) +
                                ": grid functions must share grid and dim");
  }
}

void check_system_dims(const GridFunction& x, const PHSystem& sys,
                       const char* what) {
  if (x.dim() != sys.d) {
    throw std::invalid_argument(std::string(what) +
                                ": state dimension does not match system");
  }
}

/// H applied nodewise: column i becomes H(xi_i) * x_i.
ComplexMatrix apply_field(const HamiltonianField& h, const GridFunction& x) {
  ComplexMatrix u(x.values.rows(), x.values.cols());
  for (Index i = 0; i < x.values.cols(); ++i) {
    u.col(i) = h.at_node(x.grid, i) * x.values.col(i);
  }
  return u;
}

/// The H-independent part of the spatial operator: P0 v + P1 D v.
ComplexMatrix reduced_operator(const ComplexMatrix& v, const PHSystem& sys,
                               const SpatialGrid& g) {
  const ComplexMatrix dt = sbp_difference(g).transpose().cast<Complex>();
  return sys.p0 * v + sys.p1 * (v * dt);
}

FlowEffort traces(const ComplexVector& va, const ComplexVector& vb,
                  const ComplexMatrix& p1) {
  return FlowEffort{kInvSqrt2 * (p1 * (vb - va)), kInvSqrt2 * (vb + va)};
}

}  // namespace

// ===========================================================================
// HamiltonianField
// ===========================================================================

HamiltonianField::HamiltonianField(Kind kind, std::vector<ComplexMatrix> values,
                                   double m, double M)
    : kind_(kind), values_(std::move(values)), m_(m), M_(M) {
  if (values_.empty()) {
    throw std::invalid_argument("HamiltonianField: needs at least one value");
  }
  const Index d = values_.front().rows();
  for (const auto& v : values_) {
    if (v.rows() != d || v.cols() != d || d < 1) {
      throw std::invalid_argument(
          "HamiltonianField: values must be square with equal dimension");
    }
  }
  if (!(m_ > 0.0) || !(m_ <= M_)) {
    throw std::invalid_argument(
        "HamiltonianField: bounds must satisfy 0 < m <= M");
  }
}

HamiltonianField HamiltonianField::constant(ComplexMatrix value, double m,
                                            double M) {
  std::vector<ComplexMatrix> values;
  values.push_back(std::move(value));
  return HamiltonianField(Kind::constant, std::move(values), m, M);
}

HamiltonianField HamiltonianField::cells(std::vector<ComplexMatrix> values,
                                         double m, double M) {
  return HamiltonianField(Kind::cells, std::move(values), m, M);
}

HamiltonianField HamiltonianField::nodes(std::vector<ComplexMatrix> values,
                                         double m, double M) {
  return HamiltonianField(Kind::nodes, std::move(values), m, M);
}

const ComplexMatrix& HamiltonianField::at_node(const SpatialGrid& g,
                                               Index i) const {
  switch (kind_) {
    case Kind::constant:
      return values_.front();
    case Kind::cells: {
      const auto c = static_cast<Index>(values_.size());
      const double width = (g.b - g.a) / static_cast<double>(c);
      // Nudge against floating-point wobble so nodes sitting on a cell
      // boundary deterministically take the right-hand cell.
      auto cell = static_cast<Index>(
          std::floor((g.node(i) - g.a) / width + 1e-12));
      if (cell >= c) cell = c - 1;
      if (cell < 0) cell = 0;
      return values_[static_cast<std::size_t>(cell)];
    }
    case Kind::nodes:
      if (static_cast<Index>(values_.size()) != g.nodes()) {
        throw std::invalid_argument(
            "HamiltonianField: node-sampled values do not match grid");
      }
      return values_[static_cast<std::size_t>(i)];
  }
  throw std::logic_error("HamiltonianField: unreachable kind");
}

bool HamiltonianField::spectral_bounds_ok(const Tolerances& tol) const {
  for (const auto& v : values_) {
    const double scale = 1.0 + operator_norm(v);
    if (operator_norm(v - v.adjoint()) > tol.eq_abs * scale) return false;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(v),
                                                    Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < m_ - tol.psd_abs * scale) return false;
    if (es.eigenvalues().maxCoeff() > M_ + tol.psd_abs * scale) return false;
  }
  return true;
}

// ===========================================================================
// GridFunction
// ===========================================================================

GridFunction::GridFunction(SpatialGrid g, ComplexMatrix v)
    : grid(g), values(std::move(v)) {
  if (values.cols() != grid.nodes() || values.rows() < 1) {
    throw std::invalid_argument(
        "GridFunction: values must be d x (n+1) for the given grid");
  }
}

GridFunction GridFunction::zero(Index d, const SpatialGrid& g) {
  return GridFunction(g, ComplexMatrix::Zero(d, g.nodes()));
}

// ===========================================================================
// Structure validation
// ===========================================================================

SystemReport validate_system(const PHSystem& sys, const Tolerances& tol) {
  if (sys.d < 1 || sys.p0.rows() != sys.d || sys.p0.cols() != sys.d ||
      sys.p1.rows() != sys.d || sys.p1.cols() != sys.d ||
      sys.h.dim() != sys.d || sys.w.dim_d() != sys.d || !(sys.a < sys.b)) {
    throw std::invalid_argument("validate_system: inconsistent dimensions");
  }
  SystemReport report;
  report.p0_skew = operator_norm(sys.p0 + sys.p0.adjoint()) <=
                   tol.eq_abs * (1.0 + operator_norm(sys.p0));
  report.p1_hermitian = operator_norm(sys.p1 - sys.p1.adjoint()) <=
                        tol.eq_abs * (1.0 + operator_norm(sys.p1));
  report.p1_invertible = numerical_rank(sys.p1, tol) == sys.d;
  report.h_ok = sys.h.spectral_bounds_ok(tol);
  report.w = validate_w(sys.w, tol);
  return report;
}

// ===========================================================================
// Boundary traces and the spatial operator
// ===========================================================================

FlowEffort flow_effort(const GridFunction& x, const PHSystem& sys) {
  check_system_dims(x, sys, "flow_effort");
  return traces(x.at_a(), x.at_b(), sys.p1);
}

BoundaryPair triplet_boundary(const GridFunction& x, const PHSystem& sys) {
  const FlowEffort fe = flow_effort(x, sys);
  return BoundaryPair{-fe.f, fe.e};
}

GridFunction apply_operator(const GridFunction& x, const PHSystem& sys) {
  check_system_dims(x, sys, "apply_operator");
  const ComplexMatrix u = apply_field(sys.h, x);
  return GridFunction(x.grid, reduced_operator(u, sys, x.grid));
}

double energy(const GridFunction& x, const PHSystem& sys) {
  check_system_dims(x, sys, "energy");
  const RealVector w = trapezoid_weights(x.grid);
  double total = 0.0;
  for (Index i = 0; i < x.grid.nodes(); ++i) {
    const ComplexVector hx = sys.h.at_node(x.grid, i) * x.values.col(i);
    total += w(i) * x.values.col(i).dot(hx).real();
  }
  return 0.5 * total;
}

double boundary_power(const GridFunction& x, const PHSystem& sys) {
  check_system_dims(x, sys, "boundary_power");
  const ComplexVector ua = sys.h.at_node(x.grid, 0) * x.at_a();
  const ComplexVector ub =
      sys.h.at_node(x.grid, x.grid.nodes() - 1) * x.at_b();
  const FlowEffort fe = traces(ua, ub, sys.p1);
  return fe.e.dot(fe.f).real();
}

double green_identity_residual(const GridFunction& x, const GridFunction& y,
                               const PHSystem& sys) {
  check_system_dims(x, sys, "green_identity_residual");
  check_same_layout(x, y, "green_identity_residual");

  const ComplexMatrix u = apply_field(sys.h, x);
  const ComplexMatrix v = apply_field(sys.h, y);
  const GridFunction ax = apply_operator(x, sys);
  const GridFunction ay = apply_operator(y, sys);

  // Weighted inner products <p, q>_X = sum_i w_i <H_i p_i, q_i> with
  // Simpson weights (see header for why not trapezoid).
  const RealVector w = simpson_weights(x.grid);
  Complex lhs = 0.0;
  for (Index i = 0; i < x.grid.nodes(); ++i) {
    lhs -= w(i) * (v.col(i).dot(ax.values.col(i)) +
                   ay.values.col(i).dot(u.col(i)));
  }

  const Index last = x.grid.nodes() - 1;
  const FlowEffort fx = traces(u.col(0), u.col(last), sys.p1);
  const FlowEffort fy = traces(v.col(0), v.col(last), sys.p1);
  const ComplexVector g1x = -fx.f, g2x = fx.e;
  const ComplexVector g1y = -fy.f, g2y = fy.e;
  const Complex rhs = g2y.dot(g1x) + g1y.dot(g2x);

  return std::abs(lhs - rhs);
}

// ===========================================================================
// Deficiency solves
// ===========================================================================

DeficiencyBasis deficiency_basis(const PHSystem& sys, int epsilon, Index n) {
  if (epsilon != 1 && epsilon != -1) {
    throw std::invalid_argument("deficiency_basis: epsilon must be +1 or -1");
  }
  if (!sys.h.is_constant()) {
    throw std::invalid_argument(
        "deficiency_basis: requires a constant Hamiltonian field");
  }
  const Tolerances tol;
  if (operator_norm(sys.p0 + sys.p0.adjoint()) >
          tol.eq_abs * (1.0 + operator_norm(sys.p0)) ||
      numerical_rank(sys.p1, tol) < sys.d) {
    throw std::invalid_argument(
        "deficiency_basis: system structure matrices are invalid");
  }

  const SpatialGrid g = sys.grid(n);
  const Index d = sys.d;
  const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
  // Solutions of -(P0 x + P1 x') = eps x obey x' = C x with
  // C = -P1^{-1}(eps + P0).
  const ComplexMatrix c =
      -Eigen::FullPivLU<ComplexMatrix>(sys.p1).solve(
          static_cast<double>(epsilon) * eye + sys.p0);

  // Fundamental solution sampled at each node (fresh matrix exponential per
  // node; d is small, and this avoids compounding step-to-step error).
  std::vector<ComplexMatrix> transfer;
  transfer.reserve(static_cast<std::size_t>(g.nodes()));
  for (Index i = 0; i < g.nodes(); ++i) {
    const ComplexMatrix arg = (g.node(i) - g.a) * c;
    transfer.emplace_back(arg.exp());
  }

  DeficiencyBasis basis;
  basis.epsilon = epsilon;
  basis.endpoint_matrix.resize(2 * d, d);
  basis.endpoint_matrix.topRows(d) = transfer.front();
  basis.endpoint_matrix.bottomRows(d) = transfer.back();
  basis.residuals.resize(d);

  // The ODE residual (eps + P0 + P1 C) x vanishes identically in exact
  // arithmetic; evaluating it on the samples checks the assembled C and the
  // exponentials to rounding accuracy.
  const ComplexMatrix residual_op =
      static_cast<double>(epsilon) * eye + sys.p0 + sys.p1 * c;
  for (Index j = 0; j < d; ++j) {
    ComplexMatrix values(d, g.nodes());
    double res = 0.0;
    for (Index i = 0; i < g.nodes(); ++i) {
      values.col(i) = transfer[static_cast<std::size_t>(i)].col(j);
      res = std::max(res, (residual_op * values.col(i)).norm());
    }
    basis.columns.emplace_back(g, std::move(values));
    basis.residuals(j) = res;
  }
  return basis;
}

DomainDecomposition domain_decompose(const GridFunction& x,
                                     const PHSystem& sys) {
  check_system_dims(x, sys, "domain_decompose");
  const Index d = sys.d;
  const DeficiencyBasis plus = deficiency_basis(sys, +1, x.grid.n);
  const DeficiencyBasis minus = deficiency_basis(sys, -1, x.grid.n);

  ComplexMatrix system(2 * d, 2 * d);
  system.leftCols(d) = plus.endpoint_matrix;
  system.rightCols(d) = minus.endpoint_matrix;

  ComplexVector rhs(2 * d);
  rhs.head(d) = x.at_a();
  rhs.tail(d) = x.at_b();

  if (numerical_rank(system) < 2 * d) {
    throw std::runtime_error(
        "domain_decompose: endpoint system is numerically singular");
  }
  const ComplexVector coeff =
      Eigen::FullPivLU<ComplexMatrix>(system).solve(rhs);

  GridFunction x1 = x;
  for (Index j = 0; j < d; ++j) {
    x1.values -= coeff(j) * plus.columns[static_cast<std::size_t>(j)].values;
    x1.values -=
        coeff(d + j) * minus.columns[static_cast<std::size_t>(j)].values;
  }
  const double residual = std::max(x1.at_a().norm(), x1.at_b().norm());
  return DomainDecomposition{std::move(x1), coeff.head(d), coeff.tail(d),
                             residual};
}

// ===========================================================================
// Canonical triplet
// ===========================================================================

namespace {

/// Upper Cholesky factor R (positive diagonal) of the quadrature Gram matrix
/// of a deficiency basis, so that basis * R^{-1} is orthonormal in the
/// trapezoid inner product.  The positive-diagonal convention keeps the
/// orthonormalized basis deterministic across grids.
ComplexMatrix gram_cholesky(const DeficiencyBasis& basis,
                            const SpatialGrid& g) {
  const Index d = basis.dim();
  const RealVector w = trapezoid_weights(g);
  ComplexMatrix gram = ComplexMatrix::Zero(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index k = 0; k < d; ++k) {
      Complex s = 0.0;
      for (Index i = 0; i < g.nodes(); ++i) {
        s += w(i) *
             basis.columns[static_cast<std::size_t>(j)].values.col(i).dot(
                 basis.columns[static_cast<std::size_t>(k)].values.col(i));
      }
      gram(j, k) = s;
    }
  }
  Eigen::LLT<ComplexMatrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(
        "construct_canonical_triplet: Gram matrix not positive definite");
  }
  return ComplexMatrix(llt.matrixU());
}

}  // namespace

CanonicalTriplet::CanonicalTriplet(const PHSystem& sys, Index n)
    : grid_(sys.grid(n)),
      d_(sys.d),
      plus_(deficiency_basis(sys, +1, n)),
      minus_(deficiency_basis(sys, -1, n)) {
  endpoint_system_.resize(2 * d_, 2 * d_);
  endpoint_system_.leftCols(d_) = plus_.endpoint_matrix;
  endpoint_system_.rightCols(d_) = minus_.endpoint_matrix;
  if (numerical_rank(endpoint_system_) < 2 * d_) {
    throw std::runtime_error(
        "construct_canonical_triplet: endpoint system is singular");
  }
  r_plus_ = gram_cholesky(plus_, grid_);
  r_minus_ = gram_cholesky(minus_, grid_);
}

std::pair<ComplexVector, ComplexVector> CanonicalTriplet::coordinates(
    const GridFunction& x) const {
  if (x.dim() != d_ || x.grid.n != grid_.n) {
    throw std::invalid_argument(
        "CanonicalTriplet: state does not match construction grid");
  }
  ComplexVector rhs(2 * d_);
  rhs.head(d_) = x.at_a();
  rhs.tail(d_) = x.at_b();
  const ComplexVector coeff =
      Eigen::FullPivLU<ComplexMatrix>(endpoint_system_).solve(rhs);
  // Coordinates in the orthonormalized bases O = N R^{-1}:  N alpha = O
  // (R alpha), so the coordinate vector is R alpha.
  return {r_plus_ * coeff.head(d_), r_minus_ * coeff.tail(d_)};
}

ComplexVector CanonicalTriplet::gamma1(const GridFunction& x) const {
  const auto [cp, cm] = coordinates(x);
  return cp + cm;
}

ComplexVector CanonicalTriplet::gamma2(const GridFunction& x) const {
  const auto [cp, cm] = coordinates(x);
  return cp - cm;
}

GridFunction CanonicalTriplet::preimage(const ComplexVector& y1,
                                        const ComplexVector& y2) const {
  if (y1.size() != d_ || y2.size() != d_) {
    throw std::invalid_argument("CanonicalTriplet: target pair must be in C^d");
  }
  const ComplexVector cp = 0.5 * (y1 + y2);
  const ComplexVector cm = 0.5 * (y1 - y2);
  const ComplexVector alpha =
      r_plus_.triangularView<Eigen::Upper>().solve(cp);
  const ComplexVector beta =
      r_minus_.triangularView<Eigen::Upper>().solve(cm);
  ComplexMatrix values = ComplexMatrix::Zero(d_, grid_.nodes());
  for (Index j = 0; j < d_; ++j) {
    values += alpha(j) * plus_.columns[static_cast<std::size_t>(j)].values;
    values += beta(j) * minus_.columns[static_cast<std::size_t>(j)].values;
  }
  return GridFunction(grid_, std::move(values));
}

double CanonicalTriplet::pairing_residual(const GridFunction& x,
                                          const GridFunction& y,
                                          const PHSystem& sys) const {
  check_same_layout(x, y, "pairing_residual");
  if (x.grid.n != grid_.n) {
    throw std::invalid_argument(
        "CanonicalTriplet: inputs must live on the construction grid");
  }
  // The identity concerns the H-independent reduced operator (the same one
  // the deficiency solves address), with plain L2 trapezoid products.
  const ComplexMatrix ax = reduced_operator(x.values, sys, grid_);
  const ComplexMatrix ay = reduced_operator(y.values, sys, grid_);
  const RealVector w = trapezoid_weights(grid_);
  Complex lhs = 0.0;
  for (Index i = 0; i < grid_.nodes(); ++i) {
    lhs -= w(i) * (y.values.col(i).dot(ax.col(i)) +
                   ay.col(i).dot(x.values.col(i)));
  }
  const Complex rhs =
      gamma2(y).dot(gamma1(x)) + gamma1(y).dot(gamma2(x));
  return std::abs(lhs - rhs);
}

CanonicalTriplet construct_canonical_triplet(const PHSystem& sys, Index n) {
  return CanonicalTriplet(sys, n);
}

// ===========================================================================
// Smooth test fields
// ===========================================================================

GridFunction SmoothField::sample(const SpatialGrid& g) const {
  const Index d = cos_coeff.rows();
  const Index modes = sin_coeff.cols();
  ComplexMatrix values = ComplexMatrix::Zero(d, g.nodes());
  for (Index i = 0; i < g.nodes(); ++i) {
    const double tau = (g.node(i) - a) / (b - a);
    values.col(i) = cos_coeff.col(0);
    for (Index k = 1; k <= modes; ++k) {
      const double phase = std::numbers::pi * static_cast<double>(k) * tau;
      values.col(i) += cos_coeff.col(k) * std::cos(phase);
      values.col(i) += sin_coeff.col(k - 1) * std::sin(phase);
    }
  }
  return GridFunction(g, std::move(values));
}

SmoothField random_smooth_field(Index d, double a, double b, int modes,
                                Rng& rng) {
  SmoothField field;
  field.a = a;
  field.b = b;
  field.cos_coeff.resize(d, modes + 1);
  field.sin_coeff.resize(d, modes);
  for (Index i = 0; i < d; ++i) {
    field.cos_coeff(i, 0) = rng.cnormal();
    for (int k = 1; k <= modes; ++k) {
      const double decay = 1.0 / (1.0 + static_cast<double>(k * k));
      field.cos_coeff(i, k) = decay * rng.cnormal();
      field.sin_coeff(i, k - 1) = decay * rng.cnormal();
    }
  }
  return field;
}

}  // namespace phs
