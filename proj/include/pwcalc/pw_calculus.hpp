#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pwcalc/scalar_functions.hpp"

namespace pwcalc {

// Eigenvalues of R within this distance of 0 or 1 take the corner values.
inline constexpr double kEndpointTol = 1e-10;

enum class DiagonalDomain { closed, open_at_zero, open_at_one };

// Homogeneous phi on [0,inf)^2 through its diagonal t -> phi(t, 1-t).
struct HomogeneousFunction {
  std::string name;
  std::function<ExtendedReal(double)> diagonal;  // on (0,1)
  std::optional<ExtendedReal> at_one;            // phi(1,0)
  std::optional<ExtendedReal> at_zero;           // phi(0,1)
  DiagonalDomain domain = DiagonalDomain::closed;

  ExtendedReal on_diagonal(double t, double tau_end = kEndpointTol) const {
    t = std::clamp(t, 0.0, 1.0);
    if (t <= tau_end) {
      if (!at_zero) throw PreconditionError(name + ": phi(0,1) is outside the domain");
      return *at_zero;
    }
    if (t >= 1.0 - tau_end) {
      if (!at_one) throw PreconditionError(name + ": phi(1,0) is outside the domain");
      return *at_one;
    }
    return diagonal(t);
  }

  // phi(x, y) = (x+y) phi(t, 1-t) with t = x/(x+y); phi(0,0) = 0.
  ExtendedReal operator()(double x, double y, double tau_end = kEndpointTol) const {
    x = std::max(x, 0.0);
    y = std::max(y, 0.0);
    double s = x + y;
    if (s == 0.0) return 0.0;
    return s * on_diagonal(x / s, tau_end);
  }
};

// The diagonal as a scalar function on [0,1] (corners at the closed ends).
inline ExtendedFunction diagonal_function(const HomogeneousFunction& phi) {
  ExtendedFunction f;
  f.name = phi.name + ".diagonal";
  f.domain = {0.0, 1.0, phi.domain != DiagonalDomain::open_at_zero, phi.domain != DiagonalDomain::open_at_one};
  f.eval = [phi](double t) { return phi.on_diagonal(t, 0.0); };
  return f;
}

struct CalculusOptions {
  double endpoint_tol = kEndpointTol;
  std::optional<double> rank_tol;  // for A+B; default n * eps * lambda_max
};

struct CompatibleRepresentation {
  Subspace range;  // H_AB inside H
  Matrix t;        // k x n: (A+B)^(1/2) in range coordinates
  Matrix r;        // k x k, 0 <= R <= I
  Matrix s;        // I - R
  Index dim() const { return r.rows(); }
};

inline CompatibleRepresentation compatible_representation(const Matrix& a, const Matrix& b,
                                                          std::optional<double> rank_tol = std::nullopt) {
  require_same_dim(a, b, "compatible_representation");
  const Index n = a.rows();
  auto e = eigh(a + b);
  double tol = rank_tol.value_or(default_rank_tol(e.values));
  std::vector<Index> keep;
  for (Index i = 0; i < n; ++i)
    if (e.values(i) > tol) keep.push_back(i);
  const Index k = static_cast<Index>(keep.size());
  Matrix u(n, k);
  RealVector d(k);
  for (Index j = 0; j < k; ++j) {
    u.col(j) = e.vectors.col(keep[static_cast<std::size_t>(j)]);
    d(j) = e.values(keep[static_cast<std::size_t>(j)]);
  }
  CompatibleRepresentation rep;
  rep.range = Subspace::from_orthonormal(u);
  rep.t = d.cwiseSqrt().cast<Complex>().asDiagonal() * u.adjoint();
  RealVector dis = d.cwiseSqrt().cwiseInverse();
  Matrix r = dis.cast<Complex>().asDiagonal() * (u.adjoint() * a * u) * dis.cast<Complex>().asDiagonal();
  if (k > 0) {
    auto er = eigh(r);
    r = from_eigen(er.vectors, er.values.cwiseMax(0.0).cwiseMin(1.0));
  }
  rep.r = r;
  rep.s = Matrix::Identity(k, k) - r;
  return rep;
}

struct PwDetail {
  ExtendedSelfAdjoint value;
  RealVector r_eigs;
  int hits_zero = 0;
  int hits_one = 0;
};

enum class RestrictedSide { ge, le };

inline PwDetail pw_apply_detailed(const HomogeneousFunction& phi, const Matrix& a, const Matrix& b,
                                  const CalculusOptions& opt = {},
                                  std::optional<RestrictedSide> side = std::nullopt) {
  check_psd(a, "A");
  check_psd(b, "B");
  require_same_dim(a, b, "pw_apply");
  const Index n = a.rows();
  auto rep = compatible_representation(a, b, opt.rank_tol);
  PwDetail out;
  const Index k = rep.dim();
  if (k == 0) {
    out.value = ExtendedSelfAdjoint::zero(n);
    return out;
  }
  auto er = eigh(rep.r);
  out.r_eigs = er.values;
  const double tau = opt.endpoint_tol;
  if (side == RestrictedSide::ge && er.values(0) <= tau)
    throw PreconditionError("pw_apply_restricted: A does not dominate a multiple of B (min eigenvalue of R = " +
                            ExtendedReal(er.values(0)).to_string() + ")");
  if (side == RestrictedSide::le && 1.0 - er.values(k - 1) <= tau)
    throw PreconditionError("pw_apply_restricted: B does not dominate a multiple of A (min eigenvalue of S = " +
                            ExtendedReal(1.0 - er.values(k - 1)).to_string() + ")");
  std::vector<EigenPair> pairs;
  for (Index i = 0; i < k; ++i) {
    double t = er.values(i);
    if (t <= tau) ++out.hits_zero;
    if (t >= 1.0 - tau) ++out.hits_one;
    pairs.push_back({phi.on_diagonal(t, tau), er.vectors.col(i)});
  }
  out.value = congruence(rep.t, make_extended(pairs, k));
  return out;
}

inline ExtendedSelfAdjoint pw_apply(const HomogeneousFunction& phi, const Matrix& a, const Matrix& b,
                                    const CalculusOptions& opt = {}) {
  if (phi.domain != DiagonalDomain::closed)
    throw PreconditionError("pw_apply: " + phi.name + " is a restricted-domain function");
  return pw_apply_detailed(phi, a, b, opt).value;
}

inline ExtendedSelfAdjoint pw_apply_restricted(const HomogeneousFunction& phi, const Matrix& a, const Matrix& b,
                                               RestrictedSide side, const CalculusOptions& opt = {}) {
  if (side == RestrictedSide::ge && phi.domain == DiagonalDomain::open_at_one)
    throw PreconditionError("pw_apply_restricted: function is defined on [0,1), use side le");
  if (side == RestrictedSide::le && phi.domain == DiagonalDomain::open_at_zero)
    throw PreconditionError("pw_apply_restricted: function is defined on (0,1], use side ge");
  return pw_apply_detailed(phi, a, b, opt, side).value;
}

// Joint eigenbasis of a commuting pair; used as an independent oracle.
inline ExtendedSelfAdjoint pw_commuting_oracle(const HomogeneousFunction& phi, const Matrix& a, const Matrix& b,
                                               const CalculusOptions& opt = {}) {
  check_psd(a, "A");
  check_psd(b, "B");
  require_same_dim(a, b, "pw_commuting_oracle");
  const Index n = a.rows();
  double na = spectral_norm(a), nb = spectral_norm(b);
  if (spectral_norm(a * b - b * a) > 1e-9 * std::max(na * nb, 1e-300) && na * nb > 0)
    throw PreconditionError("pw_commuting_oracle: A and B do not commute");
  auto ea = eigh(a);
  double cluster_tol = 1e-9 * std::max(1.0, na);
  double tol_a = default_rank_tol(ea.values);
  auto eb_all = eigh(b);
  double tol_b = default_rank_tol(eb_all.values);
  std::vector<EigenPair> pairs;
  Index i = 0;
  while (i < n) {
    Index j = i + 1;
    while (j < n && ea.values(j) - ea.values(j - 1) <= cluster_tol) ++j;
    Matrix uc = ea.vectors.middleCols(i, j - i);
    auto eb = eigh(uc.adjoint() * b * uc);
    Matrix w = uc * eb.vectors;
    for (Index c = 0; c < w.cols(); ++c) {
      Vector v = w.col(c);
      double x = v.dot(a * v).real();
      double y = v.dot(b * v).real();
      if (x <= tol_a) x = 0.0;
      if (y <= tol_b) y = 0.0;
      pairs.push_back({phi(x, y, opt.endpoint_tol), v});
    }
    i = j;
  }
  return make_extended(pairs, n);
}

// t -> phi(t, alpha) as a scalar function on [0,inf).
inline ExtendedFunction first_slot(const HomogeneousFunction& phi, double alpha, double tau = kEndpointTol) {
  ExtendedFunction f;
  f.name = phi.name + "(t," + ExtendedReal(alpha).to_string() + ")";
  f.domain = Interval::nonnegative();
  f.eval = [phi, alpha, tau](double t) { return phi(t, alpha, tau); };
  return f;
}

inline ExtendedFunction second_slot(const HomogeneousFunction& phi, double alpha, double tau = kEndpointTol) {
  ExtendedFunction f;
  f.name = phi.name + "(" + ExtendedReal(alpha).to_string() + ",t)";
  f.domain = Interval::nonnegative();
  f.eval = [phi, alpha, tau](double t) { return phi(alpha, t, tau); };
  return f;
}

// c * X with inf * X meaning +inf on range X and 0 on ker X.
inline ExtendedSelfAdjoint extended_multiple(ExtendedReal c, const Matrix& x) {
  if (c.is_finite()) return ExtendedSelfAdjoint::bounded(c.value() * x);
  return ExtendedSelfAdjoint::infinite_on(psd_range(x));
}

struct SpecialValues {
  ExtendedSelfAdjoint a_alpha;   // phi(A, alpha I)
  ExtendedSelfAdjoint alpha_a;   // phi(alpha I, A)
  ExtendedSelfAdjoint scaled;    // phi(alpha A, beta A)
};

inline SpecialValues special_values(const HomogeneousFunction& phi, const Matrix& a, double alpha, double beta,
                                    const CalculusOptions& opt = {}) {
  check_psd(a, "A");
  if (alpha < 0 || beta < 0) throw PreconditionError("special_values: alpha, beta must be nonnegative");
  SpecialValues v;
  v.a_alpha = calculus(first_slot(phi, alpha, opt.endpoint_tol), a);
  v.alpha_a = calculus(second_slot(phi, alpha, opt.endpoint_tol), a);
  v.scaled = extended_multiple(phi(alpha, beta, opt.endpoint_tol), a);
  return v;
}

// f(X) for X positive definite by construction: eigenvalues at rounding
// level are floored instead of being sent to f(0).
inline ExtendedSelfAdjoint calculus_definite(const ExtendedFunction& f, const Matrix& x) {
  auto e = eigh(x);
  const Index n = e.values.size();
  const double floor = kEps * std::max(max_abs(e.values), 1e-300);
  std::vector<EigenPair> pairs;
  for (Index i = 0; i < n; ++i) pairs.push_back({f(std::max(e.values(i), floor)), e.vectors.col(i)});
  return make_extended(pairs, n);
}

inline ExtendedSelfAdjoint invertible_formula(const HomogeneousFunction& phi, const Matrix& a, const Matrix& b,
                                              const CalculusOptions& opt = {}) {
  check_psd(a, "A");
  check_psd(b, "B");
  require_same_dim(a, b, "invertible_formula");
  auto eb = eigh(b);
  auto ea = eigh(a);
  if (eb.values.size() == 0) return ExtendedSelfAdjoint::zero(0);
  if (eb.values(0) > default_rank_tol(eb.values)) {
    Matrix bis = from_eigen(eb.vectors, eb.values.cwiseSqrt().cwiseInverse());
    Matrix bs = from_eigen(eb.vectors, eb.values.cwiseSqrt());
    Matrix x = hermitian_part(bis * a * bis);
    return congruence(bs, calculus_definite(first_slot(phi, 1.0, opt.endpoint_tol), x));
  }
  if (ea.values(0) > default_rank_tol(ea.values)) {
    Matrix ais = from_eigen(ea.vectors, ea.values.cwiseSqrt().cwiseInverse());
    Matrix as = from_eigen(ea.vectors, ea.values.cwiseSqrt());
    Matrix x = hermitian_part(ais * b * ais);
    return congruence(as, calculus_definite(second_slot(phi, 1.0, opt.endpoint_tol), x));
  }
  throw PreconditionError("invertible_formula: neither A nor B is invertible");
}

struct HomogeneityReport {
  bool skipped = false;
  std::string reason;
  bool agrees = true;
  double max_deviation = 0.0;
  double slack = 0.0;
  std::optional<Vector> witness;
};

// pw_apply(phi, C*AC, C*BC) against C* pw_apply(phi, A, B) C for C : K -> H.
inline HomogeneityReport check_homogeneity(const HomogeneousFunction& phi, const Matrix& a, const Matrix& b,
                                           const Matrix& c, const CalculusOptions& opt = {}) {
  HomogeneityReport rep;
  if (c.rows() != a.rows()) throw DimensionError("check_homogeneity: C must map into the space of A and B");
  Subspace ran_c = Subspace::span(c);
  Subspace ran_ab = psd_range(a + b);
  if (!subspace_contains(ran_c, ran_ab)) {
    rep.skipped = true;
    rep.reason = "range(A+B) is not contained in range(C)";
    return rep;
  }
  auto lhs = pw_apply(phi, hermitian_part(c.adjoint() * a * c), hermitian_part(c.adjoint() * b * c), opt);
  auto rhs = congruence(c, pw_apply(phi, a, b, opt));
  rep.slack = 1e-8 * std::max(form_scale(lhs), form_scale(rhs));
  auto up = form_leq(lhs, rhs, rep.slack);
  auto down = form_leq(rhs, lhs, rep.slack);
  rep.agrees = up.holds && down.holds;
  rep.max_deviation = std::max({0.0, -up.min_gap, -down.min_gap});
  if (!up.holds) rep.witness = up.witness;
  else if (!down.holds) rep.witness = down.witness;
  return rep;
}

struct RestrictedBoundedness {
  bool bounded = true;
  std::vector<std::pair<double, double>> sup_by_delta;  // (delta, sup |diag| on [delta,1] or [0,1-delta])
};

// Samples the diagonal on [delta,1] (or [0,1-delta]) grids with refinement;
// a sup that keeps growing under refinement, or any +inf, means unbounded.
inline RestrictedBoundedness check_restricted_bounded(const HomogeneousFunction& phi) {
  RestrictedBoundedness out;
  bool open_zero = phi.domain != DiagonalDomain::open_at_one;
  for (int e = 1; e <= 6; ++e) {
    double delta = std::pow(10.0, -e);
    double lo = open_zero ? delta : 0.0;
    double hi = open_zero ? 1.0 : 1.0 - delta;
    std::vector<double> sups;
    bool finite = true;
    for (int level = 0; level < 5 && finite; ++level) {
      int m = 100 << (2 * level);
      double sup = 0.0;
      for (int i = 0; i <= m; ++i) {
        double t = lo + (hi - lo) * i / m;
        auto v = phi.on_diagonal(t, 0.0);
        if (v.is_infinite()) {
          finite = false;
          break;
        }
        sup = std::max(sup, std::abs(v.value()));
      }
      sups.push_back(sup);
    }
    double s = finite ? sups.back() : kInf;
    out.sup_by_delta.push_back({delta, s});
    if (!finite || sups.back() > 50.0 * std::max(sups.front(), 1e-300)) out.bounded = false;
  }
  return out;
}

}  // namespace pwcalc
