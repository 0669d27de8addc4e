#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "pwcalc/perspectives.hpp"
#include "pwcalc/quadrature.hpp"

namespace pwcalc {

// Relative weight of rho on a singular part above which a divergent tail makes the integral +inf.
inline constexpr double kTailTol = 1e-10;

namespace detail {

inline double state_value(const Matrix& rho, const Matrix& x) { return (rho * x).trace().real(); }

// rho(A - [B]A) relative to Tr(rho) * scale.
inline bool singular_weight(const Matrix& rho, const Matrix& a, const Matrix& b) {
  auto leb = lebesgue_decomposition(a, b);
  double scale = std::max({1.0, spectral_norm(a), spectral_norm(b)});
  return state_value(rho, leb.singular_part) > kTailTol * rho.trace().real() * scale;
}

}  // namespace detail

// a0 rho(A) + b0 rho(B) + c phi_{t^2}(A,B)(rho) + d phi_{t^2}(B,A)(rho)
//   + int rho(A) + rho(B)/l - ((1+l)/l)^2 rho(A:lB) dmu(l)
inline ExtendedReal integral_eval_91(const IntegralRepr77& r, const Matrix& a, const Matrix& b, const State& rho) {
  const Matrix& p = rho.density();
  const double ra = detail::state_value(p, a), rb = detail::state_value(p, b);
  const double a0 = r.b - 2 * r.c + r.d;
  const double b0 = r.a - r.b + r.c - 2 * r.d;
  ExtendedReal v = a0 * ra + b0 * rb;
  auto sq = power_function(2);
  if (r.c > 0) v += r.c * perspective(sq, a, b).evaluate(rho);
  if (r.d > 0) v += r.d * perspective(sq, b, a).evaluate(rho);
  if (r.mu.empty()) return v;
  if (r.mu.mass().is_infinite() && detail::singular_weight(p, a, b)) return inf();
  if (r.mu.inverse_moment().is_infinite() && detail::singular_weight(p, b, a)) return inf();
  double integral = r.mu.integrate([&](double l) {
    double k = (1 + l) / l;
    return ra + rb / l - k * k * detail::state_value(p, parallel_sum(a, l * b));
  });
  return v + integral;
}

// f'(0+) rho(A) + f(0+) rho(B) + c phi_{t^2}(A,B)(rho) + int rho(A) - rho(A:lB) dnu(l)
inline ExtendedReal integral_eval_92(const IntegralRepr97& r, const Matrix& a, const Matrix& b, const State& rho) {
  const Matrix& p = rho.density();
  const double ra = detail::state_value(p, a), rb = detail::state_value(p, b);
  ExtendedReal v = r.fp0 * ra + r.f0 * rb;
  if (r.c > 0) v += r.c * perspective(power_function(2), a, b).evaluate(rho);
  if (r.nu.empty()) return v;
  if (r.nu.mass().is_infinite() && detail::singular_weight(p, a, b)) return inf();
  double integral = r.nu.integrate([&](double l) { return ra - detail::state_value(p, parallel_sum(a, l * b)); });
  return v + integral;
}

inline bool is_projection(const Matrix& p, double tol = 1e-10) {
  return max_asymmetry(p) <= tol && (p * p - p).cwiseAbs().maxCoeff() <= tol;
}

// Range of a projection, read off as the eigenvalues above 1/2.
inline Subspace projection_range(const Matrix& p) {
  auto e = eigh(p);
  std::vector<Index> keep;
  for (Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > 0.5) keep.push_back(i);
  Matrix basis(p.rows(), static_cast<Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) basis.col(static_cast<Index>(j)) = e.vectors.col(keep[j]);
  return Subspace::from_orthonormal(basis);
}

// f(1)(P^Q) + f'(inf)(P - P^Q) + f(0+)(Q - P^Q) as a form sum.
inline ExtendedSelfAdjoint two_projections(const ExtendedFunction& f, const Matrix& p, const Matrix& q) {
  require_same_dim(p, q, "two_projections");
  if (!is_projection(p) || !is_projection(q)) throw PreconditionError("two_projections: inputs must be projections");
  if (!f.f_at_1) throw PreconditionError("two_projections: f(1) is not declared");
  Subspace meet = subspace_meet(projection_range(p), projection_range(q));
  Matrix m = meet.projector();
  auto term = [](ExtendedReal c, const Matrix& x) {
    if (c.is_finite()) return ExtendedSelfAdjoint::bounded(c.value() * x);
    return ExtendedSelfAdjoint::infinite_on(projection_range(x));
  };
  auto t1 = term(*f.f_at_1, m);
  auto t2 = term(f.alpha(), hermitian_part(p - m));
  auto t3 = term(f.beta(), hermitian_part(q - m));
  return add(add(t1, t2), t3);
}

struct DecompositionPiece {
  double lo, hi;
  Vector eta, zeta;
};

// Piecewise constant eta(t) + zeta(t) = xi over the interval [lo, hi].
struct Decomposition {
  double lo = 0.0, hi = 0.0;
  std::vector<DecompositionPiece> pieces;
  Vector target;

  void validate() const {
    if (pieces.empty()) throw PreconditionError("Decomposition: no pieces");
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };
    if (!close(pieces.front().lo, lo) || !close(pieces.back().hi, hi))
      throw PreconditionError("Decomposition: pieces do not cover the interval");
    double tol = 1e-12 * std::max(1.0, target.norm());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const auto& pc = pieces[i];
      if (!(pc.lo <= pc.hi)) throw PreconditionError("Decomposition: piece with lo > hi");
      if (i + 1 < pieces.size() && !close(pc.hi, pieces[i + 1].lo))
        throw PreconditionError("Decomposition: pieces are not contiguous");
      if ((pc.eta + pc.zeta - target).norm() > tol)
        throw PreconditionError("Decomposition: eta + zeta differs from the target vector");
    }
  }

  const DecompositionPiece& at(double t) const {
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i)
      if (t < pieces[i].hi) return pieces[i];
    return pieces.back();
  }
};

inline std::pair<Vector, Vector> optimal_decomposition(const Matrix& a, const Matrix& b, const Vector& xi, double t) {
  if (!(t > 0)) throw PreconditionError("optimal_decomposition: t must be positive");
  Vector zeta = psd_pinv(hermitian_part(a + t * b)) * (a * xi);
  return {xi - zeta, zeta};
}

inline double quad(const Matrix& x, const Vector& v) { return v.dot(x * v).real(); }

inline double variational_bound_94(const IntegralRepr77& r, const Matrix& a, const Matrix& b, const Vector& xi, int n,
                                   const Decomposition& dec) {
  dec.validate();
  auto ap = approximants(r, n);
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };
  if (!close(dec.lo, 1.0 / n) || !close(dec.hi, static_cast<double>(n)))
    throw PreconditionError("variational_bound_94: decomposition must live on [1/n, n]");
  if ((dec.target - xi).norm() > 1e-12 * std::max(1.0, xi.norm()))
    throw PreconditionError("variational_bound_94: decomposition targets a different vector");
  double v = ap.alpha_n * quad(a, xi) + ap.beta_n * quad(b, xi);
  for (const auto& at : ap.nu_n.atoms) {
    const auto& pc = dec.at(at.location);
    double t = at.location;
    v -= at.weight * (1 + t) / t * (quad(a, pc.eta) + t * quad(b, pc.zeta));
  }
  return v;
}

inline Decomposition trivial_decomposition(const Vector& xi, int n) {
  Decomposition d;
  d.lo = 1.0 / n;
  d.hi = n;
  d.target = xi;
  d.pieces.push_back({d.lo, d.hi, xi, Vector::Zero(xi.size())});
  return d;
}

// Pieces around each atom of nu_n carrying that atom's optimal split.
inline Decomposition optimal_decomposition_for(const IntegralRepr77& r, const Matrix& a, const Matrix& b,
                                               const Vector& xi, int n) {
  auto ap = approximants(r, n);
  std::vector<double> locs;
  for (const auto& at : ap.nu_n.atoms) locs.push_back(at.location);
  std::sort(locs.begin(), locs.end());
  locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
  if (locs.empty()) return trivial_decomposition(xi, n);
  Decomposition d;
  d.lo = 1.0 / n;
  d.hi = n;
  d.target = xi;
  double lo = d.lo;
  for (std::size_t i = 0; i < locs.size(); ++i) {
    double hi = i + 1 < locs.size() ? 0.5 * (locs[i] + locs[i + 1]) : d.hi;
    auto [eta, zeta] = optimal_decomposition(a, b, xi, locs[i]);
    d.pieces.push_back({lo, hi, eta, zeta});
    lo = hi;
  }
  return d;
}

// Per-n suprema of the variational expression; nondecreasing in n.
inline std::vector<double> variational_envelope(const IntegralRepr77& r, const Matrix& a, const Matrix& b,
                                                const Vector& xi, const std::vector<int>& ns) {
  std::vector<double> out;
  for (int n : ns) out.push_back(variational_bound_94(r, a, b, xi, n, optimal_decomposition_for(r, a, b, xi, n)));
  return out;
}

}  // namespace pwcalc
