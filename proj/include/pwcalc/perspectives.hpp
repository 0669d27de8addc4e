#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pwcalc/pw_calculus.hpp"

namespace pwcalc {

// phi_f(x,y) = y f(x/y), with phi_f(x,0) = f'(inf) x and phi_f(0,y) = f(0+) y.
inline HomogeneousFunction perspective_of(const ExtendedFunction& f) {
  HomogeneousFunction p;
  p.name = "perspective(" + f.name + ")";
  p.diagonal = [f](double t) { return (1.0 - t) * f(t / (1.0 - t)); };
  p.at_one = f.alpha();
  p.at_zero = f.beta();
  return p;
}

// Perspective on the restricted cone where the missing corner is never used.
inline HomogeneousFunction restricted_perspective_of(const ExtendedFunction& f, RestrictedSide side) {
  HomogeneousFunction p;
  p.name = "perspective(" + f.name + ")";
  p.diagonal = [f](double t) { return (1.0 - t) * f(t / (1.0 - t)); };
  if (side == RestrictedSide::ge) {
    p.domain = DiagonalDomain::open_at_zero;
    p.at_one = f.alpha();
  } else {
    p.domain = DiagonalDomain::open_at_one;
    p.at_zero = f.beta();
  }
  return p;
}

struct PerspectiveResult {
  ExtendedSelfAdjoint value;
  RealVector r_eigs;
  int hits_zero = 0;
  int hits_one = 0;
  Classification classification = Classification::bounded;
};

inline PerspectiveResult perspective_apply(const ExtendedFunction& f, const Matrix& a, const Matrix& b,
                                           const CalculusOptions& opt = {}) {
  auto d = pw_apply_detailed(perspective_of(f), a, b, opt);
  PerspectiveResult r;
  r.value = d.value;
  r.r_eigs = d.r_eigs;
  r.hits_zero = d.hits_zero;
  r.hits_one = d.hits_one;
  r.classification = classify(d.value);
  return r;
}

inline ExtendedSelfAdjoint perspective(const ExtendedFunction& f, const Matrix& a, const Matrix& b,
                                       const CalculusOptions& opt = {}) {
  return perspective_apply(f, a, b, opt).value;
}

struct EpsilonEntry {
  double eps;
  Matrix value;
};

inline std::vector<double> default_eps_schedule() {
  std::vector<double> s;
  for (int k = 1; k <= 8; ++k) s.push_back(std::pow(10.0, -k));
  return s;
}

// phi_f(A + eps I, B + eps I) through the invertible formula.
inline std::vector<EpsilonEntry> epsilon_limit(const ExtendedFunction& f, const Matrix& a, const Matrix& b,
                                               const std::vector<double>& schedule = default_eps_schedule()) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0)) throw PreconditionError("epsilon_limit: schedule entries must be positive");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw PreconditionError("epsilon_limit: schedule must be strictly decreasing");
  }
  auto phi = perspective_of(f);
  const Index n = a.rows();
  std::vector<EpsilonEntry> out;
  for (double eps : schedule) {
    Matrix id = Matrix::Identity(n, n);
    CalculusOptions definite;
    definite.endpoint_tol = 0.0;
    auto v = invertible_formula(phi, a + eps * id, b + eps * id, definite);
    out.push_back({eps, v.to_matrix()});
  }
  return out;
}

// Generator phi(x,y) = x h(y/x) of the connection with representing function h.
inline HomogeneousFunction connection_function(const ExtendedFunction& h) {
  if (!h.tags.operator_monotone) throw PreconditionError("connection: " + h.name + " is not tagged operator monotone");
  HomogeneousFunction p;
  p.name = "connection(" + h.name + ")";
  p.diagonal = [h](double t) { return t * h((1.0 - t) / t); };
  p.at_one = h.beta();
  p.at_zero = h.alpha();
  return p;
}

// A sigma_h B = A^(1/2) h(A^(-1/2) B A^(-1/2)) A^(1/2).
inline Matrix connection(const ExtendedFunction& h, const Matrix& a, const Matrix& b, const CalculusOptions& opt = {}) {
  return pw_apply(connection_function(h), a, b, opt).to_matrix();
}

inline Matrix parallel_sum(const Matrix& a, const Matrix& b, std::optional<double> rank_tol = std::nullopt) {
  require_same_dim(a, b, "parallel_sum");
  // A (A+B)^+ A as X X* with X = A V diag(lambda^{-1/2}); forming (A+B)^+ first loses accuracy
  auto e = eigh(hermitian_part(a + b));
  double tol = rank_tol.value_or(default_rank_tol(e.values));
  Matrix x = a * e.vectors;
  for (Index i = 0; i < x.cols(); ++i) x.col(i) *= e.values(i) > tol ? 1.0 / std::sqrt(e.values(i)) : 0.0;
  return hermitian_part(a - x * x.adjoint());
}

struct LebesgueDecomposition {
  Matrix ac_part;        // [B]A
  Matrix singular_part;  // A - [B]A
};

inline LebesgueDecomposition lebesgue_decomposition(const Matrix& a, const Matrix& b, const CalculusOptions& opt = {}) {
  check_psd(a, "A");
  check_psd(b, "B");
  require_same_dim(a, b, "lebesgue_decomposition");
  const Index n = a.rows();
  auto rep = compatible_representation(a, b, opt.rank_tol);
  LebesgueDecomposition out{Matrix::Zero(n, n), Matrix::Zero(n, n)};
  if (rep.dim() == 0) return out;
  auto er = eigh(rep.r);
  std::vector<Index> one, rest;
  for (Index i = 0; i < er.values.size(); ++i)
    (er.values(i) >= 1.0 - opt.endpoint_tol ? one : rest).push_back(i);
  Matrix y1(static_cast<Index>(one.size()), n), y0(static_cast<Index>(rest.size()), n);
  for (std::size_t j = 0; j < one.size(); ++j)
    y1.row(static_cast<Index>(j)) = er.vectors.col(one[j]).adjoint() * rep.t;
  for (std::size_t j = 0; j < rest.size(); ++j) {
    double r = std::max(0.0, er.values(rest[j]));  // rounding can push it just below 0
    y0.row(static_cast<Index>(j)) = std::sqrt(r) * (er.vectors.col(rest[j]).adjoint() * rep.t);
  }
  out.singular_part = hermitian_part(y1.adjoint() * y1);
  out.ac_part = hermitian_part(y0.adjoint() * y0);
  return out;
}

inline bool is_absolutely_continuous(const Matrix& a, const Matrix& b, const CalculusOptions& opt = {}) {
  auto rep = compatible_representation(a, b, opt.rank_tol);
  if (rep.dim() == 0) return true;
  return eigh(rep.r).values(rep.dim() - 1) < 1.0 - opt.endpoint_tol;
}

inline ExtendedReal max_f_divergence(const ExtendedFunction& f, const Matrix& a, const Matrix& b,
                                     const CalculusOptions& opt = {}) {
  return perspective(f, a, b, opt).trace();
}

// Tr B^(1/2) f(B^(-1/2) A B^(-1/2)) B^(1/2) for invertible B.
inline ExtendedReal divergence_invertible(const ExtendedFunction& f, const Matrix& a, const Matrix& b) {
  auto eb = eigh(b);
  if (!(eb.values(0) > default_rank_tol(eb.values))) throw PreconditionError("divergence_invertible: B is singular");
  Matrix bis = from_eigen(eb.vectors, eb.values.cwiseSqrt().cwiseInverse());
  Matrix bs = from_eigen(eb.vectors, eb.values.cwiseSqrt());
  auto fw = calculus(f, hermitian_part(bis * a * bis));
  if (!fw.is_bounded()) return inf();
  return (bs * fw.finite_operator() * bs).trace().real();
}

inline Subspace essential_part(const ExtendedFunction& f, const Matrix& a, const Matrix& b,
                               const CalculusOptions& opt = {}) {
  return perspective(f, a, b, opt).essential();
}

// Smallest lambda with X <= lambda Y, where Y = B^s built from B's eigendata;
// +inf when ker B is not inside ker X.
inline ExtendedReal dominating_constant(const Matrix& x, const Eigh& eb, double s) {
  const Index n = eb.values.size();
  double tol = default_rank_tol(eb.values);
  std::vector<Index> ker, ran;
  for (Index i = 0; i < n; ++i) (eb.values(i) > tol ? ran : ker).push_back(i);
  double xn = spectral_norm(x);
  if (xn == 0.0) return 0.0;
  for (Index i : ker)
    if ((x * eb.vectors.col(i)).norm() > 1e-8 * xn) return inf();
  Matrix w(n, static_cast<Index>(ran.size()));
  for (std::size_t j = 0; j < ran.size(); ++j)
    w.col(static_cast<Index>(j)) = eb.vectors.col(ran[j]) * std::pow(eb.values(ran[j]), -s / 2);
  if (w.cols() == 0) return 0.0;
  auto e = eigh(hermitian_part(w.adjoint() * x * w));
  return std::max(0.0, e.values(e.values.size() - 1));
}

struct T2Bound {
  bool bounded = false;
  ExtendedReal lambda_min;
  bool certified_upper = false;   // A^2 <= lambda* B
  bool certified_strict = false;  // A^2 <= (lambda* - delta) B fails
};

inline T2Bound t2_bound(const Matrix& a, const Matrix& b) {
  check_psd(a, "A");
  check_psd(b, "B");
  require_same_dim(a, b, "t2_bound");
  T2Bound out;
  Matrix a2 = hermitian_part(a * a);
  auto eb = eigh(b);
  out.lambda_min = dominating_constant(a2, eb, 1.0);
  out.bounded = out.lambda_min.is_finite();
  if (!out.bounded) return out;
  double lam = out.lambda_min.value();
  double scale = std::max({1.0, lam * spectral_norm(b), spectral_norm(a2)});
  out.certified_upper = eigh(hermitian_part(lam * b - a2)).values(0) >= -1e-8 * scale;
  if (lam == 0.0) {
    out.certified_strict = true;
  } else {
    double delta = 1e-4 * lam;
    out.certified_strict = eigh(hermitian_part((lam - delta) * b - a2)).values(0) < -1e-8 * scale;
  }
  return out;
}

struct ChainReport {
  bool a = false, b = false, c = false, d = false, e = false;
  ExtendedReal lambda_a, lambda_c, lambda_d, lambda_e;
  std::vector<std::string> violations;
  bool consistent() const { return violations.empty(); }
};

inline ChainReport boundedness_chain(double alpha, const Matrix& a, const Matrix& b, std::uint64_t seed = 1) {
  if (!(alpha > 1 && alpha <= 2)) throw PreconditionError("boundedness_chain: alpha must lie in (1,2]");
  check_psd(a, "A");
  check_psd(b, "B");
  ChainReport r;
  const Index n = a.rows();
  auto eb = eigh(b);
  r.lambda_a = dominating_constant(hermitian_part(a * a), eb, 1.0);
  r.a = r.lambda_a.is_finite();
  r.b = perspective(power_function(alpha), a, b).is_bounded();
  r.lambda_c = dominating_constant(psd_power(a, alpha), eb, alpha - 1);
  r.c = r.lambda_c.is_finite();
  r.lambda_e = dominating_constant(a, eb, (alpha - 1) / alpha);
  r.e = r.lambda_e.is_finite();

  // Sampled unit vectors, plus directions inside ker B where the ratio blows up.
  std::vector<Vector> xs;
  Rng rng(seed, 0);
  double tol = default_rank_tol(eb.values);
  std::vector<Index> ker;
  for (Index i = 0; i < n; ++i)
    if (eb.values(i) <= tol) ker.push_back(i);
  if (!ker.empty()) {
    Matrix k(n, static_cast<Index>(ker.size()));
    for (std::size_t j = 0; j < ker.size(); ++j) k.col(static_cast<Index>(j)) = eb.vectors.col(ker[j]);
    for (Index j = 0; j < k.cols(); ++j) xs.push_back(k.col(j));
    auto ek = eigh(hermitian_part(k.adjoint() * a * k));
    xs.push_back(k * ek.vectors.col(ek.values.size() - 1));
  }
  while (xs.size() < 500) xs.push_back(rng.unit_vector(n));
  double an = spectral_norm(a);
  double sup = 0.0;
  bool infinite = false;
  for (const auto& x : xs) {
    double aq = x.dot(a * x).real(), bq = x.dot(b * x).real();
    if (bq <= tol) {
      if (aq > 1e-8 * an) infinite = true;
      continue;
    }
    sup = std::max(sup, std::pow(std::max(aq, 0.0), alpha) / std::pow(bq, alpha - 1));
  }
  r.lambda_d = infinite ? inf() : ExtendedReal(sup);
  r.d = !infinite;

  auto imp = [&](bool p, bool q, const char* what) {
    if (p && !q) r.violations.push_back(what);
  };
  imp(r.a, r.b, "(a) => (b)");
  imp(r.b, r.d, "(b) => (d)");
  imp(r.d, r.e, "(d) => (e)");
  imp(r.a, r.c, "(a) => (c)");
  imp(r.c, r.d, "(c) => (d)");
  return r;
}

struct AhEntry {
  double p;
  ExtendedReal lhs;  // ||phi_f(A^p, B^p)||
  ExtendedReal rhs;  // ||phi_f(A, B)||^p
  bool holds;
};

inline std::vector<AhEntry> check_ah_inequality(const ExtendedFunction& f, const Matrix& a, const Matrix& b,
                                                const std::vector<double>& ps) {
  bool convex_zero = f.tags.operator_convex && f.f_at_0plus && f.f_at_0plus->value() == 0.0;
  if (!f.tags.pmi || !(convex_zero || f.tags.operator_monotone_decreasing))
    throw PreconditionError("check_ah_inequality: " + f.name + " lacks the required tags");
  std::vector<AhEntry> out;
  ExtendedReal base = perspective(f, a, b).norm();
  for (double p : ps) {
    if (!(p > 0 && p <= 1)) throw PreconditionError("check_ah_inequality: p must lie in (0,1]");
    ExtendedReal lhs = perspective(f, psd_power(a, p), psd_power(b, p)).norm();
    ExtendedReal rhs = base.is_infinite() ? inf() : ExtendedReal(std::pow(base.value(), p));
    bool ok = rhs.is_infinite() || (lhs.is_finite() && lhs.value() <= rhs.value() * (1 + 1e-7) + 1e-12);
    out.push_back({p, lhs, rhs, ok});
  }
  return out;
}

// ---- positive maps given by Kraus operators K_i : H -> K (m x n) ----

using KrausList = std::vector<Matrix>;

inline Matrix map_matrix(const KrausList& kraus, const Matrix& x) {
  Matrix y = Matrix::Zero(kraus.at(0).rows(), kraus.at(0).rows());
  for (const auto& k : kraus) y += k * x * k.adjoint();
  return hermitian_part(y);
}

inline Matrix predual(const KrausList& kraus, const Matrix& rho) {
  Matrix y = Matrix::Zero(kraus.at(0).cols(), kraus.at(0).cols());
  for (const auto& k : kraus) y += k.adjoint() * rho * k;
  return hermitian_part(y);
}

// Phi(T)(rho) = T(Phi_*(rho)); on vector states this is the form sum of the
// congruences by K_i*.
inline ExtendedSelfAdjoint map_extended(const KrausList& kraus, const ExtendedSelfAdjoint& t) {
  ExtendedSelfAdjoint acc = congruence(kraus.at(0).adjoint(), t);
  for (std::size_t i = 1; i < kraus.size(); ++i) acc = add(acc, congruence(kraus[i].adjoint(), t));
  return acc;
}

struct PositiveMapReport {
  bool form_holds = true;
  int state_checks = 0;
  int state_failures = 0;
  double max_violation = 0.0;
};

inline PositiveMapReport check_positive_map_monotonicity(const ExtendedFunction& f, const KrausList& kraus,
                                                         const Matrix& a, const Matrix& b, int states = 20,
                                                         std::uint64_t seed = 1) {
  PositiveMapReport rep;
  auto lhs = perspective(f, map_matrix(kraus, a), map_matrix(kraus, b));
  auto inner = perspective(f, a, b);
  auto rhs = map_extended(kraus, inner);
  double slack = 1e-8 * std::max(form_scale(lhs), form_scale(rhs));
  rep.form_holds = form_leq(lhs, rhs, slack).holds;
  const Index m = kraus.at(0).rows();
  for (int i = 0; i < states; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    Matrix rho;
    if (i % 2 == 0) {
      rho = rng.density(m);
    } else {
      Vector v = rng.unit_vector(m);
      rho = v * v.adjoint();
    }
    ExtendedReal l = lhs.evaluate(rho);
    Matrix pre = predual(kraus, rho);
    ExtendedReal r = pre.trace().real() > 0 ? inner.evaluate(pre) : ExtendedReal(0.0);
    ++rep.state_checks;
    if (r.is_infinite()) continue;
    if (l.is_infinite()) {
      ++rep.state_failures;
      rep.max_violation = kInf;
      continue;
    }
    double gap = l.value() - r.value();
    if (gap > slack) {
      ++rep.state_failures;
      rep.max_violation = std::max(rep.max_violation, gap);
    }
  }
  return rep;
}

}  // namespace pwcalc
