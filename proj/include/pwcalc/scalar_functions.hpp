#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwcalc/extended_sa.hpp"
#include "pwcalc/random.hpp"

namespace pwcalc {

struct Interval {
  double lo = 0.0;
  double hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double t) const {
    bool above = lo_closed ? t >= lo : t > lo;
    bool below = hi_closed ? t <= hi : t < hi;
    return above && below;
  }
  static Interval positive() { return {0.0, kInf, false, false}; }
  static Interval nonnegative() { return {0.0, kInf, true, false}; }
  static Interval unit() { return {0.0, 1.0, true, true}; }
};

struct FunctionTags {
  bool operator_convex = false;
  bool operator_concave = false;
  bool operator_monotone = false;
  bool operator_monotone_decreasing = false;
  bool pmi = false;
};

struct ExtendedFunction {
  std::string name;
  Interval domain = Interval::positive();
  std::function<ExtendedReal(double)> eval;
  std::optional<ExtendedReal> f_at_0plus;     // beta
  std::optional<ExtendedReal> fprime_at_inf;  // alpha
  std::optional<double> f_at_1;
  FunctionTags tags;

  ExtendedReal operator()(double t) const { return eval(t); }
  ExtendedReal alpha() const {
    if (!fprime_at_inf) throw PreconditionError(name + ": f'(inf) is not declared");
    return *fprime_at_inf;
  }
  ExtendedReal beta() const {
    if (!f_at_0plus) throw PreconditionError(name + ": f(0+) is not declared");
    return *f_at_0plus;
  }
};

// ---- measures and integral representations ----

struct Atom {
  double location;
  double weight;
};

struct Measure {
  std::vector<Atom> atoms;
  // Exact masses of the underlying measure when the atoms are quadrature nodes.
  std::optional<ExtendedReal> declared_mass;             // int dmu
  std::optional<ExtendedReal> declared_inverse_moment;  // int dmu / lambda
  std::string rule = "atomic";

  bool is_quadrature() const { return rule != "atomic"; }
  bool empty() const { return atoms.empty(); }

  ExtendedReal mass() const {
    if (declared_mass) return *declared_mass;
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight;
    return s;
  }
  ExtendedReal inverse_moment() const {
    if (declared_inverse_moment) return *declared_inverse_moment;
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight / a.location;
    return s;
  }

  template <class F>
  double integrate(F&& g) const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight * g(a.location);
    return s;
  }

  // Atoms inside [lo, hi]; declared masses are dropped.
  Measure restricted(double lo, double hi) const {
    Measure m;
    m.rule = rule;
    for (const auto& a : atoms)
      if (a.location >= lo && a.location <= hi) m.atoms.push_back(a);
    return m;
  }

  void validate() const {
    for (const auto& a : atoms)
      if (!(a.location > 0) || !(a.weight >= 0)) throw PreconditionError("Measure: atoms need location > 0, weight >= 0");
  }
};

// f(t) = a + b(t-1) + c(t-1)^2 + d(t-1)^2/t + int (t-1)^2/(t+lambda) dmu
struct IntegralRepr77 {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  Measure mu;
};

// f(t) = f(0+) + f'(0+) t + c t^2 + int t^2/(t+lambda) dnu
struct IntegralRepr97 {
  double f0 = 0.0, fp0 = 0.0, c = 0.0;
  Measure nu;
};

// ---- catalog ----

inline ExtendedFunction power_function(double p) {
  if (!((p >= -1.0 && p <= 0.0) || (p >= 1.0 && p <= 2.0)))
    throw DomainError("power:" + std::to_string(p) + " is not operator convex; allowed p in [-1,0] or [1,2]");
  ExtendedFunction f;
  f.name = "power:" + ExtendedReal(p).to_string();
  f.eval = [p](double t) -> ExtendedReal {
    if (t == 0.0) return p < 0 ? ExtendedReal::infinity() : ExtendedReal(p == 0.0 ? 1.0 : 0.0);
    return std::pow(t, p);
  };
  f.f_at_1 = 1.0;
  if (p > 1) {
    f.f_at_0plus = 0.0;
    f.fprime_at_inf = inf();
  } else if (p == 1) {
    f.f_at_0plus = 0.0;
    f.fprime_at_inf = 1.0;
  } else if (p == 0) {
    f.f_at_0plus = 1.0;
    f.fprime_at_inf = 0.0;
  } else {
    f.f_at_0plus = inf();
    f.fprime_at_inf = 0.0;
    f.tags.operator_monotone_decreasing = true;
  }
  f.tags.operator_convex = true;
  f.tags.pmi = true;
  return f;
}

// t^p without any convexity tag; used as a falsifier.
inline ExtendedFunction monomial(double p) {
  if (!(p > 0)) throw DomainError("monomial: exponent must be positive");
  ExtendedFunction f;
  f.name = "monomial:" + ExtendedReal(p).to_string();
  f.eval = [p](double t) -> ExtendedReal { return t == 0.0 ? 0.0 : std::pow(t, p); };
  f.f_at_1 = 1.0;
  f.f_at_0plus = 0.0;
  f.fprime_at_inf = p > 1 ? inf() : ExtendedReal(p == 1 ? 1.0 : 0.0);
  f.tags.pmi = true;
  return f;
}

inline ExtendedFunction tlogt() {
  ExtendedFunction f;
  f.name = "tlogt";
  f.eval = [](double t) -> ExtendedReal { return t == 0.0 ? 0.0 : t * std::log(t); };
  f.f_at_1 = 0.0;
  f.f_at_0plus = 0.0;
  f.fprime_at_inf = inf();
  f.tags.operator_convex = true;
  return f;
}

inline ExtendedFunction neglog() {
  ExtendedFunction f;
  f.name = "neglog";
  f.eval = [](double t) -> ExtendedReal { return t == 0.0 ? inf() : ExtendedReal(-std::log(t)); };
  f.f_at_1 = 0.0;
  f.f_at_0plus = inf();
  f.fprime_at_inf = 0.0;
  f.tags.operator_convex = true;
  f.tags.operator_monotone_decreasing = true;
  return f;
}

// log t: generator of y log(x/y); f(0+) = -inf is not representable, so only
// the restricted calculus on dominated pairs applies.
inline ExtendedFunction ylogxy() {
  ExtendedFunction f;
  f.name = "ylogxy";
  f.eval = [](double t) -> ExtendedReal {
    if (!(t > 0)) throw DomainError("ylogxy: log is unbounded below at 0");
    return std::log(t);
  };
  f.f_at_1 = 0.0;
  f.fprime_at_inf = 0.0;
  f.tags.operator_concave = true;
  f.tags.operator_monotone = true;
  return f;
}

// (t-1)^2 / (t+lambda)
inline ExtendedFunction glambda(double lambda) {
  if (!(lambda > 0)) throw DomainError("glambda: lambda must be positive");
  ExtendedFunction f;
  f.name = "glambda:" + ExtendedReal(lambda).to_string();
  f.eval = [lambda](double t) -> ExtendedReal { return (t - 1) * (t - 1) / (t + lambda); };
  f.f_at_1 = 0.0;
  f.f_at_0plus = 1.0 / lambda;
  f.fprime_at_inf = 1.0;
  f.tags.operator_convex = true;
  return f;
}

// n (t-1)^2 / (t+n)
inline ExtendedFunction gn(double n) {
  if (!(n > 0)) throw DomainError("gn: n must be positive");
  ExtendedFunction f;
  f.name = "gn:" + ExtendedReal(n).to_string();
  f.eval = [n](double t) -> ExtendedReal { return n * (t - 1) * (t - 1) / (t + n); };
  f.f_at_1 = 0.0;
  f.f_at_0plus = 1.0;
  f.fprime_at_inf = n;
  f.tags.operator_convex = true;
  return f;
}

// a t + b
inline ExtendedFunction affine(double a, double b) {
  ExtendedFunction f;
  f.name = "affine:" + ExtendedReal(a).to_string() + "," + ExtendedReal(b).to_string();
  f.eval = [a, b](double t) -> ExtendedReal { return a * t + b; };
  f.f_at_1 = a + b;
  f.f_at_0plus = b;
  f.fprime_at_inf = a;
  f.tags.operator_convex = true;
  f.tags.operator_concave = true;
  return f;
}

inline ExtendedFunction square_minus() {
  ExtendedFunction f;
  f.name = "square_minus";
  f.eval = [](double t) -> ExtendedReal { return (t - 1) * (t - 1); };
  f.f_at_1 = 0.0;
  f.f_at_0plus = 1.0;
  f.fprime_at_inf = inf();
  f.tags.operator_convex = true;
  return f;
}

inline ExtendedFunction pmi_max1() {
  ExtendedFunction f;
  f.name = "pmi_max1";
  f.eval = [](double t) -> ExtendedReal { return std::max(t, 1.0); };
  f.f_at_1 = 1.0;
  f.f_at_0plus = 1.0;
  f.fprime_at_inf = 1.0;
  f.tags.pmi = true;
  return f;
}

// +inf everywhere except f(1) = 0.
inline ExtendedFunction infinite_except_one() {
  ExtendedFunction f;
  f.name = "infinite_except_one";
  f.eval = [](double t) -> ExtendedReal { return t == 1.0 ? ExtendedReal(0.0) : inf(); };
  f.f_at_1 = 0.0;
  f.f_at_0plus = inf();
  f.fprime_at_inf = inf();
  f.tags.operator_convex = true;
  return f;
}

// Nonnegative operator monotone generators of connections.

inline ExtendedFunction opmon_power(double p) {
  if (!(p >= 0 && p <= 1)) throw DomainError("opmon_power: p must lie in [0,1]");
  ExtendedFunction f;
  f.name = "opmon_power:" + ExtendedReal(p).to_string();
  f.domain = Interval::nonnegative();
  f.eval = [p](double t) -> ExtendedReal { return p == 0 ? 1.0 : (t == 0 ? 0.0 : std::pow(t, p)); };
  f.f_at_1 = 1.0;
  f.f_at_0plus = p == 0 ? 1.0 : 0.0;
  f.fprime_at_inf = p == 1 ? 1.0 : 0.0;
  f.tags.operator_monotone = true;
  f.tags.operator_concave = true;
  return f;
}

inline ExtendedFunction geometric() {
  auto f = opmon_power(0.5);
  f.name = "geometric";
  return f;
}

// t / (1+t), the generator of the parallel sum.
inline ExtendedFunction parallel_generator() {
  ExtendedFunction f;
  f.name = "parallel";
  f.domain = Interval::nonnegative();
  f.eval = [](double t) -> ExtendedReal { return t / (1 + t); };
  f.f_at_1 = 0.5;
  f.f_at_0plus = 0.0;
  f.fprime_at_inf = 0.0;
  f.tags.operator_monotone = true;
  f.tags.operator_concave = true;
  return f;
}

inline ExtendedFunction arithmetic_generator() {
  ExtendedFunction f;
  f.name = "arithmetic";
  f.domain = Interval::nonnegative();
  f.eval = [](double t) -> ExtendedReal { return (1 + t) / 2; };
  f.f_at_1 = 1.0;
  f.f_at_0plus = 0.5;
  f.fprime_at_inf = 0.5;
  f.tags.operator_monotone = true;
  f.tags.operator_concave = true;
  return f;
}

inline ExtendedFunction harmonic_generator() {
  ExtendedFunction f;
  f.name = "harmonic";
  f.domain = Interval::nonnegative();
  f.eval = [](double t) -> ExtendedReal { return 2 * t / (1 + t); };
  f.f_at_1 = 1.0;
  f.f_at_0plus = 0.0;
  f.fprime_at_inf = 0.0;
  f.tags.operator_monotone = true;
  f.tags.operator_concave = true;
  return f;
}

inline ExtendedFunction catalog(const std::string& name, const std::vector<double>& params = {}) {
  auto need = [&](std::size_t k) {
    if (params.size() != k)
      throw DomainError("catalog: '" + name + "' expects " + std::to_string(k) + " parameter(s)");
  };
  if (name == "power") return need(1), power_function(params[0]);
  if (name == "monomial") return need(1), monomial(params[0]);
  if (name == "tlogt") return need(0), tlogt();
  if (name == "neglog") return need(0), neglog();
  if (name == "ylogxy") return need(0), ylogxy();
  if (name == "glambda") return need(1), glambda(params[0]);
  if (name == "gn") return need(1), gn(params[0]);
  if (name == "affine") return need(2), affine(params[0], params[1]);
  if (name == "square_minus") return need(0), square_minus();
  if (name == "pmi_max1") return need(0), pmi_max1();
  if (name == "geometric") return need(0), geometric();
  if (name == "opmon_power") return need(1), opmon_power(params[0]);
  if (name == "parallel") return need(0), parallel_generator();
  if (name == "arithmetic") return need(0), arithmetic_generator();
  if (name == "harmonic") return need(0), harmonic_generator();
  throw DomainError("catalog: unknown function '" + name + "'");
}

// ---- representations ----

inline ExtendedFunction from_repr77(const IntegralRepr77& r) {
  if (r.c < 0 || r.d < 0) throw PreconditionError("from_repr77: c and d must be nonnegative");
  r.mu.validate();
  ExtendedFunction f;
  f.name = "repr77";
  f.eval = [r](double t) -> ExtendedReal {
    double u = (t - 1) * (t - 1);
    if (t == 0.0 && r.d > 0) return inf();
    double v = r.a + r.b * (t - 1) + r.c * u;
    if (r.d > 0) v += r.d * u / t;
    v += r.mu.integrate([&](double l) { return u / (t + l); });
    return v;
  };
  f.f_at_1 = r.a;
  f.fprime_at_inf = ExtendedReal(r.b + r.d) + r.c * inf() + r.mu.mass();
  f.f_at_0plus = ExtendedReal(r.a - r.b + r.c) + r.d * inf() + r.mu.inverse_moment();
  f.tags.operator_convex = true;
  return f;
}

inline ExtendedFunction from_repr97(const IntegralRepr97& r) {
  if (r.c < 0) throw PreconditionError("from_repr97: c must be nonnegative");
  r.nu.validate();
  ExtendedFunction f;
  f.name = "repr97";
  f.domain = Interval::nonnegative();
  f.eval = [r](double t) -> ExtendedReal {
    return r.f0 + r.fp0 * t + r.c * t * t + r.nu.integrate([&](double l) { return t * t / (t + l); });
  };
  f.f_at_1 = r.f0 + r.fp0 + r.c + r.nu.integrate([](double l) { return 1.0 / (1.0 + l); });
  f.f_at_0plus = r.f0;
  f.fprime_at_inf = ExtendedReal(r.fp0) + r.c * inf() + r.nu.mass();
  f.tags.operator_convex = true;
  return f;
}

struct Approximant {
  ExtendedFunction f_n;
  double alpha_n = 0.0;
  double beta_n = 0.0;
  Measure nu_n;
  ExtendedFunction h_n;
  int n = 1;
};

// h(t) = int t(1+lambda)/(t+lambda) dnu, nonnegative operator monotone.
inline ExtendedFunction h_from_measure(const Measure& nu) {
  ExtendedFunction h;
  h.name = "h_n";
  h.domain = Interval::nonnegative();
  h.eval = [nu](double t) -> ExtendedReal {
    return nu.integrate([&](double l) { return t * (1 + l) / (t + l); });
  };
  h.f_at_1 = nu.integrate([](double) { return 1.0; });
  h.f_at_0plus = 0.0;
  h.fprime_at_inf = 0.0;
  h.tags.operator_monotone = true;
  h.tags.operator_concave = true;
  return h;
}

inline Approximant approximants(const IntegralRepr77& r, int n) {
  if (n < 1) throw PreconditionError("approximants: n must be >= 1");
  const double nd = n;
  Measure mu_n = r.mu.restricted(1.0 / nd, nd);
  Approximant out;
  out.n = n;
  out.alpha_n = r.b + nd * r.c + r.d + mu_n.integrate([](double) { return 1.0; });
  out.beta_n = r.a - r.b + r.c + nd * r.d + mu_n.integrate([](double l) { return 1.0 / l; });
  if (r.c > 0) out.nu_n.atoms.push_back({nd, (1 + nd) * r.c});
  if (r.d > 0) out.nu_n.atoms.push_back({1.0 / nd, (1 + nd) * r.d});
  for (const auto& a : mu_n.atoms) out.nu_n.atoms.push_back({a.location, a.weight * (1 + a.location) / a.location});

  ExtendedFunction f;
  f.name = "f_" + std::to_string(n);
  f.eval = [r, mu_n, nd](double t) -> ExtendedReal {
    double u = (t - 1) * (t - 1);
    return r.a + r.b * (t - 1) + nd * r.c * u / (t + nd) + r.d * u / (t + 1.0 / nd) +
           mu_n.integrate([&](double l) { return u / (t + l); });
  };
  f.f_at_1 = r.a;
  f.f_at_0plus = out.beta_n;
  f.fprime_at_inf = out.alpha_n;
  f.tags.operator_convex = true;
  out.f_n = f;
  out.h_n = h_from_measure(out.nu_n);
  return out;
}

// alpha_n t + beta_n - h_n(t): the rewritten form of f_n.
inline double approximant_rewritten(const Approximant& ap, double t) {
  return ap.alpha_n * t + ap.beta_n - ap.h_n(t).finite();
}

inline ExtendedFunction transpose(const ExtendedFunction& f) {
  ExtendedFunction g;
  g.name = "transpose(" + f.name + ")";
  g.domain = Interval::positive();
  g.eval = [f](double t) -> ExtendedReal {
    if (!(t > 0)) throw DomainError("transpose: argument must be positive");
    return t * f(1.0 / t);
  };
  g.f_at_1 = f.f_at_1;
  g.f_at_0plus = f.fprime_at_inf;
  g.fprime_at_inf = f.f_at_0plus;
  g.tags.operator_convex = f.tags.operator_convex;
  g.tags.operator_concave = f.tags.operator_concave;
  return g;
}

// Value of f at an eigenvalue, with endpoint clamping and the boundary
// value f(0+) at an open endpoint 0.
inline ExtendedReal eval_on_spectrum(const ExtendedFunction& f, double t, double tol) {
  const Interval& J = f.domain;
  if (std::isfinite(J.lo) && std::abs(t - J.lo) <= tol) t = J.lo;
  if (std::isfinite(J.hi) && std::abs(t - J.hi) <= tol) t = J.hi;
  if (J.contains(t)) return f(t);
  if (t == J.lo && J.lo == 0.0 && f.f_at_0plus) return *f.f_at_0plus;
  throw DomainError(f.name + ": eigenvalue " + ExtendedReal(t).to_string() + " lies outside the domain");
}

inline ExtendedSelfAdjoint calculus(const ExtendedFunction& f, const Matrix& a,
                                    std::optional<double> rank_tol = std::nullopt) {
  auto e = eigh(a);
  const Index n = e.values.size();
  double tol = rank_tol.value_or(default_rank_tol(e.values));
  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pairs.push_back({eval_on_spectrum(f, e.values(i), tol), e.vectors.col(i)});
  return make_extended(pairs, n);
}

// ---- numeric checkers (falsifiers) ----

struct ConvexityWitness {
  Matrix a;
  Matrix v;
  Vector xi;
  ExtendedReal lhs;
  ExtendedReal rhs;
};

struct ConvexityReport {
  int trials = 0;
  int failures = 0;
  double slack = 0.0;
  std::optional<ConvexityWitness> witness;
  bool passed() const { return failures == 0; }
};

inline RealVector sample_spectrum(Rng& rng, const Interval& J, Index n) {
  RealVector s(n);
  for (Index i = 0; i < n; ++i) {
    if (std::isinf(J.hi)) {
      double lo = J.lo > 0 ? J.lo : 1e-2;
      s(i) = J.lo > 0 ? J.lo + rng.log_uniform(1e-2, 1e2) : rng.log_uniform(lo, 1e2);
    } else {
      s(i) = rng.uniform(J.lo, J.hi);
      double u = rng.uniform();
      if (u < 0.1 && J.lo_closed) s(i) = J.lo;
      if (u > 0.9 && J.hi_closed) s(i) = J.hi;
    }
  }
  return s;
}

// f(V*AV) <= V* f(A) V for random A with spectrum in the domain and isometries V.
inline ConvexityReport check_operator_convex(const ExtendedFunction& f, Index n, Index k, int trials,
                                             std::uint64_t seed) {
  if (trials < 1) throw PreconditionError("check_operator_convex: trials must be >= 1");
  if (!(k >= 1 && k < n)) throw PreconditionError("check_operator_convex: need 1 <= k < n");
  ConvexityReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    Matrix a = rng.with_spectrum(sample_spectrum(rng, f.domain, n));
    Matrix v = rng.isometry(n, k);
    auto lhs = calculus(f, v.adjoint() * a * v);
    auto rhs = congruence(v, calculus(f, a));
    double slack = 1e-8 * std::max(form_scale(lhs), form_scale(rhs));
    auto ord = form_leq(lhs, rhs, slack);
    if (!ord.holds) {
      ++rep.failures;
      if (!rep.witness) {
        rep.slack = slack;
        rep.witness = ConvexityWitness{a, v, *ord.witness, lhs.quadratic_form(*ord.witness),
                                       rhs.quadratic_form(*ord.witness)};
      }
    }
  }
  return rep;
}

struct BoundaryReport {
  bool passed = true;
  ExtendedReal value_at_a, limit_at_a, value_at_b, limit_at_b;
  bool interior_finite = true;
  std::optional<ConvexityReport> interior_convexity;
  std::string detail;
};

// Limit along a geometric approach grid; +inf if values run away.
inline ExtendedReal approach_limit(const ExtendedFunction& f, double endpoint, double dir, double width) {
  std::vector<double> vals;
  for (int k = 1; k <= 12; ++k) {
    auto v = f(endpoint + dir * width * std::pow(10.0, -k));
    if (v.is_infinite()) return inf();
    vals.push_back(v.value());
  }
  std::size_t m = vals.size();
  bool growing = vals[m - 1] > vals[m - 2] && vals[m - 2] > vals[m - 3];
  if (growing && vals[m - 1] > 1e8) return inf();
  return vals.back();
}

inline BoundaryReport check_theorem37_boundary(const ExtendedFunction& f, double a, double b, int trials = 100,
                                               std::uint64_t seed = 1) {
  BoundaryReport rep;
  double w = b - a;
  rep.value_at_a = f(a);
  rep.value_at_b = f(b);
  rep.limit_at_a = approach_limit(f, a, +1, w);
  rep.limit_at_b = approach_limit(f, b, -1, w);
  auto geq = [](ExtendedReal v, ExtendedReal lim) {
    if (v.is_infinite()) return true;
    if (lim.is_infinite()) return false;
    return v.value() >= lim.value() - 1e-6 * std::max(1.0, std::abs(lim.value()));
  };
  if (!geq(rep.value_at_a, rep.limit_at_a)) {
    rep.passed = false;
    rep.detail += "f(a) = " + rep.value_at_a.to_string() + " < lim f(a+) = " + rep.limit_at_a.to_string() + "; ";
  }
  if (!geq(rep.value_at_b, rep.limit_at_b)) {
    rep.passed = false;
    rep.detail += "f(b) = " + rep.value_at_b.to_string() + " < lim f(b-) = " + rep.limit_at_b.to_string() + "; ";
  }
  for (int i = 1; i < 200; ++i)
    if (f(a + w * i / 200.0).is_infinite()) rep.interior_finite = false;
  if (!rep.interior_finite) {
    rep.passed = false;
    rep.detail += "f takes +inf in the interior; ";
  }
  ExtendedFunction inner = f;
  inner.domain = {a, b, false, false};
  rep.interior_convexity = check_operator_convex(inner, 3, 2, trials, seed);
  if (!rep.interior_convexity->passed()) {
    rep.passed = false;
    rep.detail += "operator convexity fails in the interior; ";
  }
  return rep;
}

struct PmiReport {
  int trials = 0;
  int failures = 0;
  std::optional<std::pair<double, double>> witness;  // (t, p)
  bool passed() const { return failures == 0; }
};

inline PmiReport check_pmi(const ExtendedFunction& f, int trials, std::uint64_t seed = 1) {
  PmiReport rep;
  rep.trials = trials;
  for (int i = 0; i < trials; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    double t = rng.log_uniform(1e-3, 1e3);
    double p = rng.log_uniform(1.0, 10.0);
    double lhs = f(std::pow(t, p)).finite();
    double rhs = std::pow(f(t).finite(), p);
    if (lhs < rhs - 1e-10 * std::max(1.0, std::abs(rhs))) {
      ++rep.failures;
      if (!rep.witness) rep.witness = std::make_pair(t, p);
    }
  }
  return rep;
}

}  // namespace pwcalc
