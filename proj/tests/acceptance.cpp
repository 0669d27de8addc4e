// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pwcalc/pwcalc.hpp"

using namespace pwcalc;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Tally {
 public:
  void require(bool cond, const std::string& what) {
    if (!cond && first_.empty()) first_ = what;
    ok_ = ok_ && cond;
  }
  void worst(double v) { worst_ = std::max(worst_, v); }
  Outcome done(const std::string& summary) const {
    std::ostringstream s;
    s << summary;
    if (worst_ > 0) s << ", worst deviation " << worst_;
    if (!ok_) s << "; first failure: " << first_;
    return {ok_, s.str()};
  }

 private:
  bool ok_ = true;
  double worst_ = 0.0;
  std::string first_;
};

Matrix diag(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) m(i, i) = x, ++i;
  return m;
}

Matrix ones2() { return Matrix::Ones(2, 2); }

double rel_err(double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); }

bool same_ext(const ExtendedReal& x, const ExtendedReal& y, double rel, Tally& t) {
  if (x.is_infinite() || y.is_infinite()) return x.is_infinite() == y.is_infinite();
  double e = rel_err(x.value(), y.value());
  t.worst(e);
  return e <= rel;
}

bool same_form(const ExtendedSelfAdjoint& x, const ExtendedSelfAdjoint& y, double rel) {
  if (x.infinity_dim() != y.infinity_dim()) return false;
  return approx_equal(x, y, rel * std::max(form_scale(x), form_scale(y)));
}

std::vector<ExtendedFunction> function_list() {
  return {power_function(2), tlogt(), neglog(), power_function(1.5), power_function(-1)};
}

SuiteConfig suite_config(int trials) {
  SuiteConfig cfg;
  cfg.seed = 42;
  cfg.dim = 4;
  cfg.trials = trials;
  cfg.deterministic = true;
  return cfg;
}

Outcome example_pair() {
  Tally t;
  Matrix a = ones2(), b = diag({1, 2});
  auto v = perspective(power_function(2), a, b);
  t.require(v.is_bounded(), "perspective bounded");
  double d = max_entry(v.to_matrix() - 1.5 * a);
  t.require(d <= 1e-9, "entrywise 1.5 A");
  t.require(std::abs(v.norm().finite() - 3.0) <= 1e-9, "norm 3");
  Rng rng(712);
  double sup = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Vector x = rng.unit_vector(2);
    double ax = x.dot(a * x).real(), bx = x.dot(b * x).real();
    sup = std::max(sup, ax * ax / bx);
  }
  t.require(sup < 3.0 - 1e-3, "sampled sup strictly below the norm");
  std::ostringstream s;
  s << "entry deviation " << d << ", norm " << v.norm().finite() << ", sampled sup " << sup;
  return t.done(s.str());
}

Outcome commuting_oracle() {
  Tally t;
  RandomSpec spec;
  spec.dim_min = 2;
  spec.dim_max = 6;
  spec.profile = Profile::commuting_pair;
  Rng vecs(2);
  for (int k = 0; k < 200; ++k) {
    spec.seed = 1000 + k;
    auto [a, b] = gen_pair(spec);
    for (const auto& f : function_list()) {
      auto phi = perspective_of(f);
      auto x = pw_apply(phi, a, b), y = pw_commuting_oracle(phi, a, b);
      t.require(x.infinity_dim() == y.infinity_dim(), "infinity dimension, " + f.name);
      for (int v = 0; v < 10; ++v) {
        Vector xi = vecs.unit_vector(a.rows());
        t.require(same_ext(x.quadratic_form(xi), y.quadratic_form(xi), 1e-9, t), "quadratic form, " + f.name);
      }
    }
  }
  return t.done("200 pairs x 5 functions x 10 vectors");
}

Outcome subadditivity() {
  Tally t;
  std::ostringstream s;
  for (const auto& f : function_list()) {
    auto r = suite_convexity(f, suite_config(500));
    t.require(r.check_passed("subadditivity"), "violation for " + f.name);
  }
  auto cube = suite_convexity(monomial(3), suite_config(500));
  int w = cube.check_failures("subadditivity");
  t.require(w >= 1, "t^3 not flagged");
  s << "5 functions clean over 500 trials; t^3 witnesses: " << w;
  return t.done(s.str());
}

Outcome homogeneity() {
  Tally t;
  Rng rng(4);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    Index n = 2 + k % 5;
    Matrix a, b, c;
    if (k % 2 == 0) {
      a = rng.psd_rank(n, 1 + k % n);
      b = rng.psd(n);
      c = rng.gaussian(n, n);
    } else {
      // range(A+B) inside range(C) with C singular
      Index r = 1 + k % (n - 1 > 0 ? n - 1 : 1);
      Matrix q = rng.isometry(n, r);
      a = hermitian_part(q * rng.psd_rank(r, r) * q.adjoint());
      b = hermitian_part(q * rng.psd_rank(r, std::max<Index>(1, r - 1)) * q.adjoint());
      c = q * rng.gaussian(r, n);
    }
    for (const auto& f : function_list()) {
      auto rep = check_homogeneity(perspective_of(f), a, b, c);
      t.require(!rep.skipped, "range condition rejected");
      t.require(rep.agrees, "two-sided agreement, " + f.name);
      t.worst(rep.max_deviation / std::max(1.0, rep.slack / 1e-8));
      ++checked;
    }
  }
  return t.done(std::to_string(checked) + " (A,B,C) checks");
}

Outcome t2_bounds() {
  Tally t;
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    Index n = 2 + k % 5;
    Matrix b = k % 2 ? rng.psd(n) : rng.psd_rank(n, std::max<Index>(1, n - 1));
    Matrix bh = psd_sqrt(b);
    double lambda = rng.log_uniform(0.1, 10);
    // contraction-style middle factor with norm below 1
    Matrix c = rng.psd(n, 0.05, 1.0);
    Matrix a = std::sqrt(lambda) * hermitian_part(bh * c * bh);
    auto r = t2_bound(a, b);
    t.require(r.bounded, "constructed pair unbounded");
    double norm = perspective(power_function(2), a, b).norm().finite();
    double e = std::abs(r.lambda_min.finite() - norm) / std::max(1.0, norm);
    t.worst(e);
    t.require(e <= 1e-7, "lambda* against perspective norm");
  }
  for (int k = 0; k < 100; ++k) {
    Index n = 2 + k % 5;
    Matrix b = rng.psd_rank(n, std::max<Index>(1, n - 1 - k % 2));
    Matrix a = rng.psd(n);  // full rank, so ker B is not inside ker A
    auto v = perspective(power_function(2), a, b);
    t.require(v.infinity_dim() > 0, "singular pair has no infinite part");
    t.require(!t2_bound(a, b).bounded && t2_bound(a, b).lambda_min.is_infinite(), "singular pair lambda* finite");
  }
  return t.done("100 constructed and 100 singular pairs");
}

Outcome lebesgue() {
  Tally t;
  RandomSpec spec;
  spec.dim_min = 2;
  spec.dim_max = 6;
  for (int k = 0; k < 100; ++k) {
    spec.seed = 6000 + k;
    spec.profile = k % 2 ? Profile::rank_deficient : Profile::well_conditioned;
    spec.rank = 1 + k % 3;
    auto [a, b] = gen_pair(spec);
    if (k % 3 == 0) std::swap(a, b);
    auto d = lebesgue_decomposition(a, b);
    Matrix lim = parallel_sum(a, 1e8 * b);
    double e = max_entry(d.ac_part - lim) / std::max(1e-300, spectral_norm(a));
    t.worst(e);
    t.require(e <= 1e-5, "ac part against A:nB");
  }
  Rng rng(66);
  for (int k = 0; k < 20; ++k) {
    Index n = 2 + k % 5;
    Matrix p = rng.projection(n, 1 + k % n), q = rng.projection(n, 1 + (k / 2) % n);
    if (k % 4 == 0) q = p;
    Matrix meet = subspace_meet(projection_range(p), projection_range(q)).projector();
    auto d = lebesgue_decomposition(p, q);
    t.require(max_entry(d.singular_part - (p - meet)) <= 1e-10, "projection singular part");
  }
  Matrix p = diag({1, 1, 0}), q = diag({1, 0, 1});
  t.require(max_entry(lebesgue_decomposition(p, q).singular_part - diag({0, 1, 0})) <= 1e-10, "diagonal projections");
  return t.done("100 pairs against A:1e8B, 21 projection pairs");
}

IntegralRepr77 mixed_atomic() {
  IntegralRepr77 r;
  r.a = 0.2;
  r.b = 0.5;
  r.c = 0.3;
  r.d = 0.1;
  r.mu.atoms = {{0.25, 0.4}, {1.0, 1.0}, {3.0, 0.6}};
  return r;
}

Outcome approximant_identities() {
  Tally t;
  Rng rng(7);
  auto r = tlogt_repr77(200);
  auto m = mixed_atomic();
  for (int k = 0; k < 100; ++k) {
    Index n = 2 + k % 4;
    Matrix a = k % 2 ? rng.psd(n) : rng.psd_rank(n, n - 1), b = k % 3 ? rng.psd(n) : rng.psd_rank(n, n - 1);
    for (int j : {1, 2, 5, 20}) {
      for (const auto* rep : {&r, &m}) {
        auto ap = approximants(*rep, j);
        auto lhs = perspective(ap.f_n, a, b);
        Matrix rhs = ap.alpha_n * a + ap.beta_n * b - connection(ap.h_n, b, a);
        t.require(lhs.is_bounded(), "approximant perspective bounded");
        double e = max_entry(lhs.to_matrix() - rhs) / std::max(1.0, spectral_norm(rhs));
        t.worst(e);
        t.require(e <= 1e-9, "f_n identity at n=" + std::to_string(j));
      }
      // n(t-1)^2/(t+n) -> nA + B - ((n+1)^2/n) A:nB
      double s = j;
      Matrix closed = s * a + b - ((s + 1) * (s + 1) / s) * parallel_sum(a, s * b);
      auto g = perspective(gn(s), a, b);
      double e = max_entry(g.to_matrix() - closed) / std::max(1.0, spectral_norm(closed));
      t.worst(e);
      t.require(e <= 1e-9, "g^(n) closed form at n=" + std::to_string(j));
    }
  }
  return t.done("100 pairs, n in {1,2,5,20}, quadrature and atomic measures");
}

Outcome integral_paths() {
  Tally t;
  Rng rng(8);
  auto r77q = tlogt_repr77(200);
  auto r77a = mixed_atomic();
  auto f77a = from_repr77(r77a);
  auto r97q = t_alpha_repr97(1.5, 200);
  int below = 0, attained = 0;
  for (int k = 0; k < 100; ++k) {
    Index n = 2 + k % 4;
    bool singular = k % 4 == 3;
    Matrix a = k % 2 ? rng.psd(n) : rng.psd_rank(n, n - 1);
    Matrix b = singular ? rng.psd_rank(n, 1) : rng.psd(n);
    State rho = State::from_density(rng.density(n));
    t.require(same_ext(integral_eval_91(r77q, a, b, rho), perspective(tlogt(), a, b).evaluate(rho), 1e-5, t),
              "tlogt quadrature path");
    t.require(same_ext(integral_eval_91(r77a, a, b, rho), perspective(f77a, a, b).evaluate(rho), 1e-9, t),
              "atomic path");
    t.require(same_ext(integral_eval_92(r97q, a, b, rho), perspective(power_function(1.5), a, b).evaluate(rho), 1e-5, t),
              "t^1.5 quadrature path");

    // sampled decompositions never exceed the direct value
    Vector xi = rng.gaussian(n, 1).col(0);
    auto full = perspective(f77a, a, b).quadratic_form(xi);
    int j = 1 + k % 6;
    Decomposition dec;
    dec.lo = 1.0 / j;
    dec.hi = j;
    dec.target = xi;
    double mid = std::sqrt(dec.lo * dec.hi);
    Vector e1 = rng.gaussian(n, 1).col(0), e2 = rng.gaussian(n, 1).col(0);
    dec.pieces = {{dec.lo, mid, e1, xi - e1}, {mid, dec.hi, e2, xi - e2}};
    double v = variational_bound_94(r77a, a, b, xi, j, dec);
    if (full.is_finite()) {
      bool ok = v <= full.value() + 1e-9 * std::max(1.0, std::abs(full.value()));
      t.require(ok, "decomposition above direct value");
      below += ok;
    } else {
      ++below;
    }

    // optimizer split attains the parallel-sum infimum
    double s = rng.log_uniform(0.1, 10);
    auto [eta, zeta] = optimal_decomposition(a, b, xi, s);
    double want = quad(parallel_sum(a, s * b), xi);
    double e = std::abs(quad(a, eta) + s * quad(b, zeta) - want) / std::max(1.0, want);
    t.worst(e);
    bool ok = e <= 1e-9;
    t.require(ok, "optimizer misses parallel-sum infimum");
    attained += ok;
  }
  std::ostringstream s;
  s << "100 triples; decompositions below direct " << below << "/100, infima attained " << attained << "/100";
  return t.done(s.str());
}

Outcome trace_identity() {
  Tally t;
  Rng rng(9);
  for (int k = 0; k < 100; ++k) {
    Index n = 2 + k % 5;
    Matrix a = rng.psd(n), b = rng.psd(n);
    for (const auto& f : function_list())
      t.require(same_ext(max_f_divergence(f, a, b), divergence_invertible(f, a, b), 1e-9, t), "trace, " + f.name);
    Matrix a0 = rng.psd_rank(n, n - 1);
    for (const auto& f : {power_function(2), tlogt(), power_function(1.5)})
      t.require(same_ext(max_f_divergence(f, a0, b), divergence_invertible(f, a0, b), 1e-9, t), "trace singular A, " + f.name);
  }
  return t.done("100 pairs with invertible B");
}

Outcome epsilon_oracle() {
  Tally t;
  Rng rng(10);
  int bounded = 0;
  auto check = [&](const ExtendedFunction& f, const Matrix& a, const Matrix& b) {
    auto chain = epsilon_limit(f, a, b);
    for (int r = 0; r < 5; ++r) {
      Matrix rho = rng.density(a.rows());
      double prev = -kInf;
      for (const auto& e : chain) {
        double v = (rho * e.value).trace().real();
        t.require(v >= prev - 1e-10, "chain decreased, " + f.name);
        prev = v;
      }
    }
    auto direct = perspective(f, a, b);
    if (direct.is_bounded()) {
      double e = max_entry(chain.back().value - direct.to_matrix()) / std::max(1.0, spectral_norm(direct.to_matrix()));
      t.worst(e);
      t.require(e <= 1e-6, "terminal value, " + f.name);
      ++bounded;
    }
  };
  check(square_minus(), ones2(), diag({1, 2}));
  for (int k = 0; k < 30; ++k) {
    Index n = 2 + k % 4;
    Matrix a = k % 2 ? rng.psd(n) : rng.psd_rank(n, n - 1);
    Matrix b = k % 3 ? rng.psd(n) : rng.psd_rank(n, n - 1);
    for (const auto& f : {square_minus(), tlogt(), neglog()}) check(f, a, b);
  }
  return t.done("91 chains, " + std::to_string(bounded) + " bounded terminal checks");
}

Outcome axiom_suites() {
  Tally t;
  std::ostringstream s;
  for (const auto& f : {tlogt(), power_function(2)}) {
    auto r = suite_axioms_thm103(perspective_candidate(f), suite_config(500));
    t.require(r.clean(), "axiom suite for " + f.name);
    t.require(r.check_passed("recovery"), "recovery for " + f.name);
  }
  t.require(suite_connection_cor107(connection_candidate(geometric()), suite_config(500)).clean(), "geometric mean");
  t.require(suite_connection_cor107(parallel_sum_candidate(), suite_config(500)).clean(), "parallel sum");
  auto cube = suite_convexity(monomial(3), suite_config(500));
  t.require(!cube.clean(), "t^3 not flagged");
  s << "axiom suite for tlogt and t^2, connection suite for geometric mean and parallel sum, t^3 failures " << cube.failures.size() << "/500";
  return t.done(s.str());
}

Outcome projection_pairs() {
  Tally t;
  Rng rng(12);
  for (int k = 0; k < 100; ++k) {
    Index n = 2 + k % 5;
    Matrix p = rng.projection(n, 1 + k % n), q = k % 7 == 0 ? p : rng.projection(n, 1 + (k / 5) % n);
    for (const auto& f : function_list())
      t.require(same_form(two_projections(f, p, q), perspective(f, p, q), 1e-8), "assembly vs calculus, " + f.name);
  }
  Matrix p = diag({1, 0}), q = 0.5 * ones2();
  Matrix meet = subspace_meet(projection_range(p), projection_range(q)).projector();
  Subspace want = projection_range(p - meet).complement();
  auto v = two_projections(power_function(2), p, q);
  t.require(subspace_equal(v.infinity_part().complement(), want, 1e-10), "example essential part");
  t.require(subspace_equal(essential_part(power_function(2), p, q), want, 1e-10), "essential_part on example");
  return t.done("100 projection pairs x 5 functions; example essential part (P - P^Q)^perp");
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"example pair phi_{t^2}", example_pair},
      {"commuting oracle", commuting_oracle},
      {"joint subadditivity", subadditivity},
      {"operator homogeneity", homogeneity},
      {"t2bound vs perspective norm", t2_bounds},
      {"Lebesgue decomposition", lebesgue},
      {"approximant identities", approximant_identities},
      {"integral and variational paths", integral_paths},
      {"trace cross-check", trace_identity},
      {"epsilon limit", epsilon_oracle},
      {"axiom suites", axiom_suites},
      {"two projections", projection_pairs},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::printf("%s %2zu %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
