#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwcalc/variational.hpp"

namespace pwcalc {

enum class Profile { well_conditioned, rank_deficient, projection, commuting_pair, dominated_pair };

struct RandomSpec {
  int dim_min = 2;
  int dim_max = 6;
  Profile profile = Profile::well_conditioned;
  int rank = 1;        // rank_deficient(k)
  double alpha = 0.5;  // dominated_pair(alpha): A >= alpha B
  std::uint64_t seed = 0;
};

inline std::string to_string(Profile p) {
  switch (p) {
    case Profile::well_conditioned: return "well_conditioned";
    case Profile::rank_deficient: return "rank_deficient";
    case Profile::projection: return "projection";
    case Profile::commuting_pair: return "commuting_pair";
    case Profile::dominated_pair: return "dominated_pair";
  }
  return "?";
}

inline std::pair<Matrix, Matrix> gen_pair(const RandomSpec& spec, Rng& rng) {
  if (spec.dim_min < 1 || spec.dim_max < spec.dim_min) throw PreconditionError("gen_pair: bad dimension range");
  const Index n = rng.uniform_int(spec.dim_min, spec.dim_max);
  switch (spec.profile) {
    case Profile::well_conditioned:
      return {rng.psd(n, 0.05, 5.0), rng.psd(n, 0.05, 5.0)};
    case Profile::rank_deficient: {
      if (spec.rank < 0) throw PreconditionError("gen_pair: rank must be nonnegative");
      Index k = std::min<Index>(spec.rank, std::max<Index>(n - 1, 0));
      return {rng.psd_rank(n, k, 0.05, 5.0), rng.psd_rank(n, k, 0.05, 5.0)};
    }
    case Profile::projection: {
      Index k1 = rng.uniform_int(1, static_cast<int>(n));
      Index k2 = rng.uniform_int(1, static_cast<int>(n));
      return {rng.projection(n, k1), rng.projection(n, k2)};
    }
    case Profile::commuting_pair: {
      Matrix u = rng.unitary(n);
      RealVector a(n), b(n);
      for (Index i = 0; i < n; ++i) {
        a(i) = rng.uniform() < 0.25 ? 0.0 : rng.log_uniform(0.05, 5.0);
        b(i) = rng.uniform() < 0.25 ? 0.0 : rng.log_uniform(0.05, 5.0);
      }
      return {from_eigen(u, a), from_eigen(u, b)};
    }
    case Profile::dominated_pair: {
      if (!(spec.alpha > 0)) throw PreconditionError("gen_pair: dominated_pair needs alpha > 0");
      Matrix b = rng.uniform() < 0.5 ? rng.psd(n, 0.05, 5.0)
                                     : rng.psd_rank(n, std::max<Index>(n - 1, 1), 0.05, 5.0);
      Matrix e = rng.psd_rank(n, rng.uniform_int(1, static_cast<int>(n)), 0.05, 5.0);
      return {hermitian_part(spec.alpha * b + e), b};
    }
  }
  throw PreconditionError("gen_pair: unknown profile");
}

inline std::pair<Matrix, Matrix> gen_pair(const RandomSpec& spec) {
  Rng rng(spec.seed, 0);
  return gen_pair(spec, rng);
}

// ---- reports ----

struct FailureRecord {
  int trial = 0;
  std::string check;
  nlohmann::json inputs = nlohmann::json::object();
  std::optional<Vector> witness;
  std::string lhs, rhs;
  double slack = 0.0;
  std::string note;
};

struct CheckTally {
  int passes = 0;
  int failures = 0;
};

struct SuiteReport {
  std::string suite;
  std::string subject;
  std::uint64_t seed = 0;
  int dim = 0;
  int trials = 0;
  int passes = 0;
  std::vector<FailureRecord> failures;
  std::map<std::string, CheckTally> checks;
  std::vector<std::string> notes;
  double wall_time_ms = 0.0;

  bool clean() const { return failures.empty(); }

  // True when the named check ran at least once and never failed.
  bool check_passed(const std::string& name) const {
    auto it = checks.find(name);
    return it != checks.end() && it->second.failures == 0 && it->second.passes > 0;
  }
  int check_failures(const std::string& name) const {
    auto it = checks.find(name);
    return it == checks.end() ? 0 : it->second.failures;
  }
};

inline nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

inline Vector vector_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("re") || !j["re"].is_array()) throw ParseError("vector: missing field 're'");
  const auto& re = j["re"];
  Vector v(static_cast<Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) {
    double im = j.contains("im") ? j["im"].at(i).get<double>() : 0.0;
    v(static_cast<Index>(i)) = Complex(re[i].get<double>(), im);
  }
  return v;
}

inline nlohmann::json to_json(const FailureRecord& f) {
  nlohmann::json j;
  j["trial"] = f.trial;
  j["check"] = f.check;
  j["inputs"] = f.inputs;
  j["witness"] = f.witness ? vector_to_json(*f.witness) : nlohmann::json(nullptr);
  j["lhs"] = f.lhs;
  j["rhs"] = f.rhs;
  j["slack"] = f.slack;
  if (!f.note.empty()) j["note"] = f.note;
  return j;
}

inline nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json j;
  j["suite"] = r.suite;
  j["subject"] = r.subject;
  j["seed"] = r.seed;
  j["dim"] = r.dim;
  j["trials"] = r.trials;
  j["passes"] = r.passes;
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : r.failures) fails.push_back(to_json(f));
  j["failures"] = fails;
  nlohmann::json checks = nlohmann::json::object();
  for (const auto& [name, t] : r.checks) checks[name] = {{"passes", t.passes}, {"failures", t.failures}};
  j["checks"] = checks;
  j["notes"] = r.notes;
  j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

// Collects the checks of one trial; a trial fails if any check fails and
// keeps the first failing record.
class Trial {
 public:
  Trial(SuiteReport& report, int index) : report_(report), index_(index) {}

  void input(const std::string& name, const Matrix& m) { inputs_[name] = matrix_to_json(m); }
  void input(const std::string& name, double x) { inputs_[name] = x; }

  void check(const std::string& name, std::optional<FailureRecord> failure) {
    auto& tally = report_.checks[name];
    if (!failure) {
      ++tally.passes;
      return;
    }
    ++tally.failures;
    failed_.push_back(name);
    if (!first_) {
      first_ = std::move(failure);
      first_->check = name;
    }
  }

  void pass(const std::string& name) { check(name, std::nullopt); }

  void finish() {
    ++report_.trials;
    if (!first_) {
      ++report_.passes;
      return;
    }
    first_->trial = index_;
    first_->inputs = inputs_;
    if (failed_.size() > 1) {
      std::string also;
      for (std::size_t i = 1; i < failed_.size(); ++i) also += (i > 1 ? "," : "") + failed_[i];
      first_->note += (first_->note.empty() ? "" : "; ") + std::string("also failed: ") + also;
    }
    report_.failures.push_back(std::move(*first_));
  }

 private:
  SuiteReport& report_;
  int index_;
  nlohmann::json inputs_ = nlohmann::json::object();
  std::optional<FailureRecord> first_;
  std::vector<std::string> failed_;
};

struct SuiteConfig {
  std::uint64_t seed = 42;
  int dim = 4;
  int trials = 100;
  bool deterministic = false;  // zero the wall time so reports are byte-identical
};

namespace detail {

inline SuiteReport start_report(const std::string& suite, const std::string& subject, const SuiteConfig& cfg) {
  if (cfg.dim < 1) throw PreconditionError(suite + ": dim must be positive");
  if (cfg.trials < 0) throw PreconditionError(suite + ": trials must be nonnegative");
  SuiteReport r;
  r.suite = suite;
  r.subject = subject;
  r.seed = cfg.seed;
  r.dim = cfg.dim;
  return r;
}

template <class Body>
SuiteReport timed(const SuiteConfig& cfg, Body&& body) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport r = body();
  auto t1 = std::chrono::steady_clock::now();
  r.wall_time_ms = cfg.deterministic ? 0.0 : std::chrono::duration<double, std::milli>(t1 - t0).count();
  return r;
}

// Mixed spectra: well conditioned, corank one, or low rank.
inline Matrix draw_psd(Rng& rng, Index n, int kind) {
  switch (kind) {
    case 0: return rng.psd(n, 0.05, 5.0);
    case 1: return rng.psd_rank(n, std::max<Index>(n - 1, 1), 0.05, 5.0);
    default: return rng.psd_rank(n, rng.uniform_int(1, std::max(1, static_cast<int>(n) - 1)), 0.05, 5.0);
  }
}

inline Matrix draw_mixed(Rng& rng, Index n, int trial) {
  return draw_psd(rng, n, trial % 2 == 0 ? 0 : rng.uniform_int(0, 2));
}

inline Matrix psd_congruence(const Matrix& c, const Matrix& x) { return hermitian_part(c.adjoint() * x * c); }

// C : C^m -> C^n with range C containing range W (W an n x k isometry, m >= k).
inline Matrix covering_map(Rng& rng, const Matrix& w, Index m) {
  const Index n = w.rows(), k = w.cols();
  Matrix c = w * rng.gaussian(k, m);
  if (m > k) c += (Matrix::Identity(n, n) - w * w.adjoint()) * rng.gaussian(n, m - k) * rng.gaussian(m - k, m);
  return c;
}

inline double scale_of(const ExtendedSelfAdjoint& x, const ExtendedSelfAdjoint& y) {
  return std::max(form_scale(x), form_scale(y));
}

inline double scale_of(const Matrix& x) { return std::max(1.0, max_entry(x)); }

}  // namespace detail

// nullopt when lo <= hi as forms with slack rel * scale.
inline std::optional<FailureRecord> order_violation(const ExtendedSelfAdjoint& lo, const ExtendedSelfAdjoint& hi,
                                                    double rel = 1e-8) {
  double slack = rel * detail::scale_of(lo, hi);
  auto o = form_leq(lo, hi, slack);
  if (o.holds) return std::nullopt;
  FailureRecord f;
  f.witness = o.witness;
  f.lhs = lo.quadratic_form(*o.witness).to_string();
  f.rhs = hi.quadratic_form(*o.witness).to_string();
  f.slack = slack;
  if (!o.domain_ok) f.note = "domain of the right side is not contained in the domain of the left side";
  return f;
}

inline std::optional<FailureRecord> equality_violation(const ExtendedSelfAdjoint& x, const ExtendedSelfAdjoint& y,
                                                       double rel = 1e-8) {
  if (auto f = order_violation(x, y, rel)) return f;
  return order_violation(y, x, rel);
}

inline std::optional<FailureRecord> value_violation(double deviation, double tol, const std::string& note) {
  if (deviation <= tol) return std::nullopt;
  FailureRecord f;
  f.lhs = ExtendedReal(deviation).to_string();
  f.rhs = ExtendedReal(tol).to_string();
  f.slack = tol;
  f.note = note;
  return f;
}

inline std::optional<FailureRecord> unbounded_failure(const std::string& note) {
  FailureRecord f;
  f.lhs = "inf";
  f.rhs = "bounded";
  f.note = note;
  return f;
}

inline ExtendedSelfAdjoint direct_sum(const ExtendedSelfAdjoint& x, const ExtendedSelfAdjoint& y) {
  const Index n1 = x.ambient_dim(), n2 = y.ambient_dim();
  const Index k1 = x.essential().dim(), k2 = y.essential().dim();
  Matrix basis = Matrix::Zero(n1 + n2, k1 + k2);
  if (k1 > 0) basis.block(0, 0, n1, k1) = x.essential().basis();
  if (k2 > 0) basis.block(n1, k1, n2, k2) = y.essential().basis();
  Matrix fin = Matrix::Zero(k1 + k2, k1 + k2);
  if (k1 > 0) fin.block(0, 0, k1, k1) = x.finite_part();
  if (k2 > 0) fin.block(k1, k1, k2, k2) = y.finite_part();
  return ExtendedSelfAdjoint(Subspace::from_orthonormal(basis), fin);
}

inline Matrix block_diag(const Matrix& x, const Matrix& y) {
  Matrix m = Matrix::Zero(x.rows() + y.rows(), x.cols() + y.cols());
  m.topLeftCorner(x.rows(), x.cols()) = x;
  m.bottomRightCorner(y.rows(), y.cols()) = y;
  return m;
}

// A black-box binary operation on PSD pairs, with its generator when known.
struct Candidate {
  std::string name;
  std::function<ExtendedSelfAdjoint(const Matrix&, const Matrix&)> op;
  std::optional<ExtendedFunction> generator;
};

inline Candidate perspective_candidate(const ExtendedFunction& f) {
  return {"perspective(" + f.name + ")", [f](const Matrix& a, const Matrix& b) { return perspective(f, a, b); }, f};
}

inline Candidate connection_candidate(const ExtendedFunction& h) {
  return {"connection(" + h.name + ")",
          [h](const Matrix& a, const Matrix& b) { return ExtendedSelfAdjoint::bounded(connection(h, a, b)); }, h};
}

inline Candidate parallel_sum_candidate() {
  return {"parallel_sum", [](const Matrix& a, const Matrix& b) { return ExtendedSelfAdjoint::bounded(parallel_sum(a, b)); },
          parallel_generator()};
}

inline Candidate anticommutator_candidate() {
  return {"anticommutator", [](const Matrix& a, const Matrix& b) {
            return ExtendedSelfAdjoint::bounded(hermitian_part(a * b + b * a));
          },
          std::nullopt};
}

// phi_f(A,B) + e1 e1*; breaks the transformer inequality.
inline Candidate rank_one_bias_candidate(const ExtendedFunction& f) {
  return {"perspective(" + f.name + ")+e1e1*",
          [f](const Matrix& a, const Matrix& b) {
            Matrix e = Matrix::Zero(a.rows(), a.rows());
            e(0, 0) = 1.0;
            return add(perspective(f, a, b), ExtendedSelfAdjoint::bounded(e));
          },
          std::nullopt};
}

inline Candidate negated_candidate(const Candidate& c) {
  std::optional<ExtendedFunction> g;
  if (c.generator) {
    ExtendedFunction h = *c.generator;
    ExtendedFunction neg;
    neg.name = "-" + h.name;
    neg.domain = h.domain;
    neg.eval = [h](double t) { return ExtendedReal(-h(t).finite()); };
    g = neg;
  }
  auto op = c.op;
  return {"-" + c.name,
          [op](const Matrix& a, const Matrix& b) {
            auto v = op(a, b);
            if (!v.is_bounded()) throw PreconditionError("negated candidate: value is unbounded");
            return ExtendedSelfAdjoint::bounded(-v.to_matrix());
          },
          g};
}

// ---- axiom suites ----

// Joint subadditivity, transformer inequality (arbitrary C and isometries), and,
// when phi(1,0) <= 0, monotone decrease in the first argument.
inline SuiteReport suite_convexity(const ExtendedFunction& f, const SuiteConfig& cfg) {
  return detail::timed(cfg, [&] {
    auto rep = detail::start_report("convexity", f.name, cfg);
    auto phi = perspective_of(f);
    const Index n = cfg.dim;
    const bool decreasing = f.alpha().is_finite() && f.alpha().value() <= 0.0;
    if (!decreasing) rep.notes.push_back("phi(1,0) > 0: monotone decrease in A not applicable");
    for (int i = 0; i < cfg.trials; ++i) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
      Trial tr(rep, i);
      Matrix a1 = detail::draw_mixed(rng, n, i), a2 = detail::draw_mixed(rng, n, i);
      Matrix b1 = detail::draw_mixed(rng, n, i), b2 = detail::draw_mixed(rng, n, i);
      Index m = rng.uniform_int(1, static_cast<int>(n));
      Matrix c = rng.gaussian(n, m);
      Matrix v = rng.isometry(n, m);
      tr.input("A1", a1);
      tr.input("A2", a2);
      tr.input("B1", b1);
      tr.input("B2", b2);
      tr.input("C", c);
      tr.input("V", v);
      auto p1 = pw_apply(phi, a1, b1);
      auto p2 = pw_apply(phi, a2, b2);
      tr.check("subadditivity", order_violation(pw_apply(phi, a1 + a2, b1 + b2), add(p1, p2)));
      tr.check("transformer",
               order_violation(pw_apply(phi, detail::psd_congruence(c, a1), detail::psd_congruence(c, b1)),
                               congruence(c, p1)));
      tr.check("isometry",
               order_violation(pw_apply(phi, detail::psd_congruence(v, a1), detail::psd_congruence(v, b1)),
                               congruence(v, p1)));
      if (decreasing) {
        Matrix bigger = hermitian_part(a1 + a2);
        tr.check("monotone_decreasing", order_violation(pw_apply(phi, bigger, b1), p1));
      }
      tr.finish();
    }
    return rep;
  });
}

// Reversed inequalities for a concave f on the cone A >= alpha B, where the
// perspective only needs phi(1,0).
inline SuiteReport suite_concavity_restricted(const ExtendedFunction& f, const SuiteConfig& cfg) {
  return detail::timed(cfg, [&] {
    auto rep = detail::start_report("concavity_restricted", f.name, cfg);
    auto phi = restricted_perspective_of(f, RestrictedSide::ge);
    auto apply = [&](const Matrix& a, const Matrix& b) { return pw_apply_restricted(phi, a, b, RestrictedSide::ge); };
    const Index n = cfg.dim;
    const bool increasing = f.alpha().is_finite() && f.alpha().value() >= 0.0;
    for (int i = 0; i < cfg.trials; ++i) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
      Trial tr(rep, i);
      RandomSpec spec{static_cast<int>(n), static_cast<int>(n), Profile::dominated_pair, 1, rng.uniform(0.1, 1.0), 0};
      auto [a1, b1] = gen_pair(spec, rng);
      auto [a2, b2] = gen_pair(spec, rng);
      Index m = rng.uniform_int(1, static_cast<int>(n));
      Matrix c = rng.gaussian(n, m);
      Matrix v = rng.isometry(n, m);
      tr.input("A1", a1);
      tr.input("A2", a2);
      tr.input("B1", b1);
      tr.input("B2", b2);
      tr.input("C", c);
      tr.input("V", v);
      auto p1 = apply(a1, b1);
      auto p2 = apply(a2, b2);
      tr.check("superadditivity", order_violation(add(p1, p2), apply(a1 + a2, b1 + b2)));
      tr.check("transformer",
               order_violation(congruence(c, p1), apply(detail::psd_congruence(c, a1), detail::psd_congruence(c, b1))));
      tr.check("isometry",
               order_violation(congruence(v, p1), apply(detail::psd_congruence(v, a1), detail::psd_congruence(v, b1))));
      if (increasing) tr.check("monotone_increasing", order_violation(p1, apply(hermitian_part(a1 + a2), b1)));
      tr.finish();
    }
    return rep;
  });
}

// Decreasing chains A_k = A + 2^-k D, B_k = B + 2^-k E.
inline SuiteReport suite_continuity(const ExtendedFunction& f, const SuiteConfig& cfg) {
  return detail::timed(cfg, [&] {
    auto rep = detail::start_report("continuity", f.name, cfg);
    auto phi = perspective_of(f);
    const Index n = cfg.dim;
    const bool bounded_phi = f.alpha().is_finite() && f.beta().is_finite();
    const bool shift = f.f_at_1 && *f.f_at_1 == 0.0;
    if (!bounded_phi) rep.notes.push_back("unbounded corner: norm convergence not applicable");
    if (!shift) rep.notes.push_back("f(1) != 0: diagonal-shift monotonicity not applicable");
    int divergent = 0;
    for (int i = 0; i < cfg.trials; ++i) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
      Trial tr(rep, i);
      int kind = i % 3;
      Matrix a = detail::draw_psd(rng, n, kind), b = detail::draw_psd(rng, n, kind);
      Matrix d = rng.psd(n), e = rng.psd(n);
      Matrix rho = rng.density(n);
      tr.input("A", a);
      tr.input("B", b);
      tr.input("D", d);
      tr.input("E", e);
      tr.input("rho", rho);
      State st = State::from_density(rho);
      auto base = pw_apply(phi, a, b);
      ExtendedReal base_val = base.evaluate(st);

      // liminf along the chain
      double tail_min = kInf;
      Matrix last;
      for (int k = 30; k <= 40; ++k) {
        double w = std::ldexp(1.0, -k);
        auto vk = pw_apply(phi, hermitian_part(a + w * d), hermitian_part(b + w * e));
        ExtendedReal x = vk.evaluate(st);
        if (x.is_finite()) tail_min = std::min(tail_min, x.value());
        if (k == 40 && vk.is_bounded()) last = vk.to_matrix();
      }
      if (base_val.is_finite()) {
        double tol = 1e-6 * std::max(1.0, std::abs(base_val.value()));
        auto fail = tail_min == kInf
                        ? std::nullopt
                        : value_violation(base_val.value() - tail_min, tol, "limit value exceeds the tail minimum");
        tr.check("lower_semicontinuity", fail);
      } else {
        ++divergent;
        tr.pass("lower_semicontinuity");
      }

      if (bounded_phi) {
        if (!base.is_bounded() || last.size() == 0) {
          tr.check("norm_convergence", unbounded_failure("bounded corners but unbounded value"));
        } else {
          double dev = max_entry(last - base.to_matrix());
          tr.check("norm_convergence", value_violation(dev, 1e-5 * detail::scale_of(base.to_matrix()),
                                                       "entrywise distance at 2^-40"));
        }
      }

      if (shift) {
        auto chain = epsilon_limit(f, a, b);
        bool mono = true;
        double prev = -kInf;
        std::string where;
        for (const auto& en : chain) {
          double x = (rho * en.value).trace().real();
          if (x < prev - 1e-10 * std::max(1.0, std::abs(prev))) {
            mono = false;
            where = "eps=" + ExtendedReal(en.eps).to_string();
          }
          prev = x;
        }
        tr.check("shift_monotone", mono ? std::nullopt : value_violation(1.0, 0.0, "decrease at " + where));
        if (base.is_bounded()) {
          double dev = max_entry(chain.back().value - base.to_matrix());
          tr.check("shift_limit", value_violation(dev, 1e-6, "entrywise distance at eps=1e-8"));
        }
      }
      tr.finish();
    }
    if (divergent > 0)
      rep.notes.push_back(std::to_string(divergent) + " trials with an infinite limit value (liminf trivially holds)");
    if (f.alpha().is_infinite()) {
      // alpha_n = 2^-n, beta_n = 8^-n decrease to 0 while phi(alpha_n, beta_n) need not converge.
      double last = 0.0;
      for (int k = 1; k <= 30; ++k) {
        auto x = phi(std::ldexp(1.0, -k), std::ldexp(1.0, -3 * k));
        last = x.is_finite() ? x.value() : kInf;
      }
      rep.notes.push_back("scalar chain (2^-n, 8^-n) reaches " + ExtendedReal(last).to_string() +
                          " at n=30: expected divergence, not a failure");
    }
    return rep;
  });
}

// Homogeneity, direct sums, continuity with A_n + B_n >= eps I, diagonal shift.
inline SuiteReport suite_axioms_thm101(const Candidate& cand, const SuiteConfig& cfg) {
  return detail::timed(cfg, [&] {
    auto rep = detail::start_report("axioms_thm101", cand.name, cfg);
    const Index n = cfg.dim;
    auto bounded_check = [&](Trial& tr, const std::string& name, const ExtendedSelfAdjoint& x,
                             const ExtendedSelfAdjoint& y, double rel) {
      if (!x.is_bounded() || !y.is_bounded()) {
        tr.check(name, unbounded_failure("value is not a bounded operator"));
        return;
      }
      double dev = max_entry(x.to_matrix() - y.to_matrix());
      double tol = rel * std::max(detail::scale_of(x.to_matrix()), detail::scale_of(y.to_matrix()));
      tr.check(name, value_violation(dev, tol, "entrywise distance"));
    };
    for (int i = 0; i < cfg.trials; ++i) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
      Trial tr(rep, i);
      // A, B supported on a random subspace W; C : K -> H with range covering W.
      Index k = rng.uniform_int(1, static_cast<int>(n));
      Matrix w = rng.isometry(n, k);
      Matrix a = detail::psd_congruence(w.adjoint(), detail::draw_mixed(rng, k, i));
      Matrix b = detail::psd_congruence(w.adjoint(), detail::draw_mixed(rng, k, i));
      Index m = rng.uniform_int(static_cast<int>(k), static_cast<int>(n) + 1);
      Matrix c = detail::covering_map(rng, w, m);
      tr.input("A", a);
      tr.input("B", b);
      tr.input("C", c);
      auto base = cand.op(a, b);
      tr.check("homogeneity", equality_violation(cand.op(detail::psd_congruence(c, a), detail::psd_congruence(c, b)),
                                                 congruence(c, base)));

      Index n2 = rng.uniform_int(1, static_cast<int>(n));
      Matrix a2 = detail::draw_mixed(rng, n2, i), b2 = detail::draw_mixed(rng, n2, i);
      tr.input("A2", a2);
      tr.input("B2", b2);
      tr.check("direct_sum",
               equality_violation(cand.op(block_diag(a, a2), block_diag(b, b2)), direct_sum(base, cand.op(a2, b2))));

      Matrix aw = rng.psd(n, 0.05, 5.0), bw = rng.psd(n, 0.05, 5.0);
      Matrix h = rng.gaussian(n, n);
      h = hermitian_part(h) * (0.02 / std::max(1e-300, spectral_norm(hermitian_part(h))));
      tr.input("A_sot", aw);
      tr.input("B_sot", bw);
      double w30 = std::ldexp(1.0, -30);
      bounded_check(tr, "sot_continuity", cand.op(hermitian_part(aw + w30 * h), hermitian_part(bw - w30 * h)),
                    cand.op(aw, bw), 1e-6);

      // Rates can be as slow as sqrt(eps) (geometric mean), so the check asks
      // for shrinking errors along the schedule and a loose bound at the end.
      Matrix id = Matrix::Identity(n, n);
      if (!base.is_bounded()) {
        tr.check("shift_continuity", unbounded_failure("value is not a bounded operator"));
      } else {
        std::vector<double> devs;
        bool finite = true;
        for (double eps : {1e-4, 1e-6, 1e-8}) {
          auto v = cand.op(a + eps * id, b + eps * id);
          if (!v.is_bounded()) {
            finite = false;
            break;
          }
          devs.push_back(max_entry(v.to_matrix() - base.to_matrix()));
        }
        double sc = detail::scale_of(base.to_matrix());
        if (!finite) {
          tr.check("shift_continuity", unbounded_failure("shifted value is not a bounded operator"));
        } else if (devs[2] > devs[0] + 1e-9 * sc) {
          tr.check("shift_continuity", value_violation(devs[2], devs[0], "error grew along the shift schedule"));
        } else {
          tr.check("shift_continuity", value_violation(devs[2], 1e-3 * sc, "entrywise distance at eps=1e-8"));
        }
      }
      tr.finish();
    }
    return rep;
  });
}

// (i) subadditivity, (ii) transformer with PSD C, (iii) eps-shift upper
// continuity, (iv) Phi(tI, I) bounded, (v) Phi(I + X_n, I) -> Phi(I, I); plus
// recovery of f from Phi(tI, I) on a grid.
inline SuiteReport suite_axioms_thm103(const Candidate& cand, const SuiteConfig& cfg) {
  return detail::timed(cfg, [&] {
    auto rep = detail::start_report("axioms_thm103", cand.name, cfg);
    const Index n = cfg.dim;
    const Matrix id = Matrix::Identity(n, n);
    int divergent = 0;
    for (int i = 0; i < cfg.trials; ++i) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
      Trial tr(rep, i);
      Matrix a1 = detail::draw_mixed(rng, n, i), a2 = detail::draw_mixed(rng, n, i);
      Matrix b1 = detail::draw_mixed(rng, n, i), b2 = detail::draw_mixed(rng, n, i);
      Matrix c = detail::draw_psd(rng, n, rng.uniform_int(0, 2));
      c /= spectral_norm(c);
      Matrix rho = rng.density(n);
      Matrix x = rng.psd(n);
      double t = rng.log_uniform(1e-2, 1e2);
      tr.input("A1", a1);
      tr.input("A2", a2);
      tr.input("B1", b1);
      tr.input("B2", b2);
      tr.input("C", c);
      tr.input("rho", rho);
      tr.input("X", x);
      tr.input("t", t);
      State st = State::from_density(rho);
      auto p1 = cand.op(a1, b1);
      tr.check("i_subadditivity", order_violation(cand.op(a1 + a2, b1 + b2), add(p1, cand.op(a2, b2))));
      tr.check("ii_transformer",
               order_violation(cand.op(detail::psd_congruence(c, a1), detail::psd_congruence(c, b1)),
                               congruence(c, p1)));

      ExtendedReal target = p1.evaluate(st);
      std::vector<double> vals;
      for (double eps : default_eps_schedule())
        vals.push_back(cand.op(a1 + eps * id, b1 + eps * id).evaluate(st).finite());
      if (target.is_finite()) {
        // Errors must shrink along the schedule; the terminal bound is loose
        // because rates can be as slow as sqrt(eps).
        double sc = std::max(1.0, std::abs(target.value()));
        double mid = std::abs(vals[3] - target.value()), last = std::abs(vals.back() - target.value());
        if (last > mid + 1e-9 * sc)
          tr.check("iii_shift_continuity", value_violation(last, mid, "error grew between eps=1e-4 and eps=1e-8"));
        else
          tr.check("iii_shift_continuity", value_violation(last, 1e-3 * sc,
                                                           "|Phi(A_eps,B_eps)(rho) - Phi(A,B)(rho)| at eps=1e-8"));
      } else {
        ++divergent;
        tr.check("iii_shift_continuity", vals.back() > vals.front()
                                             ? std::nullopt
                                             : value_violation(vals.front() - vals.back(), 0.0,
                                                               "infinite limit but the shifted values do not grow"));
      }

      auto tv = cand.op(t * id, id);
      tr.check("iv_special_boundedness", tv.is_bounded() ? std::nullopt : unbounded_failure("Phi(tI, I) unbounded"));

      ExtendedReal at_one = cand.op(id, id).evaluate(st);
      ExtendedReal near = cand.op(id + std::ldexp(1.0, -30) * x, id).evaluate(st);
      if (at_one.is_infinite() || near.is_infinite()) {
        tr.check("v_local_continuity", unbounded_failure("Phi(I + X_n, I)(rho) infinite"));
      } else {
        double tol = 1e-6 * std::max(1.0, std::abs(at_one.value()));
        tr.check("v_local_continuity", value_violation(std::abs(near.value() - at_one.value()), tol,
                                                       "|Phi(I+X_n,I)(rho) - Phi(I,I)(rho)| at 2^-30"));
      }

      if (i == 0) {
        // f(t) I = Phi(tI, I) on a 50-point grid.
        double worst = 0.0;
        bool nonpositive = true, finite = true;
        std::optional<FailureRecord> fail;
        for (int g = 0; g < 50; ++g) {
          double s = std::pow(10.0, -2.0 + 4.0 * g / 49.0);
          auto v = cand.op(s * id, id);
          if (!v.is_bounded()) {
            finite = false;
            break;
          }
          Matrix vm = v.to_matrix();
          double rec = vm.trace().real() / static_cast<double>(n);
          if (rec > 0) nonpositive = false;
          if (cand.generator) {
            double want = (*cand.generator)(s).finite();
            double dev = max_entry(vm - want * id) / std::max(1.0, std::abs(want));
            if (dev > worst) worst = dev;
            if (dev > 1e-9 && !fail) {
              fail = value_violation(dev, 1e-9, "recovered f differs at t=" + ExtendedReal(s).to_string());
            }
          }
        }
        if (!finite) {
          tr.check("recovery", unbounded_failure("Phi(tI, I) unbounded on the grid"));
        } else if (cand.generator) {
          tr.check("recovery", fail);
          rep.notes.push_back("f recovered from Phi(tI,I) on 50 points, max relative deviation " +
                              ExtendedReal(worst).to_string());
        }
        if (finite && nonpositive) rep.notes.push_back("recovered generator is nonpositive on the grid");
      }
      tr.finish();
    }
    if (divergent > 0)
      rep.notes.push_back(std::to_string(divergent) + " trials with an infinite target in (iii); growth checked");
    return rep;
  });
}

// (I') superadditivity, (II') C Phi(A,B) C <= Phi(CAC, CBC), (III') decreasing continuity.
inline SuiteReport suite_connection_cor107(const Candidate& cand, const SuiteConfig& cfg) {
  return detail::timed(cfg, [&] {
    auto rep = detail::start_report("connection_cor107", cand.name, cfg);
    const Index n = cfg.dim;
    for (int i = 0; i < cfg.trials; ++i) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
      Trial tr(rep, i);
      Matrix a1 = detail::draw_mixed(rng, n, i), a2 = detail::draw_mixed(rng, n, i);
      Matrix b1 = detail::draw_mixed(rng, n, i), b2 = detail::draw_mixed(rng, n, i);
      Matrix c = detail::draw_psd(rng, n, rng.uniform_int(0, 2));
      Matrix d = rng.psd(n), e = rng.psd(n);
      tr.input("A1", a1);
      tr.input("A2", a2);
      tr.input("B1", b1);
      tr.input("B2", b2);
      tr.input("C", c);
      tr.input("D", d);
      tr.input("E", e);
      auto p1 = cand.op(a1, b1);
      tr.check("I_superadditivity", order_violation(add(p1, cand.op(a2, b2)), cand.op(a1 + a2, b1 + b2)));
      tr.check("II_transformer", order_violation(congruence(c, p1), cand.op(detail::psd_congruence(c, a1),
                                                                             detail::psd_congruence(c, b1))));
      double w = std::ldexp(1.0, -40);
      auto near = cand.op(hermitian_part(a1 + w * d), hermitian_part(b1 + w * e));
      if (!near.is_bounded() || !p1.is_bounded()) {
        tr.check("III_upper_continuity", unbounded_failure("value is not a bounded operator"));
      } else {
        double dev = max_entry(near.to_matrix() - p1.to_matrix());
        tr.check("III_upper_continuity",
                 value_violation(dev, 1e-5 * detail::scale_of(p1.to_matrix()), "entrywise distance at 2^-40"));
      }
      tr.finish();
    }
    return rep;
  });
}

// Two-sided homogeneity phi(C*AC, C*BC) = C* phi(A,B) C under the range condition.
inline SuiteReport suite_homogeneity(const ExtendedFunction& f, const SuiteConfig& cfg) {
  return detail::timed(cfg, [&] {
    auto rep = detail::start_report("homogeneity", f.name, cfg);
    auto phi = perspective_of(f);
    const Index n = cfg.dim;
    for (int i = 0; i < cfg.trials; ++i) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
      Trial tr(rep, i);
      Index k = rng.uniform_int(1, static_cast<int>(n));
      Matrix w = rng.isometry(n, k);
      Matrix a = detail::psd_congruence(w.adjoint(), detail::draw_mixed(rng, k, i));
      Matrix b = detail::psd_congruence(w.adjoint(), detail::draw_mixed(rng, k, i));
      Index m = rng.uniform_int(static_cast<int>(k), static_cast<int>(n) + 1);
      Matrix c = detail::covering_map(rng, w, m);
      tr.input("A", a);
      tr.input("B", b);
      tr.input("C", c);
      auto h = check_homogeneity(phi, a, b, c);
      if (h.skipped) {
        tr.check("homogeneity", unbounded_failure("range condition not met: " + h.reason));
      } else if (!h.agrees) {
        FailureRecord fr;
        fr.witness = h.witness;
        fr.lhs = ExtendedReal(h.max_deviation).to_string();
        fr.rhs = "0";
        fr.slack = h.slack;
        fr.note = "two-sided form deviation";
        tr.check("homogeneity", fr);
      } else {
        tr.pass("homogeneity");
      }
      tr.finish();
    }
    return rep;
  });
}

// pw_apply against the joint-eigenbasis oracle on commuting pairs.
inline SuiteReport suite_commuting(const ExtendedFunction& f, const SuiteConfig& cfg) {
  return detail::timed(cfg, [&] {
    auto rep = detail::start_report("commuting", f.name, cfg);
    auto phi = perspective_of(f);
    for (int i = 0; i < cfg.trials; ++i) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
      Trial tr(rep, i);
      RandomSpec spec{std::min(2, cfg.dim), cfg.dim, Profile::commuting_pair, 1, 0.5, 0};
      auto [a, b] = gen_pair(spec, rng);
      tr.input("A", a);
      tr.input("B", b);
      auto x = pw_apply(phi, a, b);
      auto y = pw_commuting_oracle(phi, a, b);
      if (x.infinity_dim() != y.infinity_dim()) {
        FailureRecord fr;
        fr.lhs = std::to_string(x.infinity_dim());
        fr.rhs = std::to_string(y.infinity_dim());
        fr.note = "infinity-part dimensions differ";
        tr.check("infinity_dim", fr);
      } else {
        tr.pass("infinity_dim");
      }
      // Half the probes inside the oracle's domain, half generic.
      const Index n = a.rows();
      std::optional<FailureRecord> fail;
      for (int p = 0; p < 10 && !fail; ++p) {
        Vector v = rng.unit_vector(n);
        if (p % 2 == 0 && y.essential().dim() > 0) {
          Vector z = y.essential().basis() * rng.unit_vector(y.essential().dim());
          v = z;
        }
        ExtendedReal qx = x.quadratic_form(v), qy = y.quadratic_form(v);
        if (qx.is_infinite() != qy.is_infinite()) {
          FailureRecord fr;
          fr.witness = v;
          fr.lhs = qx.to_string();
          fr.rhs = qy.to_string();
          fr.note = "one side infinite";
          fail = fr;
        } else if (qx.is_finite()) {
          double tol = 1e-9 * std::max(1.0, std::abs(qy.value()));
          if (std::abs(qx.value() - qy.value()) > tol) {
            FailureRecord fr;
            fr.witness = v;
            fr.lhs = qx.to_string();
            fr.rhs = qy.to_string();
            fr.slack = tol;
            fail = fr;
          }
        }
      }
      tr.check("quadratic_forms", fail);
      tr.finish();
    }
    return rep;
  });
}

}  // namespace pwcalc
