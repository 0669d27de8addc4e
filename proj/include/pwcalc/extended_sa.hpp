#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwcalc/extended_real.hpp"
#include "pwcalc/matrix_core.hpp"

namespace pwcalc {

// Relative weight of a state on the infinity part above which it evaluates to +inf.
inline constexpr double kStateInfTol = 1e-12;
// Cosine tolerance for domain containment in the form order.
inline constexpr double kContainCosTol = 1e-8;
// Relative singular-value threshold for kernels of P_inf * C.
inline constexpr double kKernelTol = 1e-9;

// Hermitian operator on an essential subspace, +inf on its complement.
class ExtendedSelfAdjoint {
 public:
  ExtendedSelfAdjoint() : ExtendedSelfAdjoint(Subspace(0), Matrix(0, 0)) {}

  ExtendedSelfAdjoint(Subspace essential, const Matrix& finite_part)
      : essential_(std::move(essential)), finite_(hermitian_part(finite_part)) {
    if (finite_.rows() != essential_.dim() || finite_.cols() != essential_.dim())
      throw DimensionError("ExtendedSelfAdjoint: finite part does not match the essential subspace");
    infinity_ = essential_.complement();
    lower_ = 0.0;
    if (finite_.rows() > 0) lower_ = eigh(finite_).values(0);
  }

  static ExtendedSelfAdjoint bounded(const Matrix& m) {
    require_square(m, "ExtendedSelfAdjoint::bounded");
    return {Subspace::full(m.rows()), m};
  }
  static ExtendedSelfAdjoint zero(Index n) { return bounded(Matrix::Zero(n, n)); }
  // +inf on `where`, 0 on its complement.
  static ExtendedSelfAdjoint infinite_on(const Subspace& where) {
    Subspace ess = where.complement();
    return {ess, Matrix::Zero(ess.dim(), ess.dim())};
  }

  Index ambient_dim() const { return essential_.ambient_dim(); }
  const Subspace& essential() const { return essential_; }
  const Subspace& infinity_part() const { return infinity_; }
  const Matrix& finite_part() const { return finite_; }
  double lower_bound() const { return lower_; }
  Index infinity_dim() const { return infinity_.dim(); }
  bool is_bounded() const { return infinity_.dim() == 0; }

  // E F E*: the finite operator, zero on the infinity part.
  Matrix finite_operator() const {
    const Matrix& e = essential_.basis();
    return hermitian_part(e * finite_ * e.adjoint());
  }

  Matrix to_matrix() const {
    if (!is_bounded()) throw PreconditionError("ExtendedSelfAdjoint: value has a nonzero infinity part");
    return finite_operator();
  }

  ExtendedReal evaluate(const Matrix& rho) const {
    if (rho.rows() != ambient_dim() || rho.cols() != ambient_dim())
      throw DimensionError("evaluate_state: dimension mismatch");
    double tr = rho.trace().real();
    if (infinity_.dim() > 0) {
      const Matrix& p = infinity_.basis();
      double w = (p.adjoint() * rho * p).trace().real();
      if (w > kStateInfTol * tr) return ExtendedReal::infinity();
    }
    const Matrix& e = essential_.basis();
    return (e.adjoint() * rho * e * finite_).trace().real();
  }

  ExtendedReal evaluate(const State& rho) const { return evaluate(rho.density()); }

  ExtendedReal quadratic_form(const Vector& xi) const {
    if (xi.size() != ambient_dim()) throw DimensionError("quadratic_form: dimension mismatch");
    double nrm2 = xi.squaredNorm();
    if (nrm2 == 0.0) return 0.0;
    if (infinity_.dim() > 0) {
      double w = (infinity_.basis().adjoint() * xi).squaredNorm();
      if (w > kStateInfTol * nrm2) return ExtendedReal::infinity();
    }
    Vector c = essential_.basis().adjoint() * xi;
    return c.dot(finite_ * c).real();
  }

  ExtendedReal norm() const {
    if (!is_bounded()) return ExtendedReal::infinity();
    if (finite_.rows() == 0) return 0.0;
    return max_abs(eigh(finite_).values);
  }

  ExtendedReal trace() const {
    if (!is_bounded()) return ExtendedReal::infinity();
    return finite_.trace().real();
  }

 private:
  Subspace essential_;
  Subspace infinity_;
  Matrix finite_;
  double lower_ = 0.0;
};

struct EigenPair {
  ExtendedReal value;
  Vector vector;
};

inline ExtendedSelfAdjoint make_extended(const std::vector<EigenPair>& pairs, Index n) {
  if (static_cast<Index>(pairs.size()) != n)
    throw PreconditionError("make_extended: expected " + std::to_string(n) + " eigenpairs, got " +
                            std::to_string(pairs.size()));
  Matrix v(n, n);
  for (Index i = 0; i < n; ++i) {
    if (pairs[static_cast<std::size_t>(i)].vector.size() != n) throw DimensionError("make_extended: vector length");
    v.col(i) = pairs[static_cast<std::size_t>(i)].vector;
  }
  Matrix gram = v.adjoint() * v;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      double want = i == j ? 1.0 : 0.0;
      if (std::abs(gram(i, j) - want) > 1e-10)
        throw PreconditionError("make_extended: eigenvectors not orthonormal, Gram[" + std::to_string(i) + "][" +
                                std::to_string(j) + "] = " + std::to_string(std::abs(gram(i, j))));
    }
  std::vector<Index> fin;
  for (Index i = 0; i < n; ++i)
    if (pairs[static_cast<std::size_t>(i)].value.is_finite()) fin.push_back(i);
  const Index k = static_cast<Index>(fin.size());
  Matrix e(n, k);
  Matrix f = Matrix::Zero(k, k);
  for (Index j = 0; j < k; ++j) {
    e.col(j) = v.col(fin[static_cast<std::size_t>(j)]);
    f(j, j) = pairs[static_cast<std::size_t>(fin[static_cast<std::size_t>(j)])].value.value();
  }
  return {Subspace::from_orthonormal(e), f};
}

inline ExtendedSelfAdjoint make_extended(const std::vector<EigenPair>& pairs) {
  return make_extended(pairs, pairs.empty() ? 0 : pairs.front().vector.size());
}

inline ExtendedReal evaluate_state(const ExtendedSelfAdjoint& t, const State& rho) { return t.evaluate(rho); }
inline ExtendedReal quadratic_form(const ExtendedSelfAdjoint& t, const Vector& xi) { return t.quadratic_form(xi); }

inline ExtendedSelfAdjoint add(const ExtendedSelfAdjoint& a, const ExtendedSelfAdjoint& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("add: dimension mismatch");
  if (a.is_bounded() && b.is_bounded()) return ExtendedSelfAdjoint::bounded(a.finite_operator() + b.finite_operator());
  Subspace meet = subspace_meet(a.essential(), b.essential());
  const Matrix& e = meet.basis();
  return {meet, e.adjoint() * (a.finite_operator() + b.finite_operator()) * e};
}

inline ExtendedSelfAdjoint scale(double alpha, const ExtendedSelfAdjoint& t) {
  if (alpha < 0) throw PreconditionError("scale: negative factor");
  if (alpha == 0.0) return ExtendedSelfAdjoint::zero(t.ambient_dim());
  return {t.essential(), alpha * t.finite_part()};
}

// C* T C for C : K -> H (an n x m matrix); the essential part is ker(P_inf C).
inline ExtendedSelfAdjoint congruence(const Matrix& c, const ExtendedSelfAdjoint& t) {
  if (c.rows() != t.ambient_dim())
    throw DimensionError("congruence: C has " + std::to_string(c.rows()) + " rows, expected " +
                         std::to_string(t.ambient_dim()));
  const Index m = c.cols();
  Matrix fin = t.finite_operator();
  if (t.is_bounded()) return ExtendedSelfAdjoint::bounded(c.adjoint() * fin * c);
  Matrix pc = t.infinity_part().basis().adjoint() * c;  // coordinates of P_inf C
  double cn = spectral_norm(c);
  if (cn == 0.0) return ExtendedSelfAdjoint::zero(m);
  Eigen::JacobiSVD<Matrix> svd(pc, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index r = 0;
  while (r < sv.size() && sv(r) > kKernelTol * cn) ++r;
  Matrix kern = svd.matrixV().rightCols(m - r);
  Matrix ck = c * kern;
  return {Subspace::from_orthonormal(kern), kern.adjoint() * c.adjoint() * fin * ck};
}

struct FormOrder {
  bool holds = true;
  bool domain_ok = true;
  double min_gap = 0.0;  // min eigenvalue of q2 - q1 on dom(T2)
  std::optional<Vector> witness;
};

// T1 <= T2: dom(T2) inside dom(T1) and q2 - q1 >= -slack on dom(T2).
inline FormOrder form_leq(const ExtendedSelfAdjoint& t1, const ExtendedSelfAdjoint& t2, double slack) {
  if (t1.ambient_dim() != t2.ambient_dim()) throw DimensionError("form_leq: dimension mismatch");
  FormOrder r;
  const Subspace& d2 = t2.essential();
  if (d2.dim() == 0) return r;
  if (!subspace_contains(t1.essential(), d2, kContainCosTol)) {
    // Direction of dom(T2) farthest from dom(T1): q1 = inf, q2 finite.
    Eigen::JacobiSVD<Matrix> svd(t1.essential().dim() > 0 ? Matrix(t1.essential().basis().adjoint() * d2.basis())
                                                           : Matrix::Zero(1, d2.dim()),
                                 Eigen::ComputeFullV);
    Vector w = d2.basis() * svd.matrixV().col(d2.dim() - 1);
    r.holds = false;
    r.domain_ok = false;
    r.min_gap = -kInf;
    r.witness = w;
    return r;
  }
  const Matrix& e = d2.basis();
  Matrix g = t2.finite_part() - e.adjoint() * t1.finite_operator() * e;
  auto eg = eigh(g);
  r.min_gap = eg.values(0);
  if (r.min_gap < -slack) {
    r.holds = false;
    r.witness = Vector(e * eg.vectors.col(0));
  }
  return r;
}

inline bool approx_equal(const ExtendedSelfAdjoint& a, const ExtendedSelfAdjoint& b, double slack) {
  return form_leq(a, b, slack).holds && form_leq(b, a, slack).holds;
}

enum class Classification { bounded, dense_domain, proper_infinity_part };

inline Classification classify(const ExtendedSelfAdjoint& t) {
  return t.is_bounded() ? Classification::bounded : Classification::proper_infinity_part;
}

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::bounded:
      return "bounded";
    case Classification::dense_domain:
      return "dense_domain";
    default:
      return "proper_infinity_part";
  }
}

// Largest finite eigenvalue magnitude, at least 1; used to scale slacks.
inline double form_scale(const ExtendedSelfAdjoint& t) {
  double s = 1.0;
  if (t.finite_part().rows() > 0) s = std::max(s, max_abs(eigh(t.finite_part()).values));
  return s;
}

inline nlohmann::json to_json(const ExtendedSelfAdjoint& t) {
  nlohmann::json j;
  j["n"] = t.ambient_dim();
  j["essential_basis"] = matrix_to_json(t.essential().basis(), false);
  j["finite_part"] = matrix_to_json(t.finite_part(), false);
  j["classification"] = to_string(classify(t));
  return j;
}

inline ExtendedSelfAdjoint extended_from_json(const nlohmann::json& j) {
  if (!j.contains("n")) throw ParseError("field 'n': missing");
  Index n = j["n"].get<Index>();
  if (!j.contains("essential_basis") || !j["essential_basis"].contains("re"))
    throw ParseError("field 'essential_basis': missing");
  Index k = n == 0 ? 0 : static_cast<Index>(j["essential_basis"]["re"].empty() ? 0 : j["essential_basis"]["re"][0].size());
  Matrix e = matrix_from_json(j["essential_basis"], n, k, "essential_basis.");
  Matrix f = matrix_from_json(j["finite_part"], k, k, "finite_part.");
  return {Subspace::from_orthonormal(e), f};
}

}  // namespace pwcalc
