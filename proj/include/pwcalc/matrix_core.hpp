#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace pwcalc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Input Hermiticity accepted by readers and public entry points.
inline constexpr double kHermitianTol = 1e-9;
// Cosine threshold for declaring two directions shared by two subspaces.
inline constexpr double kMeetCosTol = 1e-10;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DimensionError : public Error {
 public:
  using Error::Error;
};
class NotPsdError : public Error {
 public:
  using Error::Error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};
class PreconditionError : public Error {
 public:
  using Error::Error;
};
class ParseError : public Error {
 public:
  using Error::Error;
};
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, long iterations)
      : Error(what + " (after " + std::to_string(iterations) + " iterations)"), iterations_(iterations) {}
  long iterations() const { return iterations_; }

 private:
  long iterations_;
};

inline Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

inline double max_asymmetry(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw DimensionError(std::string(what) + ": expected a square matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
}

inline void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  require_square(a, what);
  require_square(b, what);
  if (a.rows() != b.rows())
    throw DimensionError(std::string(what) + ": dimension mismatch " + std::to_string(a.rows()) + " vs " +
                         std::to_string(b.rows()));
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

struct Eigh {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns are eigenvectors
};

// Hermitian eigendecomposition. The input is symmetrised first, so only
// rounding-level asymmetry is tolerated silently.
inline Eigh eigh(const Matrix& m) {
  require_square(m, "eigh");
  const Index n = m.rows();
  if (n == 0) return {RealVector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("eigh: eigensolver did not converge", static_cast<long>(30 * n));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline double max_abs(const RealVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }
inline double max_entry(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Default scale-aware rank tolerance n * eps * max |lambda|.
inline double default_rank_tol(const RealVector& eigenvalues) {
  return static_cast<double>(eigenvalues.size()) * kEps * max_abs(eigenvalues);
}

inline double psd_tol(const RealVector& eigenvalues) { return default_rank_tol(eigenvalues); }

inline void check_psd(const Matrix& m, const char* what) {
  require_square(m, what);
  double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  if (max_asymmetry(m) > kHermitianTol * std::max(1.0, scale))
    throw NotPsdError(std::string(what) + ": matrix is not Hermitian");
  auto e = eigh(m);
  if (e.values.size() > 0 && e.values(0) < -psd_tol(e.values))
    throw NotPsdError(std::string(what) + ": smallest eigenvalue " + std::to_string(e.values(0)) + " is negative");
}

inline Matrix from_eigen(const Matrix& v, const RealVector& values) {
  return hermitian_part(v * values.cast<Complex>().asDiagonal() * v.adjoint());
}

inline Matrix psd_sqrt(const Matrix& m) {
  auto e = eigh(m);
  if (e.values.size() == 0) return m;
  double tol = psd_tol(e.values);
  if (e.values(0) < -tol)
    throw NotPsdError("psd_sqrt: smallest eigenvalue " + std::to_string(e.values(0)) + " is negative");
  RealVector r = e.values.cwiseMax(0.0).cwiseSqrt();
  return from_eigen(e.vectors, r);
}

// PSD power m^p for p > 0 (eigenvalues below the psd tolerance clamped to 0).
inline Matrix psd_power(const Matrix& m, double p) {
  auto e = eigh(m);
  if (e.values.size() == 0) return m;
  double tol = psd_tol(e.values);
  if (e.values(0) < -tol)
    throw NotPsdError("psd_power: smallest eigenvalue " + std::to_string(e.values(0)) + " is negative");
  RealVector r(e.values.size());
  for (Index i = 0; i < r.size(); ++i) r(i) = e.values(i) <= 0 ? 0.0 : std::pow(e.values(i), p);
  return from_eigen(e.vectors, r);
}

class Subspace {
 public:
  explicit Subspace(Index ambient = 0) : basis_(ambient, 0) {}

  // Columns must already be orthonormal.
  static Subspace from_orthonormal(const Matrix& basis) {
    if (basis.cols() > 0) {
      Matrix gram = basis.adjoint() * basis - Matrix::Identity(basis.cols(), basis.cols());
      if (gram.cwiseAbs().maxCoeff() > 1e-10) throw PreconditionError("Subspace: basis columns are not orthonormal");
    }
    Subspace s;
    s.basis_ = basis;
    return s;
  }

  static Subspace full(Index n) { return from_orthonormal(Matrix::Identity(n, n)); }

  // Column span of an arbitrary matrix; singular values <= tol * largest are dropped.
  static Subspace span(const Matrix& columns, double rel_tol = 1e-10) {
    Subspace s(columns.rows());
    if (columns.cols() == 0 || columns.rows() == 0) return s;
    Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return s;
    Index r = 0;
    while (r < sv.size() && sv(r) > rel_tol * sv(0)) ++r;
    s.basis_ = svd.matrixU().leftCols(r);
    return s;
  }

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  Matrix projector() const { return basis_ * basis_.adjoint(); }

  Subspace complement() const {
    const Index n = ambient_dim(), k = dim();
    if (k == 0) return full(n);
    Eigen::HouseholderQR<Matrix> qr(basis_);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    Subspace s;
    s.basis_ = q.rightCols(n - k);
    return s;
  }

 private:
  Matrix basis_;
};

// Cosines of the principal angles between two subspaces, descending.
inline RealVector principal_cosines(const Subspace& p, const Subspace& q) {
  if (p.dim() == 0 || q.dim() == 0) return RealVector(0);
  Eigen::JacobiSVD<Matrix> svd(p.basis().adjoint() * q.basis());
  return svd.singularValues();
}

inline Subspace subspace_meet(const Subspace& p, const Subspace& q) {
  if (p.ambient_dim() != q.ambient_dim()) throw DimensionError("subspace_meet: ambient dimensions differ");
  Subspace zero(p.ambient_dim());
  if (p.dim() == 0 || q.dim() == 0) return zero;
  Eigen::JacobiSVD<Matrix> svd(p.basis().adjoint() * q.basis(), Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  Index r = 0;
  while (r < sv.size() && sv(r) >= 1.0 - kMeetCosTol) ++r;
  if (r == 0) return zero;
  Matrix b = p.basis() * svd.matrixU().leftCols(r);
  // Re-orthonormalise to remove the 1e-10 slack of the cosine threshold.
  Eigen::HouseholderQR<Matrix> qr(b);
  Matrix qmat = qr.householderQ() * Matrix::Identity(b.rows(), r);
  return Subspace::from_orthonormal(qmat);
}

// True when `small` lies inside `big` up to the cosine tolerance.
inline bool subspace_contains(const Subspace& big, const Subspace& small, double cos_tol = 1e-8) {
  if (small.dim() == 0) return true;
  if (small.dim() > big.dim()) return false;
  auto c = principal_cosines(big, small);
  return c(c.size() - 1) >= 1.0 - cos_tol;
}

inline bool subspace_equal(const Subspace& p, const Subspace& q, double cos_tol = 1e-8) {
  return p.dim() == q.dim() && subspace_contains(p, q, cos_tol) && subspace_contains(q, p, cos_tol);
}

struct PinvSqrt {
  Matrix pinv_sqrt;
  Subspace range;
};

inline PinvSqrt pinv_sqrt(const Matrix& m, std::optional<double> rank_tol = std::nullopt) {
  auto e = eigh(m);
  const Index n = e.values.size();
  double tol = rank_tol.value_or(default_rank_tol(e.values));
  RealVector inv(n);
  std::vector<Index> keep;
  for (Index i = 0; i < n; ++i) {
    if (e.values(i) > tol) {
      inv(i) = 1.0 / std::sqrt(e.values(i));
      keep.push_back(i);
    } else {
      inv(i) = 0.0;
    }
  }
  Matrix basis(n, static_cast<Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) basis.col(static_cast<Index>(j)) = e.vectors.col(keep[j]);
  return {from_eigen(e.vectors, inv), Subspace::from_orthonormal(basis)};
}

// Moore-Penrose pseudo-inverse of a PSD matrix with the default rank tolerance.
inline Matrix psd_pinv(const Matrix& m, std::optional<double> rank_tol = std::nullopt) {
  auto e = eigh(m);
  double tol = rank_tol.value_or(default_rank_tol(e.values));
  RealVector inv(e.values.size());
  for (Index i = 0; i < inv.size(); ++i) inv(i) = e.values(i) > tol ? 1.0 / e.values(i) : 0.0;
  return from_eigen(e.vectors, inv);
}

inline Subspace psd_range(const Matrix& m, std::optional<double> rank_tol = std::nullopt) {
  return pinv_sqrt(m, rank_tol).range;
}

class State {
 public:
  static State from_density(const Matrix& rho) {
    check_psd(rho, "State");
    double tr = rho.trace().real();
    if (!(tr > 0)) throw PreconditionError("State: trace must be strictly positive");
    return State(hermitian_part(rho));
  }
  static State vector_state(const Vector& xi) {
    if (xi.squaredNorm() <= 0) throw PreconditionError("State: vector state of the zero vector");
    return State(xi * xi.adjoint());
  }

  const Matrix& density() const { return rho_; }
  Index dim() const { return rho_.rows(); }
  double trace() const { return rho_.trace().real(); }
  double operator()(const Matrix& x) const { return (rho_ * x).trace().real(); }

 private:
  explicit State(Matrix rho) : rho_(std::move(rho)) {}
  Matrix rho_;
};

// ---- JSON matrix I/O ----

inline nlohmann::json grid_to_json(const Eigen::MatrixXd& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < g.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < g.cols(); ++j) row.push_back(g(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline Eigen::MatrixXd grid_from_json(const nlohmann::json& j, const std::string& field, Index rows, Index cols) {
  if (!j.is_array()) throw ParseError("field '" + field + "': expected an array of rows");
  if (static_cast<Index>(j.size()) != rows)
    throw ParseError("field '" + field + "': dimension mismatch, expected " + std::to_string(rows) + " rows, got " +
                     std::to_string(j.size()));
  Eigen::MatrixXd g(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw ParseError("field '" + field + "': dimension mismatch in row " + std::to_string(i) + ", expected " +
                       std::to_string(cols) + " entries");
    for (Index k = 0; k < cols; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number())
        throw ParseError("field '" + field + "': entry [" + std::to_string(i) + "][" + std::to_string(k) +
                         "] is not a number");
      g(i, k) = v.get<double>();
    }
  }
  return g;
}

inline nlohmann::json matrix_to_json(const Matrix& m, bool with_n = true) {
  nlohmann::json j;
  if (with_n) j["n"] = m.rows();
  j["re"] = grid_to_json(m.real());
  j["im"] = grid_to_json(m.imag());
  return j;
}

// Rectangular variant: rows/cols given by the caller.
inline Matrix matrix_from_json(const nlohmann::json& j, Index rows, Index cols, const std::string& prefix = "") {
  if (!j.is_object()) throw ParseError("field '" + prefix + "': expected an object with 're' and 'im'");
  if (!j.contains("re")) throw ParseError("field '" + prefix + "re': missing");
  Eigen::MatrixXd re = grid_from_json(j["re"], prefix + "re", rows, cols);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(rows, cols);
  if (j.contains("im")) im = grid_from_json(j["im"], prefix + "im", rows, cols);
  Matrix m(rows, cols);
  m.real() = re;
  m.imag() = im;
  return m;
}

inline Matrix hermitian_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n")) throw ParseError("field 'n': missing");
  if (!j["n"].is_number_integer() || j["n"].get<long>() < 1) throw ParseError("field 'n': expected a positive integer");
  Index n = j["n"].get<Index>();
  Matrix m = matrix_from_json(j, n, n);
  double scale = m.cwiseAbs().maxCoeff();
  if (max_asymmetry(m) > kHermitianTol * std::max(1.0, scale))
    throw ParseError("field 're'/'im': payload is not Hermitian (asymmetry " + std::to_string(max_asymmetry(m)) + ")");
  return hermitian_part(m);
}

inline Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed matrix file '" + path + "': " + e.what());
  }
  return hermitian_from_json(j);
}

inline void write_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write matrix file '" + path + "'");
  out << matrix_to_json(m).dump() << "\n";
}

}  // namespace pwcalc
