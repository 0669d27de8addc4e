#pragma once

#include <cstdint>
#include <random>

#include "pwcalc/matrix_core.hpp"

namespace pwcalc {

// SplitMix64 finaliser; mixes (seed, stream) into an engine seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : eng_(mix_seed(seed, stream)) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    // 53-bit mantissa from the raw engine output keeps draws library-independent.
    double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int uniform_int(int lo, int hi) { return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  double normal() {
    // Box-Muller, avoids implementation-defined std::normal_distribution.
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  Complex cnormal() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }

  Matrix gaussian(Index rows, Index cols) {
    Matrix g(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) g(i, j) = cnormal();
    return g;
  }

  Vector unit_vector(Index n) {
    Vector v = gaussian(n, 1).col(0);
    return v / v.norm();
  }

  // Haar-ish unitary via QR with phase fix.
  Matrix unitary(Index n) { return isometry(n, n); }

  // n x k matrix with orthonormal columns.
  Matrix isometry(Index n, Index k) {
    Matrix g = gaussian(n, k);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, k);
    Matrix r = qr.matrixQR().topLeftCorner(k, k);
    for (Index j = 0; j < k; ++j) {
      Complex d = r(j, j);
      if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
  }

  // PSD with prescribed spectrum in a random basis.
  Matrix with_spectrum(const RealVector& spectrum) {
    Matrix u = unitary(spectrum.size());
    return from_eigen(u, spectrum);
  }

  // Well-conditioned PSD, eigenvalues log-uniform in [lo, hi].
  Matrix psd(Index n, double lo = 0.1, double hi = 3.0) {
    RealVector s(n);
    for (Index i = 0; i < n; ++i) s(i) = log_uniform(lo, hi);
    return with_spectrum(s);
  }

  // Rank-k PSD.
  Matrix psd_rank(Index n, Index k, double lo = 0.1, double hi = 3.0) {
    RealVector s = RealVector::Zero(n);
    for (Index i = 0; i < k; ++i) s(i) = log_uniform(lo, hi);
    return with_spectrum(s);
  }

  Matrix projection(Index n, Index k) {
    Matrix v = isometry(n, k);
    return hermitian_part(v * v.adjoint());
  }

  Matrix density(Index n) {
    Matrix g = gaussian(n, n);
    Matrix rho = hermitian_part(g * g.adjoint());
    return rho / rho.trace().real();
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace pwcalc
