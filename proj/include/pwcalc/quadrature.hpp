#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pwcalc/scalar_functions.hpp"

namespace pwcalc {

struct GaussRule {
  std::vector<double> nodes;    // in (0,1)
  std::vector<double> weights;  // for the weight s^b (1-s)^a on (0,1)
};

// Golub-Welsch for the Jacobi weight (1-x)^a (1+x)^b, mapped to s = (1+x)/2.
inline GaussRule gauss_jacobi01(int n, double a, double b) {
  if (n < 1) throw PreconditionError("gauss_jacobi01: need at least one node");
  if (!(a > -1 && b > -1)) throw PreconditionError("gauss_jacobi01: exponents must exceed -1");
  Eigen::VectorXd diag(n), off(n > 1 ? n - 1 : 0);
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    double s = 2.0 * k + ab;
    diag(k) = (k == 0) ? (b - a) / (ab + 2) : (b * b - a * a) / (s * (s + 2));
  }
  for (int k = 1; k < n; ++k) {
    double s = 2.0 * k + ab;
    double beta;
    if (k == 1)
      beta = 4.0 * (1 + a) * (1 + b) / ((2 + ab) * (2 + ab) * (3 + ab));
    else
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1) * (s - 1));
    off(k - 1) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw ConvergenceError("gauss_jacobi01: tridiagonal eigensolver failed", 30L * n);
  const double mu0 = std::exp((ab + 1) * std::log(2.0) + std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(ab + 2));
  const double to01 = std::pow(2.0, -(ab + 1));
  GaussRule r;
  for (int i = 0; i < n; ++i) {
    double v0 = es.eigenvectors()(0, i);
    r.nodes.push_back((1 + es.eigenvalues()(i)) / 2);
    r.weights.push_back(mu0 * v0 * v0 * to01);
  }
  return r;
}

inline GaussRule gauss_legendre01(int n) { return gauss_jacobi01(n, 0.0, 0.0); }

enum class QuadratureKind { t_alpha, tlogt, tlogt_repr77 };

// Continuous measures on (0,inf) realised as weighted atoms under
// lambda = s/(1-s).
//   t_alpha(alpha): sin((alpha-1)pi)/pi * lambda^(alpha-2) dlambda, 1 < alpha < 2
//   tlogt:          dlambda (t log t = int t/(1+l) - t/(t+l) dl)
//   tlogt_repr77:   lambda/(1+lambda)^2 dlambda
inline Measure make_quadrature(QuadratureKind kind, int nodes, double alpha = 1.5) {
  if (nodes < 16) throw PreconditionError("make_quadrature: need at least 16 nodes");
  Measure m;
  switch (kind) {
    case QuadratureKind::t_alpha: {
      if (!(alpha > 1 && alpha < 2)) throw PreconditionError("make_quadrature: t_alpha needs 1 < alpha < 2");
      // The endpoint singularity s^(alpha-2) (1-s)^(-alpha) is absorbed by a
      // Gauss-Jacobi weight; the leftover factor is 1/(1-s).
      auto g = gauss_jacobi01(nodes, 1 - alpha, alpha - 2);
      double c = std::sin((alpha - 1) * M_PI) / M_PI;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        double s = g.nodes[i];
        m.atoms.push_back({s / (1 - s), c * g.weights[i] / (1 - s)});
      }
      m.declared_mass = inf();
      m.declared_inverse_moment = inf();
      m.rule = "gauss-jacobi t_alpha(" + ExtendedReal(alpha).to_string() + ")";
      break;
    }
    case QuadratureKind::tlogt: {
      auto g = gauss_legendre01(nodes);
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        double s = g.nodes[i];
        m.atoms.push_back({s / (1 - s), g.weights[i] / ((1 - s) * (1 - s))});
      }
      m.declared_mass = inf();
      m.declared_inverse_moment = inf();
      m.rule = "gauss-legendre tlogt";
      break;
    }
    case QuadratureKind::tlogt_repr77: {
      auto g = gauss_legendre01(nodes);
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        double s = g.nodes[i];
        m.atoms.push_back({s / (1 - s), g.weights[i] * s / (1 - s)});
      }
      m.declared_mass = inf();
      m.declared_inverse_moment = 1.0;
      m.rule = "gauss-legendre tlogt_repr77";
      break;
    }
  }
  return m;
}

// t log t = (t-1) + int (t-1)^2/(t+l) * l/(1+l)^2 dl
inline IntegralRepr77 tlogt_repr77(int nodes = 200) {
  IntegralRepr77 r;
  r.b = 1.0;
  r.mu = make_quadrature(QuadratureKind::tlogt_repr77, nodes);
  return r;
}

// t^alpha = int t^2/(t+l) dnu for 1 < alpha < 2
inline IntegralRepr97 t_alpha_repr97(double alpha, int nodes = 200) {
  IntegralRepr97 r;
  r.nu = make_quadrature(QuadratureKind::t_alpha, nodes, alpha);
  return r;
}

// (t-1)^2 as a representation with c = 1.
inline IntegralRepr77 square_minus_repr77() {
  IntegralRepr77 r;
  r.c = 1.0;
  return r;
}

}  // namespace pwcalc
