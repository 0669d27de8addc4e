#include "test_util.hpp"

using namespace pwcalc;
using namespace pwcalc::testing;

TEST(Catalog, CornerValues) {
  auto sq = catalog("power", {2});
  EXPECT_EQ(*sq.f_at_1, 1.0);
  EXPECT_EQ(sq.beta(), ExtendedReal(0));
  EXPECT_EQ(sq.alpha(), inf());
  auto xl = catalog("tlogt");
  EXPECT_EQ(*xl.f_at_1, 0.0);
  EXPECT_EQ(xl.beta(), ExtendedReal(0));
  EXPECT_EQ(xl.alpha(), inf());
  auto nl = catalog("neglog");
  EXPECT_EQ(*nl.f_at_1, 0.0);
  EXPECT_EQ(nl.beta(), inf());
  EXPECT_EQ(nl.alpha(), ExtendedReal(0));
}

TEST(Catalog, RejectsUnknownAndNonConvexPowers) {
  EXPECT_THROW(catalog("nosuch"), DomainError);
  EXPECT_THROW(catalog("power", {3}), DomainError);
  EXPECT_THROW(catalog("power", {0.5}), DomainError);
  EXPECT_THROW(catalog("power"), DomainError);
  EXPECT_NO_THROW(catalog("power", {-1}));
}

TEST(Catalog, DeclaredLimitsMatchTheFunction) {
  for (const auto& f : {power_function(2), power_function(1.5), tlogt(), neglog(), power_function(-1), glambda(0.5),
                        square_minus(), affine(2, -1)}) {
    double a = f.alpha().is_infinite() ? kInf : f.alpha().value();
    double b = f.beta().is_infinite() ? kInf : f.beta().value();
    double at_large = f(1e8).finite() / 1e8, at_small = f(1e-12).finite();
    if (std::isinf(a))
      EXPECT_GT(at_large, 10) << f.name;
    else
      EXPECT_NEAR(at_large, a, 1e-3) << f.name;
    if (std::isinf(b))
      EXPECT_GT(at_small, 10) << f.name;
    else
      EXPECT_NEAR(at_small, b, 1e-5) << f.name;
    EXPECT_NEAR(f(1.0).finite(), *f.f_at_1, 1e-15) << f.name;
  }
}

TEST(Repr77, AffineCase) {
  IntegralRepr77 r;
  r.b = 1;
  auto f = from_repr77(r);
  EXPECT_NEAR(f(3).finite(), 2.0, 1e-15);
  EXPECT_EQ(f.alpha(), ExtendedReal(1));
  EXPECT_EQ(f.beta(), ExtendedReal(-1));
}

TEST(Repr77, QuadraticCase) {
  IntegralRepr77 r;
  r.c = 1;
  auto f = from_repr77(r);
  EXPECT_NEAR(f(3).finite(), 4.0, 1e-15);
  EXPECT_EQ(f.alpha(), inf());
  EXPECT_EQ(f.beta(), ExtendedReal(1));
}

TEST(Repr77, TlogtByQuadrature) {
  auto f = from_repr77(tlogt_repr77(200));
  double worst = 0;
  for (int i = 0; i <= 200; ++i) {
    double t = 0.1 * std::pow(100.0, i / 200.0);
    worst = std::max(worst, std::abs(f(t).finite() - t * std::log(t)));
  }
  EXPECT_LT(worst, 1e-8);
  EXPECT_EQ(f.alpha(), inf());
  EXPECT_NEAR(f.beta().finite(), 0.0, 1e-12);
}

TEST(Repr77, RejectsNegativeCoefficients) {
  IntegralRepr77 r;
  r.c = -1;
  EXPECT_THROW(from_repr77(r), PreconditionError);
  IntegralRepr77 bad;
  bad.mu.atoms.push_back({-1.0, 1.0});
  EXPECT_THROW(from_repr77(bad), PreconditionError);
}

TEST(Approximants, SquareMinusFirstStep) {
  IntegralRepr77 r;
  r.c = 1;
  auto ap = approximants(r, 1);
  for (double t : {0.0, 0.5, 2.0, 7.0}) EXPECT_NEAR(ap.f_n(t).finite(), (t - 1) * (t - 1) / (t + 1), 1e-15);
  EXPECT_DOUBLE_EQ(ap.alpha_n, 1.0);
  EXPECT_DOUBLE_EQ(ap.beta_n, 1.0);
  ASSERT_EQ(ap.nu_n.atoms.size(), 1u);
  EXPECT_DOUBLE_EQ(ap.nu_n.atoms[0].location, 1.0);
  EXPECT_DOUBLE_EQ(ap.nu_n.atoms[0].weight, 2.0);
}

TEST(Approximants, AffineIsFixed) {
  IntegralRepr77 r;
  r.b = 1;
  for (int n : {1, 3, 10}) {
    auto ap = approximants(r, n);
    EXPECT_TRUE(ap.nu_n.empty());
    EXPECT_NEAR(ap.f_n(2.5).finite(), 1.5, 1e-15);
  }
}

TEST(Approximants, IncreaseToTheFunction) {
  IntegralRepr77 r;
  r.a = 0.3;
  r.b = -0.5;
  r.c = 0.7;
  r.d = 0.2;
  r.mu.atoms = {{0.05, 1.0}, {0.5, 0.3}, {4.0, 0.8}, {50.0, 2.0}};
  auto f = from_repr77(r);
  for (double t : {0.01, 0.3, 2.0, 9.0}) {
    double prev = -kInf;
    for (int n : {1, 2, 5, 20, 100, 1000, 1000000}) {
      auto ap = approximants(r, n);
      double v = ap.f_n(t).finite();
      EXPECT_GE(v, prev - 1e-14);
      EXPECT_LE(v, f(t).finite() + 1e-12);
      EXPECT_NEAR(approximant_rewritten(ap, t), v, 1e-10 * std::max(1.0, std::abs(v)));
      prev = v;
    }
    EXPECT_NEAR(prev, f(t).finite(), 1e-3 * f(t).finite());
  }
}

TEST(Transpose, Elementary) {
  auto g = transpose(power_function(2));
  for (double t : {0.2, 1.0, 3.0}) EXPECT_NEAR(g(t).finite(), 1 / t, 1e-14);
  auto h = transpose(tlogt());
  for (double t : {0.2, 1.0, 3.0}) EXPECT_NEAR(h(t).finite(), -std::log(t), 1e-14);
  EXPECT_EQ(h.beta(), inf());
  EXPECT_EQ(h.alpha(), ExtendedReal(0));
  auto f = tlogt();
  auto ff = transpose(transpose(f));
  for (int i = 1; i < 50; ++i) {
    double t = 0.05 * i * i;
    EXPECT_NEAR(ff(t).finite(), f(t).finite(), 1e-12 * std::max(1.0, std::abs(f(t).finite())));
  }
}

TEST(Calculus, Elementary) {
  auto sq = calculus(power_function(2), diag({1, 3}));
  EXPECT_LT(max_diff(sq.to_matrix(), diag({1, 9})), 1e-14);
  auto nl = calculus(neglog(), diag({0, 1}));
  EXPECT_EQ(nl.infinity_dim(), 1);
  EXPECT_EQ(nl.quadratic_form(basis_vector(2, 0)), inf());
  EXPECT_NEAR(nl.quadratic_form(basis_vector(2, 1)).finite(), 0.0, 1e-15);
  auto xl = calculus(tlogt(), diag({1, std::exp(1.0)}));
  EXPECT_LT(max_diff(xl.to_matrix(), diag({0, std::exp(1.0)})), 1e-14);
}

TEST(Calculus, OutsideDomain) {
  EXPECT_THROW(calculus(tlogt(), diag({-1, 1})), DomainError);
  EXPECT_THROW(calculus(opmon_power(0.5), diag({-0.5, 2})), DomainError);
}

TEST(Calculus, UnitaryCovariance) {
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    Matrix a = rng.psd(4), u = rng.unitary(4);
    auto lhs = calculus(tlogt(), u * a * u.adjoint()).to_matrix();
    Matrix rhs = u * calculus(tlogt(), a).to_matrix() * u.adjoint();
    EXPECT_LT(max_diff(lhs, rhs), 1e-10);
  }
}

TEST(OperatorConvexity, SquarePasses) { EXPECT_TRUE(check_operator_convex(power_function(2), 4, 2, 300, 1).passed()); }

TEST(OperatorConvexity, CubeHasWitness) {
  auto rep = check_operator_convex(monomial(3), 4, 2, 300, 1);
  EXPECT_GT(rep.failures, 0);
  ASSERT_TRUE(rep.witness);
  EXPECT_TRUE(rep.witness->lhs.is_infinite() || rep.witness->lhs.value() > rep.witness->rhs.value());
}

TEST(OperatorConvexity, CatalogEntriesPass) {
  for (const auto& f : {tlogt(), neglog(), power_function(1.5), power_function(-1), glambda(2.0), gn(5.0)})
    EXPECT_TRUE(check_operator_convex(f, 3, 2, 200, 4).passed()) << f.name;
}

TEST(OperatorConvexity, InfiniteExceptOneIsVacuous) {
  EXPECT_TRUE(check_operator_convex(infinite_except_one(), 3, 2, 100, 2).passed());
}

TEST(Boundary, SquarePerspectiveDiagonal) {
  ExtendedFunction d;
  d.name = "t^2/(1-t)";
  d.domain = Interval::unit();
  d.eval = [](double t) -> ExtendedReal { return t >= 1 ? inf() : ExtendedReal(t * t / (1 - t)); };
  EXPECT_TRUE(check_theorem37_boundary(d, 0, 1, 50).passed);
}

TEST(Boundary, DroppedEndpointValueFails) {
  ExtendedFunction d;
  d.name = "t^2 with f(1)=0";
  d.domain = Interval::unit();
  d.eval = [](double t) -> ExtendedReal { return t >= 1 ? 0.0 : t * t; };
  auto rep = check_theorem37_boundary(d, 0, 1, 50);
  EXPECT_FALSE(rep.passed);
  EXPECT_EQ(rep.value_at_b, ExtendedReal(0));
  EXPECT_NEAR(rep.limit_at_b.finite(), 1.0, 1e-6);
}

TEST(Boundary, TlogtPerspectiveDiagonal) {
  EXPECT_TRUE(check_theorem37_boundary(diagonal_function(perspective_of(tlogt())), 0, 1, 50).passed);
}

TEST(Pmi, Elementary) {
  EXPECT_TRUE(check_pmi(power_function(2), 200).passed());
  auto rep = check_pmi(affine(1, 1), 200);
  EXPECT_FALSE(rep.passed());
  ASSERT_TRUE(rep.witness);
  auto [t, p] = *rep.witness;
  EXPECT_LT(std::pow(t, p) + 1, std::pow(t + 1, p));
  EXPECT_TRUE(check_pmi(pmi_max1(), 200).passed());
}
