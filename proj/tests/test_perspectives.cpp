#include "oracle_values.hpp"
#include "test_util.hpp"

using namespace pwcalc;
using namespace pwcalc::testing;

namespace {

Matrix proj_p() { return diag({1, 0}); }
Matrix proj_q() { return 0.5 * ones2(); }

void expect_same_form(const ExtendedSelfAdjoint& x, const ExtendedSelfAdjoint& y, double rel) {
  ASSERT_EQ(x.infinity_dim(), y.infinity_dim());
  double slack = rel * std::max(form_scale(x), form_scale(y));
  EXPECT_TRUE(approx_equal(x, y, slack));
}

}  // namespace

TEST(PerspectiveOf, DiagonalsAndCorners) {
  auto sq = perspective_of(power_function(2));
  EXPECT_NEAR(sq.diagonal(0.3).finite(), 0.09 / 0.7, 1e-15);
  EXPECT_EQ(*sq.at_one, inf());
  EXPECT_EQ(*sq.at_zero, ExtendedReal(0));
  auto xl = perspective_of(tlogt());
  EXPECT_NEAR(xl.diagonal(0.3).finite(), 0.3 * std::log(0.3 / 0.7), 1e-15);
  EXPECT_EQ(*xl.at_one, inf());
  EXPECT_EQ(*xl.at_zero, ExtendedReal(0));
  auto nl = perspective_of(neglog());
  EXPECT_NEAR(nl.diagonal(0.3).finite(), -0.7 * std::log(0.3 / 0.7), 1e-15);
  EXPECT_EQ(*nl.at_one, ExtendedReal(0));
  EXPECT_EQ(*nl.at_zero, inf());
  ExtendedFunction bare;
  bare.name = "bare";
  bare.eval = [](double t) -> ExtendedReal { return t; };
  EXPECT_THROW(perspective_of(bare), PreconditionError);
}

TEST(Perspective, ExamplePair) {
  auto r = perspective_apply(power_function(2), ones2(), diag({1, 2}));
  EXPECT_LT(max_diff(r.value.to_matrix(), 1.5 * ones2()), 1e-9);
  EXPECT_NEAR(r.value.norm().finite(), 3.0, 1e-9);
  EXPECT_EQ(r.classification, Classification::bounded);
}

TEST(Perspective, EqualArgumentsGiveFAtOne) {
  Rng rng(20);
  Matrix a = rng.psd_rank(4, 3);
  for (const auto& f : {power_function(2), tlogt(), neglog(), glambda(0.5), affine(2, 1)}) {
    auto v = perspective(f, a, a);
    ASSERT_TRUE(v.is_bounded()) << f.name;
    EXPECT_LT(max_diff(v.to_matrix(), *f.f_at_1 * a), 1e-10) << f.name;
  }
  auto d = perspective(power_function(2), diag({1, 2}), diag({1, 2}));
  EXPECT_LT(max_diff(d.to_matrix(), diag({1, 2})), 1e-14);
  EXPECT_NEAR(d.norm().finite(), 2.0, 1e-14);
}

TEST(EpsilonLimit, NondecreasingForTlogt) {
  Rng rng(9);
  Matrix a = rng.psd_rank(3, 2), b = rng.psd_rank(3, 2);
  auto chain = epsilon_limit(tlogt(), a, b);
  Matrix rho = rng.density(3);
  double prev = -kInf;
  for (const auto& e : chain) {
    double v = (rho * e.value).trace().real();
    EXPECT_GE(v, prev - 1e-10);
    prev = v;
  }
}

TEST(EpsilonLimit, BoundedExampleConverges) {
  auto chain = epsilon_limit(square_minus(), ones2(), diag({1, 2}));
  // (t-1)^2 perspective is phi_{t^2} - 2A + B
  Matrix want = 1.5 * ones2() - 2 * ones2() + diag({1, 2});
  EXPECT_LT(max_diff(chain.back().value, want), 1e-6);
}

TEST(EpsilonLimit, SingularDirectionDiverges) {
  auto chain = epsilon_limit(square_minus(), proj_p(), proj_q());
  auto v = perspective(square_minus(), proj_p(), proj_q());
  ASSERT_GT(v.infinity_dim(), 0);
  Vector w = v.infinity_part().basis().col(0);
  EXPECT_GE(w.dot(chain.back().value * w).real(), 1e6);
}

TEST(EpsilonLimit, RejectsBadSchedule) {
  EXPECT_THROW(epsilon_limit(tlogt(), ones2(), ones2(), {1e-2, 1e-1}), PreconditionError);
  EXPECT_THROW(epsilon_limit(tlogt(), ones2(), ones2(), {0.0}), PreconditionError);
}

TEST(Connection, Elementary) {
  EXPECT_LT(max_diff(connection(geometric(), diag({1, 4}), Matrix::Identity(2, 2)), diag({1, 2})), 1e-14);
  EXPECT_LT(max_diff(connection(parallel_generator(), diag({1, 2}), diag({2, 2})), diag({2.0 / 3, 1})), 1e-14);
  EXPECT_THROW(connection(tlogt(), diag({1, 2}), diag({2, 2})), PreconditionError);
}

TEST(Connection, MatchesHighPrecisionOracle) {
  using namespace oracle;
  EXPECT_LT(max_diff(connection(geometric(), A3(), B3()), kGeometricMean()), 1e-10);
  EXPECT_LT(max_diff(connection(parallel_generator(), A3(), B3()), kParallelSum()), 1e-10);
  EXPECT_LT(max_diff(parallel_sum(A3(), B3()), kParallelSum()), 1e-10);
}

TEST(Connection, TransformerInequality) {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    Matrix a = t % 3 ? rng.psd(3) : rng.psd_rank(3, 2), b = rng.psd(3), c = rng.gaussian(3, 3);
    for (const auto& h : {geometric(), parallel_generator(), harmonic_generator()}) {
      Matrix lhs = c.adjoint() * connection(h, a, b) * c;
      Matrix rhs = connection(h, c.adjoint() * a * c, c.adjoint() * b * c);
      double scale = std::max(1.0, spectral_norm(rhs));
      EXPECT_GE(eigh(hermitian_part(rhs - lhs)).values(0), -1e-8 * scale);
    }
  }
}

TEST(ParallelSum, Diagonal) {
  EXPECT_LT(max_diff(parallel_sum(diag({1, 0, 3}), diag({3, 0, 1})), diag({0.75, 0, 0.75})), 1e-14);
}

TEST(ParallelSum, ProjectionsScaleTheMeet) {
  Rng rng(24);
  Matrix pb(4, 2), qb(4, 2);
  // P and Q share one direction; their other directions are in general position.
  Matrix base = rng.unitary(4);
  pb << base.col(0), base.col(1);
  qb << base.col(0), (base.col(2) + base.col(1)) / std::sqrt(2.0);
  Matrix p = pb * pb.adjoint(), q = qb * qb.adjoint();
  Matrix meet = base.col(0) * base.col(0).adjoint();
  for (double n : {1.0, 10.0, 1000.0})
    EXPECT_LT(max_diff(parallel_sum(p, n * q), n / (1 + n) * meet), 1e-10) << n;
}

TEST(ParallelSum, SingularClosedForm) {
  for (double n : {1.0, 10.0, 1e4}) EXPECT_LT(max_entry(parallel_sum(ones2(), n * diag({1, 0}))), 1e-12) << n;
}

TEST(ParallelSum, StableUnderTinyPerturbation) {
  // A+B is singular; a 2^-40 nudge must move A:B by O(2^-40)
  Rng rng(26);
  for (int t = 0; t < 20; ++t) {
    Matrix a = rng.psd_rank(4, 2), b = rng.psd_rank(4, 1), d = rng.psd(4), e = rng.psd(4);
    double w = std::ldexp(1.0, -40);
    EXPECT_LT(max_diff(parallel_sum(a + w * d, b + w * e), parallel_sum(a, b)), 1e-9) << t;
  }
}

TEST(Lebesgue, InvertibleB) {
  Rng rng(25);
  auto d = lebesgue_decomposition(rng.psd(3), rng.psd(3));
  EXPECT_LT(max_entry(d.singular_part), 1e-12);
}

TEST(Lebesgue, FullySingular) {
  auto d = lebesgue_decomposition(ones2(), diag({1, 0}));
  EXPECT_LT(max_entry(d.ac_part), 1e-12);
  EXPECT_LT(max_diff(d.singular_part, ones2()), 1e-12);
}

TEST(Lebesgue, ProjectionsGiveDifferenceWithMeet) {
  auto d = lebesgue_decomposition(proj_p(), proj_q());
  EXPECT_LT(max_diff(d.singular_part, proj_p()), 1e-10);
  Matrix p = diag({1, 1, 0}), q = diag({1, 0, 1});
  auto e = lebesgue_decomposition(p, q);
  EXPECT_LT(max_diff(e.singular_part, diag({0, 1, 0})), 1e-10);
  EXPECT_LT(max_diff(e.ac_part, diag({1, 0, 0})), 1e-10);
}

TEST(Lebesgue, RankDeficientPairsAreFinite) {
  Rng rng(27);
  for (int t = 0; t < 30; ++t) {
    Matrix a = rng.psd_rank(6, 1 + t % 3), b = rng.psd_rank(6, 1 + t % 4);
    auto d = lebesgue_decomposition(a, b);
    ASSERT_TRUE(d.ac_part.allFinite()) << t;
    EXPECT_LT(max_diff(d.ac_part, parallel_sum(a, 1e8 * b)), 1e-5 * spectral_norm(a)) << t;
    EXPECT_LT(max_diff(d.ac_part + d.singular_part, a), 1e-10) << t;
  }
}

TEST(Lebesgue, MatchesHighPrecisionLimit) {
  using namespace oracle;
  auto d = lebesgue_decomposition(AS(), BS());
  EXPECT_LT(max_diff(d.ac_part, kAbsCont()), 1e-10);
  EXPECT_LT(max_diff(d.ac_part + d.singular_part, AS()), 1e-10);
}

TEST(AbsolutelyContinuous, Elementary) {
  Rng rng(26);
  EXPECT_TRUE(is_absolutely_continuous(rng.psd(3), rng.psd(3)));
  EXPECT_FALSE(is_absolutely_continuous(diag({1, 0}), Matrix::Zero(2, 2)));
  EXPECT_FALSE(is_absolutely_continuous(proj_p(), proj_q()));
  EXPECT_TRUE(is_absolutely_continuous(diag({1, 0}), diag({2, 0})));
}

TEST(MaxDivergence, Elementary) {
  Rng rng(27);
  Matrix rho = rng.density(3);
  EXPECT_NEAR(max_f_divergence(tlogt(), rho, rho).finite(), 0.0, 1e-14);
  EXPECT_NEAR(max_f_divergence(tlogt(), diag({0.5, 0.5}), diag({0.25, 0.75})).finite(), oracle::kTlogtDiv, 1e-14);
  EXPECT_EQ(max_f_divergence(power_function(2), proj_p(), proj_q()), inf());
  EXPECT_NEAR(max_f_divergence(tlogt(), oracle::A3(), oracle::B3()).finite(), oracle::kTraceTlogt, 1e-10);
}

TEST(MaxDivergence, InvertibleCrossCheck) {
  Rng rng(28);
  for (int t = 0; t < 50; ++t) {
    Matrix a = t % 2 ? rng.psd(4) : rng.psd_rank(4, 2), b = rng.psd(4);
    for (const auto& f : {power_function(2), tlogt(), power_function(1.5)}) {
      double x = max_f_divergence(f, a, b).finite(), y = divergence_invertible(f, a, b).finite();
      EXPECT_NEAR(x, y, 1e-9 * std::max(1.0, std::abs(y))) << f.name;
    }
  }
}

TEST(EssentialPart, Elementary) {
  auto e = essential_part(power_function(2), proj_p(), proj_q());
  ASSERT_EQ(e.dim(), 1);
  EXPECT_NEAR(std::abs(e.basis()(1, 0)), 1.0, 1e-12);
  Rng rng(29);
  EXPECT_EQ(essential_part(tlogt(), rng.psd_rank(3, 1), rng.psd(3)).dim(), 3);
  EXPECT_EQ(essential_part(glambda(2.0), rng.psd_rank(3, 1), rng.psd_rank(3, 1)).dim(), 3);
}

TEST(T2Bound, Elementary) {
  auto b = t2_bound(diag({1, 2}), diag({1, 2}));
  EXPECT_TRUE(b.bounded);
  EXPECT_NEAR(b.lambda_min.finite(), 2.0, 1e-14);
  EXPECT_FALSE(t2_bound(diag({1, 0}), diag({0, 1})).bounded);
  auto o = t2_bound(oracle::A3(), oracle::B3());
  EXPECT_NEAR(o.lambda_min.finite(), oracle::kT2Lambda, 1e-10);
  EXPECT_TRUE(o.certified_upper);
  EXPECT_TRUE(o.certified_strict);
}

TEST(T2Bound, ConstructedPairs) {
  Rng rng(30);
  for (int t = 0; t < 50; ++t) {
    Matrix b = rng.psd_rank(4, 3), bh = psd_sqrt(b), c = rng.psd(4);
    Matrix a = hermitian_part(bh * c * bh);
    auto r = t2_bound(a, b);
    ASSERT_TRUE(r.bounded);
    EXPECT_TRUE(r.certified_upper);
    EXPECT_TRUE(r.certified_strict);
    double norm = perspective(power_function(2), a, b).norm().finite();
    EXPECT_NEAR(r.lambda_min.finite(), norm, 1e-7 * std::max(1.0, norm));
  }
}

TEST(BoundednessChain, Elementary) {
  Rng rng(31);
  auto r = boundedness_chain(2.0, rng.psd(3), rng.psd(3));
  EXPECT_TRUE(r.a && r.b && r.c && r.d && r.e);
  auto s = boundedness_chain(2.0, proj_p(), proj_q());
  EXPECT_FALSE(s.a);
  EXPECT_FALSE(s.b);
  EXPECT_TRUE(s.consistent());
}

TEST(BoundednessChain, NoImplicationViolated) {
  for (int t = 0; t < 100; ++t) {
    RandomSpec spec;
    spec.profile = t % 2 ? Profile::rank_deficient : Profile::projection;
    spec.seed = static_cast<std::uint64_t>(t);
    auto [a, b] = gen_pair(spec);
    Rng rng(t);
    double alpha = rng.uniform(1.05, 2.0);
    auto r = boundedness_chain(alpha, a, b, static_cast<std::uint64_t>(t));
    EXPECT_TRUE(r.consistent()) << t << ": " << (r.violations.empty() ? "" : r.violations[0]);
  }
}

TEST(AhInequality, Elementary) {
  Rng rng(32);
  Matrix a = rng.psd(3), b = rng.psd(3);
  auto one = check_ah_inequality(power_function(2), a, b, {1.0});
  EXPECT_NEAR(one[0].lhs.finite(), one[0].rhs.finite(), 1e-10 * one[0].rhs.finite());
  for (const auto& e : check_ah_inequality(power_function(2), a, b, {0.5, 0.25})) EXPECT_TRUE(e.holds);
  for (int t = 0; t < 20; ++t) {
    Matrix x = rng.psd(3), y = rng.psd(3);
    for (const auto& e : check_ah_inequality(power_function(-1), x, y, {0.3, 0.7})) EXPECT_TRUE(e.holds);
  }
  EXPECT_THROW(check_ah_inequality(tlogt(), a, b, {0.5}), PreconditionError);
}

TEST(PositiveMaps, UnitaryConjugationIsEquality) {
  Rng rng(33);
  Matrix a = rng.psd_rank(3, 2), b = rng.psd(3), u = rng.unitary(3);
  KrausList k{u};
  auto lhs = perspective(tlogt(), map_matrix(k, a), map_matrix(k, b));
  auto rhs = map_extended(k, perspective(tlogt(), a, b));
  expect_same_form(lhs, rhs, 1e-9);
}

TEST(PositiveMaps, PinchingIsDataProcessing) {
  Rng rng(34);
  KrausList pinch;
  for (Index i = 0; i < 3; ++i) pinch.push_back(basis_vector(3, i) * basis_vector(3, i).adjoint());
  for (int t = 0; t < 20; ++t) {
    Matrix a = rng.density(3), b = rng.density(3);
    auto rep = check_positive_map_monotonicity(tlogt(), pinch, a, b);
    EXPECT_TRUE(rep.form_holds);
    EXPECT_EQ(rep.state_failures, 0);
    double before = max_f_divergence(tlogt(), a, b).finite();
    double after = max_f_divergence(tlogt(), map_matrix(pinch, a), map_matrix(pinch, b)).finite();
    EXPECT_LE(after, before + 1e-10);
  }
}

TEST(PositiveMaps, StateFunctionalIsStrictOnExample) {
  Rng rng(35);
  Matrix a = ones2(), b = diag({1, 2});
  auto sq = perspective_of(power_function(2));
  double value_norm = perspective(power_function(2), a, b).norm().finite();
  double sup = 0;
  for (int i = 0; i < 10000; ++i) {
    Vector x = rng.unit_vector(2);
    KrausList k{Matrix(x.adjoint())};
    auto rep = check_positive_map_monotonicity(power_function(2), k, a, b, 2, static_cast<std::uint64_t>(i));
    ASSERT_TRUE(rep.form_holds);
    sup = std::max(sup, sq(x.dot(a * x).real(), x.dot(b * x).real()).finite());
  }
  EXPECT_LE(sup, oracle::kCor711Sup + 1e-12);
  EXPECT_GT(sup, oracle::kCor711Sup - 1e-3);
  EXPECT_LT(sup, value_norm - 1e-3);
}
