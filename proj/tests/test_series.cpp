#include <gtest/gtest.h>

#include "support.hpp"

using namespace skewtower;
using skewtower::support::kind_of;
using skewtower::support::poly;

namespace {

TowerPtr one_variable(std::int64_t p, int precision) {
  TowerBuilder b("k[[x]]", FieldDescriptor::prime(p), precision);
  b.adjoin("x");
  return b.build();
}

}  // namespace

TEST(NormalizeAdd, Examples) {
  const auto t = one_variable(3, 8);
  EXPECT_TRUE((poly(t, "x") + poly(t, "-x")).is_zero());
  EXPECT_EQ(poly(t, "x + x^2") + poly(t, "x^2"), poly(t, "x + 2*x^2"));
  const auto t2 = one_variable(2, 6);
  EXPECT_TRUE((poly(t2, "x^5") + poly(t2, "x^5")).is_zero());
}

TEST(NormalizeAdd, Mismatches) {
  const auto t = one_variable(3, 8);
  const auto u = one_variable(3, 8);
  EXPECT_EQ(kind_of([&] { (void)(Series::generator(t, 0) + Series::generator(u, 0)); }), ErrorKind::TowerMismatch);
  EXPECT_EQ(kind_of([&] { (void)(Series::generator(t, 0, 5) + Series::generator(t, 0, 6)); }),
            ErrorKind::PrecisionMismatch);
  EXPECT_EQ(kind_of([&] { Series(t, 9); }), ErrorKind::PrecisionMismatch);
}

TEST(Multiply, E1Commutator) {
  const auto e1 = build_e1();
  EXPECT_EQ(poly(e1, "y") * poly(e1, "x"), poly(e1, "x*y + x^2"));
}

TEST(Multiply, E2QCommutative) {
  const auto e2 = builtin_tower("@e2");
  EXPECT_EQ(poly(e2, "x2") * poly(e2, "x1"), poly(e2, "2*x1*x2"));
}

TEST(Multiply, IdentityAndScalars) {
  std::mt19937_64 rng(11);
  for (const auto& t : support::example_towers(6)) {
    for (int i = 0; i < 20; ++i) {
      const Series a = support::random_series(t, 6, rng);
      EXPECT_EQ(Series::one(t, 6) * a, a);
      EXPECT_EQ(a * Series::one(t, 6), a);
      const Series c = Series::constant(t, 2, 6);
      EXPECT_EQ(c * a, a * c);
    }
  }
}

TEST(Multiply, E1TwoRewrites) {
  // Frozen from the word-rewriting oracle: y x^2 = x^2 y + 2 x^3 mod m^5.
  const auto e1 = build_e1(5);
  EXPECT_EQ(poly(e1, "y") * poly(e1, "x^2"), poly(e1, "x^2*y + 2*x^3"));
}

TEST(Multiply, E1CubeOfY) {
  // Oracle: y^3 x = x^4 + x^3 y + 3 x^2 y^2 + x y^3 mod m^8.
  const auto e1 = build_e1(8);
  EXPECT_EQ(poly(e1, "y^3") * poly(e1, "x"), poly(e1, "x^4 + x^3*y + 3*x^2*y^2 + x*y^3"));
}

TEST(PowerExpand, OneStep) {
  const auto e1 = build_e1();
  const Series a = poly(e1, "x + 3*x^2");
  const auto r = power_expand(1, a);
  EXPECT_EQ(r.value, apply_sigma(1, a) * poly(e1, "y") + apply_delta(1, a));
  ASSERT_EQ(r.trace.size(), 2u);
  EXPECT_EQ(r.trace[0].word.letters, "S");
  EXPECT_EQ(r.trace[0].word.x_exponent, 1);
  EXPECT_EQ(r.trace[1].word.letters, "D");
  EXPECT_EQ(r.trace[1].word.x_exponent, 0);
}

TEST(PowerExpand, TwoSteps) {
  const auto e4 = builtin_tower("@e4");
  const Series a = poly(e4, "Y + Z^2");
  auto s = [](const Series& b) { return apply_sigma(2, b); };
  auto d = [](const Series& b) { return apply_delta(2, b); };
  const Series x = poly(e4, "X");
  const Series expected = s(s(a)) * x * x + s(d(a)) * x + d(s(a)) * x + d(d(a));
  const auto r = power_expand(2, a);
  EXPECT_EQ(r.value, expected);
  std::vector<std::string> words;
  for (const auto& e : r.trace) words.push_back(e.word.letters);
  EXPECT_EQ(words, (std::vector<std::string>{"SS", "SD", "DS", "DD"}));
}

TEST(PowerExpand, ThreeStepsMatchesMultiply) {
  const auto e1 = build_e1();
  const auto r = power_expand(3, poly(e1, "x"));
  EXPECT_EQ(r.trace.size(), 8u);
  EXPECT_EQ(r.value, poly(e1, "y^3") * poly(e1, "x"));
  for (const auto& e : r.trace) {
    EXPECT_EQ(e.word.x_exponent, std::count(e.word.letters.begin(), e.word.letters.end(), 'S'));
  }
}

TEST(PowerExpand, RejectsTopGenerator) {
  const auto e1 = build_e1();
  EXPECT_EQ(kind_of([&] { power_expand(2, poly(e1, "y")); }), ErrorKind::InvalidOperand);
}

TEST(ApplySigma, E3Swap) {
  const auto e3 = builtin_tower("@e3");
  EXPECT_EQ(apply_sigma(2, poly(e3, "Y*Z")), poly(e3, "2*Y*Z"));
  EXPECT_EQ(apply_sigma(2, poly(e3, "Y")), poly(e3, "Z"));
}

TEST(ApplySigma, IdentityImages) {
  const auto e1 = build_e1();
  const Series a = poly(e1, "1 + x + 4*x^3");
  EXPECT_EQ(apply_sigma(1, a), a);
}

TEST(ApplySigma, E4) {
  const auto e4 = builtin_tower("@e4");
  EXPECT_EQ(apply_sigma(2, poly(e4, "Y")), poly(e4, "Y + (1+Y)*Z^3"));
  EXPECT_EQ(kind_of([&] { apply_sigma(2, poly(e4, "X")); }), ErrorKind::InvalidOperand);
}

TEST(ApplyDelta, E1Leibniz) {
  // Oracle: d(x^2) = y x^2 - x^2 y = 2 x^3.
  const auto e1 = build_e1();
  EXPECT_EQ(apply_delta(1, poly(e1, "x^2")), poly(e1, "2*x^3"));
}

TEST(ApplyDelta, ZeroImages) {
  const auto e2 = builtin_tower("@e2");
  EXPECT_TRUE(apply_delta(1, poly(e2, "x1 + x1^4")).is_zero());
}

TEST(ApplyDelta, E4) {
  const auto e4 = builtin_tower("@e4");
  EXPECT_EQ(apply_delta(2, poly(e4, "Y")), poly(e4, "(1+Y)*Z^3"));
}

TEST(SeriesInverse, Examples) {
  const auto t = one_variable(7, 4);
  EXPECT_EQ(series_inverse(poly(t, "1 + x")), poly(t, "1 - x + x^2 - x^3"));
  EXPECT_EQ(series_inverse(Series::constant(t, 3)), Series::constant(t, 5));
  EXPECT_EQ(kind_of([&] { series_inverse(poly(t, "x")); }), ErrorKind::NotAUnit);
}

TEST(SeriesInverse, TwoSidedInNoncommutativeTowers) {
  std::mt19937_64 rng(5);
  for (const auto& t : support::example_towers(6)) {
    for (int i = 0; i < 10; ++i) {
      const Series a = Series::constant(t, 1, 6) + support::random_series(t, 6, rng, 4, 1);
      const Series b = series_inverse(a);
      EXPECT_EQ(a * b, Series::one(t, 6));
      EXPECT_EQ(b * a, Series::one(t, 6));
    }
  }
}

TEST(Valuation, MAdic) {
  const auto e1 = build_e1();
  EXPECT_EQ(valuation_m_adic(poly(e1, "x^2 + x^3")), 2);
  EXPECT_EQ(valuation_m_adic(Series::zero(e1)), kInfiniteValuation);
  EXPECT_EQ(valuation_m_adic(poly(e1, "y*x - x*y")), 2);
}

TEST(Valuation, F) {
  const auto e1 = build_e1();
  EXPECT_EQ(valuation_f(poly(e1, "y")), 1);
  EXPECT_EQ(valuation_f(poly(e1, "x")), 2);
  EXPECT_EQ(valuation_f(poly(e1, "x^2")), 4);
  EXPECT_EQ(valuation_f(poly(e1, "y*x - x*y")), 4);
  EXPECT_EQ(valuation_f(poly(e1, "x*y")), 3);
  EXPECT_EQ(valuation_f(Series::zero(e1)), kInfiniteValuation);
}

TEST(Engine, NoDegreeLoweringOnExamples) {
  // The engine throws DegreeLowering if a rewrite ever lowers degree.
  std::mt19937_64 rng(3);
  for (const auto& t : support::example_towers(7)) {
    for (int i = 0; i < 10; ++i) {
      const Series a = support::random_series(t, 7, rng), b = support::random_series(t, 7, rng);
      EXPECT_NO_THROW((void)(a * b));
    }
  }
}

TEST(Engine, RationalCoefficients) {
  TowerBuilder b("rational", FieldDescriptor::rationals(), 6);
  b.adjoin("x");
  b.adjoin("y", {}, {{"x", poly(b.current(), "x^2/2")}});
  const auto t = b.build();
  EXPECT_EQ(poly(t, "y") * poly(t, "x"), poly(t, "x*y + 1/2*x^2"));
  EXPECT_EQ(apply_delta(1, poly(t, "x^2")), poly(t, "x^3"));
}
