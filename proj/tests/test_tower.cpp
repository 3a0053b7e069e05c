#include <gtest/gtest.h>

#include "support.hpp"

using namespace skewtower;
using skewtower::support::kind_of;
using skewtower::support::poly;

namespace {

/// x2 x1 = q x1 x2 over F_p, then a top step with the given images.
ErrorKind top_step_error(std::int64_t p, std::int64_t q, const std::string& sigma1, const std::string& sigma2,
                         const std::string& delta1) {
  return kind_of([&] {
    TowerBuilder b("probe", FieldDescriptor::prime(p));
    b.adjoin("x1");
    b.adjoin("x2", {{"x1", poly(b.current(), std::to_string(q) + "*x1")}});
    TowerBuilder::Images sigma, delta;
    if (!sigma1.empty()) sigma.emplace_back("x1", poly(b.current(), sigma1));
    if (!sigma2.empty()) sigma.emplace_back("x2", poly(b.current(), sigma2));
    if (!delta1.empty()) delta.emplace_back("x1", poly(b.current(), delta1));
    b.adjoin("z", sigma, delta);
  });
}

}  // namespace

TEST(Validate, E3IsValid) {
  const auto r = validate_tower(builtin_tower("@e3"));
  ASSERT_EQ(r.steps.size(), 3u);
  EXPECT_EQ(r.steps[2].generator, "X");
  EXPECT_EQ(r.steps[2].images_checked, 2);
  EXPECT_EQ(r.steps[2].pairs_checked, 1);
  EXPECT_TRUE(r.steps[2].linear_part_invertible);
}

TEST(Validate, NonLocalSigma) {
  const auto kind = kind_of([] {
    TowerBuilder b("bad", FieldDescriptor::prime(5));
    b.adjoin("x");
    b.adjoin("y", {{"x", poly(b.current(), "1 + x")}});
  });
  EXPECT_EQ(kind, ErrorKind::NonLocalSigma);
}

TEST(Validate, NonLocalDelta) {
  const auto kind = kind_of([] {
    TowerBuilder b("bad", FieldDescriptor::prime(5));
    b.adjoin("x");
    b.adjoin("y", {}, {{"x", poly(b.current(), "x")}});
  });
  EXPECT_EQ(kind, ErrorKind::NonLocalDelta);
}

TEST(Validate, SwapIsInconsistentWhenQSquaredIsNotOne) {
  // s(x2 x1) = s(q x1 x2) forces q^2 = 1; over F_5 with q = 2 it fails.
  EXPECT_EQ(top_step_error(5, 2, "x2", "x1", ""), ErrorKind::InconsistentSigma);
  EXPECT_NO_THROW({
    TowerBuilder b("ok", FieldDescriptor::prime(5));
    b.adjoin("x1");
    b.adjoin("x2", {{"x1", poly(b.current(), "4*x1")}});
    b.adjoin("z", {{"x1", poly(b.current(), "x2")}, {"x2", poly(b.current(), "x1")}});
  });
}

TEST(Validate, SingularLinearPart) {
  EXPECT_EQ(top_step_error(5, 1, "x2", "x2", ""), ErrorKind::SingularSigmaLinearPart);
}

TEST(Validate, InconsistentDelta) {
  // d(x2 x1) = 2 x1^2 x2 one way and x2 x1^2 = 4 x1^2 x2 the other.
  EXPECT_EQ(top_step_error(5, 2, "", "", "x1^2"), ErrorKind::InconsistentDelta);
}

TEST(Validate, ErrorMessagesNameTheStep) {
  try {
    TowerBuilder b("bad", FieldDescriptor::prime(5));
    b.adjoin("x");
    b.adjoin("y", {}, {{"x", poly(b.current(), "x")}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("step y, generator x"), std::string::npos) << e.what();
  }
}

TEST(RingTower, StructuralChecks) {
  const auto f5 = FieldDescriptor::prime(5);
  EXPECT_EQ(kind_of([&] { RingTower("t", f5, {SkewStep{"x", {}, {}}, SkewStep{"x", {}, {}}}); }),
            ErrorKind::InvalidOperand);
  EXPECT_EQ(kind_of([&] { RingTower("t", f5, {SkewStep{"x", {}, {}}}, 0); }), ErrorKind::InvalidOperand);
  EXPECT_EQ(kind_of([&] { RingTower("t", f5, {SkewStep{"x", {}, {}}}, 8, PresentationWindow{{2}}); }),
            ErrorKind::InvalidOperand);
  std::map<int, Terms> later{{0, {{Monomial::generator(1), Scalar::one(f5)}}}};
  EXPECT_EQ(kind_of([&] { RingTower("t", f5, {SkewStep{"x", {}, {}}, SkewStep{"y", later, {}}}); }),
            ErrorKind::InvalidOperand);
}

TEST(QCommutative, Relation) {
  const auto t = build_q_commutative(3, {{1, 2}, {2, 1}});
  EXPECT_EQ(poly(t, "x2") * poly(t, "x1"), poly(t, "2*x1*x2"));
}

TEST(QCommutative, AllOnesIsCommutative) {
  const auto t = build_q_commutative(5, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  std::mt19937_64 rng(1);
  for (int i = 0; i < 30; ++i) {
    const Series a = support::random_series(t, 8, rng), b = support::random_series(t, 8, rng);
    EXPECT_EQ(a * b, b * a);
  }
}

TEST(QCommutative, RandomAntisymmetricIsValidAndStable) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<std::int64_t> unit(1, 4);
  const auto f5 = FieldDescriptor::prime(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<std::int64_t>> q(3, std::vector<std::int64_t>(3, 1));
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const Scalar v(f5, unit(rng));
        q[i][j] = v.numerator();
        q[j][i] = v.inverse().numerator();
      }
    }
    const auto t = build_q_commutative(5, q);
    EXPECT_NO_THROW(validate_tower(t));
    EXPECT_TRUE(check_presentation_stability(t).stable());
  }
}

TEST(QCommutative, NotAntisymmetric) {
  EXPECT_EQ(kind_of([] { build_q_commutative(5, {{1, 2}, {2, 1}}); }), ErrorKind::NotAntisymmetric);
  EXPECT_EQ(kind_of([] { build_q_commutative(5, {{2, 1}, {1, 1}}); }), ErrorKind::NotAntisymmetric);
  EXPECT_EQ(kind_of([] { build_q_commutative(5, {{1, 0}, {0, 1}}); }), ErrorKind::NotAntisymmetric);
}

TEST(QuantumMatrix, RelationsHoldInBothOrders) {
  for (auto order : {QuantumMatrixOrder::RowMajor, QuantumMatrixOrder::Antidiagonal}) {
    const auto t = build_quantum_matrix_2x2(5, 2, order);
    const Series a = poly(t, "a"), b = poly(t, "b"), c = poly(t, "c"), d = poly(t, "d");
    const Scalar q(t->field(), 2);
    EXPECT_EQ(a * b, q * (b * a));
    EXPECT_EQ(a * c, q * (c * a));
    EXPECT_EQ(b * c, c * b);
    EXPECT_EQ(b * d, q * (d * b));
    EXPECT_EQ(c * d, q * (d * c));
    EXPECT_EQ(a * d - d * a, (q - q.inverse()) * (b * c));
  }
}

TEST(QuantumMatrix, Errors) {
  EXPECT_EQ(kind_of([] { build_quantum_matrix_2x2(5, 0, QuantumMatrixOrder::RowMajor); }), ErrorKind::InvalidScalar);
  EXPECT_EQ(kind_of([] { build_quantum_matrix_2x2(5, 10, QuantumMatrixOrder::RowMajor); }), ErrorKind::InvalidScalar);
}

TEST(QuantumMatrix, QSquaredOneKillsDelta) {
  for (auto order : {QuantumMatrixOrder::RowMajor, QuantumMatrixOrder::Antidiagonal}) {
    const auto t = build_quantum_matrix_2x2(5, 4, order);
    EXPECT_TRUE(t->delta_image(3, t->generator_index("a")).empty());
    EXPECT_TRUE(check_presentation_stability(t).stable());
  }
}

TEST(Iwasawa, NonRigidImages) {
  const auto t = build_iwasawa_semidirect(IwasawaVariant::Dim3NonRigid, 3);
  EXPECT_EQ(Series(t, 8, t->sigma_image(2, 0)), poly(t, "Y + (1+Y)*Z^3"));
  EXPECT_EQ(Series(t, 8, t->sigma_image(2, 1)), poly(t, "Z + ((1+Y)^-1 - 1)^3*(1+Z)"));
}

TEST(Iwasawa, Dim2DeltaOfY) {
  // (1+Y)^4 - 1 - Y over F_3 = Y^3 + Y^4 (oracle: binomial coefficients mod 3).
  const auto t = build_iwasawa_semidirect(IwasawaVariant::Dim2OnePlusP, 3);
  const Series d(t, 8, t->delta_image(1, 0));
  EXPECT_EQ(d, poly(t, "Y^3 + Y^4"));
  EXPECT_GE(valuation_m_adic(d), 2);
}

TEST(Iwasawa, Supersoluble13) {
  // Oracle: commutative expansion of (1+Y)(1+Z)^13 - 1 and (1+Z)(1+Y)^-13 - 1 mod m^16.
  const auto t = build_iwasawa_semidirect(IwasawaVariant::Dim3Supersoluble, 13, 16);
  EXPECT_NO_THROW(validate_tower(t));
  EXPECT_EQ(Series(t, 16, t->sigma_image(2, 0)), poly(t, "Y + Z^13 + Y*Z^13"));
  EXPECT_EQ(Series(t, 16, t->sigma_image(2, 1)), poly(t, "Z + 12*Y^13 + 12*Y^13*Z"));
}

TEST(Iwasawa, PrimeCongruence) {
  EXPECT_EQ(kind_of([] { build_iwasawa_semidirect(IwasawaVariant::Dim3NonRigid, 5); }),
            ErrorKind::BadPrimeCongruence);
  EXPECT_EQ(kind_of([] { build_iwasawa_semidirect(IwasawaVariant::Dim3Supersoluble, 7); }),
            ErrorKind::BadPrimeCongruence);
}

TEST(Iwasawa, GroupRelationOracle) {
  struct Case {
    IwasawaVariant variant;
    std::int64_t p;
  };
  for (const Case& c : {Case{IwasawaVariant::Dim2OnePlusP, 3}, Case{IwasawaVariant::Dim2OnePlusP, 5},
                        Case{IwasawaVariant::Dim3NonRigid, 3}, Case{IwasawaVariant::Dim3NonRigid, 7},
                        Case{IwasawaVariant::Dim3Supersoluble, 5}}) {
    const auto t = build_iwasawa_semidirect(c.variant, c.p, 8);
    const Series one = Series::one(t), x = poly(t, "1 + X"), x_inv = series_inverse(x);
    const int pp = static_cast<int>(c.p);
    if (c.variant == IwasawaVariant::Dim2OnePlusP) {
      EXPECT_EQ(x * poly(t, "1 + Y") * x_inv, power(poly(t, "1 + Y"), pp + 1));
    } else {
      EXPECT_EQ(x * poly(t, "1 + Y") * x_inv, poly(t, "1 + Y") * power(poly(t, "1 + Z"), pp));
      EXPECT_EQ(x * poly(t, "1 + Z") * x_inv, poly(t, "1 + Z") * power(series_inverse(poly(t, "1 + Y")), pp));
    }
  }
}

TEST(Constructors, AllValidAtDefaultPrecision) {
  for (const auto& name : builtin_names()) EXPECT_NO_THROW(validate_tower(builtin_tower(name))) << name;
  EXPECT_NO_THROW(validate_tower(build_iwasawa_semidirect(IwasawaVariant::Dim3Supersoluble, 13)));
}

TEST(QuotientByStage, E2StageOne) {
  const auto q = quotient_by_stage(builtin_tower("@e2"), 1);
  ASSERT_EQ(q->generator_count(), 1);
  EXPECT_EQ(q->generator_name(0), "x2");
  EXPECT_TRUE(q->steps()[0].sigma_images.empty());
  EXPECT_TRUE(q->steps()[0].delta_images.empty());
}

TEST(QuotientByStage, Extremes) {
  const auto e2 = builtin_tower("@e2");
  EXPECT_EQ(quotient_by_stage(e2, 0), e2);
  const auto bare = quotient_by_stage(e2, 2);
  EXPECT_EQ(bare->generator_count(), 0);
  EXPECT_EQ(bare->field(), e2->field());
}

TEST(QuotientByStage, ReducesImages) {
  // Antidiagonal order b, c, a, d: killing b, c leaves a commuting pair.
  const auto q = quotient_by_stage(builtin_tower("@e6"), 2);
  ASSERT_EQ(q->generator_count(), 2);
  EXPECT_EQ(q->generator_name(0), "a");
  EXPECT_TRUE(q->delta_image(1, 0).empty());
  EXPECT_TRUE(q->sigma_is_identity_on(1, 0));
}

TEST(QuotientByStage, E3NotStable) {
  EXPECT_EQ(kind_of([] { quotient_by_stage(builtin_tower("@e3"), 1); }), ErrorKind::NotStableThroughStage);
}

TEST(QuotientByTop, PureAutomorphic) {
  const auto t = build_q_commutative(5, {{1, 2, 3}, {3, 1, 4}, {2, 4, 1}});
  const auto q = quotient_by_top(t);
  const auto prefix = build_q_commutative(5, {{1, 2}, {3, 1}});
  ASSERT_EQ(q->generator_count(), 2);
  EXPECT_EQ(render_ring_file(*q).substr(render_ring_file(*q).find('\n')),
            render_ring_file(*prefix).substr(render_ring_file(*prefix).find('\n')));
  EXPECT_EQ(kind_of([] { quotient_by_top(build_e1()); }), ErrorKind::NotPureAutomorphic);
}

TEST(ResidueRank, Examples) {
  EXPECT_EQ(residue_rank(builtin_tower("@e3")), 3);
  EXPECT_EQ(residue_rank(builtin_tower("@e6")), 4);
  TowerBuilder b("k", FieldDescriptor::prime(3));
  EXPECT_EQ(residue_rank(b.build()), 0);
  EXPECT_EQ(kind_of([] { residue_rank(build_e1(2)); }), ErrorKind::PrecisionTooLow);
}

TEST(ResidueRank, EqualsGeneratorCount) {
  for (const auto& name : builtin_names()) {
    const auto t = builtin_tower(name, 3);
    EXPECT_EQ(residue_rank(t), t->generator_count()) << name;
  }
}
