#include <gtest/gtest.h>

#include "support.hpp"

namespace lqg {
namespace {

using testing::Rng;

Mat m1(double v) { return Mat::Constant(1, 1, v); }

Plant scalar_plant(double a) { return Plant(m1(a), m1(1), m1(1), m1(1), m1(1), m1(1), m1(1)); }

template <class F>
ErrorKind error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

double controller_distance(const Controller& a, const Controller& b) {
  return std::max({(a.AK - b.AK).cwiseAbs().maxCoeff(), (a.BK - b.BK).cwiseAbs().maxCoeff(),
                   (a.CK - b.CK).cwiseAbs().maxCoeff()});
}

TEST(Plant, ValidationMessages) {
  const Mat I = Mat::Identity(1, 1);
  try {
    Plant(I, I, I, I, -I, I, I);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPlant);
    EXPECT_NE(std::string(e.what()).find("V not positive definite"), std::string::npos);
  }
  Mat W(2, 2);
  W << 1, 2, 0, 1;
  EXPECT_EQ(error_kind([&] {
              Plant(Mat::Identity(2, 2), Mat::Ones(2, 1), Mat::Ones(1, 2), W, I, Mat::Identity(2, 2), I);
            }),
            ErrorKind::InvalidPlant);
  try {
    Plant(Mat::Identity(2, 2), Mat::Ones(3, 1), I, I, I, I, I);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPlant);
    EXPECT_NE(std::string(e.what()).find("B"), std::string::npos);
  }
}

TEST(Plant, AssumptionFlags) {
  EXPECT_TRUE(example_plant("doyle").assumptions().all());
  // Zero output matrix: (C, A) unobservable.
  const Plant p(m1(-1), m1(1), m1(0), m1(1), m1(1), m1(1), m1(1));
  EXPECT_FALSE(p.assumptions().ca_observable);
  EXPECT_TRUE(p.assumptions().ab_controllable);
}

TEST(ClosedLoop, ScalarExample) {
  const Mat Acl = closed_loop(scalar_plant(1), Controller(m1(-2), m1(-2), m1(2)));
  Mat ref(2, 2);
  ref << 1, 2, -2, -2;
  EXPECT_EQ(Acl, ref);
}

TEST(ClosedLoop, ZeroController) {
  Mat ref(2, 2);
  ref << -1, 0, 0, 0;
  EXPECT_EQ(closed_loop(scalar_plant(-1), Controller(m1(0), m1(0), m1(0))), ref);
}

TEST(ClosedLoop, ProperControllerFeedthrough) {
  const Plant p = example_plant("exB.3");
  const Controller K = *example_controller("exB.3", "proper");
  const Mat Acl = closed_loop(p, K);
  ASSERT_EQ(Acl.rows(), 3);
  Mat ref(3, 3);
  ref << 0, 1, 0, 1, -2, 2, 0, -3, 1;
  EXPECT_EQ(Acl, ref);
  EXPECT_TRUE(is_stabilizing(p, K).stable);
  EXPECT_FALSE(K.strictly_proper());
}

TEST(IsStabilizing, UnstableScalarPlant) {
  const Plant p = example_plant("ex3.1");
  EXPECT_TRUE(is_stabilizing(p, *example_controller("ex3.1", "k1")).stable);
  EXPECT_TRUE(is_stabilizing(p, *example_controller("ex3.1", "k2")).stable);
  EXPECT_FALSE(is_stabilizing(p, *example_controller("ex3.1", "mid")).stable);
}

TEST(IsStabilizing, RegionFormula) {
  const Plant p = example_plant("ex3.2");
  Rng rng(21);
  std::uniform_real_distribution<double> u(-4.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const double ak = u(rng), bk = u(rng), ck = u(rng);
    const bool region = ak < -1 && bk * ck < ak;
    if (std::abs(ak + 1) < 1e-6 || std::abs(bk * ck - ak) < 1e-6) continue;
    EXPECT_EQ(is_stabilizing(p, Controller(m1(ak), m1(bk), m1(ck))).stable, region);
  }
}

TEST(Similarity, IdentityAndGroupLaw) {
  Rng rng(22);
  const Controller K = *example_controller("doyle", "opt");
  EXPECT_EQ(controller_distance(similarity(Mat::Identity(2, 2), K), K), 0.0);
  for (int k = 0; k < 20; ++k) {
    const Mat T1 = testing::random_transform(rng, 2), T2 = testing::random_transform(rng, 2);
    EXPECT_LE(controller_distance(similarity(T2, similarity(T1, K)), similarity(T2 * T1, K)),
              1e-9 * (1 + K.AK.norm()));
  }
}

TEST(Similarity, DoyleCanonicalPair) {
  Mat T(2, 2);
  T << 25, 5, -30, 5;
  const Controller opt = *example_controller("doyle", "opt");
  const Controller can = *example_controller("doyle", "canonical");
  EXPECT_LE(controller_distance(similarity(T, can), opt), 1e-12);
  EXPECT_LE(controller_distance(similarity(T.inverse(), opt), can), 1e-12);
}

TEST(Similarity, SingularTransform) {
  Mat T(2, 2);
  T << 1, 2, 2, 4;
  EXPECT_EQ(error_kind([&] { similarity(T, *example_controller("doyle", "opt")); }),
            ErrorKind::SingularTransform);
}

TEST(Similarity, InvariantsOnRandomControllers) {
  Rng rng(23);
  for (int k = 0; k < 50; ++k) {
    const auto [plant, K] = testing::random_instance(rng, TimeDomain::Continuous);
    const Mat T = testing::random_transform(rng, K.q());
    const Controller KT = similarity(T, K);
    EXPECT_EQ(is_stabilizing(plant, K).stable, is_stabilizing(plant, KT).stable);
    const Complex s(1.0, 1.0);
    EXPECT_LE((transfer_eval(KT, s) - transfer_eval(K, s)).norm(),
              1e-10 * (1 + transfer_eval(K, s).norm()));
  }
}

TEST(TransferEval, Examples) {
  const Controller K = *example_controller("ex4.4", "k1");
  EXPECT_NEAR(std::abs(testing::siso_tf(K, 0.0) - (-2.0 / 3.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(testing::siso_tf(Controller(m1(-1), m1(1), m1(1)), 0.0) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(error_kind([&] { transfer_eval(Controller(m1(-1), m1(1), m1(1)), -1.0); }),
            ErrorKind::PoleHit);
}

TEST(TransferEval, NonMinimalDescentLimitsMatchOptimum) {
  Rng rng(24);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Controller opt = *example_controller("ex4.4", "k1");
  for (const char* key : {"gd1", "gd2"}) {
    const Controller K = *example_controller("ex4.4", key);
    for (int k = 0; k < 20; ++k) {
      const Complex s(u(rng), u(rng));
      const Complex ref = testing::siso_tf(opt, s);
      // The reported coefficients carry four decimals.
      EXPECT_LE(std::abs(testing::siso_tf(K, s) - ref), 1e-3 * std::abs(ref) + 1e-4) << key;
    }
  }
}

TEST(Canonical, AlreadyCompanion) {
  const Controller can = *example_controller("doyle", "canonical");
  const CanonicalForm cf = canonical_form(can);
  EXPECT_LE((cf.T - Mat::Identity(2, 2)).norm(), 1e-12);
}

TEST(Canonical, DoyleCoefficients) {
  const CanonicalForm cf = canonical_form(*example_controller("doyle", "opt"));
  EXPECT_NEAR(cf.b(0), 26, 1e-10);
  EXPECT_NEAR(cf.b(1), 8, 1e-10);
  EXPECT_NEAR(cf.a(0), 25, 1e-10);
  EXPECT_NEAR(cf.a(1), -50, 1e-10);
}

TEST(Canonical, RandomRoundTripAgainstCharacteristicPolynomial) {
  Rng rng(25);
  for (int k = 0; k < 50; ++k) {
    const int q = 1 + k % 4;
    const Controller K(testing::random_matrix(rng, q, q), testing::random_matrix(rng, q, 1),
                       testing::random_matrix(rng, 1, q));
    const CanonicalForm cf = canonical_form(K);
    EXPECT_LE(controller_distance(similarity(cf.T, K), cf.K), 1e-9 * (1 + cf.K.AK.norm()));
    // Companion last row holds the characteristic polynomial coefficients.
    const Eigen::VectorXcd c = testing::charpoly(K.AK);
    for (int i = 0; i < q; ++i) {
      EXPECT_NEAR(cf.b(i), c(q - i).real(), 1e-8 * (1 + std::abs(c(q - i)))) << q;
    }
    EXPECT_EQ(cf.K.BK, Mat(Vec::Unit(q, q - 1)));
  }
}

TEST(Canonical, Errors) {
  EXPECT_EQ(error_kind([] { canonical_form(Controller(Mat::Identity(1, 1), Mat::Ones(1, 2), Mat::Ones(1, 1))); }),
            ErrorKind::NotSISO);
  Mat AK(2, 2);
  AK << -1, 0, 0, -2;
  Mat BK(2, 1);
  BK << 1, 0;
  EXPECT_EQ(error_kind([&] { canonical_form(Controller(AK, BK, Mat::Ones(1, 2))); }),
            ErrorKind::NotControllable);
}

TEST(Direction, LayoutIsCBA) {
  Mat dA(1, 1), dB(1, 1), dC(1, 1);
  dA << 3;
  dB << 2;
  dC << 1;
  const Vec v = Direction(dA, dB, dC).to_vector();
  ASSERT_EQ(v.size(), 3);
  EXPECT_EQ(v(0), 1);
  EXPECT_EQ(v(1), 2);
  EXPECT_EQ(v(2), 3);
  const Direction d = Direction::from_vector(v, 1, 1, 1);
  EXPECT_EQ(d.dA(0, 0), 3);
  EXPECT_EQ(direction_dim(2, 1, 1), 8);
}

TEST(Tangent, ScalarBasis) {
  const Controller K(m1(-2), m1(3), m1(5));
  const TangentBasis tb = tangent_space(K);
  ASSERT_EQ(tb.tangent.size(), 1u);
  EXPECT_EQ(tb.tangent[0].dA(0, 0), 0.0);
  EXPECT_EQ(tb.tangent[0].dB(0, 0), 3.0);
  EXPECT_EQ(tb.tangent[0].dC(0, 0), -5.0);
}

TEST(Tangent, RandomMinimalControllers) {
  Rng rng(26);
  for (int k = 0; k < 50; ++k) {
    const int q = 1 + k % 3, m = 1 + k % 2, p = 1 + (k / 2) % 2;
    const Controller K(testing::random_matrix(rng, q, q), testing::random_matrix(rng, q, p),
                       testing::random_matrix(rng, m, q));
    const TangentBasis tb = tangent_space(K);
    const Eigen::Index d = direction_dim(q, m, p);
    EXPECT_EQ(numerical_rank(tb.tangent_matrix), q * q);
    EXPECT_EQ(tb.complement.cols(), d - q * q);
    EXPECT_LE((tb.tangent_matrix.transpose() * tb.complement).norm(), 1e-10 * (1 + tb.tangent_matrix.norm()));
    // Structural form of each basis element.
    for (int j = 0; j < q; ++j)
      for (int i = 0; i < q; ++i) {
        Mat H = Mat::Zero(q, q);
        H(i, j) = 1.0;
        const Direction& t = tb.tangent[j * q + i];
        EXPECT_LE((t.dA - (H * K.AK - K.AK * H)).norm(), 1e-14);
        EXPECT_LE((t.dB - H * K.BK).norm(), 1e-14);
        EXPECT_LE((t.dC + K.CK * H).norm(), 1e-14);
      }
    const Direction delta = testing::random_direction(rng, K);
    const TangentSplit sp = project_tangent(K, delta);
    EXPECT_LE((sp.parallel + sp.perpendicular - delta).norm(), 1e-12 * delta.norm());
    EXPECT_LE(std::abs(sp.parallel.dot(sp.perpendicular)), 1e-10 * delta.norm() * delta.norm());
    EXPECT_LE(complement_residual(K, sp.perpendicular).norm(), 1e-9 * (1 + delta.norm()));
    if (sp.parallel.norm() > 1e-3) {
      EXPECT_GT(complement_residual(K, sp.parallel).norm(), 1e-6);
    }
  }
}

TEST(Tangent, ProjectionOfSlowDirectionShrinksLinearly) {
  Mat dA0(2, 2);
  dA0 << -0.5, 0.5, 0.5, -0.5;
  const Direction d0(dA0, Mat::Zero(2, 1), Mat::Zero(1, 2));
  double prev = 0.0;
  for (double eps : {0.1, 0.05}) {
    const Controller K = *example_controller("ex4.5", "kstar", eps);
    const double norm = project_tangent(K, d0).parallel.norm();
    if (prev > 0.0) EXPECT_NEAR(prev / norm, 2.0, 0.2);
    prev = norm;
  }
}

TEST(Tangent, NonMinimalRejected) {
  EXPECT_EQ(error_kind([] { tangent_space(*example_controller("ex4.4", "k1")); }),
            ErrorKind::NonMinimalController);
}

TEST(OrbitMatch, RecoversTransform) {
  Rng rng(27);
  for (int k = 0; k < 30; ++k) {
    const int q = 1 + k % 3;
    const Controller K(testing::random_matrix(rng, q, q), testing::random_matrix(rng, q, 2),
                       testing::random_matrix(rng, 2, q));
    const Mat T0 = testing::random_transform(rng, q);
    const auto T = orbit_match(K, similarity(T0, K));
    ASSERT_TRUE(T.has_value());
    EXPECT_LE((*T - T0).norm(), 1e-8 * T0.norm());
  }
  const Controller K = *example_controller("doyle", "opt");
  const auto I = orbit_match(K, K);
  ASSERT_TRUE(I.has_value());
  EXPECT_LE((*I - Mat::Identity(2, 2)).norm(), 1e-10);
}

TEST(OrbitMatch, NonMinimalPairHasNoTransform) {
  EXPECT_FALSE(orbit_match(*example_controller("ex4.4", "k1"), *example_controller("ex4.4", "k2")));
}

TEST(OrbitMatch, DifferentTransferFunctions) {
  EXPECT_FALSE(orbit_match(Controller(m1(-1), m1(1), m1(1)), Controller(m1(-2), m1(1), m1(1))));
}

}  // namespace
}  // namespace lqg
