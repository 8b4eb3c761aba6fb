#include <gtest/gtest.h>

#include "support.hpp"

namespace lqg {
namespace {

using testing::Rng;

Mat m1(double v) { return Mat::Constant(1, 1, v); }

double controller_distance(const Controller& a, const Controller& b) {
  return (a.AK - b.AK).norm() + (a.BK - b.BK).norm() + (a.CK - b.CK).norm();
}

TEST(Lift, RoundTrip) {
  Rng rng(51);
  for (TimeDomain dom : {TimeDomain::Continuous, TimeDomain::Discrete}) {
    for (int k = 0; k < 30; ++k) {
      const auto [plant, K] = testing::random_instance(rng, dom);
      const ConvexLift Z = lift(plant, K);
      EXPECT_TRUE(check_lift(plant, Z).ok()) << to_string(dom) << " " << k;
      const Controller K2 = realize(plant, Z);
      const double scale = 1 + K.AK.norm() + K.BK.norm() + K.CK.norm();
      EXPECT_LE(controller_distance(K, K2), 1e-7 * scale) << to_string(dom) << " " << k;
    }
  }
}

TEST(Lift, TransformedLiftRealizesSimilarController) {
  Rng rng(52);
  for (TimeDomain dom : {TimeDomain::Continuous, TimeDomain::Discrete}) {
    for (int k = 0; k < 20; ++k) {
      const auto [plant, K] = testing::random_instance(rng, dom);
      Mat T = testing::random_transform(rng, K.q());
      if (k % 2 == 0) T.row(0) *= -1.0;  // exercise both orientations
      const ConvexLift Z = lift(plant, K);
      const Controller KT = realize(plant, transform_lift(Z, T));
      const Controller ref = similarity(T, K);
      const double scale = 1 + ref.AK.norm() + ref.BK.norm() + ref.CK.norm();
      EXPECT_LE(controller_distance(KT, ref), 1e-7 * scale);
    }
  }
}

TEST(Lift, ComponentSignsOfScalarExample) {
  const Plant p = example_plant("ex3.1");
  EXPECT_NE(component_sign(p, *example_controller("ex3.1", "k1")),
            component_sign(p, *example_controller("ex3.1", "k2")));
}

TEST(Lift, Errors) {
  const Plant p = example_plant("ex3.1");
  try {
    lift(p, *example_controller("ex3.1", "mid"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotStabilizing);
  }
  ConvexLift Z = lift(p, *example_controller("ex3.1", "k1"));
  Z.X = -Z.X;
  EXPECT_FALSE(check_lift(p, Z).ok());
  try {
    realize(p, Z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvariantViolated);
  }
  try {
    lift(example_plant("doyle"), Controller(m1(-1), m1(1), m1(1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Polar, FactorsAndGeodesic) {
  Rng rng(53);
  const Mat Pi = testing::random_transform(rng, 3);
  const Polar pd = polar_decomposition(Pi);
  EXPECT_LE((pd.Q * pd.P - Pi).norm(), 1e-12 * Pi.norm());
  EXPECT_LE((pd.Q.transpose() * pd.Q - Mat::Identity(3, 3)).norm(), 1e-12);
  EXPECT_LE((pd.P - pd.P.transpose()).norm(), 1e-12 * Pi.norm());
  Mat Q1 = Mat::Identity(3, 3);
  if (pd.Q.determinant() < 0) Q1(0, 0) = -1;
  EXPECT_LE((orthogonal_geodesic(pd.Q, Q1, 0.0) - pd.Q).norm(), 1e-10);
  EXPECT_LE((orthogonal_geodesic(pd.Q, Q1, 1.0) - Q1).norm(), 1e-10);
  const Mat Qh = orthogonal_geodesic(pd.Q, Q1, 0.5);
  EXPECT_LE((Qh.transpose() * Qh - Mat::Identity(3, 3)).norm(), 1e-10);
}

TEST(Path, SameComponentRandom) {
  Rng rng(54);
  for (TimeDomain dom : {TimeDomain::Continuous, TimeDomain::Discrete}) {
    for (int k = 0; k < 5; ++k) {
      const auto [plant, K0] = testing::random_instance(rng, dom);
      Controller K1 = testing::random_stabilizing(rng, plant);
      if (component_sign(plant, K1) != component_sign(plant, K0)) {
        Mat T = Mat::Identity(K1.q(), K1.q());
        T(0, 0) = -1;
        K1 = similarity(T, K1);
      }
      const auto path = path_between(plant, K0, K1, 50);
      ASSERT_EQ(path.size(), 51u);
      for (const Controller& K : path) EXPECT_TRUE(is_stabilizing(plant, K).stable);
      EXPECT_LE(controller_distance(path.front(), K0), 1e-7 * (1 + K0.AK.norm()));
      EXPECT_LE(controller_distance(path.back(), K1), 1e-7 * (1 + K1.AK.norm()));
    }
  }
}

TEST(Path, DisconnectedUnstablePlant) {
  const Plant p = example_plant("ex3.2");
  try {
    path_between(p, *example_controller("ex3.2", "k2"), *example_controller("ex3.2", "k1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoPathFound);
  }
  EXPECT_FALSE(reduced_order_search(p, 0).has_value());
}

TEST(Path, StablePlantThroughBridge) {
  const Plant p = example_plant("ex3.3");
  const auto bridge = reduced_order_search(p, 0);
  ASSERT_TRUE(bridge.has_value());
  const Controller kp = *example_controller("ex3.3", "k+");
  const Controller km = *example_controller("ex3.3", "k-");
  const auto path = path_between(p, kp, km, 100, *bridge);
  ASSERT_EQ(path.size(), 101u);
  for (const Controller& K : path) EXPECT_TRUE(is_stabilizing(p, K).stable);
  EXPECT_LE(controller_distance(path.back(), km), 1e-7);
}

TEST(Path, DiscreteStablePlant) {
  const Plant p(m1(0.5), m1(1), m1(1), m1(1), m1(1), m1(1), m1(1), TimeDomain::Discrete);
  const Controller k1(m1(0), m1(-0.5), m1(0.5)), k2(m1(0), m1(0.5), m1(-0.5));
  const auto bridge = reduced_order_search(p, 0);
  ASSERT_TRUE(bridge.has_value());
  const auto path = path_between(p, k1, k2, 60, *bridge);
  for (const Controller& K : path) EXPECT_TRUE(is_stabilizing(p, K).stable);
}

TEST(Bridge, FixedBySignFlip) {
  const Plant p = example_plant("ex4.4");
  const auto Kred = reduced_order_search(p, 1);
  ASSERT_TRUE(Kred.has_value());
  const Controller Kb = bridge_controller(p, *Kred);
  EXPECT_EQ(Kb.q(), 2);
  Mat T = Mat::Identity(2, 2);
  T(1, 1) = -1;
  EXPECT_LE(controller_distance(similarity(T, Kb), Kb), 1e-14);
  EXPECT_TRUE(is_stabilizing(p, Kb).stable);
}

TEST(Search, DeterministicAndStabilizing) {
  const Plant p = example_plant("ex4.4");
  SearchConfig cfg;
  cfg.seed = 7;
  const auto a = reduced_order_search(p, 1, cfg);
  const auto b = reduced_order_search(p, 1, cfg);
  ASSERT_TRUE(a && b);
  EXPECT_TRUE(is_stabilizing(p, *a).stable);
  EXPECT_EQ(a->AK, b->AK);
  EXPECT_EQ(a->BK, b->BK);
  EXPECT_EQ(a->CK, b->CK);
}

}  // namespace
}  // namespace lqg
