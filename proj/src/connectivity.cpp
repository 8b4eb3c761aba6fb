#include "lqg/connectivity.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace lqg {

const char* to_string(ComponentSign s) {
  return s == ComponentSign::Plus ? "Plus" : "Minus";
}

bool LiftCheck::ok() const {
  return xy_positive && lmi_satisfied && invertible && coupling_residual <= 1e-9;
}

namespace {

// Strict definiteness up to rounding in the entries the matrix was built from:
// eigenvalues are accurate to about eps times the size of those entries.
bool definite_up_to_rounding(const Mat& S, double entry_scale) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > -1e-13 * (1.0 + entry_scale);
}

double min_singular(const Mat& M) {
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec s = svd.singularValues();
  return s(s.size() - 1);
}

void require_full_order(const Plant& plant, const Controller& K) {
  check_compatible(plant, K);
  if (K.q() != plant.n()) {
    throw Error(ErrorKind::DimensionMismatch,
                "convex lift needs a full-order controller (q = n)");
  }
  if (!K.strictly_proper()) {
    throw Error(ErrorKind::NotProper, "convex lift needs a strictly proper controller");
  }
}

ConvexLift lift_from_lyapunov(const Plant& plant, const Controller& K,
                              const Mat& Pcl) {
  const Eigen::Index n = plant.n();
  const Mat& A = plant.A();
  const Mat& B = plant.B();
  const Mat& C = plant.C();
  ConvexLift Z;
  Z.X = symmetrize(Pcl.topLeftCorner(n, n));
  Z.Pi = Pcl.bottomLeftCorner(n, n);
  const Mat Pinv = symmetrize(Pcl.inverse());
  Z.Y = symmetrize(Pinv.topLeftCorner(n, n));
  Z.Xi = Pinv.topRightCorner(n, n);
  Z.M = Z.Y * A * Z.X + Z.Xi * K.BK * C * Z.X + Z.Y * B * K.CK * Z.Pi +
        Z.Xi * K.AK * Z.Pi;
  Z.G = Mat::Zero(plant.m(), plant.p());
  Z.H = Z.Xi * K.BK;
  Z.F = K.CK * Z.Pi;
  return Z;
}

}  // namespace

ConvexLift lift(const Plant& plant, const Controller& K) {
  require_full_order(plant, K);
  const Mat Acl = closed_loop(plant, K);
  if (!stability(Acl, plant.dom()).stable) {
    throw Error(ErrorKind::NotStabilizing, "controller is not stabilizing");
  }
  const Eigen::Index n = plant.n();
  const Mat I = Mat::Identity(n, n);
  // Right-hand sides tried in order; coupled ones give an invertible Pi when
  // the controller state is decoupled from the plant state.
  const double couplings[] = {0.0, 0.5, -0.5, 0.25};
  for (double c : couplings) {
    Mat rhs(2 * n, 2 * n);
    rhs << I, c * I, c * I, I;
    const Mat Pcl = solve_lyapunov(Acl, rhs, plant.dom());
    const Mat Pi = Pcl.bottomLeftCorner(n, n);
    if (min_singular(Pi) > 1e-8 * Pcl.norm()) {
      return lift_from_lyapunov(plant, K, Pcl);
    }
  }
  // Fall back to perturbing Pi inside the lift; realize then returns a
  // nearby stabilizing controller.
  const Mat Pcl = solve_lyapunov(Acl, Mat::Identity(2 * n, 2 * n), plant.dom());
  ConvexLift Z = lift_from_lyapunov(plant, K, Pcl);
  const double delta = 1e-6 * std::max(Z.Pi.norm(), Z.X.norm());
  Z.Pi += delta * I;
  Z.Xi = (I - Z.Y * Z.X) * Z.Pi.inverse();
  Z.degenerate_pi = true;
  return Z;
}

LiftCheck check_lift(const Plant& plant, const ConvexLift& Z) {
  const Eigen::Index n = plant.n();
  const Mat I = Mat::Identity(n, n);
  const Mat& A = plant.A();
  const Mat& B = plant.B();
  const Mat& C = plant.C();
  LiftCheck chk;
  Mat XY(2 * n, 2 * n);
  XY << Z.X, I, I, Z.Y;
  chk.xy_positive = definite_up_to_rounding(XY, XY.norm());
  Mat N(2 * n, 2 * n);
  N << A * Z.X + B * Z.F, A + B * Z.G * C, Z.M, Z.Y * A + Z.H * C;
  if (plant.dom() == TimeDomain::Continuous) {
    chk.lmi_satisfied = definite_up_to_rounding(-(N + N.transpose()), N.norm());
  } else {
    Mat L(4 * n, 4 * n);
    L << XY, N, N.transpose(), XY;
    chk.lmi_satisfied = definite_up_to_rounding(L, L.norm());
  }
  const double scale = 1.0 + Z.Y.norm() * Z.X.norm();
  chk.coupling_residual = (Z.Xi * Z.Pi - (I - Z.Y * Z.X)).norm() / scale;
  chk.invertible = min_singular(Z.Pi) > 1e-13 * (1.0 + Z.Pi.norm()) &&
                   min_singular(Z.Xi) > 1e-13 * (1.0 + Z.Xi.norm());
  return chk;
}

Controller realize(const Plant& plant, const ConvexLift& Z) {
  const LiftCheck chk = check_lift(plant, Z);
  if (!chk.ok()) {
    std::string what = "lift invariants violated:";
    if (!chk.xy_positive) what += " [[X,I],[I,Y]] not positive definite;";
    if (!chk.lmi_satisfied) what += " stability inequality fails;";
    if (!chk.invertible) what += " Pi or Xi singular;";
    if (chk.coupling_residual > 1e-9) what += " Xi Pi != I - Y X;";
    throw Error(ErrorKind::InvariantViolated, what);
  }
  const Mat& A = plant.A();
  const Mat& B = plant.B();
  const Mat& C = plant.C();
  const Mat Xi_inv = Z.Xi.inverse();
  const Mat Pi_inv = Z.Pi.inverse();
  const Mat DK = Z.G;
  const Mat CK = (Z.F - DK * C * Z.X) * Pi_inv;
  const Mat BK = Xi_inv * (Z.H - Z.Y * B * DK);
  const Mat inner = Z.M - Z.Y * (A + B * DK * C) * Z.X - Z.Xi * BK * C * Z.X -
                    Z.Y * B * CK * Z.Pi;
  const Mat AK = Xi_inv * inner * Pi_inv;
  Controller K(AK, BK, CK, DK);
  if (!is_stabilizing(plant, K).stable) {
    throw Error(ErrorKind::InvariantViolated, "realized controller is not stabilizing");
  }
  return K;
}

ConvexLift transform_lift(const ConvexLift& Z, const Mat& T) {
  ConvexLift out = Z;
  out.Pi = T * Z.Pi;
  out.Xi = Z.Xi * T.inverse();
  return out;
}

ComponentSign component_sign(const Plant& plant, const Controller& K) {
  const ConvexLift Z = lift(plant, K);
  return Z.Pi.determinant() > 0.0 ? ComponentSign::Plus : ComponentSign::Minus;
}

Polar polar_decomposition(const Mat& Pi) {
  Eigen::JacobiSVD<Mat> svd(Pi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat& U = svd.matrixU();
  const Mat& V = svd.matrixV();
  return {U * V.transpose(),
          symmetrize(V * svd.singularValues().asDiagonal() * V.transpose())};
}

Mat orthogonal_geodesic(const Mat& Q0, const Mat& Q1, double t) {
  const Mat R = Q0.transpose() * Q1;
  const Eigen::Index n = R.rows();
  if (R.determinant() < 0.0) {
    throw Error(ErrorKind::InvalidArgument,
                "orthogonal factors lie in different components");
  }
  Eigen::RealSchur<Mat> schur(R);
  const Mat& Tm = schur.matrixT();
  const Mat& U = schur.matrixU();
  // Rotation planes (i, j) with angles; exp(t log R) is a product of planar rotations.
  struct Plane {
    Eigen::Index i, j;
    double theta;
  };
  std::vector<Plane> planes;
  std::vector<Eigen::Index> negatives;
  for (Eigen::Index i = 0; i < n;) {
    if (i + 1 < n && std::abs(Tm(i + 1, i)) > 1e-14) {
      const double a = 0.5 * (Tm(i, i) + Tm(i + 1, i + 1));
      const double b = 0.5 * (Tm(i + 1, i) - Tm(i, i + 1));
      planes.push_back({i, i + 1, std::atan2(b, a)});
      i += 2;
    } else {
      if (Tm(i, i) < 0.0) negatives.push_back(i);
      ++i;
    }
  }
  for (std::size_t k = 0; k + 1 < negatives.size(); k += 2) {
    planes.push_back({negatives[k], negatives[k + 1], std::numbers::pi});
  }
  Mat E = Mat::Identity(n, n);
  for (const Plane& pl : planes) {
    const double c = std::cos(t * pl.theta), s = std::sin(t * pl.theta);
    E(pl.i, pl.i) = c;
    E(pl.j, pl.j) = c;
    E(pl.i, pl.j) = -s;
    E(pl.j, pl.i) = s;
  }
  return Q0 * U * E * U.transpose();
}

Controller bridge_controller(const Plant& plant, const Controller& K_red) {
  if (K_red.q() + 1 != plant.n()) {
    throw Error(ErrorKind::DimensionMismatch, "bridge needs an order n-1 controller");
  }
  const double pad = plant.dom() == TimeDomain::Continuous ? -1.0 : 0.0;
  const Eigen::Index q = K_red.q();
  Mat B = Mat::Zero(q + 1, plant.p());
  B.topRows(q) = K_red.BK;
  Mat C = Mat::Zero(plant.m(), q + 1);
  C.leftCols(q) = K_red.CK;
  Controller K(block_diag(K_red.AK, Mat::Constant(1, 1, pad)), B, C);
  if (!is_stabilizing(plant, K).stable) {
    throw Error(ErrorKind::NotStabilizing, "bridge controller is not stabilizing");
  }
  return K;
}

namespace {

ConvexLift interpolate(const ConvexLift& Z0, const ConvexLift& Z1,
                       const Polar& p0, const Polar& p1, double t) {
  const Eigen::Index n = Z0.X.rows();
  ConvexLift Z;
  Z.X = (1.0 - t) * Z0.X + t * Z1.X;
  Z.Y = (1.0 - t) * Z0.Y + t * Z1.Y;
  Z.M = (1.0 - t) * Z0.M + t * Z1.M;
  Z.G = (1.0 - t) * Z0.G + t * Z1.G;
  Z.H = (1.0 - t) * Z0.H + t * Z1.H;
  Z.F = (1.0 - t) * Z0.F + t * Z1.F;
  Z.Pi = orthogonal_geodesic(p0.Q, p1.Q, t) * ((1.0 - t) * p0.P + t * p1.P);
  Z.Xi = (Mat::Identity(n, n) - Z.Y * Z.X) * Z.Pi.inverse();
  return Z;
}

std::optional<Controller> sample(const Plant& plant, const ConvexLift& Z) {
  try {
    Controller K = realize(plant, Z);
    if (is_stabilizing(plant, K).stable) return K;
  } catch (const Error&) {
  }
  return std::nullopt;
}

// k+1 controllers along the lifted segment Z0 -> Z1 (same Pi component).
std::vector<Controller> segment(const Plant& plant, const ConvexLift& Z0,
                                const ConvexLift& Z1, const Controller& K0,
                                const Controller& K1, int k) {
  const Polar p0 = polar_decomposition(Z0.Pi);
  const Polar p1 = polar_decomposition(Z1.Pi);
  std::vector<Controller> out;
  out.reserve(k + 1);
  out.push_back(K0);
  for (int i = 1; i < k; ++i) {
    const double t = static_cast<double>(i) / k;
    const double t_prev = static_cast<double>(i - 1) / k;
    std::optional<Controller> K = sample(plant, interpolate(Z0, Z1, p0, p1, t));
    // Local refinement towards the previous sample if verification fails.
    double tt = t;
    for (int h = 0; h < 30 && !K; ++h) {
      tt = 0.5 * (tt + t_prev);
      K = sample(plant, interpolate(Z0, Z1, p0, p1, tt));
    }
    if (!K) {
      throw Error(ErrorKind::StabilityLostOnPath,
                  "path sample failed the stability check");
    }
    out.push_back(*K);
  }
  out.push_back(K1);
  return out;
}

double det_sign(const Mat& M) { return M.determinant() > 0.0 ? 1.0 : -1.0; }

}  // namespace

std::vector<Controller> path_between(const Plant& plant, const Controller& K0,
                                     const Controller& K1, int steps,
                                     const std::optional<Controller>& bridge) {
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "steps must be positive");
  require_full_order(plant, K0);
  require_full_order(plant, K1);
  const ConvexLift Z0 = lift(plant, K0);
  const ConvexLift Z1 = lift(plant, K1);
  const double s0 = det_sign(Z0.Pi), s1 = det_sign(Z1.Pi);
  if (s0 == s1) return segment(plant, Z0, Z1, K0, K1, steps);
  if (!bridge) {
    throw Error(ErrorKind::NoPathFound,
                "endpoints lie in different lifted components and no bridge was supplied");
  }
  const Controller Kb = bridge_controller(plant, *bridge);
  const ConvexLift Zb = lift(plant, Kb);
  const Eigen::Index n = plant.n();
  Mat T = Mat::Identity(n, n);
  T(n - 1, n - 1) = -1.0;
  const ConvexLift Zb_flip = transform_lift(Zb, T);
  const double sb = det_sign(Zb.Pi);
  const ConvexLift& Zb0 = sb == s0 ? Zb : Zb_flip;
  const ConvexLift& Zb1 = sb == s1 ? Zb : Zb_flip;
  const int k0 = std::max(1, steps / 2);
  const int k1 = std::max(1, steps - k0);
  std::vector<Controller> first = segment(plant, Z0, Zb0, K0, Kb, k0);
  std::vector<Controller> second = segment(plant, Zb1, Z1, Kb, K1, k1);
  first.insert(first.end(), second.begin() + 1, second.end());
  return first;
}

std::optional<Controller> reduced_order_search(const Plant& plant, Eigen::Index q,
                                               const SearchConfig& cfg) {
  if (q < 0) throw Error(ErrorKind::InvalidArgument, "order must be non-negative");
  const Eigen::Index m = plant.m(), p = plant.p();
  const Controller zero(Mat(q, q), Mat(q, p), Mat(m, q));
  const double pad = plant.dom() == TimeDomain::Continuous ? -1.0 : 0.0;
  const Controller padded(pad * Mat::Identity(q, q), Mat::Zero(q, p), Mat::Zero(m, q));
  if (is_stabilizing(plant, q == 0 ? zero : padded).stable) {
    return q == 0 ? zero : padded;
  }
  if (q == 0) return std::nullopt;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> logscale(-1.0, 1.5);
  auto random_controller = [&](double scale) {
    Controller K(Mat(q, q), Mat(q, p), Mat(m, q));
    for (Eigen::Index i = 0; i < K.AK.size(); ++i) K.AK.data()[i] = scale * normal(rng);
    for (Eigen::Index i = 0; i < K.BK.size(); ++i) K.BK.data()[i] = scale * normal(rng);
    for (Eigen::Index i = 0; i < K.CK.size(); ++i) K.CK.data()[i] = scale * normal(rng);
    return K;
  };
  auto margin = [&](const Controller& K) { return is_stabilizing(plant, K).margin; };

  const long n_sample = cfg.budget - cfg.budget / 5;
  Controller best = random_controller(1.0);
  double best_margin = margin(best);
  long used = 1;
  for (; used < n_sample; ++used) {
    Controller K = random_controller(std::pow(10.0, logscale(rng)));
    const double mg = margin(K);
    if (mg < 0.0) return K;
    if (mg < best_margin) {
      best_margin = mg;
      best = K;
    }
  }
  // Hill climbing on the stability margin from the best sample.
  double step = 0.1 * (1.0 + best.AK.norm() + best.BK.norm() + best.CK.norm());
  for (; used < cfg.budget; ++used) {
    Controller K = best;
    const Controller dK = random_controller(step);
    K.AK += dK.AK;
    K.BK += dK.BK;
    K.CK += dK.CK;
    const double mg = margin(K);
    if (mg < 0.0) return K;
    if (mg < best_margin) {
      best_margin = mg;
      best = K;
      step *= 1.2;
    } else {
      step *= 0.98;
      if (step < 1e-8) step = 0.1 * (1.0 + best.AK.norm());
    }
  }
  return std::nullopt;
}

}  // namespace lqg
