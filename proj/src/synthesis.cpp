#include "lqg/synthesis.hpp"

#include <cmath>

namespace lqg {

const char* to_string(StationaryVerdict v) {
  switch (v) {
    case StationaryVerdict::GlobalOptimum: return "GlobalOptimum";
    case StationaryVerdict::NonMinimalStationary: return "NonMinimalStationary";
    case StationaryVerdict::NotStationary: return "NotStationary";
    case StationaryVerdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

const char* to_string(SaddleClass c) {
  return c == SaddleClass::Indefinite ? "Indefinite" : "ZeroHessian";
}

CareSolution solve_filter_riccati(const Plant& plant) {
  CareSolution f = solve_care(plant.A().transpose(), plant.C().transpose(),
                              plant.V(), plant.W(), plant.dom());
  return {f.S, f.K.transpose()};
}

RiccatiSynthesis riccati_controller(const Plant& plant) {
  const AssumptionFlags& f = plant.assumptions();
  if (!f.all()) {
    std::string what = "plant violates the standing assumptions:";
    if (!f.ab_controllable) what += " (A,B) not controllable;";
    if (!f.aw_controllable) what += " (A,W^1/2) not controllable;";
    if (!f.ca_observable) what += " (C,A) not observable;";
    if (!f.qa_observable) what += " (Q^1/2,A) not observable;";
    throw Error(ErrorKind::AssumptionViolated, what);
  }
  const CareSolution ctrl = solve_care(plant.A(), plant.B(), plant.R(), plant.Q(),
                                       plant.dom());
  const CareSolution filt = solve_filter_riccati(plant);
  RiccatiSynthesis out;
  out.S = ctrl.S;
  out.Kgain = ctrl.K;
  out.P = filt.S;
  out.L = filt.K;
  out.K = Controller(plant.A() - plant.B() * out.Kgain - out.L * plant.C(), out.L,
                     -out.Kgain);
  out.J = lqg_cost(plant, out.K).J;
  return out;
}

namespace {

bool well_conditioned(const Mat& M) {
  if (M.rows() == 0) return false;
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec s = svd.singularValues();
  return s(s.size() - 1) > 1e-12 * s(0);
}

}  // namespace

StationaryReport analyze_stationary(const Plant& plant, const Controller& K,
                                    double tol, double riccati_tol) {
  StationaryReport rep;
  const CostEval ce = lqg_cost(plant, K);
  rep.J = ce.J;
  rep.grad_norm = lqg_gradient(plant, K, ce).norm();
  rep.minimality = controller_minimality(K);
  rep.minimal = rep.minimality.minimal;
  if (tol < 0.0) tol = stationarity_tolerance(ce.J);

  if (rep.grad_norm > tol) {
    rep.verdict = StationaryVerdict::NotStationary;
    return rep;
  }
  if (!rep.minimal) {
    rep.verdict = StationaryVerdict::NonMinimalStationary;
    return rep;
  }
  const Mat X22 = ce.X22(), Y22 = ce.Y22();
  if (K.q() != plant.n() || !well_conditioned(X22) || !well_conditioned(Y22)) {
    rep.verdict = StationaryVerdict::Inconclusive;
    return rep;
  }
  RecoveredRiccati r;
  const Mat X12 = ce.X12(), Y12 = ce.Y12();
  r.P = symmetrize(ce.X11() - X12 * X22.ldlt().solve(X12.transpose()));
  r.S = symmetrize(ce.Y11() - Y12 * Y22.ldlt().solve(Y12.transpose()));
  r.T = Y22.ldlt().solve(Mat(Y12.transpose()));
  r.rP = care_residual(plant.A().transpose(), plant.C().transpose(), plant.V(),
                       plant.W(), r.P, plant.dom());
  r.rS = care_residual(plant.A(), plant.B(), plant.R(), plant.Q(), r.S,
                       plant.dom());

  const Mat Kg = care_gain(plant.A(), plant.B(), plant.R(), r.S, plant.dom());
  const Mat L = care_gain(plant.A().transpose(), plant.C().transpose(), plant.V(),
                          r.P, plant.dom())
                    .transpose();
  r.gains_stabilizing = stability(plant.A() - plant.B() * Kg, plant.dom()).stable &&
                        stability(plant.A() - L * plant.C(), plant.dom()).stable;
  rep.verdict = (r.rP <= riccati_tol && r.rS <= riccati_tol && r.gains_stabilizing)
                    ? StationaryVerdict::GlobalOptimum
                    : StationaryVerdict::Inconclusive;
  rep.recovered = r;
  return rep;
}

Controller augment_stationary(const Plant& plant, const Controller& K_star,
                              const Mat& Lambda, double tol) {
  if (Lambda.rows() != Lambda.cols()) {
    throw Error(ErrorKind::NonSquare, "Lambda is not square");
  }
  const CostEval ce = lqg_cost(plant, K_star);
  const double gn = lqg_gradient(plant, K_star, ce).norm();
  if (tol < 0.0) tol = stationarity_tolerance(ce.J);
  if (gn > tol) {
    throw Error(ErrorKind::NotStationary,
                "gradient norm " + std::to_string(gn) + " exceeds tolerance");
  }
  if (!stability(Lambda, plant.dom()).stable) {
    throw Error(ErrorKind::UnstablePadding, "padding dynamics are not stable");
  }
  const Eigen::Index q = K_star.q(), r = Lambda.rows();
  Mat B = Mat::Zero(q + r, K_star.p());
  B.topRows(q) = K_star.BK;
  Mat C = Mat::Zero(K_star.m(), q + r);
  C.leftCols(q) = K_star.CK;
  return Controller(block_diag(K_star.AK, Lambda), B, C);
}

CMat zero_controller_G(const Plant& plant, Complex s) {
  const Mat Xop = solve_lyapunov(plant.A(), plant.W(), plant.dom());
  const Mat Yop = solve_lyapunov(plant.A().transpose(), plant.Q(), plant.dom());
  const Eigen::Index n = plant.n();
  const CMat res = (s * CMat::Identity(n, n) - plant.A().transpose().cast<Complex>())
                       .partialPivLu()
                       .solve((Yop * plant.B()).cast<Complex>());
  return (plant.C() * Xop).cast<Complex>() * res;
}

SaddleReport classify_zero_controller_saddle(const Plant& plant,
                                             const Mat& Lambda) {
  if (plant.dom() != TimeDomain::Continuous) {
    throw Error(ErrorKind::InvalidArgument,
                "saddle classification is defined for continuous-time plants");
  }
  if (!stability(plant.A(), plant.dom()).stable) {
    throw Error(ErrorKind::PlantNotStable, "plant is not open-loop stable");
  }
  if (Lambda.rows() != Lambda.cols()) {
    throw Error(ErrorKind::NonSquare, "Lambda is not square");
  }
  if (!stability(Lambda, plant.dom()).stable) {
    throw Error(ErrorKind::UnstablePadding, "Lambda is not stable");
  }
  if (!(eigenvector_condition(Lambda) <= 1e8)) {
    throw Error(ErrorKind::NonDiagonalizable, "Lambda is not diagonalizable");
  }
  const Mat Xop = solve_lyapunov(plant.A(), plant.W(), plant.dom());
  const Mat Yop = solve_lyapunov(plant.A().transpose(), plant.Q(), plant.dom());
  const double scale = 1.0 + (plant.C() * Xop).norm() * (Yop * plant.B()).norm();
  SaddleReport rep;
  rep.classification = SaddleClass::ZeroHessian;
  for (const Complex& l : sorted_eigenvalues(-Lambda)) {
    const CMat G = zero_controller_G(plant, l);
    rep.points.push_back(l);
    rep.G_values.push_back(G);
    if (G.norm() > 1e-9 * scale) rep.classification = SaddleClass::Indefinite;
  }
  return rep;
}

}  // namespace lqg
