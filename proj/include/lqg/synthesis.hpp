#pragma once

#include "lqg/cost.hpp"

#include <optional>

namespace lqg {

struct RiccatiSynthesis {
  Controller K;
  double J = 0.0;
  Mat P, S;        // filter and control Riccati solutions
  Mat Kgain, L;    // state-feedback and observer gains
};

// Observer-based optimal controller A_K = A - BK - LC, B_K = L, C_K = -K.
RiccatiSynthesis riccati_controller(const Plant& plant);

// Filter Riccati solution P and observer gain L via duality.
CareSolution solve_filter_riccati(const Plant& plant);

enum class StationaryVerdict { GlobalOptimum, NonMinimalStationary, NotStationary, Inconclusive };
const char* to_string(StationaryVerdict v);

struct RecoveredRiccati {
  Mat T, P, S;
  double rP = 0.0;  // filter Riccati residual
  double rS = 0.0;  // control Riccati residual
  bool gains_stabilizing = false;
};

struct StationaryReport {
  double J = 0.0;
  double grad_norm = 0.0;
  bool minimal = false;
  MinimalityReport minimality;
  std::optional<RecoveredRiccati> recovered;
  StationaryVerdict verdict = StationaryVerdict::Inconclusive;
};

// tol < 0 selects the default 1e-6 (1 + |J|).
StationaryReport analyze_stationary(const Plant& plant, const Controller& K,
                                    double tol = -1.0,
                                    double riccati_tol = 1e-6);

// Block-embeds a stationary controller with extra stable dynamics Lambda.
Controller augment_stationary(const Plant& plant, const Controller& K_star,
                              const Mat& Lambda, double tol = -1.0);

enum class SaddleClass { Indefinite, ZeroHessian };
const char* to_string(SaddleClass c);

struct SaddleReport {
  SaddleClass classification = SaddleClass::Indefinite;
  std::vector<Complex> points;    // eigenvalues of -Lambda
  std::vector<CMat> G_values;     // G evaluated at each point
};

// G(s) = C X_op (sI - A^T)^{-1} Y_op B for an open-loop stable plant.
CMat zero_controller_G(const Plant& plant, Complex s);

// Classifies the stationary point (A_K = Lambda, B_K = 0, C_K = 0).
SaddleReport classify_zero_controller_saddle(const Plant& plant,
                                             const Mat& Lambda);

}  // namespace lqg
