#pragma once

#include "lqg/synthesis.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace lqg {

enum class Parameterization { Full, Canonical };
const char* to_string(Parameterization p);

struct OptimizerConfig {
  double alpha = 0.01;
  double beta = 0.5;
  double grad_tol = 1e-6;
  long max_iters = 10000;
  Parameterization parameterization = Parameterization::Full;
  std::uint64_t seed = 0;
  long snapshot_every = 100;
  void validate() const;
};

enum class Terminal { GradTolReached, MaxIters, LeftFeasibleSet, Stalled };
const char* to_string(Terminal t);

struct TraceRecord {
  long iter = 0;
  double J = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;  // accepted step size that produced this iterate
};

struct Trace {
  std::vector<TraceRecord> records;
  std::vector<std::pair<long, Controller>> snapshots;
  Controller final_controller;
  Terminal terminal = Terminal::MaxIters;
};

Trace descend(const Plant& plant, const Controller& K0, const OptimizerConfig& cfg);

using Rng = std::mt19937_64;

// Observer-based controller with state-feedback and observer poles drawn
// uniformly from pole_interval.
Controller init_pole_placement(const Plant& plant, std::pair<double, double> pole_interval,
                               Rng& rng, int max_retries = 50);

// Default sampling interval: (-2, -1) continuous, (0, 0.9) discrete.
std::pair<double, double> default_pole_interval(TimeDomain dom);

// Gain placing eig(A - B K) at poles (single-input reduction via a random
// input direction for multi-input plants).
Mat place_poles(const Mat& A, const Mat& B, const std::vector<double>& poles, Rng& rng);

Controller init_near_optimal(const Plant& plant, double delta, Rng& rng,
                             int max_retries = 100);

enum class LimitVerdict { GlobalOptimum, NonMinimalLimit, NotConverged };
const char* to_string(LimitVerdict v);

struct LimitCertificate {
  LimitVerdict verdict = LimitVerdict::NotConverged;
  double J = 0.0;
  double grad_norm = 0.0;
  MinimalityReport minimality;
  StationaryVerdict stationary = StationaryVerdict::Inconclusive;
  double rP = -1.0, rS = -1.0;
};

LimitCertificate certify_limit(const Plant& plant, const Controller& K, double tol,
                               double riccati_tol = 1e-6);

}  // namespace lqg
