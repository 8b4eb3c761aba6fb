#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace lqg {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

enum class TimeDomain { Continuous, Discrete };

const char* to_string(TimeDomain dom);

enum class ErrorKind {
  NonSquare,
  DimensionMismatch,
  InvalidPlant,
  InvalidArgument,
  UnstableCoefficient,
  IllConditioned,
  NotStabilizable,
  NoStabilizingSolution,
  SingularTransform,
  PoleHit,
  NotControllable,
  NotSISO,
  NonMinimalController,
  NotStabilizing,
  NotStationary,
  AssumptionViolated,
  UnstablePadding,
  PlantNotStable,
  NonDiagonalizable,
  InvariantViolated,
  NoPathFound,
  StabilityLostOnPath,
  PlacementFailed,
  RetriesExhausted,
  NotProper,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Default numerical tolerances shared across modules.
inline constexpr double kRtol = 1e-9;
inline constexpr double kRankTol = 1e-8;

}  // namespace lqg
