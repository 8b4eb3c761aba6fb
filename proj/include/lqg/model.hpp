#pragma once

#include "lqg/linalg.hpp"

#include <optional>

namespace lqg {

struct AssumptionFlags {
  bool ab_controllable = false;   // (A, B)
  bool aw_controllable = false;   // (A, W^{1/2})
  bool ca_observable = false;     // (C, A)
  bool qa_observable = false;     // (Q^{1/2}, A)
  bool all() const {
    return ab_controllable && aw_controllable && ca_observable && qa_observable;
  }
};

// Plant (A, B, C) with noise covariances W, V and weights Q, R.
// Validated at construction; immutable afterwards.
class Plant {
 public:
  Plant(Mat A, Mat B, Mat C, Mat W, Mat V, Mat Q, Mat R,
        TimeDomain dom = TimeDomain::Continuous);

  const Mat& A() const { return A_; }
  const Mat& B() const { return B_; }
  const Mat& C() const { return C_; }
  const Mat& W() const { return W_; }
  const Mat& V() const { return V_; }
  const Mat& Q() const { return Q_; }
  const Mat& R() const { return R_; }
  TimeDomain dom() const { return dom_; }
  const AssumptionFlags& assumptions() const { return flags_; }

  Eigen::Index n() const { return A_.rows(); }
  Eigen::Index m() const { return B_.cols(); }
  Eigen::Index p() const { return C_.rows(); }

 private:
  Mat A_, B_, C_, W_, V_, Q_, R_;
  TimeDomain dom_;
  AssumptionFlags flags_;
};

// Dynamic output-feedback controller; D_K is zero for strictly proper ones.
struct Controller {
  Mat AK, BK, CK, DK;

  Controller() = default;
  Controller(Mat A_K, Mat B_K, Mat C_K);
  Controller(Mat A_K, Mat B_K, Mat C_K, Mat D_K);

  Eigen::Index q() const { return AK.rows(); }
  Eigen::Index m() const { return CK.rows(); }
  Eigen::Index p() const { return BK.cols(); }
  bool strictly_proper() const { return DK.size() == 0 || DK.isZero(0.0); }
};

// Tangent vector in the strictly proper controller space.
// Vectorization layout: [vec(dC); vec(dB); vec(dA)], column-major.
struct Direction {
  Mat dA, dB, dC;

  Direction() = default;
  Direction(Mat d_A, Mat d_B, Mat d_C)
      : dA(std::move(d_A)), dB(std::move(d_B)), dC(std::move(d_C)) {}

  static Direction zero(Eigen::Index q, Eigen::Index m, Eigen::Index p);
  static Direction from_vector(const Vec& v, Eigen::Index q, Eigen::Index m,
                               Eigen::Index p);

  Vec to_vector() const;
  double norm() const;
  double dot(const Direction& o) const;

  Direction operator+(const Direction& o) const;
  Direction operator-(const Direction& o) const;
  Direction operator*(double s) const;
};

Eigen::Index direction_dim(Eigen::Index q, Eigen::Index m, Eigen::Index p);

// K + t * d (D_K carried over unchanged).
Controller step(const Controller& K, const Direction& d, double t);

struct TangentBasis {
  std::vector<Direction> tangent;  // images of the elementary matrices E_ij
  Mat tangent_matrix;              // d x q^2, vectorized tangent directions
  Mat complement;                  // d x (d - q^2), orthonormal basis of TO_K^perp
  Mat tangent_orthonormal;         // d x q^2, orthonormal basis of TO_K
};

Mat closed_loop(const Plant& plant, const Controller& K);
StabilityReport is_stabilizing(const Plant& plant, const Controller& K);

Controller similarity(const Mat& T, const Controller& K);

CMat transfer_eval(const Controller& K, Complex s);

struct CanonicalForm {
  Controller K;
  Mat T;
  Vec b;  // A_K last row is -b
  Vec a;  // C_K = a^T
};

// Controllable canonical form: companion A_K, B_K = e_q, C_K = [a_0 ... a_{q-1}].
CanonicalForm canonical_form(const Controller& K);
Controller canonical_controller(const Vec& b, const Vec& a);

MinimalityReport controller_minimality(const Controller& K,
                                       double rank_tol = kRankTol);

TangentBasis tangent_space(const Controller& K, double rank_tol = kRankTol);

struct TangentSplit {
  Direction parallel;
  Direction perpendicular;
};
TangentSplit project_tangent(const Controller& K, const Direction& d);

// Residual of dA A_K^T - A_K^T dA + dB B_K^T - C_K^T dC.
Mat complement_residual(const Controller& K, const Direction& d);

std::optional<Mat> orbit_match(const Controller& K1, const Controller& K2,
                               double tol = 1e-8);

void check_compatible(const Plant& plant, const Controller& K);

}  // namespace lqg
