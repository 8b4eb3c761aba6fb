#pragma once

#include "lqg/model.hpp"

namespace lqg {

struct CostEval {
  double J = 0.0;
  double gap = 0.0;  // |tr(Qbar X) - tr(Sigma Y)|
  Mat X, Y;          // closed-loop Lyapunov solutions, size n+q
  Mat Acl;
  Eigen::Index n = 0, q = 0;

  Mat X11() const { return X.topLeftCorner(n, n); }
  Mat X12() const { return X.topRightCorner(n, q); }
  Mat X22() const { return X.bottomRightCorner(q, q); }
  Mat Y11() const { return Y.topLeftCorner(n, n); }
  Mat Y12() const { return Y.topRightCorner(n, q); }
  Mat Y22() const { return Y.bottomRightCorner(q, q); }
};

struct GradientTriple {
  Mat gA, gB, gC;
  double norm() const;
  Direction as_direction() const { return Direction(gA, gB, gC); }
};

CostEval lqg_cost(const Plant& plant, const Controller& K);

GradientTriple lqg_gradient(const Plant& plant, const Controller& K);
GradientTriple lqg_gradient(const Plant& plant, const Controller& K,
                            const CostEval& ce);

double hessian_quadratic_form(const Plant& plant, const Controller& K,
                              const Direction& d);

// J(K_to) - J(K_from) for controllers of equal order, assembled from the
// differences of the closed-loop data. Accurate relative to the difference
// itself, where subtracting two evaluated costs would cancel.
double cost_difference(const Plant& plant, const Controller& K_from, const CostEval& from,
                       const Controller& K_to, const CostEval& to);

// Polarization of the quadratic form.
double hessian_bilinear(const Plant& plant, const Controller& K,
                        const Direction& d1, const Direction& d2);

// Full Hessian over the Direction layout, d = q^2 + qp + mq.
Mat hessian_matrix(const Plant& plant, const Controller& K);

struct RestrictedSpectrum {
  double min_eig = 0.0;
  double max_eig = 0.0;
  double rcond = 0.0;
  Vec eigenvalues;
};

// Spectrum of the Hessian restricted to the orthogonal complement of the
// orbit tangent space.
RestrictedSpectrum restricted_rcond(const Plant& plant, const Controller& K);

// Stationarity threshold ||grad||_F <= 1e-6 (1 + |J|).
double stationarity_tolerance(double J);

}  // namespace lqg
