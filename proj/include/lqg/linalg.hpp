#pragma once

#include "lqg/types.hpp"

#include <memory>

namespace lqg {

struct StabilityReport {
  double margin = 0.0;
  bool stable = false;
  std::vector<Complex> eigenvalues;
};

// Continuous: margin is the spectral abscissa. Discrete: spectral radius - 1.
StabilityReport stability(const Mat& M, TimeDomain dom);

// Eigenvalues sorted by (real, imag).
std::vector<Complex> sorted_eigenvalues(const Mat& M);

Mat symmetrize(const Mat& X);

// Continuous: M X + X M^T + S = 0.  Discrete: X = M X M^T + S.
Mat solve_lyapunov(const Mat& M, const Mat& S, TimeDomain dom);

// Factorizes the vectorized Lyapunov operator of M once so that many
// right-hand sides, and the adjoint equation for M^T, can be solved cheaply.
class LyapunovSolver {
 public:
  LyapunovSolver(const Mat& M, TimeDomain dom);

  // Solves the equation for M with right-hand side S.
  Mat solve(const Mat& S) const;
  // Solves the equation for M^T with right-hand side S.
  Mat solve_adjoint(const Mat& S) const;

  Eigen::Index dim() const { return n_; }

 private:
  using Index = Eigen::Index;
  Mat refine(const Mat& S, Vec x, bool adjoint) const;
  Mat residual(const Mat& X, const Mat& S, bool adjoint) const;

  Mat M_;
  TimeDomain dom_;
  Index n_;
  Mat op_;
  Eigen::PartialPivLU<Mat> lu_;
  Eigen::PartialPivLU<Mat> lu_adj_;
};

struct CareSolution {
  Mat S;  // stabilizing solution
  Mat K;  // optimal gain
};

// Continuous: A^T S + S A - S B R^{-1} B^T S + Q = 0, K = R^{-1} B^T S.
// Discrete:   S = A^T S A - A^T S B (B^T S B + R)^{-1} B^T S A + Q,
//             K = (B^T S B + R)^{-1} B^T S A.
CareSolution solve_care(const Mat& A, const Mat& B, const Mat& R, const Mat& Q,
                        TimeDomain dom);

// Gain associated with a Riccati solution S in the given domain.
Mat care_gain(const Mat& A, const Mat& B, const Mat& R, const Mat& S,
              TimeDomain dom);

// Riccati residual norm of S, normalized by 1 + ||S||.
double care_residual(const Mat& A, const Mat& B, const Mat& R, const Mat& Q,
                     const Mat& S, TimeDomain dom);

Mat ctrb(const Mat& A, const Mat& B);
Mat obsv(const Mat& C, const Mat& A);

struct MinimalityReport {
  bool controllable = false;
  bool observable = false;
  bool minimal = false;
  double sigma_c = 0.0;  // n-th singular value of ctrb
  double sigma_o = 0.0;  // n-th singular value of obsv
};

MinimalityReport minimality(const Mat& A, const Mat& B, const Mat& C,
                            double rank_tol = kRankTol);

// Numerical rank with threshold rank_tol * sigma_max.
Eigen::Index numerical_rank(const Mat& M, double rank_tol = kRankTol);

// PBH test on the eigenvalues outside the stability region of dom.
bool stabilizable(const Mat& A, const Mat& B, TimeDomain dom,
                  double rank_tol = kRankTol);
bool detectable(const Mat& C, const Mat& A, TimeDomain dom,
                double rank_tol = kRankTol);

// Symmetric PSD square root (negative eigenvalues clipped to zero).
Mat psd_sqrt(const Mat& S);

bool is_positive_definite(const Mat& S, double tol = 0.0);
bool is_positive_semidefinite(const Mat& S, double tol = 1e-12);

Mat block_diag(const Mat& A, const Mat& B);

// Column-major vectorization and its inverse.
Vec vec(const Mat& M);
Mat unvec(const Vec& v, Eigen::Index rows, Eigen::Index cols);

// Condition number of the eigenvector matrix (infinity if defective).
double eigenvector_condition(const Mat& M);

}  // namespace lqg
