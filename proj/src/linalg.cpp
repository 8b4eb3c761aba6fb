#include "lqg/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <limits>

namespace lqg {

const char* to_string(TimeDomain dom) {
  return dom == TimeDomain::Continuous ? "continuous" : "discrete";
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidPlant: return "InvalidPlant";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnstableCoefficient: return "UnstableCoefficient";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotStabilizable: return "NotStabilizable";
    case ErrorKind::NoStabilizingSolution: return "NoStabilizingSolution";
    case ErrorKind::SingularTransform: return "SingularTransform";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::NotControllable: return "NotControllable";
    case ErrorKind::NotSISO: return "NotSISO";
    case ErrorKind::NonMinimalController: return "NonMinimalController";
    case ErrorKind::NotStabilizing: return "NotStabilizing";
    case ErrorKind::NotStationary: return "NotStationary";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::UnstablePadding: return "UnstablePadding";
    case ErrorKind::PlantNotStable: return "PlantNotStable";
    case ErrorKind::NonDiagonalizable: return "NonDiagonalizable";
    case ErrorKind::InvariantViolated: return "InvariantViolated";
    case ErrorKind::NoPathFound: return "NoPathFound";
    case ErrorKind::StabilityLostOnPath: return "StabilityLostOnPath";
    case ErrorKind::PlacementFailed: return "PlacementFailed";
    case ErrorKind::RetriesExhausted: return "RetriesExhausted";
    case ErrorKind::NotProper: return "NotProper";
  }
  return "Unknown";
}

namespace {

void require_square(const Mat& M, const char* name) {
  if (M.rows() != M.cols()) {
    throw Error(ErrorKind::NonSquare, std::string(name) + " is not square");
  }
}

}  // namespace

std::vector<Complex> sorted_eigenvalues(const Mat& M) {
  require_square(M, "matrix");
  std::vector<Complex> ev;
  if (M.rows() == 0) return ev;
  Eigen::EigenSolver<Mat> es(M, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::IllConditioned, "eigenvalue iteration did not converge");
  }
  ev.assign(es.eigenvalues().data(), es.eigenvalues().data() + M.rows());
  std::sort(ev.begin(), ev.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return ev;
}

StabilityReport stability(const Mat& M, TimeDomain dom) {
  StabilityReport r;
  r.eigenvalues = sorted_eigenvalues(M);
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& l : r.eigenvalues) {
    m = std::max(m, dom == TimeDomain::Continuous ? l.real() : std::abs(l));
  }
  if (dom == TimeDomain::Discrete) m -= 1.0;
  r.margin = m;
  r.stable = m < 0.0;
  return r;
}

Mat symmetrize(const Mat& X) { return 0.5 * (X + X.transpose()); }

Vec vec(const Mat& M) {
  return Eigen::Map<const Vec>(M.data(), M.size());
}

Mat unvec(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw Error(ErrorKind::DimensionMismatch, "unvec size mismatch");
  }
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

LyapunovSolver::LyapunovSolver(const Mat& M, TimeDomain dom)
    : M_(M), dom_(dom), n_(M.rows()) {
  require_square(M, "Lyapunov coefficient");
  if (!stability(M, dom).stable) {
    throw Error(ErrorKind::UnstableCoefficient,
                "Lyapunov coefficient is not stable");
  }
  const Index nn = n_ * n_;
  const Mat I = Mat::Identity(n_, n_);
  op_.resize(nn, nn);
  if (dom == TimeDomain::Continuous) {
    // vec(M X) = (I kron M) vec X,  vec(X M^T) = (M kron I) vec X
    op_ = Eigen::kroneckerProduct(I, M) + Eigen::kroneckerProduct(M, I);
  } else {
    op_ = Mat::Identity(nn, nn) - Eigen::kroneckerProduct(M, M);
  }
  lu_.compute(op_);
  lu_adj_.compute(op_.transpose());
}

Mat LyapunovSolver::residual(const Mat& X, const Mat& S, bool adjoint) const {
  const Mat M = adjoint ? Mat(M_.transpose()) : M_;
  if (dom_ == TimeDomain::Continuous) return M * X + X * M.transpose() + S;
  return M * X * M.transpose() + S - X;
}

Mat LyapunovSolver::refine(const Mat& S, Vec x, bool adjoint) const {
  const Vec rhs = dom_ == TimeDomain::Continuous ? Vec(-vec(S)) : vec(S);
  for (int it = 0; it < 2; ++it) {
    const Vec r = adjoint ? Vec(rhs - op_.transpose() * x) : Vec(rhs - op_ * x);
    x += adjoint ? Vec(lu_adj_.solve(r)) : Vec(lu_.solve(r));
  }
  Mat X = symmetrize(unvec(x, n_, n_));
  const double res = residual(X, S, adjoint).norm();
  if (!std::isfinite(res) || res > kRtol * (1.0 + X.norm())) {
    throw Error(ErrorKind::IllConditioned,
                "Lyapunov residual exceeds tolerance");
  }
  return X;
}

Mat LyapunovSolver::solve(const Mat& S) const {
  if (S.rows() != n_ || S.cols() != n_) {
    throw Error(ErrorKind::DimensionMismatch, "Lyapunov right-hand side size");
  }
  const Vec rhs = dom_ == TimeDomain::Continuous ? Vec(-vec(S)) : vec(S);
  return refine(S, lu_.solve(rhs), false);
}

Mat LyapunovSolver::solve_adjoint(const Mat& S) const {
  if (S.rows() != n_ || S.cols() != n_) {
    throw Error(ErrorKind::DimensionMismatch, "Lyapunov right-hand side size");
  }
  const Vec rhs = dom_ == TimeDomain::Continuous ? Vec(-vec(S)) : vec(S);
  return refine(S, lu_adj_.solve(rhs), true);
}

Mat solve_lyapunov(const Mat& M, const Mat& S, TimeDomain dom) {
  require_square(S, "Lyapunov right-hand side");
  return LyapunovSolver(M, dom).solve(S);
}

Mat block_diag(const Mat& A, const Mat& B) {
  Mat D = Mat::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  D.topLeftCorner(A.rows(), A.cols()) = A;
  D.bottomRightCorner(B.rows(), B.cols()) = B;
  return D;
}

Mat psd_sqrt(const Mat& S) {
  if (S.rows() == 0) return S;
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(S));
  const Vec d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return symmetrize(es.eigenvectors() * d.asDiagonal() *
                    es.eigenvectors().transpose());
}

bool is_positive_definite(const Mat& S, double tol) {
  if (S.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > tol * std::max(1.0, S.norm());
}

bool is_positive_semidefinite(const Mat& S, double tol) {
  if (S.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol * std::max(1.0, S.norm());
}

Mat ctrb(const Mat& A, const Mat& B) {
  require_square(A, "A");
  if (B.rows() != A.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "ctrb: B rows differ from A");
  }
  const Eigen::Index n = A.rows();
  Mat Cm(n, n * B.cols());
  Mat blk = B;
  for (Eigen::Index i = 0; i < n; ++i) {
    Cm.middleCols(i * B.cols(), B.cols()) = blk;
    blk = A * blk;
  }
  return Cm;
}

Mat obsv(const Mat& C, const Mat& A) {
  require_square(A, "A");
  if (C.cols() != A.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "obsv: C cols differ from A");
  }
  return ctrb(A.transpose(), C.transpose()).transpose();
}

Eigen::Index numerical_rank(const Mat& M, double rank_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rank_tol * s(0)) ++r;
  }
  return r;
}

namespace {

// n-th singular value of M (zero when M has fewer than n of them) and rank decision.
std::pair<bool, double> full_row_rank(const Mat& M, double rank_tol) {
  const Eigen::Index n = M.rows();
  if (n == 0) return {true, 0.0};
  if (M.cols() < n) return {false, 0.0};
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec s = svd.singularValues();
  const double sn = s(n - 1);
  return {s(0) > 0.0 && sn > rank_tol * s(0), sn};
}

}  // namespace

MinimalityReport minimality(const Mat& A, const Mat& B, const Mat& C,
                            double rank_tol) {
  MinimalityReport r;
  const auto c = full_row_rank(ctrb(A, B), rank_tol);
  const auto o = full_row_rank(obsv(C, A).transpose(), rank_tol);
  r.controllable = c.first;
  r.sigma_c = c.second;
  r.observable = o.first;
  r.sigma_o = o.second;
  r.minimal = r.controllable && r.observable;
  return r;
}

bool stabilizable(const Mat& A, const Mat& B, TimeDomain dom, double rank_tol) {
  require_square(A, "A");
  const Eigen::Index n = A.rows();
  const double scale = std::max(1.0, std::max(A.norm(), B.norm()));
  for (const auto& l : sorted_eigenvalues(A)) {
    const bool bad = dom == TimeDomain::Continuous ? l.real() >= 0.0
                                                   : std::abs(l) >= 1.0;
    if (!bad) continue;
    CMat P(n, n + B.cols());
    P.leftCols(n) = A.cast<Complex>() - l * CMat::Identity(n, n);
    P.rightCols(B.cols()) = B.cast<Complex>();
    Eigen::JacobiSVD<CMat> svd(P);
    if (svd.singularValues()(n - 1) <= rank_tol * scale) return false;
  }
  return true;
}

bool detectable(const Mat& C, const Mat& A, TimeDomain dom, double rank_tol) {
  return stabilizable(A.transpose(), C.transpose(), dom, rank_tol);
}

double eigenvector_condition(const Mat& M) {
  require_square(M, "matrix");
  if (M.rows() == 0) return 1.0;
  Eigen::EigenSolver<Mat> es(M);
  CMat V = es.eigenvectors();
  for (Eigen::Index j = 0; j < V.cols(); ++j) V.col(j).normalize();
  Eigen::JacobiSVD<CMat> svd(V);
  const auto s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

namespace {

// Stable invariant subspace of the Hamiltonian via the matrix sign function.
Mat care_sign_initial(const Mat& A, const Mat& G, const Mat& Q) {
  const Eigen::Index n = A.rows();
  Mat H(2 * n, 2 * n);
  H << A, -G, -Q, -A.transpose();
  Mat Z = H;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    Eigen::PartialPivLU<Mat> lu(Z);
    const Mat U = lu.matrixLU();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < U.rows(); ++i) logdet += std::log(std::abs(U(i, i)));
    if (!std::isfinite(logdet)) {
      throw Error(ErrorKind::NoStabilizingSolution,
                  "Hamiltonian has eigenvalues on the imaginary axis");
    }
    const double c = std::exp(logdet / static_cast<double>(2 * n));
    const Mat Zn = 0.5 * (Z / c + c * lu.inverse());
    const double diff = (Zn - Z).norm();
    Z = Zn;
    if (diff <= 1e-13 * Z.norm()) {
      converged = true;
      break;
    }
  }
  if (!converged || !Z.allFinite()) {
    throw Error(ErrorKind::NoStabilizingSolution,
                "sign iteration on the Hamiltonian did not converge");
  }
  Mat lhs(2 * n, n), rhs(2 * n, n);
  lhs << Z.topRightCorner(n, n), Z.bottomRightCorner(n, n) + Mat::Identity(n, n);
  rhs << Z.topLeftCorner(n, n) + Mat::Identity(n, n), Z.bottomLeftCorner(n, n);
  return symmetrize(lhs.colPivHouseholderQr().solve(-rhs));
}

// Structure-preserving doubling for X = A^T X (I + G X)^{-1} A + Q.
Mat dare_doubling_initial(const Mat& A, const Mat& G, const Mat& Q) {
  const Eigen::Index n = A.rows();
  const Mat I = Mat::Identity(n, n);
  Mat Ak = A, Gk = G, Hk = Q;
  for (int it = 0; it < 100; ++it) {
    Eigen::PartialPivLU<Mat> lu(I + Gk * Hk);
    const Mat WA = lu.solve(Ak);
    const Mat WG = lu.solve(Gk);
    const Mat An = Ak * WA;
    const Mat Gn = Gk + Ak * WG * Ak.transpose();
    const Mat Hn = Hk + Ak.transpose() * Hk * WA;
    const double diff = (Hn - Hk).norm();
    Ak = An;
    Gk = symmetrize(Gn);
    Hk = symmetrize(Hn);
    if (!Hk.allFinite()) break;
    if (diff <= 1e-14 * std::max(1.0, Hk.norm())) return Hk;
  }
  throw Error(ErrorKind::NoStabilizingSolution, "doubling iteration did not converge");
}

}  // namespace

Mat care_gain(const Mat& A, const Mat& B, const Mat& R, const Mat& S,
              TimeDomain dom) {
  if (dom == TimeDomain::Continuous) return R.ldlt().solve(B.transpose() * S);
  const Mat BS = B.transpose() * S;
  return (BS * B + R).ldlt().solve(BS * A);
}

double care_residual(const Mat& A, const Mat& B, const Mat& R, const Mat& Q,
                     const Mat& S, TimeDomain dom) {
  Mat res;
  if (dom == TimeDomain::Continuous) {
    res = A.transpose() * S + S * A -
          S * B * R.ldlt().solve(B.transpose() * S) + Q;
  } else {
    const Mat BS = B.transpose() * S;
    res = A.transpose() * S * A -
          A.transpose() * BS.transpose() * (BS * B + R).ldlt().solve(BS * A) +
          Q - S;
  }
  return res.norm() / (1.0 + S.norm());
}

CareSolution solve_care(const Mat& A, const Mat& B, const Mat& R, const Mat& Q,
                        TimeDomain dom) {
  require_square(A, "A");
  const Eigen::Index n = A.rows();
  if (B.rows() != n || R.rows() != B.cols() || R.cols() != B.cols() ||
      Q.rows() != n || Q.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "solve_care: inconsistent sizes");
  }
  if (!is_positive_definite(R)) {
    throw Error(ErrorKind::InvalidArgument, "R not positive definite");
  }
  if (!stabilizable(A, B, dom)) {
    throw Error(ErrorKind::NotStabilizable, "(A, B) is not stabilizable");
  }
  const Mat G = symmetrize(B * R.ldlt().solve(B.transpose()));
  Mat S = dom == TimeDomain::Continuous ? care_sign_initial(A, G, Q)
                                        : dare_doubling_initial(A, G, Q);
  if (!S.allFinite()) {
    throw Error(ErrorKind::NoStabilizingSolution, "Riccati iterate not finite");
  }

  // Newton refinement (Kleinman / Hewer) from the stabilizing initial guess.
  double res = care_residual(A, B, R, Q, S, dom);
  for (int it = 0; it < 8 && res > 1e-15; ++it) {
    const Mat K = care_gain(A, B, R, S, dom);
    const Mat Acl = A - B * K;
    if (!stability(Acl, dom).stable) break;
    Mat Sn;
    try {
      Sn = solve_lyapunov(Acl.transpose(), symmetrize(Q + K.transpose() * R * K), dom);
    } catch (const Error&) {
      break;
    }
    const double rn = care_residual(A, B, R, Q, Sn, dom);
    if (!(rn < res)) break;
    S = Sn;
    res = rn;
  }

  CareSolution sol;
  sol.S = symmetrize(S);
  sol.K = care_gain(A, B, R, sol.S, dom);
  if (!stability(A - B * sol.K, dom).stable) {
    throw Error(ErrorKind::NoStabilizingSolution,
                "Riccati solution is not stabilizing");
  }
  if (res > kRtol) {
    throw Error(ErrorKind::NoStabilizingSolution,
                "Riccati residual exceeds tolerance");
  }
  return sol;
}

}  // namespace lqg
