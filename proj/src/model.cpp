#include "lqg/model.hpp"

#include <cmath>

namespace lqg {

namespace {

void require_shape(const Mat& M, Eigen::Index r, Eigen::Index c,
                   const std::string& name) {
  if (M.rows() != r || M.cols() != c) {
    throw Error(ErrorKind::InvalidPlant,
                name + " has shape " + std::to_string(M.rows()) + "x" +
                    std::to_string(M.cols()) + ", expected " +
                    std::to_string(r) + "x" + std::to_string(c));
  }
  if (!M.allFinite()) {
    throw Error(ErrorKind::InvalidPlant, name + " contains non-finite entries");
  }
}

Mat require_symmetric(const Mat& M, const std::string& name) {
  if ((M - M.transpose()).norm() > 1e-12 * (1.0 + M.norm())) {
    throw Error(ErrorKind::InvalidPlant, name + " not symmetric");
  }
  return symmetrize(M);
}

}  // namespace

Plant::Plant(Mat A, Mat B, Mat C, Mat W, Mat V, Mat Q, Mat R, TimeDomain dom)
    : dom_(dom) {
  const Eigen::Index n = A.rows();
  if (n == 0) throw Error(ErrorKind::InvalidPlant, "A is empty");
  require_shape(A, n, n, "A");
  require_shape(B, n, B.cols(), "B");
  require_shape(C, C.rows(), n, "C");
  if (B.cols() == 0) throw Error(ErrorKind::InvalidPlant, "B has no columns");
  if (C.rows() == 0) throw Error(ErrorKind::InvalidPlant, "C has no rows");
  const Eigen::Index m = B.cols();
  const Eigen::Index p = C.rows();
  require_shape(W, n, n, "W");
  require_shape(V, p, p, "V");
  require_shape(Q, n, n, "Q");
  require_shape(R, m, m, "R");
  W = require_symmetric(W, "W");
  V = require_symmetric(V, "V");
  Q = require_symmetric(Q, "Q");
  R = require_symmetric(R, "R");
  if (!is_positive_semidefinite(W)) {
    throw Error(ErrorKind::InvalidPlant, "W not positive semidefinite");
  }
  if (!is_positive_definite(V)) {
    throw Error(ErrorKind::InvalidPlant, "V not positive definite");
  }
  if (!is_positive_semidefinite(Q)) {
    throw Error(ErrorKind::InvalidPlant, "Q not positive semidefinite");
  }
  if (!is_positive_definite(R)) {
    throw Error(ErrorKind::InvalidPlant, "R not positive definite");
  }
  A_ = std::move(A);
  B_ = std::move(B);
  C_ = std::move(C);
  W_ = std::move(W);
  V_ = std::move(V);
  Q_ = std::move(Q);
  R_ = std::move(R);

  flags_.ab_controllable = minimality(A_, B_, C_).controllable;
  flags_.ca_observable = minimality(A_, B_, C_).observable;
  flags_.aw_controllable = minimality(A_, psd_sqrt(W_), C_).controllable;
  flags_.qa_observable = minimality(A_, B_, psd_sqrt(Q_)).observable;
}

Controller::Controller(Mat A_K, Mat B_K, Mat C_K)
    : AK(std::move(A_K)), BK(std::move(B_K)), CK(std::move(C_K)) {
  DK = Mat::Zero(CK.rows(), BK.cols());
}

Controller::Controller(Mat A_K, Mat B_K, Mat C_K, Mat D_K)
    : AK(std::move(A_K)), BK(std::move(B_K)), CK(std::move(C_K)),
      DK(std::move(D_K)) {}

Eigen::Index direction_dim(Eigen::Index q, Eigen::Index m, Eigen::Index p) {
  return q * q + q * p + m * q;
}

Direction Direction::zero(Eigen::Index q, Eigen::Index m, Eigen::Index p) {
  return Direction(Mat::Zero(q, q), Mat::Zero(q, p), Mat::Zero(m, q));
}

Direction Direction::from_vector(const Vec& v, Eigen::Index q, Eigen::Index m,
                                 Eigen::Index p) {
  if (v.size() != direction_dim(q, m, p)) {
    throw Error(ErrorKind::DimensionMismatch, "direction vector size");
  }
  Eigen::Index o = 0;
  Mat dC = unvec(v.segment(o, m * q), m, q);
  o += m * q;
  Mat dB = unvec(v.segment(o, q * p), q, p);
  o += q * p;
  Mat dA = unvec(v.segment(o, q * q), q, q);
  return Direction(std::move(dA), std::move(dB), std::move(dC));
}

Vec Direction::to_vector() const {
  Vec v(dC.size() + dB.size() + dA.size());
  v << vec(dC), vec(dB), vec(dA);
  return v;
}

double Direction::norm() const {
  return std::sqrt(dA.squaredNorm() + dB.squaredNorm() + dC.squaredNorm());
}

double Direction::dot(const Direction& o) const {
  return (dA.array() * o.dA.array()).sum() + (dB.array() * o.dB.array()).sum() +
         (dC.array() * o.dC.array()).sum();
}

Direction Direction::operator+(const Direction& o) const {
  return Direction(dA + o.dA, dB + o.dB, dC + o.dC);
}

Direction Direction::operator-(const Direction& o) const {
  return Direction(dA - o.dA, dB - o.dB, dC - o.dC);
}

Direction Direction::operator*(double s) const {
  return Direction(dA * s, dB * s, dC * s);
}

Controller step(const Controller& K, const Direction& d, double t) {
  return Controller(K.AK + t * d.dA, K.BK + t * d.dB, K.CK + t * d.dC, K.DK);
}

void check_compatible(const Plant& plant, const Controller& K) {
  const Eigen::Index q = K.AK.rows();
  if (K.AK.cols() != q || K.BK.rows() != q || K.CK.cols() != q ||
      K.BK.cols() != plant.p() || K.CK.rows() != plant.m() ||
      K.DK.rows() != plant.m() || K.DK.cols() != plant.p()) {
    throw Error(ErrorKind::DimensionMismatch,
                "controller dimensions do not match the plant");
  }
}

Mat closed_loop(const Plant& plant, const Controller& K) {
  check_compatible(plant, K);
  const Eigen::Index n = plant.n();
  const Eigen::Index q = K.q();
  Mat Acl(n + q, n + q);
  Acl.topLeftCorner(n, n) = plant.A() + plant.B() * K.DK * plant.C();
  Acl.topRightCorner(n, q) = plant.B() * K.CK;
  Acl.bottomLeftCorner(q, n) = K.BK * plant.C();
  Acl.bottomRightCorner(q, q) = K.AK;
  return Acl;
}

StabilityReport is_stabilizing(const Plant& plant, const Controller& K) {
  return stability(closed_loop(plant, K), plant.dom());
}

Controller similarity(const Mat& T, const Controller& K) {
  if (T.rows() != K.q() || T.cols() != K.q()) {
    throw Error(ErrorKind::DimensionMismatch, "similarity: T has wrong size");
  }
  if (K.q() == 0) return K;
  Eigen::JacobiSVD<Mat> svd(T);
  const Vec s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-12 * s(0))) {
    throw Error(ErrorKind::SingularTransform, "similarity transform is singular");
  }
  Eigen::PartialPivLU<Mat> lu(T);
  const Mat Ti = lu.inverse();
  return Controller(T * K.AK * Ti, T * K.BK, K.CK * Ti, K.DK);
}

CMat transfer_eval(const Controller& K, Complex s) {
  const Eigen::Index q = K.q();
  CMat G = K.DK.cast<Complex>();
  if (G.size() == 0) G = CMat::Zero(K.m(), K.p());
  if (q == 0) return G;
  const CMat sIA = s * CMat::Identity(q, q) - K.AK.cast<Complex>();
  Eigen::JacobiSVD<CMat> svd(sIA);
  const double smin = svd.singularValues()(q - 1);
  const double scale = std::max({1.0, K.AK.norm(), std::abs(s)});
  if (smin <= 1e-13 * scale) {
    throw Error(ErrorKind::PoleHit, "evaluation point is a pole of the controller");
  }
  return G + K.CK.cast<Complex>() * sIA.partialPivLu().solve(K.BK.cast<Complex>());
}

Controller canonical_controller(const Vec& b, const Vec& a) {
  const Eigen::Index q = b.size();
  Mat A = Mat::Zero(q, q);
  if (q > 1) A.topRightCorner(q - 1, q - 1).setIdentity();
  A.row(q - 1) = -b.transpose();
  Mat B = Mat::Zero(q, 1);
  B(q - 1, 0) = 1.0;
  return Controller(A, B, a.transpose());
}

CanonicalForm canonical_form(const Controller& K) {
  if (K.m() != 1 || K.p() != 1) {
    throw Error(ErrorKind::NotSISO, "canonical form needs a SISO controller");
  }
  const Eigen::Index q = K.q();
  const Mat Ck = ctrb(K.AK, K.BK);
  if (numerical_rank(Ck) < q) {
    throw Error(ErrorKind::NotControllable, "(A_K, B_K) is not controllable");
  }
  Eigen::PartialPivLU<Mat> lu(Ck);
  Mat AqB = K.BK;
  for (Eigen::Index i = 0; i < q; ++i) AqB = K.AK * AqB;
  const Vec b = -lu.solve(AqB);

  CanonicalForm out;
  out.b = b;
  Controller companion = canonical_controller(b, Vec::Zero(q));
  out.T = ctrb(companion.AK, companion.BK) * lu.inverse();
  out.a = (K.CK * out.T.inverse()).transpose();
  out.K = canonical_controller(out.b, out.a);
  return out;
}

MinimalityReport controller_minimality(const Controller& K, double rank_tol) {
  if (K.q() == 0) {
    MinimalityReport r;
    r.controllable = r.observable = r.minimal = true;
    return r;
  }
  return minimality(K.AK, K.BK, K.CK, rank_tol);
}

Mat complement_residual(const Controller& K, const Direction& d) {
  return d.dA * K.AK.transpose() - K.AK.transpose() * d.dA +
         d.dB * K.BK.transpose() - K.CK.transpose() * d.dC;
}

TangentBasis tangent_space(const Controller& K, double rank_tol) {
  if (!controller_minimality(K, rank_tol).minimal) {
    throw Error(ErrorKind::NonMinimalController,
                "tangent space of the orbit needs a minimal controller");
  }
  const Eigen::Index q = K.q();
  const Eigen::Index d = direction_dim(q, K.m(), K.p());
  TangentBasis tb;
  tb.tangent_matrix.resize(d, q * q);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = 0; i < q; ++i) {
      Mat H = Mat::Zero(q, q);
      H(i, j) = 1.0;
      Direction e(H * K.AK - K.AK * H, H * K.BK, -K.CK * H);
      tb.tangent_matrix.col(j * q + i) = e.to_vector();
      tb.tangent.push_back(std::move(e));
    }
  }
  Eigen::JacobiSVD<Mat> svd(tb.tangent_matrix, Eigen::ComputeFullU);
  if (numerical_rank(tb.tangent_matrix, rank_tol) < q * q) {
    throw Error(ErrorKind::NonMinimalController,
                "orbit tangent map is not injective");
  }
  tb.tangent_orthonormal = svd.matrixU().leftCols(q * q);
  tb.complement = svd.matrixU().rightCols(d - q * q);
  return tb;
}

TangentSplit project_tangent(const Controller& K, const Direction& d) {
  const TangentBasis tb = tangent_space(K);
  const Vec v = d.to_vector();
  const Vec par = tb.tangent_orthonormal * (tb.tangent_orthonormal.transpose() * v);
  return {Direction::from_vector(par, K.q(), K.m(), K.p()),
          Direction::from_vector(v - par, K.q(), K.m(), K.p())};
}

namespace {

double controller_scale(const Controller& K) {
  return 1.0 + K.AK.norm() + K.BK.norm() + K.CK.norm();
}

bool similar_by(const Mat& T, const Controller& K1, const Controller& K2,
                double tol) {
  Eigen::JacobiSVD<Mat> svd(T);
  const Vec s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-10 * s(0))) return false;
  const Controller K = similarity(T, K1);
  const double err = (K.AK - K2.AK).norm() + (K.BK - K2.BK).norm() +
                     (K.CK - K2.CK).norm();
  return err <= tol * controller_scale(K2);
}

// Solves T A1 = A2 T, T B1 = B2, C1 = C2 T in the least-squares sense.
Mat intertwiner(const Controller& K1, const Controller& K2) {
  const Eigen::Index q = K1.q();
  const Eigen::Index p = K1.p();
  const Eigen::Index m = K1.m();
  const Mat I = Mat::Identity(q, q);
  Mat L = Mat::Zero(q * q + q * p + m * q, q * q);
  Vec r = Vec::Zero(L.rows());
  // vec(T A1) = (A1^T kron I) t, vec(A2 T) = (I kron A2) t
  for (Eigen::Index a = 0; a < q; ++a) {
    for (Eigen::Index b = 0; b < q; ++b) {
      L.block(a * q, b * q, q, q) += K1.AK(b, a) * I;
      if (a == b) L.block(a * q, b * q, q, q) -= K2.AK;
    }
  }
  // vec(T B1) = (B1^T kron I) t
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = 0; b < q; ++b) {
      L.block(q * q + a * q, b * q, q, q) += K1.BK(b, a) * I;
    }
  }
  r.segment(q * q, q * p) = vec(K2.BK);
  // vec(C2 T) = (I kron C2) t
  for (Eigen::Index b = 0; b < q; ++b) {
    L.block(q * q + q * p + b * m, b * q, m, q) = K2.CK;
  }
  r.segment(q * q + q * p, m * q) = vec(K1.CK);
  return unvec(L.completeOrthogonalDecomposition().solve(r), q, q);
}

}  // namespace

std::optional<Mat> orbit_match(const Controller& K1, const Controller& K2,
                               double tol) {
  if (K1.q() != K2.q() || K1.m() != K2.m() || K1.p() != K2.p()) {
    throw Error(ErrorKind::DimensionMismatch, "orbit_match: controller sizes differ");
  }
  const Eigen::Index q = K1.q();
  if (q == 0) return Mat(0, 0);
  const bool minimal1 = controller_minimality(K1).minimal;
  const bool minimal2 = controller_minimality(K2).minimal;
  if (minimal1 != minimal2) return std::nullopt;
  if (!minimal1) {
    // Without minimality the similarity need not be unique; search the
    // intertwining equations directly.
    const Mat T = intertwiner(K1, K2);
    if (similar_by(T, K1, K2, tol)) return T;
    return std::nullopt;
  }
  // Markov parameters C A^j B, j < 2q, must agree.
  Mat M1 = K1.BK, M2 = K2.BK;
  for (Eigen::Index j = 0; j < 2 * q; ++j) {
    const double d = (K1.CK * M1 - K2.CK * M2).norm();
    const double s = (K1.CK * M1).norm() + (K2.CK * M2).norm();
    if (d > 100.0 * tol * (1.0 + s)) {
      return std::nullopt;
    }
    M1 = K1.AK * M1;
    M2 = K2.AK * M2;
  }
  const Mat C1 = ctrb(K1.AK, K1.BK);
  const Mat C2 = ctrb(K2.AK, K2.BK);
  const Mat T = C2 * C1.transpose() * (C1 * C1.transpose()).inverse();
  const Mat O1 = obsv(K1.CK, K1.AK);
  const Mat O2 = obsv(K2.CK, K2.AK);
  if ((O2 * T - O1).norm() > tol * (1.0 + O1.norm()) * (1.0 + T.norm())) {
    return std::nullopt;
  }
  if (!similar_by(T, K1, K2, tol)) return std::nullopt;
  return T;
}

}  // namespace lqg
