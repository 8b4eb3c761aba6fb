#include "lqg/cost.hpp"

#include <cmath>

namespace lqg {

double GradientTriple::norm() const {
  return std::sqrt(gA.squaredNorm() + gB.squaredNorm() + gC.squaredNorm());
}

double stationarity_tolerance(double J) { return 1e-6 * (1.0 + std::abs(J)); }

namespace {

void require_strictly_proper(const Controller& K) {
  if (!K.strictly_proper()) {
    throw Error(ErrorKind::NotProper,
                "cost evaluation needs a strictly proper controller");
  }
}

// Closed-loop data shared by the cost, gradient and Hessian.
struct Evaluation {
  CostEval ce;
  LyapunovSolver solver;
};

Evaluation evaluate(const Plant& plant, const Controller& K) {
  require_strictly_proper(K);
  const Mat Acl = closed_loop(plant, K);
  if (!stability(Acl, plant.dom()).stable) {
    throw Error(ErrorKind::NotStabilizing, "controller is not stabilizing");
  }
  const Eigen::Index n = plant.n();
  const Eigen::Index q = K.q();
  const Mat Sigma = block_diag(plant.W(), K.BK * plant.V() * K.BK.transpose());
  const Mat Qbar = block_diag(plant.Q(), K.CK.transpose() * plant.R() * K.CK);

  Evaluation ev{CostEval{}, LyapunovSolver(Acl, plant.dom())};
  CostEval& ce = ev.ce;
  ce.n = n;
  ce.q = q;
  ce.Acl = Acl;
  ce.X = ev.solver.solve(Sigma);
  ce.Y = ev.solver.solve_adjoint(Qbar);
  const double j1 = (Qbar.array() * ce.X.array()).sum();
  const double j2 = (Sigma.array() * ce.Y.array()).sum();
  ce.J = 0.5 * (j1 + j2);
  ce.gap = std::abs(j1 - j2);
  return ev;
}

GradientTriple gradient_from(const Plant& plant, const Controller& K,
                             const CostEval& ce) {
  const Eigen::Index n = ce.n;
  const Eigen::Index q = ce.q;
  // Derivative of J with respect to the closed-loop matrix.
  const Mat G = plant.dom() == TimeDomain::Continuous
                    ? Mat(2.0 * ce.Y * ce.X)
                    : Mat(2.0 * ce.Y * ce.Acl * ce.X);
  GradientTriple g;
  g.gA = G.bottomRightCorner(q, q);
  g.gB = G.bottomLeftCorner(q, n) * plant.C().transpose() +
         2.0 * ce.Y22() * K.BK * plant.V();
  g.gC = plant.B().transpose() * G.topRightCorner(n, q) +
         2.0 * plant.R() * K.CK * ce.X22();
  return g;
}

class HessianContext {
 public:
  HessianContext(const Plant& plant, const Controller& K)
      : plant_(plant), K_(K), ev_(evaluate(plant, K)) {}

  Mat E(const Direction& d) const {
    const Eigen::Index n = ev_.ce.n, q = ev_.ce.q;
    Mat e = Mat::Zero(n + q, n + q);
    e.topRightCorner(n, q) = plant_.B() * d.dC;
    e.bottomLeftCorner(q, n) = d.dB * plant_.C();
    e.bottomRightCorner(q, q) = d.dA;
    return e;
  }

  Mat lower(const Mat& blk) const {
    const Eigen::Index n = ev_.ce.n, q = ev_.ce.q;
    Mat out = Mat::Zero(n + q, n + q);
    out.bottomRightCorner(q, q) = blk;
    return out;
  }

  // First-order perturbation of X along d.
  Mat Xprime(const Direction& d) const {
    const Mat& X = ev_.ce.X;
    const Mat e = E(d);
    const Mat sig = K_.BK * plant_.V() * d.dB.transpose();
    Mat M1 = lower(sig + sig.transpose());
    if (plant_.dom() == TimeDomain::Continuous) {
      M1 += e * X + X * e.transpose();
    } else {
      const Mat& Acl = ev_.ce.Acl;
      const Mat t = e * X * Acl.transpose();
      M1 += t + t.transpose();
    }
    return ev_.solver.solve(M1);
  }

  double bilinear(const Direction& d1, const Mat& Xp1, const Direction& d2,
                  const Mat& Xp2) const {
    const Mat& X = ev_.ce.X;
    const Mat& Y = ev_.ce.Y;
    const Mat e1 = E(d1), e2 = E(d2);
    const Mat Dc1 = lower(K_.CK.transpose() * plant_.R() * d1.dC);
    const Mat Dc2 = lower(K_.CK.transpose() * plant_.R() * d2.dC);
    const Mat YA = plant_.dom() == TimeDomain::Continuous
                       ? Y
                       : Mat(ev_.ce.Acl.transpose() * Y);
    double h = (e1 * Xp2 * YA).trace() + (e2 * Xp1 * YA).trace() +
               (Dc1 * Xp2).trace() + (Dc2 * Xp1).trace() +
               (lower(d1.dB * plant_.V() * d2.dB.transpose()) * Y).trace() +
               (lower(d1.dC.transpose() * plant_.R() * d2.dC) * X).trace();
    if (plant_.dom() == TimeDomain::Discrete) {
      h += (e1 * X * e2.transpose() * Y).trace();
    }
    return 2.0 * h;
  }

  double quadratic(const Direction& d) const {
    const Mat& X = ev_.ce.X;
    const Mat& Y = ev_.ce.Y;
    const Mat e = E(d);
    const Mat Xp = Xprime(d);
    const Mat Dc = lower(K_.CK.transpose() * plant_.R() * d.dC);
    const Mat quadB = lower(d.dB * plant_.V() * d.dB.transpose());
    const Mat quadC = lower(d.dC.transpose() * plant_.R() * d.dC);
    Mat inner;
    if (plant_.dom() == TimeDomain::Continuous) {
      inner = 2.0 * e * Xp * Y + 2.0 * Dc * Xp + quadB * Y + quadC * X;
    } else {
      const Mat& Acl = ev_.ce.Acl;
      inner = 2.0 * e * Xp * Acl.transpose() * Y + e * X * e.transpose() * Y +
              2.0 * Dc * Xp + quadB * Y + quadC * X;
    }
    return 2.0 * inner.trace();
  }

 private:
  const Plant& plant_;
  const Controller& K_;
  Evaluation ev_;
};

void check_direction(const Controller& K, const Direction& d) {
  if (d.dA.rows() != K.q() || d.dA.cols() != K.q() || d.dB.rows() != K.q() ||
      d.dB.cols() != K.p() || d.dC.rows() != K.m() || d.dC.cols() != K.q()) {
    throw Error(ErrorKind::DimensionMismatch, "direction does not match controller");
  }
}

}  // namespace

CostEval lqg_cost(const Plant& plant, const Controller& K) {
  return evaluate(plant, K).ce;
}

GradientTriple lqg_gradient(const Plant& plant, const Controller& K) {
  return gradient_from(plant, K, evaluate(plant, K).ce);
}

GradientTriple lqg_gradient(const Plant& plant, const Controller& K,
                            const CostEval& ce) {
  return gradient_from(plant, K, ce);
}

double hessian_quadratic_form(const Plant& plant, const Controller& K,
                              const Direction& d) {
  check_direction(K, d);
  return HessianContext(plant, K).quadratic(d);
}

double cost_difference(const Plant& plant, const Controller& K_from, const CostEval& from,
                       const Controller& K_to, const CostEval& to) {
  if (K_from.q() != K_to.q() || from.q != K_from.q() || to.q != K_to.q()) {
    throw Error(ErrorKind::DimensionMismatch, "cost difference needs equal controller orders");
  }
  const Eigen::Index n = plant.n(), q = K_from.q();
  const Mat dA = K_to.AK - K_from.AK;
  const Mat dB = K_to.BK - K_from.BK;
  const Mat dC = K_to.CK - K_from.CK;
  // Y_from solves the adjoint equation of the old loop, X_to the primal of the new one.
  const Mat& Y1 = from.Y;
  const Mat& X2 = to.X;
  const Mat dSigma = dB * plant.V() * K_to.BK.transpose() + K_from.BK * plant.V() * dB.transpose();
  const Mat dQbar = dC.transpose() * plant.R() * K_to.CK + K_from.CK.transpose() * plant.R() * dC;
  Mat D = Mat::Zero(n + q, n + q);
  D.topRightCorner(n, q) = plant.B() * dC;
  D.bottomLeftCorner(q, n) = dB * plant.C();
  D.bottomRightCorner(q, q) = dA;
  double diff = (dQbar.array() * X2.bottomRightCorner(q, q).array()).sum() +
                (dSigma.array() * Y1.bottomRightCorner(q, q).array()).sum();
  if (plant.dom() == TimeDomain::Continuous) {
    diff += 2.0 * (Y1 * D * X2).trace();
  } else {
    diff += (Y1 * (D * X2 * to.Acl.transpose() + from.Acl * X2 * D.transpose())).trace();
  }
  return diff;
}

double hessian_bilinear(const Plant& plant, const Controller& K,
                        const Direction& d1, const Direction& d2) {
  check_direction(K, d1);
  check_direction(K, d2);
  const HessianContext ctx(plant, K);
  return 0.25 * (ctx.quadratic(d1 + d2) - ctx.quadratic(d1 - d2));
}

Mat hessian_matrix(const Plant& plant, const Controller& K) {
  const HessianContext ctx(plant, K);
  const Eigen::Index q = K.q(), m = K.m(), p = K.p();
  const Eigen::Index d = direction_dim(q, m, p);
  std::vector<Direction> basis;
  std::vector<Mat> xp;
  basis.reserve(d);
  xp.reserve(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    basis.push_back(Direction::from_vector(Vec::Unit(d, k), q, m, p));
    xp.push_back(ctx.Xprime(basis.back()));
  }
  Mat H(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      H(i, j) = ctx.bilinear(basis[i], xp[i], basis[j], xp[j]);
      H(j, i) = H(i, j);
    }
  }
  return H;
}

RestrictedSpectrum restricted_rcond(const Plant& plant, const Controller& K) {
  const TangentBasis tb = tangent_space(K);
  const CostEval ce = lqg_cost(plant, K);
  const double gn = lqg_gradient(plant, K, ce).norm();
  if (gn > stationarity_tolerance(ce.J)) {
    throw Error(ErrorKind::NotStationary,
                "gradient norm " + std::to_string(gn) + " exceeds tolerance");
  }
  const Mat H = hessian_matrix(plant, K);
  const Mat Hr = symmetrize(tb.complement.transpose() * H * tb.complement);
  Eigen::SelfAdjointEigenSolver<Mat> es(Hr, Eigen::EigenvaluesOnly);
  RestrictedSpectrum out;
  out.eigenvalues = es.eigenvalues();
  out.min_eig = out.eigenvalues.minCoeff();
  out.max_eig = out.eigenvalues.maxCoeff();
  out.rcond = out.min_eig / out.max_eig;
  return out;
}

}  // namespace lqg
