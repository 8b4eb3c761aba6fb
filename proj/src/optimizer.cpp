#include "lqg/optimizer.hpp"

#include <cmath>
#include <optional>

namespace lqg {

const char* to_string(Parameterization p) {
  return p == Parameterization::Full ? "full" : "canonical";
}

const char* to_string(Terminal t) {
  switch (t) {
    case Terminal::GradTolReached: return "GradTolReached";
    case Terminal::MaxIters: return "MaxIters";
    case Terminal::LeftFeasibleSet: return "LeftFeasibleSet";
    case Terminal::Stalled: return "Stalled";
  }
  return "Unknown";
}

const char* to_string(LimitVerdict v) {
  switch (v) {
    case LimitVerdict::GlobalOptimum: return "GlobalOptimum";
    case LimitVerdict::NonMinimalLimit: return "NonMinimalLimit";
    case LimitVerdict::NotConverged: return "NotConverged";
  }
  return "Unknown";
}

void OptimizerConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "beta must lie in (0, 1)");
  }
  if (!(grad_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "grad_tol must be positive");
  }
  if (max_iters < 0) throw Error(ErrorKind::InvalidArgument, "max_iters must be >= 0");
  if (snapshot_every < 1) {
    throw Error(ErrorKind::InvalidArgument, "snapshot_every must be >= 1");
  }
}

namespace {

// Search space of a descent run: the full controller or the canonical coefficients.
struct Parameters {
  Parameterization kind;
  Controller K;
  Vec b, a;  // canonical coefficients


  // Partial gradient in the active parameters, flattened.
  Vec gradient(const GradientTriple& g) const {
    if (kind == Parameterization::Full) return g.as_direction().to_vector();
    const Eigen::Index q = K.q();
    Vec v(2 * q);
    for (Eigen::Index i = 0; i < q; ++i) {
      v(i) = -g.gA(q - 1, i);
      v(q + i) = g.gC(0, i);
    }
    return v;
  }

  Parameters moved(const Vec& grad, double s) const {
    Parameters out = *this;
    if (kind == Parameterization::Full) {
      out.K = step(K, Direction::from_vector(grad, K.q(), K.m(), K.p()), -s);
    } else {
      const Eigen::Index q = K.q();
      out.b = b - s * grad.head(q);
      out.a = a - s * grad.tail(q);
      out.K = canonical_controller(out.b, out.a);
    }
    return out;
  }
};

}  // namespace

Trace descend(const Plant& plant, const Controller& K0, const OptimizerConfig& cfg) {
  cfg.validate();
  if (!is_stabilizing(plant, K0).stable) {
    throw Error(ErrorKind::NotStabilizing, "initial controller is not stabilizing");
  }
  Parameters x{cfg.parameterization, K0, Vec(), Vec()};
  if (cfg.parameterization == Parameterization::Canonical) {
    if (K0.m() != 1 || K0.p() != 1) {
      throw Error(ErrorKind::NotSISO, "canonical descent needs a SISO controller");
    }
    const CanonicalForm cf = canonical_form(K0);
    x.b = cf.b;
    x.a = cf.a;
    x.K = cf.K;
  }

  Trace tr;
  CostEval ce = lqg_cost(plant, x.K);
  // Recorded cost: J(K0) plus the accepted differences, which stay accurate
  // once the per-step decrease falls below the rounding level of J itself.
  double J = ce.J;
  double last_step = 0.0;
  for (long iter = 0;; ++iter) {
    const GradientTriple g = lqg_gradient(plant, x.K, ce);
    const Vec grad = x.gradient(g);
    const double gn2 = grad.squaredNorm();
    const double gn = std::sqrt(gn2);
    tr.records.push_back({iter, J, gn, last_step});
    if (iter % cfg.snapshot_every == 0) tr.snapshots.emplace_back(iter, x.K);

    if (gn <= cfg.grad_tol) {
      tr.terminal = Terminal::GradTolReached;
      break;
    }
    if (iter >= cfg.max_iters) {
      tr.terminal = Terminal::MaxIters;
      break;
    }
    // Armijo backtracking; trials outside the stabilizing set are rejected.
    double s = 1.0;
    bool accepted = false;
    while (s >= 1e-16) {
      const Parameters trial = x.moved(grad, s);
      if (is_stabilizing(plant, trial.K).stable) {
        try {
          CostEval cn = lqg_cost(plant, trial.K);
          const double decrease = -cost_difference(plant, x.K, ce, trial.K, cn);
          if (decrease >= cfg.alpha * s * gn2) {
            x = trial;
            ce = std::move(cn);
            J -= decrease;
            accepted = true;
            break;
          }
        } catch (const Error&) {
        }
      }
      s *= cfg.beta;
    }
    if (!accepted) {
      tr.terminal = Terminal::Stalled;
      break;
    }
    last_step = s;
  }
  if (tr.snapshots.empty() || tr.snapshots.back().first != tr.records.back().iter) {
    tr.snapshots.emplace_back(tr.records.back().iter, x.K);
  }
  tr.final_controller = x.K;
  return tr;
}

std::pair<double, double> default_pole_interval(TimeDomain dom) {
  return dom == TimeDomain::Continuous ? std::make_pair(-2.0, -1.0)
                                       : std::make_pair(0.0, 0.9);
}

namespace {

// Ackermann's formula for a single input.
std::optional<Mat> ackermann(const Mat& A, const Mat& b, const std::vector<double>& poles) {
  const Eigen::Index n = A.rows();
  const Mat Cm = ctrb(A, b);
  if (numerical_rank(Cm) < n) return std::nullopt;
  Mat phi = Mat::Identity(n, n);
  for (double p : poles) phi = phi * (A - p * Mat::Identity(n, n));
  const Mat last = Cm.transpose().partialPivLu().solve(Mat(Vec::Unit(n, n - 1))).transpose();
  return Mat(last * phi);
}

}  // namespace

Mat place_poles(const Mat& A, const Mat& B, const std::vector<double>& poles, Rng& rng) {
  if (static_cast<Eigen::Index>(poles.size()) != A.rows()) {
    throw Error(ErrorKind::InvalidArgument, "need one pole per state");
  }
  const Eigen::Index m = B.cols();
  if (m == 1) {
    const auto k = ackermann(A, B, poles);
    if (!k) throw Error(ErrorKind::PlacementFailed, "(A, B) not controllable");
    return *k;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 20; ++attempt) {
    Vec v(m);
    for (Eigen::Index i = 0; i < m; ++i) v(i) = normal(rng);
    v.normalize();
    const auto k = ackermann(A, B * v, poles);
    if (k) return v * *k;
  }
  throw Error(ErrorKind::PlacementFailed, "no controllable single-input reduction found");
}

Controller init_pole_placement(const Plant& plant, std::pair<double, double> pole_interval,
                               Rng& rng, int max_retries) {
  std::uniform_real_distribution<double> unif(pole_interval.first, pole_interval.second);
  const Eigen::Index n = plant.n();
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<double> pk(n), pl(n);
    for (auto& v : pk) v = unif(rng);
    for (auto& v : pl) v = unif(rng);
    try {
      const Mat Kg = place_poles(plant.A(), plant.B(), pk, rng);
      const Mat L = place_poles(plant.A().transpose(), plant.C().transpose(), pl, rng)
                        .transpose();
      Controller K(plant.A() - plant.B() * Kg - L * plant.C(), L, -Kg);
      if (is_stabilizing(plant, K).stable) return K;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PlacementFailed) throw;
    }
  }
  throw Error(ErrorKind::PlacementFailed, "pole placement did not yield a stabilizing controller");
}

Controller init_near_optimal(const Plant& plant, double delta, Rng& rng, int max_retries) {
  const Controller Kopt = riccati_controller(plant).K;
  if (delta == 0.0) return Kopt;
  std::normal_distribution<double> normal(0.0, delta);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Controller K = Kopt;
    for (Eigen::Index i = 0; i < K.AK.size(); ++i) K.AK.data()[i] += normal(rng);
    for (Eigen::Index i = 0; i < K.BK.size(); ++i) K.BK.data()[i] += normal(rng);
    for (Eigen::Index i = 0; i < K.CK.size(); ++i) K.CK.data()[i] += normal(rng);
    if (is_stabilizing(plant, K).stable) return K;
  }
  throw Error(ErrorKind::RetriesExhausted, "no stabilizing perturbation found");
}

LimitCertificate certify_limit(const Plant& plant, const Controller& K, double tol,
                               double riccati_tol) {
  LimitCertificate c;
  const CostEval ce = lqg_cost(plant, K);
  c.J = ce.J;
  c.grad_norm = lqg_gradient(plant, K, ce).norm();
  c.minimality = controller_minimality(K);
  if (c.grad_norm > tol) {
    c.stationary = StationaryVerdict::NotStationary;
    return c;
  }
  if (!c.minimality.minimal) {
    c.stationary = StationaryVerdict::NonMinimalStationary;
    c.verdict = LimitVerdict::NonMinimalLimit;
    return c;
  }
  const StationaryReport rep = analyze_stationary(plant, K, tol, riccati_tol);
  c.stationary = rep.verdict;
  if (rep.recovered) {
    c.rP = rep.recovered->rP;
    c.rS = rep.recovered->rS;
  }
  if (rep.verdict == StationaryVerdict::GlobalOptimum) c.verdict = LimitVerdict::GlobalOptimum;
  return c;
}

}  // namespace lqg
