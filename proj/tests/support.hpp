#pragma once

// Random instance generators and independent oracles shared by the tests.

#include "lqg/lqg.hpp"

#include <random>

namespace lqg::testing {

using Rng = std::mt19937_64;

inline Mat random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Mat M(r, c);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = nd(rng);
  return M;
}

inline Mat random_spd(Rng& rng, Eigen::Index n, double floor = 0.2) {
  const Mat G = random_matrix(rng, n, n);
  return G * G.transpose() / static_cast<double>(n) + floor * Mat::Identity(n, n);
}

// Well-conditioned random invertible matrix.
inline Mat random_transform(Rng& rng, Eigen::Index n) {
  for (;;) {
    const Mat T = Mat::Identity(n, n) + 0.5 * random_matrix(rng, n, n);
    Eigen::JacobiSVD<Mat> svd(T);
    const Vec s = svd.singularValues();
    if (s(n - 1) > 0.2 && s(0) / s(n - 1) < 20.0) return T;
  }
}

// Random matrix that is stable in dom.
inline Mat random_stable(Rng& rng, Eigen::Index n, TimeDomain dom) {
  Mat M = random_matrix(rng, n, n);
  const StabilityReport rep = stability(M, dom);
  if (dom == TimeDomain::Continuous) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    return M - (rep.margin + u(rng)) * Mat::Identity(n, n);
  }
  std::uniform_real_distribution<double> u(0.3, 0.9);
  return M * (u(rng) / (rep.margin + 1.0));
}

// Random plant satisfying the standing assumptions (generically).
inline Plant random_plant(Rng& rng, TimeDomain dom, Eigen::Index n = 0, Eigen::Index m = 0,
                          Eigen::Index p = 0) {
  std::uniform_int_distribution<int> dn(1, 3), dmp(1, 2);
  if (n == 0) n = dn(rng);
  if (m == 0) m = dmp(rng);
  if (p == 0) p = dmp(rng);
  for (;;) {
    Mat A = random_matrix(rng, n, n, 0.8);
    if (dom == TimeDomain::Discrete) {
      const double r = stability(A, dom).margin + 1.0;
      std::uniform_real_distribution<double> u(0.5, 1.2);
      A *= u(rng) / r;
    }
    Plant P(A, random_matrix(rng, n, m), random_matrix(rng, p, n), random_spd(rng, n),
            random_spd(rng, p), random_spd(rng, n), random_spd(rng, m), dom);
    const MinimalityReport mr = minimality(P.A(), P.B(), P.C());
    if (P.assumptions().all() && mr.sigma_c > 0.05 && mr.sigma_o > 0.05) return P;
  }
}

// Random stabilizing full-order controller: a perturbed observer-based design.
inline Controller random_stabilizing(Rng& rng, const Plant& plant, double spread = 0.3) {
  const auto interval = default_pole_interval(plant.dom());
  for (int attempt = 0; attempt < 100; ++attempt) {
    // Shrink the perturbation when the placed design is fragile.
    const double s = spread * std::pow(0.5, attempt / 5);
    Controller K = init_pole_placement(plant, interval, rng);
    const double size = std::max({K.AK.norm(), K.BK.norm(), K.CK.norm()});
    if (size > 100.0) continue;
    K.AK += random_matrix(rng, K.q(), K.q(), s);
    K.BK += random_matrix(rng, K.q(), K.p(), s);
    K.CK += random_matrix(rng, K.m(), K.q(), s);
    if (is_stabilizing(plant, K).margin < -0.1) return K;
  }
  throw Error(ErrorKind::RetriesExhausted, "no moderate stabilizing controller found");
}

struct Instance {
  Plant plant;
  Controller K;
};

// Plant with a moderate-gain stabilizing full-order controller at least 0.1
// inside the stability boundary. Instances with very large cost or sensitivity
// ||X|| ||Y|| are skipped: fixed-step finite-difference oracles lose accuracy there.
inline Instance random_instance(Rng& rng, TimeDomain dom, double max_cost = 1e3) {
  for (;;) {
    Plant plant = random_plant(rng, dom);
    try {
      Controller K = random_stabilizing(rng, plant);
      const CostEval ce = lqg_cost(plant, K);
      if (ce.J > max_cost || ce.X.norm() * ce.Y.norm() > 1e5) continue;
      return {std::move(plant), std::move(K)};
    } catch (const Error&) {
    }
  }
}

inline Direction random_direction(Rng& rng, const Controller& K) {
  return Direction(random_matrix(rng, K.q(), K.q()), random_matrix(rng, K.q(), K.p()),
                   random_matrix(rng, K.m(), K.q()));
}

// Kronecker oracle built entry by entry, independent of the library solver.
inline Mat kron_lyapunov(const Mat& M, const Mat& S, TimeDomain dom) {
  const Eigen::Index n = M.rows();
  Mat L = Mat::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
          // coefficient of X(k,l) in entry (i,j) of the operator
          double c = 0.0;
          if (dom == TimeDomain::Continuous) {
            if (l == j) c += M(i, k);
            if (k == i) c += M(j, l);
          } else {
            c -= M(i, k) * M(j, l);
            if (k == i && l == j) c += 1.0;
          }
          L(i + j * n, k + l * n) = c;
        }
  Vec rhs(n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      rhs(i + j * n) = dom == TimeDomain::Continuous ? -S(i, j) : S(i, j);
  const Vec x = L.fullPivLu().solve(rhs);
  Mat X(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = x(i + j * n);
  return X;
}

inline double cost(const Plant& plant, const Controller& K) { return lqg_cost(plant, K).J; }

// Central-difference gradient in the Direction layout.
inline Vec fd_gradient(const Plant& plant, const Controller& K, double h = 1e-5) {
  const Eigen::Index d = direction_dim(K.q(), K.m(), K.p());
  Vec g(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Direction e = Direction::from_vector(Vec::Unit(d, i), K.q(), K.m(), K.p());
    g(i) = (cost(plant, step(K, e, h)) - cost(plant, step(K, e, -h))) / (2.0 * h);
  }
  return g;
}

inline double fd_second(const Plant& plant, const Controller& K, const Direction& dir,
                        double h = 1e-4) {
  return (cost(plant, step(K, dir, h)) - 2.0 * cost(plant, K) + cost(plant, step(K, dir, -h))) /
         (h * h);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline double rel_err(const Mat& a, const Mat& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

// Characteristic polynomial coefficients (monic, highest first) from eigenvalues.
inline Eigen::VectorXcd charpoly(const Mat& M) {
  const Eigen::Index n = M.rows();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
  c(0) = 1.0;
  const Eigen::VectorXcd ev = M.eigenvalues();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = k + 1; j >= 1; --j) c(j) -= ev(k) * c(j - 1);
  }
  return c;
}

inline Complex siso_tf(const Controller& K, Complex s) { return transfer_eval(K, s)(0, 0); }

}  // namespace lqg::testing
