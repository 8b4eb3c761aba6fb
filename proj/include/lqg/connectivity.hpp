#pragma once

#include "lqg/model.hpp"

#include <cstdint>
#include <optional>

namespace lqg {

// Change-of-variables image of a full-order stabilizing controller.
struct ConvexLift {
  Mat X, Y, M, G, H, F, Pi, Xi;
  bool degenerate_pi = false;  // Pi had to be perturbed; realize gives a nearby controller
};

struct LiftCheck {
  bool xy_positive = false;      // [[X, I], [I, Y]] > 0
  bool lmi_satisfied = false;    // stability inequality on (X, Y, M, H, F)
  double coupling_residual = 0;  // ||Xi Pi - (I - Y X)||
  bool invertible = false;       // Pi and Xi invertible
  bool ok() const;
};

ConvexLift lift(const Plant& plant, const Controller& K);
LiftCheck check_lift(const Plant& plant, const ConvexLift& Z);
Controller realize(const Plant& plant, const ConvexLift& Z);

// Pi -> T Pi, Xi -> Xi T^{-1}; realize then returns similarity(T, K).
ConvexLift transform_lift(const ConvexLift& Z, const Mat& T);

enum class ComponentSign { Plus, Minus };
const char* to_string(ComponentSign s);
ComponentSign component_sign(const Plant& plant, const Controller& K);

// Stabilizing controllers K0 = path[0], ..., K1 = path[steps].
std::vector<Controller> path_between(const Plant& plant, const Controller& K0,
                                     const Controller& K1, int steps = 200,
                                     const std::optional<Controller>& bridge = std::nullopt);

// Full-order controller obtained by padding a reduced-order stabilizer with a
// decoupled stable mode; it is fixed by T = diag(I, -1).
Controller bridge_controller(const Plant& plant, const Controller& K_red);

struct SearchConfig {
  long budget = 100000;     // candidate evaluations
  std::uint64_t seed = 1;
};

// Heuristic search for a stabilizing order-q controller. Absence of a result
// does not prove that none exists.
std::optional<Controller> reduced_order_search(const Plant& plant, Eigen::Index q,
                                               const SearchConfig& cfg = {});

// Orthogonal polar factor path support.
struct Polar {
  Mat Q, P;  // Pi = Q P
};
Polar polar_decomposition(const Mat& Pi);
// Geodesic Q0 -> Q1 in the orthogonal group; requires det(Q0^T Q1) = 1.
Mat orthogonal_geodesic(const Mat& Q0, const Mat& Q1, double t);

}  // namespace lqg
