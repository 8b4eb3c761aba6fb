#include "lqg/examples.hpp"

#include <algorithm>

namespace lqg {

namespace {

Mat m1(double v) { return Mat::Constant(1, 1, v); }

Mat mat(Eigen::Index r, Eigen::Index c, std::initializer_list<double> vals) {
  Mat M(r, c);
  auto it = vals.begin();
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) M(i, j) = *it++;
  return M;
}

Plant scalar_plant(double a, TimeDomain dom = TimeDomain::Continuous) {
  return Plant(m1(a), m1(1), m1(1), m1(1), m1(1), m1(1), m1(1), dom);
}

Controller scalar_controller(double ak, double bk, double ck) {
  return Controller(m1(ak), m1(bk), m1(ck));
}

std::string canonical_key(std::string key) {
  // Accept the unicode minus sign as well as "-".
  const std::string minus = "\xE2\x88\x92";
  for (auto pos = key.find(minus); pos != std::string::npos; pos = key.find(minus)) {
    key.replace(pos, minus.size(), "-");
  }
  return key;
}

}  // namespace

std::vector<std::string> example_names() {
  return {"ex3.1", "ex3.2", "ex3.3", "exB.3", "ex4.1", "ex4.2",
          "ex4.3", "ex4.4", "ex4.5", "doyle", "exD.1"};
}

bool is_example(const std::string& name) {
  const auto names = example_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Plant example_plant(const std::string& name, double eps) {
  if (name == "ex3.1" || name == "ex3.2") return scalar_plant(1.0);
  if (name == "ex3.3" || name == "ex4.1" || name == "ex4.2") return scalar_plant(-1.0);
  if (name == "exD.1") return scalar_plant(1.1, TimeDomain::Discrete);
  if (name == "exB.3") {
    const Mat I = Mat::Identity(2, 2);
    return Plant(mat(2, 2, {0, 1, 1, 0}), mat(2, 1, {0, 1}), mat(1, 2, {0, 1}), I, m1(1),
                 I, m1(1));
  }
  if (name == "ex4.3") {
    const Mat I = Mat::Identity(2, 2);
    return Plant(mat(2, 2, {-1, 0, 1, -2}), mat(2, 1, {-1, 1}), mat(1, 2, {-2, 11}), I,
                 m1(1), I, m1(1));
  }
  if (name == "ex4.4") {
    return Plant(mat(2, 2, {0, -1, 1, 0}), mat(2, 1, {1, 0}), mat(1, 2, {1, -1}),
                 mat(2, 2, {1, -1, -1, 16}), m1(1), mat(2, 2, {4, 0, 0, 0}), m1(1));
  }
  if (name == "ex4.5") {
    const double e = 1.0 + eps;
    return Plant(1.5 * mat(2, 2, {-1, 0, 0, -e}), mat(2, 1, {1, e}), mat(1, 2, {1, 1}),
                 mat(2, 2, {4, e, e, 4 * e * e}), m1(1), mat(2, 2, {4, 1, 1, 4}), m1(1));
  }
  if (name == "doyle") {
    return Plant(mat(2, 2, {1, 1, 0, 1}), mat(2, 1, {0, 1}), mat(1, 2, {1, 0}),
                 5.0 * Mat::Ones(2, 2), m1(1), 5.0 * Mat::Ones(2, 2), m1(1));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown example '" + name + "'");
}

std::vector<std::string> example_controller_keys(const std::string& name) {
  if (name == "ex3.1" || name == "ex3.2") return {"k1", "k2", "k+", "k-", "mid"};
  if (name == "ex3.3") return {"k+", "k-"};
  if (name == "exB.3") return {"k1", "k2", "proper"};
  if (name == "ex4.1") return {"k_eps"};
  if (name == "ex4.2") return {"kstar"};
  if (name == "ex4.3") return {"kstar"};
  if (name == "ex4.4") return {"k1", "k2", "gd1", "gd2"};
  if (name == "ex4.5") return {"kstar"};
  if (name == "doyle") return {"opt", "canonical"};
  if (name == "exD.1") return {"k1", "k2", "mid"};
  return {};
}

std::optional<Controller> example_controller(const std::string& name,
                                             const std::string& raw_key, double eps) {
  const std::string key = canonical_key(raw_key);
  if (name == "ex3.1" || name == "ex3.2") {
    if (key == "k1" || key == "k-") return scalar_controller(-2, -2, 2);
    if (key == "k2" || key == "k+") return scalar_controller(-2, 2, -2);
    if (key == "mid") return scalar_controller(-2, 0, 0);
  }
  if (name == "ex3.3") {
    if (key == "k+") return scalar_controller(-1, 1, -1);
    if (key == "k-") return scalar_controller(-1, -1, 1);
  }
  if (name == "exB.3") {
    if (key == "k1")
      return Controller(mat(2, 2, {0, 1, 0.125, -1}), mat(2, 1, {0, 1}), mat(1, 2, {-1.5, -2}));
    if (key == "k2")
      return Controller(mat(2, 2, {0, -1, -0.125, -1}), mat(2, 1, {0, 1}), mat(1, 2, {1.5, -2}));
    if (key == "proper") return Controller(m1(1), m1(-3), m1(2), m1(-2));
  }
  if (name == "ex4.1" && key == "k_eps") return scalar_controller(0, -eps, eps);
  if (name == "ex4.2" && key == "kstar") return scalar_controller(-1, 0, 0);
  if (name == "ex4.3" && key == "kstar") {
    return Controller(-Mat::Identity(2, 2), Mat::Zero(2, 1), Mat::Zero(1, 2));
  }
  if (name == "ex4.4") {
    if (key == "k1")
      return Controller(mat(2, 2, {-3, 0, 5, -4}), mat(2, 1, {1, -4}), mat(1, 2, {-2, 0}));
    if (key == "k2")
      return Controller(mat(2, 2, {-3, 0, 0, -1}), mat(2, 1, {1, 0}), mat(1, 2, {-2, 0}));
    if (key == "gd1")
      return Controller(mat(2, 2, {0, 1, -14.0912, -7.6970}), mat(2, 1, {0, 1}),
                        mat(1, 2, {-9.3941, -1.9999}));
    if (key == "gd2")
      return Controller(mat(2, 2, {0, 1, -17.2130, -8.7375}), mat(2, 1, {0, 1}),
                        mat(1, 2, {-11.4753, -1.9999}));
  }
  if (name == "ex4.5" && key == "kstar") {
    const double e = 1.0 + eps;
    return Controller(mat(2, 2, {-3.5, -2, -2 * e, -3.5 * e}), mat(2, 1, {1, e}),
                      mat(1, 2, {-1, -1}));
  }
  if (name == "doyle") {
    if (key == "opt")
      return Controller(mat(2, 2, {-4, 1, -10, -4}), mat(2, 1, {5, 5}), mat(1, 2, {-5, -5}));
    if (key == "canonical")
      return Controller(mat(2, 2, {0, 1, -26, -8}), mat(2, 1, {0, 1}), mat(1, 2, {25, -50}));
  }
  if (name == "exD.1") {
    if (key == "k1") return scalar_controller(0, -0.5, 0.5);
    if (key == "k2") return scalar_controller(0, 0.5, -0.5);
    if (key == "mid") return scalar_controller(0, 0, 0);
  }
  return std::nullopt;
}

}  // namespace lqg
