#include "lqg/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

namespace lqg {

json matrix_to_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json complex_matrix_to_json(const CMat& M) {
  json out;
  out["re"] = matrix_to_json(M.real());
  out["im"] = matrix_to_json(M.imag());
  return out;
}

Mat matrix_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return Mat::Constant(1, 1, j.get<double>());
  if (!j.is_array()) {
    throw Error(ErrorKind::InvalidPlant, field + ": expected an array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Mat(0, 0);
  if (!j[0].is_array()) {
    throw Error(ErrorKind::InvalidPlant, field + ": expected an array of rows");
  }
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::InvalidPlant, field + ": rows have different lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw Error(ErrorKind::InvalidPlant, field + ": entries must be numbers");
      }
      M(r, c) = row[c].get<double>();
    }
  }
  return M;
}

json plant_to_json(const Plant& plant) {
  json j;
  j["domain"] = to_string(plant.dom());
  j["A"] = matrix_to_json(plant.A());
  j["B"] = matrix_to_json(plant.B());
  j["C"] = matrix_to_json(plant.C());
  j["W"] = matrix_to_json(plant.W());
  j["V"] = matrix_to_json(plant.V());
  j["Q"] = matrix_to_json(plant.Q());
  j["R"] = matrix_to_json(plant.R());
  return j;
}

Plant plant_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidPlant, "plant file must be a JSON object");
  TimeDomain dom = TimeDomain::Continuous;
  if (j.contains("domain")) {
    const json& d = j["domain"];
    if (d == "continuous") {
      dom = TimeDomain::Continuous;
    } else if (d == "discrete") {
      dom = TimeDomain::Discrete;
    } else {
      throw Error(ErrorKind::InvalidPlant, "domain must be \"continuous\" or \"discrete\"");
    }
  }
  auto field = [&](const char* name) {
    if (!j.contains(name)) throw Error(ErrorKind::InvalidPlant, std::string(name) + " missing");
    return matrix_from_json(j[name], name);
  };
  return Plant(field("A"), field("B"), field("C"), field("W"), field("V"), field("Q"),
               field("R"), dom);
}

json controller_to_json(const Controller& K) {
  json j;
  j["A_K"] = matrix_to_json(K.AK);
  j["B_K"] = matrix_to_json(K.BK);
  j["C_K"] = matrix_to_json(K.CK);
  if (!K.strictly_proper()) j["D_K"] = matrix_to_json(K.DK);
  return j;
}

Controller controller_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorKind::InvalidPlant, "controller file must be a JSON object");
  }
  for (const char* name : {"A_K", "B_K", "C_K"}) {
    if (!j.contains(name)) throw Error(ErrorKind::InvalidPlant, std::string(name) + " missing");
  }
  Mat A = matrix_from_json(j["A_K"], "A_K");
  Mat B = matrix_from_json(j["B_K"], "B_K");
  Mat C = matrix_from_json(j["C_K"], "C_K");
  if (A.rows() != A.cols() || B.rows() != A.rows() || C.cols() != A.rows()) {
    throw Error(ErrorKind::InvalidPlant, "controller matrices have inconsistent sizes");
  }
  if (j.contains("D_K")) {
    Mat D = matrix_from_json(j["D_K"], "D_K");
    if (D.rows() != C.rows() || D.cols() != B.cols()) {
      throw Error(ErrorKind::InvalidPlant, "D_K has inconsistent size");
    }
    return Controller(A, B, C, D);
  }
  return Controller(A, B, C);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidPlant, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidPlant, path + ": " + e.what());
  }
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "iter,J,grad_norm,step\n";
  for (const TraceRecord& r : trace.records) {
    os << r.iter << ',' << r.J << ',' << r.grad_norm << ',' << r.step << '\n';
  }
  os.precision(old);
}

json trace_to_json(const Trace& trace) {
  json j;
  j["terminal"] = to_string(trace.terminal);
  json recs = json::array();
  for (const TraceRecord& r : trace.records) {
    recs.push_back({{"iter", r.iter}, {"J", r.J}, {"grad_norm", r.grad_norm}, {"step", r.step}});
  }
  j["records"] = std::move(recs);
  json snaps = json::array();
  for (const auto& [iter, K] : trace.snapshots) {
    snaps.push_back({{"iter", iter}, {"controller", controller_to_json(K)}});
  }
  j["snapshots"] = std::move(snaps);
  j["final_controller"] = controller_to_json(trace.final_controller);
  return j;
}

}  // namespace lqg
