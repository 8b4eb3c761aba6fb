#pragma once

#include "lqg/optimizer.hpp"

#include <json.hpp>

#include <iosfwd>

namespace lqg {

using json = nlohmann::json;

// Matrices are row-major arrays of rows; a bare number is read as 1x1.
json matrix_to_json(const Mat& M);
Mat matrix_from_json(const json& j, const std::string& field);
json complex_matrix_to_json(const CMat& M);

// PlantFile: {"domain": "continuous"|"discrete", "A", "B", "C", "W", "V", "Q", "R"}.
json plant_to_json(const Plant& plant);
Plant plant_from_json(const json& j);

// ControllerFile: {"A_K", "B_K", "C_K", optional "D_K"}.
json controller_to_json(const Controller& K);
Controller controller_from_json(const json& j);

json read_json_file(const std::string& path);

// CSV with header "iter,J,grad_norm,step".
void write_trace_csv(std::ostream& os, const Trace& trace);
json trace_to_json(const Trace& trace);

}  // namespace lqg
