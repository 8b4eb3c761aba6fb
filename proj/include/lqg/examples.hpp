#pragma once

#include "lqg/model.hpp"

#include <optional>
#include <string>

namespace lqg {

// Identifiers: ex3.1 ex3.2 ex3.3 exB.3 ex4.1 ex4.2 ex4.3 ex4.4 ex4.5 doyle exD.1.
// eps parameterizes ex4.5 (plant) and ex4.1 (controller family).
std::vector<std::string> example_names();
bool is_example(const std::string& name);
Plant example_plant(const std::string& name, double eps = 0.5);

// Named controllers of an example (e.g. "k+", "k-", "k1", "opt"); nullopt if unknown.
std::optional<Controller> example_controller(const std::string& name,
                                             const std::string& key,
                                             double eps = 0.5);
std::vector<std::string> example_controller_keys(const std::string& name);

}  // namespace lqg
