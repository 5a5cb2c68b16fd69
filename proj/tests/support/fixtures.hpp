#pragma once

#include <string>

#include "possib/scenario.hpp"

#ifndef POSSIB_SCENARIO_DIR
#error "POSSIB_SCENARIO_DIR must point at the scenarios/ directory"
#endif

namespace possib::testing {

inline std::string scenario_path(const std::string& name) { return std::string(POSSIB_SCENARIO_DIR) + "/" + name; }

inline Scenario load(const std::string& name) { return load_scenario(scenario_path(name)); }

}  // namespace possib::testing
