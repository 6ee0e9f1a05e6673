// SVG rendering of a scenario, the exploration tree, and a solution path.
#pragma once

#include <optional>
#include <string>

#include "mvplan/kripke.hpp"
#include "mvplan/planner.hpp"
#include "mvplan/world.hpp"

namespace mvp {

std::string render_svg(const Scenario& sc, const KripkeStructure& k,
                       const std::optional<Solution>& sol);

}  // namespace mvp
