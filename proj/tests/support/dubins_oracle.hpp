// Numeric shortest-path oracle for the Dubins car, independent of the
// closed-form solver: dense grid over switching times of piecewise-constant
// controls u in {-1, 0, +1}, final-segment time from the heading constraint,
// then local refinement of the endpoint error.
#pragma once

#include "mvplan/geometry.hpp"

namespace mvp::test {

// Shortest feasible path length found, in meters. grid is the number of
// samples per switching-time axis. Throws std::runtime_error if no candidate
// reaches the goal, which for a correct implementation cannot happen.
double dubins_oracle_length(const Pose& from, const Pose& to, double rho, int grid = 160);

}  // namespace mvp::test
