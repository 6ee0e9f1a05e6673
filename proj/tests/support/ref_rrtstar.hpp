// Plain duration-optimal RRT*, written against the same sampling, metric,
// radius, and steering contract as the planner but with scalar costs and no
// automata. With an empty rulebook the planner must produce this tree.
#pragma once

#include <vector>

#include "mvplan/planner.hpp"
#include "mvplan/world.hpp"

namespace mvp::test {

struct RefTree {
    std::vector<Pose> poses;
    std::vector<int> parent;      // -1 at root
    std::vector<double> cost;     // duration to come
    std::vector<double> edge_dur;
    int best = -1;                // goal node of least cost, first found on ties
    double best_cost = 0.0;
    int best_iteration = 0;
};

RefTree ref_rrtstar(const Scenario& sc, const PlannerConfig& cfg);

}  // namespace mvp::test
