// Exhaustive lexicographic shortest path over the full product of a graph
// with a rulebook; the optimality oracle for the planner's injected mode.
#pragma once

#include <optional>

#include "mvplan/automata.hpp"
#include "mvplan/planner.hpp"

namespace mvp::test {

struct LexPath {
    UnsafetyVector total;    // includes the final-letter settlement
    double duration = 0.0;
    std::vector<int> trace;  // graph states, root to goal
};

std::optional<LexPath> lex_dijkstra(const Rulebook& rb, const InjectedGraph& g);

}  // namespace mvp::test
