// Finite labeled transition system produced by the planner (or injected
// directly for testing): states carry poses and label sets, edges carry
// strictly positive durations.
#pragma once

#include <map>
#include <vector>

#include "mvplan/geometry.hpp"
#include "mvplan/labels.hpp"

namespace mvp {

class KripkeStructure {
public:
    int add_state(const Pose& pose, LabelSet labels);

    // Duplicate edges overwrite; self-loops and non-positive durations are
    // rejected (a zero-length move is not a transition).
    void add_edge(int from, int to, double duration);

    int n_states() const { return int(poses_.size()); }
    const Pose& pose(int s) const { return poses_[size_t(s)]; }
    LabelSet labels(int s) const { return labels_[size_t(s)]; }

    bool has_edge(int from, int to) const;
    double duration(int from, int to) const;

    // Sorted by target / source id; iteration order is deterministic.
    const std::map<int, double>& out_edges(int s) const { return out_[size_t(s)]; }
    const std::vector<int>& in_edges(int s) const { return in_[size_t(s)]; }

    std::size_t n_edges() const { return n_edges_; }

private:
    void check_state(int s, const char* ctx) const;

    std::vector<Pose> poses_;
    std::vector<LabelSet> labels_;
    std::vector<std::map<int, double>> out_;
    std::vector<std::vector<int>> in_;
    std::size_t n_edges_ = 0;
};

// The timed word a trace produces: one letter per visited state, each
// holding for the duration of the outgoing edge; the final letter has
// duration zero (the trace ends on arrival).
TimedWord timed_word(const KripkeStructure& k, const std::vector<int>& trace);

double trace_duration(const KripkeStructure& k, const std::vector<int>& trace);

}  // namespace mvp
