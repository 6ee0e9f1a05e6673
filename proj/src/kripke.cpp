#include "mvplan/kripke.hpp"

#include <algorithm>
#include <stdexcept>

namespace mvp {

void KripkeStructure::check_state(int s, const char* ctx) const {
    if (s < 0 || s >= n_states()) {
        throw std::out_of_range(std::string(ctx) + ": state id out of range");
    }
}

int KripkeStructure::add_state(const Pose& pose, LabelSet labels) {
    poses_.push_back(pose);
    labels_.push_back(labels);
    out_.emplace_back();
    in_.emplace_back();
    return int(poses_.size()) - 1;
}

void KripkeStructure::add_edge(int from, int to, double duration) {
    check_state(from, "add_edge");
    check_state(to, "add_edge");
    if (from == to) throw std::invalid_argument("add_edge: self-loops are not represented");
    if (!(duration > 0)) throw std::invalid_argument("add_edge: duration must be positive");
    auto [it, inserted] = out_[size_t(from)].emplace(to, duration);
    if (inserted) {
        auto& in = in_[size_t(to)];
        in.insert(std::upper_bound(in.begin(), in.end(), from), from);
        ++n_edges_;
    } else {
        it->second = duration;
    }
}

bool KripkeStructure::has_edge(int from, int to) const {
    check_state(from, "has_edge");
    check_state(to, "has_edge");
    return out_[size_t(from)].count(to) > 0;
}

double KripkeStructure::duration(int from, int to) const {
    check_state(from, "duration");
    check_state(to, "duration");
    auto it = out_[size_t(from)].find(to);
    if (it == out_[size_t(from)].end()) throw std::invalid_argument("duration: no such edge");
    return it->second;
}

TimedWord timed_word(const KripkeStructure& k, const std::vector<int>& trace) {
    TimedWord w;
    if (trace.empty()) return w;
    w.reserve(trace.size());
    for (size_t i = 0; i + 1 < trace.size(); ++i) {
        w.push_back({k.labels(trace[i]), k.duration(trace[i], trace[i + 1])});
    }
    w.push_back({k.labels(trace.back()), 0.0});
    return w;
}

double trace_duration(const KripkeStructure& k, const std::vector<int>& trace) {
    double t = 0;
    for (size_t i = 0; i + 1 < trace.size(); ++i) t += k.duration(trace[i], trace[i + 1]);
    return t;
}

}  // namespace mvp
