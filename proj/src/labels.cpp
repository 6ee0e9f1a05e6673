#include "mvplan/labels.hpp"

namespace mvp {

std::optional<Prop> prop_from_name(std::string_view name) {
    for (int i = 0; i < kNumProps; ++i) {
        if (kPropNames[static_cast<size_t>(i)] == name) return static_cast<Prop>(i);
    }
    return std::nullopt;
}

std::string_view prop_name(Prop p) { return kPropNames[static_cast<size_t>(p)]; }

std::string LabelSet::to_string() const {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < kNumProps; ++i) {
        if (has(static_cast<Prop>(i))) {
            if (!first) s += ",";
            s += kPropNames[static_cast<size_t>(i)];
            first = false;
        }
    }
    s += "}";
    return s;
}

Word letters_of(const TimedWord& w) {
    Word out;
    out.reserve(w.size());
    for (const auto& l : w) out.push_back(l.labels);
    return out;
}

double total_duration(const TimedWord& w) {
    double t = 0;
    for (const auto& l : w) t += l.duration;
    return t;
}

TimedWord destutter(const TimedWord& w) {
    TimedWord out;
    for (const auto& l : w) {
        if (!out.empty() && out.back().labels == l.labels) {
            out.back().duration += l.duration;
        } else {
            out.push_back(l);
        }
    }
    return out;
}

}  // namespace mvp
