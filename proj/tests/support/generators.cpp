#include "generators.hpp"

#include <set>

namespace mvp::test {

TimedWord random_word(Rng& rng, int max_len) {
    int len = int(rng.raw() % uint64_t(max_len + 1));
    TimedWord w;
    int prev = -1;
    for (int i = 0; i < len; ++i) {
        int bits = int(rng.raw() % kNumLabelSets);
        if (bits == prev) bits = (bits + 1) % kNumLabelSets;
        prev = bits;
        TimedLetter l;
        l.labels = LabelSet(uint8_t(bits));
        l.duration = rng.uniform01() < 0.1 ? 0.0 : rng.uniform(0.0, 4.0);
        w.push_back(l);
    }
    return w;
}

namespace {

std::string random_atom(Rng& rng) {
    const char* names[] = {"_", "sw", "rl", "ll", "dir", "dotted", "solid"};
    auto pick = [&] {
        if (rng.uniform01() < 0.3) return names[0];
        return names[1 + rng.raw() % 6];
    };
    std::string a = pick();
    std::string b = pick();
    return "(" + a + ", " + b + ")";
}

std::string random_body(Rng& rng, int depth) {
    if (depth <= 0 || rng.uniform01() < 0.35) return random_atom(rng);
    switch (rng.raw() % 3) {
        case 0: return "!" + random_body(rng, depth - 1);
        case 1:
            return "(" + random_body(rng, depth - 1) + " & " + random_body(rng, depth - 1) + ")";
        default:
            return "(" + random_body(rng, depth - 1) + " | " + random_body(rng, depth - 1) + ")";
    }
}

}  // namespace

std::string random_safety_formula(Rng& rng, int depth) {
    return "G " + random_body(rng, depth);
}

RuleAutomaton random_rule(Rng& rng, const std::string& name) {
    std::string text = random_safety_formula(rng);
    Nfa nfa = compile_safety(parse_formula(text));
    int cls = 1 + int(rng.raw() % 3);
    Rational weight(1 + int(rng.raw() % 10));
    CostMode mode = rng.raw() % 2 == 0 ? CostMode::Duration : CostMode::Event;
    return RuleAutomaton::compile(name, nfa, cls, weight, mode, text);
}

Rulebook random_rulebook(Rng& rng, int n_rules) {
    Rulebook rb;
    for (int i = 0; i < n_rules; ++i) {
        rb.rules.push_back(random_rule(rng, "r" + std::to_string(i)));
        rb.num_classes = std::max(rb.num_classes, rb.rules.back().priority_class());
    }
    return rb;
}

InjectedGraph random_graph(Rng& rng, int max_states, int max_edges) {
    InjectedGraph g;
    int n = 2 + int(rng.raw() % uint64_t(max_states - 1));
    for (int i = 0; i < n; ++i) {
        g.labels.push_back(LabelSet(uint8_t(rng.raw() % kNumLabelSets)));
    }
    std::set<std::pair<int, int>> seen;
    for (int v = 1; v < n; ++v) {
        int u = int(rng.raw() % uint64_t(v));
        g.edges.emplace_back(u, v, rng.uniform(0.1, 3.0));
        seen.insert({u, v});
    }
    int extra = int(rng.raw() % uint64_t(max_edges - n + 2));
    for (int k = 0; k < extra; ++k) {
        int u = int(rng.raw() % uint64_t(n));
        int v = int(rng.raw() % uint64_t(n));
        if (u == v || seen.count({u, v})) continue;
        g.edges.emplace_back(u, v, rng.uniform(0.1, 3.0));
        seen.insert({u, v});
    }
    for (int i = 0; i < n; ++i) {
        if (rng.uniform01() < 0.25) g.goal_states.push_back(i);
    }
    if (g.goal_states.empty()) g.goal_states.push_back(n - 1);
    return g;
}

}  // namespace mvp::test
