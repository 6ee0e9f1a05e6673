#include "mvplan/automata.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "mvplan/json_util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mvp {

// --- Guards -----------------------------------------------------------------

bool Guard::eval(LabelSet a, LabelSet b) const {
    switch (kind) {
        case Kind::Const: return value;
        case Kind::First: return a.has(prop);
        case Kind::Second: return b.has(prop);
        case Kind::Not: return !kids[0].eval(a, b);
        case Kind::And:
            for (const Guard& g : kids) {
                if (!g.eval(a, b)) return false;
            }
            return true;
        case Kind::Or:
            for (const Guard& g : kids) {
                if (g.eval(a, b)) return true;
            }
            return false;
    }
    return false;
}

std::string Guard::to_string() const {
    switch (kind) {
        case Kind::Const: return value ? "true" : "false";
        case Kind::First: return std::string(prop_name(prop)) + "@1";
        case Kind::Second: return std::string(prop_name(prop)) + "@2";
        case Kind::Not: return "!(" + kids[0].to_string() + ")";
        case Kind::And:
        case Kind::Or: {
            std::string sep = kind == Kind::And ? " & " : " | ";
            std::string s = "(";
            for (size_t i = 0; i < kids.size(); ++i) {
                if (i) s += sep;
                s += kids[i].to_string();
            }
            return s + ")";
        }
    }
    return "?";
}

Guard Guard::constant(bool v) {
    Guard g;
    g.kind = Kind::Const;
    g.value = v;
    return g;
}

Guard Guard::first(Prop p) {
    Guard g;
    g.kind = Kind::First;
    g.prop = p;
    return g;
}

Guard Guard::second(Prop p) {
    Guard g;
    g.kind = Kind::Second;
    g.prop = p;
    return g;
}

Guard Guard::negate(Guard sub) {
    Guard g;
    g.kind = Kind::Not;
    g.kids.push_back(std::move(sub));
    return g;
}

Guard Guard::conj(std::vector<Guard> gs) {
    if (gs.empty()) return constant(true);
    if (gs.size() == 1) return std::move(gs[0]);
    Guard g;
    g.kind = Kind::And;
    g.kids = std::move(gs);
    return g;
}

Guard Guard::disj(std::vector<Guard> gs) {
    if (gs.empty()) return constant(false);
    if (gs.size() == 1) return std::move(gs[0]);
    Guard g;
    g.kind = Kind::Or;
    g.kids = std::move(gs);
    return g;
}

namespace {

std::bitset<kNumPairs> guard_table(const Guard& g) {
    std::bitset<kNumPairs> bits;
    for (int a = 0; a < kNumLabelSets; ++a) {
        for (int b = 0; b < kNumLabelSets; ++b) {
            if (g.eval(LabelSet(uint8_t(a)), LabelSet(uint8_t(b)))) {
                bits.set(size_t(a * kNumLabelSets + b));
            }
        }
    }
    return bits;
}

void validate_nfa(const Nfa& nfa, const char* ctx) {
    if (nfa.n_states <= 0) throw std::invalid_argument(std::string(ctx) + ": no states");
    if (nfa.initial < 0 || nfa.initial >= nfa.n_states)
        throw std::invalid_argument(std::string(ctx) + ": initial state out of range");
    if (int(nfa.accepting.size()) != nfa.n_states)
        throw std::invalid_argument(std::string(ctx) + ": accepting vector size mismatch");
    for (const auto& t : nfa.transitions) {
        if (t.from < 0 || t.from >= nfa.n_states || t.to < 0 || t.to >= nfa.n_states)
            throw std::invalid_argument(std::string(ctx) + ": transition endpoint out of range");
    }
}

}  // namespace

// --- Completion -------------------------------------------------------------

Nfa complete_nonblocking(const Nfa& in) {
    validate_nfa(in, "complete_nonblocking");
    // Per-state residual: pairs no outgoing transition covers.
    std::vector<std::bitset<kNumPairs>> covered(size_t(in.n_states));
    for (const auto& t : in.transitions) covered[size_t(t.from)] |= guard_table(t.guard);

    std::vector<int> incomplete;
    for (int q = 0; q < in.n_states; ++q) {
        if (!covered[size_t(q)].all()) incomplete.push_back(q);
    }
    if (incomplete.empty()) return in;

    Nfa out = in;
    int sink = out.n_states++;
    out.accepting.push_back(false);
    for (int q : incomplete) {
        // Residual guard: not (any existing outgoing guard).
        std::vector<Guard> outgoing;
        for (const auto& t : in.transitions) {
            if (t.from == q) outgoing.push_back(t.guard);
        }
        Guard residual = outgoing.empty() ? Guard::constant(true)
                                          : Guard::negate(Guard::disj(std::move(outgoing)));
        out.transitions.push_back({q, std::move(residual), sink});
    }
    out.transitions.push_back({sink, Guard::constant(true), sink});
    return out;
}

// --- Safety-fragment compilation ---------------------------------------------

namespace {

Guard guard_of_boolean(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::Atom: {
            std::vector<Guard> parts;
            if (f->first) parts.push_back(Guard::first(*f->first));
            if (f->second) parts.push_back(Guard::second(*f->second));
            return Guard::conj(std::move(parts));
        }
        case Formula::Kind::Not: return Guard::negate(guard_of_boolean(f->lhs));
        case Formula::Kind::And: {
            std::vector<Guard> parts;
            parts.push_back(guard_of_boolean(f->lhs));
            parts.push_back(guard_of_boolean(f->rhs));
            return Guard::conj(std::move(parts));
        }
        case Formula::Kind::Or: {
            std::vector<Guard> parts;
            parts.push_back(guard_of_boolean(f->lhs));
            parts.push_back(guard_of_boolean(f->rhs));
            return Guard::disj(std::move(parts));
        }
        default:
            throw UnsupportedFragmentError(
                "compile_safety: body must be a Boolean combination of atoms");
    }
}

}  // namespace

Nfa compile_safety(const FormulaPtr& f) {
    if (f->kind != Formula::Kind::Globally) {
        throw UnsupportedFragmentError("compile_safety: formula must be of the form G <boolean>");
    }
    Nfa nfa;
    nfa.n_states = 1;
    nfa.initial = 0;
    nfa.accepting = {true};
    nfa.transitions.push_back({0, guard_of_boolean(f->lhs), 0});
    return nfa;
}

// --- RuleAutomaton -----------------------------------------------------------

RuleAutomaton RuleAutomaton::compile(std::string name, const Nfa& nfa, int priority_class,
                                     const Rational& weight, CostMode mode,
                                     std::string formula_text) {
    validate_nfa(nfa, "RuleAutomaton");
    if (priority_class < 1) throw std::invalid_argument("RuleAutomaton: class must be >= 1");
    if (weight <= 0) throw std::invalid_argument("RuleAutomaton: weight must be positive");

    RuleAutomaton r;
    r.name_ = std::move(name);
    r.formula_text_ = std::move(formula_text);
    r.nfa_ = complete_nonblocking(nfa);
    r.priority_class_ = priority_class;
    r.weight_ = weight;
    r.mode_ = mode;

    r.out_.assign(size_t(r.nfa_.n_states), {});
    for (const auto& t : r.nfa_.transitions) {
        auto bits = guard_table(t.guard);
        if (bits.none()) continue;  // unsatisfiable guard, no effect
        auto& arcs = r.out_[size_t(t.from)];
        auto it = std::find_if(arcs.begin(), arcs.end(),
                               [&](const Arc& a) { return a.to == t.to; });
        if (it != arcs.end()) {
            it->pairs |= bits;
        } else {
            arcs.push_back({t.to, bits});
        }
    }
    for (auto& arcs : r.out_) {
        std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });
    }

    // Backward reachability from accepting states over satisfiable arcs.
    r.can_accept_.assign(size_t(r.nfa_.n_states), false);
    std::vector<int> stack;
    for (int q = 0; q < r.nfa_.n_states; ++q) {
        if (r.nfa_.accepting[size_t(q)]) {
            r.can_accept_[size_t(q)] = true;
            stack.push_back(q);
        }
    }
    while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (int p = 0; p < r.nfa_.n_states; ++p) {
            if (r.can_accept_[size_t(p)]) continue;
            for (const Arc& a : r.out_[size_t(p)]) {
                if (a.to == q) {
                    r.can_accept_[size_t(p)] = true;
                    stack.push_back(p);
                    break;
                }
            }
        }
    }

    // Group letters with identical transition rows in first pair position;
    // the smallest member of each group is the pending representative.
    std::array<std::vector<uint64_t>, kNumLabelSets> sig;
    for (int s = 0; s < kNumLabelSets; ++s) {
        for (const auto& arcs : r.out_) {
            for (const Arc& a : arcs) {
                uint64_t row = 0;
                for (int t = 0; t < kNumLabelSets; ++t) {
                    if (a.pairs[size_t(s * kNumLabelSets + t)]) row |= uint64_t(1) << t;
                }
                sig[size_t(s)].push_back(row);
            }
        }
    }
    for (int s = 0; s < kNumLabelSets; ++s) {
        int rep = s;
        for (int t = 0; t < s; ++t) {
            if (sig[size_t(t)] == sig[size_t(s)]) {
                rep = t;
                break;
            }
        }
        r.pending_rep_[size_t(s)] = uint8_t(rep);
    }
    return r;
}

bool RuleAutomaton::accepts(const Word& v) const {
    if (v.empty()) return true;
    std::vector<bool> cur(size_t(nfa_.n_states), false);
    cur[size_t(nfa_.initial)] = true;
    for (size_t j = 1; j < v.size(); ++j) {
        std::vector<bool> next(size_t(nfa_.n_states), false);
        int idx = pair_index(v[j - 1], v[j]);
        bool any = false;
        for (int q = 0; q < nfa_.n_states; ++q) {
            if (!cur[size_t(q)]) continue;
            for (const Arc& a : out_[size_t(q)]) {
                if (a.pairs[size_t(idx)]) {
                    next[size_t(a.to)] = true;
                    any = true;
                }
            }
        }
        if (!any) return false;
        cur = std::move(next);
    }
    for (int q = 0; q < nfa_.n_states; ++q) {
        if (cur[size_t(q)] && nfa_.accepting[size_t(q)]) return true;
    }
    return false;
}

// --- Rulebook loading --------------------------------------------------------

namespace {

Rational weight_from_json(const Json& j, const char* ctx) {
    if (j.is_number_integer()) {
        auto v = j.get<long long>();
        if (v <= 0) throw std::runtime_error(std::string(ctx) + ": weight must be positive");
        return Rational(v);
    }
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (!(v > 0)) throw std::runtime_error(std::string(ctx) + ": weight must be positive");
        return rational_from_double(v);
    }
    throw std::runtime_error(std::string(ctx) + ": weight must be a number");
}

}  // namespace

Rulebook load_rulebook_text(const std::string& json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(std::string("rulebook: invalid JSON: ") + e.what());
    }
    check_keys(j, {"classes"}, "rulebook");
    const Json& classes = require_key(j, "classes", "rulebook");
    if (!classes.is_array()) throw std::runtime_error("rulebook.classes: expected an array");

    Rulebook rb;
    rb.num_classes = int(classes.size());
    for (size_t c = 0; c < classes.size(); ++c) {
        const Json& cls = classes[c];
        std::string ctx = "rulebook.classes[" + std::to_string(c) + "]";
        if (!cls.is_array() || cls.empty()) {
            throw std::runtime_error(ctx + ": expected a non-empty array of rules");
        }
        for (size_t i = 0; i < cls.size(); ++i) {
            const Json& rj = cls[i];
            std::string rctx = ctx + "[" + std::to_string(i) + "]";
            check_keys(rj, {"name", "formula", "weight", "cost"}, rctx.c_str());
            std::string name = get_string_in(rj, "name", rctx.c_str());
            std::string formula = get_string_in(rj, "formula", rctx.c_str());
            Rational weight = weight_from_json(require_key(rj, "weight", rctx.c_str()),
                                               rctx.c_str());
            std::string cost = get_string_in(rj, "cost", rctx.c_str());
            CostMode mode;
            if (cost == "duration") {
                mode = CostMode::Duration;
            } else if (cost == "event") {
                mode = CostMode::Event;
            } else {
                throw std::runtime_error(rctx + ".cost: expected \"duration\" or \"event\"");
            }
            FormulaPtr f;
            try {
                f = parse_formula(formula);
            } catch (const FltlParseError& e) {
                throw std::runtime_error(rctx + ".formula: " + e.what() + " (at byte " +
                                         std::to_string(e.offset()) + ")");
            }
            rb.rules.push_back(RuleAutomaton::compile(std::move(name), compile_safety(f),
                                                      int(c) + 1, weight, mode, formula));
        }
    }
    return rb;
}

Rulebook load_rulebook_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("rulebook: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_rulebook_text(ss.str());
}

// --- Word-level unsafety ------------------------------------------------------

namespace {

// DP index for (state, last-kept-letter): pending -1 means nothing kept yet.
inline size_t dp_index(int q, int pending) {
    return size_t(q) * (kNumLabelSets + 1) + size_t(pending + 1);
}

inline Rational erase_cost(const RuleAutomaton& rule, double duration) {
    if (rule.mode() == CostMode::Event) return rule.weight();
    if (duration == 0.0) return Rational(0);
    return rule.weight() * rational_from_double(duration);
}

}  // namespace

Rational unsafety_of_word(const RuleAutomaton& rule, const TimedWord& w) {
    if (w.empty()) return Rational(0);
    const size_t slots = size_t(rule.n_states()) * (kNumLabelSets + 1);
    std::vector<std::optional<Rational>> dist(slots), next(slots);
    dist[dp_index(rule.initial(), -1)] = Rational(0);

    auto relax = [](std::optional<Rational>& slot, const Rational& cand) {
        if (!slot || cand < *slot) slot = cand;
    };

    for (const TimedLetter& letter : w) {
        std::fill(next.begin(), next.end(), std::nullopt);
        const Rational erase = erase_cost(rule, letter.duration);
        const int lraw = letter.labels.raw();
        const int lrep = rule.pending_rep(uint8_t(lraw));
        for (int q = 0; q < rule.n_states(); ++q) {
            for (int pending = -1; pending < kNumLabelSets; ++pending) {
                const auto& cur = dist[dp_index(q, pending)];
                if (!cur) continue;
                relax(next[dp_index(q, pending)], *cur + erase);
                if (pending < 0) {
                    // First kept letter: no pair consumed yet.
                    relax(next[dp_index(q, lrep)], *cur);
                } else {
                    int idx = pending * kNumLabelSets + lraw;
                    for (const auto& arc : rule.arcs_from(q)) {
                        if (arc.pairs[size_t(idx)]) relax(next[dp_index(arc.to, lrep)], *cur);
                    }
                }
            }
        }
        dist.swap(next);
    }

    std::optional<Rational> best = dist[dp_index(rule.initial(), -1)];  // erased everything
    for (int q = 0; q < rule.n_states(); ++q) {
        if (!rule.accepting(q)) continue;
        for (int pending = 0; pending < kNumLabelSets; ++pending) {
            const auto& v = dist[dp_index(q, pending)];
            if (v && (!best || *v < *best)) best = *v;
        }
    }
    assert(best.has_value());  // erasing everything always accepts
    return *best;
}

UnsafetyVector unsafety_vector(const Rulebook& rb, const TimedWord& w) {
    UnsafetyVector out(size_t(rb.num_classes));
    for (size_t r = 0; r < rb.size(); ++r) {
        out[size_t(rb.class_of(r))] += unsafety_of_word(rb.rules[r], w);
    }
    return out;
}

namespace {

// Product states are keyed by one RuleState per rule, packed into a fixed
// array so the per-letter relaxation map avoids per-key allocations.
constexpr size_t kMaxPackedRules = 8;

struct PackedKey {
    std::array<RuleState, kMaxPackedRules> v{};
    bool operator==(const PackedKey&) const = default;
};

struct PackedKeyHash {
    size_t operator()(const PackedKey& k) const {
        uint64_t a = 0, b = 0;
        std::memcpy(&a, k.v.data(), 8);
        std::memcpy(&b, k.v.data() + 4, 8);
        uint64_t h = a * 0x9e3779b97f4a7c15ull;
        h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return size_t(h);
    }
};

struct WideKeyHash {
    size_t operator()(const std::vector<RuleState>& k) const {
        uint64_t h = 0x9e3779b97f4a7c15ull;
        for (RuleState s : k) h = (h ^ s) * 0x100000001b3ull;
        return size_t(h);
    }
};

template <class Key, class Hash>
UnsafetyVector combined_dp(const Rulebook& rb, const TimedWord& w, Key init) {
    const size_t R = rb.size();
    for (size_t r = 0; r < R; ++r) {
        init.v[r] = make_rule_state(rb.rules[r].initial(), -1, BlockStatus::AtBoundary);
    }
    std::unordered_map<Key, UnsafetyVector, Hash> dist;
    dist.emplace(init, UnsafetyVector(size_t(rb.num_classes)));

    std::vector<std::vector<std::pair<RuleState, const Rational*>>> opts(R);
    std::vector<Rational> erase_costs(R);
    const Rational zero(0);
    std::vector<size_t> pick(R);

    for (const TimedLetter& letter : w) {
        const int lraw = letter.labels.raw();
        for (size_t r = 0; r < R; ++r) erase_costs[r] = erase_cost(rb.rules[r], letter.duration);
        std::unordered_map<Key, UnsafetyVector, Hash> next;
        next.reserve(dist.size() * 2);
        for (const auto& [cs, cost] : dist) {
            // Per-rule options: (next rule state, cost contribution).
            for (size_t r = 0; r < R; ++r) {
                const RuleAutomaton& rule = rb.rules[r];
                int q = rs_state(cs.v[r]);
                int pending = rs_pending(cs.v[r]);
                auto& o = opts[r];
                o.clear();
                o.emplace_back(cs.v[r], &erase_costs[r]);
                const int lrep = rule.pending_rep(uint8_t(lraw));
                if (pending < 0) {
                    o.emplace_back(make_rule_state(q, lrep, BlockStatus::AtBoundary), &zero);
                } else {
                    int idx = pending * kNumLabelSets + lraw;
                    for (const auto& arc : rule.arcs_from(q)) {
                        if (arc.pairs[size_t(idx)]) {
                            o.emplace_back(make_rule_state(arc.to, lrep, BlockStatus::AtBoundary),
                                           &zero);
                        }
                    }
                }
            }
            // Cartesian product, odometer order.
            std::fill(pick.begin(), pick.end(), 0);
            for (;;) {
                Key key = cs;
                UnsafetyVector val = cost;
                for (size_t r = 0; r < R; ++r) {
                    key.v[r] = opts[r][pick[r]].first;
                    const Rational& c = *opts[r][pick[r]].second;
                    if (c != 0) val[size_t(rb.class_of(r))] += c;
                }
                auto it = next.find(key);
                if (it == next.end()) {
                    next.emplace(std::move(key), std::move(val));
                } else if (val < it->second) {
                    it->second = std::move(val);
                }
                size_t r = 0;
                while (r < R && ++pick[r] == opts[r].size()) pick[r++] = 0;
                if (r == R) break;
            }
        }
        dist.swap(next);
    }

    std::optional<UnsafetyVector> best;
    for (const auto& [cs, cost] : dist) {
        bool ok = true;
        for (size_t r = 0; r < R && ok; ++r) {
            int q = rs_state(cs.v[r]);
            int pending = rs_pending(cs.v[r]);
            ok = pending < 0 ? q == rb.rules[r].initial() : rb.rules[r].accepting(q);
        }
        if (ok && (!best || cost < *best)) best = cost;
    }
    if (!best) return UnsafetyVector(size_t(rb.num_classes));  // empty word
    return *best;
}

struct WideKey {
    std::vector<RuleState> v;
    bool operator==(const WideKey&) const = default;
};

struct WideKeyVHash {
    size_t operator()(const WideKey& k) const { return WideKeyHash{}(k.v); }
};

}  // namespace

UnsafetyVector combined_unsafety_of_word(const Rulebook& rb, const TimedWord& w) {
    if (rb.size() <= kMaxPackedRules) {
        return combined_dp<PackedKey, PackedKeyHash>(rb, w, PackedKey{});
    }
    WideKey init;
    init.v.resize(rb.size());
    return combined_dp<WideKey, WideKeyVHash>(rb, w, std::move(init));
}

// --- Batch evaluation ----------------------------------------------------------

namespace {

bool use_openmp(Parallel par, size_t n) {
#ifdef _OPENMP
    if (par == Parallel::OpenMP) return true;
    if (par == Parallel::Auto) return n >= 64;
#else
    (void)n;
    if (par == Parallel::OpenMP)
        throw std::runtime_error("parallel evaluation requested but OpenMP is unavailable");
#endif
    return false;
}

}  // namespace

std::vector<Rational> unsafety_of_words(const RuleAutomaton& rule,
                                        const std::vector<TimedWord>& ws, Parallel par) {
    std::vector<Rational> out(ws.size());
    if (use_openmp(par, ws.size())) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < long(ws.size()); ++i) {
            out[size_t(i)] = unsafety_of_word(rule, ws[size_t(i)]);
        }
    } else {
        for (size_t i = 0; i < ws.size(); ++i) out[i] = unsafety_of_word(rule, ws[i]);
    }
    return out;
}

std::vector<UnsafetyVector> unsafety_vectors(const Rulebook& rb,
                                             const std::vector<TimedWord>& ws, Parallel par) {
    std::vector<UnsafetyVector> out(ws.size());
    if (use_openmp(par, ws.size())) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < long(ws.size()); ++i) {
            out[size_t(i)] = unsafety_vector(rb, ws[size_t(i)]);
        }
    } else {
        for (size_t i = 0; i < ws.size(); ++i) out[i] = unsafety_vector(rb, ws[i]);
    }
    return out;
}

// --- Reference semantics ---------------------------------------------------------

TimedWord vanish(const TimedWord& w, const std::vector<size_t>& erase) {
    std::vector<bool> gone(w.size(), false);
    for (size_t i : erase) {
        if (i >= w.size()) throw std::out_of_range("vanish: index out of range");
        gone[i] = true;
    }
    TimedWord out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (!gone[i]) out.push_back(w[i]);
    }
    return out;
}

Rational vanish_oracle(const RuleAutomaton& rule, const TimedWord& w) {
    if (w.size() > 16) {
        throw OracleLimitError("vanish_oracle: words longer than 16 letters are not supported");
    }
    const size_t n = w.size();
    std::optional<Rational> best;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        Word kept;
        Rational cost(0);
        for (size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                cost += erase_cost(rule, w[i].duration);
            } else {
                kept.push_back(w[i].labels);
            }
        }
        if (best && !(cost < *best)) continue;  // cannot improve
        if (rule.accepts(kept)) best = cost;
    }
    assert(best.has_value());
    return *best;
}

std::vector<std::pair<int, Rational>> augmented_step(const RuleAutomaton& rule, int q,
                                                     LabelSet a, LabelSet b) {
    if (q < 0 || q >= rule.n_states()) throw std::out_of_range("augmented_step: bad state");
    int idx = pair_index(a, b);
    std::vector<std::pair<int, Rational>> out;
    out.reserve(size_t(rule.n_states()));
    for (int to = 0; to < rule.n_states(); ++to) {
        bool explicit_arc = false;
        for (const auto& arc : rule.arcs_from(q)) {
            if (arc.to == to && arc.pairs[size_t(idx)]) {
                explicit_arc = true;
                break;
            }
        }
        out.emplace_back(to, explicit_arc ? Rational(0) : rule.weight());
    }
    return out;
}

// --- Product stepping -------------------------------------------------------------

namespace {
constexpr int kPendingSlots = kNumLabelSets + 1;
}

RuleState make_rule_state(int q, int pending, BlockStatus st) {
    assert(q >= 0 && pending >= -1 && pending < kNumLabelSets);
    return RuleState((q * kPendingSlots + (pending + 1)) * 3 + int(st));
}

int rs_state(RuleState rs) { return int(rs) / 3 / kPendingSlots; }
int rs_pending(RuleState rs) { return (int(rs) / 3) % kPendingSlots - 1; }
BlockStatus rs_status(RuleState rs) { return BlockStatus(int(rs) % 3); }

CombinedState initial_combined_state(const Rulebook& rb) {
    CombinedState cs(rb.size());
    for (size_t r = 0; r < rb.size(); ++r) {
        cs[r] = make_rule_state(rb.rules[r].initial(), -1, BlockStatus::AtBoundary);
    }
    return cs;
}

namespace {

// One per-rule successor option with its cost contribution, split into a
// coefficient on the edge duration and a flat part.
struct RuleOption {
    RuleState next;
    bool dur_cost;  // adds weight*delta
    bool evt_cost;  // adds weight
};

void rule_options(const RuleAutomaton& rule, RuleState rs, LabelSet sigma, bool closing,
                  std::vector<RuleOption>& out) {
    out.clear();
    const int q = rs_state(rs);
    const int pending = rs_pending(rs);
    const BlockStatus st = rs_status(rs);
    const bool dur = rule.mode() == CostMode::Duration;
    const BlockStatus open_kept = closing ? BlockStatus::AtBoundary : BlockStatus::OpenKept;
    const BlockStatus open_erased = closing ? BlockStatus::AtBoundary : BlockStatus::OpenErased;

    const int srep = rule.pending_rep(sigma.raw());
    switch (st) {
        case BlockStatus::OpenKept:
            // Inside a block already kept; its transition has fired.
            assert(pending == srep);
            out.push_back({make_rule_state(q, pending, open_kept), false, false});
            return;
        case BlockStatus::OpenErased:
            // Inside a block being erased; event rules paid at the start.
            out.push_back({make_rule_state(q, pending, open_erased), dur, false});
            return;
        case BlockStatus::AtBoundary: break;
    }

    // A fresh block: erase it, or keep it and fire its pair transition.
    out.push_back({make_rule_state(q, pending, open_erased), dur, !dur});
    if (pending < 0) {
        if (rule.can_accept(q)) {
            out.push_back({make_rule_state(q, srep, open_kept), false, false});
        }
    } else {
        int idx = pending * kNumLabelSets + sigma.raw();
        for (const auto& arc : rule.arcs_from(q)) {
            if (arc.pairs[size_t(idx)] && rule.can_accept(arc.to)) {
                out.push_back({make_rule_state(arc.to, srep, open_kept), false, false});
            }
        }
    }
}

// Componentwise comparison for dominance pruning of cost splits.
bool dominates(const UnsafetyVector& d1, const UnsafetyVector& e1, const UnsafetyVector& d2,
               const UnsafetyVector& e2) {
    for (size_t i = 0; i < d1.size(); ++i) {
        if (rational_compare(d2[i], d1[i]) < 0 || rational_compare(e2[i], e1[i]) < 0) return false;
    }
    return true;
}

}  // namespace

std::vector<ProductSucc> product_step(const Rulebook& rb, const CombinedState& cs,
                                      LabelSet sigma, LabelSet sigma_next) {
    const size_t R = rb.size();
    if (cs.size() != R) throw std::invalid_argument("product_step: state size mismatch");
    const bool closing = sigma_next != sigma;

    std::vector<std::vector<RuleOption>> opts(R);
    for (size_t r = 0; r < R; ++r) {
        rule_options(rb.rules[r], cs[r], sigma, closing, opts[r]);
    }

    // Cartesian product with per-target dominance pruning of cost splits.
    std::map<CombinedState, std::vector<std::pair<UnsafetyVector, UnsafetyVector>>> acc;
    std::vector<size_t> pick(R, 0);
    const size_t C = size_t(rb.num_classes);
    for (;;) {
        CombinedState key(R);
        UnsafetyVector dw(C), ew(C);
        for (size_t r = 0; r < R; ++r) {
            const RuleOption& o = opts[r][pick[r]];
            key[r] = o.next;
            if (o.dur_cost) dw[size_t(rb.class_of(r))] += rb.rules[r].weight();
            if (o.evt_cost) ew[size_t(rb.class_of(r))] += rb.rules[r].weight();
        }
        auto& list = acc[std::move(key)];
        bool dominated = false;
        for (const auto& [d, e] : list) {
            if (dominates(d, e, dw, ew)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) {
            std::erase_if(list, [&](const auto& pr) { return dominates(dw, ew, pr.first, pr.second); });
            list.emplace_back(std::move(dw), std::move(ew));
        }
        size_t r = 0;
        while (r < R && ++pick[r] == opts[r].size()) pick[r++] = 0;
        if (r == R) break;
    }

    std::vector<ProductSucc> out;
    out.reserve(acc.size());
    for (auto& [key, list] : acc) {
        std::sort(list.begin(), list.end());
        for (auto& [d, e] : list) out.push_back({key, std::move(d), std::move(e)});
    }
    return out;
}

std::vector<std::pair<CombinedState, UnsafetyVector>> combined_step(
    const Rulebook& rb, const CombinedState& cs, LabelSet sigma, LabelSet sigma_next,
    double delta) {
    if (delta < 0) throw std::invalid_argument("combined_step: negative duration");
    Rational rd = rational_from_double(delta);
    auto succs = product_step(rb, cs, sigma, sigma_next);
    std::vector<std::pair<CombinedState, UnsafetyVector>> out;
    for (auto& s : succs) {
        UnsafetyVector cost(size_t(rb.num_classes));
        for (size_t c = 0; c < cost.size(); ++c) {
            cost[c] = s.evt_weight[c];
            if (s.dur_weight[c] != 0 && rd != 0) cost[c] += s.dur_weight[c] * rd;
        }
        if (!out.empty() && out.back().first == s.next) {
            if (cost < out.back().second) out.back().second = std::move(cost);
        } else {
            out.emplace_back(std::move(s.next), std::move(cost));
        }
    }
    return out;
}

std::optional<UnsafetyVector> product_finish(const Rulebook& rb, const CombinedState& cs,
                                             LabelSet sigma_end) {
    const size_t R = rb.size();
    if (cs.size() != R) throw std::invalid_argument("product_finish: state size mismatch");
    UnsafetyVector total(size_t(rb.num_classes));
    for (size_t r = 0; r < R; ++r) {
        const RuleAutomaton& rule = rb.rules[r];
        const int q = rs_state(cs[r]);
        const int pending = rs_pending(cs[r]);
        const bool end_accepts = pending < 0 ? true : rule.accepting(q);
        std::optional<Rational> best;
        switch (rs_status(cs[r])) {
            case BlockStatus::OpenKept:
                if (rule.accepting(q)) best = Rational(0);
                break;
            case BlockStatus::OpenErased:
                if (end_accepts) best = Rational(0);
                break;
            case BlockStatus::AtBoundary: {
                // Erase the final block (zero remaining duration)...
                if (end_accepts) {
                    best = rule.mode() == CostMode::Event ? rule.weight() : Rational(0);
                }
                // ...or keep it and fire its transition.
                if (pending < 0) {
                    if (rule.accepting(rule.initial()) && (!best || Rational(0) < *best)) {
                        best = Rational(0);
                    }
                } else {
                    int idx = pending * kNumLabelSets + sigma_end.raw();
                    for (const auto& arc : rule.arcs_from(q)) {
                        if (arc.pairs[size_t(idx)] && rule.accepting(arc.to)) {
                            best = Rational(0);
                            break;
                        }
                    }
                }
                break;
            }
        }
        if (!best) return std::nullopt;
        if (*best != 0) total[size_t(rb.class_of(r))] += *best;
    }
    return total;
}

}  // namespace mvp
