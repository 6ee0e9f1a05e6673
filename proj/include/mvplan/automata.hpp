// Safety-rule automata and the weighted erasure semantics of unsafety.
//
// A rule automaton reads PAIRS of consecutive label sets: a word v0..v(m-1)
// induces the pair sequence (v0,v1)..(v(m-2),v(m-1)), and the automaton
// accepts when a run over those pairs ends in an accepting state. Words of
// length one are accepted iff the initial state is accepting; the empty word
// is accepted by convention.
//
// The level of unsafety of a timed word w.r.t. a rule is the cheapest way to
// erase letters so that the remainder is accepted, where erasing letter i
// costs weight*duration(i) for duration-mode rules and a flat weight for
// event-mode rules. Erasure is evaluated literally: the remaining letters
// are not re-merged, so erasing can create new adjacent pairs.
#pragma once

#include <bitset>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mvplan/fltl.hpp"
#include "mvplan/labels.hpp"
#include "mvplan/rational.hpp"

namespace mvp {

// Boolean guard over one pair (sigma, sigma') of label sets.
struct Guard {
    enum class Kind { Const, First, Second, Not, And, Or };

    Kind kind = Kind::Const;
    bool value = false;   // Const
    Prop prop = Prop::sw; // First / Second
    std::vector<Guard> kids;

    bool eval(LabelSet a, LabelSet b) const;
    std::string to_string() const;

    static Guard constant(bool v);
    static Guard first(Prop p);   // p in sigma
    static Guard second(Prop p);  // p in sigma'
    static Guard negate(Guard g);
    static Guard conj(std::vector<Guard> gs);  // empty: true
    static Guard disj(std::vector<Guard> gs);  // empty: false
};

// Index of a pair symbol into guard tables: 64*raw(sigma) + raw(sigma').
inline int pair_index(LabelSet a, LabelSet b) {
    return int(a.raw()) * kNumLabelSets + int(b.raw());
}
inline constexpr int kNumPairs = kNumLabelSets * kNumLabelSets;

struct NfaTransition {
    int from = 0;
    Guard guard;
    int to = 0;
};

struct Nfa {
    int n_states = 1;
    int initial = 0;
    std::vector<bool> accepting;  // size n_states
    std::vector<NfaTransition> transitions;
};

// Adds, if needed, a non-accepting sink with a true self-loop plus residual
// transitions so every state has a successor on every pair symbol. Returns
// the input unchanged when it is already complete.
Nfa complete_nonblocking(const Nfa& in);

// Compiles "G beta" (beta a Boolean combination of atoms) into a one-state
// automaton whose self-loop guard is beta. Anything outside that fragment
// throws UnsupportedFragmentError.
class UnsupportedFragmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
Nfa compile_safety(const FormulaPtr& f);

enum class CostMode { Duration, Event };

// A compiled rule: completed automaton, per-transition pair tables, weight,
// priority class, cost mode.
class RuleAutomaton {
public:
    static RuleAutomaton compile(std::string name, const Nfa& nfa, int priority_class,
                                 const Rational& weight, CostMode mode,
                                 std::string formula_text = {});

    const std::string& name() const { return name_; }
    const std::string& formula_text() const { return formula_text_; }
    int priority_class() const { return priority_class_; }  // 1-based
    const Rational& weight() const { return weight_; }
    CostMode mode() const { return mode_; }

    const Nfa& nfa() const { return nfa_; }
    int n_states() const { return nfa_.n_states; }
    int initial() const { return nfa_.initial; }
    bool accepting(int q) const { return nfa_.accepting[size_t(q)]; }

    struct Arc {
        int to;
        std::bitset<kNumPairs> pairs;
    };
    const std::vector<Arc>& arcs_from(int q) const { return out_[size_t(q)]; }

    // Whether an accepting state is reachable from q via satisfiable
    // transitions. States failing this can never be part of an accepting
    // run and are pruned from product successors.
    bool can_accept(int q) const { return can_accept_[size_t(q)]; }

    // Canonical representative of a letter among those this automaton cannot
    // tell apart in first pair position (identical transition rows). Stored
    // pending letters are always representatives, which keeps per-rule state
    // spaces (and the planner's product tree) small without changing any
    // unsafety value.
    uint8_t pending_rep(uint8_t raw) const { return pending_rep_[raw]; }

    // Runs the automaton over the pair sequence of v (set-of-states
    // simulation). Empty words accept by convention.
    bool accepts(const Word& v) const;

private:
    std::string name_;
    std::string formula_text_;
    Nfa nfa_;
    int priority_class_ = 1;
    Rational weight_ = 1;
    CostMode mode_ = CostMode::Duration;
    std::vector<std::vector<Arc>> out_;
    std::vector<bool> can_accept_;
    std::array<uint8_t, kNumLabelSets> pending_rep_{};
};

struct Rulebook {
    std::vector<RuleAutomaton> rules;  // flattened in class order
    int num_classes = 0;

    std::size_t size() const { return rules.size(); }
    int class_of(std::size_t r) const { return rules[r].priority_class() - 1; }
};

// Loads a rulebook from JSON: {"classes": [[{name, formula, weight, cost}...], ...]}.
// Unknown keys and malformed values are rejected.
Rulebook load_rulebook_file(const std::string& path);
Rulebook load_rulebook_text(const std::string& json_text);

// --- Word-level unsafety ---------------------------------------------------

// Exact minimum erasure cost for one rule (dynamic program over
// (state, last-kept-letter)). Words are taken literally, adjacent equal
// letters included.
Rational unsafety_of_word(const RuleAutomaton& rule, const TimedWord& w);

// Per-class sums of per-rule unsafety.
UnsafetyVector unsafety_vector(const Rulebook& rb, const TimedWord& w);

// The same value computed as one lexicographic shortest run over the
// combined (all-rules) dynamic program; equals unsafety_vector on every
// word because per-rule erasure choices are independent.
UnsafetyVector combined_unsafety_of_word(const Rulebook& rb, const TimedWord& w);

enum class Parallel { Serial, OpenMP, Auto };

// Batch evaluation; the OpenMP path must agree with Serial exactly.
std::vector<Rational> unsafety_of_words(const RuleAutomaton& rule,
                                        const std::vector<TimedWord>& ws, Parallel par);
std::vector<UnsafetyVector> unsafety_vectors(const Rulebook& rb,
                                             const std::vector<TimedWord>& ws, Parallel par);

// --- Reference semantics (test oracles and documented ops) -----------------

// Drops the letters whose indices are in `erase` (remaining letters keep
// their own durations; no re-merging).
TimedWord vanish(const TimedWord& w, const std::vector<size_t>& erase);

class OracleLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Brute-force enumeration of all erasure subsets (words up to 16 letters,
// otherwise OracleLimitError). Defines the semantics unsafety_of_word must
// reproduce exactly.
Rational vanish_oracle(const RuleAutomaton& rule, const TimedWord& w);

// The classical weighted-augmentation step over the pair alphabet: from
// state q on pair (a, b), every state is reachable, at cost 0 where an
// explicit transition exists and at the rule's weight otherwise. Kept as a
// documented reference operation; the planner does not use it, because over
// pair symbols its shortest accepting run can undercut the erasure optimum
// (erasing a letter rewrites the adjacent pairs, which this step ignores).
std::vector<std::pair<int, Rational>> augmented_step(const RuleAutomaton& rule, int q,
                                                     LabelSet a, LabelSet b);

// --- Product stepping for the planner --------------------------------------

// Per-rule product component: automaton state, last kept (destuttered)
// letter, and the status of the currently open block of equal labels.
// Packed into one integer for cheap hashing and ordering.
//
// Block status: a trace is consumed one edge at a time, each edge carrying
// the label of its source state. Runs of equal labels form one destuttered
// letter, which must be erased or kept atomically; Open tracks which way the
// current run went (kept runs have already fired their pair transition,
// erased event-mode runs have already paid).
enum class BlockStatus : uint8_t { AtBoundary = 0, OpenKept = 1, OpenErased = 2 };

using RuleState = uint16_t;
RuleState make_rule_state(int q, int pending /* -1 for none, else raw label */,
                          BlockStatus st);
int rs_state(RuleState rs);
int rs_pending(RuleState rs);  // -1 when no letter kept yet
BlockStatus rs_status(RuleState rs);

using CombinedState = std::vector<RuleState>;

CombinedState initial_combined_state(const Rulebook& rb);

// One product successor, with the cost split so callers can price edges of
// any duration: cost(delta) = dur_weight*delta + evt_weight, per class.
struct ProductSucc {
    CombinedState next;
    UnsafetyVector dur_weight;
    UnsafetyVector evt_weight;
};

// All successors of `cs` when consuming one edge whose source carries
// `sigma` and whose destination carries `sigma_next` (the pair determines
// whether the current block closes). Successors are deduplicated by target
// state; distinct incomparable cost splits are all returned, sorted.
std::vector<ProductSucc> product_step(const Rulebook& rb, const CombinedState& cs,
                                      LabelSet sigma, LabelSet sigma_next);

// Materialized costs for a concrete edge duration.
std::vector<std::pair<CombinedState, UnsafetyVector>> combined_step(
    const Rulebook& rb, const CombinedState& cs, LabelSet sigma, LabelSet sigma_next,
    double delta);

// Cost of settling the final block at the end of a trace (its letter is
// sigma_end, with no duration left past the last edge), or nothing if the
// combined state cannot accept.
std::optional<UnsafetyVector> product_finish(const Rulebook& rb, const CombinedState& cs,
                                             LabelSet sigma_end);

}  // namespace mvp
