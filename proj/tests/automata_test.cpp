#include <doctest.h>

#include "generators.hpp"
#include "mvplan/automata.hpp"
#include "mvplan/fltl.hpp"
#include "mvplan/rng.hpp"

using namespace mvp;

namespace {

LabelSet ls(std::initializer_list<Prop> props) {
    LabelSet s;
    for (Prop p : props) s.set(p);
    return s;
}

TimedLetter tl(std::initializer_list<Prop> props, double dur) { return {ls(props), dur}; }

RuleAutomaton make_rule(const char* formula, int cls, int weight, CostMode mode) {
    return RuleAutomaton::compile(formula, compile_safety(parse_formula(formula)), cls,
                                  Rational(weight), mode, formula);
}

// The running example: drive in the right lane, cut across the sidewalk for
// three seconds, come back.
TimedWord example_word() {
    return {tl({Prop::rl, Prop::dir}, 2), tl({Prop::sw}, 3), tl({Prop::rl, Prop::dir}, 1)};
}

}  // namespace

TEST_CASE("completion adds a sink only when needed") {
    Nfa nfa = compile_safety(parse_formula("G !(_, sw)"));
    CHECK(nfa.n_states == 1);
    Nfa done = complete_nonblocking(nfa);
    REQUIRE(done.n_states == 2);
    CHECK(done.accepting[0]);
    CHECK(!done.accepting[1]);
    // Every pair symbol now has a successor from every state.
    for (int q = 0; q < done.n_states; ++q) {
        for (int a = 0; a < kNumLabelSets; ++a) {
            for (int b = 0; b < kNumLabelSets; ++b) {
                bool any = false;
                for (const NfaTransition& t : done.transitions) {
                    if (t.from == q && t.guard.eval(LabelSet(uint8_t(a)), LabelSet(uint8_t(b)))) {
                        any = true;
                        break;
                    }
                }
                if (!any) {
                    CAPTURE(q);
                    CAPTURE(a);
                    CAPTURE(b);
                    REQUIRE(any);
                }
            }
        }
    }
    CHECK(complete_nonblocking(done).n_states == 2);
}

TEST_CASE("acceptance of untimed words") {
    RuleAutomaton rule = make_rule("G !(_, sw)", 1, 1, CostMode::Duration);
    CHECK(rule.accepts({}));
    CHECK(rule.accepts({ls({Prop::sw})}));  // no transition taken yet
    CHECK(rule.accepts({ls({Prop::rl}), ls({Prop::ll})}));
    CHECK(!rule.accepts({ls({Prop::rl}), ls({Prop::sw})}));
    CHECK(!rule.accepts({ls({Prop::rl}), ls({Prop::sw}), ls({Prop::rl})}));
}

TEST_CASE("sidewalk example: cheapest fix is to drop the short boundary letter") {
    TimedWord w = example_word();
    RuleAutomaton sidewalk = make_rule("G !(_, sw)", 1, 1, CostMode::Duration);
    // Erasing the sidewalk letter costs 3; erasing the one-second re-entry
    // letter is not enough (the pair into sw remains); erasing the leading
    // two-second letter leaves (sw, rl-dir) which satisfies the rule.
    CHECK(unsafety_of_word(sidewalk, w) == Rational(2));
    CHECK(vanish_oracle(sidewalk, w) == Rational(2));

    RuleAutomaton event = make_rule("G !(_, sw)", 1, 1, CostMode::Event);
    CHECK(unsafety_of_word(event, w) == Rational(1));
    CHECK(vanish_oracle(event, w) == Rational(1));

    RuleAutomaton weighted = make_rule("G !(_, sw)", 1, 7, CostMode::Duration);
    CHECK(unsafety_of_word(weighted, w) == Rational(14));
}

TEST_CASE("satisfied words cost nothing") {
    RuleAutomaton rule = make_rule("G !(_, sw)", 1, 5, CostMode::Duration);
    CHECK(unsafety_of_word(rule, {}) == Rational(0));
    CHECK(unsafety_of_word(rule, {tl({Prop::sw}, 9)}) == Rational(0));
    CHECK(unsafety_of_word(rule, {tl({Prop::rl}, 1), tl({Prop::ll}, 2)}) == Rational(0));
}

TEST_CASE("zero-duration letters are free to erase in duration mode") {
    RuleAutomaton rule = make_rule("G !(_, sw)", 1, 1, CostMode::Duration);
    TimedWord w{tl({Prop::rl}, 0), tl({Prop::sw}, 0)};
    CHECK(unsafety_of_word(rule, w) == Rational(0));
    RuleAutomaton event = make_rule("G !(_, sw)", 1, 1, CostMode::Event);
    CHECK(unsafety_of_word(event, w) == Rational(1));
}

TEST_CASE("durations enter exactly, not through floating point") {
    RuleAutomaton rule = make_rule("G !(_, sw)", 1, 3, CostMode::Duration);
    TimedWord w{tl({Prop::rl}, 0.1), tl({Prop::sw}, 0.7)};
    // 0.1 is not 1/10 in binary; the cost must match the dyadic rational of
    // the stored double times the weight.
    CHECK(unsafety_of_word(rule, w) == rational_from_double(0.1) * 3);
}

TEST_CASE("erasing letters can create new violations") {
    RuleAutomaton rule = make_rule("G ((rl, ll) | (ll, rl))", 1, 1, CostMode::Duration);
    TimedWord w{tl({Prop::rl}, 1), tl({Prop::ll}, 1), tl({Prop::rl}, 1)};
    CHECK(unsafety_of_word(rule, w) == Rational(0));
    TimedWord dropped = vanish(w, {1});
    REQUIRE(dropped.size() == 2);
    CHECK(unsafety_of_word(rule, dropped) == Rational(1));
}

TEST_CASE("forcing a letter into the erasure set never lowers the optimum") {
    Rng rng(31);
    RuleAutomaton rules[] = {
        make_rule("G !(_, sw)", 1, 1, CostMode::Duration),
        make_rule("G (_, dir)", 1, 1, CostMode::Duration),
        make_rule("G !((rl, ll) | (ll, rl))", 1, 2, CostMode::Event),
    };
    for (int i = 0; i < 300; ++i) {
        TimedWord w = mvp::test::random_word(rng, 7);
        if (w.empty()) continue;
        size_t k = rng.raw() % w.size();
        for (const RuleAutomaton& rule : rules) {
            Rational erased_cost = rule.mode() == CostMode::Duration
                                       ? rule.weight() * rational_from_double(w[k].duration)
                                       : rule.weight();
            CHECK(unsafety_of_word(rule, w) <=
                  erased_cost + unsafety_of_word(rule, vanish(w, {k})));
        }
    }
}

TEST_CASE("dynamic program equals subset enumeration") {
    Rng rng(17);
    std::vector<RuleAutomaton> rules;
    rules.push_back(make_rule("G !(_, sw)", 1, 1, CostMode::Duration));
    rules.push_back(make_rule("G (_, dir)", 2, 1, CostMode::Duration));
    rules.push_back(make_rule("G !((rl, dotted) & (rl, ll) | (ll, dotted) & (ll, rl))", 3, 10,
                              CostMode::Event));
    rules.push_back(make_rule("G !(_, solid)", 2, 1, CostMode::Duration));
    for (int i = 0; i < 12; ++i) rules.push_back(mvp::test::random_rule(rng, "r"));

    for (int i = 0; i < 400; ++i) {
        TimedWord w = mvp::test::random_word(rng, 8);
        for (const RuleAutomaton& rule : rules) {
            Rational dp = unsafety_of_word(rule, w);
            Rational brute = vanish_oracle(rule, w);
            if (dp != brute) {
                CAPTURE(rule.formula_text());
                CAPTURE(w.size());
                REQUIRE(dp == brute);
            }
        }
    }
}

TEST_CASE("combined product equals per-rule sums") {
    Rng rng(23);
    for (int rep = 0; rep < 12; ++rep) {
        Rulebook rb = mvp::test::random_rulebook(rng, 1 + int(rng.raw() % 4));
        for (int i = 0; i < 20; ++i) {
            TimedWord w = mvp::test::random_word(rng, 5);
            UnsafetyVector separate = unsafety_vector(rb, w);
            UnsafetyVector combined = combined_unsafety_of_word(rb, w);
            CHECK(separate == combined);
        }
    }
}

TEST_CASE("per-class sums add rules of the same class") {
    Rulebook rb;
    rb.rules.push_back(make_rule("G !(_, sw)", 1, 1, CostMode::Duration));
    rb.rules.push_back(make_rule("G !(_, sw)", 1, 2, CostMode::Event));
    rb.num_classes = 2;
    TimedWord w = example_word();
    UnsafetyVector v = unsafety_vector(rb, w);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == Rational(4));  // 2 (duration fix) + 2 (event fix)
    CHECK(v[1] == Rational(0));
    CHECK(v.to_string() == "[4, 0]");
}

TEST_CASE("oracle refuses long words") {
    RuleAutomaton rule = make_rule("G !(_, sw)", 1, 1, CostMode::Duration);
    TimedWord w;
    for (int i = 0; i < 20; ++i) w.push_back(tl({i % 2 ? Prop::rl : Prop::ll}, 1));
    CHECK_THROWS_AS((void)vanish_oracle(rule, w), OracleLimitError);
}

TEST_CASE("augmented step on the one-state automaton") {
    RuleAutomaton rule = make_rule("G !(_, sw)", 1, 5, CostMode::Duration);
    auto sat = augmented_step(rule, 0, ls({Prop::rl}), ls({Prop::ll}));
    REQUIRE(sat.size() >= 1);
    CHECK(sat[0].first == 0);
    CHECK(sat[0].second == Rational(0));
    auto vio = augmented_step(rule, 0, ls({Prop::rl}), ls({Prop::sw}));
    bool has_zero_cost_self = false;
    for (auto& [q, c] : vio) {
        if (q == 0) {
            CHECK(c == Rational(5));
        }
        if (c == Rational(0) && q == 0) has_zero_cost_self = true;
    }
    CHECK(!has_zero_cost_self);
}

TEST_CASE("batch kernels agree across serial and parallel") {
    Rng rng(41);
    RuleAutomaton rule = make_rule("G !((rl, ll) | (ll, rl))", 1, 3, CostMode::Event);
    Rulebook rb;
    rb.rules.push_back(make_rule("G !(_, sw)", 1, 1, CostMode::Duration));
    rb.rules.push_back(make_rule("G (_, dir)", 2, 1, CostMode::Duration));
    rb.num_classes = 2;
    std::vector<TimedWord> words;
    for (int i = 0; i < 300; ++i) words.push_back(mvp::test::random_word(rng, 8));
    CHECK(unsafety_of_words(rule, words, Parallel::Serial) ==
          unsafety_of_words(rule, words, Parallel::OpenMP));
    auto a = unsafety_vectors(rb, words, Parallel::Serial);
    auto b = unsafety_vectors(rb, words, Parallel::Auto);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("rulebook loading is strict") {
    const char* good = R"x({"classes": [
      [{"name": "sidewalk", "formula": "G !(_, sw)", "weight": 1, "cost": "duration"}],
      [{"name": "lines", "formula": "G !(_, solid)", "weight": 0.5, "cost": "event"}]
    ]})x";
    Rulebook rb = load_rulebook_text(good);
    CHECK(rb.num_classes == 2);
    REQUIRE(rb.rules.size() == 2);
    CHECK(rb.rules[0].priority_class() == 1);
    CHECK(rb.class_of(1) == 1);
    CHECK(rb.rules[1].weight() == Rational(1) / 2);

    CHECK_THROWS_WITH_AS(load_rulebook_text("[]"), doctest::Contains("object"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(
        load_rulebook_text(R"x({"classes": [[{"name": "x", "formula": "G !(_, sw)",
          "weight": 1, "cost": "duration", "extra": 1}]]})x"),
        doctest::Contains("extra"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        load_rulebook_text(R"x({"classes": [[{"name": "x", "formula": "F (sw, _)",
          "weight": 1, "cost": "duration"}]]})x"),
        doctest::Contains("G"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        load_rulebook_text(R"x({"classes": [[{"name": "x", "formula": "G !(_, zz)",
          "weight": 1, "cost": "duration"}]]})x"),
        doctest::Contains("zz"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        load_rulebook_text(R"x({"classes": [[{"name": "x", "formula": "G !(_, sw)",
          "weight": 0, "cost": "duration"}]]})x"),
        doctest::Contains("weight"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        load_rulebook_text(R"x({"classes": [[{"name": "x", "formula": "G !(_, sw)",
          "weight": 1, "cost": "sometimes"}]]})x"),
        doctest::Contains("cost"), std::runtime_error);
}

TEST_CASE("weights parse exactly") {
    auto rb = load_rulebook_text(R"x({"classes": [[
      {"name": "a", "formula": "G !(_, sw)", "weight": 10, "cost": "event"},
      {"name": "b", "formula": "G !(_, sw)", "weight": 0.1, "cost": "event"}
    ]]})x");
    CHECK(rb.rules[0].weight() == Rational(10));
    CHECK(rb.rules[1].weight() == rational_from_double(0.1));
    CHECK(rb.rules[1].weight() != Rational(1) / 10);
}
