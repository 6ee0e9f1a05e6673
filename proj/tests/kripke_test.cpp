#include <doctest.h>

#include <stdexcept>

#include "mvplan/kripke.hpp"

using namespace mvp;

namespace {

KripkeStructure tiny_graph() {
    KripkeStructure k;
    k.add_state({0, 0, 0}, LabelSet{Prop::rl});
    k.add_state({1, 0, 0}, LabelSet{Prop::rl});
    k.add_state({2, 0, 0}, LabelSet{Prop::ll, Prop::dir});
    k.add_edge(0, 1, 0.5);
    k.add_edge(1, 2, 1.5);
    return k;
}

}  // namespace

TEST_CASE("states get sequential ids and keep their data") {
    KripkeStructure k;
    CHECK(k.n_states() == 0);
    int a = k.add_state({1, 2, 3}, LabelSet{Prop::sw});
    int b = k.add_state({4, 5, 0.25}, LabelSet{});
    CHECK(a == 0);
    CHECK(b == 1);
    CHECK(k.n_states() == 2);
    CHECK(k.pose(0).x == 1);
    CHECK(k.pose(1).theta == 0.25);
    CHECK(k.labels(0) == LabelSet{Prop::sw});
    CHECK(k.labels(1).empty());
}

TEST_CASE("add_edge validates endpoints, loops, and durations") {
    KripkeStructure k = tiny_graph();
    CHECK_THROWS_AS(k.add_edge(0, 3, 1.0), std::out_of_range);
    CHECK_THROWS_AS(k.add_edge(-1, 0, 1.0), std::out_of_range);
    CHECK_THROWS_AS(k.add_edge(1, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(k.add_edge(0, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(k.add_edge(0, 2, -2.0), std::invalid_argument);
    CHECK(k.n_edges() == 2);
}

TEST_CASE("duplicate edges overwrite the duration") {
    KripkeStructure k = tiny_graph();
    CHECK(k.duration(0, 1) == 0.5);
    k.add_edge(0, 1, 2.25);
    CHECK(k.duration(0, 1) == 2.25);
    CHECK(k.n_edges() == 2);
    CHECK(k.has_edge(0, 1));
    CHECK_FALSE(k.has_edge(1, 0));
    CHECK_THROWS_AS(k.duration(1, 0), std::invalid_argument);
}

TEST_CASE("edge iteration is sorted and deterministic") {
    KripkeStructure k;
    for (int i = 0; i < 5; ++i) k.add_state({double(i), 0, 0}, LabelSet{});
    k.add_edge(0, 4, 1);
    k.add_edge(0, 2, 1);
    k.add_edge(0, 1, 1);
    k.add_edge(3, 4, 1);
    k.add_edge(1, 4, 1);
    std::vector<int> targets;
    for (const auto& [to, dur] : k.out_edges(0)) targets.push_back(to);
    CHECK(targets == std::vector<int>{1, 2, 4});
    CHECK(k.in_edges(4) == std::vector<int>{0, 1, 3});
    CHECK(k.in_edges(2) == std::vector<int>{0});
    CHECK(k.in_edges(0).empty());
}

TEST_CASE("timed_word holds each state for its outgoing edge") {
    KripkeStructure k = tiny_graph();
    TimedWord w = timed_word(k, {0, 1, 2});
    REQUIRE(w.size() == 3);
    CHECK(w[0].labels == LabelSet{Prop::rl});
    CHECK(w[0].duration == 0.5);
    CHECK(w[1].duration == 1.5);
    CHECK(w[2].labels == (LabelSet{Prop::ll, Prop::dir}));
    CHECK(w[2].duration == 0.0);

    CHECK(timed_word(k, {}).empty());
    TimedWord single = timed_word(k, {2});
    REQUIRE(single.size() == 1);
    CHECK(single[0].duration == 0.0);

    CHECK_THROWS_AS(timed_word(k, {0, 2}), std::invalid_argument);
}

TEST_CASE("trace_duration sums edge durations") {
    KripkeStructure k = tiny_graph();
    CHECK(trace_duration(k, {0, 1, 2}) == 2.0);
    CHECK(trace_duration(k, {0, 1}) == 0.5);
    CHECK(trace_duration(k, {1}) == 0.0);
    CHECK(trace_duration(k, {}) == 0.0);
}

TEST_CASE("stuttering trace words destutter to block words") {
    KripkeStructure k = tiny_graph();
    // States 0 and 1 carry the same labels, so the first two letters merge.
    TimedWord w = destutter(timed_word(k, {0, 1, 2}));
    REQUIRE(w.size() == 2);
    CHECK(w[0].labels == LabelSet{Prop::rl});
    CHECK(w[0].duration == 2.0);
    CHECK(w[1].labels == (LabelSet{Prop::ll, Prop::dir}));
    CHECK(w[1].duration == 0.0);
}
