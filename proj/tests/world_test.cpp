#include <cmath>
#include <doctest.h>

#include "mvplan/geometry.hpp"
#include "mvplan/world.hpp"

using namespace mvp;

namespace {

// Two lanes with a dotted center line at y = 3, a sidewalk band above, one
// obstacle square in the right lane.
const char* kScenario = R"({
  "bounds": {"min": [0, 0], "max": [20, 10]},
  "obstacles": [[[9, 0], [11, 0], [11, 2], [9, 2]]],
  "sidewalks": [[[0, 6], [20, 6], [20, 8], [0, 8]]],
  "lanes": [
    {"polygon": [[0, 0], [20, 0], [20, 3], [0, 3]], "nominal_heading": 0.0, "side": "rl"},
    {"polygon": [[0, 3], [20, 3], [20, 6], [0, 6]], "nominal_heading": 3.14159265358979, "side": "ll"}
  ],
  "center_lines": [{"polyline": [[0, 3], [20, 3]], "style": "dotted"}],
  "init": {"x": 1, "y": 1.5, "theta": 0},
  "goal": {"polygon": [[17, 0], [19, 0], [19, 3], [17, 3]], "heading_free": true},
  "speed": 2.0,
  "rho": 1.0,
  "label_params": {"band_width": 0.2, "dir_threshold": 1.5707963267948966}
})";

std::string patched(const std::string& from, const std::string& to) {
    std::string s = kScenario;
    auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    s.replace(pos, from.size(), to);
    return s;
}

}  // namespace

TEST_CASE("labels by region") {
    Scenario sc = load_scenario_text(kScenario);

    CHECK(sc.label({1, 1.5, 0}).to_string() == "{rl,dir}");
    CHECK(sc.label({1, 1.5, M_PI}).to_string() == "{rl}");
    CHECK(sc.label({1, 4.5, M_PI}).to_string() == "{ll,dir}");
    CHECK(sc.label({1, 4.5, 0}).to_string() == "{ll}");
    CHECK(sc.label({1, 7.0, 0}).to_string() == "{sw}");
    CHECK(sc.label({1, 9.0, 0}).empty());

    CHECK(sc.label({5, 2.95, 0}).to_string() == "{rl,dir,dotted}");
    CHECK(sc.label({5, 3.05, M_PI}).to_string() == "{ll,dir,dotted}");
    CHECK(sc.label({5, 3.3, 0}).to_string() == "{ll}");

    CHECK_THROWS_AS((void)sc.label({-1, 5, 0}), OutOfBoundsError);
    CHECK_THROWS_AS((void)sc.label({5, 10.5, 0}), OutOfBoundsError);
}

TEST_CASE("heading within the threshold is strict") {
    Scenario sc = load_scenario_text(kScenario);
    double t = sc.label_params.dir_threshold;
    CHECK(!sc.label({1, 1.5, t}).has(Prop::dir));          // exactly at the threshold
    CHECK(sc.label({1, 1.5, t - 1e-9}).has(Prop::dir));
}

TEST_CASE("obstacles and goal membership") {
    Scenario sc = load_scenario_text(kScenario);
    CHECK(sc.in_obstacle(10, 1));
    CHECK(!sc.in_obstacle(10, 2.5));
    CHECK(sc.in_goal({18, 1.5, 2.0}));
    CHECK(!sc.in_goal({16, 1.5, 0}));

    Scenario strict = load_scenario_text(patched("\"heading_free\": true", "\"heading_free\": false"));
    CHECK(strict.in_goal({18, 1.5, 0}));       // aligned with the rl lane
    CHECK(!strict.in_goal({18, 1.5, M_PI}));   // against it
}

TEST_CASE("collision checking samples the whole path") {
    Scenario sc = load_scenario_text(kScenario);
    double ds = sc.default_ds();
    CHECK(ds == doctest::Approx(0.05));

    DubinsPath through = dubins_shortest({5, 1, 0}, {15, 1, 0}, sc.rho);
    CHECK(collides(sc, through, ds));

    DubinsPath clear = dubins_shortest({5, 4.5, 0}, {15, 4.5, 0}, sc.rho);
    CHECK(!collides(sc, clear, ds));

    // A u-turn hugging the top border swings outside the bounds.
    DubinsPath swing = dubins_shortest({19.5, 9.5, 0}, {19.5, 9.4, M_PI}, sc.rho);
    CHECK(collides(sc, swing, ds));
}

TEST_CASE("label_path produces the block word of the drive") {
    Scenario sc = load_scenario_text(kScenario);
    double ds = sc.default_ds();

    DubinsPath straight = dubins_shortest({1, 1.5, 0}, {5, 1.5, 0}, sc.rho);
    LabeledPath lp = label_path(sc, straight, ds);
    REQUIRE(lp.word.size() == 1);
    CHECK(lp.change_count == 0);
    CHECK(lp.word[0].labels.to_string() == "{rl,dir}");
    CHECK(lp.word[0].duration == doctest::Approx(4.0 / sc.speed));

    // Oblique crossing, heading 2 rad: against the right lane, with the left.
    double len = 4.0 / std::sin(2.0);
    Pose a{3, 1, 2.0};
    Pose b{3 + len * std::cos(2.0), 5, 2.0};
    DubinsPath crossing = dubins_shortest(a, b, sc.rho);
    LabeledPath cross = label_path(sc, crossing, ds);
    REQUIRE(cross.word.size() == 4);
    CHECK(cross.change_count == 3);
    CHECK(cross.word[0].labels.to_string() == "{rl}");
    CHECK(cross.word[1].labels.to_string() == "{rl,dotted}");
    CHECK(cross.word[2].labels.to_string() == "{ll,dir,dotted}");
    CHECK(cross.word[3].labels.to_string() == "{ll,dir}");
    double sum = 0;
    for (auto& l : cross.word) sum += l.duration;
    CHECK(sum == doctest::Approx(crossing.length() / sc.speed));

    // Refining the step can only split blocks further, never merge them.
    LabeledPath fine = label_path(sc, crossing, ds / 2);
    CHECK(fine.change_count >= cross.change_count);
}

TEST_CASE("scenario schema is closed and validated") {
    CHECK_THROWS_WITH_AS(load_scenario_text("{"), doctest::Contains("invalid JSON"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(load_scenario_text(patched("\"speed\": 2.0", "\"speed\": 2.0, \"extra\": 1")),
                         doctest::Contains("extra"), std::runtime_error);
    CHECK_THROWS_WITH_AS(load_scenario_text(patched("\"speed\": 2.0", "\"speed\": 0")),
                         doctest::Contains("speed"), std::runtime_error);
    CHECK_THROWS_WITH_AS(load_scenario_text(patched("\"side\": \"rl\"", "\"side\": \"left\"")),
                         doctest::Contains("side"), std::runtime_error);
    CHECK_THROWS_WITH_AS(load_scenario_text(patched("\"style\": \"dotted\"", "\"style\": \"thin\"")),
                         doctest::Contains("style"), std::runtime_error);
    // clockwise polygon
    CHECK_THROWS_WITH_AS(
        load_scenario_text(patched("[[9, 0], [11, 0], [11, 2], [9, 2]]",
                                   "[[9, 0], [9, 2], [11, 2], [11, 0]]")),
        doctest::Contains("counter-clockwise"), std::runtime_error);
    // init inside an obstacle
    CHECK_THROWS_WITH_AS(load_scenario_text(patched("\"x\": 1, \"y\": 1.5", "\"x\": 10, \"y\": 1")),
                         doctest::Contains("obstacle"), std::runtime_error);
    // init out of bounds
    CHECK_THROWS_WITH_AS(load_scenario_text(patched("\"x\": 1, \"y\": 1.5", "\"x\": 25, \"y\": 1.5")),
                         doctest::Contains("bounds"), std::runtime_error);
}

TEST_CASE("boundary points belong to polygons") {
    Polygon box({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    CHECK(box.contains(1, 1));
    CHECK(box.contains(0, 1));
    CHECK(box.contains(2, 2));
    CHECK(!box.contains(2.1, 1));
    CHECK(box.signed_area() == doctest::Approx(4.0));
}
