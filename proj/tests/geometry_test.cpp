#include <cmath>
#include <doctest.h>

#include "dubins_oracle.hpp"
#include "mvplan/geometry.hpp"
#include "mvplan/rng.hpp"

using namespace mvp;

namespace {

Pose random_pose(Rng& rng, double span) {
    return {rng.uniform(0.0, span), rng.uniform(0.0, span), rng.uniform(0.0, 2.0 * M_PI)};
}

double pose_err(const Pose& a, const Pose& b) {
    return std::hypot(a.x - b.x, a.y - b.y) + std::abs(ang_diff(a.theta, b.theta));
}

}  // namespace

TEST_CASE("mod2pi wraps into [0, 2pi) and snaps the seam") {
    CHECK(mod2pi(0.0) == 0.0);
    CHECK(mod2pi(2.0 * M_PI) == 0.0);
    CHECK(mod2pi(-1e-13) == 0.0);
    CHECK(mod2pi(2.0 * M_PI - 1e-13) == 0.0);
    CHECK(mod2pi(-0.5) == doctest::Approx(2.0 * M_PI - 0.5));
    CHECK(mod2pi(7.0) == doctest::Approx(7.0 - 2.0 * M_PI));
    for (double a : {-9.0, -3.2, 0.4, 5.9, 12.0}) {
        double m = mod2pi(a);
        CHECK(m >= 0.0);
        CHECK(m < 2.0 * M_PI);
        CHECK(std::remainder(m - a, 2.0 * M_PI) == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("ang_diff is the signed shortest rotation") {
    CHECK(ang_diff(0.3, 0.1) == doctest::Approx(0.2));
    CHECK(ang_diff(0.1, 0.3) == doctest::Approx(-0.2));
    CHECK(ang_diff(0.1, 2.0 * M_PI - 0.1) == doctest::Approx(0.2));
    CHECK(ang_diff(0.0, M_PI) == doctest::Approx(M_PI));
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        double a = rng.uniform(0.0, 2.0 * M_PI), b = rng.uniform(0.0, 2.0 * M_PI);
        double d = ang_diff(a, b);
        CHECK(d > -M_PI);
        CHECK(d <= M_PI);
        CHECK(mod2pi(b + d) == doctest::Approx(mod2pi(a)).epsilon(1e-9));
    }
}

TEST_CASE("straight-line case") {
    DubinsPath p = dubins_shortest({0, 0, 0}, {4, 0, 0}, 1.0);
    CHECK(p.length() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(pose_err(dubins_endpoint(p), {4, 0, 0}) < 1e-9);
}

TEST_CASE("u-turn against the numeric oracle, frozen value 2 + pi") {
    Pose a{0, 0, 0}, b{0, 4, M_PI};
    DubinsPath p = dubins_shortest(a, b, 1.0);
    CHECK(p.length() == doctest::Approx(2.0 + M_PI).epsilon(1e-12));
    CHECK(p.word == DubinsWord::LSL);
    double oracle = test::dubins_oracle_length(a, b, 1.0);
    CHECK(p.length() == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("endpoint of the reported path reaches the goal") {
    Rng rng(42);
    for (int i = 0; i < 300; ++i) {
        Pose a = random_pose(rng, 20.0), b = random_pose(rng, 20.0);
        double rho = rng.uniform(0.5, 3.0);
        DubinsPath p = dubins_shortest(a, b, rho);
        CHECK(pose_err(dubins_endpoint(p), b) < 1e-6);
        CHECK(pose_err(dubins_at(p, 0.0), a) < 1e-12);
    }
}

TEST_CASE("length dominates the euclidean distance") {
    Rng rng(43);
    for (int i = 0; i < 300; ++i) {
        Pose a = random_pose(rng, 20.0), b = random_pose(rng, 20.0);
        DubinsPath p = dubins_shortest(a, b, 1.0);
        CHECK(p.length() >= std::hypot(b.x - a.x, b.y - a.y) - 1e-9);
    }
}

TEST_CASE("reported word is the shortest of the six") {
    Rng rng(44);
    for (int i = 0; i < 200; ++i) {
        Pose a = random_pose(rng, 15.0), b = random_pose(rng, 15.0);
        DubinsPath p = dubins_shortest(a, b, 1.0);
        for (int w = 0; w < 6; ++w) {
            CHECK(p.length() <= dubins_word_length(a, b, 1.0, DubinsWord(w)) + 1e-9);
        }
    }
}

TEST_CASE("sampling is evenly spaced and lands on the endpoint") {
    Rng rng(45);
    for (int i = 0; i < 50; ++i) {
        Pose a = random_pose(rng, 10.0), b = random_pose(rng, 10.0);
        DubinsPath p = dubins_shortest(a, b, 1.0);
        double ds = 0.05;
        auto pts = dubins_sample(p, ds);
        REQUIRE(pts.size() >= 2);
        CHECK(pose_err(pts.front(), a) < 1e-12);
        CHECK(pose_err(pts.back(), b) < 1e-6);
        for (size_t j = 0; j + 1 < pts.size(); ++j) {
            double step = std::hypot(pts[j + 1].x - pts[j].x, pts[j + 1].y - pts[j].y);
            CHECK(step <= ds + 1e-9);  // chord never exceeds arc length
        }
    }
}

TEST_CASE("optimality against the control-discretization oracle") {
    Rng rng(46);
    std::vector<std::pair<Pose, Pose>> pairs;
    for (int i = 0; i < 30; ++i) pairs.push_back({random_pose(rng, 20.0), random_pose(rng, 20.0)});
    std::vector<double> closed(pairs.size()), brute(pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < int(pairs.size()); ++i) {
        closed[size_t(i)] = dubins_shortest(pairs[size_t(i)].first, pairs[size_t(i)].second, 1.0)
                                .length();
        brute[size_t(i)] =
            test::dubins_oracle_length(pairs[size_t(i)].first, pairs[size_t(i)].second, 1.0);
    }
    for (size_t i = 0; i < pairs.size(); ++i) {
        CAPTURE(i);
        CHECK(std::abs(closed[i] - brute[i]) <= 0.01 * brute[i]);
    }
}

TEST_CASE("degenerate same-pose query returns a zero-length path") {
    DubinsPath p = dubins_shortest({3, 3, 1.0}, {3, 3, 1.0}, 1.0);
    CHECK(p.length() == doctest::Approx(0.0).epsilon(1e-12));
}
