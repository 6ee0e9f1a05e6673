// Planar poses and Dubins shortest paths.
#pragma once

#include <array>
#include <string>
#include <vector>

namespace mvp {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // radians, normalized to [0, 2*pi)
};

double mod2pi(double a);            // into [0, 2*pi)
double ang_diff(double a, double b);  // signed difference in (-pi, pi]

// The six candidate word types, in the fixed tie-break order.
enum class DubinsWord { LSL = 0, RSR, LSR, RSL, RLR, LRL };
std::string_view dubins_word_name(DubinsWord w);

enum class DubinsSeg { L, S, R };
std::array<DubinsSeg, 3> dubins_segments(DubinsWord w);

// A shortest curvature-bounded path between two poses. Segment lengths are
// in meters (arcs included); param stores them divided by rho.
struct DubinsPath {
    Pose start;
    DubinsWord word = DubinsWord::LSL;
    std::array<double, 3> seg_lengths = {0, 0, 0};
    double rho = 1.0;

    double length() const { return seg_lengths[0] + seg_lengths[1] + seg_lengths[2]; }
};

// Shortest Dubins path from a to b with minimum turning radius rho.
// Ties between word types resolve to the earliest in the DubinsWord order.
DubinsPath dubins_shortest(const Pose& a, const Pose& b, double rho);

// Length of the best path of one specific word type, or infinity if that
// type does not reach b.
double dubins_word_length(const Pose& a, const Pose& b, double rho, DubinsWord w);

// Pose after driving the first s meters of the path.
Pose dubins_at(const DubinsPath& path, double s);
Pose dubins_endpoint(const DubinsPath& path);

// Poses every ds meters from the start, endpoint always included.
std::vector<Pose> dubins_sample(const DubinsPath& path, double ds);

}  // namespace mvp
