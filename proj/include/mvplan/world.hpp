// Scenario model: road geometry, proposition labeling, collision scanning.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvplan/geometry.hpp"
#include "mvplan/labels.hpp"

namespace mvp {

struct BBox {
    Vec2 min, max;
    bool contains(double x, double y) const {
        return x >= min.x && x <= max.x && y >= min.y && y <= max.y;
    }
};

class Polygon {
public:
    Polygon() = default;
    explicit Polygon(std::vector<Vec2> pts);

    // Even-odd rule; boundary points count as inside.
    bool contains(double x, double y) const;

    const std::vector<Vec2>& points() const { return pts_; }
    const BBox& bbox() const { return bbox_; }
    double signed_area() const;

private:
    std::vector<Vec2> pts_;
    BBox bbox_;
};

struct Lane {
    Polygon polygon;
    double nominal_heading = 0.0;
    bool right = true;  // right lane (rl) vs left lane (ll)
};

struct CenterLine {
    std::vector<Vec2> polyline;
    bool solid = false;  // solid vs dotted
};

struct LabelParams {
    double band_width = 0.2;        // distance to a center line that sets its prop
    double dir_threshold = M_PI_2;  // max |heading - lane nominal| for dir
};

struct Goal {
    Polygon polygon;
    bool heading_free = true;
};

class OutOfBoundsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Scenario {
    BBox bounds;
    std::vector<Polygon> obstacles;
    std::vector<Polygon> sidewalks;
    std::vector<Lane> lanes;
    std::vector<CenterLine> center_lines;
    Pose init;
    Goal goal;
    double speed = 1.0;  // constant forward speed, m/s
    double rho = 1.0;    // minimum turning radius, m
    LabelParams label_params;

    double default_ds() const { return rho / 20.0; }

    // Labels of a pose. Overlapping lanes resolve to the first in file
    // order; dir additionally requires heading alignment with that lane.
    // Poses outside the bounds throw OutOfBoundsError.
    LabelSet label(const Pose& p) const;

    bool in_obstacle(double x, double y) const;

    // Goal membership: inside the goal polygon and, unless heading_free,
    // aligned with the containing lane's nominal heading (dir predicate).
    bool in_goal(const Pose& p) const;
};

Scenario load_scenario_file(const std::string& path);
Scenario load_scenario_text(const std::string& json_text);

// Samples the path every ds meters (endpoint included) and reports whether
// any sample is inside an obstacle or out of bounds.
bool collides(const Scenario& sc, const DubinsPath& path, double ds);

struct LabeledPath {
    TimedWord word;      // one letter per run of equal labels
    int change_count;    // label changes observed between samples
};

// Timed word traced by driving the path at the scenario speed, labels
// sampled every ds meters (endpoint included). Letter j lasts from the
// first sample showing it to the first sample showing the next letter; the
// final letter lasts until the end of the path, so durations sum to the
// total drive time. Samples must stay in bounds (check collides() first).
LabeledPath label_path(const Scenario& sc, const DubinsPath& path, double ds);

}  // namespace mvp
