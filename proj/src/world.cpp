#include "mvplan/world.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mvplan/json_util.hpp"

namespace mvp {

namespace {

constexpr double kBoundaryEps = 1e-12;

double point_segment_dist(double px, double py, Vec2 a, Vec2 b) {
    double dx = b.x - a.x, dy = b.y - a.y;
    double len2 = dx * dx + dy * dy;
    double t = 0;
    if (len2 > 0) {
        t = ((px - a.x) * dx + (py - a.y) * dy) / len2;
        t = std::clamp(t, 0.0, 1.0);
    }
    double cx = a.x + t * dx, cy = a.y + t * dy;
    return std::hypot(px - cx, py - cy);
}

}  // namespace

Polygon::Polygon(std::vector<Vec2> pts) : pts_(std::move(pts)) {
    if (pts_.size() < 3) throw std::invalid_argument("polygon: needs at least 3 vertices");
    bbox_.min = bbox_.max = pts_[0];
    for (const Vec2& p : pts_) {
        bbox_.min.x = std::min(bbox_.min.x, p.x);
        bbox_.min.y = std::min(bbox_.min.y, p.y);
        bbox_.max.x = std::max(bbox_.max.x, p.x);
        bbox_.max.y = std::max(bbox_.max.y, p.y);
    }
}

double Polygon::signed_area() const {
    double a = 0;
    for (size_t i = 0; i < pts_.size(); ++i) {
        const Vec2& p = pts_[i];
        const Vec2& q = pts_[(i + 1) % pts_.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return a / 2;
}

bool Polygon::contains(double x, double y) const {
    if (!bbox_.contains(x, y)) return false;
    // Boundary points count as inside.
    for (size_t i = 0; i < pts_.size(); ++i) {
        if (point_segment_dist(x, y, pts_[i], pts_[(i + 1) % pts_.size()]) <= kBoundaryEps) {
            return true;
        }
    }
    bool inside = false;
    for (size_t i = 0, j = pts_.size() - 1; i < pts_.size(); j = i++) {
        const Vec2& pi = pts_[i];
        const Vec2& pj = pts_[j];
        if ((pi.y > y) != (pj.y > y)) {
            double xint = pi.x + (y - pi.y) * (pj.x - pi.x) / (pj.y - pi.y);
            if (x < xint) inside = !inside;
        }
    }
    return inside;
}

LabelSet Scenario::label(const Pose& p) const {
    if (!bounds.contains(p.x, p.y)) {
        std::ostringstream os;
        os << "label: pose (" << p.x << ", " << p.y << ") is outside the scenario bounds";
        throw OutOfBoundsError(os.str());
    }
    LabelSet s;
    for (const Polygon& sw : sidewalks) {
        if (sw.contains(p.x, p.y)) {
            s.set(Prop::sw);
            break;
        }
    }
    for (const Lane& lane : lanes) {
        if (lane.polygon.contains(p.x, p.y)) {
            s.set(lane.right ? Prop::rl : Prop::ll);
            if (std::fabs(ang_diff(p.theta, lane.nominal_heading)) < label_params.dir_threshold) {
                s.set(Prop::dir);
            }
            break;  // first containing lane wins
        }
    }
    for (const CenterLine& cl : center_lines) {
        bool near = false;
        for (size_t i = 0; i + 1 < cl.polyline.size() && !near; ++i) {
            near = point_segment_dist(p.x, p.y, cl.polyline[i], cl.polyline[i + 1]) <=
                   label_params.band_width;
        }
        if (near) s.set(cl.solid ? Prop::solid : Prop::dotted);
    }
    return s;
}

bool Scenario::in_obstacle(double x, double y) const {
    for (const Polygon& ob : obstacles) {
        if (ob.contains(x, y)) return true;
    }
    return false;
}

bool Scenario::in_goal(const Pose& p) const {
    if (!goal.polygon.contains(p.x, p.y)) return false;
    if (goal.heading_free) return true;
    for (const Lane& lane : lanes) {
        if (lane.polygon.contains(p.x, p.y)) {
            return std::fabs(ang_diff(p.theta, lane.nominal_heading)) <
                   label_params.dir_threshold;
        }
    }
    return true;  // not in a lane: no heading constraint to apply
}

bool collides(const Scenario& sc, const DubinsPath& path, double ds) {
    for (const Pose& p : dubins_sample(path, ds)) {
        if (!sc.bounds.contains(p.x, p.y)) return true;
        if (sc.in_obstacle(p.x, p.y)) return true;
    }
    return false;
}

LabeledPath label_path(const Scenario& sc, const DubinsPath& path, double ds) {
    if (!(ds > 0)) throw std::invalid_argument("label_path: ds must be positive");
    const double total = path.length();
    const double T = total / sc.speed;

    LabeledPath out;
    out.change_count = 0;
    std::vector<double> starts;  // block start times

    auto visit = [&](double s) {
        LabelSet l = sc.label(dubins_at(path, s));
        if (out.word.empty() || out.word.back().labels != l) {
            if (!out.word.empty()) ++out.change_count;
            out.word.push_back({l, 0.0});
            starts.push_back(s / sc.speed);
        }
    };

    int n = int(std::floor(total / ds));
    for (int i = 0; i <= n; ++i) visit(i * ds);
    if (total - n * ds > 1e-12) visit(total);

    for (size_t j = 0; j + 1 < out.word.size(); ++j) {
        out.word[j].duration = starts[j + 1] - starts[j];
    }
    out.word.back().duration = T - starts.back();
    return out;
}

// --- Loading -----------------------------------------------------------------

namespace {

Vec2 parse_point(const Json& j, const char* ctx) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::runtime_error(std::string(ctx) + ": expected [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Polygon parse_polygon(const Json& j, const char* ctx) {
    if (!j.is_array() || j.size() < 3) {
        throw std::runtime_error(std::string(ctx) + ": expected an array of at least 3 points");
    }
    std::vector<Vec2> pts;
    pts.reserve(j.size());
    for (const Json& p : j) pts.push_back(parse_point(p, ctx));
    Polygon poly(std::move(pts));
    if (poly.signed_area() <= 0) {
        throw std::runtime_error(std::string(ctx) +
                                 ": vertices must wind counter-clockwise");
    }
    return poly;
}

std::vector<Vec2> parse_polyline(const Json& j, const char* ctx) {
    if (!j.is_array() || j.size() < 2) {
        throw std::runtime_error(std::string(ctx) + ": expected an array of at least 2 points");
    }
    std::vector<Vec2> pts;
    pts.reserve(j.size());
    for (const Json& p : j) pts.push_back(parse_point(p, ctx));
    return pts;
}

}  // namespace

Scenario load_scenario_text(const std::string& json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(std::string("scenario: invalid JSON: ") + e.what());
    }
    check_keys(j,
               {"bounds", "obstacles", "sidewalks", "lanes", "center_lines", "init", "goal",
                "speed", "rho", "label_params"},
               "scenario");

    Scenario sc;

    const Json& bounds = require_key(j, "bounds", "scenario");
    check_keys(bounds, {"min", "max"}, "scenario.bounds");
    sc.bounds.min = parse_point(require_key(bounds, "min", "scenario.bounds"), "scenario.bounds.min");
    sc.bounds.max = parse_point(require_key(bounds, "max", "scenario.bounds"), "scenario.bounds.max");
    if (!(sc.bounds.min.x < sc.bounds.max.x && sc.bounds.min.y < sc.bounds.max.y)) {
        throw std::runtime_error("scenario.bounds: min must be strictly below max");
    }

    if (j.contains("obstacles")) {
        for (size_t i = 0; i < j["obstacles"].size(); ++i) {
            sc.obstacles.push_back(parse_polygon(
                j["obstacles"][i], ("scenario.obstacles[" + std::to_string(i) + "]").c_str()));
        }
    }
    if (j.contains("sidewalks")) {
        for (size_t i = 0; i < j["sidewalks"].size(); ++i) {
            sc.sidewalks.push_back(parse_polygon(
                j["sidewalks"][i], ("scenario.sidewalks[" + std::to_string(i) + "]").c_str()));
        }
    }
    if (j.contains("lanes")) {
        for (size_t i = 0; i < j["lanes"].size(); ++i) {
            const Json& lj = j["lanes"][i];
            std::string ctx = "scenario.lanes[" + std::to_string(i) + "]";
            check_keys(lj, {"polygon", "nominal_heading", "side"}, ctx.c_str());
            Lane lane;
            lane.polygon = parse_polygon(require_key(lj, "polygon", ctx.c_str()),
                                         (ctx + ".polygon").c_str());
            lane.nominal_heading = mod2pi(get_double_in(lj, "nominal_heading", ctx.c_str()));
            std::string side = get_string_in(lj, "side", ctx.c_str());
            if (side == "rl") {
                lane.right = true;
            } else if (side == "ll") {
                lane.right = false;
            } else {
                throw std::runtime_error(ctx + ".side: expected \"rl\" or \"ll\"");
            }
            sc.lanes.push_back(std::move(lane));
        }
    }
    if (j.contains("center_lines")) {
        for (size_t i = 0; i < j["center_lines"].size(); ++i) {
            const Json& cj = j["center_lines"][i];
            std::string ctx = "scenario.center_lines[" + std::to_string(i) + "]";
            check_keys(cj, {"polyline", "style"}, ctx.c_str());
            CenterLine cl;
            cl.polyline = parse_polyline(require_key(cj, "polyline", ctx.c_str()),
                                         (ctx + ".polyline").c_str());
            std::string style = get_string_in(cj, "style", ctx.c_str());
            if (style == "solid") {
                cl.solid = true;
            } else if (style == "dotted") {
                cl.solid = false;
            } else {
                throw std::runtime_error(ctx + ".style: expected \"dotted\" or \"solid\"");
            }
            sc.center_lines.push_back(std::move(cl));
        }
    }

    const Json& init = require_key(j, "init", "scenario");
    check_keys(init, {"x", "y", "theta"}, "scenario.init");
    sc.init.x = get_double_in(init, "x", "scenario.init");
    sc.init.y = get_double_in(init, "y", "scenario.init");
    sc.init.theta = mod2pi(get_double_in(init, "theta", "scenario.init"));

    const Json& goal = require_key(j, "goal", "scenario");
    check_keys(goal, {"polygon", "heading_free"}, "scenario.goal");
    sc.goal.polygon = parse_polygon(require_key(goal, "polygon", "scenario.goal"),
                                    "scenario.goal.polygon");
    if (goal.contains("heading_free")) {
        if (!goal["heading_free"].is_boolean()) {
            throw std::runtime_error("scenario.goal.heading_free: expected a boolean");
        }
        sc.goal.heading_free = goal["heading_free"].get<bool>();
    }

    sc.speed = get_double_in(j, "speed", "scenario");
    sc.rho = get_double_in(j, "rho", "scenario");
    if (!(sc.speed > 0)) throw std::runtime_error("scenario.speed: must be positive");
    if (!(sc.rho > 0)) throw std::runtime_error("scenario.rho: must be positive");

    if (j.contains("label_params")) {
        const Json& lp = j["label_params"];
        check_keys(lp, {"band_width", "dir_threshold"}, "scenario.label_params");
        if (lp.contains("band_width")) {
            sc.label_params.band_width = get_double_in(lp, "band_width", "scenario.label_params");
            if (!(sc.label_params.band_width > 0)) {
                throw std::runtime_error("scenario.label_params.band_width: must be positive");
            }
        }
        if (lp.contains("dir_threshold")) {
            sc.label_params.dir_threshold =
                get_double_in(lp, "dir_threshold", "scenario.label_params");
            if (!(sc.label_params.dir_threshold > 0)) {
                throw std::runtime_error("scenario.label_params.dir_threshold: must be positive");
            }
        }
    }

    // The initial pose must be usable.
    if (!sc.bounds.contains(sc.init.x, sc.init.y)) {
        throw std::runtime_error("scenario.init: outside the bounds");
    }
    if (sc.in_obstacle(sc.init.x, sc.init.y)) {
        throw std::runtime_error("scenario.init: inside an obstacle");
    }
    const BBox& gb = sc.goal.polygon.bbox();
    if (gb.max.x < sc.bounds.min.x || gb.min.x > sc.bounds.max.x ||
        gb.max.y < sc.bounds.min.y || gb.min.y > sc.bounds.max.y) {
        throw std::runtime_error("scenario.goal: polygon does not intersect the bounds");
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario_text(ss.str());
}

}  // namespace mvp
