#include "mvplan/svg.hpp"

#include <cstdio>

#include "mvplan/geometry.hpp"

namespace mvp {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s(buf);
    // trim trailing zeros but keep at least one digit after the point
    size_t dot = s.find('.');
    if (dot != std::string::npos) {
        size_t last = s.find_last_not_of('0');
        if (last == dot) last = dot + 1;
        s.erase(last + 1);
    }
    if (s == "-0.0") s = "0.0";
    return s;
}

void polygon_tag(std::string& out, const Polygon& poly, const std::string& attrs) {
    out += "  <polygon points=\"";
    bool first = true;
    for (const Vec2& p : poly.points()) {
        if (!first) out += " ";
        first = false;
        out += num(p.x) + "," + num(p.y);
    }
    out += "\" " + attrs + "/>\n";
}

void polyline_tag(std::string& out, const std::vector<Vec2>& pts, const std::string& attrs) {
    out += "  <polyline points=\"";
    bool first = true;
    for (const Vec2& p : pts) {
        if (!first) out += " ";
        first = false;
        out += num(p.x) + "," + num(p.y);
    }
    out += "\" fill=\"none\" " + attrs + "/>\n";
}

std::vector<Vec2> path_points(const Scenario& sc, const Pose& from, const Pose& to, double ds) {
    std::vector<Vec2> pts;
    try {
        DubinsPath path = dubins_shortest(from, to, sc.rho);
        for (const Pose& p : dubins_sample(path, ds)) pts.push_back({p.x, p.y});
    } catch (const std::runtime_error&) {
        pts.push_back({from.x, from.y});
        pts.push_back({to.x, to.y});
    }
    return pts;
}

}  // namespace

std::string render_svg(const Scenario& sc, const KripkeStructure& k,
                       const std::optional<Solution>& sol) {
    const double x0 = sc.bounds.min.x, y0 = sc.bounds.min.y;
    const double x1 = sc.bounds.max.x, y1 = sc.bounds.max.y;
    const double w = x1 - x0, h = y1 - y0;
    const double ds = sc.rho / 8.0;  // coarse: for display only

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(x0) + " " + num(y0) +
           " " + num(w) + " " + num(h) + "\" width=\"" + num(w * 24.0) + "\" height=\"" +
           num(h * 24.0) + "\">\n";
    // svg y grows downward; flip so the world is drawn y-up
    out += "<g transform=\"translate(0, " + num(y0 + y1) + ") scale(1, -1)\">\n";
    out += "  <rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(w) +
           "\" height=\"" + num(h) + "\" fill=\"#f4f4f2\"/>\n";

    for (const Polygon& p : sc.sidewalks) polygon_tag(out, p, "fill=\"#b9b9b3\"");
    for (const Lane& l : sc.lanes) polygon_tag(out, l.polygon, "fill=\"#d8d8d4\"");
    for (const CenterLine& c : sc.center_lines) {
        std::string attrs = "stroke=\"#d9b84a\" stroke-width=\"0.15\"";
        if (!c.solid) attrs += " stroke-dasharray=\"0.8 0.6\"";
        polyline_tag(out, c.polyline, attrs);
    }
    for (const Polygon& p : sc.obstacles) polygon_tag(out, p, "fill=\"#a63d40\"");
    polygon_tag(out, sc.goal.polygon, "fill=\"#3f8f4f\" fill-opacity=\"0.35\"");

    out += "  <g stroke=\"#ffffff\" stroke-width=\"0.05\" stroke-opacity=\"0.55\" "
           "fill=\"none\">\n";
    for (int s = 0; s < k.n_states(); ++s) {
        for (const auto& [to, dur] : k.out_edges(s)) {
            (void)dur;
            std::string pts;
            bool first = true;
            for (const Vec2& p : path_points(sc, k.pose(s), k.pose(to), ds)) {
                if (!first) pts += " ";
                first = false;
                pts += num(p.x) + "," + num(p.y);
            }
            out += "    <polyline points=\"" + pts + "\"/>\n";
        }
    }
    out += "  </g>\n";

    if (sol && sol->trajectory.size() > 1) {
        std::vector<Vec2> pts;
        pts.reserve(sol->trajectory.size());
        for (const Pose& p : sol->trajectory) pts.push_back({p.x, p.y});
        polyline_tag(out, pts, "stroke=\"#c22d2d\" stroke-width=\"0.25\"");
    }

    out += "  <circle cx=\"" + num(sc.init.x) + "\" cy=\"" + num(sc.init.y) +
           "\" r=\"0.35\" fill=\"#1f4e9c\"/>\n";
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace mvp
