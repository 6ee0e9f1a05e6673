// Dubins shortest paths between planar poses, all six word types in closed
// form. Computations run in the normalized frame (unit turning radius, start
// at the origin) and are scaled back by rho at the end.

#include "mvplan/geometry.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace mvp {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
// Arc parameters within this of 0 or 2*pi collapse to 0; keeps near-aligned
// queries from producing spurious full circles.
constexpr double kAngleSnap = 1e-12;

struct Params {
    double t, p, q;  // normalized segment lengths
    double total() const { return t + p + q; }
};

double snap(double v) {
    if (v <= kAngleSnap || v >= kTwoPi - kAngleSnap) return 0.0;
    return v;
}

}  // namespace

double mod2pi(double a) {
    double m = std::fmod(a, kTwoPi);
    if (m < 0) m += kTwoPi;
    if (m >= kTwoPi - kAngleSnap) m = 0.0;
    return m;
}

double ang_diff(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d <= -M_PI) d += kTwoPi;
    if (d > M_PI) d -= kTwoPi;
    return d;
}

std::string_view dubins_word_name(DubinsWord w) {
    switch (w) {
        case DubinsWord::LSL: return "LSL";
        case DubinsWord::RSR: return "RSR";
        case DubinsWord::LSR: return "LSR";
        case DubinsWord::RSL: return "RSL";
        case DubinsWord::RLR: return "RLR";
        case DubinsWord::LRL: return "LRL";
    }
    return "?";
}

std::array<DubinsSeg, 3> dubins_segments(DubinsWord w) {
    using S = DubinsSeg;
    switch (w) {
        case DubinsWord::LSL: return {S::L, S::S, S::L};
        case DubinsWord::RSR: return {S::R, S::S, S::R};
        case DubinsWord::LSR: return {S::L, S::S, S::R};
        case DubinsWord::RSL: return {S::R, S::S, S::L};
        case DubinsWord::RLR: return {S::R, S::L, S::R};
        case DubinsWord::LRL: return {S::L, S::R, S::L};
    }
    return {S::L, S::S, S::L};
}

namespace {

// Each solver takes the normalized problem (alpha, beta, d) and returns the
// segment parameters, or nothing if that word type cannot reach the target.

std::optional<Params> word_lsl(double al, double be, double d) {
    double tmp0 = d + std::sin(al) - std::sin(be);
    double psq = 2 + d * d - 2 * std::cos(al - be) + 2 * d * (std::sin(al) - std::sin(be));
    if (psq < 0) return std::nullopt;
    double tmp1 = std::atan2(std::cos(be) - std::cos(al), tmp0);
    return Params{mod2pi(-al + tmp1), std::sqrt(psq), mod2pi(be - tmp1)};
}

std::optional<Params> word_rsr(double al, double be, double d) {
    double tmp0 = d - std::sin(al) + std::sin(be);
    double psq = 2 + d * d - 2 * std::cos(al - be) + 2 * d * (std::sin(be) - std::sin(al));
    if (psq < 0) return std::nullopt;
    double tmp1 = std::atan2(std::cos(al) - std::cos(be), tmp0);
    return Params{mod2pi(al - tmp1), std::sqrt(psq), mod2pi(-be + tmp1)};
}

std::optional<Params> word_lsr(double al, double be, double d) {
    double psq = -2 + d * d + 2 * std::cos(al - be) + 2 * d * (std::sin(al) + std::sin(be));
    if (psq < 0) return std::nullopt;
    double p = std::sqrt(psq);
    double tmp = std::atan2(-std::cos(al) - std::cos(be), d + std::sin(al) + std::sin(be)) -
                 std::atan2(-2.0, p);
    return Params{mod2pi(-al + tmp), p, mod2pi(-mod2pi(be) + tmp)};
}

std::optional<Params> word_rsl(double al, double be, double d) {
    double psq = d * d - 2 + 2 * std::cos(al - be) - 2 * d * (std::sin(al) + std::sin(be));
    if (psq < 0) return std::nullopt;
    double p = std::sqrt(psq);
    double tmp = std::atan2(std::cos(al) + std::cos(be), d - std::sin(al) - std::sin(be)) -
                 std::atan2(2.0, p);
    return Params{mod2pi(al - tmp), p, mod2pi(be - tmp)};
}

std::optional<Params> word_rlr(double al, double be, double d) {
    double tmp = (6.0 - d * d + 2 * std::cos(al - be) + 2 * d * (std::sin(al) - std::sin(be))) / 8.0;
    if (std::fabs(tmp) > 1) return std::nullopt;
    double p = mod2pi(kTwoPi - std::acos(tmp));
    double t = mod2pi(al - std::atan2(std::cos(al) - std::cos(be), d - std::sin(al) + std::sin(be)) +
                      mod2pi(p / 2.0));
    return Params{t, p, mod2pi(al - be - t + mod2pi(p))};
}

std::optional<Params> word_lrl(double al, double be, double d) {
    double tmp = (6.0 - d * d + 2 * std::cos(al - be) + 2 * d * (std::sin(be) - std::sin(al))) / 8.0;
    if (std::fabs(tmp) > 1) return std::nullopt;
    double p = mod2pi(kTwoPi - std::acos(tmp));
    double t = mod2pi(-al - std::atan2(std::cos(al) - std::cos(be), d + std::sin(al) - std::sin(be)) +
                      p / 2.0);
    return Params{t, p, mod2pi(mod2pi(be) - al - t + mod2pi(p))};
}

std::optional<Params> solve_word(double al, double be, double d, DubinsWord w) {
    std::optional<Params> r;
    switch (w) {
        case DubinsWord::LSL: r = word_lsl(al, be, d); break;
        case DubinsWord::RSR: r = word_rsr(al, be, d); break;
        case DubinsWord::LSR: r = word_lsr(al, be, d); break;
        case DubinsWord::RSL: r = word_rsl(al, be, d); break;
        case DubinsWord::RLR: r = word_rlr(al, be, d); break;
        case DubinsWord::LRL: r = word_lrl(al, be, d); break;
    }
    if (r) {
        r->t = snap(r->t);
        r->p = (r->p <= kAngleSnap) ? 0.0 : r->p;
        r->q = snap(r->q);
    }
    return r;
}

struct Normalized {
    double alpha, beta, d;
};

Normalized normalize(const Pose& a, const Pose& b, double rho) {
    if (!(rho > 0)) throw std::invalid_argument("dubins: rho must be positive");
    double dx = b.x - a.x;
    double dy = b.y - a.y;
    double dist = std::hypot(dx, dy);
    double theta = (dist > 0) ? std::atan2(dy, dx) : 0.0;
    return {mod2pi(a.theta - theta), mod2pi(b.theta - theta), dist / rho};
}

}  // namespace

double dubins_word_length(const Pose& a, const Pose& b, double rho, DubinsWord w) {
    Normalized n = normalize(a, b, rho);
    auto r = solve_word(n.alpha, n.beta, n.d, w);
    if (!r) return std::numeric_limits<double>::infinity();
    return r->total() * rho;
}

DubinsPath dubins_shortest(const Pose& a, const Pose& b, double rho) {
    Normalized n = normalize(a, b, rho);
    DubinsPath best;
    best.start = a;
    best.rho = rho;
    double best_len = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int i = 0; i < 6; ++i) {
        auto w = static_cast<DubinsWord>(i);
        auto r = solve_word(n.alpha, n.beta, n.d, w);
        if (!r) continue;
        double len = r->total() * rho;
        if (len < best_len) {  // strict: ties keep the earlier word
            best_len = len;
            best.word = w;
            best.seg_lengths = {r->t * rho, r->p * rho, r->q * rho};
            found = true;
        }
    }
    if (!found) throw std::runtime_error("dubins: no path found (degenerate query)");
    return best;
}

namespace {

// Advance a normalized pose along one segment by parameter t.
void apply_segment(double q[3], double t, DubinsSeg type) {
    double th = q[2];
    switch (type) {
        case DubinsSeg::L:
            q[0] += std::sin(th + t) - std::sin(th);
            q[1] -= std::cos(th + t) - std::cos(th);
            q[2] = th + t;
            break;
        case DubinsSeg::R:
            q[0] -= std::sin(th - t) - std::sin(th);
            q[1] += std::cos(th - t) - std::cos(th);
            q[2] = th - t;
            break;
        case DubinsSeg::S:
            q[0] += std::cos(th) * t;
            q[1] += std::sin(th) * t;
            break;
    }
}

}  // namespace

Pose dubins_at(const DubinsPath& path, double s) {
    double total = path.length();
    if (s < 0) s = 0;
    if (s > total) s = total;
    double remaining = s / path.rho;  // normalized arc length
    auto segs = dubins_segments(path.word);
    double q[3] = {0.0, 0.0, path.start.theta};
    for (int i = 0; i < 3; ++i) {
        double param = path.seg_lengths[i] / path.rho;
        double step = std::min(param, remaining);
        apply_segment(q, step, segs[i]);
        remaining -= step;
        if (remaining <= 0) break;
    }
    return {path.start.x + q[0] * path.rho, path.start.y + q[1] * path.rho, mod2pi(q[2])};
}

Pose dubins_endpoint(const DubinsPath& path) { return dubins_at(path, path.length()); }

std::vector<Pose> dubins_sample(const DubinsPath& path, double ds) {
    if (!(ds > 0)) throw std::invalid_argument("dubins_sample: ds must be positive");
    std::vector<Pose> out;
    double total = path.length();
    int n = static_cast<int>(std::floor(total / ds));
    out.reserve(static_cast<size_t>(n) + 2);
    for (int i = 0; i <= n; ++i) out.push_back(dubins_at(path, i * ds));
    // Endpoint, unless the last regular sample already landed on it.
    if (total - n * ds > 1e-12 || out.empty()) out.push_back(dubins_at(path, total));
    return out;
}

}  // namespace mvp
