#include "mvplan/planner.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mvp {

namespace {

double gamma_bound_for(const BBox& bounds, double heading_w) {
    double area = (bounds.max.x - bounds.min.x) * (bounds.max.y - bounds.min.y);
    double mu = area * 2.0 * M_PI * heading_w;  // volume under the weighted metric
    double zeta3 = 4.0 * M_PI / 3.0;            // unit-ball volume, d = 3
    return 2.0 * std::cbrt(2.0 + 1.0 / 3.0) * std::cbrt(mu / zeta3);
}

}  // namespace

double gamma_lower_bound(const Scenario& sc, int d) {
    if (d != 3) {
        throw std::invalid_argument("gamma_lower_bound: only the 3-dimensional pose space is supported");
    }
    return gamma_bound_for(sc.bounds, sc.rho);
}

std::optional<SteerResult> steer(const Scenario& sc, const Pose& from, const Pose& to,
                                 double ds) {
    DubinsPath path = dubins_shortest(from, to, sc.rho);
    const double total = path.length();
    if (!(total > 0)) return std::nullopt;

    // Equivalent to collides() followed by label_path() over the same sample
    // points (i * ds plus the endpoint), but in one sweep that bails out at
    // the first collision or the second label change.
    LabeledPath labeled;
    labeled.change_count = 0;
    std::vector<double> starts;  // block start times
    auto visit = [&](double s) -> bool {
        Pose p = dubins_at(path, s);
        if (!sc.bounds.contains(p.x, p.y)) return false;
        if (sc.in_obstacle(p.x, p.y)) return false;
        LabelSet l = sc.label(p);
        if (labeled.word.empty() || labeled.word.back().labels != l) {
            if (!labeled.word.empty() && ++labeled.change_count > 1) return false;
            labeled.word.push_back({l, 0.0});
            starts.push_back(s / sc.speed);
        }
        return true;
    };
    int n = int(std::floor(total / ds));
    for (int i = 0; i <= n; ++i) {
        if (!visit(i * ds)) return std::nullopt;
    }
    if (total - n * ds > 1e-12 && !visit(total)) return std::nullopt;

    const double T = total / sc.speed;
    for (size_t j = 0; j + 1 < labeled.word.size(); ++j) {
        labeled.word[j].duration = starts[j + 1] - starts[j];
    }
    labeled.word.back().duration = T - starts.back();
    return SteerResult{path, T, std::move(labeled)};
}

// --- grid index ---------------------------------------------------------------

void Planner::GridIndex::init(const BBox& bounds, double w, double cell_size) {
    cell = std::max(cell_size, 1e-6);
    x0 = bounds.min.x;
    y0 = bounds.min.y;
    nx = std::max(1, int(std::ceil((bounds.max.x - bounds.min.x) / cell)));
    ny = std::max(1, int(std::ceil((bounds.max.y - bounds.min.y) / cell)));
    theta_span = 2.0 * M_PI * w;
    nt = std::max(1, int(std::ceil(theta_span / cell)));
    cells.assign(size_t(nx) * size_t(ny) * size_t(nt), {});
}

int Planner::GridIndex::cell_of(double x, double y, double tw) const {
    int ix = std::clamp(int((x - x0) / cell), 0, nx - 1);
    int iy = std::clamp(int((y - y0) / cell), 0, ny - 1);
    int it = std::clamp(int(tw / cell), 0, nt - 1);
    return (ix * ny + iy) * nt + it;
}

void Planner::GridIndex::insert(int id, const Pose& p, double w) {
    cells[size_t(cell_of(p.x, p.y, w * p.theta))].push_back(id);
}

// --- construction ---------------------------------------------------------------

Planner::Planner(Scenario sc, Rulebook rb, PlannerConfig cfg)
    : scenario_(std::move(sc)), rb_(std::move(rb)), cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.iterations < 0) throw std::invalid_argument("planner: iterations must be >= 0");
    if (!(cfg_.goal_bias >= 0 && cfg_.goal_bias < 1)) {
        throw std::invalid_argument("planner: goal_bias must be in [0, 1)");
    }
    heading_w_ = cfg_.heading_weight > 0 ? cfg_.heading_weight : scenario_.rho;
    ds_ = cfg_.ds > 0 ? cfg_.ds : scenario_.default_ds();
    double lb = gamma_bound_for(scenario_.bounds, heading_w_);
    if (cfg_.gamma == 0.0) {
        gamma_ = 1.1 * lb;
    } else if (cfg_.gamma < lb) {
        throw std::invalid_argument(
            "planner: gamma is below the admissible lower bound for this scenario");
    } else {
        gamma_ = cfg_.gamma;
    }
    grid_.init(scenario_.bounds, heading_w_, scenario_.rho);

    LabelSet l0 = scenario_.label(scenario_.init);
    int s0 = add_state(scenario_.init, l0, scenario_.in_goal(scenario_.init));
    CombinedState q0 = initial_combined_state(rb_);
    nodes_.push_back({s0, q0, UnsafetyVector(size_t(rb_.num_classes)), 0.0, -1,
                      UnsafetyVector(size_t(rb_.num_classes)), 0.0, {}});
    nodes_at_[size_t(s0)].emplace(std::move(q0), 0);
    if (is_goal_[size_t(s0)]) consider_best(0);
}

Planner::Planner(Rulebook rb, InjectedGraph graph, PlannerConfig cfg)
    : rb_(std::move(rb)), cfg_(cfg), injected_mode_(true), rng_(cfg.seed) {
    const int n = int(graph.labels.size());
    if (n == 0) throw std::invalid_argument("planner: injected graph has no states");
    if (graph.root < 0 || graph.root >= n) {
        throw std::invalid_argument("planner: injected root out of range");
    }
    for (int i = 0; i < n; ++i) add_state(Pose{}, graph.labels[size_t(i)], false);
    for (int g : graph.goal_states) {
        if (g < 0 || g >= n) throw std::invalid_argument("planner: goal state out of range");
        is_goal_[size_t(g)] = true;
    }
    in_edges_.resize(size_t(n));
    out_edges_.resize(size_t(n));
    for (const auto& [from, to, dur] : graph.edges) {
        if (from < 0 || from >= n || to < 0 || to >= n) {
            throw std::invalid_argument("planner: injected edge endpoint out of range");
        }
        if (from == to) throw std::invalid_argument("planner: injected self-loop");
        if (!(dur > 0)) throw std::invalid_argument("planner: injected duration must be positive");
        out_edges_[size_t(from)][to] = dur;
    }
    for (int from = 0; from < n; ++from) {
        for (const auto& [to, dur] : out_edges_[size_t(from)]) {
            in_edges_[size_t(to)].push_back({from, dur, rational_from_double(dur)});
        }
    }
    for (auto& ins : in_edges_) {
        std::sort(ins.begin(), ins.end(),
                  [](const EdgeIn& a, const EdgeIn& b) { return a.from < b.from; });
    }

    CombinedState q0 = initial_combined_state(rb_);
    nodes_.push_back({graph.root, q0, UnsafetyVector(size_t(rb_.num_classes)), 0.0, -1,
                      UnsafetyVector(size_t(rb_.num_classes)), 0.0, {}});
    nodes_at_[size_t(graph.root)].emplace(std::move(q0), 0);
    if (is_goal_[size_t(graph.root)]) consider_best(0);
}

int Planner::add_state(const Pose& p, LabelSet l, bool goal) {
    int id = int(poses_.size());
    poses_.push_back(p);
    labels_.push_back(l);
    is_goal_.push_back(goal);
    alive_.push_back(true);
    nodes_at_.emplace_back();
    if (!injected_mode_) grid_.insert(id, p, heading_w_);
    return id;
}

// --- metric and neighbor queries -------------------------------------------------

double Planner::metric2(const Pose& a, const Pose& b) const {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    double dt = heading_w_ * ang_diff(a.theta, b.theta);
    return dx * dx + dy * dy + dt * dt;
}

double Planner::radius(int n) const {
    if (n <= 1) return 0.0;
    return gamma_ * std::cbrt(std::log(double(n)) / double(n));
}

std::vector<int> Planner::near_states(const Pose& x) const {
    const double r = radius(n_states());
    std::vector<int> out;
    if (r <= 0) return out;
    const double r2 = r * r;
    if (injected_mode_) {
        for (int i = 0; i < n_states(); ++i) {
            if (alive_[size_t(i)] && metric2(x, poses_[size_t(i)]) <= r2) out.push_back(i);
        }
        return out;
    }
    const GridIndex& g = grid_;
    int ix0 = std::clamp(int((x.x - r - g.x0) / g.cell), 0, g.nx - 1);
    int ix1 = std::clamp(int((x.x + r - g.x0) / g.cell), 0, g.nx - 1);
    int iy0 = std::clamp(int((x.y - r - g.y0) / g.cell), 0, g.ny - 1);
    int iy1 = std::clamp(int((x.y + r - g.y0) / g.cell), 0, g.ny - 1);
    double tw = heading_w_ * mod2pi(x.theta);
    std::vector<char> tseen(size_t(g.nt), 0);
    std::vector<int> tcells;
    if (2 * r >= g.theta_span) {
        for (int t = 0; t < g.nt; ++t) tcells.push_back(t);
    } else {
        int lo = int(std::floor((tw - r) / g.cell));
        int hi = int(std::floor((tw + r) / g.cell));
        for (int j = lo; j <= hi; ++j) {
            int t = ((j % g.nt) + g.nt) % g.nt;
            if (!tseen[size_t(t)]) {
                tseen[size_t(t)] = 1;
                tcells.push_back(t);
            }
        }
    }
    for (int ix = ix0; ix <= ix1; ++ix) {
        for (int iy = iy0; iy <= iy1; ++iy) {
            for (int it : tcells) {
                for (int id : g.cells[size_t((ix * g.ny + iy) * g.nt + it)]) {
                    if (alive_[size_t(id)] && metric2(x, poses_[size_t(id)]) <= r2) {
                        out.push_back(id);
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int Planner::nearest_state(const Pose& x) const {
    int best = -1;
    double bestd = 0;
    for (int i = 0; i < n_states(); ++i) {
        if (!alive_[size_t(i)]) continue;
        double d = metric2(x, poses_[size_t(i)]);
        if (best < 0 || d < bestd) {
            best = i;
            bestd = d;
        }
    }
    return best;
}

Pose Planner::sample_pose() {
    Pose p;
    double coin = rng_.uniform01();
    if (!injected_mode_ && coin < cfg_.goal_bias) {
        const BBox& gb = scenario_.goal.polygon.bbox();
        double lox = std::max(gb.min.x, scenario_.bounds.min.x);
        double hix = std::min(gb.max.x, scenario_.bounds.max.x);
        double loy = std::max(gb.min.y, scenario_.bounds.min.y);
        double hiy = std::min(gb.max.y, scenario_.bounds.max.y);
        for (int k = 0; k < 1000; ++k) {
            p.x = rng_.uniform(lox, hix);
            p.y = rng_.uniform(loy, hiy);
            if (scenario_.goal.polygon.contains(p.x, p.y)) break;
        }
    } else {
        p.x = rng_.uniform(scenario_.bounds.min.x, scenario_.bounds.max.x);
        p.y = rng_.uniform(scenario_.bounds.min.y, scenario_.bounds.max.y);
    }
    p.theta = mod2pi(rng_.uniform(0.0, 2.0 * M_PI));
    return p;
}

// --- product tree maintenance ------------------------------------------------------

const std::vector<ProductSucc>& Planner::stepped(const CombinedState& cs, LabelSet sigma,
                                                 LabelSet sigma_next) {
    step_probe_.q = cs;  // assignment reuses the probe's buffer
    step_probe_.sigma = sigma.raw();
    step_probe_.closing = sigma_next != sigma;
    auto it = step_cache_.find(step_probe_);
    if (it == step_cache_.end()) {
        auto succs = product_step(rb_, cs, sigma, sigma_next);
        it = step_cache_.emplace(std::move(step_probe_), std::move(succs)).first;
    }
    return it->second;
}

bool Planner::offer(int s, const CombinedState& q, const UnsafetyVector& ja, double jt,
                    int parent, const UnsafetyVector& edge_cost, double edge_dur) {
    auto& at = nodes_at_[size_t(s)];
    auto it = at.find(q);
    if (it == at.end()) {
        int id = int(nodes_.size());
        nodes_.push_back({s, q, ja, jt, parent, edge_cost, edge_dur, {}});
        nodes_[size_t(parent)].children.push_back(id);
        at.emplace(q, id);
        if (is_goal_[size_t(s)]) consider_best(id);
        return true;
    }
    const int id = it->second;
    PNode& n = nodes_[size_t(id)];
    int cmp = UnsafetyVector::compare(ja, n.ja);
    if (cmp > 0 || (cmp == 0 && jt >= n.jt)) return false;
    // Strict improvement: reparent and push the gain down the subtree.
    auto& sibs = nodes_[size_t(n.parent)].children;
    sibs.erase(std::find(sibs.begin(), sibs.end(), id));
    n.parent = parent;
    nodes_[size_t(parent)].children.push_back(id);
    n.ja = ja;
    n.jt = jt;
    n.edge_cost = edge_cost;
    n.edge_dur = edge_dur;
    if (is_goal_[size_t(s)]) consider_best(id);
    propagate(id);
    return true;
}

void Planner::propagate(int id) {
    std::vector<int> stack(nodes_[size_t(id)].children);
    while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        PNode& n = nodes_[size_t(c)];
        const PNode& p = nodes_[size_t(n.parent)];
        n.ja.assign_sum(p.ja, n.edge_cost);
        n.jt = p.jt + n.edge_dur;
        if (is_goal_[size_t(n.kripke)]) consider_best(c);
        stack.insert(stack.end(), n.children.begin(), n.children.end());
    }
}

void Planner::consider_best(int id) {
    const PNode& n = nodes_[size_t(id)];
    step_probe_.q = n.q;
    step_probe_.sigma = labels_[size_t(n.kripke)].raw();
    step_probe_.closing = false;
    auto it = finish_cache_.find(step_probe_);
    if (it == finish_cache_.end()) {
        auto fin = product_finish(rb_, n.q, labels_[size_t(n.kripke)]);
        it = finish_cache_.emplace(step_probe_, std::move(fin)).first;
    }
    if (!it->second) return;
    scratch_total_.assign_sum(n.ja, *it->second);
    if (best_node_ == id) {
        if (scratch_total_ != best_total_ || n.jt != best_jt_) {
            best_total_ = scratch_total_;
            best_jt_ = n.jt;
            best_iteration_ = current_iteration_;
        }
        return;
    }
    int cmp = best_node_ < 0 ? -1 : UnsafetyVector::compare(scratch_total_, best_total_);
    if (cmp < 0 || (cmp == 0 && n.jt < best_jt_)) {
        best_node_ = id;
        best_total_ = scratch_total_;
        best_jt_ = n.jt;
        best_iteration_ = current_iteration_;
    }
}

bool Planner::relax_from_edges(int s, const std::vector<EdgeIn>& ins) {
    bool changed = false;
    const LabelSet ls = labels_[size_t(s)];
    for (const EdgeIn& e : ins) {
        const LabelSet lf = labels_[size_t(e.from)];
        // Offers only touch nodes at s (never at e.from), so iterating this
        // map while inserting elsewhere is safe.
        for (const auto& [q, nid] : nodes_at_[size_t(e.from)]) {
            scratch_base_ = nodes_[size_t(nid)].ja;  // copy: offers may grow nodes_
            const double base_jt = nodes_[size_t(nid)].jt;
            for (const ProductSucc& ps : stepped(q, lf, ls)) {
                scratch_cost_ = ps.evt_weight;
                for (size_t c = 0; c < scratch_cost_.size(); ++c) {
                    if (ps.dur_weight[c] != 0)
                        rational_addmul(scratch_cost_[c], ps.dur_weight[c], e.rdur);
                }
                scratch_ja_.assign_sum(scratch_base_, scratch_cost_);
                if (offer(s, ps.next, scratch_ja_, base_jt + e.dur, nid, scratch_cost_, e.dur)) {
                    changed = true;
                }
            }
        }
    }
    return changed;
}

bool Planner::relax_state(int s) { return relax_from_edges(s, in_edges_[size_t(s)]); }

// --- run loops -------------------------------------------------------------------

void Planner::run() {
    if (ran_) throw std::logic_error("planner: run() called twice");
    ran_ = true;
    run_start_ = std::chrono::steady_clock::now();
    if (injected_mode_) {
        run_injected();
    } else {
        run_sampling();
    }
}

void Planner::record_checkpoint(int iteration) {
    Checkpoint c;
    c.iteration = iteration;
    c.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start_).count();
    if (best_node_ >= 0) {
        c.best_unsafety = best_total_;
        c.best_duration = best_jt_;
    }
    checkpoints_.push_back(std::move(c));
}

void Planner::run_sampling() {
    for (current_iteration_ = 1; current_iteration_ <= cfg_.iterations; ++current_iteration_) {
        Pose x = sample_pose();
        std::vector<int> near = near_states(x);
        if (near.empty()) near.push_back(nearest_state(x));

        // Connect: steer from each candidate neighbor into the sample.
        std::vector<EdgeIn> ins;
        for (int sp : near) {
            auto st = steer(scenario_, poses_[size_t(sp)], x, ds_);
            if (st) ins.push_back({sp, st->duration, rational_from_double(st->duration)});
        }
        if (!ins.empty()) {
            int s = add_state(x, scenario_.label(x), scenario_.in_goal(x));
            relax_from_edges(s, ins);

            // Rewire: try the new state as a parent for its neighbors.
            for (int sp : near) {
                auto st = steer(scenario_, x, poses_[size_t(sp)], ds_);
                if (!st) continue;
                std::vector<EdgeIn> one{{s, st->duration, rational_from_double(st->duration)}};
                relax_from_edges(sp, one);
            }
        }

        if (cfg_.checkpoint_every > 0 && current_iteration_ % cfg_.checkpoint_every == 0) {
            record_checkpoint(current_iteration_);
        }
    }
    iterations_run_ = cfg_.iterations;
    if (checkpoints_.empty() || checkpoints_.back().iteration != cfg_.iterations) {
        record_checkpoint(cfg_.iterations);
    }
}

void Planner::run_injected() {
    // Sweep relaxation to a fixed point: costs are exact and only ever
    // decrease, and every accepted value is realized by a tree path, so the
    // set of attainable values is finite and this terminates.
    int pass = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        current_iteration_ = ++pass;
        for (int s = 0; s < n_states(); ++s) {
            if (relax_state(s)) changed = true;
        }
    }
    iterations_run_ = pass;
    record_checkpoint(pass);
}

// --- results ------------------------------------------------------------------------

std::optional<Solution> Planner::solution() const {
    if (best_node_ < 0) return std::nullopt;
    Solution sol;
    std::vector<int> chain;
    for (int id = best_node_; id >= 0; id = nodes_[size_t(id)].parent) chain.push_back(id);
    std::reverse(chain.begin(), chain.end());
    for (int id : chain) {
        sol.trace.push_back(nodes_[size_t(id)].kripke);
        sol.poses.push_back(poses_[size_t(nodes_[size_t(id)].kripke)]);
    }
    sol.unsafety = best_total_;
    sol.duration = best_jt_;
    sol.iteration_found = best_iteration_;
    if (!injected_mode_) {
        for (size_t i = 0; i + 1 < sol.poses.size(); ++i) {
            DubinsPath p = dubins_shortest(sol.poses[i], sol.poses[i + 1], scenario_.rho);
            auto samples = dubins_sample(p, ds_);
            size_t skip = i == 0 ? 0 : 1;  // segment start repeats the previous end
            sol.trajectory.insert(sol.trajectory.end(), samples.begin() + long(skip),
                                  samples.end());
        }
        if (sol.poses.size() == 1) sol.trajectory = sol.poses;
    }
    return sol;
}

KripkeStructure Planner::kripke() const {
    KripkeStructure k;
    for (int i = 0; i < n_states(); ++i) k.add_state(poses_[size_t(i)], labels_[size_t(i)]);
    if (injected_mode_) {
        for (int from = 0; from < n_states(); ++from) {
            for (const auto& [to, dur] : out_edges_[size_t(from)]) k.add_edge(from, to, dur);
        }
    } else {
        for (size_t id = 1; id < nodes_.size(); ++id) {
            const PNode& n = nodes_[id];
            int from = nodes_[size_t(n.parent)].kripke;
            if (!k.has_edge(from, n.kripke)) k.add_edge(from, n.kripke, n.edge_dur);
        }
    }
    return k;
}

int Planner::prune_unreachable() {
    if (!injected_mode_) return 0;  // sampled states are reachable by construction
    std::vector<bool> reach(size_t(n_states()), false);
    std::vector<int> stack{nodes_[0].kripke};
    reach[size_t(nodes_[0].kripke)] = true;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (const auto& [to, dur] : out_edges_[size_t(s)]) {
            if (!reach[size_t(to)]) {
                reach[size_t(to)] = true;
                stack.push_back(to);
            }
        }
    }
    int dropped = 0;
    for (int i = 0; i < n_states(); ++i) {
        if (alive_[size_t(i)] && !reach[size_t(i)]) {
            alive_[size_t(i)] = false;
            ++dropped;
        }
    }
    return dropped;
}

Planner::NodeView Planner::node(std::size_t id) const {
    const PNode& n = nodes_.at(id);
    return {n.kripke, n.q, n.ja, n.jt, n.parent};
}

std::vector<int> Planner::node_ids_at(int state) const {
    std::vector<int> out;
    for (const auto& [q, id] : nodes_at_.at(size_t(state))) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace mvp
