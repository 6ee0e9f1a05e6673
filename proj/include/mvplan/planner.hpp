// Incremental minimum-violation planner: grows a tree of Dubins-connected
// poses and searches the product of the induced transition system with the
// rule automata for the trace of lexicographically least unsafety, breaking
// ties by duration. Costs are exact rationals, so anytime improvements are
// genuine and repeated runs are byte-for-byte reproducible.
#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "mvplan/automata.hpp"
#include "mvplan/kripke.hpp"
#include "mvplan/rng.hpp"
#include "mvplan/world.hpp"

namespace mvp {

struct PlannerConfig {
    int iterations = 5000;
    uint64_t seed = 0;
    double gamma = 0.0;          // 0: 1.1 * gamma_lower_bound(scenario)
    double goal_bias = 0.05;     // fraction of samples drawn from the goal region
    double ds = 0.0;             // collision/label sample spacing; 0: rho / 20
    double heading_weight = 0.0; // weight of heading in the near metric; 0: rho
    int checkpoint_every = 500;  // 0: only the final checkpoint
};

// Admissible lower bound for the connection-radius constant of the
// shrinking-ball rule r(n) = gamma * (ln n / n)^(1/3), over the metric
// (dx, dy, w * dtheta) with w = rho. Only the 3-dimensional pose space is
// supported; other values of d throw.
double gamma_lower_bound(const Scenario& sc, int d = 3);

struct Checkpoint {
    int iteration = 0;
    double elapsed_seconds = 0.0;
    std::optional<UnsafetyVector> best_unsafety;  // absent while no solution
    std::optional<double> best_duration;
};

struct Solution {
    std::vector<int> trace;          // state ids, root to goal
    std::vector<Pose> poses;         // poses of those states
    UnsafetyVector unsafety;         // includes the cost of settling the final letter
    double duration = 0.0;
    int iteration_found = 0;         // iteration at which this value was reached
    std::vector<Pose> trajectory;    // dense poses (empty in injected mode)
};

// Steering: the shortest Dubins path, accepted only if it stays collision
// free and its label word changes at most once (so edges refine to single
// transitions of the abstraction).
struct SteerResult {
    DubinsPath path;
    double duration = 0.0;
    LabeledPath labeled;
};
std::optional<SteerResult> steer(const Scenario& sc, const Pose& from, const Pose& to,
                                 double ds);

// A hand-built transition system for planning without geometry.
struct InjectedGraph {
    std::vector<LabelSet> labels;                    // one per state
    std::vector<std::tuple<int, int, double>> edges; // from, to, duration > 0
    std::vector<int> goal_states;
    int root = 0;
};

class Planner {
public:
    // Sampling mode. Throws if cfg.gamma is nonzero but below the admissible
    // lower bound for the scenario.
    Planner(Scenario sc, Rulebook rb, PlannerConfig cfg);

    // Injected mode: plans on the given graph, replaying relaxation sweeps
    // until no cost changes (exact costs make this a fixed point). Geometry,
    // sampling, and gamma are not involved.
    Planner(Rulebook rb, InjectedGraph graph, PlannerConfig cfg);

    void run();

    const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
    std::optional<Solution> solution() const;
    int iterations_run() const { return iterations_run_; }

    // The explored transition system: all states, with the edges the final
    // tree uses (injected mode: the graph as given).
    KripkeStructure kripke() const;

    // Drops states unreachable from the root along edges (injected graphs
    // may contain them); returns how many were dropped. Sampling-mode trees
    // are reachable by construction.
    int prune_unreachable();

    // --- introspection for tests ---
    int n_states() const { return int(poses_.size()); }
    std::size_t n_product_nodes() const { return nodes_.size(); }
    double gamma() const { return gamma_; }
    double radius(int n) const;
    std::vector<int> near_states(const Pose& x) const;  // current radius(n_states())
    int nearest_state(const Pose& x) const;
    Pose sample_pose();  // advances the RNG
    const Scenario& scenario() const { return scenario_; }
    const PlannerConfig& config() const { return cfg_; }

    struct NodeView {
        int kripke;
        CombinedState state;
        UnsafetyVector cost;
        double duration;
        int parent;  // node id, -1 at root
    };
    NodeView node(std::size_t id) const;
    std::vector<int> node_ids_at(int state) const;

private:
    struct PNode {
        int kripke;
        CombinedState q;
        UnsafetyVector ja;      // cost-to-come
        double jt;              // duration-to-come
        int parent;             // node id, -1 for root
        UnsafetyVector edge_cost;
        double edge_dur;
        std::vector<int> children;
    };

    struct EdgeIn {
        int from;
        double dur;
        Rational rdur;
    };

    // grid index over (x, y, heading_weight * theta)
    struct GridIndex {
        double cell = 1.0;
        double x0 = 0, y0 = 0;
        int nx = 1, ny = 1, nt = 1;
        double theta_span = 1.0;
        std::vector<std::vector<int>> cells;
        void init(const BBox& bounds, double w, double cell_size);
        int cell_of(double x, double y, double tw) const;
        void insert(int id, const Pose& p, double w);
    };

    struct StateKeyHash {
        std::size_t operator()(const CombinedState& q) const {
            std::uint64_t h = 0x9e3779b97f4a7c15ull;
            for (RuleState s : q) h = (h ^ s) * 0x100000001b3ull;
            return std::size_t(h);
        }
    };

    struct StepKey {
        CombinedState q;
        std::uint8_t sigma = 0;
        bool closing = false;
        bool operator==(const StepKey&) const = default;
    };
    struct StepKeyHash {
        std::size_t operator()(const StepKey& k) const {
            std::uint64_t h = StateKeyHash{}(k.q);
            h ^= std::uint64_t(k.sigma) << 1 | std::uint64_t(k.closing);
            return std::size_t(h * 0x9e3779b97f4a7c15ull);
        }
    };

    int add_state(const Pose& p, LabelSet l, bool goal);
    void run_sampling();
    void run_injected();
    double metric2(const Pose& a, const Pose& b) const;

    // Offers candidate (q, ja, jt) at state s through parent node p.
    // Copies ja/edge_cost only when the candidate is inserted or improves.
    bool offer(int s, const CombinedState& q, const UnsafetyVector& ja, double jt, int parent,
               const UnsafetyVector& edge_cost, double edge_dur);
    void propagate(int id);
    void consider_best(int id);
    bool relax_from_edges(int s, const std::vector<EdgeIn>& ins);
    bool relax_state(int s);  // injected mode: uses stored in-edges
    const std::vector<ProductSucc>& stepped(const CombinedState& cs, LabelSet sigma,
                                            LabelSet sigma_next);
    void record_checkpoint(int iteration);

    Scenario scenario_;
    Rulebook rb_;
    PlannerConfig cfg_;
    bool injected_mode_ = false;

    // transition system
    std::vector<Pose> poses_;
    std::vector<LabelSet> labels_;
    std::vector<bool> is_goal_;
    std::vector<bool> alive_;
    std::vector<std::vector<EdgeIn>> in_edges_;           // injected mode only
    std::vector<std::map<int, double>> out_edges_;        // injected mode only

    // product tree
    std::vector<PNode> nodes_;
    std::vector<std::unordered_map<CombinedState, int, StateKeyHash>> nodes_at_;
    int best_node_ = -1;
    UnsafetyVector best_total_;
    double best_jt_ = 0.0;
    int best_iteration_ = 0;

    // search machinery
    Rng rng_;
    GridIndex grid_;
    double gamma_ = 0.0;
    double heading_w_ = 1.0;
    double ds_ = 0.0;
    bool ran_ = false;
    int iterations_run_ = 0;
    int current_iteration_ = 0;
    std::vector<Checkpoint> checkpoints_;
    std::chrono::steady_clock::time_point run_start_;

    std::unordered_map<StepKey, std::vector<ProductSucc>, StepKeyHash> step_cache_;
    std::unordered_map<StepKey, std::optional<UnsafetyVector>, StepKeyHash> finish_cache_;
    StepKey step_probe_;  // reused lookup key, avoids an allocation per query

    // relax scratch, reused across candidates to avoid per-candidate allocation
    UnsafetyVector scratch_base_;
    UnsafetyVector scratch_cost_;
    UnsafetyVector scratch_ja_;
    UnsafetyVector scratch_total_;
};

}  // namespace mvp
