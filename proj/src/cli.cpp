#include "mvplan/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mvplan/automata.hpp"
#include "mvplan/json_util.hpp"
#include "mvplan/planner.hpp"
#include "mvplan/report.hpp"
#include "mvplan/svg.hpp"
#include "mvplan/word_io.hpp"
#include "mvplan/world.hpp"

namespace mvp {

namespace {

int cmd_plan(const std::string& scenario_path, const std::string& rules_path,
             const PlannerConfig& cfg, const std::string& json_path,
             const std::string& svg_path) {
    Scenario sc = load_scenario_file(scenario_path);
    Rulebook rb = load_rulebook_file(rules_path);
    Planner planner(sc, rb, cfg);
    planner.run();

    RunReport rep = make_report(planner, scenario_path, rules_path);
    write_text_file(json_path, report_to_json(rep));
    if (!svg_path.empty()) {
        write_text_file(svg_path, render_svg(sc, planner.kripke(), planner.solution()));
    }

    const auto& sol = planner.solution();
    std::cout << "iterations: " << cfg.iterations << "\n";
    std::cout << "tree states: " << planner.kripke().n_states() << "\n";
    if (sol) {
        std::cout << "solution: unsafety " << sol->unsafety.to_string() << ", duration "
                  << fmt_double(sol->duration) << " s (found at iteration "
                  << sol->iteration_found << ")\n";
        std::cout << "report: " << json_path << "\n";
        return 0;
    }
    std::cout << "solution: none found within budget\n";
    std::cout << "report: " << json_path << "\n";
    return 2;
}

int cmd_check(const std::string& rules_path, const std::string& word_path, bool oracle) {
    Rulebook rb = load_rulebook_file(rules_path);
    TimedWord raw = load_timed_word_file(word_path);
    TimedWord w = destutter(raw);
    if (w.size() != raw.size()) {
        std::cout << "note: merged " << raw.size() - w.size()
                  << " stuttering letter(s); evaluating " << w.size() << " letters\n";
    }

    for (const RuleAutomaton& rule : rb.rules) {
        Rational lam = unsafety_of_word(rule, w);
        std::ostringstream os;
        os << lam;
        std::cout << "rule " << rule.name() << " (class " << rule.priority_class()
                  << "): " << os.str() << "\n";
    }
    UnsafetyVector vec = unsafety_vector(rb, w);
    std::cout << "unsafety: " << vec.to_string() << "\n";

    if (oracle) {
        for (const RuleAutomaton& rule : rb.rules) {
            Rational dp = unsafety_of_word(rule, w);
            Rational brute;
            try {
                brute = vanish_oracle(rule, w);
            } catch (const OracleLimitError& e) {
                std::cerr << "oracle limit: " << e.what() << "\n";
                return 1;
            }
            if (dp != brute) {
                std::ostringstream a, b;
                a << dp;
                b << brute;
                std::cout << "oracle DISAGREES on rule " << rule.name() << ": dp " << a.str()
                          << " vs enumeration " << b.str() << "\n";
                return 3;
            }
        }
        std::cout << "oracle agrees on all " << rb.rules.size() << " rule(s)\n";
    }
    return 0;
}

KripkeStructure kripke_from_report(const Json& rep) {
    KripkeStructure k;
    const Json& kj = require_key(rep, "kripke", "report");
    const Json& states = require_key(kj, "states", "report.kripke");
    if (!states.is_array()) throw std::runtime_error("report.kripke.states: expected array");
    for (const Json& s : states) {
        if (!s.is_array() || s.size() != 3) {
            throw std::runtime_error("report.kripke.states: expected [x, y, theta] triples");
        }
        Pose p{s[0].get<double>(), s[1].get<double>(), s[2].get<double>()};
        k.add_state(p, LabelSet{});
    }
    const Json& edges = require_key(kj, "edges", "report.kripke");
    if (!edges.is_array()) throw std::runtime_error("report.kripke.edges: expected array");
    for (const Json& e : edges) {
        if (!e.is_array() || e.size() != 3) {
            throw std::runtime_error("report.kripke.edges: expected [from, to, duration]");
        }
        k.add_edge(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
    }
    return k;
}

std::optional<Solution> solution_from_report(const Json& rep) {
    const Json& sj = require_key(rep, "solution", "report");
    if (!require_key(sj, "found", "report.solution").get<bool>()) return std::nullopt;
    Solution sol;
    for (const Json& id : require_key(sj, "trace", "report.solution")) {
        sol.trace.push_back(id.get<int>());
    }
    auto poses = [](const Json& arr) {
        std::vector<Pose> out;
        for (const Json& p : arr) out.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
        return out;
    };
    sol.poses = poses(require_key(sj, "poses", "report.solution"));
    sol.trajectory = poses(require_key(sj, "trajectory", "report.solution"));
    std::vector<Rational> exact;
    for (const Json& r : require_key(sj, "unsafety_exact", "report.solution")) {
        exact.push_back(Rational(r.get<std::string>()));
    }
    sol.unsafety = UnsafetyVector(std::move(exact));
    sol.duration = require_key(sj, "duration", "report.solution").get<double>();
    sol.iteration_found = require_key(sj, "iteration_found", "report.solution").get<int>();
    return sol;
}

int cmd_render(const std::string& scenario_path, const std::string& report_path,
               const std::string& out_path) {
    Scenario sc = load_scenario_file(scenario_path);
    std::ifstream in(report_path);
    if (!in) throw std::runtime_error("render: cannot open " + report_path);
    std::stringstream ss;
    ss << in.rdbuf();
    Json rep;
    try {
        rep = Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(std::string("render: invalid report JSON: ") + e.what());
    }
    KripkeStructure k = kripke_from_report(rep);
    std::optional<Solution> sol = solution_from_report(rep);
    write_text_file(out_path, render_svg(sc, k, sol));
    std::cout << "svg: " << out_path << "\n";
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"minimum-violation motion planning for a Dubins vehicle"};
    app.require_subcommand(1);

    std::string scenario_path, rules_path, word_path, report_path, out_path;
    std::string json_path = "solution.json";
    std::string svg_path;
    PlannerConfig cfg;
    bool oracle = false;

    CLI::App* plan = app.add_subcommand("plan", "grow a tree and report the best trajectory");
    plan->add_option("scenario", scenario_path, "scenario JSON")->required();
    plan->add_option("rules", rules_path, "rulebook JSON")->required();
    plan->add_option("--iterations", cfg.iterations, "sampling iterations");
    plan->add_option("--seed", cfg.seed, "RNG seed")->envname("MVP_SEED");
    plan->add_option("--gamma", cfg.gamma, "radius constant (default 1.1x the lower bound)");
    plan->add_option("--goal-bias", cfg.goal_bias, "fraction of samples drawn in the goal");
    plan->add_option("--ds", cfg.ds, "collision/label step, m (default rho/20)");
    plan->add_option("--heading-weight", cfg.heading_weight,
                     "heading weight in the near metric (default rho)");
    plan->add_option("--checkpoint-every", cfg.checkpoint_every, "checkpoint cadence");
    plan->add_option("--json", json_path, "report output path");
    plan->add_option("--svg", svg_path, "also render the tree to this SVG");

    CLI::App* check = app.add_subcommand("check", "evaluate a timed word against a rulebook");
    check->add_option("rules", rules_path, "rulebook JSON")->required();
    check->add_option("word", word_path, "timed word JSON")->required();
    check->add_flag("--oracle", oracle, "cross-check against subset enumeration");

    CLI::App* render = app.add_subcommand("render", "draw a saved report as SVG");
    render->add_option("scenario", scenario_path, "scenario JSON")->required();
    render->add_option("report", report_path, "report JSON from plan")->required();
    render->add_option("out", out_path, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (plan->parsed()) return cmd_plan(scenario_path, rules_path, cfg, json_path, svg_path);
        if (check->parsed()) return cmd_check(rules_path, word_path, oracle);
        if (render->parsed()) return cmd_render(scenario_path, report_path, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace mvp
