#include "mvplan/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mvp {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

namespace {

void emit_pose(std::string& out, const Pose& p) {
    out += "[";
    out += fmt_double(p.x);
    out += ", ";
    out += fmt_double(p.y);
    out += ", ";
    out += fmt_double(p.theta);
    out += "]";
}

void emit_unsafety(std::string& out, const UnsafetyVector& v) {
    auto d = v.to_doubles();
    out += "[";
    for (size_t i = 0; i < d.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(d[i]);
    }
    out += "]";
}

void emit_unsafety_exact(std::string& out, const UnsafetyVector& v) {
    out += "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        std::ostringstream os;
        os << v[i];
        out += "\"" + os.str() + "\"";
    }
    out += "]";
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void check_monotone(const std::vector<Checkpoint>& cps) {
    const Checkpoint* prev = nullptr;
    for (const Checkpoint& c : cps) {
        if (prev && prev->best_unsafety) {
            if (!c.best_unsafety) {
                throw std::logic_error("report: checkpoint lost a previously found solution");
            }
            int cmp = UnsafetyVector::compare(*c.best_unsafety, *prev->best_unsafety);
            if (cmp > 0 || (cmp == 0 && *c.best_duration > *prev->best_duration)) {
                throw std::logic_error("report: checkpoint sequence is not monotone");
            }
        }
        prev = &c;
    }
}

}  // namespace

RunReport make_report(const Planner& p, std::string scenario_path, std::string rules_path) {
    RunReport r;
    r.scenario_path = std::move(scenario_path);
    r.rules_path = std::move(rules_path);
    r.config = p.config();
    r.gamma_resolved = p.gamma();
    r.ds_resolved = r.config.ds > 0 ? r.config.ds : p.scenario().default_ds();
    r.checkpoints = p.checkpoints();
    r.kripke = p.kripke();
    r.solution = p.solution();
    return r;
}

std::string solution_to_json(const std::optional<Solution>& s) {
    std::string out;
    if (!s) {
        out += "{\"found\": false}";
        return out;
    }
    out += "{\n    \"found\": true,\n    \"trace\": [";
    for (size_t i = 0; i < s->trace.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(s->trace[i]);
    }
    out += "],\n    \"poses\": [";
    for (size_t i = 0; i < s->poses.size(); ++i) {
        if (i) out += ", ";
        emit_pose(out, s->poses[i]);
    }
    out += "],\n    \"unsafety\": ";
    emit_unsafety(out, s->unsafety);
    out += ",\n    \"unsafety_exact\": ";
    emit_unsafety_exact(out, s->unsafety);
    out += ",\n    \"duration\": " + fmt_double(s->duration);
    out += ",\n    \"iteration_found\": " + std::to_string(s->iteration_found);
    out += ",\n    \"trajectory\": [";
    for (size_t i = 0; i < s->trajectory.size(); ++i) {
        if (i) out += ", ";
        emit_pose(out, s->trajectory[i]);
    }
    out += "]\n  }";
    return out;
}

std::string report_to_json(const RunReport& r) {
    check_monotone(r.checkpoints);
    std::string out;
    out += "{\n  \"config\": {\n";
    out += "    \"scenario\": \"" + escape(r.scenario_path) + "\",\n";
    out += "    \"rules\": \"" + escape(r.rules_path) + "\",\n";
    out += "    \"iterations\": " + std::to_string(r.config.iterations) + ",\n";
    out += "    \"seed\": " + std::to_string(r.config.seed) + ",\n";
    out += "    \"gamma\": " + fmt_double(r.gamma_resolved) + ",\n";
    out += "    \"goal_bias\": " + fmt_double(r.config.goal_bias) + ",\n";
    out += "    \"ds\": " + fmt_double(r.ds_resolved) + ",\n";
    out += "    \"heading_weight\": " + fmt_double(r.config.heading_weight) + ",\n";
    out += "    \"checkpoint_every\": " + std::to_string(r.config.checkpoint_every) + "\n";
    out += "  },\n";
    out += "  \"seed\": " + std::to_string(r.config.seed) + ",\n";
    out += "  \"checkpoints\": [\n";
    for (size_t i = 0; i < r.checkpoints.size(); ++i) {
        const Checkpoint& c = r.checkpoints[i];
        out += "    {\"iteration\": " + std::to_string(c.iteration);
        out += ", \"elapsed_seconds\": " + fmt_double(c.elapsed_seconds);
        out += ", \"best_unsafety\": ";
        if (c.best_unsafety) {
            emit_unsafety(out, *c.best_unsafety);
        } else {
            out += "null";
        }
        out += ", \"best_duration\": ";
        out += c.best_duration ? fmt_double(*c.best_duration) : "null";
        out += i + 1 < r.checkpoints.size() ? "},\n" : "}\n";
    }
    out += "  ],\n";
    out += "  \"kripke\": {\n    \"states\": [";
    for (int s = 0; s < r.kripke.n_states(); ++s) {
        if (s) out += ", ";
        emit_pose(out, r.kripke.pose(s));
    }
    out += "],\n    \"edges\": [";
    bool first = true;
    for (int s = 0; s < r.kripke.n_states(); ++s) {
        for (const auto& [to, dur] : r.kripke.out_edges(s)) {
            if (!first) out += ", ";
            first = false;
            out += "[" + std::to_string(s) + ", " + std::to_string(to) + ", " + fmt_double(dur) +
                   "]";
        }
    }
    out += "]\n  },\n";
    out += "  \"solution\": " + solution_to_json(r.solution) + "\n";
    out += "}\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing: " + path);
}

}  // namespace mvp
