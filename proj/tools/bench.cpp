// Compares the serial and OpenMP batch unsafety kernels on random words.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "mvplan/automata.hpp"
#include "mvplan/fltl.hpp"
#include "mvplan/rng.hpp"

using namespace mvp;

namespace {

Rulebook bench_rulebook() {
    auto rule = [](const char* name, const char* formula, int cls, int w, CostMode mode) {
        Nfa nfa = compile_safety(parse_formula(formula));
        return RuleAutomaton::compile(name, nfa, cls, Rational(w), mode, formula);
    };
    Rulebook rb;
    rb.rules.push_back(rule("sidewalk", "G !(_, sw)", 1, 1, CostMode::Duration));
    rb.rules.push_back(rule("direction", "G (_, dir)", 2, 1, CostMode::Duration));
    rb.rules.push_back(rule("lane_change", "G !((rl, ll) | (ll, rl))", 3, 10, CostMode::Event));
    rb.rules.push_back(rule("stay_off_lines", "G !(_, solid)", 3, 1, CostMode::Duration));
    rb.num_classes = 3;
    return rb;
}

std::vector<TimedWord> random_words(int n, int max_len, Rng& rng) {
    std::vector<TimedWord> words;
    words.reserve(size_t(n));
    for (int i = 0; i < n; ++i) {
        int len = 1 + int(rng.raw() % uint64_t(max_len));
        TimedWord w;
        uint8_t prev = 255;
        for (int j = 0; j < len; ++j) {
            uint8_t bits = uint8_t(rng.raw() % kNumLabelSets);
            if (bits == prev) bits = uint8_t((bits + 1) % kNumLabelSets);
            prev = bits;
            TimedLetter l;
            l.labels = LabelSet(bits);
            l.duration = rng.uniform(0.0, 5.0);
            w.push_back(l);
        }
        words.push_back(std::move(w));
    }
    return words;
}

template <typename F>
double time_s(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int n = 40000;
    int max_len = 10;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            n = 2000;
        } else if (std::strcmp(argv[i], "--words") == 0 && i + 1 < argc) {
            n = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--len") == 0 && i + 1 < argc) {
            max_len = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: bench [--quick] [--words N] [--len L]\n");
            return 1;
        }
    }

    Rulebook rb = bench_rulebook();
    Rng rng(12345);
    std::vector<TimedWord> words = random_words(n, max_len, rng);
    std::printf("words: %d (len <= %d), rules: %zu, classes: %d\n", n, max_len, rb.rules.size(),
                rb.num_classes);

    const RuleAutomaton& r0 = rb.rules[2];
    std::vector<Rational> a, b;
    double ts = time_s([&] { a = unsafety_of_words(r0, words, Parallel::Serial); });
    double tp = 0;
    bool have_omp = true;
    try {
        tp = time_s([&] { b = unsafety_of_words(r0, words, Parallel::OpenMP); });
    } catch (const std::exception&) {
        have_omp = false;
    }
    if (have_omp) {
        std::printf("unsafety_of_words   serial %.3f s   openmp %.3f s   speedup %.1fx   %s\n",
                    ts, tp, ts / tp, a == b ? "match" : "MISMATCH");
        if (a != b) return 1;
    } else {
        std::printf("unsafety_of_words   serial %.3f s   (built without OpenMP)\n", ts);
    }

    std::vector<UnsafetyVector> va, vb;
    ts = time_s([&] { va = unsafety_vectors(rb, words, Parallel::Serial); });
    if (have_omp) {
        tp = time_s([&] { vb = unsafety_vectors(rb, words, Parallel::OpenMP); });
        bool same = va.size() == vb.size();
        for (size_t i = 0; same && i < va.size(); ++i) same = va[i] == vb[i];
        std::printf("unsafety_vectors    serial %.3f s   openmp %.3f s   speedup %.1fx   %s\n",
                    ts, tp, ts / tp, same ? "match" : "MISMATCH");
        if (!same) return 1;
    } else {
        std::printf("unsafety_vectors    serial %.3f s   (built without OpenMP)\n", ts);
    }
    return 0;
}
