// Atomic propositions, label sets, and timed words.
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvp {

// The fixed proposition alphabet. Order matters: it is the bit order of
// LabelSet and the canonical order in printed output.
enum class Prop : uint8_t { sw = 0, rl, ll, dir, dotted, solid };

inline constexpr std::array<std::string_view, 6> kPropNames = {
    "sw", "rl", "ll", "dir", "dotted", "solid"};
inline constexpr int kNumProps = 6;
inline constexpr int kNumLabelSets = 64;  // 2^kNumProps

std::optional<Prop> prop_from_name(std::string_view name);
std::string_view prop_name(Prop p);

// A subset of the propositions, packed into the low six bits of a byte.
class LabelSet {
public:
    constexpr LabelSet() = default;
    constexpr explicit LabelSet(uint8_t raw) : bits_(raw) {}
    constexpr LabelSet(std::initializer_list<Prop> props) {
        for (Prop p : props) set(p);
    }

    constexpr bool has(Prop p) const { return (bits_ >> static_cast<int>(p)) & 1; }
    constexpr void set(Prop p) { bits_ |= uint8_t(1u << static_cast<int>(p)); }
    constexpr void clear(Prop p) { bits_ &= uint8_t(~(1u << static_cast<int>(p))); }
    constexpr uint8_t raw() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }

    friend constexpr bool operator==(LabelSet a, LabelSet b) { return a.bits_ == b.bits_; }
    friend constexpr bool operator!=(LabelSet a, LabelSet b) { return a.bits_ != b.bits_; }
    friend constexpr bool operator<(LabelSet a, LabelSet b) { return a.bits_ < b.bits_; }

    // "{rl,dir}"; "{}" for the empty set.
    std::string to_string() const;

private:
    uint8_t bits_ = 0;
};

// One letter of a timed word: a label set held for a duration (seconds).
struct TimedLetter {
    LabelSet labels;
    double duration = 0.0;

    friend bool operator==(const TimedLetter& a, const TimedLetter& b) {
        return a.labels == b.labels && a.duration == b.duration;
    }
};

using TimedWord = std::vector<TimedLetter>;
using Word = std::vector<LabelSet>;  // untimed

Word letters_of(const TimedWord& w);
double total_duration(const TimedWord& w);

// Merges adjacent letters with equal label sets, summing their durations.
TimedWord destutter(const TimedWord& w);

}  // namespace mvp
