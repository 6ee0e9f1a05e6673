// Finite-trace temporal logic over transition atoms.
//
// Atoms are pairs (a, b) of propositions (either may be the wildcard "_"):
// at position i the atom holds when a is in the i-th label set and b is in
// the (i+1)-th. At the final position an atom with a non-wildcard second
// component is false; (a, _) still holds there when a matches. G constrains
// every position that has a successor (the final position carries no
// transition for it to speak about); F and U range over all positions,
// including the last. The empty word satisfies every formula.
#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mvplan/labels.hpp"

namespace mvp {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { Atom, Not, And, Or, Until, Globally, Finally };

    Kind kind = Kind::Atom;
    // Atom payload; nullopt means wildcard.
    std::optional<Prop> first, second;
    // Children: lhs only for unary kinds.
    FormulaPtr lhs, rhs;

    static FormulaPtr atom(std::optional<Prop> a, std::optional<Prop> b);
    static FormulaPtr not_(FormulaPtr f);
    static FormulaPtr and_(FormulaPtr a, FormulaPtr b);
    static FormulaPtr or_(FormulaPtr a, FormulaPtr b);
    static FormulaPtr until(FormulaPtr a, FormulaPtr b);
    static FormulaPtr globally(FormulaPtr f);
    static FormulaPtr finally_(FormulaPtr f);
};

class FltlParseError : public std::runtime_error {
public:
    FltlParseError(const std::string& msg, size_t offset)
        : std::runtime_error(msg), offset_(offset) {}
    size_t offset() const { return offset_; }  // byte position in the input

private:
    size_t offset_;
};

// Grammar (precedence low to high): U, |, &, prefix !/G/F, atoms "(a, b)",
// parenthesized groups. Binary operators associate left.
FormulaPtr parse_formula(std::string_view text);

// Round-trippable printing: parse_formula(pretty(f)) is structurally f.
std::string pretty(const FormulaPtr& f);

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

bool evaluate(const FormulaPtr& f, const Word& w);  // empty word: true
bool evaluate_at(const FormulaPtr& f, const Word& w, size_t pos);

}  // namespace mvp
