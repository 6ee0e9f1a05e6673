// Exact rational arithmetic for unsafety accounting.
#pragma once

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace mvp {

using Rational = boost::multiprecision::cpp_rational;

// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double x);
double rational_to_double(const Rational& r);

// Three-way compare via sign test and cross-multiplication; much cheaper
// than boost::rational's division-based operator<.
int rational_compare(const Rational& a, const Rational& b);

// a += b and acc += w * d with a shift-based fast path for dyadic values
// (denominators that are powers of two); falls back to boost otherwise.
void rational_add(Rational& a, const Rational& b);
void rational_addmul(Rational& acc, const Rational& w, const Rational& d);

// Per-priority-class unsafety totals, compared lexicographically
// (class 1 first). All vectors in one computation share a size.
class UnsafetyVector {
public:
    UnsafetyVector() = default;
    explicit UnsafetyVector(std::size_t classes) : v_(classes) {}
    explicit UnsafetyVector(const std::vector<Rational>& values)
        : v_(values.begin(), values.end()) {}

    std::size_t size() const { return v_.size(); }
    Rational& operator[](std::size_t i) { return v_[i]; }
    const Rational& operator[](std::size_t i) const { return v_[i]; }

    bool is_zero() const;

    UnsafetyVector& operator+=(const UnsafetyVector& o);
    friend UnsafetyVector operator+(UnsafetyVector a, const UnsafetyVector& b) {
        a += b;
        return a;
    }
    // *this = a + b, reusing this vector's storage.
    UnsafetyVector& assign_sum(const UnsafetyVector& a, const UnsafetyVector& b);

    // Lexicographic order; sizes must match.
    static int compare(const UnsafetyVector& a, const UnsafetyVector& b);
    friend bool operator<(const UnsafetyVector& a, const UnsafetyVector& b) {
        return compare(a, b) < 0;
    }
    friend bool operator==(const UnsafetyVector& a, const UnsafetyVector& b) {
        return compare(a, b) == 0;
    }
    friend bool operator!=(const UnsafetyVector& a, const UnsafetyVector& b) {
        return compare(a, b) != 0;
    }
    friend bool operator<=(const UnsafetyVector& a, const UnsafetyVector& b) {
        return compare(a, b) <= 0;
    }

    std::vector<double> to_doubles() const;
    std::string to_string() const;  // "[0, 7/2, 1]"

private:
    boost::container::small_vector<Rational, 4> v_;
};

}  // namespace mvp
