#include "mvplan/rational.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mvp {

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, 0.5 <= |m| < 1
    // 53 doublings make the mantissa integral.
    auto mantissa = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    Rational r(mantissa);
    if (exp > 0) {
        r *= boost::multiprecision::pow(boost::multiprecision::cpp_int(2), exp);
    } else if (exp < 0) {
        r /= boost::multiprecision::pow(boost::multiprecision::cpp_int(2), -exp);
    }
    return r;
}

double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

using BigInt = boost::multiprecision::cpp_int;

// boost::rational keeps num/den coprime with den > 0; the writers below
// maintain exactly that invariant, so mutating through the const accessors
// is safe (the underlying object is never const).
BigInt& num_ref(Rational& q) { return const_cast<BigInt&>(q.backend().data().numerator()); }
BigInt& den_ref(Rational& q) { return const_cast<BigInt&>(q.backend().data().denominator()); }

// True when d == 2^k (d > 0 by invariant).
bool dyadic_exp(const BigInt& d, unsigned& k) {
    const unsigned l = boost::multiprecision::lsb(d);
    if (boost::multiprecision::msb(d) != l) return false;
    k = l;
    return true;
}

// out = n / 2^k, normalized by stripping shared factors of two.
void set_dyadic(Rational& out, BigInt n, unsigned k) {
    if (n.is_zero()) {
        num_ref(out) = 0;
        den_ref(out) = 1;
        return;
    }
    if (k > 0) {
        const unsigned s = std::min(boost::multiprecision::lsb(n), k);
        if (s > 0) {
            n >>= s;
            k -= s;
        }
    }
    num_ref(out) = std::move(n);
    BigInt& d = den_ref(out);
    d = 1;
    d <<= k;
}

}  // namespace

// Durations come from doubles and weights from ints or doubles, so nearly
// every value in play is dyadic (denominator a power of two). For those,
// addition is a shift-align-add and normalization a shift, with none of the
// gcd/division work boost::rational performs for the general case.
void rational_add(Rational& a, const Rational& b) {
    const auto& rb = b.backend().data();
    if (rb.numerator().is_zero()) return;
    const auto& ra = a.backend().data();
    if (ra.numerator().is_zero()) {
        a = b;
        return;
    }
    unsigned ka = 0, kb = 0;
    if (dyadic_exp(ra.denominator(), ka) && dyadic_exp(rb.denominator(), kb)) {
        const unsigned k = std::max(ka, kb);
        BigInt n = ra.numerator();
        if (k > ka) n <<= (k - ka);
        if (k > kb) {
            BigInt t = rb.numerator();
            t <<= (k - kb);
            n += t;
        } else {
            n += rb.numerator();
        }
        set_dyadic(a, std::move(n), k);
        return;
    }
    a += b;
}

// acc += w * d without the two gcd passes a rational multiply performs.
void rational_addmul(Rational& acc, const Rational& w, const Rational& d) {
    const auto& rw = w.backend().data();
    const auto& rd = d.backend().data();
    if (rw.numerator().is_zero() || rd.numerator().is_zero()) return;
    unsigned kw = 0, kd = 0;
    if (dyadic_exp(rw.denominator(), kw) && dyadic_exp(rd.denominator(), kd)) {
        Rational prod;
        set_dyadic(prod, rw.numerator() * rd.numerator(), kw + kd);
        rational_add(acc, prod);
        return;
    }
    acc += w * d;
}

bool UnsafetyVector::is_zero() const {
    for (const auto& x : v_) {
        if (x != 0) return false;
    }
    return true;
}

UnsafetyVector& UnsafetyVector::operator+=(const UnsafetyVector& o) {
    if (v_.size() != o.v_.size())
        throw std::invalid_argument("UnsafetyVector: size mismatch in +=");
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (o.v_[i].is_zero()) continue;
        if (v_[i].is_zero()) {
            v_[i] = o.v_[i];
        } else {
            rational_add(v_[i], o.v_[i]);
        }
    }
    return *this;
}

UnsafetyVector& UnsafetyVector::assign_sum(const UnsafetyVector& a, const UnsafetyVector& b) {
    *this = a;
    *this += b;
    return *this;
}

// boost::rational's operator< runs a continued-fraction loop full of
// divisions; with arbitrary-precision integers a cross-multiplication is
// both exact and much cheaper. Denominators are positive by invariant.
int rational_compare(const Rational& a, const Rational& b) {
    const auto& ra = a.backend().data();
    const auto& rb = b.backend().data();
    const int sa = ra.numerator().sign();
    const int sb = rb.numerator().sign();
    if (sa != sb) return sa < sb ? -1 : 1;
    if (sa == 0) return 0;
    if (ra.denominator() == rb.denominator())
        return ra.numerator().compare(rb.numerator());
    boost::multiprecision::cpp_int lhs = ra.numerator() * rb.denominator();
    boost::multiprecision::cpp_int rhs = rb.numerator() * ra.denominator();
    return lhs.compare(rhs);
}

int UnsafetyVector::compare(const UnsafetyVector& a, const UnsafetyVector& b) {
    if (a.v_.size() != b.v_.size())
        throw std::invalid_argument("UnsafetyVector: size mismatch in compare");
    for (std::size_t i = 0; i < a.v_.size(); ++i) {
        int c = rational_compare(a.v_[i], b.v_[i]);
        if (c != 0) return c;
    }
    return 0;
}

std::vector<double> UnsafetyVector::to_doubles() const {
    std::vector<double> out;
    out.reserve(v_.size());
    for (const auto& x : v_) out.push_back(rational_to_double(x));
    return out;
}

std::string UnsafetyVector::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (i) os << ", ";
        os << v_[i];
    }
    os << "]";
    return os.str();
}

}  // namespace mvp
