#pragma once

#include <cmath>

namespace tfrac::detail {

// Double-double value hi + lo, |lo| <= ulp(hi)/2. Enough arithmetic for
// compensated series summation; not a general extended-precision type.
struct Dd {
    double hi = 0.0;
    double lo = 0.0;

    Dd() = default;
    constexpr Dd(double h, double l = 0.0) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

inline Dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline Dd two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline Dd dd_add(const Dd& a, const Dd& b) {
    Dd s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    Dd r = two_sum(s.hi, lo);
    return r;
}

inline Dd dd_add(const Dd& a, double b) { return dd_add(a, Dd{b}); }

inline Dd dd_sub(const Dd& a, const Dd& b) { return dd_add(a, Dd{-b.hi, -b.lo}); }

inline Dd dd_mul(const Dd& a, const Dd& b) {
    Dd p = two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return two_sum(p.hi, lo);
}

inline Dd dd_mul(const Dd& a, double b) { return dd_mul(a, Dd{b}); }

inline Dd dd_div(const Dd& a, const Dd& b) {
    double q1 = a.hi / b.hi;
    Dd r = dd_sub(a, dd_mul(b, q1));
    double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(b, q2));
    double q3 = r.hi / b.hi;
    Dd q = two_sum(q1, q2);
    return dd_add(q, q3);
}

inline Dd dd_div(const Dd& a, double b) { return dd_div(a, Dd{b}); }

}  // namespace tfrac::detail
