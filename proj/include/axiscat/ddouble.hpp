#pragma once

// Minimal double-double arithmetic (about 106 significant bits), enough to
// run three-term recurrences for precomputed tables and reference transforms.

#include <cmath>

namespace axiscat
{

struct ddouble
{
    double hi = 0.0;
    double lo = 0.0;

    constexpr ddouble() = default;
    constexpr ddouble(double h) : hi(h) {}
    constexpr ddouble(double h, double l) : hi(h), lo(l) {}

    static ddouble from(long double v)
    {
        const double h = static_cast<double>(v);
        return {h, static_cast<double>(v - static_cast<long double>(h))};
    }

    explicit operator double() const { return hi + lo; }
};

namespace dd_detail
{
inline ddouble two_sum(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

inline ddouble quick_two_sum(double a, double b)
{
    const double s = a + b;
    return {s, b - (s - a)};
}

inline ddouble two_prod(double a, double b)
{
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}
} // namespace dd_detail

inline ddouble operator+(ddouble a, ddouble b)
{
    ddouble s = dd_detail::two_sum(a.hi, b.hi);
    ddouble t = dd_detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = dd_detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline ddouble operator-(ddouble a)
{
    return {-a.hi, -a.lo};
}

inline ddouble operator-(ddouble a, ddouble b)
{
    return a + (-b);
}

inline ddouble operator*(ddouble a, ddouble b)
{
    ddouble p = dd_detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline ddouble operator/(ddouble a, ddouble b)
{
    // long division with two correction steps
    const double q1 = a.hi / b.hi;
    ddouble r = a - b * ddouble(q1);
    const double q2 = r.hi / b.hi;
    r = r - b * ddouble(q2);
    const double q3 = r.hi / b.hi;
    return dd_detail::quick_two_sum(q1, q2) + ddouble(q3);
}

inline ddouble& operator+=(ddouble& a, ddouble b)
{
    return a = a + b;
}

} // namespace axiscat
