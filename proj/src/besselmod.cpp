#include <axiscat/besselmod.hpp>

#include <cmath>
#include <stdexcept>

namespace axiscat::bessel
{

namespace
{
// sum_k (-x^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1)), to convergence
long double jtilde_series(std::size_t n, long double x)
{
    const long double h = -0.5L * x * x;
    long double term = 1.0L, sum = 1.0L;
    for (std::size_t k = 1; k < 100000; ++k)
    {
        term *= h / (static_cast<long double>(k) * static_cast<long double>(2 * n + 2 * k + 1));
        sum += term;
        if (std::abs(term) <= 1e-21L * std::abs(sum) && static_cast<long double>(k) > std::abs(h))
            break;
    }
    return sum;
}
} // namespace

std::vector<double> jtilde_column(std::size_t n_max, double x)
{
    if (x < 0.0)
        throw std::invalid_argument("jtilde_column: negative argument");
    std::vector<double> out(n_max + 1, 1.0);
    if (x == 0.0)
        return out;

    const std::size_t n_start = n_max + static_cast<std::size_t>(std::ceil(x)) + 16;
    const long double xl = x;
    const long double x2 = xl * xl;
    long double above = jtilde_series(n_start + 1, xl);
    long double cur = jtilde_series(n_start, xl);
    for (std::size_t n = n_start; n > 0; --n)
    {
        const long double below = cur - x2 * above / (static_cast<long double>(2 * n + 1) * static_cast<long double>(2 * n + 3));
        above = cur;
        cur = below;
        if (n - 1 <= n_max)
            out[n - 1] = static_cast<double>(cur);
    }
    return out;
}

std::vector<double> ytilde_column(std::size_t n_max, double x)
{
    if (x < 0.0)
        throw std::invalid_argument("ytilde_column: negative argument");
    std::vector<double> out(n_max + 1, 1.0);
    if (x == 0.0)
        return out;
    const long double xl = x;
    const long double x2 = xl * xl;
    long double prev = std::cos(xl);
    long double cur = std::cos(xl) + xl * std::sin(xl);
    out[0] = static_cast<double>(prev);
    if (n_max >= 1)
        out[1] = static_cast<double>(cur);
    for (std::size_t n = 1; n < n_max; ++n)
    {
        const long double next = cur - x2 * prev / (static_cast<long double>(2 * n - 1) * static_cast<long double>(2 * n + 1));
        prev = cur;
        cur = next;
        out[n + 1] = static_cast<double>(cur);
    }
    return out;
}

std::vector<double> jtilde_derivative(const std::vector<double>& jt, double x)
{
    if (jt.size() < 2)
        throw std::invalid_argument("jtilde_derivative: need at least two orders");
    std::vector<double> d(jt.size() - 1);
    for (std::size_t n = 0; n + 1 < jt.size(); ++n)
        d[n] = -x * jt[n + 1] / double(2 * n + 3);
    return d;
}

std::vector<double> ytilde_derivative(const std::vector<double>& yt, double x)
{
    std::vector<double> d(yt.size());
    if (yt.empty())
        return d;
    d[0] = -std::sin(x);
    for (std::size_t n = 1; n < yt.size(); ++n)
        d[n] = x * yt[n - 1] / double(2 * n - 1);
    return d;
}

std::vector<double> j_scale_column(std::size_t n_max, double x)
{
    std::vector<double> t(n_max + 1);
    long double v = 1.0L;
    t[0] = 1.0;
    for (std::size_t n = 1; n <= n_max; ++n)
    {
        v *= static_cast<long double>(x) / static_cast<long double>(2 * n + 1);
        t[n] = static_cast<double>(v);
    }
    return t;
}

double power_ratio(double a, double b, std::size_t n)
{
    if (!(a > 0.0) || a > b)
        throw std::invalid_argument("power_ratio: requires 0 < a <= b");
    if (a == b || n == 0)
        return 1.0;
    const long double r = static_cast<long double>(a) / static_cast<long double>(b);
    return static_cast<double>(std::pow(r, static_cast<long double>(n)));
}

} // namespace axiscat::bessel
