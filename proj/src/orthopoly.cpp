#include <axiscat/orthopoly.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <algorithm>

namespace axiscat::orthopoly
{

namespace
{
// Chebyshev-series product with x: (x b)_k = (b_{k-1} + b_{k+1}) / 2, T_0 row special.
std::vector<double> times_x(const std::vector<double>& b)
{
    std::vector<double> out(b.size() + 1, 0.0);
    for (std::size_t k = 0; k < b.size(); ++k)
    {
        if (k == 0)
        {
            out[1] += b[0];
            continue;
        }
        out[k + 1] += 0.5 * b[k];
        out[k - 1] += 0.5 * b[k];
    }
    return out;
}

double clenshaw(const std::vector<double>& c, double x)
{
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;)
    {
        const double b0 = c[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return (c.empty() ? 0.0 : c[0]) + x * b1 - b2;
}

template <class Real, class Nodes>
AssociatedPair run_values(std::size_t l, std::size_t m_top, const Nodes& nodes)
{
    if (l < 1)
        throw std::invalid_argument("associated_values: l must be >= 1");
    const std::size_t n = nodes.size();
    AssociatedPair out;
    out.Q_prev.resize(n);
    out.Q_top.resize(n);
    out.R_prev.resize(n);
    out.R_top.resize(n);

    std::vector<Real> A(m_top), C(m_top);
    for (std::size_t m = 0; m < m_top; ++m)
    {
        if constexpr (std::is_same_v<Real, ddouble>)
        {
            A[m] = RecurrenceCoeffs::A_dd(l + m);
            C[m] = RecurrenceCoeffs::C_dd(l + m);
        }
        else
        {
            A[m] = RecurrenceCoeffs::A(l + m);
            C[m] = RecurrenceCoeffs::C(l + m);
        }
    }

    for (std::size_t i = 0; i < n; ++i)
    {
        Real x;
        if constexpr (std::is_same_v<Real, ddouble>)
            x = ddouble::from(nodes[i]);
        else
            x = static_cast<double>(nodes[i]);
        // index -1 row: Q = 0, R = 1; index 0 row: Q = 1, R = 0
        Real q_prev(0.0), q(1.0), r_prev(1.0), r(0.0);
        for (std::size_t m = 0; m < m_top; ++m)
        {
            const Real ax = A[m] * x;
            const Real q_next = ax * q + C[m] * q_prev;
            const Real r_next = ax * r + C[m] * r_prev;
            q_prev = q;
            q = q_next;
            r_prev = r;
            r = r_next;
        }
        if (m_top == 0)
        {
            // m = -1 is not a real row; report zeros there
            q_prev = Real(0.0);
            r_prev = Real(0.0);
        }
        out.Q_prev[i] = static_cast<double>(q_prev);
        out.Q_top[i] = static_cast<double>(q);
        out.R_prev[i] = static_cast<double>(r_prev);
        out.R_top[i] = static_cast<double>(r);
    }
    return out;
}
} // namespace

std::vector<long double> chebyshev_nodes_ld(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("chebyshev_nodes: N must be positive");
    std::vector<long double> x(n);
    const long double pi = std::numbers::pi_v<long double>;
    // cos((2i+1)pi/(2N)) = sin((N-2i-1)pi/(2N)); the sine form keeps the middle nodes accurate
    for (std::size_t i = 0; i < n; ++i)
    {
        const long double t = static_cast<long double>(static_cast<long long>(n) - 2 * static_cast<long long>(i) - 1);
        x[i] = std::sin(t * pi / static_cast<long double>(2 * n));
    }
    return x;
}

std::vector<double> chebyshev_nodes(std::size_t n)
{
    const auto xl = chebyshev_nodes_ld(n);
    return {xl.begin(), xl.end()};
}

double legendre_eval(std::size_t n, double x)
{
    if (!(std::abs(x) <= 1.0))
        throw std::invalid_argument("legendre_eval: |x| > 1");
    if (n == 0)
        return 1.0;
    double p_prev = 1.0, p = x;
    for (std::size_t k = 1; k < n; ++k)
    {
        const double p_next = RecurrenceCoeffs::A(k) * x * p + RecurrenceCoeffs::C(k) * p_prev;
        p_prev = p;
        p = p_next;
    }
    return p;
}

std::vector<double> legendre_column(std::size_t n_max, double x)
{
    if (!(std::abs(x) <= 1.0))
        throw std::invalid_argument("legendre_column: |x| > 1");
    std::vector<double> p(n_max + 1);
    p[0] = 1.0;
    if (n_max >= 1)
        p[1] = x;
    for (std::size_t k = 1; k < n_max; ++k)
        p[k + 1] = RecurrenceCoeffs::A(k) * x * p[k] + RecurrenceCoeffs::C(k) * p[k - 1];
    return p;
}

double AssociatedPolyTable::eval_Q(std::size_t m, double x) const
{
    return clenshaw(Q.at(m), x);
}

double AssociatedPolyTable::eval_R(std::size_t m, double x) const
{
    return clenshaw(R.at(m), x);
}

AssociatedPolyTable associated_polys(std::size_t l, std::size_t m_max)
{
    if (l < 1)
        throw std::invalid_argument("associated_polys: l must be >= 1");
    AssociatedPolyTable t;
    t.l = l;
    t.Q.resize(m_max + 1);
    t.R.resize(m_max + 1);
    t.Q[0] = {1.0};
    t.R[0] = {0.0};
    std::vector<double> q_prev{0.0}, r_prev{1.0};
    for (std::size_t m = 0; m < m_max; ++m)
    {
        const double a = RecurrenceCoeffs::A(l + m);
        const double c = RecurrenceCoeffs::C(l + m);
        auto step = [&](const std::vector<double>& cur, const std::vector<double>& prev) {
            std::vector<double> next = times_x(cur);
            for (double& v : next)
                v *= a;
            for (std::size_t k = 0; k < prev.size(); ++k)
                next[k] += c * prev[k];
            return next;
        };
        std::vector<double> q_next = step(t.Q[m], q_prev);
        std::vector<double> r_next = step(t.R[m], r_prev);
        q_next.resize(m + 2);
        r_next.resize(std::max<std::size_t>(m + 1, 1));
        q_prev = t.Q[m];
        r_prev = t.R[m];
        t.Q[m + 1] = std::move(q_next);
        t.R[m + 1] = std::move(r_next);
    }
    return t;
}

AssociatedPair associated_values_extended(std::size_t l, std::size_t m_top, const std::vector<long double>& nodes)
{
    return run_values<ddouble>(l, m_top, nodes);
}

AssociatedPair associated_values(std::size_t l, std::size_t m_top, const std::vector<double>& nodes)
{
    return run_values<double>(l, m_top, nodes);
}

QuadratureRule fejer_weights(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("fejer_weights: N must be positive");
    QuadratureRule rule;
    rule.nodes = chebyshev_nodes(n);
    rule.weights.assign(n, 0.0);

    // cos(q pi / (2N)) for q mod 4N; the angle n(2i+1)pi/(2N) is reduced exactly
    const std::size_t period = 4 * n;
    const long double pi = std::numbers::pi_v<long double>;
    std::vector<long double> cos_table(period);
    for (std::size_t q = 0; q < period; ++q)
        cos_table[q] = std::cos(static_cast<long double>(q) * pi / static_cast<long double>(2 * n));

    // alpha_n = int_0^pi cos(n t) sin t dt = (1 + (-1)^n) / (1 - n^2), alpha_1 = 0
    std::vector<long double> coef(n, 0.0L);
    coef[0] = 2.0L;
    for (std::size_t k = 2; k < n; k += 2)
        coef[k] = 2.0L * 2.0L / (1.0L - static_cast<long double>(k) * static_cast<long double>(k));

    for (std::size_t i = 0; i < n; ++i)
    {
        long double acc = 0.0L;
        const std::size_t step = (2 * i + 1) % period;
        std::size_t q = 0;
        for (std::size_t k = 0; k < n; ++k)
        {
            if (k % 2 == 0)
                acc += coef[k] * cos_table[q];
            q += step;
            if (q >= period)
                q -= period;
        }
        rule.weights[i] = static_cast<double>(acc / static_cast<long double>(n));
    }
    return rule;
}

QuadratureRule gauss_legendre(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("gauss_legendre: n must be positive");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const long double pi = std::numbers::pi_v<long double>;
    for (std::size_t i = 0; i < n; ++i)
    {
        long double x = std::cos(pi * (static_cast<long double>(i) + 0.75L) / (static_cast<long double>(n) + 0.5L));
        long double dp = 0.0L;
        for (int it = 0; it < 100; ++it)
        {
            long double p0 = 1.0L, p1 = x;
            for (std::size_t k = 1; k < n; ++k)
            {
                const long double p2 = ((2.0L * k + 1.0L) * x * p1 - static_cast<long double>(k) * p0) / (k + 1.0L);
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<long double>(n) * (x * p1 - p0) / (x * x - 1.0L);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L)
                break;
        }
        rule.nodes[i] = static_cast<double>(x);
        rule.weights[i] = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
    }
    return rule;
}

} // namespace axiscat::orthopoly
