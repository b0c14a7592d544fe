#include <axiscat/flt.hpp>

#include <axiscat/ddouble.hpp>
#include <axiscat/fct.hpp>
#include <axiscat/orthopoly.hpp>

#include <algorithm>
#include <stdexcept>

namespace axiscat::flt
{

namespace
{
struct ddcplx
{
    ddouble re, im;
};

// P_0..P_{n-1} at every node, row-major [i * n + m]
template <class Fn>
void for_each_legendre_row(std::size_t m_count, std::size_t n_nodes, Precision precision, Fn&& fn)
{
    std::vector<double> row(m_count);
    std::vector<ddouble> row_dd(m_count);
    if (precision == Precision::Extended)
    {
        const auto x = orthopoly::chebyshev_nodes_ld(n_nodes);
        for (std::size_t i = 0; i < n_nodes; ++i)
        {
            const ddouble xi = ddouble::from(x[i]);
            row_dd[0] = ddouble(1.0);
            if (m_count > 1)
                row_dd[1] = xi;
            for (std::size_t k = 1; k + 1 < m_count; ++k)
                row_dd[k + 1] = orthopoly::RecurrenceCoeffs::A_dd(k) * xi * row_dd[k] +
                                orthopoly::RecurrenceCoeffs::C_dd(k) * row_dd[k - 1];
            fn(i, std::span<const double>{}, std::span<const ddouble>(row_dd));
        }
        return;
    }
    const auto x = orthopoly::chebyshev_nodes(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i)
    {
        row = orthopoly::legendre_column(m_count - 1, x[i]);
        fn(i, std::span<const double>(row), std::span<const ddouble>{});
    }
}

void check_size(std::size_t n, const char* what)
{
    if (n == 0)
        throw std::invalid_argument(std::string(what) + ": empty input");
}

// (x b)_k for k < out.size(): x T_0 = T_1, x T_k = (T_{k-1} + T_{k+1}) / 2
void times_x_truncated(std::span<const cplx> b, std::span<cplx> out)
{
    const std::size_t nb = b.size();
    auto at = [&](std::size_t k) { return k < nb ? b[k] : cplx(0.0); };
    for (std::size_t k = 0; k < out.size(); ++k)
    {
        if (k == 0)
            out[0] = 0.5 * at(1);
        else if (k == 1)
            out[1] = at(0) + 0.5 * at(2);
        else
            out[k] = 0.5 * (at(k - 1) + at(k + 1));
    }
}
} // namespace

std::vector<cplx> dlt(std::span<const cplx> samples, Precision precision)
{
    check_size(samples.size(), "dlt");
    if (samples.size() % 2 != 0)
        throw std::invalid_argument("dlt: sample count must be even");
    const std::size_t m_nodes = samples.size();
    const std::size_t n = m_nodes / 2;
    const auto w = orthopoly::fejer_weights(m_nodes).weights;

    std::vector<cplx> out(n, cplx(0.0));
    std::vector<ddcplx> acc(n);
    for_each_legendre_row(n, m_nodes, precision,
                          [&](std::size_t i, std::span<const double> p, std::span<const ddouble> p_dd) {
                              const cplx fw = samples[i] * w[i];
                              if (precision == Precision::Extended)
                              {
                                  for (std::size_t m = 0; m < n; ++m)
                                  {
                                      acc[m].re += p_dd[m] * ddouble(fw.real());
                                      acc[m].im += p_dd[m] * ddouble(fw.imag());
                                  }
                              }
                              else
                              {
                                  for (std::size_t m = 0; m < n; ++m)
                                      out[m] += p[m] * fw;
                              }
                          });
    for (std::size_t m = 0; m < n; ++m)
    {
        if (precision == Precision::Extended)
            out[m] = {static_cast<double>(acc[m].re), static_cast<double>(acc[m].im)};
        out[m] *= 0.5 * double(2 * m + 1);
    }
    return out;
}

std::vector<cplx> idlt(std::span<const cplx> coeffs, Precision precision)
{
    check_size(coeffs.size(), "idlt");
    const std::size_t n = coeffs.size();
    std::vector<cplx> out(2 * n, cplx(0.0));
    for_each_legendre_row(n, 2 * n, precision,
                          [&](std::size_t i, std::span<const double> p, std::span<const ddouble> p_dd) {
                              if (precision == Precision::Extended)
                              {
                                  ddcplx acc;
                                  for (std::size_t m = 0; m < n; ++m)
                                  {
                                      acc.re += p_dd[m] * ddouble(coeffs[m].real());
                                      acc.im += p_dd[m] * ddouble(coeffs[m].imag());
                                  }
                                  out[i] = {static_cast<double>(acc.re), static_cast<double>(acc.im)};
                              }
                              else
                              {
                                  cplx acc = 0.0;
                                  for (std::size_t m = 0; m < n; ++m)
                                      acc += p[m] * coeffs[m];
                                  out[i] = acc;
                              }
                          });
    return out;
}

FltPlan::FltPlan(std::size_t n, Precision precision) : n_(n), precision_(precision)
{
    if (!is_power_of_two(n))
        throw std::invalid_argument("FltPlan: size must be a power of two");

    const std::size_t m_nodes = 2 * n;
    const auto rule = orthopoly::fejer_weights(m_nodes);
    scaled_weights_.resize(m_nodes);
    for (std::size_t i = 0; i < m_nodes; ++i)
        scaled_weights_[i] = double(m_nodes) * rule.weights[i];
    inv_tau_.resize(n);
    for (std::size_t m = 0; m < n; ++m)
        inv_tau_[m] = 0.5 * double(2 * m + 1);

    for (std::size_t L = n; L >= 4; L /= 2)
    {
        const std::size_t K = L / 2;
        Level level;
        level.block = L;
        level.table.resize((n / L) * 4 * L);
        const auto nodes_ld = orthopoly::chebyshev_nodes_ld(L);
        const auto nodes = orthopoly::chebyshev_nodes(L);
        for (std::size_t s = 0; s < n; s += L)
        {
            const auto vals = precision == Precision::Extended
                                  ? orthopoly::associated_values_extended(s + 1, K, nodes_ld)
                                  : orthopoly::associated_values(s + 1, K, nodes);
            double* base = &level.table[(s / L) * 4 * L];
            std::copy(vals.Q_prev.begin(), vals.Q_prev.end(), base);
            std::copy(vals.Q_top.begin(), vals.Q_top.end(), base + L);
            std::copy(vals.R_prev.begin(), vals.R_prev.end(), base + 2 * L);
            std::copy(vals.R_top.begin(), vals.R_top.end(), base + 3 * L);
        }
        levels_.push_back(std::move(level));
    }
}

void FltPlan::forward(std::span<const cplx> samples, std::span<cplx> coeffs) const
{
    const std::size_t n = n_;
    const std::size_t m_nodes = 2 * n;
    if (samples.size() != m_nodes || coeffs.size() != n)
        throw std::invalid_argument("FltPlan::forward: size mismatch");

    thread_local std::vector<cplx> g, b, z, z_next, t0, t1, acc;
    g.resize(m_nodes);
    b.resize(m_nodes);
    for (std::size_t i = 0; i < m_nodes; ++i)
        g[i] = scaled_weights_[i] * samples[i];
    fct::transform_for(m_nodes)->analyze(g, b);

    if (n == 1)
    {
        coeffs[0] = b[0] * inv_tau_[0];
        return;
    }

    // level-N block: Z_0 = trunc_N(b), Z_1 = trunc_N(x b)
    z.resize(m_nodes);
    z_next.resize(m_nodes);
    std::copy(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(n), z.begin());
    times_x_truncated(b, std::span<cplx>(z).subspan(n, n));

    for (const Level& level : levels_)
    {
        const std::size_t L = level.block;
        const std::size_t K = L / 2;
        const auto tr = fct::transform_for(L);
        t0.resize(L);
        t1.resize(L);
        acc.resize(L);
        for (std::size_t s = 0; s < n; s += L)
        {
            const cplx* zs = &z[2 * s];
            const cplx* zs1 = zs + L;
            const double* tab = &level.table[(s / L) * 4 * L];
            cplx* lo = &z_next[2 * s];
            cplx* hi = &z_next[2 * s + 2 * K];

            std::copy(zs, zs + K, lo);
            std::copy(zs1, zs1 + K, lo + K);

            tr->synthesize(std::span<const cplx>(zs, L), t0);
            tr->synthesize(std::span<const cplx>(zs1, L), t1);
            for (int which = 0; which < 2; ++which)
            {
                const double* q = tab + which * L;
                const double* r = tab + (2 + which) * L;
                for (std::size_t i = 0; i < L; ++i)
                    acc[i] = q[i] * t1[i] + r[i] * t0[i];
                tr->analyze(acc, acc);
                std::copy(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(K), hi + which * K);
            }
        }
        std::swap(z, z_next);
    }

    // blocks of length 2: (Z_s, Z_{s+1}), y = leading coefficient
    for (std::size_t s = 0; s < n; s += 2)
    {
        coeffs[s] = z[2 * s] * inv_tau_[s];
        coeffs[s + 1] = z[2 * s + 2] * inv_tau_[s + 1];
    }
}

void FltPlan::inverse(std::span<const cplx> coeffs, std::span<cplx> samples) const
{
    const std::size_t n = n_;
    const std::size_t m_nodes = 2 * n;
    if (samples.size() != m_nodes || coeffs.size() != n)
        throw std::invalid_argument("FltPlan::inverse: size mismatch");

    thread_local std::vector<cplx> b, z, z_next, u0, u1, acc, v;
    b.assign(m_nodes, cplx(0.0));

    if (n == 1)
    {
        b[0] = coeffs[0];
    }
    else
    {
        z.assign(m_nodes, cplx(0.0));
        z_next.resize(m_nodes);
        for (std::size_t s = 0; s < n; s += 2)
        {
            z[2 * s] = coeffs[s];
            z[2 * s + 2] = coeffs[s + 1];
        }

        for (auto it = levels_.rbegin(); it != levels_.rend(); ++it)
        {
            const Level& level = *it;
            const std::size_t L = level.block;
            const std::size_t K = L / 2;
            const auto tr = fct::transform_for(L);
            u0.resize(L);
            u1.resize(L);
            acc.resize(L);
            v.resize(L);
            const double inv_l = 1.0 / double(L);
            for (std::size_t s = 0; s < n; s += L)
            {
                const double* tab = &level.table[(s / L) * 4 * L];
                const cplx* lo = &z[2 * s];
                const cplx* hi = &z[2 * s + 2 * K];
                cplx* zs = &z_next[2 * s];
                cplx* zs1 = zs + L;

                // transpose of analyze-then-truncate: synthesize eps/L weighted, zero-padded input
                for (int which = 0; which < 2; ++which)
                {
                    std::fill(v.begin(), v.end(), cplx(0.0));
                    for (std::size_t k = 0; k < K; ++k)
                        v[k] = hi[which * K + k] * ((k == 0 ? 1.0 : 2.0) * inv_l);
                    tr->synthesize(v, which == 0 ? u0 : u1);
                }
                // transpose of synthesize is analysis rescaled by L/eps
                for (int target = 0; target < 2; ++target)
                {
                    const double* c_prev = tab + (target == 0 ? 2 : 0) * L;
                    const double* c_top = c_prev + L;
                    for (std::size_t i = 0; i < L; ++i)
                        acc[i] = c_prev[i] * u0[i] + c_top[i] * u1[i];
                    tr->analyze(acc, acc);
                    cplx* dst = target == 0 ? zs : zs1;
                    const cplx* pad = lo + target * K;
                    for (std::size_t k = 0; k < L; ++k)
                    {
                        const cplx back = acc[k] * (double(L) / (k == 0 ? 1.0 : 2.0));
                        dst[k] = back + (k < K ? pad[k] : cplx(0.0));
                    }
                }
            }
            std::swap(z, z_next);
        }

        // transpose of (Z_0, Z_1) = (trunc_N b, trunc_N x b)
        const cplx* z0 = &z[0];
        const cplx* z1 = &z[n];
        auto v1 = [&](std::size_t k) { return k < n ? z1[k] : cplx(0.0); };
        for (std::size_t j = 0; j < m_nodes; ++j)
        {
            cplx val = j < n ? z0[j] : cplx(0.0);
            if (j == 0)
                val += v1(1);
            else
                val += 0.5 * (v1(j - 1) + v1(j + 1));
            b[j] = val;
        }
    }

    // samples = 2N * analyze^T(b) = synthesize(eps * b)
    for (std::size_t k = 1; k < m_nodes; ++k)
        b[k] *= 2.0;
    fct::transform_for(m_nodes)->synthesize(b, samples);
}

std::vector<cplx> flt(const FltPlan& plan, std::span<const cplx> samples)
{
    std::vector<cplx> out(plan.size());
    plan.forward(samples, out);
    return out;
}

std::vector<cplx> iflt(const FltPlan& plan, std::span<const cplx> coeffs)
{
    std::vector<cplx> out(plan.sample_count());
    plan.inverse(coeffs, out);
    return out;
}

} // namespace axiscat::flt
