#include <axiscat/radialkernel.hpp>

#include <axiscat/besselmod.hpp>
#include <axiscat/fct.hpp>
#include <axiscat/orthopoly.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>

namespace axiscat::radial
{

namespace
{
constexpr double kMomentTolerance = 1e-13;
constexpr unsigned kMinLevel = 4;
constexpr unsigned kMaxLevel = 14;
// moments this small only reach the kernel multiplied by factors below one; subnormal noise is ignored
constexpr double kMomentFloor = 1e-280;

struct CcRule
{
    std::vector<double> x, w; // on [-1, 1], x_i = cos(i pi / N)
};

// Clenshaw-Curtis rule with 2^level + 1 points (Waldvogel's closed form)
const CcRule& cc_rule(unsigned level)
{
    static std::mutex mutex;
    static std::map<unsigned, CcRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(level);
    if (it != cache.end())
        return it->second;

    const std::size_t n = std::size_t{1} << level;
    const long double pi = std::numbers::pi_v<long double>;
    CcRule r;
    r.x.resize(n + 1);
    r.w.resize(n + 1);
    std::vector<long double> cos_table(2 * n);
    for (std::size_t q = 0; q < 2 * n; ++q)
        cos_table[q] = std::cos(static_cast<long double>(q) * pi / static_cast<long double>(n));
    for (std::size_t i = 0; i <= n; ++i)
    {
        r.x[i] = static_cast<double>(cos_table[i]);
        long double s = 1.0L;
        for (std::size_t j = 1; j <= n / 2; ++j)
        {
            const long double b = (2 * j == n) ? 1.0L : 2.0L;
            s -= b / (4.0L * j * j - 1.0L) * cos_table[(2 * j * i) % (2 * n)];
        }
        const long double c = (i == 0 || i == n) ? 1.0L : 2.0L;
        r.w[i] = static_cast<double>(c * s / static_cast<long double>(n));
    }
    return cache.emplace(level, std::move(r)).first->second;
}

// alpha/beta/gamma with one rule; out[kind][n * n_d + m]
void integrate_level(const RadialGrid& grid, std::size_t j, double a, double b, std::size_t f, double k, const CcRule& rule,
                     std::vector<double>& al, std::vector<double>& be, std::vector<double>& ga)
{
    const std::size_t nd = grid.n_d;
    al.assign((f + 1) * nd, 0.0);
    be.assign((f + 1) * nd, 0.0);
    ga.assign((f + 1) * nd, 0.0);
    std::vector<double> tm(nd);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t q = 0; q < rule.x.size(); ++q)
    {
        const double rho = mid + half * rule.x[q];
        const double wq = rule.w[q] * half;
        if (wq == 0.0)
            continue;
        const double x = k * rho;
        const auto jt = bessel::jtilde_column(f, x);
        const auto yt = bessel::ytilde_column(f, x);
        const auto js = bessel::j_scale_column(f, x);

        const double y = grid.local(j, rho);
        tm[0] = 1.0;
        if (nd > 1)
            tm[1] = y;
        for (std::size_t m = 2; m < nd; ++m)
            tm[m] = 2.0 * y * tm[m - 1] - tm[m - 2];

        const long double up = static_cast<long double>(rho) / b; // (rho/b)
        const long double down = rho > 0.0 ? static_cast<long double>(a) / rho : 0.0L;
        long double p_up = up;     // (rho/b)^{n+1}
        long double p_down = 1.0L; // (a/rho)^n
        const double k2rho = k * k * rho * wq;
        const double rho2 = rho * rho * wq;
        for (std::size_t n = 0; n <= f; ++n)
        {
            const double fa = static_cast<double>(p_up) * jt[n] * k2rho;
            const double fb = static_cast<double>(p_down) * yt[n] * k2rho;
            const double fg = js[n] * jt[n] * rho2;
            double* pa = &al[n * nd];
            double* pb = &be[n * nd];
            double* pg = &ga[n * nd];
            for (std::size_t m = 0; m < nd; ++m)
            {
                pa[m] += fa * tm[m];
                pb[m] += fb * tm[m];
                pg[m] += fg * tm[m];
            }
            p_up *= up;
            p_down *= down;
        }
    }
}

// first (n, m) whose change exceeds the tolerance, or -1
long first_unconverged(const std::vector<double>& prev, const std::vector<double>& cur, std::size_t f, std::size_t nd)
{
    for (std::size_t n = 0; n <= f; ++n)
    {
        double scale = kMomentFloor;
        for (std::size_t m = 0; m < nd; ++m)
            scale = std::max(scale, std::abs(cur[n * nd + m]));
        for (std::size_t m = 0; m < nd; ++m)
            if (std::abs(cur[n * nd + m] - prev[n * nd + m]) > kMomentTolerance * scale)
                return static_cast<long>(n * nd + m);
    }
    return -1;
}
} // namespace

RadialGrid build_grid(double r_max, std::size_t n_i, std::size_t n_d)
{
    if (n_i == 0 || n_d == 0)
        throw std::invalid_argument("build_grid: interval and node counts must be positive");
    if (!(r_max > 0.0))
        throw std::invalid_argument("build_grid: r_max must be positive");
    RadialGrid g;
    g.r_max = r_max;
    g.n_i = n_i;
    g.n_d = n_d;
    g.width = r_max / double(n_i);
    const auto x = orthopoly::chebyshev_nodes(n_d);
    g.nodes.resize(n_i * n_d);
    for (std::size_t j = 0; j < n_i; ++j)
    {
        const double lo = g.lower(j), hi = g.upper(j);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t k = 0; k < n_d; ++k)
            g.nodes[j * n_d + k] = mid - half * x[k];
    }
    return g;
}

std::vector<cplx> fit_radial(const RadialGrid& grid, std::span<const cplx> samples)
{
    if (samples.size() != grid.node_count())
        throw std::invalid_argument("fit_radial: sample count does not match the grid");
    const std::size_t nd = grid.n_d;
    const auto tr = fct::transform_for(nd);
    std::vector<cplx> out(samples.size());
    std::vector<cplx> rev(nd);
    for (std::size_t j = 0; j < grid.n_i; ++j)
    {
        // node k of the interval sits at Chebyshev index nd-1-k
        for (std::size_t k = 0; k < nd; ++k)
            rev[nd - 1 - k] = samples[j * nd + k];
        tr->analyze(rev, std::span<cplx>(out).subspan(j * nd, nd));
    }
    return out;
}

cplx eval_fit(const RadialGrid& grid, std::span<const cplx> coeffs, double rho)
{
    if (rho < 0.0 || rho > grid.r_max)
        return 0.0;
    std::size_t j = std::min(grid.n_i - 1, static_cast<std::size_t>(rho / grid.width));
    fct::ChebSeries s;
    s.coeffs.assign(coeffs.begin() + static_cast<std::ptrdiff_t>(j * grid.n_d),
                    coeffs.begin() + static_cast<std::ptrdiff_t>((j + 1) * grid.n_d));
    return fct::evaluate(s, std::clamp(grid.local(j, rho), -1.0, 1.0));
}

MomentConvergenceError::MomentConvergenceError(std::size_t j_, std::size_t sub_, std::size_t n_, std::size_t m_)
    : std::runtime_error("moment quadrature did not converge at interval " + std::to_string(j_) + ", subinterval " +
                         std::to_string(sub_) + ", mode " + std::to_string(n_) + ", degree " + std::to_string(m_)),
      j(j_), sub(sub_), n(n_), m(m_)
{
}

void subinterval_moments(const RadialGrid& grid, std::size_t j, double a, double b, std::size_t f, double k,
                         std::span<double> alpha, std::span<double> beta, std::span<double> gamma, std::size_t sub_index)
{
    const std::size_t nd = grid.n_d;
    const std::size_t count = (f + 1) * nd;
    if (alpha.size() != count || beta.size() != count || gamma.size() != count)
        throw std::invalid_argument("subinterval_moments: output size mismatch");
    if (!(b > a))
    {
        std::fill(alpha.begin(), alpha.end(), 0.0);
        std::fill(beta.begin(), beta.end(), 0.0);
        std::fill(gamma.begin(), gamma.end(), 0.0);
        return;
    }

    // the power weights span (f+1) ln(b/a) in exponent; oscillation adds k(b-a)
    double estimate = 16.0 + 2.0 * k * (b - a);
    estimate += a > 0.0 ? 0.5 * double(f + 1) * std::log(b / a) : double(f) + 24.0;
    estimate = std::min(estimate, double(f) + 40.0 + 2.0 * k * (b - a));
    unsigned level = kMinLevel;
    while (level < kMaxLevel && double(std::size_t{1} << level) < estimate)
        ++level;

    std::vector<double> a0, b0, g0, a1, b1, g1;
    integrate_level(grid, j, a, b, f, k, cc_rule(level), a0, b0, g0);
    for (;;)
    {
        if (level == kMaxLevel)
        {
            // report the first offender of the last comparison
            long bad = first_unconverged(a0, a1, f, nd);
            if (bad < 0)
                bad = first_unconverged(b0, b1, f, nd);
            if (bad < 0)
                bad = first_unconverged(g0, g1, f, nd);
            const std::size_t idx = bad < 0 ? 0 : static_cast<std::size_t>(bad);
            throw MomentConvergenceError(j, sub_index, idx / nd, idx % nd);
        }
        ++level;
        integrate_level(grid, j, a, b, f, k, cc_rule(level), a1, b1, g1);
        if (first_unconverged(a0, a1, f, nd) < 0 && first_unconverged(b0, b1, f, nd) < 0 && first_unconverged(g0, g1, f, nd) < 0)
            break;
        a0.swap(a1);
        b0.swap(b1);
        g0.swap(g1);
    }
    std::copy(a1.begin(), a1.end(), alpha.begin());
    std::copy(b1.begin(), b1.end(), beta.begin());
    std::copy(g1.begin(), g1.end(), gamma.begin());
}

MomentTable precompute_moments(const RadialGrid& grid, std::size_t f, double k)
{
    if (!(k > 0.0))
        throw std::invalid_argument("precompute_moments: wavenumber must be positive");
    MomentTable t;
    t.r_max = grid.r_max;
    t.n_i = grid.n_i;
    t.n_d = grid.n_d;
    t.f = f;
    t.k = k;
    t.alpha.assign(t.size(), 0.0);
    t.beta.assign(t.size(), 0.0);
    t.gamma.assign(t.size(), 0.0);

    const std::size_t subs = grid.subinterval_count();
    const std::size_t block = (f + 1) * grid.n_d;
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t s = 0; s < subs; ++s)
    {
        const std::size_t j = s / (grid.n_d + 1), sub = s % (grid.n_d + 1);
        try
        {
            subinterval_moments(grid, j, grid.breakpoint(j, sub), grid.breakpoint(j, sub + 1), f, k,
                                std::span<double>(t.alpha).subspan(s * block, block),
                                std::span<double>(t.beta).subspan(s * block, block),
                                std::span<double>(t.gamma).subspan(s * block, block), sub);
        }
        catch (...)
        {
#pragma omp critical
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return t;
}

RadialKernel::RadialKernel(RadialGrid grid, std::shared_ptr<const MomentTable> moments)
    : grid_(std::move(grid)), moments_(std::move(moments))
{
    if (!moments_ || moments_->n_i != grid_.n_i || moments_->n_d != grid_.n_d || moments_->r_max != grid_.r_max)
        throw std::invalid_argument("RadialKernel: moment table does not match the grid");
    f_ = moments_->f;
    const double k = moments_->k;
    const std::size_t f1 = f_ + 1;
    const std::size_t nodes = grid_.node_count();
    jt_.resize(nodes * f1);
    yt_.resize(nodes * f1);
    global_.resize(nodes * f1);
    for (std::size_t i = 0; i < nodes; ++i)
    {
        const double x = k * grid_.nodes[i];
        const auto jt = bessel::jtilde_column(f_, x);
        const auto yt = bessel::ytilde_column(f_, x);
        long double g = 1.0L; // x^n / (2n-1)!!
        for (std::size_t n = 0; n <= f_; ++n)
        {
            if (n > 0)
                g *= static_cast<long double>(x) / static_cast<long double>(2 * n - 1);
            jt_[i * f1 + n] = jt[n];
            yt_[i * f1 + n] = yt[n];
            global_[i * f1 + n] = k * k * k * static_cast<double>(g) * jt[n];
        }
    }

    const std::size_t subs = grid_.subinterval_count();
    ratio_pow_.resize(subs * (f_ + 2));
    for (std::size_t s = 0; s < subs; ++s)
    {
        const std::size_t j = s / (grid_.n_d + 1), sub = s % (grid_.n_d + 1);
        const double a = grid_.breakpoint(j, sub), b = grid_.breakpoint(j, sub + 1);
        const long double r = b > 0.0 ? static_cast<long double>(a) / b : 0.0L;
        long double p = 1.0L;
        for (std::size_t q = 0; q <= f_ + 1; ++q)
        {
            ratio_pow_[s * (f_ + 2) + q] = static_cast<double>(p);
            p *= r;
        }
    }
}

void RadialKernel::sweep(std::size_t n, std::span<const cplx> fit, std::span<cplx> k_out) const
{
    const std::size_t nd = grid_.n_d, ni = grid_.n_i;
    if (n > f_ || fit.size() != ni * nd || k_out.size() != ni * nd)
        throw std::invalid_argument("RadialKernel::sweep: size mismatch");
    const MomentTable& mt = *moments_;
    const std::size_t f1 = f_ + 1, stride = f_ + 2;

    thread_local std::vector<cplx> s_val;
    s_val.resize(ni * nd);

    // prefix: S(b_{t+1}) = (b_t/b_{t+1})^{n+1} S(b_t) + mu_t, plus the global sum
    cplx s = 0.0, aleph = 0.0;
    for (std::size_t j = 0; j < ni; ++j)
    {
        const cplx* c = &fit[j * nd];
        for (std::size_t sub = 0; sub <= nd; ++sub)
        {
            const std::size_t t = j * (nd + 1) + sub;
            const std::size_t base = mt.index(j, sub, n, 0);
            cplx mu = 0.0, xi = 0.0;
            for (std::size_t m = 0; m < nd; ++m)
            {
                mu += c[m] * mt.alpha[base + m];
                xi += c[m] * mt.gamma[base + m];
            }
            aleph += xi;
            s = ratio_pow_[t * stride + n + 1] * s + mu;
            if (sub < nd)
                s_val[j * nd + sub] = s;
        }
    }

    // suffix: Q(b_t) = (b_t/b_{t+1})^n Q(b_{t+1}) + zeta_t
    cplx q = 0.0;
    for (std::size_t j = ni; j-- > 0;)
    {
        const cplx* c = &fit[j * nd];
        for (std::size_t sub = nd + 1; sub-- > 0;)
        {
            const std::size_t t = j * (nd + 1) + sub;
            const std::size_t base = mt.index(j, sub, n, 0);
            cplx zeta = 0.0;
            for (std::size_t m = 0; m < nd; ++m)
                zeta += c[m] * mt.beta[base + m];
            q = ratio_pow_[t * stride + n] * q + zeta;
            if (sub >= 1)
            {
                const std::size_t node = j * nd + sub - 1;
                const std::size_t at = node * f1 + n;
                k_out[node] = cplx(0.0, 1.0) * (yt_[at] * s_val[node] + jt_[at] * q) - global_[at] * aleph;
            }
        }
    }
}

void RadialKernel::apply(std::size_t n, std::span<const cplx> samples, std::span<cplx> k_out) const
{
    const auto fit = fit_radial(grid_, samples);
    sweep(n, fit, k_out);
}

std::vector<cplx> radial_sweep(const RadialKernel& kernel, std::size_t n, std::span<const cplx> fit)
{
    std::vector<cplx> out(kernel.grid().node_count());
    kernel.sweep(n, fit, out);
    return out;
}

} // namespace axiscat::radial
