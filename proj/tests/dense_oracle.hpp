#pragma once
// Dense Lippmann-Schwinger matrix built column by column from adaptive
// quadrature of the modal integral equation, for contrasts of the form
// m(rho, t) = chi(rho) g(t) with chi the indicator of [lo, hi].
//
// Column (i', p) is the field L_{i'}(rho) P_p(t), L the Lagrange basis of the
// radial grid; entry (i, n) is
//   delta + (2n+1) i k^3 / 2 int h_n(k rho_>) j_n(k rho_<) L_{i'} chi rho^2 drho
//            * int P_n P_p g dt.
#include <axiscat/lsoperator.hpp>
#include <axiscat/orthopoly.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle
{
using axiscat::cplx;

struct SeparableContrast
{
    double lo, hi;                  // radial support
    std::function<double(double)> g; // angular factor
    std::vector<double> t_cuts;      // kinks of g
};

inline long double gk(const std::function<long double(long double)>& f, long double a, long double b)
{
    if (!(b > a))
        return 0.0L;
    return boost::math::quadrature::gauss_kronrod<long double, 61>::integrate(f, a, b, 8, 1e-15L);
}

inline long double sph_j(unsigned n, long double x)
{
    return x == 0 ? (n == 0 ? 1.0L : 0.0L) : boost::math::sph_bessel(n, x);
}

inline long double lagrange(const axiscat::radial::RadialGrid& g, std::size_t node, long double rho)
{
    const std::size_t j = node / g.n_d, k = node % g.n_d;
    if (rho < g.lower(j) || rho > g.upper(j))
        return 0.0L;
    const long double y = g.local(j, double(rho));
    long double v = 1.0L;
    for (std::size_t q = 0; q < g.n_d; ++q)
        if (q != k)
        {
            const long double yq = g.local(j, g.node(j, q)), yk = g.local(j, g.node(j, k));
            v *= (y - yq) / (yk - yq);
        }
    return v;
}

/// Row-major matrix over the unknowns [node * modes + n].
inline std::vector<cplx> dense_operator(const axiscat::ls::SolverConfig& cfg, const SeparableContrast& m)
{
    const auto grid = axiscat::radial::build_grid(cfg.r_max, cfg.n_i, cfg.n_d);
    const std::size_t modes = cfg.f + 1, nodes = grid.node_count(), dim = modes * nodes;
    const long double k = cfg.k;

    // angular couplings G[n][p]
    std::vector<double> G(modes * modes);
    std::vector<long double> tc{-1.0L};
    for (double c : m.t_cuts)
        tc.push_back(c);
    tc.push_back(1.0L);
    for (std::size_t n = 0; n < modes; ++n)
        for (std::size_t p = 0; p < modes; ++p)
        {
            long double s = 0.0L;
            for (std::size_t q = 0; q + 1 < tc.size(); ++q)
                s += gk(
                    [&](long double t) {
                        return (long double)(axiscat::orthopoly::legendre_eval(n, double(t)) *
                                             axiscat::orthopoly::legendre_eval(p, double(t)) * m.g(double(t)));
                    },
                    tc[q], tc[q + 1]);
            G[n * modes + p] = double(s);
        }

    std::vector<cplx> A(dim * dim, cplx(0.0));
    for (std::size_t i = 0; i < nodes; ++i)
        for (std::size_t col = 0; col < nodes; ++col)
        {
            const std::size_t j = col / grid.n_d;
            const long double a = grid.nodes[i];
            std::vector<long double> cuts{grid.lower(j), grid.upper(j), m.lo, m.hi, a};
            std::sort(cuts.begin(), cuts.end());
            const long double lo = std::max<long double>(grid.lower(j), m.lo);
            const long double hi = std::min<long double>(grid.upper(j), m.hi);
            for (std::size_t n = 0; n < modes; ++n)
            {
                long double re = 0.0L, im = 0.0L;
                for (std::size_t q = 0; q + 1 < cuts.size(); ++q)
                {
                    const long double u = std::max(cuts[q], lo), v = std::min(cuts[q + 1], hi);
                    if (!(v > u))
                        continue;
                    const bool below = v <= a;
                    auto w = [&](long double rho) { return lagrange(grid, col, rho) * rho * rho; };
                    re += gk(
                        [&](long double rho) {
                            const long double in = below ? rho : a, out = below ? a : rho;
                            return sph_j(unsigned(n), k * out) * sph_j(unsigned(n), k * in) * w(rho);
                        },
                        u, v);
                    im += gk(
                        [&](long double rho) {
                            const long double in = below ? rho : a, out = below ? a : rho;
                            return boost::math::sph_neumann(unsigned(n), k * out) * sph_j(unsigned(n), k * in) * w(rho);
                        },
                        u, v);
                }
                const cplx radial{double(re), double(im)};
                const cplx factor = cplx(0.0, 0.5) * double(2 * n + 1) * double(k * k * k) * radial;
                for (std::size_t p = 0; p < modes; ++p)
                    A[(i * modes + n) * dim + col * modes + p] = factor * G[n * modes + p];
            }
        }
    for (std::size_t d = 0; d < dim; ++d)
        A[d * dim + d] += 1.0;
    return A;
}

/// max |fast - dense| / max |dense| over all columns of the operator.
inline double operator_mismatch(const axiscat::ls::OperatorContext& ctx, const std::vector<cplx>& dense)
{
    const std::size_t dim = ctx.config().modes() * ctx.grid().node_count();
    std::vector<cplx> e(dim), out(dim);
    double diff = 0.0, scale = 0.0;
    for (std::size_t c = 0; c < dim; ++c)
    {
        std::fill(e.begin(), e.end(), cplx(0.0));
        e[c] = 1.0;
        ctx.apply_forward(e, out);
        for (std::size_t r = 0; r < dim; ++r)
        {
            diff = std::max(diff, std::abs(out[r] - dense[r * dim + c]));
            scale = std::max(scale, std::abs(dense[r * dim + c]));
        }
    }
    return diff / scale;
}
} // namespace oracle
