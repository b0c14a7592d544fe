#pragma once

// Radial part of the modal operator. For one mode n and density I_n(rho),
//   K_n(a) = -(2n+1) k^3 int_0^R h_n(k rho_>) j_n(k rho_<) I_n(rho) rho^2 drho
// is split into a prefix integral over [0, a], a suffix integral over [a, R]
// and a global term. I_n is interpolated per interval by Chebyshev series,
// and all integrals reduce to moments over the subintervals between
// consecutive breakpoints (interval ends and Chebyshev nodes).

#include <axiscat/types.hpp>

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace axiscat::radial
{

struct RadialGrid
{
    double r_max = 0.0;
    std::size_t n_i = 0; // intervals
    std::size_t n_d = 0; // Chebyshev nodes per interval
    double width = 0.0;
    std::vector<double> nodes; // n_i * n_d, increasing

    std::size_t node_count() const { return nodes.size(); }
    double lower(std::size_t j) const { return width * double(j); }
    double upper(std::size_t j) const { return j + 1 == n_i ? r_max : width * double(j + 1); }
    double node(std::size_t j, std::size_t k) const { return nodes[j * n_d + k]; }

    /// Breakpoint k = 0..n_d+1 of interval j: lower end, the n_d nodes, upper end.
    double breakpoint(std::size_t j, std::size_t k) const
    {
        if (k == 0)
            return lower(j);
        if (k == n_d + 1)
            return upper(j);
        return node(j, k - 1);
    }

    /// Local coordinate of rho in interval j, in [-1, 1].
    double local(std::size_t j, double rho) const
    {
        const double mid = 0.5 * (lower(j) + upper(j));
        return (rho - mid) / (0.5 * (upper(j) - lower(j)));
    }

    std::size_t subinterval_count() const { return n_i * (n_d + 1); }
};

/// Equal intervals of [0, r_max]; node k of each interval is the Chebyshev point
/// mid - half * cos((2k+1) pi / (2 n_d)), so nodes increase with k.
RadialGrid build_grid(double r_max, std::size_t n_i, std::size_t n_d);

/// Per-interval Chebyshev coefficients c_m^j (n_i * n_d values, row j) of the
/// interpolant through samples at grid.nodes.
std::vector<cplx> fit_radial(const RadialGrid& grid, std::span<const cplx> samples);

/// Evaluates the fitted interpolant at rho.
cplx eval_fit(const RadialGrid& grid, std::span<const cplx> coeffs, double rho);

/// Moments over subinterval (j, k) = [b_k, b_{k+1}] of interval j, with T_m in the
/// local coordinate of interval j:
///   alpha = int (rho/b_{k+1})^{n+1} jt_n(k rho) T_m k^2 rho drho
///   beta  = int (b_k/rho)^n        yt_n(k rho) T_m k^2 rho drho
///   gamma = int j_n(k rho)                     T_m rho^2 drho
struct MomentTable
{
    double r_max = 0.0;
    std::size_t n_i = 0, n_d = 0, f = 0;
    double k = 0.0;
    std::vector<double> alpha, beta, gamma;

    std::size_t index(std::size_t j, std::size_t sub, std::size_t n, std::size_t m) const
    {
        return ((j * (n_d + 1) + sub) * (f + 1) + n) * n_d + m;
    }
    std::size_t size() const { return n_i * (n_d + 1) * (f + 1) * n_d; }
};

class MomentConvergenceError : public std::runtime_error
{
public:
    MomentConvergenceError(std::size_t j, std::size_t sub, std::size_t n, std::size_t m);
    std::size_t j, sub, n, m;
};

/// Clenshaw-Curtis moments over one subinterval [a, b] of interval j, all n <= f,
/// m < n_d; doubling until consecutive rules agree to 1e-13 relative.
/// Output layout [n * n_d + m] for each of alpha, beta, gamma.
void subinterval_moments(const RadialGrid& grid, std::size_t j, double a, double b, std::size_t f, double k,
                         std::span<double> alpha, std::span<double> beta, std::span<double> gamma,
                         std::size_t sub_index = 0);

MomentTable precompute_moments(const RadialGrid& grid, std::size_t f, double k);

/// As above, reusing or filling a cache file in `cache_dir`.
MomentTable precompute_moments_cached(const RadialGrid& grid, std::size_t f, double k, const std::string& cache_dir);

std::string moment_cache_filename(double r_max, std::size_t n_i, std::size_t n_d, std::size_t f, double k);
void write_moment_cache(const std::string& path, const MomentTable& table);
std::optional<MomentTable> read_moment_cache(const std::string& path);

/// Node tables shared by every sweep: Bessel values, the global-term factor
/// k^3 (k rho)^n / (2n-1)!! jt_n(k rho), and powers of breakpoint ratios.
class RadialKernel
{
public:
    RadialKernel(RadialGrid grid, std::shared_ptr<const MomentTable> moments);

    const RadialGrid& grid() const { return grid_; }
    const MomentTable& moments() const { return *moments_; }
    std::size_t modes() const { return f_ + 1; }

    /// K_n at every node from fit coefficients c (n_i * n_d values).
    void sweep(std::size_t n, std::span<const cplx> fit, std::span<cplx> k_out) const;

    /// K_n at every node from samples of I_n at the nodes.
    void apply(std::size_t n, std::span<const cplx> samples, std::span<cplx> k_out) const;

private:
    RadialGrid grid_;
    std::shared_ptr<const MomentTable> moments_;
    std::size_t f_;
    std::vector<double> jt_, yt_, global_; // [node * (f+1) + n]
    std::vector<double> ratio_pow_;        // [sub * (f+2) + p] = (b_k/b_{k+1})^p
};

/// Free-function form of RadialKernel::sweep.
std::vector<cplx> radial_sweep(const RadialKernel& kernel, std::size_t n, std::span<const cplx> fit);

} // namespace axiscat::radial
