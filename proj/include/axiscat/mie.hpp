#pragma once
// Exact field of a plane wave exp(ikz) scattered by a homogeneous sphere,
// written with the scaled Bessel functions. With x = k a and r = rho / a:
//   interior  u_n = at_n r^n jt_n(n0 x r)
//   exterior  u_n = c_n r^n jt_n(x r) + bt_n (delta_n r^n jt_n(x r) + i yt_n(x r) / r^{n+1})
// where c_n = i^n x^n / (2n-1)!! and delta_n = -x^{2n+1} / ((2n-1)!!^2 (2n+1)).
// The exterior bracket is the scaled outgoing Hankel function, so the
// unscaled scattering coefficient is B_n = -bt_n x^{n+1} / (2n-1)!!.
#include <axiscat/lsoperator.hpp>
#include <axiscat/types.hpp>

#include <functional>
#include <stdexcept>
#include <vector>

namespace axiscat::mie
{
struct MieSolution
{
    double k = 1.0;
    double radius = 1.0;
    double index = 2.0;
    std::vector<cplx> a, b;    // at_n, bt_n
    std::vector<double> delta; // delta_n
    double tail = 0.0;         // size of the last retained mode at the surface
    std::size_t n_max() const { return a.empty() ? 0 : a.size() - 1; }
};

class MieResonanceError : public std::runtime_error
{
public:
    explicit MieResonanceError(std::size_t mode);
    std::size_t mode;
};

/// Default truncation ceil(k r_max) + 40.
std::size_t default_n_max(double k, double r_max);

/// Solves the per-mode 2x2 systems. n_max = 0 selects the default for r_max = 4
/// and then extends until the last mode contributes below 1e-15.
MieSolution mie_solve(double k, std::size_t n_max = 0, double radius = 1.0, double index = 2.0);

/// Relative residual |M s - r| / (|M| |s| + |r|) of mode n's system.
double mode_residual(const MieSolution& sol, std::size_t n);

/// Modal values u_n(rho) and d/drho from the interior or exterior representation,
/// regardless of which side rho lies on.
cplx interior_mode(const MieSolution& sol, std::size_t n, double rho);
cplx exterior_mode(const MieSolution& sol, std::size_t n, double rho);
cplx interior_mode_derivative(const MieSolution& sol, std::size_t n, double rho);
cplx exterior_mode_derivative(const MieSolution& sol, std::size_t n, double rho);

enum class Side
{
    Interior,
    Exterior
};
/// Series for u or du/drho at (rho, cos theta) from one representation.
cplx eval_side(const MieSolution& sol, Side side, double rho, double cos_theta);
cplx eval_side_derivative(const MieSolution& sol, Side side, double rho, double cos_theta);

/// Total field: interior branch for rho <= radius, exterior otherwise.
cplx eval_exact(const MieSolution& sol, double rho, double cos_theta);
/// Scattered part u - u^i for rho >= radius.
cplx eval_scattered(const MieSolution& sol, double rho, double cos_theta);
/// Field of the same sphere centred at z = offset under exp(ik(z - offset)).
cplx eval_shifted(const MieSolution& sol, double offset, double rho, double cos_theta);

struct Sample
{
    double rho;
    double cos_theta;
};
/// Every grid node times the 17 Gauss-Legendre angles.
std::vector<Sample> default_samples(const radial::RadialGrid& grid);

using FieldFunction = std::function<cplx(double rho, double cos_theta)>;
/// max over samples of |approx - exact|.
double field_error(const FieldFunction& approx, const FieldFunction& exact, const std::vector<Sample>& samples);
double field_error(const radial::RadialGrid& grid, const ls::ModalField& approx, const MieSolution& sol,
                   const std::vector<Sample>& samples);
} // namespace axiscat::mie
