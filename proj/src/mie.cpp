#include <axiscat/mie.hpp>

#include <axiscat/besselmod.hpp>
#include <axiscat/orthopoly.hpp>

#include <cmath>
#include <string>

namespace axiscat::mie
{

namespace
{
const cplx kI(0.0, 1.0);

cplx i_pow(std::size_t n)
{
    switch (n % 4)
    {
    case 0:
        return 1.0;
    case 1:
        return kI;
    case 2:
        return -1.0;
    default:
        return -kI;
    }
}

struct ModeSystem
{
    cplx m[2][2];
    cplx r[2];
};

// system for (at_n, bt_n) / c_n at the surface
ModeSystem build_system(std::size_t n, double x, double index, const std::vector<double>& jx, const std::vector<double>& djx,
                        const std::vector<double>& jz, const std::vector<double>& djz, const std::vector<double>& yx,
                        const std::vector<double>& dyx, double delta)
{
    const double z = index * x, dn = double(n);
    ModeSystem s;
    s.m[0][0] = jz[n];
    s.m[0][1] = -(delta * jx[n] + kI * yx[n]);
    s.m[1][0] = dn * jz[n] + z * djz[n];
    s.m[1][1] = -(delta * (dn * jx[n] + x * djx[n]) + kI * (-(dn + 1.0) * yx[n] + x * dyx[n]));
    s.r[0] = jx[n];
    s.r[1] = dn * jx[n] + x * djx[n];
    return s;
}

} // namespace

MieResonanceError::MieResonanceError(std::size_t n)
    : std::runtime_error("Mie system is singular at mode " + std::to_string(n)), mode(n)
{
}

std::size_t default_n_max(double k, double r_max)
{
    return static_cast<std::size_t>(std::ceil(k * r_max)) + 40;
}

MieSolution mie_solve(double k, std::size_t n_max, double radius, double index)
{
    if (!(k > 0.0) || !(radius > 0.0) || !(index > 0.0))
        throw std::invalid_argument("mie_solve: k, radius and index must be positive");
    const bool automatic = n_max == 0;
    if (automatic)
        n_max = default_n_max(k, 4.0);
    for (;;)
    {
        MieSolution sol;
        sol.k = k;
        sol.radius = radius;
        sol.index = index;
        const double x = k * radius;
        const auto jx = bessel::jtilde_column(n_max + 1, x);
        const auto jz = bessel::jtilde_column(n_max + 1, index * x);
        const auto yx = bessel::ytilde_column(n_max, x);
        const auto djx = bessel::jtilde_derivative(jx, x);
        const auto djz = bessel::jtilde_derivative(jz, index * x);
        const auto dyx = bessel::ytilde_derivative(yx, x);
        sol.a.resize(n_max + 1);
        sol.b.resize(n_max + 1);
        sol.delta.resize(n_max + 1);

        long double c_mag = 1.0L; // x^n / (2n-1)!!
        long double x2n1 = x;     // x^{2n+1} / (2n-1)!!^2
        for (std::size_t n = 0; n <= n_max; ++n)
        {
            if (n > 0)
            {
                const long double f = static_cast<long double>(2 * n - 1);
                c_mag *= x / f;
                x2n1 *= static_cast<long double>(x) * x / (f * f);
            }
            sol.delta[n] = static_cast<double>(-x2n1 / static_cast<long double>(2 * n + 1));
            const ModeSystem s = build_system(n, x, index, jx, djx, jz, djz, yx, dyx, sol.delta[n]);
            const cplx det = s.m[0][0] * s.m[1][1] - s.m[0][1] * s.m[1][0];
            const double scale = (std::abs(s.m[0][0]) + std::abs(s.m[0][1])) * (std::abs(s.m[1][0]) + std::abs(s.m[1][1]));
            if (!(std::abs(det) > 1e-14 * scale))
                throw MieResonanceError(n);
            const cplx a = (s.r[0] * s.m[1][1] - s.m[0][1] * s.r[1]) / det;
            const cplx b = (s.m[0][0] * s.r[1] - s.m[1][0] * s.r[0]) / det;
            const cplx c = i_pow(n) * static_cast<double>(c_mag);
            sol.a[n] = c * a;
            sol.b[n] = c * b;
        }
        // the last mode at the surface: interior value and scattered value
        sol.tail = std::max(std::abs(sol.a[n_max] * jz[n_max]), std::abs(sol.b[n_max] * yx[n_max]));
        if (!automatic || sol.tail < 1e-15 || n_max > 4000)
            return sol;
        n_max += 10;
    }
}

double mode_residual(const MieSolution& sol, std::size_t n)
{
    const double x = sol.k * sol.radius;
    const std::size_t top = sol.n_max();
    const auto jx = bessel::jtilde_column(top + 1, x);
    const auto jz = bessel::jtilde_column(top + 1, sol.index * x);
    const auto yx = bessel::ytilde_column(top, x);
    const auto s = build_system(n, x, sol.index, jx, bessel::jtilde_derivative(jx, x), jz,
                                bessel::jtilde_derivative(jz, sol.index * x), yx, bessel::ytilde_derivative(yx, x),
                                sol.delta[n]);
    // the stored coefficients carry c_n; compare in those units
    const cplx c = i_pow(n) * std::pow(x, double(n)) / [&] {
        double d = 1.0;
        for (std::size_t q = 1; q <= n; ++q)
            d *= double(2 * q - 1);
        return d;
    }();
    double worst = 0.0;
    for (int row = 0; row < 2; ++row)
    {
        const cplx lhs = s.m[row][0] * sol.a[n] + s.m[row][1] * sol.b[n];
        const cplx rhs = c * s.r[row];
        const double scale = std::abs(s.m[row][0] * sol.a[n]) + std::abs(s.m[row][1] * sol.b[n]) + std::abs(rhs);
        if (scale > 0.0)
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

cplx interior_mode(const MieSolution& sol, std::size_t n, double rho)
{
    const double r = rho / sol.radius, z = sol.index * sol.k * rho;
    const auto jz = bessel::jtilde_column(n, z);
    return sol.a.at(n) * static_cast<double>(std::pow(static_cast<long double>(r), static_cast<long double>(n))) * jz[n];
}

cplx interior_mode_derivative(const MieSolution& sol, std::size_t n, double rho)
{
    const double r = rho / sol.radius, z = sol.index * sol.k * rho;
    const auto jz = bessel::jtilde_column(n + 1, z);
    const auto djz = bessel::jtilde_derivative(jz, z);
    const long double rn = std::pow(static_cast<long double>(r), static_cast<long double>(n));
    const long double rn1 = n == 0 ? 0.0L : std::pow(static_cast<long double>(r), static_cast<long double>(n) - 1);
    const double d = static_cast<double>(n * rn1 * jz[n] + rn * (sol.index * sol.k * sol.radius) * djz[n]);
    return sol.a.at(n) * d / sol.radius;
}

namespace
{
// exterior pieces in long double: incident, delta r^n jt and yt / r^{n+1}
struct ExteriorParts
{
    std::complex<long double> incident, regular, outgoing;
};

ExteriorParts exterior_parts(const MieSolution& sol, std::size_t n, double rho, bool derivative)
{
    const double x = sol.k * sol.radius, xr = sol.k * rho;
    const long double r = static_cast<long double>(rho) / sol.radius;
    const auto jt = bessel::jtilde_column(n + 1, xr);
    const auto yt = bessel::ytilde_column(n, xr);
    const long double dn = static_cast<long double>(n);
    const long double rn = std::pow(r, dn);
    const long double rn1 = n == 0 ? 0.0L : std::pow(r, dn - 1);
    const long double rin = std::pow(r, -(dn + 1));
    long double jpart = rn * jt[n];
    long double ypart = rin * yt[n];
    if (derivative)
    {
        const auto djt = bessel::jtilde_derivative(jt, xr);
        const auto dyt = bessel::ytilde_derivative(yt, xr);
        jpart = (dn * rn1 * jt[n] + rn * x * djt[n]) / sol.radius;
        ypart = (-(dn + 1) * rin / r * yt[n] + rin * x * dyt[n]) / sol.radius;
    }
    // c_n = i^n x^n / (2n-1)!!
    long double c_mag = 1.0L;
    for (std::size_t q = 1; q <= n; ++q)
        c_mag *= static_cast<long double>(x) / static_cast<long double>(2 * q - 1);
    const cplx ip = i_pow(n);
    ExteriorParts p;
    p.incident = std::complex<long double>(ip.real(), ip.imag()) * (c_mag * jpart);
    p.regular = sol.delta.at(n) * jpart;
    p.outgoing = std::complex<long double>(0.0L, 1.0L) * ypart;
    return p;
}

cplx combine(const MieSolution& sol, std::size_t n, const ExteriorParts& p, bool with_incident)
{
    const std::complex<long double> b(sol.b.at(n).real(), sol.b.at(n).imag());
    std::complex<long double> s = b * (p.regular + p.outgoing);
    if (with_incident)
        s += p.incident;
    return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}
} // namespace

cplx exterior_mode(const MieSolution& sol, std::size_t n, double rho)
{
    return combine(sol, n, exterior_parts(sol, n, rho, false), true);
}

cplx exterior_mode_derivative(const MieSolution& sol, std::size_t n, double rho)
{
    return combine(sol, n, exterior_parts(sol, n, rho, true), true);
}

cplx eval_side(const MieSolution& sol, Side side, double rho, double cos_theta)
{
    const std::size_t top = sol.n_max();
    const auto p = orthopoly::legendre_column(top, cos_theta);
    cplx s = 0.0;
    if (side == Side::Interior)
    {
        const double z = sol.index * sol.k * rho;
        const auto jz = bessel::jtilde_column(top, z);
        long double rn = 1.0L;
        for (std::size_t n = 0; n <= top; ++n)
        {
            s += sol.a[n] * static_cast<double>(rn * jz[n]) * p[n];
            rn *= static_cast<long double>(rho) / sol.radius;
        }
        return s;
    }
    for (std::size_t n = 0; n <= top; ++n)
        s += exterior_mode(sol, n, rho) * p[n];
    return s;
}

cplx eval_side_derivative(const MieSolution& sol, Side side, double rho, double cos_theta)
{
    const std::size_t top = sol.n_max();
    const auto p = orthopoly::legendre_column(top, cos_theta);
    cplx s = 0.0;
    for (std::size_t n = 0; n <= top; ++n)
        s += (side == Side::Interior ? interior_mode_derivative(sol, n, rho) : exterior_mode_derivative(sol, n, rho)) * p[n];
    return s;
}

cplx eval_exact(const MieSolution& sol, double rho, double cos_theta)
{
    if (rho < 0.0)
        throw std::invalid_argument("eval_exact: rho must be non-negative");
    if (rho <= sol.radius)
        return eval_side(sol, Side::Interior, rho, cos_theta);
    // the incident wave is summed in closed form; the series carries only the scattered part
    return std::exp(kI * (sol.k * rho * cos_theta)) + eval_scattered(sol, rho, cos_theta);
}

cplx eval_scattered(const MieSolution& sol, double rho, double cos_theta)
{
    if (rho < sol.radius)
        throw std::invalid_argument("eval_scattered: point inside the sphere");
    const std::size_t top = sol.n_max();
    const auto p = orthopoly::legendre_column(top, cos_theta);
    cplx s = 0.0;
    for (std::size_t n = 0; n <= top; ++n)
        s += combine(sol, n, exterior_parts(sol, n, rho, false), false) * p[n];
    return s;
}

cplx eval_shifted(const MieSolution& sol, double offset, double rho, double cos_theta)
{
    const double z = rho * cos_theta - offset;
    const double s = rho * std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double r = std::hypot(s, z);
    return eval_exact(sol, r, r > 0.0 ? z / r : 1.0);
}

std::vector<Sample> default_samples(const radial::RadialGrid& grid)
{
    const auto gl = orthopoly::gauss_legendre(17);
    std::vector<Sample> out;
    out.reserve(grid.node_count() * gl.nodes.size());
    for (double rho : grid.nodes)
        for (double t : gl.nodes)
            out.push_back({rho, t});
    return out;
}

double field_error(const FieldFunction& approx, const FieldFunction& exact, const std::vector<Sample>& samples)
{
    double e = 0.0;
    for (const auto& s : samples)
        e = std::max(e, std::abs(approx(s.rho, s.cos_theta) - exact(s.rho, s.cos_theta)));
    return e;
}

double field_error(const radial::RadialGrid& grid, const ls::ModalField& approx, const MieSolution& sol,
                   const std::vector<Sample>& samples)
{
    const ls::FieldInterpolant u(grid, approx);
    return field_error([&](double r, double t) { return u(r, t); },
                       [&](double r, double t) { return eval_exact(sol, r, t); }, samples);
}

} // namespace axiscat::mie
