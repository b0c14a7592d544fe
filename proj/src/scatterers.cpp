#include <axiscat/scatterers.hpp>

#include <axiscat/besselmod.hpp>
#include <axiscat/orthopoly.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace axiscat::scatter
{

namespace
{
std::vector<cplx> sphere_coeffs(const HomogeneousSphere& s, double rho, std::size_t l_max)
{
    std::vector<cplx> m(l_max + 1, cplx(0.0));
    if (rho <= s.radius)
        m[0] = 1.0 - s.index * s.index;
    return m;
}

std::vector<cplx> offset_coeffs(const OffsetSphere& s, double rho, std::size_t l_max)
{
    if (!(s.offset > s.radius) || !(s.radius > 0.0))
        throw std::invalid_argument("OffsetSphere: requires offset > radius > 0");
    std::vector<cplx> m(l_max + 1, cplx(0.0));
    if (rho < s.offset - s.radius || rho > s.offset + s.radius)
        return m;

    // the body covers cos(theta) in [x0, 1] on this shell
    const double x0 = std::clamp((rho * rho + s.offset * s.offset - s.radius * s.radius) / (2.0 * s.offset * rho), -1.0, 1.0);
    const double contrast = 1.0 - s.index * s.index;
    m[0] = contrast * 0.5 * (1.0 - x0);
    if (l_max == 0)
        return m;

    // sqrt(1-x^2) (l-1)!/(l+1)! P_l^1(x) = (1-x^2) P_l'(x) / (l(l+1))
    const auto p = orthopoly::legendre_column(l_max, x0);
    double dp_prev = 0.0; // P_0'
    double dp = 1.0;      // P_1'
    const double s2 = 1.0 - x0 * x0;
    for (std::size_t l = 1; l <= l_max; ++l)
    {
        m[l] = contrast * 0.5 * double(2 * l + 1) * s2 * dp / (double(l) * double(l + 1));
        const double dp_next = dp_prev + double(2 * l + 1) * p[l];
        dp_prev = dp;
        dp = dp_next;
    }
    return m;
}

std::vector<cplx> hollowed_coeffs(const HollowedSphere& h, double rho, std::size_t l_max)
{
    std::vector<cplx> m(l_max + 1, cplx(0.0));
    if (rho < 1.0 || rho > 2.0)
        return m;
    // m_{2n} = -(4n+1) sqrt(pi) 2^{-beta-1} Gamma(1+beta) / (Gamma(1+beta/2) Gamma(3/2+beta/2))
    //          * prod_{k<n} (beta/2 - k) / (beta/2 + 3/2 + k);
    // by the duplication formula the Gamma prefactor reduces to (4n+1) / (1+beta).
    const double half = 0.5 * h.beta;
    double log_mag = 0.0;
    int sign = 1;
    bool zero = false;
    for (std::size_t n = 0; 2 * n <= l_max; ++n)
    {
        if (n > 0)
        {
            const double num = half - double(n - 1);
            const double den = half + 1.5 + double(n - 1);
            if (num == 0.0)
                zero = true;
            else
            {
                log_mag += std::log(std::abs(num)) - std::log(den);
                if (num < 0.0)
                    sign = -sign;
            }
        }
        if (!zero)
            m[2 * n] = -double(4 * n + 1) / (1.0 + h.beta) * sign * std::exp(log_mag);
    }
    return m;
}

std::vector<cplx> tabulated_coeffs(const Tabulated& t, double rho, std::size_t l_max)
{
    std::vector<cplx> m(l_max + 1, cplx(0.0));
    if (t.radii.empty() || rho < t.radii.front() || rho > t.radii.back())
        return m;
    auto it = std::upper_bound(t.radii.begin(), t.radii.end(), rho);
    std::size_t hi = static_cast<std::size_t>(it - t.radii.begin());
    if (hi == t.radii.size())
        hi = t.radii.size() - 1;
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    const double span = t.radii[hi] - t.radii[lo];
    const double w = span > 0.0 ? (rho - t.radii[lo]) / span : 0.0;
    for (std::size_t l = 0; l <= l_max; ++l)
    {
        const cplx a = l < t.coeffs[lo].size() ? t.coeffs[lo][l] : cplx(0.0);
        const cplx b = l < t.coeffs[hi].size() ? t.coeffs[hi][l] : cplx(0.0);
        m[l] = (1.0 - w) * a + w * b;
    }
    return m;
}
} // namespace

std::vector<cplx> contrast_coeffs(const ScattererModel& model, double rho, std::size_t l_max)
{
    if (rho < 0.0)
        throw std::invalid_argument("contrast_coeffs: negative radius");
    return std::visit(
        [&](const auto& s) -> std::vector<cplx> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, HomogeneousSphere>)
                return sphere_coeffs(s, rho, l_max);
            else if constexpr (std::is_same_v<T, OffsetSphere>)
                return offset_coeffs(s, rho, l_max);
            else if constexpr (std::is_same_v<T, HollowedSphere>)
                return hollowed_coeffs(s, rho, l_max);
            else
                return tabulated_coeffs(s, rho, l_max);
        },
        model);
}

cplx contrast_value(const ScattererModel& model, double rho, double t)
{
    return std::visit(
        [&](const auto& s) -> cplx {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, HomogeneousSphere>)
                return rho <= s.radius ? 1.0 - s.index * s.index : 0.0;
            else if constexpr (std::is_same_v<T, OffsetSphere>)
            {
                const double d2 = rho * rho + s.offset * s.offset - 2.0 * rho * s.offset * t;
                return d2 <= s.radius * s.radius ? 1.0 - s.index * s.index : 0.0;
            }
            else if constexpr (std::is_same_v<T, HollowedSphere>)
                return (rho >= 1.0 && rho <= 2.0) ? -std::pow(std::abs(t), s.beta) : 0.0;
            else
            {
                std::size_t l_max = 0;
                for (const auto& c : s.coeffs)
                    l_max = std::max(l_max, c.size());
                if (l_max == 0)
                    return 0.0;
                const auto m = tabulated_coeffs(s, rho, l_max - 1);
                const auto p = orthopoly::legendre_column(l_max - 1, t);
                cplx v = 0.0;
                for (std::size_t l = 0; l < l_max; ++l)
                    v += m[l] * p[l];
                return v;
            }
        },
        model);
}

double support_radius(const ScattererModel& model)
{
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, HomogeneousSphere>)
                return s.radius;
            else if constexpr (std::is_same_v<T, OffsetSphere>)
                return s.offset + s.radius;
            else if constexpr (std::is_same_v<T, HollowedSphere>)
                return 2.0;
            else
                return s.radii.empty() ? 0.0 : s.radii.back();
        },
        model);
}

bool is_vacuum(const ScattererModel& model)
{
    return std::visit(
        [](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, HomogeneousSphere> || std::is_same_v<T, OffsetSphere>)
                return s.index * s.index == 1.0 || s.radius == 0.0;
            else if constexpr (std::is_same_v<T, HollowedSphere>)
                return false;
            else
            {
                for (const auto& row : s.coeffs)
                    for (const auto& c : row)
                        if (c != cplx(0.0))
                            return false;
                return true;
            }
        },
        model);
}

Tabulated load_tabulated(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_tabulated: cannot open " + path);
    std::map<double, std::map<std::size_t, cplx>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double rho, re, im;
        long long l;
        if (!(ss >> rho))
            continue;
        if (!(ss >> l >> re >> im) || l < 0 || rho < 0.0)
            throw std::runtime_error("load_tabulated: malformed row " + std::to_string(line_no) + " in " + path);
        rows[rho][static_cast<std::size_t>(l)] = {re, im};
    }
    Tabulated t;
    for (const auto& [rho, by_l] : rows)
    {
        t.radii.push_back(rho);
        std::vector<cplx> c(by_l.rbegin()->first + 1, cplx(0.0));
        for (const auto& [l, v] : by_l)
            c[l] = v;
        t.coeffs.push_back(std::move(c));
    }
    return t;
}

std::vector<cplx> incident_coeffs(const IncidentField& inc, double rho, std::size_t n_max)
{
    if (rho < 0.0)
        throw std::invalid_argument("incident_coeffs: negative radius");
    const double x = inc.k * rho;
    const auto jt = bessel::jtilde_column(n_max, x);
    const cplx phase = std::exp(cplx(0.0, -inc.k * inc.shift));
    std::vector<cplx> u(n_max + 1);
    // i^n (2n+1) x^n/(2n+1)!! = i^n x^n/(2n-1)!!, built as a running product
    cplx factor = phase;
    for (std::size_t n = 0; n <= n_max; ++n)
    {
        if (n > 0)
            factor *= cplx(0.0, x / double(2 * n - 1));
        u[n] = factor * jt[n];
    }
    return u;
}

cplx incident_value(const IncidentField& inc, double rho, double cos_theta)
{
    return std::exp(cplx(0.0, inc.k * (rho * cos_theta - inc.shift)));
}

} // namespace axiscat::scatter
