#include <doctest.h>

#include <axiscat/besselmod.hpp>
#include <axiscat/radialkernel.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

using namespace axiscat;
using boost::math::quadrature::gauss_kronrod;

namespace
{
template <class F>
long double integrate(F f, long double a, long double b)
{
    if (!(b > a))
        return 0.0L;
    return gauss_kronrod<long double, 61>::integrate(f, a, b, 8, 1e-15L);
}

long double sph_j(unsigned n, long double x)
{
    return x == 0 ? (n == 0 ? 1.0L : 0.0L) : boost::math::sph_bessel(n, x);
}

long double sph_y(unsigned n, long double x)
{
    return boost::math::sph_neumann(n, x);
}

// K_n(a) = -(2n+1) k^3 int_0^R h_n(k rho_>) j_n(k rho_<) I(rho) rho^2 drho, split at a and at the cuts
template <class Density>
std::complex<long double> brute_kernel(unsigned n, long double k, long double a, long double r, Density density, std::vector<long double> cuts)
{
    cuts.push_back(a);
    cuts.push_back(0);
    cuts.push_back(r);
    std::sort(cuts.begin(), cuts.end());
    long double re = 0, im = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    {
        const long double lo = cuts[i], hi = cuts[i + 1];
        if (!(hi > lo) || lo < 0 || hi > r)
            continue;
        const bool below = hi <= a;
        auto fre = [&](long double rho) {
            const long double inner = below ? rho : a, outer = below ? a : rho;
            return sph_j(n, k * outer) * sph_j(n, k * inner) * density(rho) * rho * rho;
        };
        auto fim = [&](long double rho) {
            const long double inner = below ? rho : a, outer = below ? a : rho;
            return sph_y(n, k * outer) * sph_j(n, k * inner) * density(rho) * rho * rho;
        };
        re += integrate(fre, lo, hi);
        im += integrate(fim, lo, hi);
    }
    const long double c = -(2.0L * n + 1) * k * k * k;
    return {c * re, c * im};
}

double chebyshev_t(std::size_t m, double y)
{
    return std::cos(double(m) * std::acos(std::clamp(y, -1.0, 1.0)));
}

std::vector<cplx> samples_of(const radial::RadialGrid& g, const std::function<double(double)>& f)
{
    std::vector<cplx> s(g.node_count());
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = f(g.nodes[i]);
    return s;
}

std::shared_ptr<const radial::MomentTable> moments(const radial::RadialGrid& g, std::size_t f, double k)
{
    return std::make_shared<const radial::MomentTable>(radial::precompute_moments(g, f, k));
}
} // namespace

TEST_CASE("grid layout")
{
    const auto g = radial::build_grid(4.0, 2, 2);
    CHECK(g.lower(0) == 0.0);
    CHECK(g.upper(0) == 2.0);
    CHECK(g.lower(1) == 2.0);
    CHECK(g.upper(1) == 4.0);
    CHECK(g.node_count() == 4);

    const auto g1 = radial::build_grid(4.0, 1, 4);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(g1.nodes[k] - (2.0 - 2.0 * std::cos((2.0 * k + 1) * M_PI / 8))) < 1e-15);
    for (std::size_t i = 1; i < g1.node_count(); ++i)
        CHECK(g1.nodes[i] > g1.nodes[i - 1]);
    CHECK_THROWS_AS(radial::build_grid(4.0, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(radial::build_grid(4.0, 2, 0), std::invalid_argument);
}

TEST_CASE("radial fit")
{
    const auto g = radial::build_grid(4.0, 3, 5);
    const auto c = radial::fit_radial(g, samples_of(g, [](double) { return 2.5; }));
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t m = 0; m < 5; ++m)
            CHECK(std::abs(c[j * 5 + m] - (m == 0 ? 2.5 : 0.0)) < 1e-14);

    auto poly = [](double r) { return 1.0 - 0.5 * r + 0.25 * r * r * r - 0.01 * std::pow(r, 4); };
    const auto cp = radial::fit_radial(g, samples_of(g, poly));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (int i = 0; i < 10; ++i)
    {
        const double r = u(rng);
        CHECK(std::abs(radial::eval_fit(g, cp, r) - poly(r)) < 1e-12);
    }
}

TEST_CASE("fit error falls like h^N_d")
{
    auto f = [](double r) { return std::exp(-r) * std::cos(2.0 * r); };
    std::vector<double> err;
    for (std::size_t ni : {4u, 8u, 16u, 32u})
    {
        const auto g = radial::build_grid(4.0, ni, 8);
        const auto c = radial::fit_radial(g, samples_of(g, f));
        double e = 0.0;
        for (double r = 0.013; r < 4.0; r += 0.0371)
            e = std::max(e, std::abs(radial::eval_fit(g, c, r) - f(r)));
        err.push_back(e);
    }
    for (std::size_t i = 1; i + 1 < err.size(); ++i)
        CHECK(std::log2(err[i - 1] / err[i]) > 7.0);
}

TEST_CASE("moments against adaptive quadrature")
{
    const auto g = radial::build_grid(4.0, 4, 4);
    const std::size_t f = 3, nd = 4;
    std::vector<double> al((f + 1) * nd), be(al.size()), ga(al.size());
    // subinterval [1, 1.5] of interval 1 ([1, 2]), k = 1
    radial::subinterval_moments(g, 1, 1.0, 1.5, f, 1.0, al, be, ga);
    const long double ref_a = integrate([](long double r) { return (r / 1.5L) * std::sin(r) / r * r; }, 1.0L, 1.5L);
    CHECK(std::abs(al[0] - double(ref_a)) < 1e-12);
    for (std::size_t m = 0; m < nd; ++m)
    {
        const long double ref_g = integrate([&](long double r) { return std::sin(r) / r * chebyshev_t(m, double(2 * r - 3)) * r * r; }, 1.0L, 1.5L);
        CHECK(std::abs(ga[m] - double(ref_g)) < 1e-12);
        const long double ref_b = integrate([&](long double r) { return std::cos(r) * chebyshev_t(m, double(2 * r - 3)) * r; }, 1.0L, 1.5L);
        CHECK(std::abs(be[m] - double(ref_b)) < 1e-12);
    }

    radial::subinterval_moments(g, 1, 1.2, 1.2, f, 1.0, al, be, ga);
    for (std::size_t i = 0; i < al.size(); ++i)
        CHECK((al[i] == 0.0 && be[i] == 0.0 && ga[i] == 0.0));
}

TEST_CASE("moments of high modes on the first subinterval")
{
    // a = 0 makes the alpha weight a polynomial of degree n+1 and beta vanish for n >= 1
    const auto g = radial::build_grid(4.0, 8, 4);
    const std::size_t f = 200, nd = 4;
    std::vector<double> al((f + 1) * nd), be(al.size()), ga(al.size());
    const double b = g.breakpoint(0, 1);
    radial::subinterval_moments(g, 0, 0.0, b, f, 2.0, al, be, ga);
    for (std::size_t n : {0u, 5u, 50u, 200u})
    {
        const long double ref = integrate(
            [&](long double r) {
                const long double x = 2 * r;
                return std::pow(r / b, (long double)(n + 1)) * double(bessel::jtilde_column(n, double(x))[n]) * 4 * r;
            },
            0.0L, (long double)b);
        CHECK(std::abs(al[n * nd] - double(ref)) <= 1e-12 * std::abs(double(ref)));
        if (n > 0)
            CHECK(be[n * nd] == 0.0);
    }
}

TEST_CASE("zero density gives zero kernel")
{
    const auto g = radial::build_grid(4.0, 4, 4);
    const radial::RadialKernel kern(g, moments(g, 4, 1.0));
    std::vector<cplx> zero(g.node_count(), cplx(0.0));
    for (std::size_t n = 0; n <= 4; ++n)
        for (const auto& v : radial::radial_sweep(kern, n, zero))
            CHECK(v == cplx(0.0));
}

TEST_CASE("kernel against brute-force radial integral")
{
    const auto g = radial::build_grid(4.0, 4, 4);
    const double k = 1.0;
    const radial::RadialKernel kern(g, moments(g, 4, k));
    auto density = [](long double r) { return r <= 1.0L ? r * r : 0.0L; };
    const auto samples = samples_of(g, [&](double r) { return double(density(r)); });
    double worst = 0.0;
    for (unsigned n = 0; n <= 4; ++n)
    {
        std::vector<cplx> out(g.node_count());
        kern.apply(n, samples, out);
        for (std::size_t i = 0; i < g.node_count(); ++i)
        {
            const auto ref = brute_kernel(n, k, g.nodes[i], 4.0L, density, {1.0L});
            worst = std::max(worst, std::abs(out[i] - cplx(double(ref.real()), double(ref.imag()))));
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("sweep equals direct evaluation of the interval sums")
{
    const auto g = radial::build_grid(4.0, 4, 4);
    const double k = 1.3;
    const std::size_t f = 16;
    const radial::RadialKernel kern(g, moments(g, f, k));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> fit(g.node_count());
    for (auto& c : fit)
        c = {u(rng), u(rng)};

    // piecewise Chebyshev density from the random coefficients, evaluated directly
    auto density_re = [&](long double r) { return (long double)radial::eval_fit(g, fit, double(r)).real(); };
    auto density_im = [&](long double r) { return (long double)radial::eval_fit(g, fit, double(r)).imag(); };
    std::vector<long double> cuts;
    for (std::size_t j = 1; j < g.n_i; ++j)
        cuts.push_back(g.lower(j));

    double worst = 0.0;
    for (unsigned n : {0u, 1u, 5u, 16u})
    {
        const auto out = radial::radial_sweep(kern, n, fit);
        for (std::size_t i = 0; i < g.node_count(); ++i)
        {
            const auto re = brute_kernel(n, k, g.nodes[i], 4.0L, density_re, cuts);
            const auto im = brute_kernel(n, k, g.nodes[i], 4.0L, density_im, cuts);
            const std::complex<long double> ref = re + std::complex<long double>(0, 1) * im;
            const cplx r(double(ref.real()), double(ref.imag()));
            worst = std::max(worst, std::abs(out[i] - r) / std::max(std::abs(r), 1e-300));
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("kernel self-convergence under interval doubling")
{
    const double k = 1.0;
    auto f = [](double r) { return r <= 3.0 ? std::cos(r) * std::exp(-0.3 * r) * (3.0 - r) * (3.0 - r) : 0.0; };
    auto fl = [&](long double r) { return (long double)f(double(r)); };
    std::vector<double> err;
    for (std::size_t ni : {4u, 8u, 16u})
    {
        const auto g = radial::build_grid(4.0, ni, 4);
        const radial::RadialKernel kern(g, moments(g, 2, k));
        std::vector<cplx> out(g.node_count());
        kern.apply(2, samples_of(g, f), out);
        double e = 0.0;
        for (std::size_t i = 0; i < g.node_count(); i += 3)
        {
            const auto ref = brute_kernel(2, k, g.nodes[i], 4.0L, fl, {3.0L});
            e = std::max(e, std::abs(out[i] - cplx(double(ref.real()), double(ref.imag()))));
        }
        err.push_back(e);
    }
    for (std::size_t i = 1; i < err.size(); ++i)
    {
        MESSAGE("log2 error ratio " << std::log2(err[i - 1] / err[i]));
        CHECK(std::log2(err[i - 1] / err[i]) > 4.0 - 0.5);
    }
}

TEST_CASE("moment cache round trip")
{
    const auto g = radial::build_grid(2.0, 2, 3);
    const auto t = radial::precompute_moments(g, 5, 1.5);
    const auto dir = std::filesystem::temp_directory_path() / "axiscat_cache_test";
    std::filesystem::remove_all(dir);
    const auto t2 = radial::precompute_moments_cached(g, 5, 1.5, dir.string());
    CHECK(t2.alpha == t.alpha);
    const auto file = dir / radial::moment_cache_filename(2.0, 2, 3, 5, 1.5);
    REQUIRE(std::filesystem::exists(file));
    const auto back = radial::read_moment_cache(file.string());
    REQUIRE(back.has_value());
    CHECK(back->alpha == t.alpha);
    CHECK(back->beta == t.beta);
    CHECK(back->gamma == t.gamma);
    CHECK(back->f == 5);
    CHECK(back->k == 1.5);

    // header sits in the first bytes: magic then version 1, little-endian
    {
        std::ifstream in(file, std::ios::binary);
        char head[16];
        in.read(head, 16);
        CHECK(std::string(head, 7) == "LSMOMNT");
        CHECK(head[8] == 1);
    }

    // a flipped payload byte is detected by the checksum
    {
        std::fstream io(file, std::ios::in | std::ios::out | std::ios::binary);
        io.seekp(100);
        io.put('\x7f');
    }
    CHECK_FALSE(radial::read_moment_cache(file.string()).has_value());
    CHECK(radial::moment_cache_filename(2.0, 2, 3, 5, 1.5) != radial::moment_cache_filename(2.0, 2, 3, 5, 1.25));
    std::filesystem::remove_all(dir);
}
