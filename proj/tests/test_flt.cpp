#include <doctest.h>

#include <axiscat/flt.hpp>
#include <axiscat/orthopoly.hpp>

#include <random>

using namespace axiscat;

namespace
{
std::vector<cplx> random_vector(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& x : v)
        x = {d(rng), d(rng)};
    return v;
}

double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

std::vector<cplx> unit(std::size_t n, std::size_t k)
{
    std::vector<cplx> v(n, cplx(0.0));
    v[k] = 1.0;
    return v;
}
} // namespace

TEST_CASE("direct transform on simple data")
{
    const std::size_t n = 16;
    const auto x = orthopoly::chebyshev_nodes(2 * n);
    std::vector<cplx> one(2 * n, cplx(1.0)), p5(2 * n), sq(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i)
    {
        p5[i] = orthopoly::legendre_eval(5, x[i]);
        sq[i] = x[i] * x[i];
    }
    const auto c1 = flt::dlt(one);
    const auto c5 = flt::dlt(p5);
    const auto c2 = flt::dlt(sq);
    for (std::size_t m = 0; m < n; ++m)
    {
        CHECK(std::abs(c1[m] - (m == 0 ? 1.0 : 0.0)) < 1e-13);
        CHECK(std::abs(c5[m] - (m == 5 ? 1.0 : 0.0)) < 1e-13);
        const double e2 = m == 0 ? 1.0 / 3 : m == 2 ? 2.0 / 3 : 0.0;
        CHECK(std::abs(c2[m] - e2) < 1e-13);
    }
}

TEST_CASE("direct synthesis")
{
    const std::size_t n = 64;
    const auto v = random_vector(n, 2);
    CHECK(sup_diff(flt::dlt(flt::idlt(v)), v) < 1e-12);

    const auto s = flt::idlt(unit(n, n / 2));
    const auto x = orthopoly::chebyshev_nodes(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i)
        CHECK(std::abs(s[i] - orthopoly::legendre_eval(n / 2, x[i])) < 1e-14);
    for (const auto& z : flt::idlt(std::vector<cplx>(n, cplx(0.0))))
        CHECK(z == cplx(0.0));
}

TEST_CASE("small plans agree with the direct transforms")
{
    for (std::size_t n : {1u, 2u, 4u, 8u, 16u, 32u, 64u})
    {
        for (auto prec : {flt::Precision::Double, flt::Precision::Extended})
        {
            const flt::FltPlan plan(n, prec);
            const auto f = random_vector(2 * n, 100 + n);
            CHECK(sup_diff(flt::flt(plan, f), flt::dlt(f)) < 1e-12);
            const auto c = random_vector(n, 200 + n);
            CHECK(sup_diff(flt::iflt(plan, c), flt::idlt(c)) < 1e-12);
        }
    }
}

TEST_CASE("fast transform matches dlt on random input, N = 256")
{
    const flt::FltPlan plan(256);
    double worst = 0.0;
    for (unsigned t = 0; t < 20; ++t)
    {
        const auto f = random_vector(512, 1000 + t);
        worst = std::max(worst, sup_diff(flt::flt(plan, f), flt::dlt(f)));
    }
    CHECK(worst <= 1e-11);

    std::vector<cplx> one(512, cplx(1.0));
    CHECK(sup_diff(flt::flt(plan, one), unit(256, 0)) <= 1e-12);
}

TEST_CASE("round trip through the extended direct synthesis, N = 256")
{
    const std::size_t n = 256;
    const auto v = unit(n, n / 2);
    const auto samples = flt::idlt(v, flt::Precision::Extended);
    CHECK(sup_diff(flt::flt(flt::FltPlan(n), samples), v) <= 1e-12);
    CHECK(sup_diff(flt::flt(flt::FltPlan(n, flt::Precision::Extended), samples), v) <= 1e-12);
}

TEST_CASE("inverse transform, N = 1024")
{
    const std::size_t n = 1024;
    const flt::FltPlan plan(n);
    const auto v = unit(n, n / 2);
    CHECK(sup_diff(flt::iflt(plan, v), flt::idlt(v, flt::Precision::Extended)) <= 1e-9);

    for (const auto& z : flt::iflt(plan, std::vector<cplx>(n, cplx(0.0))))
        CHECK(z == cplx(0.0));

}

TEST_CASE("inverse transform is linear")
{
    const std::size_t n = 128;
    const flt::FltPlan plan(n);
    const auto u = random_vector(n, 5), w = random_vector(n, 6);
    const cplx a(0.3, -1.2), b(-0.7, 0.4);
    std::vector<cplx> mix(n);
    for (std::size_t i = 0; i < n; ++i)
        mix[i] = a * u[i] + b * w[i];
    const auto lhs = flt::iflt(plan, mix);
    const auto iu = flt::iflt(plan, u), iw = flt::iflt(plan, w);
    std::vector<cplx> rhs(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i)
        rhs[i] = a * iu[i] + b * iw[i];
    CHECK(sup_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("forward of inverse is the identity on degree-limited data")
{
    for (std::size_t n : {128u, 1024u})
    {
        const flt::FltPlan plan(n);
        const auto c = random_vector(n, 17);
        CHECK(sup_diff(flt::flt(plan, flt::iflt(plan, c)), c) < 1e-10);
    }
}

TEST_CASE("size checks")
{
    const flt::FltPlan plan(8);
    CHECK_THROWS_AS(flt::flt(plan, std::vector<cplx>(8)), std::invalid_argument);
    CHECK_THROWS_AS(flt::iflt(plan, std::vector<cplx>(16)), std::invalid_argument);
    CHECK_THROWS_AS(flt::FltPlan(12), std::invalid_argument);
}
