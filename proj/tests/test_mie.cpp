#include <doctest.h>

#include <axiscat/mie.hpp>
#include <axiscat/orthopoly.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

using namespace axiscat;
using mp = boost::multiprecision::cpp_bin_float_50;
using mpc = std::complex<mp>;

namespace
{
// j_n(x) = x^n sum_k (-x^2/2)^k / (k! (2n+2k+1)!!), fine for the small arguments used here
mp series_j(unsigned n, const mp& x)
{
    mp df = 1;
    for (unsigned q = 1; q <= n; ++q)
        df *= mp(2 * q + 1);
    mp term = boost::multiprecision::pow(x, n) / df, sum = term;
    for (unsigned k = 1; k < 200; ++k)
    {
        term *= -x * x / (mp(2 * k) * mp(2 * n + 2 * k + 1));
        sum += term;
        if (abs(term) < abs(sum) * mp(1e-45))
            break;
    }
    return sum;
}

// y_0 .. y_{n_max} by the upward recurrence, stable for y
std::vector<mp> upward_y(unsigned n_max, const mp& x)
{
    std::vector<mp> y(n_max + 2);
    y[0] = -cos(x) / x;
    y[1] = -cos(x) / (x * x) - sin(x) / x;
    for (unsigned n = 1; n <= n_max; ++n)
        y[n + 1] = mp(2 * n + 1) / x * y[n] - y[n - 1];
    return y;
}
} // namespace

TEST_CASE("per-mode systems are solved to roundoff")
{
    for (double k : {0.5, 1.0, 2.0, 5.0})
    {
        const auto sol = mie::mie_solve(k);
        CHECK(sol.tail < 1e-15);
        double worst = 0.0;
        for (std::size_t n = 0; n <= sol.n_max(); ++n)
            worst = std::max(worst, mie::mode_residual(sol, n));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("field and radial derivative are continuous across the surface")
{
    for (double k : {0.5, 1.0, 2.0, 5.0})
    {
        CAPTURE(k);
        const auto sol = mie::mie_solve(k);
        double ev = 0.0, ed = 0.0, scale = 0.0;
        for (int i = 0; i < 32; ++i)
        {
            const double t = std::cos(M_PI * (i + 0.5) / 32);
            const cplx in = mie::eval_side(sol, mie::Side::Interior, 1.0, t);
            const cplx out = mie::eval_side(sol, mie::Side::Exterior, 1.0, t);
            ev = std::max(ev, std::abs(in - out));
            scale = std::max(scale, std::abs(in));
            const cplx din = mie::eval_side_derivative(sol, mie::Side::Interior, 1.0, t);
            const cplx dout = mie::eval_side_derivative(sol, mie::Side::Exterior, 1.0, t);
            ed = std::max(ed, std::abs(din - dout));
        }
        CHECK(ev <= 1e-10);
        CHECK(ed <= 1e-8);
        CHECK(scale > 0.1);
    }
}

TEST_CASE("exterior series reproduces the closed-form incident wave")
{
    const auto sol = mie::mie_solve(1.0);
    for (double t : {-0.9, 0.0, 0.4, 1.0})
    {
        const cplx series = mie::eval_side(sol, mie::Side::Exterior, 2.5, t);
        CHECK(std::abs(series - mie::eval_exact(sol, 2.5, t)) < 1e-12);
    }
}

TEST_CASE("scattered field decays like 1/rho")
{
    const auto sol = mie::mie_solve(1.0);
    for (double t : {1.0, 0.3, -0.7})
    {
        const double a = std::abs(mie::eval_scattered(sol, 50.0, t));
        const double b = std::abs(mie::eval_scattered(sol, 100.0, t));
        CHECK(std::abs(a / b - 2.0) < 0.1);
    }
}

TEST_CASE("centre value is independent of angle")
{
    const auto sol = mie::mie_solve(2.0);
    const cplx c = mie::eval_exact(sol, 0.0, 1.0);
    for (double t : {-1.0, -0.3, 0.5})
        CHECK(mie::eval_exact(sol, 0.0, t) == c);
    CHECK(std::abs(c - sol.a[0]) < 1e-15);
}

TEST_CASE("scaled coefficients agree with the unscaled extended-precision system")
{
    const double k = 1.0, n0 = 2.0;
    const auto sol = mie::mie_solve(k, 60);
    const mp x = k, z = n0 * k;
    for (unsigned n = 0; n <= 40; ++n)
    {
        const mpc i(0, 1);
        mpc in(1, 0);
        for (unsigned q = 0; q < n; ++q)
            in *= i;
        // f_n' = f_{n-1} - (n+1)/x f_n, with j_{-1} = cos x / x and y_{-1} = sin x / x
        auto jm1 = [](unsigned m, const mp& t) { return m == 0 ? mp(cos(t) / t) : series_j(m - 1, t); };
        const mp jx = series_j(n, x), djx = jm1(n, x) - mp(n + 1) / x * jx;
        const mp jzv = series_j(n, z);
        const mp jz = jzv, djz = n0 * (jm1(n, z) - mp(n + 1) / z * jzv);
        const auto ys = upward_y(n, x);
        const mp yx = ys[n], dyx = (n == 0 ? mp(sin(x) / x) : ys[n - 1]) - mp(n + 1) / x * yx;
        const mpc hx(jx, yx), dhx(djx, dyx);
        const mpc inc = in * mp(2 * n + 1);
        // A jz - B hx = inc jx ; A djz - B dhx = inc djx
        const mpc det = -jz * dhx + hx * djz;
        const mpc A = (-inc * jx * dhx + hx * inc * djx) / det;
        const mpc B = (jz * inc * djx - djz * inc * jx) / det;

        mp df1 = 1, df2 = 1; // (2n+1)!!, (2n-1)!!
        for (unsigned q = 1; q <= n; ++q)
            df2 *= mp(2 * q - 1);
        df1 = df2 * mp(2 * n + 1);
        const mpc at = A * boost::multiprecision::pow(z, n) / df1;
        const mpc bt = -B * df2 / boost::multiprecision::pow(x, n + 1);
        const cplx a_ref(double(at.real()), double(at.imag())), b_ref(double(bt.real()), double(bt.imag()));
        CAPTURE(n);
        CHECK(std::abs(sol.a[n] - a_ref) <= 1e-10 * std::abs(a_ref));
        CHECK(std::abs(sol.b[n] - b_ref) <= 1e-10 * std::abs(b_ref));
    }
}

TEST_CASE("shifted sphere field")
{
    const auto sol = mie::mie_solve(1.0);
    // on the axis through the shifted centre
    CHECK(std::abs(mie::eval_shifted(sol, 2.0, 2.5, 1.0) - mie::eval_exact(sol, 0.5, 1.0)) < 1e-14);
    CHECK(std::abs(mie::eval_shifted(sol, 2.0, 0.5, 1.0) - mie::eval_exact(sol, 1.5, -1.0)) < 1e-14);
}

TEST_CASE("field error on the default sample set")
{
    const auto grid = radial::build_grid(4.0, 4, 4);
    const auto samples = mie::default_samples(grid);
    CHECK(samples.size() == grid.node_count() * 17);
    const auto sol = mie::mie_solve(1.0);

    ls::ModalField zero(31, grid.node_count());
    double peak = 0.0;
    for (const auto& s : samples)
        peak = std::max(peak, std::abs(mie::eval_exact(sol, s.rho, s.cos_theta)));
    CHECK(mie::field_error(grid, zero, sol, samples) == doctest::Approx(peak).epsilon(1e-15));

    // exact modal values at the nodes leave only the series truncation
    for (std::size_t f : {20u, 40u})
    {
        ls::ModalField exact(f + 1, grid.node_count());
        for (std::size_t i = 0; i < grid.node_count(); ++i)
            for (std::size_t n = 0; n <= f; ++n)
            {
                const double rho = grid.nodes[i];
                exact.at(i, n) = n <= sol.n_max() ? (rho <= 1.0 ? mie::interior_mode(sol, n, rho) : mie::exterior_mode(sol, n, rho)) : 0.0;
            }
        const double e = mie::field_error(grid, exact, sol, samples);
        CHECK(e < (f == 20 ? 1e-6 : 1e-13));
    }
}

TEST_CASE("invalid arguments")
{
    CHECK_THROWS_AS(mie::mie_solve(0.0), std::invalid_argument);
    const auto sol = mie::mie_solve(1.0);
    CHECK_THROWS_AS(mie::eval_exact(sol, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mie::eval_scattered(sol, 0.5, 0.0), std::invalid_argument);
    const mie::MieResonanceError err(7);
    CHECK(err.mode == 7);
    CHECK(std::string(err.what()).find("7") != std::string::npos);
}
