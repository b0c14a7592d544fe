#pragma once

// Modified spherical Bessel functions with the small-argument behaviour
// factored out:
//   jt_n(x) = (2n+1)!! j_n(x) / x^n,     yt_n(x) = -x^{n+1} y_n(x) / (2n-1)!!,
// both equal to 1 at x = 0. jt is run downward, yt upward.

#include <cstddef>
#include <vector>

namespace axiscat::bessel
{

std::vector<double> jtilde_column(std::size_t n_max, double x);
std::vector<double> ytilde_column(std::size_t n_max, double x);

/// d/dx jt_n = -x jt_{n+1} / (2n+3); needs jt up to n_max + 1.
std::vector<double> jtilde_derivative(const std::vector<double>& jt, double x);

/// d/dx yt_n = x yt_{n-1} / (2n-1), d/dx yt_0 = -sin x.
std::vector<double> ytilde_derivative(const std::vector<double>& yt, double x);

/// x^n / (2n+1)!!, n = 0..n_max, by recursive products (j_n = this * jt_n).
std::vector<double> j_scale_column(std::size_t n_max, double x);

/// (a/b)^n for 0 < a <= b.
double power_ratio(double a, double b, std::size_t n);

} // namespace axiscat::bessel
