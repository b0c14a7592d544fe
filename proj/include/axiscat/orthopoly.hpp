#pragma once

// Legendre and Chebyshev primitives: three-term recurrence, associated
// polynomials of the recurrence, Chebyshev points and Fejer-type weights.

#include <axiscat/ddouble.hpp>

#include <cstddef>
#include <vector>

namespace axiscat::orthopoly
{

/// p_{k+1}(x) = (A_k x + B_k) p_k(x) + C_k p_{k-1}(x), Legendre normalization.
struct RecurrenceCoeffs
{
    static double A(std::size_t k) { return double(2 * k + 1) / double(k + 1); }
    static double B(std::size_t) { return 0.0; }
    static double C(std::size_t k) { return -double(k) / double(k + 1); }

    static ddouble A_dd(std::size_t k) { return ddouble(double(2 * k + 1)) / ddouble(double(k + 1)); }
    static ddouble C_dd(std::size_t k) { return -ddouble(double(k)) / ddouble(double(k + 1)); }
};

/// x_i = cos((2i+1) pi / (2N)), i = 0..N-1, strictly decreasing.
std::vector<double> chebyshev_nodes(std::size_t n);
std::vector<long double> chebyshev_nodes_ld(std::size_t n);

double legendre_eval(std::size_t n, double x);

/// P_0(x)..P_{n_max}(x).
std::vector<double> legendre_column(std::size_t n_max, double x);

/// Chebyshev coefficients of Q_{l,m} and R_{l,m}, m = 0..m_max, with
/// p_{l+m} = Q_{l,m} p_l + R_{l,m} p_{l-1}.
struct AssociatedPolyTable
{
    std::size_t l = 0;
    std::vector<std::vector<double>> Q; // Q[m] has m+1 coefficients
    std::vector<std::vector<double>> R; // R[m] has max(m,1) coefficients

    double eval_Q(std::size_t m, double x) const;
    double eval_R(std::size_t m, double x) const;
};

AssociatedPolyTable associated_polys(std::size_t l, std::size_t m_max);

/// Values of Q_{l,m} and R_{l,m} for m = m_top - 1 and m = m_top at the given
/// nodes, run through the recurrence in double-double arithmetic.
struct AssociatedPair
{
    std::vector<double> Q_prev, Q_top, R_prev, R_top;
};

AssociatedPair associated_values_extended(std::size_t l, std::size_t m_top, const std::vector<long double>& nodes);
AssociatedPair associated_values(std::size_t l, std::size_t m_top, const std::vector<double>& nodes);

struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Interpolatory rule on [-1,1] at the N Chebyshev points; exact below degree N.
QuadratureRule fejer_weights(std::size_t n);

/// n-point Gauss-Legendre rule, nodes decreasing.
QuadratureRule gauss_legendre(std::size_t n);

} // namespace axiscat::orthopoly
