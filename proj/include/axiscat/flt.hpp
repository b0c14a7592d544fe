#pragma once

// Legendre transform on the 2N Chebyshev points of [-1,1]:
//   c_m = (1/tau_m) sum_{i<2N} P_m(x_i) f(x_i) w_i,  tau_m = 2/(2m+1),  m < N,
// where w_i are the Fejer weights of size 2N. The rule is exact for products
// of degree < 2N, so for degree-< N data the coefficients are exact.
//
// FltPlan runs the Healy-Driscoll cascade: one cosine analysis of size 2N, then
// log2(N)-1 levels that split each Chebyshev block of length L into two blocks
// of length L/2 using values of the associated polynomials at L points.
// The inverse applies the transposed cascade, since the synthesis matrix equals
// 2N times the transpose of the unweighted cascade.

#include <axiscat/types.hpp>

#include <span>
#include <vector>

namespace axiscat::flt
{

enum class Precision
{
    Double,
    Extended // tables and direct sums carried in double-double arithmetic
};

/// Direct O(N^2) transform; samples.size() == 2N.
std::vector<cplx> dlt(std::span<const cplx> samples, Precision precision = Precision::Double);

/// Direct synthesis sum_m c_m P_m at the 2N Chebyshev points; coeffs.size() == N.
std::vector<cplx> idlt(std::span<const cplx> coeffs, Precision precision = Precision::Double);

class FltPlan
{
public:
    explicit FltPlan(std::size_t n, Precision precision = Precision::Double);

    std::size_t size() const { return n_; }
    std::size_t sample_count() const { return 2 * n_; }
    Precision precision() const { return precision_; }

    /// 2N samples -> N Legendre coefficients.
    void forward(std::span<const cplx> samples, std::span<cplx> coeffs) const;

    /// N Legendre coefficients -> 2N samples.
    void inverse(std::span<const cplx> coeffs, std::span<cplx> samples) const;

private:
    struct Level
    {
        std::size_t block = 0;     // L: incoming block length
        std::vector<double> table; // per block: Q_{K-1}, Q_K, R_{K-1}, R_K at L points
    };

    std::size_t n_;
    Precision precision_;
    std::vector<double> scaled_weights_; // 2N w_i
    std::vector<double> inv_tau_;        // (2m+1)/2
    std::vector<Level> levels_;          // L = N, N/2, ..., 4
};

std::vector<cplx> flt(const FltPlan& plan, std::span<const cplx> samples);
std::vector<cplx> iflt(const FltPlan& plan, std::span<const cplx> coeffs);

} // namespace axiscat::flt
