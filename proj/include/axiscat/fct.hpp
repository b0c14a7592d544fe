#pragma once

// Chebyshev analysis and synthesis at the Chebyshev points
// x_j = cos((2j+1)pi/(2n)), j = 0..n-1 (decreasing in j).
//
// Analysis returns b_k = (eps_k/n) sum_j f_j cos(k(2j+1)pi/(2n)) with eps_0 = 1
// and eps_k = 2 otherwise, so that f(x_j) = sum_k b_k T_k(x_j). Power-of-two
// sizes run through a half-sample cosine transform on top of a radix-2 FFT;
// other sizes use direct summation. Input and output spans may alias.

#include <axiscat/types.hpp>

#include <memory>
#include <span>
#include <vector>

namespace axiscat::fct
{

struct ChebSeries
{
    std::vector<cplx> coeffs;

    std::size_t size() const { return coeffs.size(); }
};

class ChebTransform
{
public:
    explicit ChebTransform(std::size_t n);

    std::size_t size() const { return n_; }

    /// samples -> Chebyshev coefficients; both spans have length size().
    void analyze(std::span<const cplx> samples, std::span<cplx> coeffs) const;

    /// Chebyshev coefficients (length size()) -> values at the size() nodes.
    void synthesize(std::span<const cplx> coeffs, std::span<cplx> samples) const;

private:
    enum class Mode
    {
        Dense,
        Fft,
        Direct
    };

    void fft(std::span<cplx> data, bool inverse) const;

    std::size_t n_;
    Mode mode_;
    std::vector<double> cos_table_;     // dense: cos(k theta_j) at [k*n + j]
    std::vector<cplx> fft_twiddle_;     // exp(-2 pi i t / n), t < n/2
    std::vector<std::size_t> bitrev_;
    std::vector<cplx> shift_;           // exp(-i pi k / (2n))
};

/// Shared, immutable transform for size n (built on first use).
std::shared_ptr<const ChebTransform> transform_for(std::size_t n);

ChebSeries fct(std::span<const cplx> samples);

/// Evaluates the series at chebyshev_nodes(n); the series may be shorter than n.
std::vector<cplx> ifct(const ChebSeries& series, std::size_t n);

ChebSeries truncate(const ChebSeries& series, std::size_t n);

/// Clenshaw evaluation of sum b_k T_k(x).
cplx evaluate(const ChebSeries& series, double x);

} // namespace axiscat::fct
