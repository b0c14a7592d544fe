#include <axiscat/fct.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace axiscat::fct
{

namespace
{
constexpr std::size_t kDenseLimit = 16;
constexpr std::size_t kDenseNonPow2Limit = 1024;

// angle (2j+1) k pi / (2n) reduced exactly in integers before the cosine
double node_cos(std::size_t k, std::size_t j, std::size_t n)
{
    const std::size_t period = 4 * n;
    const std::size_t t = (k % period) * ((2 * j + 1) % period) % period;
    return static_cast<double>(std::cos(static_cast<long double>(t) * std::numbers::pi_v<long double> /
                                        static_cast<long double>(2 * n)));
}
} // namespace

ChebTransform::ChebTransform(std::size_t n) : n_(n)
{
    if (n == 0)
        throw std::invalid_argument("ChebTransform: size must be positive");

    if (n <= kDenseLimit || (!is_power_of_two(n) && n <= kDenseNonPow2Limit))
        mode_ = Mode::Dense;
    else if (is_power_of_two(n))
        mode_ = Mode::Fft;
    else
        mode_ = Mode::Direct;

    if (mode_ == Mode::Dense)
    {
        cos_table_.resize(n * n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                cos_table_[k * n + j] = node_cos(k, j, n);
        return;
    }
    if (mode_ == Mode::Direct)
        return;

    const long double pi = std::numbers::pi_v<long double>;
    fft_twiddle_.resize(n / 2);
    for (std::size_t t = 0; t < n / 2; ++t)
    {
        const long double a = -2.0L * pi * static_cast<long double>(t) / static_cast<long double>(n);
        fft_twiddle_[t] = {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
    }
    bitrev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n)
        ++bits;
    for (std::size_t i = 0; i < n; ++i)
    {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b))
                r |= std::size_t{1} << (bits - 1 - b);
        bitrev_[i] = r;
    }
    shift_.resize(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        const long double a = -pi * static_cast<long double>(k) / static_cast<long double>(2 * n);
        shift_[k] = {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
    }
}

void ChebTransform::fft(std::span<cplx> data, bool inverse) const
{
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i)
        if (i < bitrev_[i])
            std::swap(data[i], data[bitrev_[i]]);

    for (std::size_t len = 2; len <= n; len <<= 1)
    {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len)
        {
            for (std::size_t t = 0; t < half; ++t)
            {
                cplx w = fft_twiddle_[t * stride];
                if (inverse)
                    w = std::conj(w);
                const cplx a = data[start + t];
                const cplx b = w * data[start + t + half];
                data[start + t] = a + b;
                data[start + t + half] = a - b;
            }
        }
    }
}

void ChebTransform::analyze(std::span<const cplx> samples, std::span<cplx> coeffs) const
{
    const std::size_t n = n_;
    if (samples.size() != n || coeffs.size() != n)
        throw std::invalid_argument("ChebTransform::analyze: size mismatch");
    const double inv_n = 1.0 / static_cast<double>(n);

    if (mode_ != Mode::Fft)
    {
        thread_local std::vector<cplx> in;
        in.assign(samples.begin(), samples.end());
        for (std::size_t k = 0; k < n; ++k)
        {
            cplx acc = 0.0;
            if (mode_ == Mode::Dense)
            {
                const double* row = &cos_table_[k * n];
                for (std::size_t j = 0; j < n; ++j)
                    acc += row[j] * in[j];
            }
            else
            {
                for (std::size_t j = 0; j < n; ++j)
                    acc += node_cos(k, j, n) * in[j];
            }
            coeffs[k] = acc * ((k == 0 ? 1.0 : 2.0) * inv_n);
        }
        return;
    }

    // Makhoul reordering: even samples ascending, odd samples descending.
    thread_local std::vector<cplx> v;
    v.resize(n);
    for (std::size_t j = 0; j < n / 2; ++j)
    {
        v[j] = samples[2 * j];
        v[n - 1 - j] = samples[2 * j + 1];
    }
    fft(v, false);
    // X_k = (w_k V_k + conj(w_k) V_{n-k}) / 2 is the complex-linear extension of Re(w_k V_k)
    for (std::size_t k = 0; k < n; ++k)
    {
        const cplx x = 0.5 * (shift_[k] * v[k] + std::conj(shift_[k]) * v[(n - k) % n]);
        coeffs[k] = x * ((k == 0 ? 1.0 : 2.0) * inv_n);
    }
}

void ChebTransform::synthesize(std::span<const cplx> coeffs, std::span<cplx> samples) const
{
    const std::size_t n = n_;
    if (samples.size() != n || coeffs.size() != n)
        throw std::invalid_argument("ChebTransform::synthesize: size mismatch");

    if (mode_ != Mode::Fft)
    {
        thread_local std::vector<cplx> in;
        in.assign(coeffs.begin(), coeffs.end());
        if (mode_ == Mode::Dense)
        {
            for (std::size_t j = 0; j < n; ++j)
                samples[j] = 0.0;
            for (std::size_t k = 0; k < n; ++k)
            {
                const double* row = &cos_table_[k * n];
                const cplx b = in[k];
                for (std::size_t j = 0; j < n; ++j)
                    samples[j] += row[j] * b;
            }
            return;
        }
        for (std::size_t j = 0; j < n; ++j)
        {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += node_cos(k, j, n) * in[k];
            samples[j] = acc;
        }
        return;
    }

    thread_local std::vector<cplx> v;
    v.resize(n);
    // with beta_0 = b_0, beta_k = b_k / 2, beta_n = 0:
    // V_k = exp(i pi k/(2n)) (beta_k - i beta_{n-k})
    for (std::size_t k = 0; k < n; ++k)
    {
        const cplx bk = (k == 0) ? coeffs[0] : 0.5 * coeffs[k];
        const cplx bnk = (k == 0) ? cplx(0.0) : 0.5 * coeffs[n - k];
        v[k] = std::conj(shift_[k]) * (bk - cplx(0.0, 1.0) * bnk);
    }
    fft(v, true);
    for (std::size_t j = 0; j < n / 2; ++j)
    {
        samples[2 * j] = v[j];
        samples[2 * j + 1] = v[n - 1 - j];
    }
}

std::shared_ptr<const ChebTransform> transform_for(std::size_t n)
{
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const ChebTransform>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot)
        slot = std::make_shared<const ChebTransform>(n);
    return slot;
}

ChebSeries fct(std::span<const cplx> samples)
{
    if (samples.empty())
        throw std::invalid_argument("fct: empty input");
    ChebSeries out;
    out.coeffs.resize(samples.size());
    transform_for(samples.size())->analyze(samples, out.coeffs);
    return out;
}

std::vector<cplx> ifct(const ChebSeries& series, std::size_t n)
{
    if (series.size() > n)
        throw std::invalid_argument("ifct: series longer than node count");
    std::vector<cplx> samples(n);
    if (n == 0)
        return samples;
    std::vector<cplx> padded(n, cplx(0.0));
    std::copy(series.coeffs.begin(), series.coeffs.end(), padded.begin());
    transform_for(n)->synthesize(padded, samples);
    return samples;
}

ChebSeries truncate(const ChebSeries& series, std::size_t n)
{
    ChebSeries out;
    out.coeffs.assign(series.coeffs.begin(), series.coeffs.begin() + static_cast<std::ptrdiff_t>(std::min(n, series.size())));
    return out;
}

cplx evaluate(const ChebSeries& series, double x)
{
    cplx b1 = 0.0, b2 = 0.0;
    for (std::size_t k = series.size(); k-- > 1;)
    {
        const cplx b0 = series.coeffs[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    const cplx c0 = series.size() ? series.coeffs[0] : cplx(0.0);
    return c0 + x * b1 - b2;
}

} // namespace axiscat::fct
