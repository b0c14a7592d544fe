#include <axiscat/gmres.hpp>

#include <cmath>
#include <string>

namespace axiscat::krylov
{

namespace
{
double norm2(std::span<const cplx> v)
{
    // scaled sum to stay clear of overflow
    double scale = 0.0, ssq = 1.0;
    for (const cplx& z : v)
        for (double c : {z.real(), z.imag()})
        {
            const double a = std::abs(c);
            if (a == 0.0)
                continue;
            if (scale < a)
            {
                ssq = 1.0 + ssq * (scale / a) * (scale / a);
                scale = a;
            }
            else
                ssq += (a / scale) * (a / scale);
        }
    return scale * std::sqrt(ssq);
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) // a^H b
{
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

// rotation with c real: [c s; -conj(s) c] [a; b] = [r; 0]
void make_givens(cplx a, cplx b, double& c, cplx& s)
{
    const double na = std::abs(a), nb = std::abs(b);
    if (nb == 0.0)
    {
        c = 1.0;
        s = 0.0;
        return;
    }
    if (na == 0.0)
    {
        c = 0.0;
        s = std::conj(b) / nb;
        return;
    }
    const double r = std::hypot(na, nb);
    c = na / r;
    s = (a / na) * std::conj(b) / r;
}

void residual(const LinearMap& apply, std::span<const cplx> b, std::span<const cplx> x, std::vector<cplx>& r)
{
    r.resize(b.size());
    apply(x, r);
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] = b[i] - r[i];
}
} // namespace

GmresFailure::GmresFailure(GmresResult b)
    : std::runtime_error("GMRES did not converge in " + std::to_string(b.iterations) +
                         " iterations (relative residual " + std::to_string(b.residual) + ")"),
      best(std::move(b))
{
}

GmresResult gmres_solve(const LinearMap& apply, std::span<const cplx> b, std::span<const cplx> x0, const GmresOptions& opt)
{
    if (!(opt.tol > 0.0) || opt.max_iters == 0 || opt.restart == 0)
        throw std::invalid_argument("gmres_solve: tol, max_iters and restart must be positive");
    const std::size_t n = b.size();
    if (!x0.empty() && x0.size() != n)
        throw std::invalid_argument("gmres_solve: initial guess size mismatch");

    GmresResult res;
    res.x.assign(n, cplx(0.0));
    if (!x0.empty())
        std::copy(x0.begin(), x0.end(), res.x.begin());

    const double bnorm = norm2(b);
    if (bnorm == 0.0)
    {
        res.x.assign(n, cplx(0.0));
        res.history.push_back(0.0);
        return res;
    }

    std::vector<cplx> r;
    residual(apply, b, res.x, r);
    double rel = norm2(r) / bnorm;
    res.history.push_back(rel);
    res.residual = rel;
    if (rel <= opt.tol)
        return res;

    const std::size_t m = opt.restart;
    std::vector<std::vector<cplx>> v(m + 1, std::vector<cplx>(n));
    std::vector<cplx> h((m + 1) * m), g(m + 1), sn(m), y(m);
    std::vector<double> cs(m);
    auto H = [&](std::size_t i, std::size_t j) -> cplx& { return h[i * m + j]; };

    while (res.iterations < opt.max_iters)
    {
        const double beta = norm2(r);
        for (std::size_t i = 0; i < n; ++i)
            v[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), cplx(0.0));
        g[0] = beta;

        std::size_t j = 0;
        for (; j < m && res.iterations < opt.max_iters; ++j)
        {
            apply(v[j], v[j + 1]);
            ++res.iterations;
            auto& w = v[j + 1];
            for (std::size_t i = 0; i <= j; ++i)
                H(i, j) = 0.0;
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t i = 0; i <= j; ++i)
                {
                    const cplx hij = dot(v[i], w);
                    H(i, j) += hij;
                    for (std::size_t q = 0; q < n; ++q)
                        w[q] -= hij * v[i][q];
                }
            const double hnext = norm2(w);
            H(j + 1, j) = hnext;
            if (hnext > 0.0)
                for (auto& z : w)
                    z /= hnext;

            for (std::size_t i = 0; i < j; ++i)
            {
                const cplx a = H(i, j), c2 = H(i + 1, j);
                H(i, j) = cs[i] * a + sn[i] * c2;
                H(i + 1, j) = -std::conj(sn[i]) * a + cs[i] * c2;
            }
            make_givens(H(j, j), H(j + 1, j), cs[j], sn[j]);
            H(j, j) = cs[j] * H(j, j) + sn[j] * H(j + 1, j);
            H(j + 1, j) = 0.0;
            g[j + 1] = -std::conj(sn[j]) * g[j];
            g[j] = cs[j] * g[j];

            rel = std::abs(g[j + 1]) / bnorm;
            res.history.push_back(rel);
            if (opt.on_iteration)
                opt.on_iteration(res.iterations, rel);
            if (rel <= opt.tol || hnext == 0.0)
            {
                ++j;
                break;
            }
        }

        // back substitution on the j x j triangle
        for (std::size_t i = j; i-- > 0;)
        {
            cplx s = g[i];
            for (std::size_t q = i + 1; q < j; ++q)
                s -= H(i, q) * y[q];
            y[i] = s / H(i, i);
        }
        for (std::size_t i = 0; i < j; ++i)
            for (std::size_t q = 0; q < n; ++q)
                res.x[q] += y[i] * v[i][q];

        residual(apply, b, res.x, r);
        res.residual = norm2(r) / bnorm;
        if (res.residual <= opt.tol)
            return res;
        // the estimate can undershoot the true residual; restart from the recomputed one
    }
    throw GmresFailure(std::move(res));
}

} // namespace axiscat::krylov
