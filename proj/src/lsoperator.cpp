#include <axiscat/lsoperator.hpp>

#include <axiscat/orthopoly.hpp>

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace axiscat::ls
{

namespace
{
const cplx kHalfI(0.0, 0.5);

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
} // namespace

void SolverConfig::validate() const
{
    if (n_i == 0 || n_d == 0)
        throw std::invalid_argument("SolverConfig: N_i and N_d must be positive");
    if (!(k > 0.0) || !std::isfinite(k))
        throw std::invalid_argument("SolverConfig: k must be positive");
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw std::invalid_argument("SolverConfig: R_max must be positive");
    if (!(tol > 0.0))
        throw std::invalid_argument("SolverConfig: tol must be positive");
    if (max_iters == 0 || restart == 0)
        throw std::invalid_argument("SolverConfig: max_iters and restart must be positive");
}

OperatorContext::OperatorContext(const SolverConfig& config, const scatter::ScattererModel& model,
                                 std::shared_ptr<const radial::MomentTable> moments)
    : config_(config)
{
    config_.validate();
    if (scatter::support_radius(model) > config_.r_max * (1.0 + 1e-12))
        throw std::invalid_argument("OperatorContext: scatterer extends beyond R_max");
    grid_ = radial::build_grid(config_.r_max, config_.n_i, config_.n_d);
    const std::size_t f = config_.f, nodes = grid_.node_count(), ml = 2 * f + 1;

    contrast_.resize(nodes * ml);
    kind_.assign(nodes, NodeKind::Empty);
    for (std::size_t i = 0; i < nodes; ++i)
    {
        const auto m = scatter::contrast_coeffs(model, grid_.nodes[i], 2 * f);
        std::copy(m.begin(), m.end(), contrast_.begin() + static_cast<std::ptrdiff_t>(i * ml));
        bool higher = false;
        for (std::size_t l = 1; l < ml; ++l)
            higher = higher || m[l] != cplx(0.0);
        if (higher)
            kind_[i] = NodeKind::Full;
        else if (m[0] != cplx(0.0))
            kind_[i] = NodeKind::Radial;
        vacuum_ = vacuum_ && kind_[i] == NodeKind::Empty;
    }

    plan_ = std::make_shared<const flt::FltPlan>(config_.transform_size());
    const std::size_t size = plan_->size();
    m_samples_.resize(nodes);
    std::vector<cplx> padded(size);
    for (std::size_t i = 0; i < nodes; ++i)
    {
        if (kind_[i] != NodeKind::Full)
            continue;
        std::fill(padded.begin(), padded.end(), cplx(0.0));
        const auto m = contrast(i);
        std::copy(m.begin(), m.end(), padded.begin());
        m_samples_[i] = flt::iflt(*plan_, padded);
    }

    if (vacuum_)
        return;
    if (moments)
        moments_ = std::move(moments);
    else if (!config_.moment_cache.empty())
        moments_ = std::make_shared<const radial::MomentTable>(
            radial::precompute_moments_cached(grid_, f, config_.k, config_.moment_cache));
    else
        moments_ = std::make_shared<const radial::MomentTable>(radial::precompute_moments(grid_, f, config_.k));
    if (moments_->f < f || moments_->k != config_.k)
        throw std::invalid_argument("OperatorContext: moment table does not match the configuration");
    kernel_ = std::make_unique<radial::RadialKernel>(grid_, moments_);
}

void OperatorContext::angular_integrate(std::span<const cplx> u, std::span<const cplx> m, std::span<cplx> out) const
{
    const std::size_t f = config_.f, size = plan_->size();
    if (u.size() != f + 1 || m.size() != 2 * f + 1 || out.size() != f + 1)
        throw std::invalid_argument("angular_integrate: size mismatch");
    std::vector<cplx> pu(size, cplx(0.0)), pm(size, cplx(0.0));
    std::copy(u.begin(), u.end(), pu.begin());
    std::copy(m.begin(), m.end(), pm.begin());
    auto su = flt::iflt(*plan_, pu);
    const auto sm = flt::iflt(*plan_, pm);
    for (std::size_t q = 0; q < su.size(); ++q)
        su[q] *= sm[q];
    const auto c = flt::flt(*plan_, su);
    for (std::size_t n = 0; n <= f; ++n)
        out[n] = c[n] * (2.0 / double(2 * n + 1));
}

void OperatorContext::angular_integrate(std::size_t node, std::span<const cplx> u, std::span<cplx> out) const
{
    const std::size_t f = config_.f;
    if (u.size() != f + 1 || out.size() != f + 1)
        throw std::invalid_argument("angular_integrate: size mismatch");
    switch (kind_.at(node))
    {
    case NodeKind::Empty:
        std::fill(out.begin(), out.end(), cplx(0.0));
        return;
    case NodeKind::Radial: {
        const cplx m0 = contrast_[node * (2 * f + 1)];
        for (std::size_t n = 0; n <= f; ++n)
            out[n] = m0 * u[n] * (2.0 / double(2 * n + 1));
        return;
    }
    case NodeKind::Full:
        break;
    }
    const std::size_t size = plan_->size();
    thread_local std::vector<cplx> coeffs, samples;
    coeffs.assign(size, cplx(0.0));
    samples.resize(2 * size);
    std::copy(u.begin(), u.end(), coeffs.begin());
    plan_->inverse(coeffs, samples);
    const auto& ms = m_samples_[node];
    for (std::size_t q = 0; q < samples.size(); ++q)
        samples[q] *= ms[q];
    plan_->forward(samples, coeffs);
    for (std::size_t n = 0; n <= f; ++n)
        out[n] = coeffs[n] * (2.0 / double(2 * n + 1));
}

double OperatorContext::padding_leak(std::size_t node, std::span<const cplx> u) const
{
    if (kind_.at(node) != NodeKind::Full)
        return 0.0;
    const std::size_t size = plan_->size(), f = config_.f;
    std::vector<cplx> coeffs(size, cplx(0.0)), samples(2 * size);
    std::copy(u.begin(), u.end(), coeffs.begin());
    plan_->inverse(coeffs, samples);
    for (std::size_t q = 0; q < samples.size(); ++q)
        samples[q] *= m_samples_[node][q];
    plan_->forward(samples, coeffs);
    double leak = 0.0;
    for (std::size_t n = 3 * f + 1; n < size; ++n)
        leak = std::max(leak, std::abs(coeffs[n]));
    return leak;
}

void OperatorContext::apply_kernel(std::span<const cplx> v, std::span<cplx> out) const
{
    const std::size_t modes = config_.modes(), nodes = grid_.node_count();
    if (v.size() != modes * nodes || out.size() != modes * nodes)
        throw std::invalid_argument("apply_kernel: size mismatch");
    if (vacuum_)
    {
        std::fill(out.begin(), out.end(), cplx(0.0));
        return;
    }

    std::vector<cplx> integrals(modes * nodes);
    const long long nn = static_cast<long long>(nodes);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nn; ++i)
    {
        const std::size_t node = static_cast<std::size_t>(i);
        angular_integrate(node, v.subspan(node * modes, modes),
                          std::span<cplx>(integrals).subspan(node * modes, modes));
    }

    const long long mm = static_cast<long long>(modes);
#pragma omp parallel for schedule(static)
    for (long long nl = 0; nl < mm; ++nl)
    {
        const std::size_t n = static_cast<std::size_t>(nl);
        thread_local std::vector<cplx> column, k_out;
        column.resize(nodes);
        k_out.resize(nodes);
        for (std::size_t node = 0; node < nodes; ++node)
            column[node] = integrals[node * modes + n];
        kernel_->apply(n, column, k_out);
        for (std::size_t node = 0; node < nodes; ++node)
            out[node * modes + n] = k_out[node];
    }
}

void OperatorContext::apply_forward(std::span<const cplx> v, std::span<cplx> out) const
{
    apply_kernel(v, out);
    for (std::size_t q = 0; q < v.size(); ++q)
        out[q] = v[q] - kHalfI * out[q];
}

ModalField OperatorContext::apply_forward(const ModalField& v) const
{
    ModalField out(v.modes, v.nodes);
    apply_forward(v.data, out.data);
    return out;
}

ModalField incident_field(const radial::RadialGrid& grid, std::size_t f, const scatter::IncidentField& inc)
{
    ModalField u(f + 1, grid.node_count());
    for (std::size_t i = 0; i < grid.node_count(); ++i)
    {
        const auto c = scatter::incident_coeffs(inc, grid.nodes[i], f);
        std::copy(c.begin(), c.end(), u.data.begin() + static_cast<std::ptrdiff_t>(i * (f + 1)));
    }
    return u;
}

scatter::IncidentField default_incident(const scatter::ScattererModel& model, double k)
{
    scatter::IncidentField inc;
    inc.k = k;
    if (const auto* s = std::get_if<scatter::OffsetSphere>(&model))
        inc.shift = s->offset;
    return inc;
}

SolveResult solve_scattering(const OperatorContext& ctx, const scatter::IncidentField& inc)
{
    const auto& cfg = ctx.config();
    if (inc.k != cfg.k)
        throw std::invalid_argument("solve_scattering: incident wavenumber differs from the configuration");
    SolveResult out;
    const ModalField rhs = incident_field(ctx.grid(), cfg.f, inc);

    krylov::GmresOptions opt;
    opt.tol = cfg.tol;
    opt.max_iters = cfg.max_iters;
    opt.restart = cfg.restart;
    krylov::LinearMap apply = [&](std::span<const cplx> x, std::span<cplx> y) {
        const auto t0 = std::chrono::steady_clock::now();
        ctx.apply_forward(x, y);
        out.iteration_seconds.push_back(seconds_since(t0));
    };

    const auto t0 = std::chrono::steady_clock::now();
    krylov::GmresResult g = krylov::gmres_solve(apply, rhs.data, rhs.data, opt);
    out.solve_seconds = seconds_since(t0);
    out.u = ModalField(rhs.modes, rhs.nodes);
    out.u.data = std::move(g.x);
    out.iterations = g.iterations;
    out.residual = g.residual;
    out.history = std::move(g.history);
    return out;
}

SolveResult solve_scattering(const SolverConfig& config, const scatter::ScattererModel& model)
{
    const auto t0 = std::chrono::steady_clock::now();
    const OperatorContext ctx(config, model);
    const double setup = seconds_since(t0);
    SolveResult r = solve_scattering(ctx, default_incident(model, config.k));
    r.setup_seconds = setup;
    return r;
}

FieldInterpolant::FieldInterpolant(const radial::RadialGrid& grid, const ModalField& u)
    : grid_(grid), modes_(u.modes), fits_(u.modes)
{
    if (u.nodes != grid.node_count())
        throw std::invalid_argument("FieldInterpolant: field does not match the grid");
    std::vector<cplx> column(u.nodes);
    for (std::size_t n = 0; n < modes_; ++n)
    {
        for (std::size_t i = 0; i < u.nodes; ++i)
            column[i] = u.at(i, n);
        fits_[n] = radial::fit_radial(grid_, column);
    }
}

cplx FieldInterpolant::mode(std::size_t n, double rho) const
{
    return radial::eval_fit(grid_, fits_.at(n), rho);
}

cplx FieldInterpolant::operator()(double rho, double cos_theta) const
{
    const auto p = orthopoly::legendre_column(modes_ - 1, cos_theta);
    cplx s = 0.0;
    for (std::size_t n = 0; n < modes_; ++n)
        s += mode(n, rho) * p[n];
    return s;
}

} // namespace axiscat::ls
