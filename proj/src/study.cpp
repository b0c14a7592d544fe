#include <axiscat/study.hpp>

#include <axiscat/flt.hpp>
#include <axiscat/gmres.hpp>
#include <axiscat/orthopoly.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace axiscat::study
{

namespace
{
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join(const std::vector<std::size_t>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

double mean(const std::vector<double>& v)
{
    if (v.empty())
        return 0.0;
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / double(v.size());
}

double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

// minimum over repeats of the mean time of enough calls to fill ~20 ms
template <class F>
double time_min(F&& f, std::size_t repeats)
{
    using clock = std::chrono::steady_clock;
    std::size_t inner = 1;
    for (;;)
    {
        const auto t0 = clock::now();
        for (std::size_t i = 0; i < inner; ++i)
            f();
        if (std::chrono::duration<double>(clock::now() - t0).count() > 0.02 || inner > (1u << 20))
            break;
        inner *= 2;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r)
    {
        const auto t0 = clock::now();
        for (std::size_t i = 0; i < inner; ++i)
            f();
        best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count() / double(inner));
    }
    return best;
}

void fill_ratios(std::vector<ConvergenceRow>& rows)
{
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        const double a = rows[i - 1].error, b = rows[i].error;
        if (rows[i - 1].failure.empty() && rows[i].failure.empty() && b > 0.0 && std::isfinite(a))
        {
            rows[i].ratio = a / b;
            rows[i].log2_ratio = std::log2(a / b);
        }
    }
}

struct SolvedPoint
{
    std::optional<ls::SolveResult> result;
    std::string failure;
};

SolvedPoint solve_point(const ls::OperatorContext& ctx, const scatter::ScattererModel& model, double k)
{
    SolvedPoint p;
    try
    {
        p.result = ls::solve_scattering(ctx, ls::default_incident(model, k));
    }
    catch (const krylov::GmresFailure& e)
    {
        p.failure = e.what();
    }
    return p;
}
} // namespace

std::string kind_name(StudyKind kind)
{
    switch (kind)
    {
    case StudyKind::Radial:
        return "radial";
    case StudyKind::Angular:
        return "angular";
    case StudyKind::FltAccuracy:
        return "flt-accuracy";
    case StudyKind::FltTiming:
        return "flt-timing";
    case StudyKind::SingleSolve:
        return "single";
    }
    return "single";
}

std::optional<StudyKind> parse_kind(const std::string& name)
{
    for (StudyKind k : {StudyKind::Radial, StudyKind::Angular, StudyKind::FltAccuracy, StudyKind::FltTiming, StudyKind::SingleSolve})
        if (kind_name(k) == name)
            return k;
    return std::nullopt;
}

void StudySpec::validate() const
{
    static const std::vector<std::string> known{"sphere", "offset-sphere", "hollowed", "vacuum", "tabulated"};
    if (std::find(known.begin(), known.end(), scatterer) == known.end())
        throw UsageError("unknown scatterer '" + scatterer + "' (sphere, offset-sphere, hollowed, vacuum, tabulated)");
    if (scatterer == "tabulated" && table.empty())
        throw UsageError("the tabulated scatterer needs --table FILE");
    if (f_values.empty() || ni_values.empty() || sizes.empty())
        throw UsageError("sweep lists must be non-empty");
    if (n_d == 0 || std::find(ni_values.begin(), ni_values.end(), 0u) != ni_values.end())
        throw UsageError("N_i and N_d must be positive");
    if (!(k > 0.0) || !(r_max > 0.0) || !(tol > 0.0) || !(beta >= 0.0))
        throw UsageError("k, R_max and tol must be positive and beta non-negative");
    if (raster_theta < 2)
        throw UsageError("the raster needs at least two angles");
    for (std::size_t n : sizes)
        if (!is_power_of_two(n) || n < 4)
            throw UsageError("FLT sizes must be powers of two >= 4");
    if (kind == StudyKind::Angular)
        for (std::size_t f : f_values)
            if (f >= f_ref)
                throw UsageError("angular sweep values must lie below the reference F");
    if (kind == StudyKind::Radial && !exact_reference(*this) && ni_values.size() < 2)
        throw UsageError("a radial study without an exact reference needs at least two N_i values");
    if (scatterer == "offset-sphere" && r_max < 3.0)
        throw UsageError("the offset sphere needs R_max >= 3");
    if ((scatterer == "hollowed") && r_max < 2.0)
        throw UsageError("the hollowed sphere needs R_max >= 2");
}

StudySpec defaults_for(StudyKind kind)
{
    StudySpec s;
    s.kind = kind;
    switch (kind)
    {
    case StudyKind::Radial:
        s.f_values = {255};
        s.ni_values = {8, 16, 32, 64};
        s.n_d = 4;
        break;
    case StudyKind::Angular:
        s.scatterer = "hollowed";
        s.f_values = {15, 31, 63, 127, 255, 511};
        s.f_ref = 1023;
        s.ni_values = {128};
        s.n_d = 2;
        break;
    case StudyKind::FltAccuracy:
    case StudyKind::FltTiming:
        s.sizes = {256, 1024, 4096};
        break;
    case StudyKind::SingleSolve:
        s.f_values = {31};
        s.ni_values = {16};
        s.n_d = 4;
        break;
    }
    return s;
}

std::vector<std::string> to_args(const StudySpec& s)
{
    std::vector<std::string> a{"--study", kind_name(s.kind)};
    auto add = [&](const std::string& flag, const std::string& value) {
        a.push_back(flag);
        a.push_back(value);
    };
    switch (s.kind)
    {
    case StudyKind::FltAccuracy:
    case StudyKind::FltTiming:
        add("--sizes", join(s.sizes));
        add("--repeats", std::to_string(s.repeats));
        break;
    default:
        add("--scatterer", s.scatterer);
        if (!s.table.empty())
            add("--table", s.table);
        add("--F", join(s.f_values));
        add("--Ni", join(s.ni_values));
        add("--Nd", std::to_string(s.n_d));
        add("--k", format_double(s.k));
        add("--beta", format_double(s.beta));
        add("--rmax", format_double(s.r_max));
        add("--tol", format_double(s.tol));
        if (s.kind == StudyKind::Angular)
            add("--F-ref", std::to_string(s.f_ref));
        if (s.kind == StudyKind::SingleSolve)
            add("--raster-theta", std::to_string(s.raster_theta));
        break;
    }
    if (s.threads != 0)
        add("--threads", std::to_string(s.threads));
    return a;
}

scatter::ScattererModel make_scatterer(const StudySpec& spec)
{
    if (spec.scatterer == "sphere")
        return scatter::HomogeneousSphere{};
    if (spec.scatterer == "offset-sphere")
        return scatter::OffsetSphere{};
    if (spec.scatterer == "hollowed")
        return scatter::HollowedSphere{spec.beta};
    if (spec.scatterer == "vacuum")
        return scatter::HomogeneousSphere{1.0, 1.0};
    if (spec.scatterer == "tabulated")
        return scatter::load_tabulated(spec.table);
    throw UsageError("unknown scatterer '" + spec.scatterer + "'");
}

std::optional<mie::FieldFunction> exact_reference(const StudySpec& spec)
{
    const double k = spec.k;
    if (spec.scatterer == "sphere")
    {
        auto sol = std::make_shared<const mie::MieSolution>(mie::mie_solve(k));
        return mie::FieldFunction([sol](double r, double t) { return mie::eval_exact(*sol, r, t); });
    }
    if (spec.scatterer == "offset-sphere")
    {
        const scatter::OffsetSphere body;
        auto sol = std::make_shared<const mie::MieSolution>(mie::mie_solve(k, 0, body.radius, body.index));
        const double d = body.offset;
        return mie::FieldFunction([sol, d](double r, double t) { return mie::eval_shifted(*sol, d, r, t); });
    }
    if (spec.scatterer == "vacuum")
        return mie::FieldFunction([k](double r, double t) { return std::exp(cplx(0.0, k * r * t)); });
    return std::nullopt;
}

ls::SolverConfig solver_config(const StudySpec& spec, std::size_t f, std::size_t n_i)
{
    ls::SolverConfig c;
    c.f = f;
    c.n_i = n_i;
    c.n_d = spec.n_d;
    c.k = spec.k;
    c.r_max = spec.r_max;
    c.tol = spec.tol;
    c.moment_cache = spec.moment_cache;
    return c;
}

std::optional<double> ConvergenceResult::last_order() const
{
    for (auto it = rows.rbegin(); it != rows.rend(); ++it)
        if (it->log2_ratio)
            return it->log2_ratio;
    return std::nullopt;
}

std::optional<double> ConvergenceResult::mean_order() const
{
    std::vector<double> v;
    for (const auto& r : rows)
        if (r.log2_ratio)
            v.push_back(*r.log2_ratio);
    if (v.empty())
        return std::nullopt;
    return mean(v);
}

std::optional<double> ConvergenceResult::fitted_order() const
{
    std::vector<double> x, y;
    for (const auto& r : rows)
        if (r.failure.empty() && r.error > 0.0 && std::isfinite(r.error))
        {
            x.push_back(std::log2(double(r.value) + 1.0));
            y.push_back(-std::log2(r.error));
        }
    if (x.size() < 2)
        return std::nullopt;
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

ConvergenceResult run_radial_study(const StudySpec& spec)
{
    spec.validate();
    const auto model = make_scatterer(spec);
    const auto exact = exact_reference(spec);
    const std::size_t f = spec.f_values.front();
    ConvergenceResult out;
    out.swept = "Ni";

    std::vector<std::size_t> values = spec.ni_values;
    std::optional<ls::FieldInterpolant> reference;
    if (exact)
        out.reference = "exact";
    else
    {
        // finest grid as the reference; it is not reported as a row
        const std::size_t finest = *std::max_element(values.begin(), values.end());
        values.erase(std::remove(values.begin(), values.end(), finest), values.end());
        const ls::OperatorContext ctx(solver_config(spec, f, finest), model);
        const auto r = ls::solve_scattering(ctx, ls::default_incident(model, spec.k));
        reference.emplace(ctx.grid(), r.u);
        out.reference = "self Ni=" + std::to_string(finest);
    }

    for (std::size_t ni : values)
    {
        ConvergenceRow row;
        row.value = ni;
        std::optional<ls::OperatorContext> ctx_holder;
        SolvedPoint p;
        try
        {
            ctx_holder.emplace(solver_config(spec, f, ni), model);
            p = solve_point(*ctx_holder, model, spec.k);
        }
        catch (const radial::MomentConvergenceError& e)
        {
            p.failure = e.what();
        }
        if (!p.result)
        {
            row.failure = p.failure;
            row.error = kNaN;
            out.rows.push_back(row);
            continue;
        }
        const auto& ctx = *ctx_holder;
        const ls::FieldInterpolant u(ctx.grid(), p.result->u);
        const auto samples = mie::default_samples(ctx.grid());
        auto approx = [&](double r, double t) { return u(r, t); };
        row.error = exact ? mie::field_error(approx, *exact, samples)
                          : mie::field_error(approx, [&](double r, double t) { return (*reference)(r, t); }, samples);
        row.seconds_per_iteration = mean(p.result->iteration_seconds);
        row.iterations = p.result->iterations;
        out.rows.push_back(row);
    }
    fill_ratios(out.rows);
    return out;
}

ConvergenceResult run_angular_study(const StudySpec& spec)
{
    spec.validate();
    const auto model = make_scatterer(spec);
    const std::size_t ni = spec.ni_values.front();
    ConvergenceResult out;
    out.swept = "F";
    out.reference = "self F=" + std::to_string(spec.f_ref);

    // one moment table at the largest F serves every sweep point
    const auto ref_cfg = solver_config(spec, spec.f_ref, ni);
    const ls::OperatorContext ref_ctx(ref_cfg, model);
    const auto moments = ref_ctx.moments();
    const auto ref = ls::solve_scattering(ref_ctx, ls::default_incident(model, spec.k));
    const ls::FieldInterpolant reference(ref_ctx.grid(), ref.u);
    const auto samples = mie::default_samples(ref_ctx.grid());

    for (std::size_t f : spec.f_values)
    {
        ConvergenceRow row;
        row.value = f;
        const ls::OperatorContext ctx(solver_config(spec, f, ni), model, moments);
        const auto p = solve_point(ctx, model, spec.k);
        if (!p.result)
        {
            row.failure = p.failure;
            row.error = kNaN;
            out.rows.push_back(row);
            continue;
        }
        const ls::FieldInterpolant u(ctx.grid(), p.result->u);
        row.error = mie::field_error([&](double r, double t) { return u(r, t); },
                                     [&](double r, double t) { return reference(r, t); }, samples);
        row.seconds_per_iteration = mean(p.result->iteration_seconds);
        row.iterations = p.result->iterations;
        out.rows.push_back(row);
    }
    fill_ratios(out.rows);
    return out;
}

FltBench run_flt_bench(const StudySpec& spec, bool errors, bool timings)
{
    spec.validate();
    FltBench bench;
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> g;
    for (std::size_t n : spec.sizes)
    {
        FltRow row;
        row.n = n;
        const flt::FltPlan plan(n);
        if (errors)
        {
            std::vector<cplx> v(n, cplx(0.0));
            v[n / 2] = 1.0;
            const auto exact = flt::idlt(v, flt::Precision::Extended);
            const flt::FltPlan plan_ext(n, flt::Precision::Extended);
            row.dlt = sup_diff(flt::dlt(exact), v);
            row.flt = sup_diff(flt::flt(plan, exact), v);
            row.flt_ext = sup_diff(flt::flt(plan_ext, exact), v);
            row.idlt = sup_diff(flt::idlt(v), exact);
            row.iflt = sup_diff(flt::iflt(plan, v), exact);
            row.iflt_ext = sup_diff(flt::iflt(plan_ext, v), exact);
        }
        else
            row.dlt = row.flt = row.flt_ext = row.idlt = row.iflt = row.iflt_ext = kNaN;
        if (timings)
        {
            std::vector<cplx> samples(2 * n), coeffs(n);
            for (auto& z : samples)
                z = {g(rng), g(rng)};
            for (auto& z : coeffs)
                z = {g(rng), g(rng)};
            std::vector<cplx> c_out(n), s_out(2 * n);
            row.forward_seconds = time_min([&] { plan.forward(samples, c_out); }, spec.repeats);
            row.inverse_seconds = time_min([&] { plan.inverse(coeffs, s_out); }, spec.repeats);
        }
        else
            row.forward_seconds = row.inverse_seconds = kNaN;
        bench.rows.push_back(row);
    }
    if (timings)
    {
        double num = 0.0, den = 0.0;
        for (const auto& r : bench.rows)
        {
            const double l = std::log2(double(r.n));
            const double m = double(r.n) * l * l;
            // relative least squares: minimise sum (t/(c m) - 1)^2 in c via weights 1/t^2
            num += m / r.forward_seconds;
            den += m * m / (r.forward_seconds * r.forward_seconds);
        }
        bench.model_coeff = num / den;
        for (const auto& r : bench.rows)
        {
            const double l = std::log2(double(r.n));
            const double model = bench.model_coeff * double(r.n) * l * l;
            bench.model_residual = std::max(bench.model_residual, std::abs(r.forward_seconds - model) / model);
        }
    }
    return bench;
}

SingleSolveResult run_single_solve(const StudySpec& spec)
{
    spec.validate();
    const auto model = make_scatterer(spec);
    SingleSolveResult out;
    out.config = solver_config(spec, spec.f_values.front(), spec.ni_values.front());
    const auto t0 = std::chrono::steady_clock::now();
    const ls::OperatorContext ctx(out.config, model);
    const double setup = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.grid = ctx.grid();
    out.solve = ls::solve_scattering(ctx, ls::default_incident(model, spec.k));
    out.solve.setup_seconds = setup;
    if (const auto exact = exact_reference(spec))
    {
        const ls::FieldInterpolant u(out.grid, out.solve.u);
        out.error = mie::field_error([&](double r, double t) { return u(r, t); }, *exact, mie::default_samples(out.grid));
    }
    return out;
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_header(std::ostream& os, const StudySpec& spec)
{
    os << "# axiscat " << kind_name(spec.kind) << " study\n";
    os << "# command: axiscat";
    for (const auto& a : to_args(spec))
        os << ' ' << a;
    os << '\n';
}

void write_convergence_csv(std::ostream& os, const StudySpec& spec, const ConvergenceResult& result)
{
    write_header(os, spec);
    os << "# reference: " << result.reference << '\n';
    os << result.swept << ",error,ratio,log2_ratio,seconds_per_iteration,iterations,failure\n";
    for (const auto& r : result.rows)
    {
        os << r.value << ',' << format_double(r.error) << ',' << (r.ratio ? format_double(*r.ratio) : "") << ','
           << (r.log2_ratio ? format_double(*r.log2_ratio) : "") << ',' << format_double(r.seconds_per_iteration) << ','
           << r.iterations << ',';
        std::string f = r.failure;
        std::replace(f.begin(), f.end(), ',', ';');
        os << f << '\n';
    }
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("nan"); };
    os << "# mean_log2_ratio=" << opt(result.mean_order()) << " last_log2_ratio=" << opt(result.last_order())
       << " fitted_order=" << opt(result.fitted_order()) << '\n';
}

void write_flt_csv(std::ostream& os, const StudySpec& spec, const FltBench& bench)
{
    write_header(os, spec);
    os << "N,dlt,flt,flt_ext,idlt,iflt,iflt_ext,forward_seconds,inverse_seconds\n";
    for (const auto& r : bench.rows)
        os << r.n << ',' << format_double(r.dlt) << ',' << format_double(r.flt) << ',' << format_double(r.flt_ext) << ','
           << format_double(r.idlt) << ',' << format_double(r.iflt) << ',' << format_double(r.iflt_ext) << ','
           << format_double(r.forward_seconds) << ',' << format_double(r.inverse_seconds) << '\n';
    if (bench.model_coeff > 0.0)
        os << "# model t = c N log2(N)^2: c=" << format_double(bench.model_coeff)
           << " max_relative_residual=" << format_double(bench.model_residual) << '\n';
}

void write_modal_csv(std::ostream& os, const StudySpec& spec, const radial::RadialGrid& grid, const ls::ModalField& u)
{
    write_header(os, spec);
    os << "node,rho,n,re,im\n";
    for (std::size_t i = 0; i < u.nodes; ++i)
        for (std::size_t n = 0; n < u.modes; ++n)
            os << i << ',' << format_double(grid.nodes[i]) << ',' << n << ',' << format_double(u.at(i, n).real()) << ','
               << format_double(u.at(i, n).imag()) << '\n';
}

void write_raster_csv(std::ostream& os, const StudySpec& spec, const radial::RadialGrid& grid, const ls::ModalField& u)
{
    write_header(os, spec);
    os << "rho,theta,re,im\n";
    for (std::size_t i = 0; i < u.nodes; ++i)
        for (std::size_t a = 0; a < spec.raster_theta; ++a)
        {
            const double theta = std::numbers::pi * double(a) / double(spec.raster_theta - 1);
            const auto p = orthopoly::legendre_column(u.modes - 1, std::cos(theta));
            cplx s = 0.0;
            for (std::size_t n = 0; n < u.modes; ++n)
                s += u.at(i, n) * p[n];
            os << format_double(grid.nodes[i]) << ',' << format_double(theta) << ',' << format_double(s.real()) << ','
               << format_double(s.imag()) << '\n';
        }
}

ls::ModalField read_modal_csv(std::istream& is, std::size_t expected_nodes)
{
    struct Entry
    {
        std::size_t node, n;
        cplx v;
    };
    std::vector<Entry> entries;
    std::size_t modes = 0;
    std::string line;
    bool header = false;
    while (std::getline(is, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        if (!header)
        {
            if (line != "node,rho,n,re,im")
                throw std::runtime_error("read_modal_csv: unexpected header '" + line + "'");
            header = true;
            continue;
        }
        std::stringstream ss(line);
        std::string f[5];
        for (auto& x : f)
            if (!std::getline(ss, x, ','))
                throw std::runtime_error("read_modal_csv: short row '" + line + "'");
        try
        {
            Entry e{std::stoul(f[0]), std::stoul(f[2]), cplx(std::stod(f[3]), std::stod(f[4]))};
            modes = std::max(modes, e.n + 1);
            entries.push_back(e);
        }
        catch (const std::logic_error&)
        {
            throw std::runtime_error("read_modal_csv: malformed row '" + line + "'");
        }
    }
    if (entries.size() != modes * expected_nodes)
        throw std::runtime_error("read_modal_csv: expected " + std::to_string(expected_nodes) + " nodes");
    ls::ModalField u(modes, expected_nodes);
    for (const auto& e : entries)
    {
        if (e.node >= expected_nodes)
            throw std::runtime_error("read_modal_csv: node index out of range");
        u.at(e.node, e.n) = e.v;
    }
    return u;
}

std::vector<std::string> read_command_line(std::istream& is)
{
    const std::string tag = "# command: axiscat";
    std::string line;
    while (std::getline(is, line))
        if (line.rfind(tag, 0) == 0)
        {
            std::stringstream ss(line.substr(tag.size()));
            std::vector<std::string> args;
            std::string a;
            while (ss >> a)
                args.push_back(a);
            return args;
        }
    throw std::runtime_error("no '# command:' line found");
}

} // namespace axiscat::study
