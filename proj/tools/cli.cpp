#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace axiscat::cli
{

namespace
{
struct Flags
{
    std::string study, scatterer, table, out, raster, moment_cache, rerun;
    std::vector<std::size_t> f, ni, sizes;
    std::size_t nd = 0, f_ref = 0, repeats = 0, threads = 0, raster_theta = 0;
    double k = 0, beta = 0, rmax = 0, tol = 0;
};

void build(CLI::App& app, Flags& fl)
{
    app.add_option("--study", fl.study, "radial | angular | flt-accuracy | flt-timing | single");
    app.add_option("--rerun", fl.rerun, "repeat the study recorded in a CSV header");
    app.add_option("--scatterer", fl.scatterer, "sphere | offset-sphere | hollowed | vacuum | tabulated");
    app.add_option("--table", fl.table, "file of rows 'rho, l, Re(m_l), Im(m_l)' for the tabulated model");
    app.add_option("--F", fl.f, "angular truncation(s)")->delimiter(',');
    app.add_option("--Ni", fl.ni, "radial interval count(s)")->delimiter(',');
    app.add_option("--Nd", fl.nd, "Chebyshev nodes per interval");
    app.add_option("--k", fl.k, "wavenumber (default 1)");
    app.add_option("--beta", fl.beta, "hollowed sphere exponent (default 2.2)");
    app.add_option("--rmax", fl.rmax, "domain radius (default 4)");
    app.add_option("--tol", fl.tol, "GMRES relative residual (default 1e-10)");
    app.add_option("--F-ref", fl.f_ref, "reference F of the angular study (default 1023)");
    app.add_option("--sizes", fl.sizes, "FLT sizes")->delimiter(',');
    app.add_option("--repeats", fl.repeats, "timing repetitions (default 5)");
    app.add_option("--raster-theta", fl.raster_theta, "angles of the single-solve raster (default 37)");
    app.add_option("--out", fl.out, "CSV output file (default stdout)");
    app.add_option("--raster", fl.raster, "single solve: raster CSV file");
    app.add_option("--moment-cache", fl.moment_cache, "directory for cached moment tables");
    app.add_option("--threads", fl.threads, "OpenMP threads (1 for timing runs)");
}

study::StudySpec to_spec(const CLI::App& app, const Flags& fl)
{
    if (fl.study.empty())
        throw study::UsageError("--study is required");
    const auto kind = study::parse_kind(fl.study);
    if (!kind)
        throw study::UsageError("unknown study '" + fl.study + "'");
    study::StudySpec s = study::defaults_for(*kind);
    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--scatterer"))
        s.scatterer = fl.scatterer;
    if (given("--table"))
        s.table = fl.table;
    if (given("--F"))
        s.f_values = fl.f;
    if (given("--Ni"))
        s.ni_values = fl.ni;
    if (given("--Nd"))
        s.n_d = fl.nd;
    if (given("--k"))
        s.k = fl.k;
    if (given("--beta"))
        s.beta = fl.beta;
    if (given("--rmax"))
        s.r_max = fl.rmax;
    if (given("--tol"))
        s.tol = fl.tol;
    if (given("--F-ref"))
        s.f_ref = fl.f_ref;
    if (given("--sizes"))
        s.sizes = fl.sizes;
    if (given("--repeats"))
        s.repeats = fl.repeats;
    if (given("--raster-theta"))
        s.raster_theta = fl.raster_theta;
    if (given("--out"))
        s.out = fl.out;
    if (given("--moment-cache"))
        s.moment_cache = fl.moment_cache;
    if (given("--threads"))
        s.threads = fl.threads;
    s.validate();
    return s;
}

std::vector<std::string> reversed(const std::vector<std::string>& args)
{
    return {args.rbegin(), args.rend()}; // CLI11 parses a vector from the back
}

study::StudySpec parse_with(const std::vector<std::string>& args, Flags& fl)
{
    CLI::App app("axiscat");
    build(app, fl);
    try
    {
        auto v = reversed(args);
        app.parse(v);
    }
    catch (const CLI::ParseError& e)
    {
        throw study::UsageError(e.what());
    }
    if (!fl.rerun.empty())
    {
        std::ifstream in(fl.rerun);
        if (!in)
            throw study::UsageError("cannot open " + fl.rerun);
        std::vector<std::string> recorded;
        try
        {
            recorded = study::read_command_line(in);
        }
        catch (const std::runtime_error& e)
        {
            throw study::UsageError(e.what());
        }
        // flags given next to --rerun override the recorded ones
        std::vector<std::string> merged = recorded;
        for (std::size_t i = 0; i < args.size(); ++i)
        {
            if (args[i] == "--rerun")
            {
                ++i;
                continue;
            }
            merged.push_back(args[i]);
        }
        Flags again;
        const auto spec = parse_with(merged, again);
        fl = again;
        return spec;
    }
    return to_spec(app, fl);
}

bool any_failure(const study::ConvergenceResult& r, std::ostream& err)
{
    bool failed = false;
    for (const auto& row : r.rows)
        if (!row.failure.empty())
        {
            err << "row " << row.value << ": " << row.failure << '\n';
            failed = true;
        }
    return failed;
}
} // namespace

study::StudySpec parse_args(const std::vector<std::string>& args)
{
    Flags fl;
    return parse_with(args, fl);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Flags fl;
    study::StudySpec spec;
    try
    {
        spec = parse_with(args, fl);
    }
    catch (const study::UsageError& e)
    {
        err << "usage error: " << e.what() << "\nrun with --help for the flag list\n";
        return kUsage;
    }
#ifdef _OPENMP
    if (spec.threads > 0)
        omp_set_num_threads(static_cast<int>(spec.threads));
#endif

    std::ofstream file;
    if (!spec.out.empty())
    {
        file.open(spec.out);
        if (!file)
        {
            err << "usage error: cannot write " << spec.out << '\n';
            return kUsage;
        }
    }
    std::ostream& os = spec.out.empty() ? out : file;

    try
    {
        switch (spec.kind)
        {
        case study::StudyKind::Radial:
        case study::StudyKind::Angular: {
            const auto r = spec.kind == study::StudyKind::Radial ? study::run_radial_study(spec) : study::run_angular_study(spec);
            study::write_convergence_csv(os, spec, r);
            return any_failure(r, err) ? kSolveFailure : kOk;
        }
        case study::StudyKind::FltAccuracy:
        case study::StudyKind::FltTiming: {
            const bool acc = spec.kind == study::StudyKind::FltAccuracy;
            study::write_flt_csv(os, spec, study::run_flt_bench(spec, acc, !acc));
            return kOk;
        }
        case study::StudyKind::SingleSolve: {
            const auto r = study::run_single_solve(spec);
            study::write_modal_csv(os, spec, r.grid, r.solve.u);
            if (!fl.raster.empty())
            {
                std::ofstream ras(fl.raster);
                if (!ras)
                {
                    err << "usage error: cannot write " << fl.raster << '\n';
                    return kUsage;
                }
                study::write_raster_csv(ras, spec, r.grid, r.solve.u);
            }
            err << "iterations=" << r.solve.iterations << " residual=" << study::format_double(r.solve.residual)
                << " setup_seconds=" << study::format_double(r.solve.setup_seconds)
                << " solve_seconds=" << study::format_double(r.solve.solve_seconds);
            if (r.error)
                err << " error=" << study::format_double(*r.error);
            err << '\n';
            return kOk;
        }
        }
    }
    catch (const study::UsageError& e)
    {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }
    catch (const krylov::GmresFailure& e)
    {
        err << "solve failed: " << e.what() << '\n';
        return kSolveFailure;
    }
    catch (const radial::MomentConvergenceError& e)
    {
        err << "solve failed: " << e.what() << '\n';
        return kSolveFailure;
    }
    catch (const mie::MieResonanceError& e)
    {
        err << "solve failed: " << e.what() << '\n';
        return kSolveFailure;
    }
    catch (const std::invalid_argument& e)
    {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }
    catch (const std::runtime_error& e)
    {
        err << "error: " << e.what() << '\n';
        return kSolveFailure;
    }
    return kOk;
}

} // namespace axiscat::cli
