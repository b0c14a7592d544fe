#pragma once
// Batch studies behind the command-line tool: radial and angular convergence
// sweeps, FLT accuracy and timing, and single solves, with CSV output.
#include <axiscat/lsoperator.hpp>
#include <axiscat/mie.hpp>
#include <axiscat/scatterers.hpp>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace axiscat::study
{
enum class StudyKind
{
    Radial,
    Angular,
    FltAccuracy,
    FltTiming,
    SingleSolve
};

std::string kind_name(StudyKind kind);
std::optional<StudyKind> parse_kind(const std::string& name);

/// Bad flags or parameter combinations; the tool exits with status 2.
class UsageError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct StudySpec
{
    StudyKind kind = StudyKind::SingleSolve;
    std::string scatterer = "sphere"; // sphere, offset-sphere, hollowed, vacuum, tabulated
    std::string table;                // file for the tabulated model
    std::vector<std::size_t> f_values{15};
    std::vector<std::size_t> ni_values{8};
    std::size_t n_d = 4;
    double k = 1.0;
    double beta = 2.2;
    double r_max = 4.0;
    double tol = 1e-10;
    std::size_t f_ref = 1023;                       // angular self-reference
    std::vector<std::size_t> sizes{256, 1024, 4096}; // FLT sizes
    std::size_t repeats = 5;                        // timing repetitions, minimum kept
    std::size_t raster_theta = 37; // angles of the output raster
    std::string moment_cache;
    std::string out;
    std::size_t threads = 0; // 0 keeps the runtime default

    /// Throws UsageError.
    void validate() const;
};

/// Sweep defaults per study, at desk scale.
StudySpec defaults_for(StudyKind kind);

/// Canonical flag list reproducing the study (without the program name).
std::vector<std::string> to_args(const StudySpec& spec);

scatter::ScattererModel make_scatterer(const StudySpec& spec);
/// Exact field when one is known: Mie for the sphere, the shifted Mie field
/// for the offset sphere, the plane wave in vacuum.
std::optional<mie::FieldFunction> exact_reference(const StudySpec& spec);

struct ConvergenceRow
{
    std::size_t value = 0; // swept N_i or F
    double error = 0.0;
    std::optional<double> ratio, log2_ratio;
    double seconds_per_iteration = 0.0;
    std::size_t iterations = 0;
    std::string failure; // empty when the solve succeeded
};

struct ConvergenceResult
{
    std::string swept; // "Ni" or "F"
    std::vector<ConvergenceRow> rows;
    std::string reference; // description of the reference solution
    /// log2 ratio of the last row with a ratio.
    std::optional<double> last_order() const;
    /// Mean of all log2 ratios.
    std::optional<double> mean_order() const;
    /// Least-squares slope of -log2(error) against log2(value + 1).
    std::optional<double> fitted_order() const;
};

ConvergenceResult run_radial_study(const StudySpec& spec);
ConvergenceResult run_angular_study(const StudySpec& spec);

struct FltRow
{
    std::size_t n = 0;
    // errors of each transform on the unit vector at index N/2; NaN when not measured
    double dlt = 0.0, flt = 0.0, flt_ext = 0.0, idlt = 0.0, iflt = 0.0, iflt_ext = 0.0;
    double forward_seconds = 0.0, inverse_seconds = 0.0; // NaN when not measured
};

struct FltBench
{
    std::vector<FltRow> rows;
    double model_coeff = 0.0;   // c in t = c N log2(N)^2 for the forward transform
    double model_residual = 0.0; // max relative deviation from the model
};

FltBench run_flt_bench(const StudySpec& spec, bool errors, bool timings);

struct SingleSolveResult
{
    ls::SolverConfig config;
    radial::RadialGrid grid;
    ls::SolveResult solve;
    std::optional<double> error; // against the exact reference when available
};

SingleSolveResult run_single_solve(const StudySpec& spec);

/// Solver configuration for one sweep point.
ls::SolverConfig solver_config(const StudySpec& spec, std::size_t f, std::size_t n_i);

// CSV output: '#' comment lines echo the parameters and the command line.
void write_header(std::ostream& os, const StudySpec& spec);
void write_convergence_csv(std::ostream& os, const StudySpec& spec, const ConvergenceResult& result);
void write_flt_csv(std::ostream& os, const StudySpec& spec, const FltBench& bench);
/// Modal samples: columns node, rho, n, re, im.
void write_modal_csv(std::ostream& os, const StudySpec& spec, const radial::RadialGrid& grid, const ls::ModalField& u);
/// Field at every radial node times raster_theta equispaced angles in [0, pi]:
/// columns rho, theta, re, im.
void write_raster_csv(std::ostream& os, const StudySpec& spec, const radial::RadialGrid& grid, const ls::ModalField& u);

/// Reads a modal CSV back; throws std::runtime_error on malformed input.
ls::ModalField read_modal_csv(std::istream& is, std::size_t expected_nodes);
/// Parameters echoed in the "# command:" line of a study CSV.
std::vector<std::string> read_command_line(std::istream& is);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);
} // namespace axiscat::study
