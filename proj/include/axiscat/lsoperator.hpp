#pragma once
// Discrete Lippmann-Schwinger operator for axisymmetric fields.
//
// The unknown is the modal field u_n(rho), n = 0..F, sampled at the radial
// grid nodes. Each application computes, per node, the angular integrals
//   I_n = int u m P_n sin(theta) dtheta = tau_n FLT(IFLT(u) IFLT(m))_n
// at transform size L = nextpow2(3F+1), then per mode the radial kernel K_n,
// and returns (A v)_n = v_n - (i/2) K_n[v]. The solve targets A u = u^i.
#include <axiscat/flt.hpp>
#include <axiscat/gmres.hpp>
#include <axiscat/radialkernel.hpp>
#include <axiscat/scatterers.hpp>

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace axiscat::ls
{
struct SolverConfig
{
    std::size_t f = 15; // angular truncation F
    std::size_t n_i = 8;
    std::size_t n_d = 4;
    double k = 1.0;
    double r_max = 4.0;
    double tol = 1e-10;
    std::size_t max_iters = 2000;
    std::size_t restart = 50;
    std::string moment_cache; // directory; empty disables the cache

    std::size_t modes() const { return f + 1; }
    /// Smallest power of two >= 3F+1.
    std::size_t transform_size() const { return next_power_of_two(3 * f + 1); }
    /// Throws std::invalid_argument on unusable values.
    void validate() const;
};

/// Modal samples, data[node * modes + n].
struct ModalField
{
    std::size_t modes = 0;
    std::size_t nodes = 0;
    std::vector<cplx> data;

    ModalField() = default;
    ModalField(std::size_t modes_, std::size_t nodes_) : modes(modes_), nodes(nodes_), data(modes_ * nodes_) {}
    cplx& at(std::size_t node, std::size_t n) { return data[node * modes + n]; }
    const cplx& at(std::size_t node, std::size_t n) const { return data[node * modes + n]; }
    std::span<const cplx> node_modes(std::size_t node) const { return {data.data() + node * modes, modes}; }
};

class OperatorContext
{
public:
    /// Builds grid, moments (from the cache when configured) and node tables.
    OperatorContext(const SolverConfig& config, const scatter::ScattererModel& model,
                    std::shared_ptr<const radial::MomentTable> moments = nullptr);

    const SolverConfig& config() const { return config_; }
    const radial::RadialGrid& grid() const { return grid_; }
    /// m_l at node i, l = 0..2F.
    std::span<const cplx> contrast(std::size_t node) const { return {contrast_.data() + node * (2 * config_.f + 1), 2 * config_.f + 1}; }
    bool vacuum() const { return vacuum_; }
    /// Null when the contrast vanishes everywhere.
    std::shared_ptr<const radial::MomentTable> moments() const { return moments_; }

    /// I_n, n = 0..F, at one node from u_n there.
    void angular_integrate(std::size_t node, std::span<const cplx> u, std::span<cplx> out) const;
    /// Same product through the transforms for explicit coefficient lists
    /// (u: F+1 values, m: 2F+1 values); exposed for checking.
    void angular_integrate(std::span<const cplx> u, std::span<const cplx> m, std::span<cplx> out) const;
    /// K_n[v] at every node, out[node * modes + n].
    void apply_kernel(std::span<const cplx> v, std::span<cplx> out) const;
    /// out = v - (i/2) K[v].
    void apply_forward(std::span<const cplx> v, std::span<cplx> out) const;
    ModalField apply_forward(const ModalField& v) const;

    /// Largest |coefficient| above index F of the padded product, over the
    /// given node; zero when the node is skipped. For checking the padding.
    double padding_leak(std::size_t node, std::span<const cplx> u) const;

private:
    enum class NodeKind
    {
        Empty,  // m = 0
        Radial, // only m_0
        Full
    };
    SolverConfig config_;
    radial::RadialGrid grid_;
    std::vector<cplx> contrast_;          // [node * (2F+1) + l]
    std::vector<NodeKind> kind_;
    std::vector<std::vector<cplx>> m_samples_; // IFLT of m per Full node
    std::shared_ptr<const flt::FltPlan> plan_;
    std::shared_ptr<const radial::MomentTable> moments_;
    std::unique_ptr<radial::RadialKernel> kernel_;
    bool vacuum_ = true;
};

/// u^i_n at every grid node.
ModalField incident_field(const radial::RadialGrid& grid, std::size_t f, const scatter::IncidentField& inc);

/// Plane wave matching the model: shifted by the offset for OffsetSphere so
/// that the body sees the wave of a centred sphere, plain otherwise.
scatter::IncidentField default_incident(const scatter::ScattererModel& model, double k);

struct SolveResult
{
    ModalField u;
    std::size_t iterations = 0;
    double residual = 0.0;
    std::vector<double> history;
    std::vector<double> iteration_seconds; // wall time of each operator application inside GMRES
    double setup_seconds = 0.0;
    double solve_seconds = 0.0;
};

/// Solves A u = u^i from the Born start u = u^i. Throws krylov::GmresFailure.
SolveResult solve_scattering(const OperatorContext& ctx, const scatter::IncidentField& inc);
SolveResult solve_scattering(const SolverConfig& config, const scatter::ScattererModel& model);

/// Smooth field u(rho, cos theta) from modal samples: per-mode radial
/// interpolation on the grid and the Legendre sum.
class FieldInterpolant
{
public:
    FieldInterpolant(const radial::RadialGrid& grid, const ModalField& u);
    cplx operator()(double rho, double cos_theta) const;
    /// Modal value u_n(rho).
    cplx mode(std::size_t n, double rho) const;
    std::size_t modes() const { return modes_; }

private:
    radial::RadialGrid grid_;
    std::size_t modes_;
    std::vector<std::vector<cplx>> fits_; // per mode
};
} // namespace axiscat::ls
