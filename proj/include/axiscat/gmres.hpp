#pragma once
// Restarted GMRES for complex linear maps given as callbacks.
#include <axiscat/types.hpp>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace axiscat::krylov
{
/// y = A x; x and y never alias.
using LinearMap = std::function<void(std::span<const cplx> x, std::span<cplx> y)>;

struct GmresOptions
{
    double tol = 1e-10;          // on ||b - A x|| / ||b||
    std::size_t max_iters = 1000; // matrix-vector products after the initial residual
    std::size_t restart = 50;
    /// Called after every inner iteration with the iteration count and relative residual.
    std::function<void(std::size_t, double)> on_iteration;
};

struct GmresResult
{
    std::vector<cplx> x;
    std::size_t iterations = 0;
    double residual = 0.0;         // relative, recomputed from the final iterate
    std::vector<double> history;   // relative residual estimate, starting with the initial one
};

class GmresFailure : public std::runtime_error
{
public:
    GmresFailure(GmresResult best);
    GmresResult best;
};

/// Solves A x = b from x0 (empty x0 means zero). Throws GmresFailure after max_iters.
GmresResult gmres_solve(const LinearMap& apply, std::span<const cplx> b, std::span<const cplx> x0,
                        const GmresOptions& options = {});
} // namespace axiscat::krylov
