#pragma once

// Contrast m = 1 - n^2 of the supported bodies as Legendre coefficients
// m_l(rho), and modal coefficients of the axial plane wave.

#include <axiscat/types.hpp>

#include <string>
#include <variant>
#include <vector>

namespace axiscat::scatter
{

struct HomogeneousSphere
{
    double radius = 1.0;
    double index = 2.0;
};

/// Sphere of radius `radius` centred on the axis at z = offset (offset > radius).
struct OffsetSphere
{
    double offset = 2.0;
    double radius = 1.0;
    double index = 2.0;
};

/// Shell 1 <= rho <= 2 with m(rho, t) = -|t|^beta.
struct HollowedSphere
{
    double beta = 2.0;
};

/// m_l sampled at increasing radii; linear in rho between samples, zero outside.
struct Tabulated
{
    std::vector<double> radii;
    std::vector<std::vector<cplx>> coeffs; // coeffs[r][l]
};

using ScattererModel = std::variant<HomogeneousSphere, OffsetSphere, HollowedSphere, Tabulated>;

std::vector<cplx> contrast_coeffs(const ScattererModel& model, double rho, std::size_t l_max);

/// m(rho, cos theta) evaluated pointwise (the tabulated model sums its series).
cplx contrast_value(const ScattererModel& model, double rho, double t);

/// Smallest R with m = 0 for rho > R.
double support_radius(const ScattererModel& model);

/// True when every coefficient vanishes identically.
bool is_vacuum(const ScattererModel& model);

/// Reads rows "rho, l, Re(m_l), Im(m_l)"; commas or blanks separate fields, '#' starts a comment.
Tabulated load_tabulated(const std::string& path);

struct IncidentField
{
    double k = 1.0;
    double shift = 0.0; // plane wave exp(ik(z - shift)); 0 for the plain axial wave
};

/// u^i_n(rho) = exp(-ik shift) i^n (2n+1) j_n(k rho), n = 0..n_max.
std::vector<cplx> incident_coeffs(const IncidentField& inc, double rho, std::size_t n_max);

/// exp(ik(rho cos theta - shift)).
cplx incident_value(const IncidentField& inc, double rho, double cos_theta);

} // namespace axiscat::scatter
