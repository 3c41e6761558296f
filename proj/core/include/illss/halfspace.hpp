#pragma once

#include <span>
#include <string>
#include <vector>

#include "illss/spectral.hpp"

namespace illss {

/// Samples of the decaying harmonic extension u(x, y, z) of a surface field
/// at a list of depths z <= 0. Only horizontal components are carried: the
/// constrained subfluid flow has no vertical velocity.
struct HalfSpaceField {
    PlanPtr plan;
    std::vector<double> depths;
    std::vector<PlaneField> levels;
    std::string rule = "decaying-harmonic";
};

/// u^(xi, z) = exp(|xi| z) U^(xi) at every requested depth (all depths <= 0).
HalfSpaceField harmonic_extension(const PlaneField& surface, std::span<const double> depths);

/// Depths 0 = z_0 > z_1 > ... >= z_min with spacings first_step * ratio^k.
std::vector<double> geometric_depths(double first_step, double ratio, double z_min);

/// Levels resolving every mode of `plan` down to z = -L: the first step is
/// 0.1 / max|xi| and spacings grow by 1.5%.
std::vector<double> default_depths(const SpectralPlan& plan);

struct HarmonicityReport {
    double max_residual = 0.0;  // max |Laplacian u| over the centre level
    double field_scale = 0.0;   // max |u| over the three levels
    double relative = 0.0;      // max_residual / field_scale
};

/// Laplacian of the extension at depth z: spectral in x, y and a three-level
/// centred difference of step dz in z. Requires z + dz <= 0.
HarmonicityReport harmonicity_residual(const PlaneField& surface, double z, double dz);

struct DtnReport {
    double relative_error = 0.0;  // ||d_z u(0) - Lambda U|| / ||Lambda U||
    double max_abs_error = 0.0;
    double reference_norm = 0.0;
};

/// Normal derivative of the extension at the surface by a fourth-order
/// one-sided difference of step dz, compared with the half-Laplacian of U.
DtnReport dtn_check(const PlaneField& surface, double dz = 1e-3);

/// Simpson-in-depth, spectral-in-plane quadrature of sum_ij (d_i u_j)^2
/// over the sampled slab, with depth derivatives from five-level stencils.
/// Needs at least five levels starting at z = 0, and max|xi| times the first
/// spacing <= 0.1 over the modes the field carries (else ResolutionError).
double volume_dissipation(const HalfSpaceField& ext);

struct VerificationRecord {
    std::string check;
    double tolerance = 0.0;
    double measured = 0.0;
    bool passed = false;
};

std::string to_json(const std::vector<VerificationRecord>& records);

struct VerifyOptions {
    std::size_t grid = 256;     // spectral-operator suite
    std::size_t halfspace_grid = 64;
    double box = 32.0;
    int band_limit = 4;
    std::uint64_t seed = 7;
};

/// Spectral-operator and half-space checks with their pinned tolerances.
std::vector<VerificationRecord> run_verification_suite(const VerifyOptions& options = {});

}  // namespace illss
