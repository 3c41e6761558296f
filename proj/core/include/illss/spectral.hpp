#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "illss/vec2.hpp"

namespace illss {

/// Doubly periodic M x M sampling of the square [origin, origin + L)^2 and
/// its Fourier symbols. Immutable once built; share it through PlanPtr.
///
/// Wavenumbers are xi = 2pi k / L with k in [-M/2, M/2). Odd-order symbols
/// (gradients, divergence, the Leray projector) use an "effective"
/// wavevector whose Nyquist component is zero so that every multiplier
/// stays Hermitian; even symbols such as |xi| use the true magnitude.
class SpectralPlan {
public:
    SpectralPlan(std::size_t m, double box, Vec2 origin, bool dealias = false);
    SpectralPlan(std::size_t m, double box) : SpectralPlan(m, box, {-0.5 * box, -0.5 * box}) {}

    std::size_t size() const noexcept { return m_; }
    double box() const noexcept { return box_; }
    double spacing() const noexcept { return box_ / static_cast<double>(m_); }
    double cell_area() const noexcept { return spacing() * spacing(); }
    Vec2 origin() const noexcept { return origin_; }
    bool dealias() const noexcept { return dealias_; }

    std::size_t point_count() const noexcept { return m_ * m_; }
    std::size_t half_width() const noexcept { return m_ / 2 + 1; }
    std::size_t spectrum_size() const noexcept { return m_ * half_width(); }

    Vec2 node(std::size_t i, std::size_t j) const noexcept {
        return {origin_.x + spacing() * static_cast<double>(i),
                origin_.y + spacing() * static_cast<double>(j)};
    }

    // Signed integer wavenumber index along y for spectrum row j.
    long mode_y(std::size_t j) const noexcept {
        return j < m_ / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(m_);
    }

    // Tables indexed by spectrum index s = j * half_width() + i.
    std::span<const double> xi_x() const noexcept { return xi_x_; }
    std::span<const double> xi_y() const noexcept { return xi_y_; }
    std::span<const double> xi_x_eff() const noexcept { return xi_x_eff_; }
    std::span<const double> xi_y_eff() const noexcept { return xi_y_eff_; }
    std::span<const double> xi_norm() const noexcept { return xi_norm_; }
    // 2 for interior columns of the half spectrum, 1 for the i = 0 and Nyquist columns.
    std::span<const double> hermitian_weight() const noexcept { return weight_; }
    std::span<const std::uint8_t> dealias_mask() const noexcept { return mask_; }

    double max_wavenumber() const noexcept;

private:
    std::size_t m_;
    double box_;
    Vec2 origin_;
    bool dealias_;
    std::vector<double> xi_x_, xi_y_, xi_x_eff_, xi_y_eff_, xi_norm_, weight_;
    std::vector<std::uint8_t> mask_;
};

using PlanPtr = std::shared_ptr<const SpectralPlan>;

PlanPtr make_plan(std::size_t m, double box);
PlanPtr make_plan(std::size_t m, double box, Vec2 origin, bool dealias = false);

/// Sampled scalar (1 component) or surface-vector (2 components) field on a plan.
class PlaneField {
public:
    PlaneField(PlanPtr plan, std::size_t components);

    static PlaneField scalar(PlanPtr plan) { return {std::move(plan), 1}; }
    static PlaneField vector(PlanPtr plan) { return {std::move(plan), 2}; }

    const SpectralPlan& plan() const noexcept { return *plan_; }
    const PlanPtr& plan_ptr() const noexcept { return plan_; }
    std::size_t components() const noexcept { return comps_; }

    std::span<double> component(std::size_t c) noexcept;
    std::span<const double> component(std::size_t c) const noexcept;

    double& at(std::size_t c, std::size_t i, std::size_t j) noexcept {
        return data_[c * plan_->point_count() + j * plan_->size() + i];
    }
    double at(std::size_t c, std::size_t i, std::size_t j) const noexcept {
        return data_[c * plan_->point_count() + j * plan_->size() + i];
    }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    /// Set by operations whose output is divergence-free by construction.
    bool solenoidal() const noexcept { return solenoidal_; }
    void mark_solenoidal(bool v = true) noexcept { solenoidal_ = v; }

    PlaneField& operator+=(const PlaneField& o);
    PlaneField& operator-=(const PlaneField& o);
    PlaneField& operator*=(double s);

private:
    PlanPtr plan_;
    std::size_t comps_;
    std::vector<double> data_;
    bool solenoidal_ = false;
};

PlaneField operator+(PlaneField a, const PlaneField& b);
PlaneField operator-(PlaneField a, const PlaneField& b);
PlaneField operator*(double s, PlaneField a);

/// Half-spectrum Fourier coefficients of every component of a field.
struct Spectrum {
    PlanPtr plan;
    std::vector<std::vector<std::complex<double>>> comps;
};

Spectrum forward(const PlaneField& f);
PlaneField inverse(const Spectrum& s);

// Grid inner product h^2 * sum f.g and related reductions.
double inner(const PlaneField& f, const PlaneField& g);
double spectral_inner(const PlaneField& f, const PlaneField& g);
double rms(const PlaneField& f);
double max_abs(const PlaneField& f);
double mean(const PlaneField& f, std::size_t component);
bool all_finite(const PlaneField& f);

/// Orthogonal projection onto divergence-free fields, symbol I - xi xi^T / |xi|^2.
/// The zero mode passes through unchanged.
PlaneField leray_project(const PlaneField& f);

/// Applies |xi|^power componentwise, power in {+1, -1}; the zero mode maps to
/// zero. For power -1 a component mean larger than 1e-10 * rms(f) raises
/// ZeroModeError.
PlaneField half_laplacian(const PlaneField& f, int power);

PlaneField surface_divergence(const PlaneField& f);

/// Surface pressure whose gradient is the irrotational part of `total_force`;
/// zero mean.
PlaneField recover_surface_pressure(const PlaneField& total_force);

PlaneField gradient(const PlaneField& scalar);

/// Rotated gradient (-d/dy, d/dx) of a stream function; divergence-free on the grid.
PlaneField rotated_gradient(const PlaneField& stream);

/// Largest |d_i f_j| over the grid, from spectral derivatives.
double max_gradient(const PlaneField& f);

/// Zeroes modes outside the 2/3-rule mask.
PlaneField dealias(const PlaneField& f);

/// Scalar with independent normal random Fourier coefficients in the band
/// 1 <= max(|k1|, |k2|) <= kmax, scaled to unit rms.
PlaneField random_band_limited(PlanPtr plan, int kmax, std::uint64_t seed);

/// Flat little-endian float64 dump (component-major, rows of constant y)
/// plus a JSON sidecar at `path + ".json"`.
void dump_field(const std::string& path, const PlaneField& f);
PlaneField load_field(const std::string& path);

}  // namespace illss
