#include "illss/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "fft.hpp"
#include "illss/error.hpp"

namespace illss {

using detail::cplx;

SpectralPlan::SpectralPlan(std::size_t m, double box, Vec2 origin, bool dealias)
    : m_(m), box_(box), origin_(origin), dealias_(dealias) {
    if (m < 32 || !std::has_single_bit(m))
        throw PreconditionError("grid size must be a power of two >= 32, got " + std::to_string(m));
    if (!(box > 0.0)) throw PreconditionError("box side must be positive");

    const std::size_t hw = half_width();
    const std::size_t ns = spectrum_size();
    xi_x_.resize(ns);
    xi_y_.resize(ns);
    xi_x_eff_.resize(ns);
    xi_y_eff_.resize(ns);
    xi_norm_.resize(ns);
    weight_.resize(ns);
    mask_.resize(ns);
    const double k0 = 2.0 * std::numbers::pi / box;
    const long nyq = static_cast<long>(m / 2);
    const long cutoff = static_cast<long>(m) / 3;
    for (std::size_t j = 0; j < m; ++j) {
        const long ky = mode_y(j);
        for (std::size_t i = 0; i < hw; ++i) {
            const long kx = static_cast<long>(i);
            const std::size_t s = j * hw + i;
            xi_x_[s] = k0 * static_cast<double>(kx);
            xi_y_[s] = k0 * static_cast<double>(ky);
            xi_x_eff_[s] = kx == nyq ? 0.0 : xi_x_[s];
            xi_y_eff_[s] = ky == -nyq ? 0.0 : xi_y_[s];
            xi_norm_[s] = std::hypot(xi_x_[s], xi_y_[s]);
            weight_[s] = (i == 0 || kx == nyq) ? 1.0 : 2.0;
            mask_[s] = (std::abs(kx) <= cutoff && std::abs(ky) <= cutoff) ? 1 : 0;
        }
    }
}

double SpectralPlan::max_wavenumber() const noexcept {
    return *std::max_element(xi_norm_.begin(), xi_norm_.end());
}

PlanPtr make_plan(std::size_t m, double box) { return std::make_shared<const SpectralPlan>(m, box); }

PlanPtr make_plan(std::size_t m, double box, Vec2 origin, bool dealias) {
    return std::make_shared<const SpectralPlan>(m, box, origin, dealias);
}

PlaneField::PlaneField(PlanPtr plan, std::size_t components)
    : plan_(std::move(plan)), comps_(components) {
    if (!plan_) throw PreconditionError("field needs a spectral plan");
    if (comps_ != 1 && comps_ != 2) throw PreconditionError("fields have 1 or 2 components");
    data_.assign(comps_ * plan_->point_count(), 0.0);
}

std::span<double> PlaneField::component(std::size_t c) noexcept {
    return std::span<double>(data_).subspan(c * plan_->point_count(), plan_->point_count());
}

std::span<const double> PlaneField::component(std::size_t c) const noexcept {
    return std::span<const double>(data_).subspan(c * plan_->point_count(), plan_->point_count());
}

namespace {

void require_compatible(const PlaneField& a, const PlaneField& b) {
    if (a.components() != b.components() || a.plan().size() != b.plan().size() ||
        a.plan().box() != b.plan().box())
        throw PreconditionError("fields live on different plans or have different shapes");
}

void require_vector(const PlaneField& f, const char* op) {
    if (f.components() != 2) throw PreconditionError(std::string(op) + " needs a vector field");
}

}  // namespace

PlaneField& PlaneField::operator+=(const PlaneField& o) {
    require_compatible(*this, o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    solenoidal_ = solenoidal_ && o.solenoidal_;
    return *this;
}

PlaneField& PlaneField::operator-=(const PlaneField& o) {
    require_compatible(*this, o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    solenoidal_ = solenoidal_ && o.solenoidal_;
    return *this;
}

PlaneField& PlaneField::operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
}

PlaneField operator+(PlaneField a, const PlaneField& b) { return a += b; }
PlaneField operator-(PlaneField a, const PlaneField& b) { return a -= b; }
PlaneField operator*(double s, PlaneField a) { return a *= s; }

Spectrum forward(const PlaneField& f) {
    Spectrum s{f.plan_ptr(), {}};
    const std::size_t m = f.plan().size();
    for (std::size_t c = 0; c < f.components(); ++c) {
        auto& out = s.comps.emplace_back(f.plan().spectrum_size());
        detail::rfft2(m, f.component(c), out);
    }
    return s;
}

PlaneField inverse(const Spectrum& s) {
    PlaneField f(s.plan, s.comps.size());
    const std::size_t m = s.plan->size();
    const double scale = 1.0 / static_cast<double>(s.plan->point_count());
    for (std::size_t c = 0; c < s.comps.size(); ++c) {
        auto out = f.component(c);
        detail::irfft2(m, s.comps[c], out);
        for (auto& v : out) v *= scale;
    }
    return f;
}

double inner(const PlaneField& f, const PlaneField& g) {
    require_compatible(f, g);
    double sum = 0.0;
    const auto a = f.values();
    const auto b = g.values();
    for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
    return sum * f.plan().cell_area();
}

double spectral_inner(const PlaneField& f, const PlaneField& g) {
    require_compatible(f, g);
    const auto fs = forward(f);
    const auto gs = forward(g);
    const auto w = f.plan().hermitian_weight();
    double sum = 0.0;
    for (std::size_t c = 0; c < fs.comps.size(); ++c)
        for (std::size_t s = 0; s < w.size(); ++s)
            sum += w[s] * (fs.comps[c][s] * std::conj(gs.comps[c][s])).real();
    return sum * f.plan().cell_area() / static_cast<double>(f.plan().point_count());
}

double rms(const PlaneField& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += v * v;
    return std::sqrt(sum / static_cast<double>(f.values().size()));
}

double max_abs(const PlaneField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double mean(const PlaneField& f, std::size_t component) {
    double sum = 0.0;
    for (double v : f.component(component)) sum += v;
    return sum / static_cast<double>(f.plan().point_count());
}

bool all_finite(const PlaneField& f) {
    return std::all_of(f.values().begin(), f.values().end(), [](double v) { return std::isfinite(v); });
}

PlaneField leray_project(const PlaneField& f) {
    require_vector(f, "leray_project");
    auto s = forward(f);
    const auto& plan = f.plan();
    const auto kx = plan.xi_x_eff();
    const auto ky = plan.xi_y_eff();
    for (std::size_t k = 0; k < kx.size(); ++k) {
        const double k2 = kx[k] * kx[k] + ky[k] * ky[k];
        if (k2 == 0.0) continue;
        const cplx along = (kx[k] * s.comps[0][k] + ky[k] * s.comps[1][k]) / k2;
        s.comps[0][k] -= kx[k] * along;
        s.comps[1][k] -= ky[k] * along;
    }
    auto out = inverse(s);
    out.mark_solenoidal();
    return out;
}

PlaneField half_laplacian(const PlaneField& f, int power) {
    if (power != 1 && power != -1)
        throw PreconditionError("half_laplacian power must be +1 or -1");
    if (power == -1) {
        const double scale = rms(f);
        for (std::size_t c = 0; c < f.components(); ++c) {
            const double m = mean(f, c);
            if (std::abs(m) > 1e-10 * scale)
                throw ZeroModeError("inverse half-Laplacian of a field with mean " + std::to_string(m) +
                                    " in component " + std::to_string(c) +
                                    "; the spread line tension does not have zero net force");
        }
    }
    auto s = forward(f);
    const auto xi = f.plan().xi_norm();
    for (auto& comp : s.comps)
        for (std::size_t k = 0; k < xi.size(); ++k)
            comp[k] = xi[k] == 0.0 ? cplx(0.0) : comp[k] * (power == 1 ? xi[k] : 1.0 / xi[k]);
    auto out = inverse(s);
    out.mark_solenoidal(f.solenoidal());
    return out;
}

PlaneField surface_divergence(const PlaneField& f) {
    require_vector(f, "surface_divergence");
    const auto s = forward(f);
    const auto kx = f.plan().xi_x_eff();
    const auto ky = f.plan().xi_y_eff();
    Spectrum d{f.plan_ptr(), {std::vector<cplx>(kx.size())}};
    const cplx i1(0.0, 1.0);
    for (std::size_t k = 0; k < kx.size(); ++k)
        d.comps[0][k] = i1 * (kx[k] * s.comps[0][k] + ky[k] * s.comps[1][k]);
    return inverse(d);
}

PlaneField recover_surface_pressure(const PlaneField& total_force) {
    require_vector(total_force, "recover_surface_pressure");
    const auto s = forward(total_force);
    const auto kx = total_force.plan().xi_x_eff();
    const auto ky = total_force.plan().xi_y_eff();
    Spectrum p{total_force.plan_ptr(), {std::vector<cplx>(kx.size())}};
    const cplx i1(0.0, 1.0);
    for (std::size_t k = 0; k < kx.size(); ++k) {
        const double k2 = kx[k] * kx[k] + ky[k] * ky[k];
        if (k2 == 0.0) continue;
        p.comps[0][k] = -i1 * (kx[k] * s.comps[0][k] + ky[k] * s.comps[1][k]) / k2;
    }
    return inverse(p);
}

PlaneField gradient(const PlaneField& scalar) {
    if (scalar.components() != 1) throw PreconditionError("gradient needs a scalar field");
    const auto s = forward(scalar);
    const auto kx = scalar.plan().xi_x_eff();
    const auto ky = scalar.plan().xi_y_eff();
    Spectrum g{scalar.plan_ptr(), {std::vector<cplx>(kx.size()), std::vector<cplx>(kx.size())}};
    const cplx i1(0.0, 1.0);
    for (std::size_t k = 0; k < kx.size(); ++k) {
        g.comps[0][k] = i1 * kx[k] * s.comps[0][k];
        g.comps[1][k] = i1 * ky[k] * s.comps[0][k];
    }
    return inverse(g);
}

PlaneField rotated_gradient(const PlaneField& stream) {
    auto g = gradient(stream);
    auto gx = g.component(0);
    auto gy = g.component(1);
    for (std::size_t k = 0; k < gx.size(); ++k) {
        const double dx = gx[k];
        gx[k] = -gy[k];
        gy[k] = dx;
    }
    g.mark_solenoidal();
    return g;
}

double max_gradient(const PlaneField& f) {
    double m = 0.0;
    for (std::size_t c = 0; c < f.components(); ++c) {
        PlaneField comp = PlaneField::scalar(f.plan_ptr());
        std::copy(f.component(c).begin(), f.component(c).end(), comp.component(0).begin());
        m = std::max(m, max_abs(gradient(comp)));
    }
    return m;
}

PlaneField dealias(const PlaneField& f) {
    auto s = forward(f);
    const auto mask = f.plan().dealias_mask();
    for (auto& comp : s.comps)
        for (std::size_t k = 0; k < mask.size(); ++k)
            if (!mask[k]) comp[k] = 0.0;
    auto out = inverse(s);
    out.mark_solenoidal(f.solenoidal());
    return out;
}

PlaneField random_band_limited(PlanPtr plan, int kmax, std::uint64_t seed) {
    const std::size_t m = plan->size();
    if (kmax < 1 || static_cast<std::size_t>(kmax) >= m / 2)
        throw PreconditionError("band limit must lie in [1, M/2)");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const std::size_t hw = plan->half_width();
    Spectrum s{plan, {std::vector<cplx>(plan->spectrum_size())}};
    auto& c = s.comps[0];
    for (std::size_t j = 0; j < m; ++j) {
        const long ky = plan->mode_y(j);
        for (std::size_t i = 0; i < hw; ++i) {
            const long kx = static_cast<long>(i);
            const long band = std::max(std::abs(kx), std::abs(ky));
            const double re = normal(rng);
            const double im = normal(rng);
            if (band == 0 || band > kmax) continue;
            c[j * hw + i] = cplx(re, im);
        }
    }
    // The i = 0 column must be Hermitian for a real field.
    for (std::size_t j = 1; j < m / 2; ++j) c[(m - j) * hw] = std::conj(c[j * hw]);
    auto f = inverse(s);
    f *= 1.0 / rms(f);
    return f;
}

namespace {

void write_le(std::ofstream& os, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

double read_le(std::ifstream& is) {
    std::uint64_t bits = 0;
    is.read(reinterpret_cast<char*>(&bits), sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    return std::bit_cast<double>(bits);
}

}  // namespace

void dump_field(const std::string& path, const PlaneField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path);
    for (double v : f.values()) write_le(os, v);
    const auto& p = f.plan();
    nlohmann::json side{
        {"M", p.size()},
        {"L", p.box()},
        {"origin", {p.origin().x, p.origin().y}},
        {"components", f.components()},
        {"dtype", "float64-le"},
        {"layout", "component-major, row-major with x fastest"},
    };
    std::ofstream js(path + ".json");
    if (!js) throw IoError("cannot open " + path + ".json");
    js << side.dump(2) << '\n';
}

PlaneField load_field(const std::string& path) {
    std::ifstream js(path + ".json");
    if (!js) throw IoError("missing sidecar " + path + ".json");
    const auto side = nlohmann::json::parse(js);
    const auto origin = side.at("origin");
    auto plan = make_plan(side.at("M").get<std::size_t>(), side.at("L").get<double>(),
                          {origin.at(0).get<double>(), origin.at(1).get<double>()});
    PlaneField f(plan, side.at("components").get<std::size_t>());
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    for (auto& v : f.values()) v = read_le(is);
    if (!is) throw IoError(path + " is shorter than its sidecar declares");
    return f;
}

}  // namespace illss
