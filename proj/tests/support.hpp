#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>

#include "illss/spectral.hpp"

namespace support {

// Fresh per-test directory under ILLSS_TEST_TMP (or the system temp dir).
inline std::filesystem::path scratch_dir(const std::string& name) {
    const char* root = std::getenv("ILLSS_TEST_TMP");
    const auto base = root ? std::filesystem::path(root) : std::filesystem::temp_directory_path() / "illss-tests";
    const auto dir = base / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Samples f(x, y) into every component slot of a field.
inline illss::PlaneField sample(illss::PlanPtr plan, std::size_t comps,
                                const std::function<double(std::size_t, illss::Vec2)>& f) {
    illss::PlaneField out(plan, comps);
    for (std::size_t c = 0; c < comps; ++c)
        for (std::size_t j = 0; j < plan->size(); ++j)
            for (std::size_t i = 0; i < plan->size(); ++i) out.at(c, i, j) = f(c, plan->node(i, j));
    return out;
}

inline double max_diff(const illss::PlaneField& a, const illss::PlaneField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
    return m;
}

// Divergence-free random field with unit-rms stream function.
inline illss::PlaneField random_solenoidal(illss::PlanPtr plan, int band, std::uint64_t seed) {
    return illss::rotated_gradient(illss::random_band_limited(plan, band, seed));
}

// Random vector field with both components independent and zero mean.
inline illss::PlaneField random_vector(illss::PlanPtr plan, int band, std::uint64_t seed) {
    const auto a = illss::random_band_limited(plan, band, seed);
    const auto b = illss::random_band_limited(plan, band, seed + 1000);
    illss::PlaneField out = illss::PlaneField::vector(plan);
    std::copy(a.values().begin(), a.values().end(), out.component(0).begin());
    std::copy(b.values().begin(), b.values().end(), out.component(1).begin());
    return out;
}

}  // namespace support
