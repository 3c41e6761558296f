#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace illss::detail {
namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

const PlanPair& plans_1d(std::size_t n) {
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard lock(planner_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> r(n);
    std::vector<cplx> c(n / 2 + 1);
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), r.data(), cp, kFlags);
    p.inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), cp, r.data(), kFlags);
    return cache.emplace(n, p).first->second;
}

const PlanPair& plans_2d(std::size_t m) {
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard lock(planner_mutex());
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    std::vector<double> r(m * m);
    std::vector<cplx> c(m * (m / 2 + 1));
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    const int mi = static_cast<int>(m);
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_2d(mi, mi, r.data(), cp, kFlags);
    p.inverse = fftw_plan_dft_c2r_2d(mi, mi, cp, r.data(), kFlags);
    return cache.emplace(m, p).first->second;
}

}  // namespace

void rfft(std::span<const double> in, std::span<cplx> out) {
    const auto& p = plans_1d(in.size());
    // r2c does not modify its input, the const_cast only satisfies the C API.
    fftw_execute_dft_r2c(p.forward, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void irfft(std::span<const cplx> in, std::span<double> out) {
    const auto& p = plans_1d(out.size());
    std::vector<cplx> scratch(in.begin(), in.end());  // c2r overwrites its input
    fftw_execute_dft_c2r(p.inverse, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

void rfft2(std::size_t m, std::span<const double> in, std::span<cplx> out) {
    const auto& p = plans_2d(m);
    fftw_execute_dft_r2c(p.forward, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void irfft2(std::size_t m, std::span<const cplx> in, std::span<double> out) {
    const auto& p = plans_2d(m);
    std::vector<cplx> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(p.inverse, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

}  // namespace illss::detail
