#pragma once

// Thin wrappers over FFTW real transforms. Plans are created once per size
// under a global lock and executed through the new-array interface, which
// FFTW documents as thread-safe.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace illss::detail {

using cplx = std::complex<double>;

// Unnormalized forward transform of a length-n real sequence; out has n/2+1 entries.
void rfft(std::span<const double> in, std::span<cplx> out);

// Unnormalized inverse: out (length n) receives n times the synthesized signal.
void irfft(std::span<const cplx> in, std::span<double> out);

// M x M real transform, row-major with x fastest. Spectrum is M rows of M/2+1.
void rfft2(std::size_t m, std::span<const double> in, std::span<cplx> out);
void irfft2(std::size_t m, std::span<const cplx> in, std::span<double> out);

// Trigonometric derivative of a periodic sequence sampled on a uniform grid
// over [0, 2pi). Odd orders drop the Nyquist mode.
std::vector<double> periodic_derivative(std::span<const double> f, int order);

}  // namespace illss::detail
