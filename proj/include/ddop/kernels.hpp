// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace ddop::kernels {

using cplx = std::complex<double>;

// Moments of the weight |s_k|^2 placed at x_k = x0 + k*dx. `weight` is the
// plain sum of weights (no dx factor); mean/variance are weight-normalized.
struct PowerMoments {
    double weight = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

// Reductions are split into fixed-size blocks so the parallel result does not
// depend on the thread count.
inline constexpr std::size_t kBlockSize = 4096;

// Straight loops. Kept as the reference the parallel kernels are tested and
// benchmarked against.
namespace serial {

double sum_abs2(std::span<const cplx> s);
cplx sum_conj_product(std::span<const cplx> x, std::span<const cplx> y);
PowerMoments power_moments(std::span<const cplx> s, double x0, double dx);

// out[k] = 2*df * sum_j amps[j] * cos(2*pi*(f0 + j*df) * times[k])
void cosine_synthesis(std::span<const double> amps, double f0, double df,
                      std::span<const double> times, std::span<double> out);

}  // namespace serial

// OpenMP versions; used on the main path. Bit-identical for any thread count.
namespace parallel {

double sum_abs2(std::span<const cplx> s);
cplx sum_conj_product(std::span<const cplx> x, std::span<const cplx> y);
PowerMoments power_moments(std::span<const cplx> s, double x0, double dx);
void cosine_synthesis(std::span<const double> amps, double f0, double df,
                      std::span<const double> times, std::span<double> out);

}  // namespace parallel

// Worker cap for the parallel kernels and sweeps; 0 restores the OpenMP default.
void set_thread_limit(int threads);
int thread_limit();

}  // namespace ddop::kernels
