// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ddop {

using cplx = std::complex<double>;

// Uniform sampling grid; sample k sits at start_time + k*sample_interval and
// stands for the cell of width sample_interval centred on it.
struct TimeGrid {
    double start_time = 0.0;
    double sample_interval = 1.0;
    std::size_t num_samples = 0;

    void validate() const;

    double time(std::size_t k) const { return start_time + static_cast<double>(k) * sample_interval; }
    double last_time() const { return time(num_samples - 1); }
    double sample_rate() const { return 1.0 / sample_interval; }
    bool contains(double lo, double hi) const;

    // Smallest grid whose samples lie on integer multiples of dt and that
    // spans [lo, hi].
    static TimeGrid covering(double lo, double hi, double dt);

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

// Throws InvalidInput unless the grid's Nyquist band holds [-half_width, half_width].
void require_band_coverage(const TimeGrid& grid, double half_width);

struct SampledSignal {
    TimeGrid grid;
    std::vector<cplx> samples;

    SampledSignal() = default;
    SampledSignal(TimeGrid g, std::vector<cplx> s);
    static SampledSignal zeros(const TimeGrid& g);
};

struct Spectrum {
    double start_freq = 0.0;
    double freq_interval = 1.0;
    std::vector<cplx> values;

    double freq(std::size_t k) const { return start_freq + static_cast<double>(k) * freq_interval; }
};

// Riemann sum of |s(t)|^2 dt.
double energy(const SampledSignal& signal);

double energy(const Spectrum& spectrum);

// Riemann sum of x(t) conj(y(t)) dt. Grids must match exactly.
cplx inner_product(const SampledSignal& x, const SampledSignal& y);

// Continuous-time-convention DFT: the sampled signal is zero padded to
// zero_pad_factor*num_samples points and
//   S(f_k) = dt * sum_n s_n exp(-j 2 pi f_k t_n),
// with t_n the absolute sample times. Frequencies ascend from about -fs/2 with
// spacing fs/(zero_pad_factor*num_samples). Parseval holds exactly up to
// rounding.
Spectrum dft_spectrum(const SampledSignal& signal, int zero_pad_factor = 4);

}  // namespace ddop
