// SPDX-License-Identifier: Apache-2.0
#include "ddop/signal.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ddop/error.hpp"
#include "ddop/fft.hpp"
#include "ddop/kernels.hpp"

namespace ddop {

void TimeGrid::validate() const {
    if (!(sample_interval > 0.0) || !std::isfinite(sample_interval))
        throw InvalidGrid("time grid: sample_interval must be positive");
    if (num_samples < 2) throw InvalidGrid("time grid: need at least 2 samples");
    if (!std::isfinite(start_time)) throw InvalidGrid("time grid: start_time must be finite");
}

bool TimeGrid::contains(double lo, double hi) const {
    const double slack = 1e-9 * sample_interval;
    return num_samples > 0 && start_time <= lo + slack && last_time() >= hi - slack;
}

TimeGrid TimeGrid::covering(double lo, double hi, double dt) {
    if (!(dt > 0.0)) throw InvalidGrid("time grid: sample_interval must be positive");
    if (hi < lo) throw InvalidGrid("time grid: empty interval");
    const double i0 = std::floor(lo / dt + 1e-9);
    const double i1 = std::ceil(hi / dt - 1e-9);
    TimeGrid g;
    g.start_time = i0 * dt;
    g.sample_interval = dt;
    g.num_samples = static_cast<std::size_t>(i1 - i0) + 1;
    if (g.num_samples < 2) g.num_samples = 2;
    return g;
}

void require_band_coverage(const TimeGrid& grid, double half_width) {
    if (!(half_width > 0.0)) throw InvalidInput("analysis band half-width must be positive");
    if (half_width > 0.5 * grid.sample_rate() * (1.0 + 1e-12)) {
        throw InvalidInput("analysis band half-width " + std::to_string(half_width) +
                           " exceeds Nyquist frequency " + std::to_string(0.5 * grid.sample_rate()) +
                           "; raise the oversampling factor");
    }
}

SampledSignal::SampledSignal(TimeGrid g, std::vector<cplx> s) : grid(g), samples(std::move(s)) {
    if (samples.size() != grid.num_samples)
        throw InvalidInput("sampled signal: sample count does not match grid");
}

SampledSignal SampledSignal::zeros(const TimeGrid& g) {
    g.validate();
    return SampledSignal(g, std::vector<cplx>(g.num_samples));
}

double energy(const SampledSignal& signal) {
    if (signal.samples.empty()) throw InvalidInput("energy: empty signal");
    return kernels::parallel::sum_abs2(signal.samples) * signal.grid.sample_interval;
}

double energy(const Spectrum& spectrum) {
    if (spectrum.values.empty()) throw InvalidInput("energy: empty spectrum");
    return kernels::parallel::sum_abs2(spectrum.values) * spectrum.freq_interval;
}

cplx inner_product(const SampledSignal& x, const SampledSignal& y) {
    if (!(x.grid == y.grid)) throw IncompatibleGrid("inner_product: signals live on different grids");
    if (x.samples.size() != y.samples.size()) throw IncompatibleGrid("inner_product: length mismatch");
    return kernels::parallel::sum_conj_product(x.samples, y.samples) * x.grid.sample_interval;
}

Spectrum dft_spectrum(const SampledSignal& signal, int zero_pad_factor) {
    if (zero_pad_factor < 1) throw InvalidInput("dft_spectrum: zero_pad_factor must be >= 1");
    if (signal.samples.empty()) throw InvalidInput("dft_spectrum: empty signal");
    const std::size_t n = signal.samples.size();
    const std::size_t len = n * static_cast<std::size_t>(zero_pad_factor);
    const double dt = signal.grid.sample_interval;
    const double df = 1.0 / (static_cast<double>(len) * dt);

    std::vector<cplx> work(len);
    std::copy(signal.samples.begin(), signal.samples.end(), work.begin());
    fft::forward(work);

    const auto half = static_cast<std::ptrdiff_t>(len / 2);
    const auto len_s = static_cast<std::ptrdiff_t>(len);
    Spectrum out;
    out.start_freq = -static_cast<double>(half) * df;
    out.freq_interval = df;
    out.values.resize(len);
    const double t0 = signal.grid.start_time;
    const auto count = static_cast<std::ptrdiff_t>(len);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const std::ptrdiff_t k = i - half;
        const std::size_t src = static_cast<std::size_t>((k % len_s + len_s) % len_s);
        const double f = static_cast<double>(k) * df;
        out.values[static_cast<std::size_t>(i)] =
            dt * std::polar(1.0, -2.0 * std::numbers::pi * f * t0) * work[src];
    }
    return out;
}

}  // namespace ddop
