// SPDX-License-Identifier: Apache-2.0
#include "ddop/metrics.hpp"

#include <cmath>
#include <span>

#include "ddop/error.hpp"
#include "ddop/kernels.hpp"

namespace ddop {

std::string to_string(Provenance p) { return p == Provenance::Numeric ? "NUMERIC" : "ANALYTIC"; }

AnalysisBand AnalysisBand::default_for(const PulseSpec& spec) { return {5.0 * spec.M / spec.T}; }

nlohmann::json to_json(const LocalizationMetrics& m) {
    nlohmann::json j{
        {"mean_time", m.mean_time},
        {"mean_freq", m.mean_freq},
        {"time_dispersion", m.time_dispersion},
        {"freq_dispersion", m.freq_dispersion},
        {"tf_area", m.tf_area()},
        {"direction", m.direction()},
        {"provenance", to_string(m.provenance)},
        {"energy_capture", nullptr},
        {"time_is_bound", m.time_is_bound},
        {"interior_only", m.interior_only},
    };
    if (m.energy_capture) j["energy_capture"] = *m.energy_capture;
    return j;
}

TimeMoments measure_time(const SampledSignal& signal) {
    if (signal.samples.empty()) throw InvalidInput("measure_time: empty signal");
    const auto pm = kernels::parallel::power_moments(signal.samples, signal.grid.start_time,
                                                     signal.grid.sample_interval);
    if (!(pm.weight > 0.0)) throw DegenerateInput("measure_time: signal has zero energy");
    return {pm.mean, std::sqrt(std::max(pm.variance, 0.0))};
}

FreqMoments measure_freq(const Spectrum& spectrum, const AnalysisBand& band) {
    if (!(band.half_width > 0.0)) throw InvalidInput("measure_freq: band half-width must be positive");
    if (spectrum.values.empty()) throw DegenerateInput("measure_freq: empty spectrum");
    const double df = spectrum.freq_interval;
    const double slack = 1e-9 * df;
    const double first = std::ceil((-band.half_width - slack - spectrum.start_freq) / df);
    const double last = std::floor((band.half_width + slack - spectrum.start_freq) / df);
    const double k0 = std::max(first, 0.0);
    const double k1 = std::min(last, static_cast<double>(spectrum.values.size()) - 1.0);
    if (k1 < k0) throw DegenerateInput("measure_freq: analysis band holds no frequency samples");

    const auto begin = static_cast<std::size_t>(k0);
    const auto count = static_cast<std::size_t>(k1 - k0) + 1;
    const std::span<const cplx> in_band(spectrum.values.data() + begin, count);
    const auto pm = kernels::parallel::power_moments(in_band, spectrum.freq(begin), df);
    if (!(pm.weight > 0.0)) throw DegenerateInput("measure_freq: no spectral energy inside the band");
    const double total = kernels::parallel::sum_abs2(spectrum.values);
    return {pm.mean, std::sqrt(std::max(pm.variance, 0.0)), pm.weight / total};
}

LocalizationMetrics measure_all(const SampledSignal& signal, const AnalysisBand& band, int zero_pad) {
    require_band_coverage(signal.grid, band.half_width);
    const TimeMoments tm = measure_time(signal);
    const FreqMoments fm = measure_freq(dft_spectrum(signal, zero_pad), band);
    LocalizationMetrics m;
    m.mean_time = tm.mean;
    m.time_dispersion = tm.dispersion;
    m.mean_freq = fm.mean;
    m.freq_dispersion = fm.dispersion;
    m.energy_capture = fm.energy_capture;
    m.provenance = Provenance::Numeric;
    return m;
}

ScaleModulationResult scale_modulation_check(const std::function<double(double)>& x, double rho_alpha, double rho_gamma,
                          const TimeGrid& rho_grid) {
    if (rho_alpha == 0.0 || !std::isfinite(rho_alpha)) throw InvalidInput("scale_modulation_check: rho_alpha must be nonzero");
    rho_grid.validate();
    double shifted = 0.0, scaled = 0.0, scaled_energy = 0.0;
    for (std::size_t k = 0; k < rho_grid.num_samples; ++k) {
        const double rho = rho_grid.time(k);
        const double xs = x(rho_alpha * rho - rho_gamma);
        const double xa = x(rho_alpha * rho);
        shifted += rho * rho * xs * xs;
        scaled += rho * rho * xa * xa;
        scaled_energy += xa * xa;
    }
    const double d = rho_grid.sample_interval;
    if (!std::isfinite(shifted) || !std::isfinite(scaled_energy))
        throw InvalidInput("scale_modulation_check: test function has infinite energy on the grid");
    ScaleModulationResult r;
    r.lhs = shifted * d;
    r.rhs = scaled * d + (rho_gamma * rho_gamma) / (rho_alpha * rho_alpha) * scaled_energy * d;
    r.abs_error = std::abs(r.lhs - r.rhs);
    return r;
}

}  // namespace ddop
