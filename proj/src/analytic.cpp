// SPDX-License-Identifier: Apache-2.0
#include "ddop/analytic.hpp"

#include <cmath>
#include <numbers>

#include "ddop/error.hpp"

namespace ddop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
const double kSqrt12 = std::sqrt(12.0);

// (pi^2 - 8) / (4 pi^2)
constexpr double kRrcCoeff = (kPi * kPi - 8.0) / (4.0 * kPi * kPi);
// (1 - ln2)^2 / (2 ln^2 2)
constexpr double kBtrrcCoeff = (1.0 - kLn2) * (1.0 - kLn2) / (2.0 * kLn2 * kLn2);

LocalizationMetrics analytic(double mean_time, double dt, double df) {
    LocalizationMetrics m;
    m.mean_time = mean_time;
    m.mean_freq = 0.0;
    m.time_dispersion = dt;
    m.freq_dispersion = df;
    m.provenance = Provenance::Analytic;
    return m;
}

LocalizationMetrics concatenated(const PulseSpec& spec, int count, double df) {
    const double mean = ((count - 1) * spec.T + spec.subpulse_duration()) / 2.0;
    return analytic(mean, count * spec.T / kSqrt12, df);
}

}  // namespace

void AnalyticConfig::validate() const {
    if (K_cutoff < 1) throw InvalidInput("analytic config: K_cutoff must be >= 1");
}

AnalyticConfig AnalyticConfig::from_band(const PulseSpec& spec, const AnalysisBand& band) {
    const double k = std::floor(band.half_width * spec.N * spec.T + 1e-9);
    return {static_cast<int>(std::max(1.0, k))};
}

double rrc_freq_dispersion(const PulseSpec& spec) {
    return spec.M / spec.T * std::sqrt(1.0 / 12.0 + kRrcCoeff * spec.beta * spec.beta);
}

double btrrc_freq_dispersion(const PulseSpec& spec) {
    return spec.M / spec.T * std::sqrt(1.0 / 12.0 + kBtrrcCoeff * spec.beta * spec.beta);
}

LocalizationMetrics ddop_metrics(const PulseSpec& spec) { return concatenated(spec, spec.N, rrc_freq_dispersion(spec)); }

LocalizationMetrics btrrc_ddop_metrics(const PulseSpec& spec) {
    return concatenated(spec, spec.N, btrrc_freq_dispersion(spec));
}

LocalizationMetrics general_ddop_metrics(const PulseSpec& spec) {
    return concatenated(spec, spec.N + 2 * spec.extension(), rrc_freq_dispersion(spec));
}

LocalizationMetrics tdm_metrics(const PulseSpec& spec) {
    auto m = analytic(spec.subpulse_duration() / 2.0, spec.T * std::sqrt(static_cast<double>(spec.Q)) / (spec.M * kPi),
                      rrc_freq_dispersion(spec));
    m.time_is_bound = true;
    return m;
}

LocalizationMetrics fdm_metrics(const PulseSpec& spec, const AnalyticConfig& cfg) {
    cfg.validate();
    const double nt = spec.N * spec.T;
    return analytic(nt / 2.0, nt / kSqrt12, std::sqrt(static_cast<double>(cfg.K_cutoff)) / (nt * kPi));
}

LocalizationMetrics otfs_metrics(const PulseSpec& spec) {
    const double T = spec.T;
    auto m = analytic((spec.N - 1) * T / 2.0 + spec.otfs_m * T / spec.M, spec.N * T / kSqrt12, spec.M / (T * kSqrt12));
    m.mean_freq = (spec.M - 1) / (2.0 * T) + spec.otfs_n / (spec.N * T);
    m.interior_only = true;
    return m;
}

LocalizationMetrics subpulse_metrics(const PulseSpec& spec) {
    const double df = spec.family == Family::BtrrcSubpulse ? btrrc_freq_dispersion(spec) : rrc_freq_dispersion(spec);
    auto m = analytic(0.0, spec.subpulse_duration() / 2.0, df);
    m.time_is_bound = true;
    return m;
}

LocalizationMetrics analytic_for(const PulseSpec& spec, const AnalyticConfig& cfg) {
    switch (spec.family) {
        case Family::RrcSubpulse:
        case Family::BtrrcSubpulse: return subpulse_metrics(spec);
        case Family::Ddop: return ddop_metrics(spec);
        case Family::BtrrcDdop: return btrrc_ddop_metrics(spec);
        case Family::GeneralDdop: return general_ddop_metrics(spec);
        case Family::Tdm: return tdm_metrics(spec);
        case Family::Fdm: return fdm_metrics(spec, cfg);
        case Family::OtfsBasis: return otfs_metrics(spec);
    }
    throw InvalidInput("analytic_for: unknown family");
}

double gabor_limit() { return 1.0 / (4.0 * kPi); }

}  // namespace ddop
