// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ddop/metrics.hpp"
#include "ddop/pulse_spec.hpp"

namespace ddop {

struct AnalyticConfig {
    int K_cutoff = 1;  // sinc zero-crossings kept in the FDM spectrum

    void validate() const;

    // K = floor(half_width * N * T), the zero-crossings inside the numeric band.
    static AnalyticConfig from_band(const PulseSpec& spec, const AnalysisBand& band);
};

// Spectral spread of the RRC envelope: (M/T) sqrt(1/12 + (pi^2-8) beta^2 / (4 pi^2)).
double rrc_freq_dispersion(const PulseSpec& spec);

// Spectral spread of the BTRRC envelope: (M/T) sqrt(1/12 + beta^2 (1-ln2)^2 / (2 ln^2 2)).
double btrrc_freq_dispersion(const PulseSpec& spec);

LocalizationMetrics ddop_metrics(const PulseSpec& spec);
LocalizationMetrics btrrc_ddop_metrics(const PulseSpec& spec);
LocalizationMetrics general_ddop_metrics(const PulseSpec& spec);

// time_dispersion is the bound T sqrt(Q)/(M pi), flagged via time_is_bound.
LocalizationMetrics tdm_metrics(const PulseSpec& spec);

LocalizationMetrics fdm_metrics(const PulseSpec& spec, const AnalyticConfig& cfg);

// Valid for interior delay indices only (interior_only is set).
LocalizationMetrics otfs_metrics(const PulseSpec& spec);

// Truncated sub-pulses centred at 0. time_dispersion is the trivial bound T_a/2.
LocalizationMetrics subpulse_metrics(const PulseSpec& spec);

// Closed form matching spec.family.
LocalizationMetrics analytic_for(const PulseSpec& spec, const AnalyticConfig& cfg);

// 1/(4 pi).
double gabor_limit();

}  // namespace ddop
