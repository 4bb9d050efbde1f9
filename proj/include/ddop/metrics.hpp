// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>

#include <json.hpp>

#include "ddop/pulse_spec.hpp"
#include "ddop/signal.hpp"

namespace ddop {

enum class Provenance { Numeric, Analytic };

std::string to_string(Provenance p);

// Symmetric band |f| <= half_width over which spectral moments are taken.
struct AnalysisBand {
    double half_width = 0.0;

    // 5M/T.
    static AnalysisBand default_for(const PulseSpec& spec);
};

struct LocalizationMetrics {
    double mean_time = 0.0;
    double mean_freq = 0.0;
    double time_dispersion = 0.0;
    double freq_dispersion = 0.0;
    Provenance provenance = Provenance::Numeric;

    // Fraction of spectral energy inside the analysis band (numeric results only).
    std::optional<double> energy_capture;

    // Analytic values that are only upper bounds (TDM). tf_area and direction
    // inherit the flag from time_dispersion.
    bool time_is_bound = false;
    // Analytic values valid only for interior OTFS delay indices.
    bool interior_only = false;

    double tf_area() const { return time_dispersion * freq_dispersion; }
    double direction() const { return time_dispersion / freq_dispersion; }
};

nlohmann::json to_json(const LocalizationMetrics& m);

struct TimeMoments {
    double mean = 0.0;
    double dispersion = 0.0;
};

struct FreqMoments {
    double mean = 0.0;
    double dispersion = 0.0;
    double energy_capture = 0.0;
};

// First and second central moments of |g(t)|^2. Throws DegenerateInput on a
// zero-energy signal.
TimeMoments measure_time(const SampledSignal& signal);

// Moments of |G(f)|^2 restricted to |f| <= band.half_width and normalized by
// the in-band energy.
FreqMoments measure_freq(const Spectrum& spectrum, const AnalysisBand& band);

// dft_spectrum + measure_time + measure_freq. The band must fit under the
// grid's Nyquist frequency.
LocalizationMetrics measure_all(const SampledSignal& signal, const AnalysisBand& band, int zero_pad = 4);

struct ScaleModulationResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_error = 0.0;

    double rel_error() const { return rhs != 0.0 ? abs_error / std::abs(rhs) : abs_error; }
};

// For an even X, checks
//   int rho^2 |X(a rho - g)|^2 drho = int rho^2 |X(a rho)|^2 drho + (g/a)^2 E
// with E = int |X(a rho)|^2 drho, everything by midpoint sums on `rho_grid`.
// The grid must cover the support of both integrands.
ScaleModulationResult scale_modulation_check(const std::function<double(double)>& x, double rho_alpha, double rho_gamma,
                          const TimeGrid& rho_grid);

}  // namespace ddop
