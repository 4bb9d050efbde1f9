// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddop/metrics.hpp"
#include "ddop/pulse_spec.hpp"

namespace ddop {

enum class SweptParameter { Beta, Q, MNPair };

std::string to_string(SweptParameter p);
SweptParameter parse_swept_parameter(std::string_view name);

// One point of a sweep. `value` carries beta or Q; M/N are used for M_N_PAIR.
struct SweepValue {
    double value = 0.0;
    int M = 0;
    int N = 0;
};

struct SweepPlan {
    Family family = Family::Ddop;
    SweptParameter swept_parameter = SweptParameter::Beta;
    std::vector<SweepValue> values;
    PulseSpec fixed;
    double band_half_width = 0.0;  // <= 0 selects 5M/T per point
    int zero_pad = 4;
    int oversample = 16;

    void validate() const;

    // Spec for point i, before validation.
    PulseSpec spec_at(std::size_t i) const;
    std::string label_at(std::size_t i) const;
};

// beta in {0, 0.1, ..., 1}.
std::vector<SweepValue> default_beta_values();
// Q log-spaced on [ceil(0.01 M), M], plus both sides of every jump at Q = kM/2.
std::vector<SweepValue> default_q_values(int M);
// {4, 8, ..., 256} x {4, 8, ..., 64}.
std::vector<SweepValue> default_mn_values();

// Q used at an (M, N) grid point: max(2, ceil(0.05 M)).
int mn_grid_q(int M);

struct SweepRow {
    std::string parameter;
    PulseSpec spec;
    std::optional<LocalizationMetrics> numeric;
    std::optional<LocalizationMetrics> analytic;
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

enum class Metric { TimeDispersion, FreqDispersion, TfArea, Direction };

std::string to_string(Metric m);
Metric parse_metric(std::string_view name);  // dT, dF, dA, kappa
double metric_value(const LocalizationMetrics& m, Metric which);

// 100 |numeric - analytic| / analytic; empty when the analytic value is 0 or a
// bound, or the row failed.
std::optional<double> percent_diff(const SweepRow& row, Metric which);
// For bound-valued analytic metrics: numeric <= bound.
std::optional<bool> within_bound(const SweepRow& row, Metric which);

struct SweepReport {
    std::vector<SweepRow> rows;

    // Largest percent_diff over successful rows; empty if none defined.
    std::optional<double> max_percent_diff(Metric which) const;
    std::size_t failed_rows() const;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

// Header of the CSV form, in column order.
const std::vector<std::string>& report_columns();

// Numeric and analytic metrics of a single spec, with default grid and band
// derived from the arguments. Throws on an illegal spec.
SweepRow evaluate_point(const PulseSpec& spec, double band_half_width, int zero_pad, int oversample,
                        std::string label);

// Points run independently (in parallel); rows come back in plan order.
// A point that throws yields a failed row and the sweep continues.
SweepReport run_sweep(const SweepPlan& plan);

struct OrderingCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct FamilyComparison {
    SweepReport report;
    std::vector<OrderingCheck> checks;

    bool all_pass() const;
};

// Numeric metrics for every spec; ordering checks are added when DDOP, TDM
// and FDM are all present.
FamilyComparison compare_families(const std::vector<PulseSpec>& specs, double band_half_width, int zero_pad,
                                  int oversample);

// DDOP, TDM and FDM sharing (M, N, T, beta, Q) with `base`.
std::vector<PulseSpec> matched_family_specs(const PulseSpec& base);

struct OrthogonalityScan {
    int max_delay_steps = 0;
    int max_doppler_steps = 0;
    // Row-major over delay (outer) then Doppler.
    std::vector<double> magnitude;

    double at(int delay_step, int doppler_step) const;
    double max_off_origin() const;
    std::pair<int, int> argmax_off_origin() const;
};

// |<u, u(t - m T/M) e^{j 2 pi n t/(N T)}>| / energy(u) for |m| <= max_delay_steps,
// |n| <= max_doppler_steps.
OrthogonalityScan orthogonality_scan(const PulseSpec& spec, int max_delay_steps, int max_doppler_steps,
                                     int oversample = 16);

}  // namespace ddop
