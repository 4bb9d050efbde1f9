// SPDX-License-Identifier: Apache-2.0
#include "ddop/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "ddop/analytic.hpp"
#include "ddop/error.hpp"
#include "ddop/pulses.hpp"

namespace ddop {

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

constexpr std::array<Metric, 4> kMetrics{Metric::TimeDispersion, Metric::FreqDispersion, Metric::TfArea,
                                         Metric::Direction};

constexpr std::array<const char*, 4> kColumnStems{"ΔT", "ΔF", "ΔA", "κ"};

double rel_pct(double a, double b) { return 100.0 * std::abs(a - b) / std::abs(b); }

}  // namespace

std::string to_string(SweptParameter p) {
    switch (p) {
        case SweptParameter::Beta: return "BETA";
        case SweptParameter::Q: return "Q";
        case SweptParameter::MNPair: return "M_N_PAIR";
    }
    return "UNKNOWN";
}

SweptParameter parse_swept_parameter(std::string_view name) {
    std::string key(name);
    std::ranges::transform(key, key.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (key == "beta") return SweptParameter::Beta;
    if (key == "q") return SweptParameter::Q;
    if (key == "mn" || key == "m_n_pair") return SweptParameter::MNPair;
    throw InvalidInput("unknown swept parameter '" + std::string(name) + "' (expected beta, q or mn)");
}

std::string to_string(Metric m) {
    switch (m) {
        case Metric::TimeDispersion: return "dT";
        case Metric::FreqDispersion: return "dF";
        case Metric::TfArea: return "dA";
        case Metric::Direction: return "kappa";
    }
    return "unknown";
}

Metric parse_metric(std::string_view name) {
    for (const Metric m : kMetrics)
        if (name == to_string(m)) return m;
    throw InvalidInput("unknown metric '" + std::string(name) + "' (expected dT, dF, dA or kappa)");
}

double metric_value(const LocalizationMetrics& m, Metric which) {
    switch (which) {
        case Metric::TimeDispersion: return m.time_dispersion;
        case Metric::FreqDispersion: return m.freq_dispersion;
        case Metric::TfArea: return m.tf_area();
        case Metric::Direction: return m.direction();
    }
    return 0.0;
}

namespace {

bool is_bound(const LocalizationMetrics& analytic, Metric which) {
    return analytic.time_is_bound && which != Metric::FreqDispersion;
}

}  // namespace

std::optional<double> percent_diff(const SweepRow& row, Metric which) {
    if (!row.ok() || !row.numeric || !row.analytic || is_bound(*row.analytic, which)) return std::nullopt;
    const double ana = metric_value(*row.analytic, which);
    if (ana == 0.0) return std::nullopt;
    return rel_pct(metric_value(*row.numeric, which), ana);
}

std::optional<bool> within_bound(const SweepRow& row, Metric which) {
    if (!row.ok() || !row.numeric || !row.analytic || !is_bound(*row.analytic, which)) return std::nullopt;
    return metric_value(*row.numeric, which) <= metric_value(*row.analytic, which);
}

// ---------------------------------------------------------------------------
// Plans

std::vector<SweepValue> default_beta_values() {
    std::vector<SweepValue> v;
    for (int i = 0; i <= 10; ++i) v.push_back({i / 10.0, 0, 0});
    return v;
}

std::vector<SweepValue> default_q_values(int M) {
    if (M < 1) throw InvalidInput("default_q_values: M must be positive");
    const int lo = std::max(1, static_cast<int>(std::ceil(0.01 * M)));
    std::set<int> qs;
    constexpr int kSteps = 12;
    for (int i = 0; i < kSteps; ++i) {
        const double frac = static_cast<double>(i) / (kSteps - 1);
        qs.insert(static_cast<int>(std::lround(lo * std::pow(static_cast<double>(M) / lo, frac))));
    }
    for (int k = 1; k * M / 2 <= M; ++k) {
        if (M % 2 != 0) break;
        qs.insert(k * M / 2);
        if (k * M / 2 + 1 <= M) qs.insert(k * M / 2 + 1);
    }
    std::vector<SweepValue> v;
    for (const int q : qs)
        if (q >= lo && q <= M) v.push_back({static_cast<double>(q), 0, 0});
    return v;
}

std::vector<SweepValue> default_mn_values() {
    std::vector<SweepValue> v;
    for (int m = 4; m <= 256; m *= 2)
        for (int n = 4; n <= 64; n *= 2) v.push_back({0.0, m, n});
    return v;
}

int mn_grid_q(int M) { return std::max(2, static_cast<int>(std::ceil(0.05 * M - 1e-12))); }

void SweepPlan::validate() const {
    if (values.empty()) throw InvalidInput("sweep plan: no sweep values");
    if (zero_pad < 1) throw InvalidInput("sweep plan: zero_pad must be >= 1");
    if (oversample < 1) throw InvalidInput("sweep plan: oversample must be >= 1");
    for (std::size_t i = 0; i < values.size(); ++i) {
        const SweepValue& v = values[i];
        if (swept_parameter == SweptParameter::MNPair) {
            if (v.M < 1 || v.N < 1) throw InvalidInput("sweep plan: M and N must be positive");
            for (std::size_t j = 0; j < i; ++j)
                if (values[j].M == v.M && values[j].N == v.N) throw InvalidInput("sweep plan: duplicate (M, N) pair");
            continue;
        }
        if (!std::isfinite(v.value)) throw InvalidInput("sweep plan: non-finite sweep value");
        if (swept_parameter == SweptParameter::Q && v.value != std::round(v.value))
            throw InvalidInput("sweep plan: Q values must be integers");
        if (i > 0 && !(v.value > values[i - 1].value))
            throw InvalidInput("sweep plan: values must be strictly increasing");
    }
}

PulseSpec SweepPlan::spec_at(std::size_t i) const {
    PulseSpec s = fixed;
    s.family = family;
    const SweepValue& v = values.at(i);
    switch (swept_parameter) {
        case SweptParameter::Beta: s.beta = v.value; break;
        case SweptParameter::Q: s.Q = static_cast<int>(std::lround(v.value)); break;
        case SweptParameter::MNPair:
            s.M = v.M;
            s.N = v.N;
            s.Q = mn_grid_q(v.M);
            break;
    }
    return s;
}

std::string SweepPlan::label_at(std::size_t i) const {
    const SweepValue& v = values.at(i);
    switch (swept_parameter) {
        case SweptParameter::Beta: return fmt12(v.value);
        case SweptParameter::Q: return std::to_string(std::lround(v.value));
        case SweptParameter::MNPair: return std::to_string(v.M) + "x" + std::to_string(v.N);
    }
    return {};
}

// ---------------------------------------------------------------------------
// Evaluation

SweepRow evaluate_point(const PulseSpec& spec, double band_half_width, int zero_pad, int oversample,
                        std::string label) {
    spec.validate();
    const AnalysisBand band{band_half_width > 0.0 ? band_half_width : AnalysisBand::default_for(spec).half_width};
    const SampledSignal u = synthesize(spec, default_grid(spec, oversample));
    SweepRow row;
    row.parameter = std::move(label);
    row.spec = spec;
    row.numeric = measure_all(u, band, zero_pad);
    row.analytic = analytic_for(spec, AnalyticConfig::from_band(spec, band));
    return row;
}

SweepReport run_sweep(const SweepPlan& plan) {
    plan.validate();
    SweepReport report;
    report.rows.resize(plan.values.size());
    const auto count = static_cast<std::ptrdiff_t>(plan.values.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        SweepRow& row = report.rows[idx];
        row.parameter = plan.label_at(idx);
        row.spec = plan.spec_at(idx);
        try {
            row = evaluate_point(row.spec, plan.band_half_width, plan.zero_pad, plan.oversample, row.parameter);
        } catch (const std::exception& e) {
            row.numeric.reset();
            row.analytic.reset();
            row.status = std::string("failed: ") + e.what();
        }
    }
    return report;
}

std::optional<double> SweepReport::max_percent_diff(Metric which) const {
    std::optional<double> best;
    for (const SweepRow& r : rows) {
        const auto p = percent_diff(r, which);
        if (p && (!best || *p > *best)) best = p;
    }
    return best;
}

std::size_t SweepReport::failed_rows() const {
    return static_cast<std::size_t>(std::ranges::count_if(rows, [](const SweepRow& r) { return !r.ok(); }));
}

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c{"parameter"};
        for (const char* stem : kColumnStems) {
            c.push_back(std::string(stem) + "_num");
            c.push_back(std::string(stem) + "_ana");
            c.push_back(std::string(stem) + "_pct");
        }
        c.push_back("energy_capture");
        c.push_back("status");
        return c;
    }();
    return cols;
}

std::string SweepReport::to_csv() const {
    std::ostringstream os;
    const auto& cols = report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const SweepRow& r : rows) {
        os << csv_escape(r.parameter);
        for (const Metric m : kMetrics) {
            os << ',' << (r.numeric ? fmt12(metric_value(*r.numeric, m)) : "");
            os << ',' << (r.analytic ? fmt12(metric_value(*r.analytic, m)) : "");
            os << ',';
            if (const auto b = within_bound(r, m)) {
                os << (*b ? "true" : "false");
            } else if (const auto p = percent_diff(r, m)) {
                os << fmt12(*p);
            }
        }
        os << ',' << (r.numeric && r.numeric->energy_capture ? fmt12(*r.numeric->energy_capture) : "");
        os << ',' << csv_escape(r.status) << '\n';
    }
    return os.str();
}

nlohmann::json SweepReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const SweepRow& r : rows) {
        nlohmann::json o;
        o["parameter"] = r.parameter;
        for (std::size_t k = 0; k < kMetrics.size(); ++k) {
            const std::string stem = kColumnStems[k];
            const Metric m = kMetrics[k];
            o[stem + "_num"] = r.numeric ? nlohmann::json(metric_value(*r.numeric, m)) : nlohmann::json();
            o[stem + "_ana"] = r.analytic ? nlohmann::json(metric_value(*r.analytic, m)) : nlohmann::json();
            if (const auto b = within_bound(r, m)) {
                o[stem + "_pct"] = *b;
            } else if (const auto p = percent_diff(r, m)) {
                o[stem + "_pct"] = *p;
            } else {
                o[stem + "_pct"] = nullptr;
            }
        }
        o["energy_capture"] = r.numeric && r.numeric->energy_capture ? nlohmann::json(*r.numeric->energy_capture)
                                                                     : nlohmann::json();
        o["status"] = r.status;
        arr.push_back(std::move(o));
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Family comparison

bool FamilyComparison::all_pass() const {
    return std::ranges::all_of(checks, [](const OrderingCheck& c) { return c.pass; });
}

std::vector<PulseSpec> matched_family_specs(const PulseSpec& base) {
    std::vector<PulseSpec> out;
    for (const Family f : {Family::Ddop, Family::Tdm, Family::Fdm}) {
        PulseSpec s = base;
        s.family = f;
        out.push_back(s);
    }
    return out;
}

FamilyComparison compare_families(const std::vector<PulseSpec>& specs, double band_half_width, int zero_pad,
                                  int oversample) {
    SweepPlan plan;
    plan.zero_pad = zero_pad;
    plan.oversample = oversample;
    if (zero_pad < 1 || oversample < 1) throw InvalidInput("compare_families: zero_pad and oversample must be >= 1");

    FamilyComparison out;
    out.report.rows.resize(specs.size());
    const auto count = static_cast<std::ptrdiff_t>(specs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        SweepRow& row = out.report.rows[idx];
        row.parameter = to_string(specs[idx].family);
        row.spec = specs[idx];
        try {
            row = evaluate_point(specs[idx], band_half_width, zero_pad, oversample, row.parameter);
        } catch (const std::exception& e) {
            row.status = std::string("failed: ") + e.what();
        }
    }

    auto find = [&](Family f) -> const LocalizationMetrics* {
        for (const SweepRow& r : out.report.rows)
            if (r.spec.family == f && r.ok() && r.numeric) return &*r.numeric;
        return nullptr;
    };
    const auto* ddop = find(Family::Ddop);
    const auto* tdm = find(Family::Tdm);
    const auto* fdm = find(Family::Fdm);
    if (!ddop || !tdm || !fdm) return out;

    auto add = [&](std::string name, bool pass, std::string detail) {
        out.checks.push_back({std::move(name), pass, std::move(detail)});
    };
    add("dA_DDOP > dA_TDM", ddop->tf_area() > tdm->tf_area(),
        fmt12(ddop->tf_area()) + " vs " + fmt12(tdm->tf_area()));
    add("dA_DDOP > dA_FDM", ddop->tf_area() > fdm->tf_area(),
        fmt12(ddop->tf_area()) + " vs " + fmt12(fdm->tf_area()));
    const double dt_pct = rel_pct(ddop->time_dispersion, fdm->time_dispersion);
    add("dT_DDOP ~ dT_FDM (0.5%)", dt_pct <= 0.5, fmt12(dt_pct) + "%");
    const double df_pct = rel_pct(ddop->freq_dispersion, tdm->freq_dispersion);
    add("dF_DDOP ~ dF_TDM (1%)", df_pct <= 1.0, fmt12(df_pct) + "%");
    add("kappa_TDM < kappa_DDOP < kappa_FDM",
        tdm->direction() < ddop->direction() && ddop->direction() < fdm->direction(),
        fmt12(tdm->direction()) + " < " + fmt12(ddop->direction()) + " < " + fmt12(fdm->direction()));
    return out;
}

// ---------------------------------------------------------------------------
// Biorthogonality

double OrthogonalityScan::at(int delay_step, int doppler_step) const {
    const int cols = 2 * max_doppler_steps + 1;
    return magnitude.at(static_cast<std::size_t>((delay_step + max_delay_steps) * cols + doppler_step +
                                                 max_doppler_steps));
}

std::pair<int, int> OrthogonalityScan::argmax_off_origin() const {
    std::pair<int, int> best{0, 0};
    double best_v = -1.0;
    for (int m = -max_delay_steps; m <= max_delay_steps; ++m) {
        for (int n = -max_doppler_steps; n <= max_doppler_steps; ++n) {
            if (m == 0 && n == 0) continue;
            if (at(m, n) > best_v) {
                best_v = at(m, n);
                best = {m, n};
            }
        }
    }
    return best;
}

double OrthogonalityScan::max_off_origin() const {
    if (max_delay_steps == 0 && max_doppler_steps == 0) return 0.0;
    const auto [m, n] = argmax_off_origin();
    return at(m, n);
}

OrthogonalityScan orthogonality_scan(const PulseSpec& spec, int max_delay_steps, int max_doppler_steps,
                                     int oversample) {
    if (max_delay_steps < 0 || max_doppler_steps < 0) throw InvalidInput("orthogonality_scan: negative scan range");
    spec.validate();
    const SampledSignal u = synthesize(spec, default_grid(spec, oversample));
    const double e = energy(u);
    const TimeGrid& g = u.grid;
    const auto n = static_cast<std::ptrdiff_t>(g.num_samples);

    std::vector<std::ptrdiff_t> support_idx;
    for (std::ptrdiff_t k = 0; k < n; ++k)
        if (u.samples[static_cast<std::size_t>(k)] != cplx{}) support_idx.push_back(k);

    OrthogonalityScan scan;
    scan.max_delay_steps = max_delay_steps;
    scan.max_doppler_steps = max_doppler_steps;
    const int cols = 2 * max_doppler_steps + 1;
    scan.magnitude.assign(static_cast<std::size_t>((2 * max_delay_steps + 1) * cols), 0.0);

    const double two_pi_over_nt = 2.0 * std::numbers::pi / (spec.N * spec.T);
    const int rows = 2 * max_delay_steps + 1;
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < rows; ++r) {
        const int m = r - max_delay_steps;
        const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(m) * oversample;
        std::vector<cplx> acc(static_cast<std::size_t>(cols));
        for (const std::ptrdiff_t k : support_idx) {
            const std::ptrdiff_t src = k - shift;
            if (src < 0 || src >= n) continue;
            const cplx other = u.samples[static_cast<std::size_t>(src)];
            if (other == cplx{}) continue;
            const double t = g.time(static_cast<std::size_t>(k));
            // u(t) conj(u(t - mT/M) e^{j 2pi nu t/(NT)}), nu from -max to +max.
            const cplx step = std::polar(1.0, -two_pi_over_nt * t);
            cplx term = u.samples[static_cast<std::size_t>(k)] * std::conj(other) *
                        std::polar(1.0, two_pi_over_nt * max_doppler_steps * t);
            for (int c = 0; c < cols; ++c) {
                acc[static_cast<std::size_t>(c)] += term;
                term *= step;
            }
        }
        for (int c = 0; c < cols; ++c)
            scan.magnitude[static_cast<std::size_t>(r * cols + c)] =
                std::abs(acc[static_cast<std::size_t>(c)]) * g.sample_interval / e;
    }
    return scan;
}

}  // namespace ddop
