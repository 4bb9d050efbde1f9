// SPDX-License-Identifier: Apache-2.0
#include "ddop/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "ddop/analytic.hpp"
#include "ddop/error.hpp"
#include "ddop/experiments.hpp"
#include "ddop/kernels.hpp"
#include "ddop/metrics.hpp"
#include "ddop/pulses.hpp"

namespace ddop::cli {

namespace {

// Config / usage problems map to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw UsageError("output format must be csv or json, got '" + s + "'");
}

struct Flags {
    std::string config;
    std::string out;
    std::string format;
    int oversample = 0;
    int zero_pad = 0;
    double band = 0.0;
    double tolerance = 0.0;
    std::string family;
    int M = 0, N = 0, Q = 0, otfs_m = 0, otfs_n = 0;
    double T = 0.0, beta = 0.0;

    std::string vary = "beta";
    double from = 0.0, to = 0.0;
    int steps = 0;
    std::string metric = "dA";
    bool corrupt_spectrum = false;

    // Options that were given on the command line.
    std::vector<CLI::Option*> opts;
    bool given(const std::string& name) const {
        for (const CLI::Option* o : opts)
            if (o->check_lname(name) && o->count() > 0) return true;
        return false;
    }
};

void add_common(CLI::App* cmd, Flags& f) {
    auto add = [&](const std::string& name, auto& target, const std::string& help) {
        f.opts.push_back(cmd->add_option(name, target, help));
    };
    add("--config", f.config, "JSON run configuration");
    add("--out", f.out, "Output file (default: stdout)");
    add("--format", f.format, "csv or json");
    add("--oversample", f.oversample, "Samples per delay resolution T/M (default 16)");
    add("--zero-pad", f.zero_pad, "DFT zero-padding factor (default 4)");
    add("--band", f.band, "Analysis band half-width in Hz (default 5M/T)");
    add("--tolerance", f.tolerance, "Allowed percent deviation from the closed forms (default 2)");
    add("--family", f.family, "rrc, btrrc, ddop, btrrc-ddop, gddop, tdm, fdm or otfs");
    add("--M", f.M, "Delay bins");
    add("--N", f.N, "Doppler bins / sub-pulses");
    add("--T", f.T, "Symbol spacing [s]");
    add("--beta", f.beta, "Roll-off factor");
    add("--Q", f.Q, "Sub-pulse half-length in units of T/M (default round(0.05M))");
    add("--otfs-m", f.otfs_m, "OTFS delay index");
    add("--otfs-n", f.otfs_n, "OTFS Doppler index");
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config file '" + path + "': " + e.what());
    }
}

RunConfig resolve_config(const Flags& f) {
    RunConfig cfg;
    bool q_explicit = false;
    if (f.given("config")) {
        const nlohmann::json j = read_json_file(f.config);
        try {
            cfg = run_config_from_json(j);
        } catch (const InvalidInput& e) {
            throw UsageError(e.what());
        }
        q_explicit = j.contains("pulse") && j["pulse"].contains("Q");
    }
    PulseSpec& p = cfg.pulse;
    if (f.given("family")) p.family = parse_family(f.family);
    if (f.given("M")) p.M = f.M;
    if (f.given("N")) p.N = f.N;
    if (f.given("T")) p.T = f.T;
    if (f.given("beta")) p.beta = f.beta;
    if (f.given("Q")) {
        p.Q = f.Q;
    } else if (f.given("M") && !q_explicit) {
        p.Q = PulseSpec::default_q(p.M);
    }
    if (f.given("otfs-m")) p.otfs_m = f.otfs_m;
    if (f.given("otfs-n")) p.otfs_n = f.otfs_n;
    if (f.given("oversample")) cfg.oversample = f.oversample;
    if (f.given("zero-pad")) cfg.zero_pad = f.zero_pad;
    if (f.given("band")) cfg.band_half_width = f.band;
    if (f.given("tolerance")) cfg.tolerance = f.tolerance;
    if (f.given("out")) cfg.output_path = f.out;
    if (f.given("format")) cfg.output_format = parse_format(f.format);
    cfg.validate();
    return cfg;
}

// Writes to --out if set, otherwise to `out`. Returns the stream used for the
// human-readable summary (stdout when the payload went to a file).
std::ostream& emit(const RunConfig& cfg, const std::string& payload, std::ostream& out, std::ostream& err) {
    if (cfg.output_path.empty()) {
        out << payload;
        return err;
    }
    std::ofstream file(cfg.output_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + cfg.output_path + "'");
    file << payload;
    file.close();
    if (!file) throw std::runtime_error("failed writing output file '" + cfg.output_path + "'");
    return out;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SampledSignal s = synthesize(cfg.pulse, cfg.oversample);
    std::string payload;
    if (cfg.output_format == OutputFormat::Csv) {
        std::ostringstream os;
        os << "t,re,im\n";
        for (std::size_t k = 0; k < s.samples.size(); ++k)
            os << fmt12(s.grid.time(k)) << ',' << fmt12(s.samples[k].real()) << ',' << fmt12(s.samples[k].imag())
               << '\n';
        payload = os.str();
    } else {
        nlohmann::json t = nlohmann::json::array(), re = nlohmann::json::array(), im = nlohmann::json::array();
        for (std::size_t k = 0; k < s.samples.size(); ++k) {
            t.push_back(s.grid.time(k));
            re.push_back(s.samples[k].real());
            im.push_back(s.samples[k].imag());
        }
        nlohmann::json j{{"spec", to_json(cfg.pulse)},
                         {"grid",
                          {{"start_time", s.grid.start_time},
                           {"sample_interval", s.grid.sample_interval},
                           {"num_samples", s.grid.num_samples}}},
                         {"energy", energy(s)},
                         {"t", t},
                         {"re", re},
                         {"im", im}};
        payload = j.dump(2) + "\n";
    }
    std::ostream& log = emit(cfg, payload, out, err);
    log << "synth: " << to_string(cfg.pulse.family) << ", " << s.samples.size() << " samples, energy "
        << fmt12(energy(s)) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// metrics

constexpr Metric kAllMetrics[] = {Metric::TimeDispersion, Metric::FreqDispersion, Metric::TfArea, Metric::Direction};

// OTFS closed forms do not describe the edge delay indices.
bool skipped_by_caveat(const PulseSpec& spec, Metric m) {
    if (spec.family != Family::OtfsBasis) return false;
    const bool edge = spec.otfs_m == 0 || spec.otfs_m == spec.M - 1;
    return edge && m != Metric::TimeDispersion;
}

struct MetricVerdict {
    Metric metric;
    std::string status;  // pass, fail, skipped-by-caveat
    std::string detail;
};

std::vector<MetricVerdict> judge(const SweepRow& row, double tolerance) {
    std::vector<MetricVerdict> v;
    for (const Metric m : kAllMetrics) {
        MetricVerdict mv{m, "pass", ""};
        if (skipped_by_caveat(row.spec, m)) {
            mv.status = "skipped-by-caveat";
            mv.detail = "OTFS closed form excludes m = 0 and m = M-1";
        } else if (const auto b = within_bound(row, m)) {
            mv.status = *b ? "pass" : "fail";
            mv.detail = "numeric " + fmt12(metric_value(*row.numeric, m)) + " <= bound " +
                        fmt12(metric_value(*row.analytic, m));
        } else if (const auto p = percent_diff(row, m)) {
            mv.status = *p < tolerance ? "pass" : "fail";
            mv.detail = fmt12(*p) + "% (tolerance " + fmt12(tolerance) + "%)";
        } else {
            mv.status = "skipped";
            mv.detail = "no analytic value";
        }
        v.push_back(mv);
    }
    return v;
}

int cmd_metrics(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SweepRow row = evaluate_point(cfg.pulse, cfg.band(), cfg.zero_pad, cfg.oversample, to_string(cfg.pulse.family));
    const auto verdicts = judge(row, cfg.tolerance);
    const bool pass = std::ranges::none_of(verdicts, [](const MetricVerdict& v) { return v.status == "fail"; });

    std::string payload;
    if (cfg.output_format == OutputFormat::Csv) {
        SweepReport single;
        single.rows.push_back(row);
        payload = single.to_csv();
    } else {
        nlohmann::json checks = nlohmann::json::object();
        for (const auto& v : verdicts) checks[to_string(v.metric)] = {{"status", v.status}, {"detail", v.detail}};
        nlohmann::json j{{"spec", to_json(cfg.pulse)},
                         {"numeric", to_json(*row.numeric)},
                         {"analytic", to_json(*row.analytic)},
                         {"checks", checks},
                         {"tolerance", cfg.tolerance},
                         {"pass", pass}};
        payload = j.dump(2) + "\n";
    }
    std::ostream& log = emit(cfg, payload, out, err);
    for (const auto& v : verdicts) log << "metrics: " << to_string(v.metric) << " " << v.status << " " << v.detail << "\n";
    log << "metrics: " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// sweep

std::vector<SweepValue> sweep_values(const Flags& f, const RunConfig& cfg, SweptParameter param) {
    const bool custom = f.given("from") || f.given("to") || f.given("steps");
    if (param == SweptParameter::MNPair) {
        if (custom) throw UsageError("--from/--to/--steps do not apply to --vary mn");
        return default_mn_values();
    }
    if (!custom) return param == SweptParameter::Beta ? default_beta_values() : default_q_values(cfg.pulse.M);

    const double lo = f.given("from") ? f.from : (param == SweptParameter::Beta ? 0.0 : std::ceil(0.01 * cfg.pulse.M));
    const double hi = f.given("to") ? f.to : (param == SweptParameter::Beta ? 1.0 : cfg.pulse.M);
    const int steps = f.given("steps") ? f.steps : 11;
    if (steps < 1) throw UsageError("--steps must be >= 1");
    if (steps > 1 && !(hi > lo)) throw UsageError("--to must exceed --from");
    std::vector<SweepValue> v;
    for (int i = 0; i < steps; ++i) {
        double x = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
        if (param == SweptParameter::Q) x = std::round(x);
        if (v.empty() || x > v.back().value) v.push_back({x, 0, 0});
    }
    return v;
}

void print_mn_grid(const SweepReport& report, Metric metric, std::ostream& log) {
    std::vector<int> ms, ns;
    for (const auto& r : report.rows) {
        if (std::ranges::find(ms, r.spec.M) == ms.end()) ms.push_back(r.spec.M);
        if (std::ranges::find(ns, r.spec.N) == ns.end()) ns.push_back(r.spec.N);
    }
    log << "sweep: " << to_string(metric) << " percent error, rows M, columns N\n";
    log << "M\\N";
    for (const int n : ns) log << '\t' << n;
    log << '\n';
    for (const int m : ms) {
        log << m;
        for (const int n : ns) {
            log << '\t';
            for (const auto& r : report.rows) {
                if (r.spec.M != m || r.spec.N != n) continue;
                const auto p = percent_diff(r, metric);
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.4f", p ? *p : std::nan(""));
                log << (p ? buf : "-");
            }
        }
        log << '\n';
    }
}

int cmd_sweep(const Flags& f, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    SweepPlan plan;
    plan.family = cfg.pulse.family;
    plan.swept_parameter = parse_swept_parameter(f.vary);
    plan.fixed = cfg.pulse;
    plan.values = sweep_values(f, cfg, plan.swept_parameter);
    plan.band_half_width = cfg.band_half_width.value_or(0.0);
    plan.zero_pad = cfg.zero_pad;
    plan.oversample = cfg.oversample;
    const Metric metric = parse_metric(f.metric);

    const SweepReport report = run_sweep(plan);
    const std::string payload =
        cfg.output_format == OutputFormat::Csv ? report.to_csv() : report.to_json().dump(2) + "\n";
    std::ostream& log = emit(cfg, payload, out, err);
    log << "sweep: " << report.rows.size() << " rows, " << report.failed_rows() << " failed\n";
    for (const Metric m : kAllMetrics) {
        const auto p = report.max_percent_diff(m);
        log << "sweep: max " << to_string(m) << " deviation " << (p ? fmt12(*p) + "%" : "n/a") << "\n";
    }
    if (plan.swept_parameter == SweptParameter::MNPair) print_mn_grid(report, metric, log);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
    std::string name;
    std::string status;  // PASS, FAIL, SKIP
    std::string detail;
};

Check make_check(std::string name, bool pass, std::string detail) {
    return {std::move(name), pass ? "PASS" : "FAIL", std::move(detail)};
}

double gaussian(double t) { return std::exp(-std::numbers::pi * t * t); }
double rectangle(double t) { return std::abs(t) <= 0.5 ? 1.0 : 0.0; }

std::vector<Check> run_checks(const RunConfig& cfg, bool corrupt_spectrum) {
    const PulseSpec& spec = cfg.pulse;
    std::vector<Check> checks;
    const SampledSignal u = synthesize(spec, cfg.oversample);
    const double e = energy(u);

    const double e_tol = spec.family == Family::OtfsBasis ? 1e-6 : 1e-9;
    checks.push_back(make_check("unit_energy", std::abs(e - 1.0) <= e_tol, "energy " + fmt12(e)));

    Spectrum spec_u = dft_spectrum(u, cfg.zero_pad);
    if (corrupt_spectrum) {
        for (std::size_t k = 0; k < spec_u.values.size(); k += 7) spec_u.values[k] *= 1.5;
    }
    const double parseval = std::abs(energy(spec_u) - e) / e;
    checks.push_back(make_check("parseval", parseval <= 1e-9, "relative error " + fmt12(parseval)));

    const SweepRow row = evaluate_point(spec, cfg.band(), cfg.zero_pad, cfg.oversample, to_string(spec.family));
    const double area = row.numeric->tf_area();
    checks.push_back(make_check("gabor_bound", area >= gabor_limit() - 1e-6,
                                "dA " + fmt12(area) + " vs 1/(4 pi) " + fmt12(gabor_limit())));

    for (const auto& v : judge(row, cfg.tolerance)) {
        Check c{"analytic_" + to_string(v.metric), "PASS", v.detail};
        if (v.status == "fail") c.status = "FAIL";
        if (v.status == "skipped" || v.status == "skipped-by-caveat") c.status = "SKIP";
        if (v.status == "skipped-by-caveat") c.detail = "skipped-by-caveat: " + v.detail;
        checks.push_back(c);
    }

    {
        const TimeGrid g = TimeGrid::covering(-6.0, 6.0, 1.0 / 64.0);
        SampledSignal gs = SampledSignal::zeros(g);
        for (std::size_t k = 0; k < g.num_samples; ++k) gs.samples[k] = gaussian(g.time(k));
        const auto gm = measure_all(gs, AnalysisBand{0.5 * g.sample_rate()}, cfg.zero_pad);
        const double dev = std::abs(gm.tf_area() - gabor_limit());
        checks.push_back(make_check("gaussian_gabor_limit", dev <= 1e-4, "dA " + fmt12(gm.tf_area())));
    }
    {
        const TimeGrid g = TimeGrid::covering(-8.0, 8.0, 1.0 / 1024.0);
        const auto lg = scale_modulation_check(gaussian, 1.0, 2.0, g);
        checks.push_back(make_check("scale_modulation_gaussian", lg.rel_error() <= 1e-8, "relative error " + fmt12(lg.rel_error())));
        const TimeGrid gr{-2.0 + 0.5 / 4096.0, 1.0 / 4096.0, 4 * 4096};
        const auto lr = scale_modulation_check(rectangle, 2.0, 1.0, gr);
        checks.push_back(make_check("scale_modulation_rectangle", lr.rel_error() <= 1e-6, "relative error " + fmt12(lr.rel_error())));
    }
    {
        PulseSpec window = spec;
        window.family = Family::Fdm;
        const auto rect = measure_time(synthesize(window, cfg.oversample));
        const double dt_ana = ddop_metrics(spec).time_dispersion;
        const double rel = std::abs(dt_ana - rect.dispersion) / dt_ana;
        checks.push_back(make_check("envelope_time", rel <= 1e-6, "relative gap " + fmt12(rel)));
        const double df_rel = std::abs(ddop_metrics(spec).freq_dispersion - rrc_freq_dispersion(spec));
        checks.push_back(make_check("envelope_freq", df_rel == 0.0, "absolute gap " + fmt12(df_rel)));
    }

    if (spec.family == Family::Ddop) {
        const auto scan = orthogonality_scan(spec, 2 * spec.Q, spec.N / 2, cfg.oversample);
        const double origin = scan.at(0, 0);
        const double off = scan.max_off_origin();
        const auto [am, an] = scan.argmax_off_origin();
        checks.push_back(make_check("orthogonality", std::abs(origin - 1.0) <= 1e-6 && off <= 5e-3,
                                    "origin " + fmt12(origin) + ", max off-origin " + fmt12(off) + " at (" +
                                        std::to_string(am) + ", " + std::to_string(an) + ")"));
        const auto cmp = compare_families(matched_family_specs(spec), cfg.band_half_width.value_or(0.0), cfg.zero_pad,
                                          cfg.oversample);
        for (const auto& c : cmp.checks) checks.push_back(make_check("ordering " + c.name, c.pass, c.detail));
    } else {
        checks.push_back({"orthogonality", "SKIP", "defined for the DDOP family"});
        checks.push_back({"family_orderings", "SKIP", "defined for the DDOP family"});
    }
    return checks;
}

int cmd_verify(const Flags& f, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto checks = run_checks(cfg, f.corrupt_spectrum);
    const bool pass = std::ranges::none_of(checks, [](const Check& c) { return c.status == "FAIL"; });
    std::string payload;
    if (cfg.output_format == OutputFormat::Json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : checks) arr.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
        payload = nlohmann::json{{"spec", to_json(cfg.pulse)}, {"checks", arr}, {"pass", pass}}.dump(2) + "\n";
    } else {
        std::ostringstream os;
        for (const auto& c : checks) os << c.status << ' ' << c.name << ": " << c.detail << '\n';
        payload = os.str();
    }
    std::ostream& log = emit(cfg, payload, out, err);
    log << "verify: " << (pass ? "all checks passed" : "some checks FAILED") << "\n";
    return pass ? kExitOk : kExitCheckFailed;
}

void apply_thread_env() {
    const char* raw = std::getenv("DDOP_THREADS");
    if (raw == nullptr || *raw == '\0') return;
    char* end = nullptr;
    const long n = std::strtol(raw, &end, 10);
    if (*end != '\0' || n < 0) throw UsageError("DDOP_THREADS must be a non-negative integer");
    kernels::set_thread_limit(static_cast<int>(n));
}

}  // namespace

double RunConfig::band() const { return band_half_width.value_or(AnalysisBand::default_for(pulse).half_width); }

void RunConfig::validate() const {
    if (oversample < 1) throw UsageError("oversample must be a positive integer");
    if (zero_pad < 1) throw UsageError("zero_pad must be a positive integer");
    if (band_half_width && !(*band_half_width > 0.0)) throw UsageError("band half-width must be positive");
    if (!(tolerance > 0.0)) throw UsageError("tolerance must be positive");
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidInput("run config: expected a JSON object");
    static const std::vector<std::string> kKeys{"pulse",       "oversample",    "zero_pad", "band_half_width",
                                                "output_path", "output_format", "tolerance"};
    for (const auto& [key, _] : j.items())
        if (std::ranges::find(kKeys, key) == kKeys.end()) throw InvalidInput("run config: unknown field '" + key + "'");
    RunConfig c;
    try {
        if (j.contains("pulse")) c.pulse = pulse_spec_from_json(j["pulse"]);
        if (j.contains("oversample")) c.oversample = j["oversample"].get<int>();
        if (j.contains("zero_pad")) c.zero_pad = j["zero_pad"].get<int>();
        if (j.contains("band_half_width")) c.band_half_width = j["band_half_width"].get<double>();
        if (j.contains("output_path")) c.output_path = j["output_path"].get<std::string>();
        if (j.contains("output_format")) c.output_format = parse_format(j["output_format"].get<std::string>());
        if (j.contains("tolerance")) c.tolerance = j["tolerance"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("run config: ") + e.what());
    } catch (const UsageError& e) {
        throw InvalidInput(e.what());
    }
    return c;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"DDOP pulse synthesis and time-frequency localization toolkit", "ddop"};
    app.require_subcommand(1);
    Flags f;
    auto* synth = app.add_subcommand("synth", "Synthesize a pulse and write its samples");
    auto* metrics = app.add_subcommand("metrics", "Measure localization metrics and compare with the closed forms");
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    auto* verify = app.add_subcommand("verify", "Run the invariant checks");
    for (auto* cmd : {synth, metrics, sweep, verify}) add_common(cmd, f);
    f.opts.push_back(sweep->add_option("--vary", f.vary, "beta, q or mn")->capture_default_str());
    f.opts.push_back(sweep->add_option("--from", f.from, "First sweep value"));
    f.opts.push_back(sweep->add_option("--to", f.to, "Last sweep value"));
    f.opts.push_back(sweep->add_option("--steps", f.steps, "Number of sweep points"));
    f.opts.push_back(sweep->add_option("--metric", f.metric, "dT, dF, dA or kappa (M-N grid summary)")
                         ->capture_default_str());
    verify->add_flag("--inject-corrupt-spectrum", f.corrupt_spectrum)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        apply_thread_env();
        const RunConfig cfg = resolve_config(f);
        if (synth->parsed()) return cmd_synth(cfg, out, err);
        if (metrics->parsed()) return cmd_metrics(cfg, out, err);
        if (sweep->parsed()) return cmd_sweep(f, cfg, out, err);
        return cmd_verify(f, cfg, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConstraintViolation& e) {
        err << "constraint violation: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

}  // namespace ddop::cli
