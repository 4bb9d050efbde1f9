// SPDX-License-Identifier: Apache-2.0
#include "ddop/pulses.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "ddop/error.hpp"
#include "ddop/kernels.hpp"

namespace ddop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

// Evaluates a real pulse shape at a batch of offsets from its centre.
using ShapeSampler = std::function<void(std::span<const double>, std::span<double>)>;

ShapeSampler rrc_sampler(const PulseSpec& spec) {
    return [spec](std::span<const double> t, std::span<double> out) {
        for (std::size_t k = 0; k < t.size(); ++k) out[k] = rrc_value(t[k], spec, 1.0);
    };
}

// Dense midpoint sampling of the BTRRC response on [0, M(1+beta)/(2T)]; the
// real inverse DFT of an even spectrum reduces to a cosine sum.
class BtrrcShape {
public:
    static constexpr std::size_t kSpectralPoints = 8192;

    explicit BtrrcShape(const PulseSpec& spec) {
        const double f_max = spec.M * (1.0 + spec.beta) / (2.0 * spec.T);
        df_ = f_max / static_cast<double>(kSpectralPoints);
        amps_.resize(kSpectralPoints);
        for (std::size_t j = 0; j < kSpectralPoints; ++j)
            amps_[j] = btrrc_spectrum(spec, (static_cast<double>(j) + 0.5) * df_, 1.0);
    }

    void operator()(std::span<const double> t, std::span<double> out) const {
        kernels::parallel::cosine_synthesis(amps_, 0.5 * df_, df_, t, out);
    }

private:
    double df_ = 0.0;
    std::vector<double> amps_;
};

void require_positive_energy(double energy) {
    if (!(energy > 0.0) || !std::isfinite(energy)) throw InvalidInput("requested sub-pulse energy must be positive");
}

void require_support(const PulseSpec& spec, const TimeGrid& grid) {
    grid.validate();
    const auto [lo, hi] = support(spec);
    if (!grid.contains(lo, hi)) {
        throw InvalidGrid("grid [" + std::to_string(grid.start_time) + ", " + std::to_string(grid.last_time()) +
                          "] does not contain the pulse support [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    }
}

// Adds one copy of the shape, truncated to |t - centre| <= half_width, per
// centre. Consecutive copies with identical sample offsets reuse the previous
// evaluation (the usual case on sample-aligned grids).
void accumulate_subpulses(std::vector<cplx>& samples, const TimeGrid& grid, const ShapeSampler& shape,
                          std::span<const double> centres, double half_width) {
    const double dt = grid.sample_interval;
    const double slack = 1e-9 * dt;
    std::vector<double> offsets, prev_offsets, values;
    for (const double c : centres) {
        const double first = std::ceil((c - half_width - slack - grid.start_time) / dt);
        const double last = std::floor((c + half_width + slack - grid.start_time) / dt);
        const auto k0 = static_cast<std::ptrdiff_t>(std::max(first, 0.0));
        const auto k1 = static_cast<std::ptrdiff_t>(std::min(last, static_cast<double>(grid.num_samples) - 1.0));
        if (k1 < k0) continue;
        offsets.clear();
        for (std::ptrdiff_t k = k0; k <= k1; ++k) offsets.push_back(grid.time(static_cast<std::size_t>(k)) - c);

        bool reuse = offsets.size() == prev_offsets.size();
        for (std::size_t i = 0; reuse && i < offsets.size(); ++i)
            reuse = std::abs(offsets[i] - prev_offsets[i]) <= slack;
        if (!reuse) {
            values.assign(offsets.size(), 0.0);
            shape(offsets, values);
            prev_offsets = offsets;
        }
        for (std::size_t i = 0; i < values.size(); ++i)
            samples[static_cast<std::size_t>(k0) + i] += values[i];
    }
}

void normalize(SampledSignal& s, double target) {
    const double e = energy(s);
    if (!(e > 0.0)) throw InvalidGrid("synthesized pulse has zero energy on this grid");
    const double scale = std::sqrt(target / e);
    for (cplx& v : s.samples) v *= scale;
}

SampledSignal build(const PulseSpec& spec, const TimeGrid& grid, const ShapeSampler& shape,
                    std::span<const double> centres, double energy_target) {
    SampledSignal s = SampledSignal::zeros(grid);
    accumulate_subpulses(s.samples, grid, shape, centres, 0.5 * spec.subpulse_duration());
    normalize(s, energy_target);
    return s;
}

void require_family(const PulseSpec& spec, std::initializer_list<Family> allowed, const char* who) {
    for (const Family f : allowed)
        if (spec.family == f) return;
    throw InvalidInput(std::string(who) + ": unexpected pulse family " + to_string(spec.family));
}

}  // namespace

double rrc_value(double t, const PulseSpec& spec, double energy) {
    const double amp = std::sqrt(spec.M / spec.T * energy);
    const double b = spec.beta;
    const double x = spec.M * t / spec.T;
    if (std::abs(x) < 1e-8) return amp * (1.0 - b + 4.0 * b / kPi);
    const double q = 4.0 * b * x;
    if (b > 0.0 && std::abs(1.0 - q * q) < 1e-8) {
        const double arg = kPi / (4.0 * b);
        return amp * b / std::numbers::sqrt2 *
               ((1.0 + 2.0 / kPi) * std::sin(arg) + (1.0 - 2.0 / kPi) * std::cos(arg));
    }
    const double num = std::sin(kPi * x * (1.0 - b)) + q * std::cos(kPi * x * (1.0 + b));
    return amp * num / (kPi * x * (1.0 - q * q));
}

double rrc_spectrum(const PulseSpec& spec, double f, double energy) {
    const double af = std::abs(f);
    const double flat = std::sqrt(spec.T * energy / spec.M);
    const double lo = spec.M * (1.0 - spec.beta) / (2.0 * spec.T);
    const double hi = spec.M * (1.0 + spec.beta) / (2.0 * spec.T);
    if (af <= lo) return flat;
    if (af > hi) return 0.0;
    const double c = std::cos(kPi * spec.T / (spec.beta * spec.M) * (af - lo));
    return std::sqrt(spec.T / (2.0 * spec.M) * energy * (1.0 + c));
}

double btrrc_spectrum(const PulseSpec& spec, double f, double energy) {
    const double af = std::abs(f);
    const double flat2 = spec.T * energy / spec.M;
    const double lo = spec.M * (1.0 - spec.beta) / (2.0 * spec.T);
    const double mid = spec.M / (2.0 * spec.T);
    const double hi = spec.M * (1.0 + spec.beta) / (2.0 * spec.T);
    if (af <= lo) return std::sqrt(flat2);
    if (af > hi) return 0.0;
    const double rate = 2.0 * kLn2 * spec.T / (spec.beta * spec.M);
    if (af <= mid) return std::sqrt(flat2 * std::exp(-rate * (af - lo)));
    return std::sqrt(flat2 * (1.0 - std::exp(-rate * (hi - af))));
}

cplx ddop_spectrum(const PulseSpec& spec, double f, int num_tones) {
    const double n = spec.N;
    const double envelope = rrc_spectrum(spec, f, 1.0 / n);
    const cplx lead = n * std::polar(1.0, -kPi * ((n - 1.0) * spec.T + spec.subpulse_duration()) * f);
    cplx train{};
    for (int m = -num_tones; m <= num_tones; ++m) {
        // e^{j pi (N-1) m} is +-1.
        const double sign = ((spec.N - 1) % 2 != 0 && m % 2 != 0) ? -1.0 : 1.0;
        train += sign * sinc(n * spec.T * f - m * n);
    }
    return lead * envelope * train;
}

cplx otfs_kernel(double t, int M, double T) {
    // T-periodic: reduce to tau in [-1/2, 1/2] before evaluating, which keeps
    // the ratio accurate next to the t = kT singularities.
    const double u = t / T;
    const double tau = u - std::round(u);
    const double s = std::sin(kPi * tau);
    const cplx phase = std::polar(1.0, (M - 1) * kPi * tau);
    if (std::abs(s) < 1e-12) return phase * static_cast<double>(M);
    return phase * (std::sin(M * kPi * tau) / s);
}

std::pair<double, double> support(const PulseSpec& spec) {
    const double ta = spec.subpulse_duration();
    const double T = spec.T;
    switch (spec.family) {
        case Family::RrcSubpulse:
        case Family::BtrrcSubpulse: return {-0.5 * ta, 0.5 * ta};
        case Family::Tdm: return {0.0, ta};
        case Family::Ddop:
        case Family::BtrrcDdop: return {0.0, (spec.N - 1) * T + ta};
        case Family::GeneralDdop: return {0.0, (spec.N + 2 * spec.extension() - 1) * T + ta};
        case Family::Fdm:
        case Family::OtfsBasis: return {0.0, spec.N * T};
    }
    return {0.0, 0.0};
}

TimeGrid default_grid(const PulseSpec& spec, int oversample) {
    if (oversample < 1) throw InvalidInput("oversampling factor must be >= 1");
    spec.validate();
    const auto [lo, hi] = support(spec);
    return TimeGrid::covering(lo - spec.T, hi + spec.T, spec.T / (static_cast<double>(spec.M) * oversample));
}

SampledSignal synth_rrc_subpulse(const PulseSpec& spec, const TimeGrid& grid, double energy) {
    require_positive_energy(energy);
    PulseSpec centred = spec;
    centred.family = Family::RrcSubpulse;
    centred.validate();
    require_support(centred, grid);
    const double centre = 0.0;
    return build(centred, grid, rrc_sampler(centred), std::span(&centre, 1), energy);
}

SampledSignal synth_btrrc_subpulse(const PulseSpec& spec, const TimeGrid& grid, double energy) {
    if (spec.beta == 0.0) return synth_rrc_subpulse(spec, grid, energy);
    require_positive_energy(energy);
    PulseSpec centred = spec;
    centred.family = Family::BtrrcSubpulse;
    centred.validate();
    require_support(centred, grid);
    const double centre = 0.0;
    return build(centred, grid, BtrrcShape(centred), std::span(&centre, 1), energy);
}

SampledSignal synth_ddop(const PulseSpec& spec, const TimeGrid& grid) {
    require_family(spec, {Family::Ddop, Family::BtrrcDdop}, "synth_ddop");
    spec.validate();
    require_support(spec, grid);
    std::vector<double> centres;
    for (int n = 0; n < spec.N; ++n) centres.push_back(n * spec.T + 0.5 * spec.subpulse_duration());
    const bool btrrc = spec.family == Family::BtrrcDdop && spec.beta > 0.0;
    const ShapeSampler shape = btrrc ? ShapeSampler(BtrrcShape(spec)) : rrc_sampler(spec);
    return build(spec, grid, shape, centres, 1.0);
}

SampledSignal synth_general_ddop(const PulseSpec& spec, const TimeGrid& grid) {
    require_family(spec, {Family::GeneralDdop}, "synth_general_ddop");
    spec.validate();
    require_support(spec, grid);
    const int d = spec.extension();
    std::vector<double> centres;
    for (int n = -d; n <= spec.N - 1 + d; ++n) centres.push_back((n + d) * spec.T + 0.5 * spec.subpulse_duration());
    return build(spec, grid, rrc_sampler(spec), centres, 1.0);
}

SampledSignal synth_tdm(const PulseSpec& spec, const TimeGrid& grid) {
    require_family(spec, {Family::Tdm}, "synth_tdm");
    spec.validate();
    require_support(spec, grid);
    const double centre = 0.5 * spec.subpulse_duration();
    return build(spec, grid, rrc_sampler(spec), std::span(&centre, 1), 1.0);
}

SampledSignal synth_fdm(const PulseSpec& spec, const TimeGrid& grid) {
    require_family(spec, {Family::Fdm}, "synth_fdm");
    spec.validate();
    require_support(spec, grid);
    const double duration = spec.N * spec.T;
    const double amp = 1.0 / std::sqrt(duration);
    const double slack = 1e-9 * grid.sample_interval;
    SampledSignal s = SampledSignal::zeros(grid);
    for (std::size_t k = 0; k < grid.num_samples; ++k) {
        const double t = grid.time(k);
        if (t >= -slack && t < duration - slack) s.samples[k] = amp;
    }
    normalize(s, 1.0);
    return s;
}

SampledSignal synth_otfs_basis(const PulseSpec& spec, const TimeGrid& grid) {
    require_family(spec, {Family::OtfsBasis}, "synth_otfs_basis");
    spec.validate();
    require_support(spec, grid);
    const double T = spec.T;
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.N) * spec.M * T);
    const double delay = spec.otfs_m * T / spec.M;
    SampledSignal s = SampledSignal::zeros(grid);
    const auto count = static_cast<std::ptrdiff_t>(grid.num_samples);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        const double t = grid.time(static_cast<std::size_t>(k));
        // Block index of the rectangular TF pulse; block edges are half open.
        const double block = std::floor(t / T + 1e-9);
        if (block < 0.0 || block >= spec.N) continue;
        const int nd = static_cast<int>(block);
        const cplx chip = std::polar(1.0, 2.0 * kPi * spec.otfs_n * nd / spec.N);
        s.samples[static_cast<std::size_t>(k)] = scale * chip * otfs_kernel(t - nd * T - delay, spec.M, T);
    }
    return s;
}

SampledSignal synthesize(const PulseSpec& spec, const TimeGrid& grid) {
    switch (spec.family) {
        case Family::RrcSubpulse: return synth_rrc_subpulse(spec, grid, 1.0);
        case Family::BtrrcSubpulse: return synth_btrrc_subpulse(spec, grid, 1.0);
        case Family::Ddop:
        case Family::BtrrcDdop: return synth_ddop(spec, grid);
        case Family::GeneralDdop: return synth_general_ddop(spec, grid);
        case Family::Tdm: return synth_tdm(spec, grid);
        case Family::Fdm: return synth_fdm(spec, grid);
        case Family::OtfsBasis: return synth_otfs_basis(spec, grid);
    }
    throw InvalidInput("synthesize: unknown family");
}

SampledSignal synthesize(const PulseSpec& spec, int oversample) {
    return synthesize(spec, default_grid(spec, oversample));
}

}  // namespace ddop
