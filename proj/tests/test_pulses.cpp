// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ddop/error.hpp"
#include "ddop/kernels.hpp"
#include "ddop/metrics.hpp"
#include "ddop/pulses.hpp"
#include "oracles.hpp"

using namespace ddop;

namespace {

constexpr double kPi = std::numbers::pi;

PulseSpec with_family(Family f) {
    PulseSpec s;
    s.family = f;
    return s;
}

std::size_t index_of(const TimeGrid& g, double t) {
    return static_cast<std::size_t>(std::lround((t - g.start_time) / g.sample_interval));
}

}  // namespace

// ---------------------------------------------------------------------------
// PulseSpec

TEST(PulseSpec, DefaultQFollowsFivePercentRule) {
    EXPECT_EQ(PulseSpec::default_q(256), 13);
    EXPECT_EQ(PulseSpec::default_q(128), 6);
    EXPECT_EQ(PulseSpec::default_q(4), 1);
}

TEST(PulseSpec, ExtensionIsCeiling) {
    PulseSpec s;
    s.M = 256;
    for (auto [q, d] : {std::pair{1, 1}, {128, 1}, {129, 2}, {256, 2}, {257, 3}}) {
        s.Q = q;
        EXPECT_EQ(s.extension(), d) << q;
    }
}

TEST(PulseSpec, DdopRejectsOverlappingSubpulses) {
    PulseSpec s;
    s.Q = 200;
    EXPECT_THROW(s.validate(), ConstraintViolation);
    s.Q = 128;
    EXPECT_NO_THROW(s.validate());
    s.Q = 200;
    s.family = Family::GeneralDdop;
    EXPECT_NO_THROW(s.validate());
}

TEST(PulseSpec, RejectsOutOfRangeFields) {
    PulseSpec s;
    s.beta = 1.5;
    EXPECT_THROW(s.validate(), InvalidInput);
    s = {};
    s.M = 0;
    EXPECT_THROW(s.validate(), InvalidInput);
    s = with_family(Family::OtfsBasis);
    s.otfs_m = 256;
    EXPECT_THROW(s.validate(), InvalidInput);
}

TEST(PulseSpec, JsonRoundTripAndUnknownFields) {
    PulseSpec s;
    s.M = 32;
    s.N = 8;
    s.beta = 0.25;
    s.Q = 3;
    s.family = Family::OtfsBasis;
    s.otfs_m = 5;
    s.otfs_n = 2;
    const PulseSpec back = pulse_spec_from_json(to_json(s));
    EXPECT_EQ(to_json(back), to_json(s));
    EXPECT_THROW(pulse_spec_from_json(nlohmann::json{{"M", 4}, {"bogus", 1}}), InvalidInput);
    EXPECT_THROW(pulse_spec_from_json(nlohmann::json{{"M", "x"}}), InvalidInput);
    EXPECT_EQ(pulse_spec_from_json(nlohmann::json{{"M", 128}}).Q, 6);
    EXPECT_EQ(pulse_spec_from_json(nlohmann::json{{"family", "gddop"}}).family, Family::GeneralDdop);
    EXPECT_EQ(pulse_spec_from_json(nlohmann::json{{"family", "GENERAL_DDOP"}}).family, Family::GeneralDdop);
}

// ---------------------------------------------------------------------------
// Closed-form evaluators

TEST(RrcValue, LimitAtOrigin) {
    const PulseSpec s;
    EXPECT_NEAR(rrc_value(0.0, s, 1.0), 16.0 * (0.9 + 0.4 / kPi), 1e-12);
    EXPECT_NEAR(rrc_value(0.0, s, 1.0), 16.437, 1e-3);
    // Independent oracle: inverse transform of the closed-form spectrum.
    const double ref = oracle::even_inverse([&](double f) { return std::sqrt(oracle::rrc_power(f, 256, 1, 0.1)); },
                                            256 * 1.1 / 2, 1e-9);
    EXPECT_NEAR(rrc_value(1e-9, s, 1.0), ref, 1e-6 * ref);
}

TEST(RrcValue, SingularPointUsesLimit) {
    PulseSpec s;
    s.beta = 0.25;
    const double ts = s.T / (4.0 * s.beta * s.M);
    const double at = rrc_value(ts, s, 1.0);
    EXPECT_TRUE(std::isfinite(at));
    EXPECT_NEAR(at, rrc_value(ts * (1 + 1e-6), s, 1.0), 1e-4);
    const double ref = oracle::even_inverse([&](double f) { return std::sqrt(oracle::rrc_power(f, 256, 1, 0.25)); },
                                            256 * 1.25 / 2, ts);
    EXPECT_NEAR(at, ref, 1e-6 * std::abs(rrc_value(0.0, s, 1.0)));
}

TEST(RrcValue, ZeroRolloffIsSinc) {
    PulseSpec s;
    s.beta = 0.0;
    for (double t : {0.0013, 0.01, -0.02, 0.037}) {
        const double x = s.M * t / s.T;
        EXPECT_NEAR(rrc_value(t, s, 0.5), std::sqrt(s.M / s.T * 0.5) * std::sin(kPi * x) / (kPi * x), 1e-12);
    }
    for (int k = 1; k < s.Q; ++k) {
        EXPECT_NEAR(rrc_value(k * s.T / s.M, s, 1.0), 0.0, 1e-12);
        EXPECT_NEAR(rrc_value(-k * s.T / s.M, s, 1.0), 0.0, 1e-12);
    }
}

TEST(RrcValue, AutocorrelationVanishesAtDelayResolution) {
    // With roll-off the pulse itself does not cross zero at kT/M; the
    // zero-ISI property lives in its autocorrelation (the raised cosine).
    const double M = 256, T = 1, beta = 0.1;
    for (int k = 1; k <= 5; ++k) {
        const double r = oracle::even_inverse([&](double f) { return oracle::rrc_power(f, M, T, beta); },
                                              M * (1 + beta) / (2 * T), k * T / M, 256);
        EXPECT_NEAR(r, 0.0, 1e-9) << k;
    }
}

TEST(RrcSpectrum, PiecewiseValues) {
    const PulseSpec s;
    const double e = 1.0 / 64;
    EXPECT_DOUBLE_EQ(rrc_spectrum(s, 0.0, e), std::sqrt(s.T * e / s.M));
    EXPECT_NEAR(rrc_spectrum(s, s.M / (2 * s.T), e), std::sqrt(s.T * e / (2 * s.M)), 1e-15);
    EXPECT_EQ(rrc_spectrum(s, s.M * 1.1 / 2 + 1e-9, e), 0.0);
    for (double f : {0.0, 50.0, 120.0, 128.0, 135.0, 141.0})
        EXPECT_EQ(rrc_spectrum(s, f, e), rrc_spectrum(s, -f, e));
}

TEST(BtrrcSpectrum, PiecewiseValues) {
    PulseSpec s;
    s.beta = 0.5;
    EXPECT_DOUBLE_EQ(btrrc_spectrum(s, 0.0, 1.0), std::sqrt(s.T / s.M));
    EXPECT_NEAR(btrrc_spectrum(s, s.M / (2 * s.T), 1.0), std::sqrt(s.T / (2 * s.M)), 1e-15);
    EXPECT_EQ(btrrc_spectrum(s, s.M * 1.5 / 2 + 1e-9, 1.0), 0.0);
    for (double f : {0.0, 70.0, 100.0, 128.0, 150.0, 191.0})
        EXPECT_EQ(btrrc_spectrum(s, f, 1.0), btrrc_spectrum(s, -f, 1.0));
    // Half-power symmetry of a Nyquist spectrum: |A(f0-x)|^2 + |A(f0+x)|^2 = T/M.
    for (double x : {5.0, 20.0, 60.0}) {
        const double sum = std::pow(btrrc_spectrum(s, 128 - x, 1.0), 2) + std::pow(btrrc_spectrum(s, 128 + x, 1.0), 2);
        EXPECT_NEAR(sum, s.T / s.M, 1e-15);
    }
}

TEST(OtfsKernel, PeakAndPeriodicity) {
    EXPECT_EQ(otfs_kernel(0.0, 32, 1.0), cplx(32.0, 0.0));
    EXPECT_NEAR(std::abs(otfs_kernel(3.0, 32, 1.0)), 32.0, 1e-9);
    const cplx a = otfs_kernel(0.123, 32, 1.0);
    EXPECT_NEAR(std::abs(a - otfs_kernel(2.123, 32, 1.0)), 0.0, 1e-9);
    // Zeros at multiples of T/M away from the peak.
    EXPECT_NEAR(std::abs(otfs_kernel(5.0 / 32, 32, 1.0)), 0.0, 1e-12);
}

// ---------------------------------------------------------------------------
// Synthesis

TEST(SynthRrc, EnergyAndShapeMatchQuadrature) {
    const PulseSpec s;
    const TimeGrid g = default_grid(with_family(Family::RrcSubpulse));
    const auto a = synth_rrc_subpulse(s, g, 1.0 / 64);
    EXPECT_NEAR(energy(a), 0.015625, 1e-12);
    // Truncated-formula energy by adaptive quadrature gives the scale.
    const double half = s.subpulse_duration() / 2;
    const double raw = oracle::integrate_panels([&](double t) { return std::pow(rrc_value(t, s, 1.0 / 64), 2); },
                                                -half, half, 52);
    const double scale = std::sqrt((1.0 / 64) / raw);
    EXPECT_NEAR(a.samples[index_of(g, 0.0)].real(), scale * rrc_value(0.0, s, 1.0 / 64), 1e-6 * rrc_value(0.0, s, 1.0 / 64));
    EXPECT_NEAR(scale, 1.0, 0.01);
    EXPECT_EQ(a.samples[index_of(g, half + g.sample_interval)], cplx{});
    EXPECT_NE(a.samples[index_of(g, half)], cplx{});
}

TEST(SynthRrc, RejectsBadEnergy) {
    const PulseSpec s;
    EXPECT_THROW(synth_rrc_subpulse(s, default_grid(with_family(Family::RrcSubpulse)), 0.0), InvalidInput);
}

TEST(SynthBtrrc, MatchesInverseTransformOracle) {
    PulseSpec s;
    s.beta = 0.5;
    s.family = Family::BtrrcSubpulse;
    const TimeGrid g = default_grid(s);
    const auto a = synth_btrrc_subpulse(s, g, 1.0);
    EXPECT_NEAR(energy(a), 1.0, 1e-9);
    const double fmax = s.M * 1.5 / 2;
    auto ref = [&](double t) {
        return oracle::even_inverse([&](double f) { return std::sqrt(oracle::btrrc_power(f, s.M, s.T, s.beta)); }, fmax,
                                    t, 256);
    };
    const double r0 = ref(0.0);
    const double scale = a.samples[index_of(g, 0.0)].real() / r0;
    for (int k : {1, 3, 7, 12}) {
        const double t = k * s.T / s.M;
        EXPECT_NEAR(a.samples[index_of(g, t)].real() / scale, ref(t), 1e-4 * r0) << k;
    }
}

TEST(SynthBtrrc, ZeroRolloffDelegatesToRrc) {
    PulseSpec s;
    s.beta = 0.0;
    const TimeGrid g = default_grid(with_family(Family::RrcSubpulse));
    const auto a = synth_btrrc_subpulse(s, g, 0.25);
    const auto b = synth_rrc_subpulse(s, g, 0.25);
    EXPECT_EQ(a.samples, b.samples);
}

TEST(SynthDdop, DefaultIsUnitEnergyOnSupport) {
    const PulseSpec s;
    const TimeGrid g = default_grid(s);
    const auto u = synth_ddop(s, g);
    EXPECT_NEAR(energy(u), 1.0, 1e-9);
    const double end = 63.0 + s.subpulse_duration();
    for (std::size_t k = 0; k < g.num_samples; ++k) {
        const double t = g.time(k);
        if (t < -1e-12 || t > end + 1e-12) ASSERT_EQ(u.samples[k], cplx{}) << t;
    }
}

TEST(SynthDdop, PeaksReplicateAcrossSubpulses) {
    const PulseSpec s;
    const TimeGrid g = default_grid(s);
    const auto u = synth_ddop(s, g);
    const cplx a0 = u.samples[index_of(g, s.subpulse_duration() / 2)];
    for (int n = 0; n < s.N; ++n) EXPECT_EQ(u.samples[index_of(g, n * s.T + s.subpulse_duration() / 2)], a0) << n;
    // Peak of a 1/N-energy sub-pulse, up to the truncation renormalization.
    EXPECT_NEAR(a0.real(), rrc_value(0.0, s, 1.0 / s.N), 0.01 * a0.real());
}

TEST(SynthDdop, SingleSubpulseCentredAtHalfDuration) {
    PulseSpec s;
    s.N = 1;
    const TimeGrid g = default_grid(s);
    const auto u = synth_ddop(s, g);
    std::size_t peak = 0;
    for (std::size_t k = 0; k < g.num_samples; ++k)
        if (std::abs(u.samples[k]) > std::abs(u.samples[peak])) peak = k;
    EXPECT_NEAR(g.time(peak), s.subpulse_duration() / 2, 1e-12);
}

TEST(SynthDdop, SubpulsesAreDisjoint) {
    PulseSpec s;
    s.Q = 64;  // T_a = 0.5 T
    const TimeGrid g = default_grid(s);
    const auto u = synth_ddop(s, g);
    for (int n = 0; n + 1 < s.N; ++n) {
        // Strictly between the end of sub-pulse n and the start of n+1.
        const double gap_lo = n * s.T + s.subpulse_duration(), gap_hi = (n + 1) * s.T;
        for (std::size_t k = index_of(g, gap_lo) + 1; k < index_of(g, gap_hi); ++k) ASSERT_EQ(u.samples[k], cplx{});
    }
}

TEST(SynthDdop, GridTooShortIsInvalid) {
    const PulseSpec s;
    const TimeGrid g{0.0, 1.0 / 4096, 4096 * 10};
    EXPECT_THROW(synth_ddop(s, g), InvalidGrid);
}

TEST(SynthDdop, WrongFamilyIsRejected) {
    EXPECT_THROW(synth_ddop(with_family(Family::Tdm), default_grid(with_family(Family::Tdm))), InvalidInput);
}

TEST(DdopSpectrum, ToneCentresAndMidpoints) {
    const PulseSpec s;
    for (int m : {0, 3, 40, 100}) {
        const double f = m / s.T;
        EXPECT_NEAR(std::abs(ddop_spectrum(s, f, 200)), s.N * rrc_spectrum(s, f, 1.0 / s.N), 1e-9);
    }
    const double mid = 10.5 / s.T;
    EXPECT_LT(std::abs(ddop_spectrum(s, mid, 200)), 1e-2 * s.N * rrc_spectrum(s, mid, 1.0 / s.N));
}

TEST(DdopSpectrum, AgreesWithDftOfSynthesis) {
    const PulseSpec s;
    const auto u = synthesize(s);
    for (int m : {0, 1, 17, 64, 110}) {
        const double f = m / s.T;
        const double num = std::abs(oracle::dft_at(u.samples, u.grid.start_time, u.grid.sample_interval, f));
        const double ana = std::abs(ddop_spectrum(s, f, 200));
        EXPECT_LE(std::abs(num - ana) / ana, 1e-2) << "tone " << m;
    }
}

TEST(SynthGeneralDdop, SubpulseCountFollowsExtension) {
    for (auto [q, d] : {std::pair{13, 1}, {128, 1}, {256, 2}}) {
        PulseSpec s = with_family(Family::GeneralDdop);
        s.M = 64;
        s.N = 8;
        s.Q = q * 64 / 256;
        const TimeGrid g = default_grid(s);
        const auto u = synth_general_ddop(s, g);
        EXPECT_NEAR(energy(u), 1.0, 1e-9);
        EXPECT_EQ(s.extension(), d);
        const auto [lo, hi] = support(s);
        EXPECT_NEAR(hi, (s.N + 2 * d - 1) * s.T + s.subpulse_duration(), 1e-12);
        if (d == 1 && s.subpulse_duration() < s.T) {
            // Count disjoint clusters of nonzero samples.
            int clusters = 0;
            bool inside = false;
            for (const cplx& v : u.samples) {
                const bool nz = v != cplx{};
                if (nz && !inside) ++clusters;
                inside = nz;
            }
            EXPECT_EQ(clusters, s.N + 2);
        }
        EXPECT_EQ(u.samples.front(), cplx{});
        EXPECT_EQ(u.samples.back(), cplx{});
        EXPECT_GE(lo, g.start_time);
    }
}

TEST(SynthTdm, ShiftedSubpulseWithUnitEnergy) {
    const PulseSpec s = with_family(Family::Tdm);
    const TimeGrid g = default_grid(s);
    const auto u = synth_tdm(s, g);
    EXPECT_NEAR(energy(u), 1.0, 1e-9);
    TimeGrid centred = g;
    centred.start_time -= s.subpulse_duration() / 2;
    const auto a = synth_rrc_subpulse(s, centred, 1.0);
    for (std::size_t k = 0; k < g.num_samples; ++k) ASSERT_NEAR(std::abs(u.samples[k] - a.samples[k]), 0.0, 1e-12);
}

TEST(SynthTdm, SpectrumFollowsRrcEnvelope) {
    const PulseSpec s = with_family(Family::Tdm);
    const auto u = synthesize(s);
    for (double f : {0.0, 30.0, 90.0, 128.0}) {
        const double num = std::abs(oracle::dft_at(u.samples, u.grid.start_time, u.grid.sample_interval, f));
        EXPECT_NEAR(num, rrc_spectrum(s, f, 1.0), 2e-2 * rrc_spectrum(s, 0.0, 1.0)) << f;
    }
}

TEST(SynthFdm, RectangleMoments) {
    const PulseSpec s = with_family(Family::Fdm);
    const auto u = synthesize(s);
    EXPECT_NEAR(energy(u), 1.0, 1e-9);
    const auto tm = measure_time(u);
    EXPECT_NEAR(tm.dispersion, 64.0 / std::sqrt(12.0), 1e-3 * 64.0 / std::sqrt(12.0));
    for (double f : {0.0, 0.01, 0.05, 0.3}) {
        const double num = std::abs(oracle::dft_at(u.samples, u.grid.start_time, u.grid.sample_interval, f));
        const double x = 64.0 * f;
        const double sinc = x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
        EXPECT_NEAR(num, 8.0 * std::abs(sinc), 1e-3) << f;
    }
}

TEST(SynthOtfs, UnitEnergyForInteriorIndex) {
    PulseSpec s = with_family(Family::OtfsBasis);
    s.M = 32;
    s.N = 8;
    s.otfs_m = 5;
    s.otfs_n = 2;
    const TimeGrid g = default_grid(s);
    const auto phi = synth_otfs_basis(s, g);
    // Oracle: one block of |b_OTFS|^2 / (N M T), N identical blocks.
    const double block = oracle::integrate_panels(
        [&](double t) {
            const double x = t / s.T;
            const double den = std::sin(kPi * x);
            const double v = std::abs(den) < 1e-15 ? s.M : std::sin(s.M * kPi * x) / den;
            return v * v;
        },
        0.0, s.T, 64);
    EXPECT_NEAR(s.N * block / (s.N * s.M * s.T), 1.0, 1e-9);
    EXPECT_NEAR(energy(phi), 1.0, 1e-6);
    for (std::size_t k = 0; k < g.num_samples; ++k) {
        const double t = g.time(k);
        if (t < -1e-12 || t >= s.N * s.T - 1e-12) ASSERT_EQ(phi.samples[k], cplx{});
    }
}

TEST(SynthOtfs, EdgeIndexHasHigherOutOfBandEnergy) {
    PulseSpec s = with_family(Family::OtfsBasis);
    s.M = 32;
    s.N = 8;
    auto leak = [&](int m) {
        s.otfs_m = m;
        const auto phi = synthesize(s);
        return 1.0 - measure_freq(dft_spectrum(phi, 4), AnalysisBand{5.0 * s.M / s.T}).energy_capture;
    };
    EXPECT_GT(leak(0), 10.0 * leak(8));
}

TEST(Synthesis, DeterministicAcrossCallsAndThreadCounts) {
    const PulseSpec s = with_family(Family::BtrrcDdop);
    const auto a = synthesize(s);
    kernels::set_thread_limit(1);
    const auto b = synthesize(s);
    kernels::set_thread_limit(0);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.grid, b.grid);
}

TEST(Synthesis, DefaultGridIsAlignedToShifts) {
    const PulseSpec s;
    const TimeGrid g = default_grid(s, 16);
    EXPECT_DOUBLE_EQ(g.sample_interval, 1.0 / 4096);
    const double k = g.start_time / g.sample_interval;
    EXPECT_EQ(k, std::round(k));
    EXPECT_TRUE(g.contains(-1.0, 63.0 + s.subpulse_duration() + 1.0));
    EXPECT_THROW(default_grid(s, 0), InvalidInput);
}
