// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "ddop/pulse_spec.hpp"
#include "ddop/signal.hpp"

namespace ddop {

inline constexpr int kDefaultOversample = 16;

// ---------------------------------------------------------------------------
// Closed-form evaluators
// ---------------------------------------------------------------------------

// Untruncated RRC sub-pulse with zero-ISI interval T/M, amplitude scaled so the
// untruncated pulse has the given energy. Removable singularities at t = 0 and
// |t| = T/(4 beta M) return their limits.
double rrc_value(double t, const PulseSpec& spec, double energy);

// Frequency response of the untruncated RRC pulse (raised-cosine roll-off).
double rrc_spectrum(const PulseSpec& spec, double f, double energy);

// Frequency response of the BTRRC pulse (exponential roll-off branches).
// beta = 0 degenerates to the ideal low-pass, same as rrc_spectrum.
double btrrc_spectrum(const PulseSpec& spec, double f, double energy);

// DDOP frequency response as a sinc train under the RRC envelope,
//   N e^{-j pi ((N-1)T + T_a) f} A(f) sum_{|m|<=num_tones} e^{j pi (N-1) m} sinc(NTf - mN),
// with A the untruncated RRC response at sub-pulse energy 1/N.
cplx ddop_spectrum(const PulseSpec& spec, double f, int num_tones);

// OTFS Dirichlet kernel e^{j(M-1)pi t/T} sin(M pi t/T)/sin(pi t/T); equals M at t = kT.
cplx otfs_kernel(double t, int M, double T);

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

// Time interval outside which the family's pulse is identically zero.
std::pair<double, double> support(const PulseSpec& spec);

// Grid with sample interval T/(M*oversample) covering support(spec) plus one
// symbol T of zeros on each side. Samples sit on integer multiples of the
// interval so sub-pulse peaks and T/M shifts land on samples.
TimeGrid default_grid(const PulseSpec& spec, int oversample = kDefaultOversample);

// Truncated RRC sub-pulse a(t) on [-T_a/2, T_a/2], scaled so its energy on the
// grid is exactly `energy`.
SampledSignal synth_rrc_subpulse(const PulseSpec& spec, const TimeGrid& grid, double energy);

// Truncated BTRRC sub-pulse. The time response is the real inverse DFT of the
// closed-form spectrum, sampled densely on [0, M(1+beta)/(2T)].
SampledSignal synth_btrrc_subpulse(const PulseSpec& spec, const TimeGrid& grid, double energy);

// u(t) = sum_{n<N} a(t - nT - T_a/2), unit energy. Family DDOP uses RRC
// sub-pulses, BTRRC_DDOP uses BTRRC sub-pulses.
SampledSignal synth_ddop(const PulseSpec& spec, const TimeGrid& grid);

// N + 2D RRC sub-pulses with D = ceil(T_a/T); total energy normalized to 1
// (sub-pulses may overlap once T_a > T).
SampledSignal synth_general_ddop(const PulseSpec& spec, const TimeGrid& grid);

// a(t - T_a/2) with unit energy.
SampledSignal synth_tdm(const PulseSpec& spec, const TimeGrid& grid);

// (1/sqrt(NT)) on [0, NT).
SampledSignal synth_fdm(const PulseSpec& spec, const TimeGrid& grid);

// OTFS basis function phi_{m,n}(t) with a unit-energy rectangular TF pulse of
// duration T. Unit energy by construction, not rescaled.
SampledSignal synth_otfs_basis(const PulseSpec& spec, const TimeGrid& grid);

// Dispatch on spec.family.
SampledSignal synthesize(const PulseSpec& spec, const TimeGrid& grid);
SampledSignal synthesize(const PulseSpec& spec, int oversample = kDefaultOversample);

}  // namespace ddop
