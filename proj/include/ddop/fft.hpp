// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace ddop::fft {

// Unnormalized forward DFT, X[k] = sum_n x[n] exp(-j 2 pi k n / L), in place.
// Any length; backed by FFTW. Safe to call from several threads at once.
void forward(std::vector<std::complex<double>>& data);

}  // namespace ddop::fft
