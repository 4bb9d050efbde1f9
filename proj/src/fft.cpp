// SPDX-License-Identifier: Apache-2.0
#include "ddop/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace ddop::fft {

namespace {

// FFTW planning is not thread safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

}  // namespace

void forward(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n == 0) return;
    std::unique_ptr<fftw_complex[], FftwFree> buf(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
    if (!buf) throw std::bad_alloc();

    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw std::runtime_error("fftw: planning failed");

    // std::complex<double> is layout-compatible with fftw_complex.
    std::memcpy(buf.get(), data.data(), sizeof(fftw_complex) * n);
    fftw_execute(plan);
    std::memcpy(static_cast<void*>(data.data()), buf.get(), sizeof(fftw_complex) * n);

    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace ddop::fft
