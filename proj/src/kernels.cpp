// SPDX-License-Identifier: Apache-2.0
#include "ddop/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#ifdef DDOP_HAVE_OPENMP
#include <omp.h>
#endif

namespace ddop::kernels {

namespace {

std::size_t num_blocks(std::size_t n) { return (n + kBlockSize - 1) / kBlockSize; }

// Evaluates fn(begin, end) -> T per block (in parallel), then accumulates the
// partials in block order.
template <class T, class Fn>
T blocked_sum(std::size_t n, Fn&& fn) {
    const std::size_t nb = num_blocks(n);
    std::vector<T> partial(nb, T{});
    const auto nb_signed = static_cast<std::ptrdiff_t>(nb);
#pragma omp parallel for schedule(static) if (nb > 1)
    for (std::ptrdiff_t b = 0; b < nb_signed; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kBlockSize;
        const std::size_t end = std::min(n, begin + kBlockSize);
        partial[static_cast<std::size_t>(b)] = fn(begin, end);
    }
    T total{};
    for (const T& p : partial) total += p;
    return total;
}

}  // namespace

namespace serial {

double sum_abs2(std::span<const cplx> s) {
    double acc = 0.0;
    for (const cplx& v : s) acc += std::norm(v);
    return acc;
}

cplx sum_conj_product(std::span<const cplx> x, std::span<const cplx> y) {
    if (x.size() != y.size()) throw std::invalid_argument("sum_conj_product: length mismatch");
    cplx acc{};
    for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * std::conj(y[k]);
    return acc;
}

PowerMoments power_moments(std::span<const cplx> s, double x0, double dx) {
    PowerMoments m;
    double first = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double w = std::norm(s[k]);
        m.weight += w;
        first += w * (x0 + static_cast<double>(k) * dx);
    }
    if (m.weight <= 0.0) return m;
    m.mean = first / m.weight;
    double second = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double d = x0 + static_cast<double>(k) * dx - m.mean;
        second += std::norm(s[k]) * d * d;
    }
    m.variance = second / m.weight;
    return m;
}

void cosine_synthesis(std::span<const double> amps, double f0, double df,
                      std::span<const double> times, std::span<double> out) {
    if (times.size() != out.size()) throw std::invalid_argument("cosine_synthesis: length mismatch");
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < times.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < amps.size(); ++j) {
            acc += amps[j] * std::cos(two_pi * (f0 + static_cast<double>(j) * df) * times[k]);
        }
        out[k] = 2.0 * df * acc;
    }
}

}  // namespace serial

namespace parallel {

double sum_abs2(std::span<const cplx> s) {
    return blocked_sum<double>(s.size(), [&](std::size_t b, std::size_t e) {
        return serial::sum_abs2(s.subspan(b, e - b));
    });
}

cplx sum_conj_product(std::span<const cplx> x, std::span<const cplx> y) {
    if (x.size() != y.size()) throw std::invalid_argument("sum_conj_product: length mismatch");
    return blocked_sum<cplx>(x.size(), [&](std::size_t b, std::size_t e) {
        return serial::sum_conj_product(x.subspan(b, e - b), y.subspan(b, e - b));
    });
}

PowerMoments power_moments(std::span<const cplx> s, double x0, double dx) {
    struct Acc {
        double w = 0.0, first = 0.0;
        Acc& operator+=(const Acc& o) {
            w += o.w;
            first += o.first;
            return *this;
        }
    };
    const Acc a = blocked_sum<Acc>(s.size(), [&](std::size_t b, std::size_t e) {
        Acc r;
        for (std::size_t k = b; k < e; ++k) {
            const double w = std::norm(s[k]);
            r.w += w;
            r.first += w * (x0 + static_cast<double>(k) * dx);
        }
        return r;
    });
    PowerMoments m;
    m.weight = a.w;
    if (a.w <= 0.0) return m;
    m.mean = a.first / a.w;
    const double second = blocked_sum<double>(s.size(), [&](std::size_t b, std::size_t e) {
        double r = 0.0;
        for (std::size_t k = b; k < e; ++k) {
            const double d = x0 + static_cast<double>(k) * dx - m.mean;
            r += std::norm(s[k]) * d * d;
        }
        return r;
    });
    m.variance = second / a.w;
    return m;
}

void cosine_synthesis(std::span<const double> amps, double f0, double df,
                      std::span<const double> times, std::span<double> out) {
    if (times.size() != out.size()) throw std::invalid_argument("cosine_synthesis: length mismatch");
    const auto n = static_cast<std::ptrdiff_t>(times.size());
    // Each output is an independent serial sum, so no reduction-order concern.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        serial::cosine_synthesis(amps, f0, df, times.subspan(i, 1), out.subspan(i, 1));
    }
}

}  // namespace parallel

#ifdef DDOP_HAVE_OPENMP
namespace {
int g_default_threads = omp_get_max_threads();
int g_limit = 0;
}  // namespace

void set_thread_limit(int threads) {
    g_limit = threads > 0 ? threads : 0;
    omp_set_num_threads(g_limit > 0 ? g_limit : g_default_threads);
}

int thread_limit() { return g_limit; }
#else
void set_thread_limit(int) {}
int thread_limit() { return 1; }
#endif

}  // namespace ddop::kernels
