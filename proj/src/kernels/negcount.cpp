// SPDX-License-Identifier: Apache-2.0
#include "andlab/kernels/negcount.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace andlab::kernels {

NegcountResult negcount_scalar(const int* parent, const double* diag, int n, double shift) {
    NegcountResult r;
    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
    // reverse level order: children always have larger ids than parents
    for (int v = n - 1; v >= 0; --v) {
        const double d = diag[v] - shift - acc[static_cast<std::size_t>(v)];
        if (d == 0.0 || !std::isfinite(d)) {
            r.breakdown = true;
            return r;
        }
        if (d < 0.0) ++r.count;
        if (parent[v] >= 0) acc[static_cast<std::size_t>(parent[v])] += 1.0 / d;
    }
    return r;
}

void negcount_batch4_scalar(const int* parent, const double* diag4, int n, const double shift4[4],
                            NegcountResult out[4]) {
    for (int lane = 0; lane < 4; ++lane) {
        NegcountResult r;
        std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
        for (int v = n - 1; v >= 0; --v) {
            const double d = diag4[4 * v + lane] - shift4[lane] - acc[static_cast<std::size_t>(v)];
            if (d == 0.0 || !std::isfinite(d)) {
                r.breakdown = true;
                break;
            }
            if (d < 0.0) ++r.count;
            if (parent[v] >= 0) acc[static_cast<std::size_t>(parent[v])] += 1.0 / d;
        }
        out[lane] = r;
    }
}

namespace {

using BatchFn = void (*)(const int*, const double*, int, const double[4], NegcountResult[4]);

std::atomic<bool> g_force_scalar{false};

BatchFn detect_backend() {
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2")) return &negcount_batch4_avx2;
#endif
    return &negcount_batch4_scalar;
}

}  // namespace

void negcount_batch4(const int* parent, const double* diag4, int n, const double shift4[4],
                     NegcountResult out[4]) {
    static const BatchFn detected = detect_backend();
    const BatchFn fn = g_force_scalar.load(std::memory_order_relaxed)
                           ? &negcount_batch4_scalar
                           : detected;
    fn(parent, diag4, n, shift4, out);
}

const char* active_backend() {
    if (g_force_scalar.load(std::memory_order_relaxed)) return "scalar";
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2")) return "avx2";
#endif
    return "scalar";
}

void force_scalar_backend(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

}  // namespace andlab::kernels

namespace andlab {

namespace {

int negcount_with_retry(const int* parent, const double* diag, int n, double shift,
                        int* perturbations) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        auto r = kernels::negcount_scalar(parent, diag, n, shift);
        if (!r.breakdown) return r.count;
        if (perturbations) ++(*perturbations);
        // downward keeps the strict below-shift count: a tied eigenvalue
        // stays excluded, preserving half-open [a, b) semantics
        shift -= 1e-12 * (1.0 + std::fabs(shift));
    }
    throw std::runtime_error("negcount: persistent factorization breakdown");
}

}  // namespace

int count_in_interval(const SparseSymmetricOperator& H, double a, double b, int* perturbations) {
    if (!(a <= b)) throw std::invalid_argument("count_in_interval: need a <= b");
    if (a == b) return 0;
    const int* parent = H.parent.data();
    const double* diag = H.diag.data();
    const int below_b = negcount_with_retry(parent, diag, H.n, b, perturbations);
    const int below_a = negcount_with_retry(parent, diag, H.n, a, perturbations);
    return below_b - below_a;
}

std::vector<int> count_in_interval_batch(const std::vector<int>& parent,
                                         const std::vector<std::vector<double>>& diags,
                                         double a, double b, int* perturbations) {
    if (!(a <= b)) throw std::invalid_argument("count_in_interval_batch: need a <= b");
    const int n = static_cast<int>(parent.size());
    const int trials = static_cast<int>(diags.size());
    std::vector<int> counts(static_cast<std::size_t>(trials), 0);
    if (a == b) return counts;

    std::vector<double> packed(static_cast<std::size_t>(4 * n));
    const double shifts[2] = {b, a};
    for (int t0 = 0; t0 < trials; t0 += 4) {
        const int lanes = std::min(4, trials - t0);
        for (int lane = 0; lane < 4; ++lane) {
            const auto& src = diags[static_cast<std::size_t>(t0 + std::min(lane, lanes - 1))];
            for (int v = 0; v < n; ++v) packed[static_cast<std::size_t>(4 * v + lane)] = src[static_cast<std::size_t>(v)];
        }
        for (int si = 0; si < 2; ++si) {
            const double s4[4] = {shifts[si], shifts[si], shifts[si], shifts[si]};
            kernels::NegcountResult res[4];
            kernels::negcount_batch4(parent.data(), packed.data(), n, s4, res);
            for (int lane = 0; lane < lanes; ++lane) {
                int c;
                if (res[lane].breakdown) {
                    c = negcount_with_retry(parent.data(),
                                            diags[static_cast<std::size_t>(t0 + lane)].data(), n,
                                            shifts[si], perturbations);
                } else {
                    c = res[lane].count;
                }
                counts[static_cast<std::size_t>(t0 + lane)] += (si == 0) ? c : -c;
            }
        }
    }
    return counts;
}

}  // namespace andlab
