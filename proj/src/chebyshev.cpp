// SPDX-License-Identifier: Apache-2.0
#include "andlab/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace andlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// y = ((H - c) / hw) x, columnwise over the block.
void scaled_apply(const SparseSymmetricOperator& H, double center, double halfwidth,
                  const RowMat& x, RowMat& y) {
    const int n = H.n;
    for (int v = 0; v < n; ++v) y.row(v) = (H.diag[v] - center) * x.row(v);
    for (int v = 1; v < n; ++v) {
        const int p = H.parent[v];
        y.row(p) += x.row(v);
        y.row(v) += x.row(p);
    }
    y *= 1.0 / halfwidth;
}

}  // namespace

void gershgorin_bounds(const SparseSymmetricOperator& H, double* lo, double* hi) {
    std::vector<int> degree(static_cast<std::size_t>(H.n), 0);
    for (int v = 1; v < H.n; ++v) {
        ++degree[v];
        ++degree[H.parent[v]];
    }
    double a = H.diag[0] - degree[0];
    double b = H.diag[0] + degree[0];
    for (int v = 1; v < H.n; ++v) {
        a = std::min(a, H.diag[v] - degree[v]);
        b = std::max(b, H.diag[v] + degree[v]);
    }
    *lo = a;
    *hi = b;
}

ChebyshevLocalMeasures::ChebyshevLocalMeasures(const SparseSymmetricOperator& H,
                                               std::vector<int> sites, int n_moments)
    : sites_(std::move(sites)) {
    if (n_moments < 2) throw std::invalid_argument("chebyshev: need at least 2 moments");
    if (sites_.empty()) throw std::invalid_argument("chebyshev: empty site list");
    for (int s : sites_)
        if (s < 0 || s >= H.n) throw std::out_of_range("chebyshev: site out of range");

    double lo = 0.0, hi = 0.0;
    gershgorin_bounds(H, &lo, &hi);
    center_ = 0.5 * (lo + hi);
    halfwidth_ = 0.5 * (hi - lo) * 1.01;  // margin keeps the spectrum strictly inside [-1,1]
    if (!(halfwidth_ > 0)) halfwidth_ = 1.0;

    const int n = H.n;
    const int ns = static_cast<int>(sites_.size());
    const int M = n_moments;
    moments_.setZero(M, ns);

    RowMat t0 = RowMat::Zero(n, ns);
    for (int j = 0; j < ns; ++j) t0(sites_[j], j) = 1.0;
    RowMat t1(n, ns), t2(n, ns);
    scaled_apply(H, center_, halfwidth_, t0, t1);

    for (int j = 0; j < ns; ++j) {
        moments_(0, j) = 1.0;
        moments_(1, j) = t1(sites_[j], j);
    }
    for (int m = 2; m < M; ++m) {
        scaled_apply(H, center_, halfwidth_, t1, t2);
        t2 = 2.0 * t2 - t0;
        for (int j = 0; j < ns; ++j) moments_(m, j) = t2(sites_[j], j);
        t0.swap(t1);
        t1.swap(t2);
    }

    jackson_.resize(static_cast<std::size_t>(M));
    const double q = kPi / (M + 1);
    const double cot_q = std::cos(q) / std::sin(q);
    for (int m = 0; m < M; ++m)
        jackson_[m] = ((M - m + 1) * std::cos(m * q) + std::sin(m * q) * cot_q) / (M + 1);
}

double ChebyshevLocalMeasures::interval_mass(int site_index, double lo, double hi) const {
    if (site_index < 0 || site_index >= n_sites())
        throw std::out_of_range("chebyshev: site index out of range");
    if (!(lo < hi)) return 0.0;
    const auto clamp01 = [&](double e) {
        return std::clamp((e - center_) / halfwidth_, -1.0, 1.0);
    };
    // theta decreases in energy: theta1 = acos(x_lo) >= theta2 = acos(x_hi)
    const double theta1 = std::acos(clamp01(lo));
    const double theta2 = std::acos(clamp01(hi));
    double mass = moments_(0, site_index) * (theta1 - theta2) / kPi;
    const int M = n_moments();
    for (int m = 1; m < M; ++m) {
        mass += 2.0 * jackson_[m] * moments_(m, site_index) *
                (std::sin(m * theta1) - std::sin(m * theta2)) / (m * kPi);
    }
    return mass;
}

}  // namespace andlab
