// SPDX-License-Identifier: Apache-2.0
#include "andlab/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "andlab/parallel.hpp"
#include "andlab/rng.hpp"

namespace andlab {

Complex green_dense_oracle(const SparseSymmetricOperator& H, SpectralParameter z, int x, int y,
                           int cap) {
    if (x < 0 || x >= H.n || y < 0 || y >= H.n)
        throw std::out_of_range("green_dense_oracle: vertex out of range");
    Eigen::MatrixXcd A = H.dense_materialize(cap).cast<Complex>();
    A.diagonal().array() -= z.z;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(H.n);
    rhs(y) = 1.0;
    Eigen::VectorXcd u = A.partialPivLu().solve(rhs);
    return u(x);
}

SchurResolvent::SchurResolvent(const SparseSymmetricOperator& H, const TreeIndex& tree,
                               const BlockTiling& tiling, SpectralParameter z)
    : H_(&H), tree_(&tree), tiling_(&tiling), z_(z.z) {
    if (H.n != tree.n_vertices)
        throw std::invalid_argument("SchurResolvent: operator does not match tree");

    local_index_.assign(static_cast<std::size_t>(H.n), -1);
    for (int b = 0; b < tiling.n_blocks(); ++b) {
        const auto& mem = tiling.members[static_cast<std::size_t>(b)];
        for (int i = 0; i < static_cast<int>(mem.size()); ++i)
            local_index_[static_cast<std::size_t>(mem[static_cast<std::size_t>(i)])] = i;
    }

    const int nb = tiling.n_blocks();
    fwd_inv_.resize(static_cast<std::size_t>(nb));
    g_.assign(static_cast<std::size_t>(nb), Complex{});
    u_.assign(static_cast<std::size_t>(nb), Complex{});

    // bottom-up: deepest heads have the largest ids in level order
    for (int b = nb - 1; b >= 0; --b) {
        Eigen::MatrixXcd M = block_matrix(b, /*excluded=*/-1, /*with_backward=*/false);
        fwd_inv_[static_cast<std::size_t>(b)] = M.inverse();
        g_[static_cast<std::size_t>(b)] = fwd_inv_[static_cast<std::size_t>(b)](0, 0);
    }
    // top-down: root-side values seen from each non-root block
    for (int b = 1; b < nb; ++b) {
        const int head = tiling.heads[static_cast<std::size_t>(b)];
        const int attach = tree.parent[static_cast<std::size_t>(head)];
        const int q = tiling.block_of[static_cast<std::size_t>(attach)];
        Eigen::MatrixXcd M = block_matrix(q, /*excluded=*/head, /*with_backward=*/true);
        const int i = local_index_[static_cast<std::size_t>(attach)];
        u_[static_cast<std::size_t>(b)] = M.inverse()(i, i);
    }
}

Eigen::MatrixXcd SchurResolvent::block_matrix(int b, int excluded, bool with_backward) const {
    const auto& mem = tiling_->members[static_cast<std::size_t>(b)];
    const int m = static_cast<int>(mem.size());
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        const int y = mem[static_cast<std::size_t>(i)];
        Complex d = H_->diag[static_cast<std::size_t>(y)] - z_;
        // in-block adjacency
        const int p = tree_->parent[static_cast<std::size_t>(y)];
        if (p >= 0 && tiling_->block_of[static_cast<std::size_t>(p)] == b) {
            const int j = local_index_[static_cast<std::size_t>(p)];
            M(i, j) = 1.0;
            M(j, i) = 1.0;
        }
        // boundary coupling: diagonal Green values of detached components
        if (p >= 0 && tiling_->block_of[static_cast<std::size_t>(p)] != b && p != excluded) {
            if (with_backward) d -= u_[static_cast<std::size_t>(b)];
        }
        for (int c = tree_->child_begin(y), e = tree_->child_end(y); c < e; ++c) {
            if (tiling_->block_of[static_cast<std::size_t>(c)] == b || c == excluded) continue;
            d -= g_[static_cast<std::size_t>(tiling_->block_of[static_cast<std::size_t>(c)])];
        }
        M(i, i) = d;
    }
    return M;
}

Eigen::MatrixXcd SchurResolvent::block_green(int block_index) const {
    return block_matrix(block_index, -1, true).inverse();
}

Complex SchurResolvent::forward_value(int block_index) const {
    if (block_index <= 0)
        throw std::invalid_argument("forward_value: root block has no detached forward sub-tree");
    return g_[static_cast<std::size_t>(block_index)];
}

Complex SchurResolvent::green(int x, int y) const {
    tree_->check_vertex(x);
    tree_->check_vertex(y);
    const auto& bl = tiling_->block_of;
    if (bl[static_cast<std::size_t>(x)] == bl[static_cast<std::size_t>(y)]) {
        const Eigen::MatrixXcd G = block_green(bl[static_cast<std::size_t>(x)]);
        return G(local_index_[static_cast<std::size_t>(x)], local_index_[static_cast<std::size_t>(y)]);
    }

    // unique path x .. lca .. y
    std::vector<int> up, down;
    {
        int a = x, c = y;
        int la = tree_->level(a), lc = tree_->level(c);
        while (la > lc) { up.push_back(a); a = tree_->parent[static_cast<std::size_t>(a)]; --la; }
        while (lc > la) { down.push_back(c); c = tree_->parent[static_cast<std::size_t>(c)]; --lc; }
        while (a != c) {
            up.push_back(a);
            down.push_back(c);
            a = tree_->parent[static_cast<std::size_t>(a)];
            c = tree_->parent[static_cast<std::size_t>(c)];
        }
        up.push_back(a);  // the lca
    }
    std::vector<int> path = std::move(up);
    path.insert(path.end(), down.rbegin(), down.rend());

    // maximal runs of the path within one block; one Gamma factor per run
    Complex product = 1.0;
    int sign = 1;
    std::size_t i = 0;
    int prev_vertex = -1;
    while (i < path.size()) {
        const int b = bl[static_cast<std::size_t>(path[i])];
        std::size_t j = i;
        while (j + 1 < path.size() && bl[static_cast<std::size_t>(path[j + 1])] == b) ++j;
        const int entry = path[i], leave = path[j];
        Eigen::MatrixXcd M;
        if (prev_vertex < 0) {
            M = block_matrix(b, -1, true);
        } else {
            M = block_matrix(b, prev_vertex, true);
            sign = -sign;
        }
        const Eigen::MatrixXcd Ginv = M.inverse();
        product *= Ginv(local_index_[static_cast<std::size_t>(entry)],
                        local_index_[static_cast<std::size_t>(leave)]);
        prev_vertex = leave;
        i = j + 1;
    }
    return static_cast<double>(sign) * product;
}

std::map<int, Complex> subtree_boundary_green(const SparseSymmetricOperator& H,
                                              const TreeIndex& tree, const BlockTiling& tiling,
                                              SpectralParameter z) {
    SchurResolvent r(H, tree, tiling, z);
    std::map<int, Complex> out;
    for (int b = 1; b < tiling.n_blocks(); ++b)
        out[tiling.heads[static_cast<std::size_t>(b)]] = r.forward_value(b);
    return out;
}

Eigen::MatrixXcd block_schur_green(const SparseSymmetricOperator& H, const TreeIndex& tree,
                                   const BlockTiling& tiling, SpectralParameter z,
                                   int head_vertex) {
    SchurResolvent r(H, tree, tiling, z);
    const int b = tiling.block_of[static_cast<std::size_t>(head_vertex)];
    if (tiling.heads[static_cast<std::size_t>(b)] != head_vertex)
        throw std::invalid_argument("block_schur_green: vertex is not a block head");
    return r.block_green(b);
}

Complex path_green_product(const SparseSymmetricOperator& H, const TreeIndex& tree,
                           const BlockTiling& tiling, SpectralParameter z, int x, int y) {
    SchurResolvent r(H, tree, tiling, z);
    return r.green(x, y);
}

namespace {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
};

// weighted least squares of log(mean) on distance
FitResult fit_log_decay(const std::vector<int>& dists, const std::vector<double>& means,
                        const std::vector<double>& errs) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    int groups = 0;
    for (std::size_t k = 0; k < dists.size(); ++k) {
        if (!(means[k] > 0)) continue;
        ++groups;
        const double x = dists[k];
        const double yv = std::log(means[k]);
        double w = 1.0;
        if (errs[k] > 0) {
            const double rel = errs[k] / means[k];
            w = 1.0 / (rel * rel + 1e-12);
        }
        sw += w;
        sx += w * x;
        sy += w * yv;
        sxx += w * x * x;
        sxy += w * x * yv;
    }
    if (groups < 2) throw std::runtime_error("fractional moment fit needs >= 2 distance groups");
    const double det = sw * sxx - sx * sx;
    FitResult f;
    f.slope = (sw * sxy - sx * sy) / det;
    f.intercept = (sxx * sy - sx * sxy) / det;
    return f;
}

}  // namespace

FracMomentEstimate fractional_moment_estimate(const FracMomentConfig& cfg) {
    if (!(cfg.s > 0 && cfg.s < 1)) throw std::invalid_argument("fracmom: s must be in (0,1)");
    if (cfg.trials < 1) throw std::invalid_argument("fracmom: trials must be >= 1");
    cfg.params.validate();

    const TreeIndex tree = build_bethe_truncation(cfg.params);
    const BlockTiling tiling = block_tiling(tree, cfg.params.m0, /*strict=*/true);
    const SpectralParameter z(Complex(cfg.energy, cfg.epsilon));

    // one representative vertex per depth: the leftmost path
    std::vector<int> rep;
    for (int v = tree.child_begin(0); v < tree.n_vertices && rep.size() < static_cast<std::size_t>(cfg.params.L);) {
        rep.push_back(v);
        if (tree.child_count[static_cast<std::size_t>(v)] == 0) break;
        v = tree.child_begin(v);
    }
    const int ndist = static_cast<int>(rep.size());

    std::vector<std::vector<double>> moments(
        static_cast<std::size_t>(cfg.trials), std::vector<double>(static_cast<std::size_t>(ndist)));
    parallel_for(cfg.trials, cfg.workers, [&](int t) {
        const DisorderSample ds =
            sample_disorder(cfg.density, tiling.n_blocks(), cfg.seed, static_cast<std::uint64_t>(t));
        const SparseSymmetricOperator H =
            assemble({&tree, &tiling, cfg.lambda, &ds});
        SchurResolvent res(H, tree, tiling, z);
        for (int d = 0; d < ndist; ++d)
            moments[static_cast<std::size_t>(t)][static_cast<std::size_t>(d)] =
                std::pow(std::abs(res.green(0, rep[static_cast<std::size_t>(d)])), cfg.s);
    });

    FracMomentEstimate est;
    est.s = cfg.s;
    est.energy = cfg.energy;
    est.epsilon = cfg.epsilon;
    est.lambda = cfg.lambda;
    for (int d = 0; d < ndist; ++d) {
        double sum = 0, sum2 = 0;
        for (int t = 0; t < cfg.trials; ++t) {
            const double v = moments[static_cast<std::size_t>(t)][static_cast<std::size_t>(d)];
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / cfg.trials;
        const double var = std::max(0.0, sum2 / cfg.trials - mean * mean);
        est.distances.push_back(d + 1);
        est.mean_moment.push_back(mean);
        est.stderr_moment.push_back(std::sqrt(var / std::max(1, cfg.trials - 1)));
        est.n_samples.push_back(cfg.trials);
    }

    const FitResult f = fit_log_decay(est.distances, est.mean_moment, est.stderr_moment);
    est.gamma_hat = -f.slope;
    est.intercept = f.intercept;

    // bootstrap over trials for the slope error
    std::mt19937_64 rng(mix64(cfg.seed ^ 0x626f6f74ULL));
    std::uniform_int_distribution<int> pick(0, cfg.trials - 1);
    std::vector<double> slopes;
    slopes.reserve(static_cast<std::size_t>(cfg.bootstrap));
    std::vector<double> bmean(static_cast<std::size_t>(ndist));
    for (int bs = 0; bs < cfg.bootstrap; ++bs) {
        std::fill(bmean.begin(), bmean.end(), 0.0);
        for (int t = 0; t < cfg.trials; ++t) {
            const int tt = pick(rng);
            for (int d = 0; d < ndist; ++d)
                bmean[static_cast<std::size_t>(d)] +=
                    moments[static_cast<std::size_t>(tt)][static_cast<std::size_t>(d)];
        }
        for (int d = 0; d < ndist; ++d) bmean[static_cast<std::size_t>(d)] /= cfg.trials;
        try {
            slopes.push_back(-fit_log_decay(est.distances, bmean, est.stderr_moment).slope);
        } catch (const std::runtime_error&) {
            // degenerate resample; skip
        }
    }
    if (slopes.size() > 1) {
        double m = 0;
        for (double v : slopes) m += v;
        m /= static_cast<double>(slopes.size());
        double var = 0;
        for (double v : slopes) var += (v - m) * (v - m);
        est.gamma_stderr = std::sqrt(var / static_cast<double>(slopes.size() - 1));
    }
    return est;
}

}  // namespace andlab
