// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "andlab/experiment.hpp"
#include "andlab/resolvent.hpp"
#include "andlab/rng.hpp"

using namespace andlab;

namespace {

SparseSymmetricOperator sampled_operator(const TreeIndex& tree, const BlockTiling& tiling,
                                         double lambda, std::uint64_t seed, std::uint64_t trial,
                                         DisorderSample& omega) {
    omega = sample_disorder(DensitySpec::uniform(0, 1), tiling.n_blocks(), seed, trial);
    HamiltonianSpec spec;
    spec.tree = &tree;
    spec.tiling = &tiling;
    spec.lambda = lambda;
    spec.disorder = &omega;
    return assemble(spec);
}

}  // namespace

TEST_CASE("dense oracle closed forms") {
    SparseSymmetricOperator single;
    single.n = 1;
    single.parent = {-1};
    single.diag = {2.5};
    const SpectralParameter z(Complex(0.3, 0.2));
    CHECK(std::abs(green_dense_oracle(single, z, 0, 0) - 1.0 / (2.5 - z.z)) < 1e-14);

    SparseSymmetricOperator path;
    path.n = 2;
    path.parent = {-1, 0};
    path.diag = {0.0, 0.0};
    // [(-z, 1), (1, -z)]^{-1} off-diagonal entry is 1/(1 - z^2)
    CHECK(std::abs(green_dense_oracle(path, z, 0, 1) - 1.0 / (1.0 - z.z * z.z)) < 1e-13);
}

TEST_CASE("spectral parameter requires the upper half plane") {
    CHECK_THROWS(SpectralParameter(Complex(1.0, 0.0)));
    CHECK_THROWS(SpectralParameter(Complex(1.0, -0.5)));
}

TEST_CASE("resolvent engine matches the dense oracle across configurations") {
    const OracleSweepResult res = oracle_sweep(314159, 10);
    CHECK(res.max_rel_err <= 1e-9);
    CHECK(res.min_herglotz_eig >= -1e-12);
}

TEST_CASE("symmetry and the 1/Im z bound") {
    const TreeParams p{2, 1, 3};
    const TreeIndex tree = build_bethe_truncation(p);
    const BlockTiling tiling = block_tiling(tree, 1);
    DisorderSample omega;
    const SparseSymmetricOperator H = sampled_operator(tree, tiling, 2.0, 17, 0, omega);
    for (double eps : {1e-3, 0.1, 1.0}) {
        const SpectralParameter z(Complex(0.4, eps));
        const SchurResolvent R(H, tree, tiling, z);
        for (int x = 0; x < H.n; x += 3)
            for (int y = x; y < H.n; y += 5) {
                const Complex g = R.green(x, y);
                CHECK(std::abs(g - R.green(y, x)) < 1e-10);
                CHECK(std::abs(g) <= 1.0 / eps + 1e-9);
            }
    }
}

TEST_CASE("rank-one boundary values are the scalar continued fraction") {
    const TreeParams p{2, 0, 3};
    const TreeIndex tree = build_bethe_truncation(p);
    const BlockTiling tiling = block_tiling(tree, 0);
    DisorderSample omega;
    const SparseSymmetricOperator H = sampled_operator(tree, tiling, 3.0, 23, 1, omega);
    const SpectralParameter z(Complex(-0.2, 0.05));
    const auto boundary = subtree_boundary_green(H, tree, tiling, z);
    // direct continued fraction, leaves upward: g_x = 1/(d_x - z - sum g_child)
    std::vector<Complex> g(static_cast<std::size_t>(H.n));
    for (int v = H.n - 1; v >= 0; --v) {
        Complex acc = 0.0;
        for (int c = tree.child_begin(v); c < tree.child_end(v); ++c)
            acc += g[static_cast<std::size_t>(c)];
        g[static_cast<std::size_t>(v)] = 1.0 / (H.diag[static_cast<std::size_t>(v)] - z.z - acc);
    }
    REQUIRE(!boundary.empty());
    for (const auto& [vertex, value] : boundary)
        CHECK(std::abs(value - g[static_cast<std::size_t>(vertex)]) < 1e-9);
}

TEST_CASE("forward values match the dense solve of the detached sub-tree") {
    const TreeParams p{2, 1, 3};
    const TreeIndex tree = build_bethe_truncation(p);
    const BlockTiling tiling = block_tiling(tree, 1);
    DisorderSample omega;
    const SparseSymmetricOperator H = sampled_operator(tree, tiling, 1.7, 29, 2, omega);
    const SpectralParameter z(Complex(0.9, 0.02));
    const auto boundary = subtree_boundary_green(H, tree, tiling, z);
    for (const auto& [root, value] : boundary) {
        // assemble the detached forward sub-tree densely
        std::vector<int> verts{root};
        std::vector<int> parent_local{-1};
        std::vector<int> local(static_cast<std::size_t>(H.n), -1);
        local[static_cast<std::size_t>(root)] = 0;
        for (std::size_t i = 0; i < verts.size(); ++i)
            for (int c = tree.child_begin(verts[i]); c < tree.child_end(verts[i]); ++c) {
                local[static_cast<std::size_t>(c)] = static_cast<int>(verts.size());
                verts.push_back(c);
                parent_local.push_back(static_cast<int>(i));
            }
        SparseSymmetricOperator sub;
        sub.n = static_cast<int>(verts.size());
        sub.parent = parent_local;
        for (int v : verts) sub.diag.push_back(H.diag[static_cast<std::size_t>(v)]);
        CHECK(std::abs(value - green_dense_oracle(sub, z, 0, 0)) < 1e-10);
    }
}

TEST_CASE("fractional moments: disorder-free runs have zero variance") {
    FracMomentConfig cfg;
    cfg.params = {2, 1, 3};
    cfg.density = DensitySpec::uniform(0, 1);
    cfg.lambda = 0.0;
    cfg.trials = 20;
    cfg.seed = 3;
    const FracMomentEstimate est = fractional_moment_estimate(cfg);
    for (double se : est.stderr_moment) CHECK(se == doctest::Approx(0.0));
}

TEST_CASE("fractional moment decay is significant at strong coupling") {
    FracMomentConfig cfg;
    cfg.params = {2, 1, 5};
    cfg.density = DensitySpec::uniform(0, 1);
    cfg.s = 0.5;
    cfg.energy = 0.0;
    cfg.epsilon = 1e-3;
    cfg.lambda = 40.0;
    cfg.trials = 400;
    cfg.seed = 5;
    const FracMomentEstimate est = fractional_moment_estimate(cfg);
    CHECK(est.gamma_hat > 0.0);
    CHECK(est.gamma_hat / est.gamma_stderr > 3.0);
    // moments decrease with distance
    for (std::size_t i = 1; i < est.mean_moment.size(); ++i)
        CHECK(est.mean_moment[i] < est.mean_moment[i - 1]);
}
