// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "andlab/chebyshev.hpp"
#include "andlab/spectral.hpp"

using namespace andlab;

namespace {

SparseSymmetricOperator sampled(const TreeIndex& tree, const BlockTiling& tiling, double lambda,
                                std::uint64_t seed, DisorderSample& omega) {
    omega = sample_disorder(DensitySpec::uniform(0, 1), tiling.n_blocks(), seed, 0);
    return assemble({&tree, &tiling, lambda, &omega});
}

}  // namespace

TEST_CASE("gershgorin bounds enclose the spectrum") {
    const TreeIndex tree = build_bethe_truncation({2, 1, 3});
    const BlockTiling tiling = block_tiling(tree, 1);
    DisorderSample omega;
    const SparseSymmetricOperator H = sampled(tree, tiling, 4.0, 5, omega);
    double lo = 0, hi = 0;
    gershgorin_bounds(H, &lo, &hi);
    for (double e : eigenvalues(H)) {
        CHECK(e >= lo);
        CHECK(e <= hi);
    }
}

TEST_CASE("moment-expansion masses match the dense eigensolve") {
    const TreeParams p{2, 1, 1};
    const TreeIndex tree = build_canopy_truncation(p, 5);
    const BlockTiling tiling = block_tiling(tree, 1);
    DisorderSample omega;
    const SparseSymmetricOperator H = sampled(tree, tiling, 5.0, 11, omega);

    Eigen::MatrixXd dense = H.dense_materialize();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    const std::vector<int> sites = {0, 3, tree.n_vertices - 1};
    ChebyshevLocalMeasures kpm(H, sites, 1024);
    for (std::size_t j = 0; j < sites.size(); ++j) {
        double total = 0.0;
        for (double a = -4.0; a < 10.0; a += 0.7) {
            double exact = 0.0;
            for (int k = 0; k < H.n; ++k) {
                const double e = solver.eigenvalues()[k];
                if (e >= a && e < a + 0.7)
                    exact += solver.eigenvectors()(sites[j], k) * solver.eigenvectors()(sites[j], k);
            }
            const double approx = kpm.interval_mass(static_cast<int>(j), a, a + 0.7);
            // tolerance covers kernel smearing of eigenvalues near bin edges
            CHECK(std::abs(approx - exact) < 0.04);
            total += approx;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("interval masses are additive") {
    const TreeIndex tree = build_canopy_truncation({2, 1, 1}, 5);
    const BlockTiling tiling = block_tiling(tree, 1);
    DisorderSample omega;
    const SparseSymmetricOperator H = sampled(tree, tiling, 2.0, 13, omega);
    ChebyshevLocalMeasures kpm(H, {0}, 512);
    const double whole = kpm.interval_mass(0, -3.0, 5.0);
    const double split = kpm.interval_mass(0, -3.0, 0.8) + kpm.interval_mass(0, 0.8, 5.0);
    CHECK(whole == doctest::Approx(split).epsilon(1e-12));
    CHECK(kpm.interval_mass(0, 2.0, 2.0) == 0.0);
}

TEST_CASE("wegner statistics in degenerate intervals") {
    CountExperimentConfig cfg;
    cfg.params = {2, 1, 3};
    cfg.lambda = 1.0;
    cfg.trials = 200;
    cfg.seed = 21;
    // tiny interval: mean must be near zero
    cfg.lo = 0.25;
    cfg.hi = 0.25 + 1e-6;
    CHECK(wegner_check(cfg).stats.mean <= 0.01);
    // interval disjoint from the spectral enclosure: identically zero
    cfg.lo = 50.0;
    cfg.hi = 51.0;
    const WegnerResult far = wegner_check(cfg);
    CHECK(far.stats.mean == 0.0);
    CHECK(far.pass);
}

TEST_CASE("wegner bound holds at the standard working point") {
    CountExperimentConfig cfg;
    cfg.params = {2, 1, 5};
    cfg.lambda = 1.0;
    cfg.lo = 0.0;
    cfg.hi = 0.5;
    cfg.trials = 500;
    cfg.seed = 31;
    const WegnerResult r = wegner_check(cfg);
    CHECK(r.volume == 94);
    CHECK(r.bound == doctest::Approx(M_PI * 94 * 0.5));
    CHECK(r.pass);
}

TEST_CASE("minami tail statistic and vacuity flag") {
    CountExperimentConfig cfg;
    cfg.params = {2, 1, 3};
    cfg.lambda = 20.0;
    cfg.trials = 2000;
    cfg.seed = 41;
    cfg.lo = 1.0;
    cfg.hi = 1.0 + 0.04;  // small RHS
    const MinamiResult r = minami_tail_check(cfg);
    CHECK(r.block_rank == 3);
    CHECK(!r.vacuous);
    CHECK(r.pass);
    // zero-length limit: statistic vanishes
    cfg.hi = cfg.lo + 1e-9;
    CHECK(minami_tail_check(cfg).excess_mean == 0.0);
}

TEST_CASE("rank-one minami reduces to the classical second-moment regime") {
    CountExperimentConfig cfg;
    cfg.params = {2, 0, 5};
    cfg.lambda = 20.0;
    cfg.trials = 2000;
    cfg.seed = 43;
    cfg.lo = 1.0;
    cfg.hi = 1.02;
    const MinamiResult r = minami_tail_check(cfg);
    CHECK(r.block_rank == 1);
    CHECK(r.pass);
}

TEST_CASE("canopy side: dense eigensolve and moment expansion agree") {
    DosConfig cfg;
    cfg.params = {2, 1, 5};
    cfg.lambda = 1.0;
    cfg.canopy_depth = 7;
    cfg.n_max = 5;
    cfg.bethe_trials = 2;
    cfg.canopy_trials = 3;
    cfg.bin_width = 0.5;
    cfg.seed = 51;
    cfg.kpm_moments = 0;  // dense canopy eigensolve
    const DosResult dense = dos_compare(cfg);
    cfg.kpm_moments = 2048;
    const DosResult kpm = dos_compare(cfg);
    CHECK(dense.bethe_total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dense.canopy_total == doctest::Approx(dense.layer_weight_total).epsilon(1e-10));
    REQUIRE(dense.n_bins == kpm.n_bins);
    // identical disorder draws on both paths: differences are pure kernel smearing
    for (int i = 0; i < dense.n_bins; ++i)
        CHECK(std::abs(dense.canopy_density[static_cast<std::size_t>(i)] -
                       kpm.canopy_density[static_cast<std::size_t>(i)]) < 0.05);
    CHECK(kpm.canopy_total == doctest::Approx(dense.canopy_total).epsilon(1e-3));
}

TEST_CASE("layer weights sum to the truncated total") {
    DosConfig cfg;
    cfg.params = {2, 1, 5};
    cfg.lambda = 1.0;
    cfg.canopy_depth = 7;
    cfg.n_max = 5;
    cfg.bethe_trials = 1;
    cfg.canopy_trials = 1;
    cfg.kpm_moments = 256;
    cfg.seed = 53;
    const DosResult r = dos_compare(cfg);
    CHECK(r.layer_weight_total == doctest::Approx(1.0 - std::pow(2.0, -6)).epsilon(1e-12));
}

TEST_CASE("point density estimate is symmetric for the free operator") {
    DensityPointConfig cfg;
    cfg.params = {2, 1, 1};
    cfg.canopy_depth = 7;
    cfg.n_max = 5;
    cfg.lambda = 0.0;
    cfg.half_width = 0.4;
    cfg.trials = 1;
    cfg.kpm_moments = 1024;
    cfg.seed = 61;
    cfg.energy = 1.3;
    const double right = dos_density_at(cfg).value;
    cfg.energy = -1.3;
    const double left = dos_density_at(cfg).value;
    CHECK(left == doctest::Approx(right).epsilon(1e-6));
    CHECK(left >= 0.0);
    // halving the window is a small perturbation once disorder smooths the
    // finite-tree atoms (at lambda = 0 the spectrum is atomic and the
    // estimate is window-dominated)
    cfg.lambda = 5.0;
    cfg.trials = 30;
    cfg.energy = 0.0;
    cfg.half_width = 0.4;
    const double wide = dos_density_at(cfg).value;
    cfg.half_width = 0.2;
    const double narrow = dos_density_at(cfg).value;
    CHECK(std::abs(narrow - wide) / wide < 0.3);
}
