// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "andlab/hamiltonian.hpp"
#include "andlab/kernels/negcount.hpp"
#include "andlab/spectral.hpp"

using namespace andlab;

namespace {

struct Instance {
    TreeIndex tree;
    SparseSymmetricOperator H;
};

Instance random_instance(std::mt19937_64& gen, int max_L) {
    std::uniform_int_distribution<int> pick_L(2, max_L);
    std::uniform_real_distribution<double> coupling(0.5, 60.0);
    const TreeParams p{2, 0, pick_L(gen)};
    Instance inst{build_bethe_truncation(p), {}};
    const BlockTiling tiling = block_tiling(inst.tree, 0);
    const double lambda = coupling(gen);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    inst.H.n = inst.tree.n_vertices;
    inst.H.parent = inst.tree.parent;
    inst.H.diag.resize(static_cast<std::size_t>(inst.H.n));
    for (int v = 0; v < inst.H.n; ++v) inst.H.diag[static_cast<std::size_t>(v)] = lambda * u(gen);
    return inst;
}

}  // namespace

TEST_CASE("interval counts equal eigensolver brackets on 100 random instances") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> edge(-5.0, 65.0);
    for (int i = 0; i < 100; ++i) {
        const Instance inst = random_instance(gen, 7);  // n up to 382
        double a = edge(gen), b = edge(gen);
        if (a > b) std::swap(a, b);
        const std::vector<double> ev = eigenvalues(inst.H);
        int expected = 0;
        for (double e : ev)
            if (e >= a && e < b) ++expected;
        CHECK(count_in_interval(inst.H, a, b) == expected);
    }
}

TEST_CASE("whole-range and empty intervals") {
    std::mt19937_64 gen(7);
    const Instance inst = random_instance(gen, 5);
    CHECK(count_in_interval(inst.H, -1e6, 1e6) == inst.H.n);
    CHECK(count_in_interval(inst.H, 3.0, 3.0) == 0);
}

TEST_CASE("count is additive over disjoint half-open intervals") {
    std::mt19937_64 gen(11);
    const Instance inst = random_instance(gen, 6);
    for (double split : {0.0, 1.7, 20.0}) {
        const int left = count_in_interval(inst.H, -100.0, split);
        const int right = count_in_interval(inst.H, split, 100.0);
        CHECK(left + right == count_in_interval(inst.H, -100.0, 100.0));
    }
}

TEST_CASE("batched backends agree lane-for-lane with the scalar kernel") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(-3.0, 30.0);
    for (int rep = 0; rep < 50; ++rep) {
        const Instance inst = random_instance(gen, 6);
        const int n = inst.H.n;
        std::vector<double> diag4(static_cast<std::size_t>(4 * n));
        double shifts[4];
        for (int lane = 0; lane < 4; ++lane) {
            shifts[lane] = u(gen);
            for (int v = 0; v < n; ++v)
                diag4[static_cast<std::size_t>(4 * v + lane)] =
                    inst.H.diag[static_cast<std::size_t>(v)] + 0.01 * lane;
        }
        kernels::NegcountResult batch[4], scalar_batch[4];
        kernels::negcount_batch4(inst.H.parent.data(), diag4.data(), n, shifts, batch);
        kernels::negcount_batch4_scalar(inst.H.parent.data(), diag4.data(), n, shifts,
                                        scalar_batch);
        for (int lane = 0; lane < 4; ++lane) {
            std::vector<double> d(static_cast<std::size_t>(n));
            for (int v = 0; v < n; ++v) d[static_cast<std::size_t>(v)] = diag4[static_cast<std::size_t>(4 * v + lane)];
            const kernels::NegcountResult ref =
                kernels::negcount_scalar(inst.H.parent.data(), d.data(), n, shifts[lane]);
            CHECK(batch[lane].count == ref.count);
            CHECK(batch[lane].breakdown == ref.breakdown);
            CHECK(scalar_batch[lane].count == ref.count);
            CHECK(scalar_batch[lane].breakdown == ref.breakdown);
        }
    }
}

TEST_CASE("forcing the scalar backend changes the dispatch, not the counts") {
    std::mt19937_64 gen(123);
    const Instance inst = random_instance(gen, 5);
    std::vector<std::vector<double>> diags;
    for (int t = 0; t < 9; ++t) {  // odd count exercises the partial final batch
        std::vector<double> d = inst.H.diag;
        for (double& x : d) x += 0.1 * t;
        diags.push_back(std::move(d));
    }
    const std::vector<int> fast = count_in_interval_batch(inst.H.parent, diags, 0.5, 9.5);
    kernels::force_scalar_backend(true);
    CHECK(std::string(kernels::active_backend()) == "scalar");
    const std::vector<int> slow = count_in_interval_batch(inst.H.parent, diags, 0.5, 9.5);
    kernels::force_scalar_backend(false);
    CHECK(fast == slow);
}

TEST_CASE("an exact eigenvalue shift triggers the breakdown retry") {
    // single vertex with diag exactly at the interval edge: the pivot at
    // shift a is zero, the retry must still deliver the right count
    SparseSymmetricOperator H;
    H.n = 1;
    H.parent = {-1};
    H.diag = {2.0};
    int perturbations = 0;
    CHECK(count_in_interval(H, 2.0, 3.0, &perturbations) == 1);
    CHECK(perturbations > 0);
}
