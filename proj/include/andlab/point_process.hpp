// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "andlab/disorder.hpp"
#include "andlab/tree.hpp"

namespace andlab {

/// Rescaled eigenvalue point process near E0: per trial, mu counts the
/// eigenvalues of H in [E0 + lo/n, E0 + hi/n) with n = |Lambda_L|.  The
/// sub-tree decomposition eta restricts H to the forward sub-trees rooted
/// at depth l = m0 * floor(alpha L / m0) (floor(alpha L) when m0 = 0) and
/// counts in the same window, same disorder draw.
struct ProcessConfig {
    TreeParams params;
    DensitySpec density = DensitySpec::uniform(0.0, 1.0);
    double lambda = 50.0;
    double energy = 0.0;
    double lo = -1.0;  // window in rescaled units
    double hi = 1.0;
    double alpha = 0.25;
    int trials = 10000;
    std::uint64_t seed = 1;
    int workers = 1;

    void validate() const;
    int split_depth() const;
};

struct CountsSample {
    int trial = 0;
    int mu_count = 0;
    std::vector<int> eta_counts;  // aligned with ProcessSamples::subtree_roots; empty if unsampled
};

struct ProcessSamples {
    int volume = 0;                  // |Lambda_L|
    std::int64_t block_rank = 0;     // M0
    int split_depth = 0;             // l_L; 0 when eta was not sampled
    std::vector<int> subtree_roots;  // vertices at depth l_L, ascending
    std::vector<CountsSample> samples;
    int perturbations = 0;

    double mu_mean() const;
    double mu_stderr() const;
    /// Mean absolute defect E|mu - sum_x eta_x| of the paired samples.
    double decomposition_defect() const;
};

/// mu only.
ProcessSamples sample_mu(const ProcessConfig& cfg);
/// mu and all eta of each trial from the identical disorder draw.
ProcessSamples sample_eta(const ProcessConfig& cfg);

/// Compound Poisson atom estimates p_k = sum_x P[eta_x = k], k = 1..M0,
/// plus the overflow mass sum_{k > M0}; bootstrap standard errors.
struct AtomEstimate {
    std::vector<double> p;   // index k-1 holds p_k, k = 1..M0
    std::vector<double> se;
    double overflow = 0.0;
    double overflow_se = 0.0;
};

AtomEstimate estimate_atoms(const ProcessSamples& eta_samples, int bootstrap = 200,
                            std::uint64_t seed = 1);

/// Empirical law of mu against the compound Poisson law with the given
/// atoms.  The fitted pmf comes from the jump recursion
///   P(0) = exp(-sum p_k),  P(n) = (1/n) sum_k k p_k P(n-k).
struct CompoundPoissonFit {
    std::vector<double> atoms, atom_se;
    double overflow = 0.0, overflow_se = 0.0;
    std::vector<double> fitted_pmf;     // 0..cap
    std::vector<double> empirical_pmf;  // same support
    double tv_distance = 0.0;
    double cf_distance = 0.0;  // RMS gap of characteristic functions, t in [-pi, pi]
    double mu_mean = 0.0, mu_stderr = 0.0;
    double fitted_mean = 0.0;  // sum k p_k
    // Atom intensity bound p_k <= mean_intensity / k, checked when
    // mean_intensity > 0 (mean_intensity = K * nhat(E0) * |I|).
    double mean_intensity = 0.0;
    std::vector<double> atom_bound;
    bool atoms_within_bound = true;  // p_k - 3 se <= bound_k for every k
};

CompoundPoissonFit fit_and_test(const ProcessSamples& mu_samples, const AtomEstimate& atoms,
                                double mean_intensity = 0.0);

/// Empirical Var/Mean of the mu counts with a bootstrap interval.
struct DispersionResult {
    double index = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;  // central 99% bootstrap interval
    double mean = 0.0, variance = 0.0;
};

DispersionResult dispersion_index(const ProcessSamples& mu_samples, int bootstrap = 400,
                                  std::uint64_t seed = 1);

}  // namespace andlab
