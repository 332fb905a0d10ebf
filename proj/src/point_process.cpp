// SPDX-License-Identifier: Apache-2.0
#include "andlab/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "andlab/kernels/negcount.hpp"
#include "andlab/rng.hpp"

namespace andlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kChunk = 1024;  // trials per batch, bounds scratch memory

double mean_of(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double stderr_of(const std::vector<double>& x, double mean) {
    if (x.size() < 2) return 0.0;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (static_cast<double>(x.size() - 1) * static_cast<double>(x.size())));
}

// Forward sub-tree of `root` in breadth-first order, so every local
// parent index precedes its children (the pivot kernels need that).
struct SubtreePlan {
    std::vector<int> vertices;      // global ids, BFS order
    std::vector<int> parent_local;  // -1 for the sub-tree root
};

SubtreePlan subtree_plan(const TreeIndex& tree, int root) {
    SubtreePlan plan;
    std::vector<int> local_of(static_cast<std::size_t>(tree.n_vertices), -1);
    plan.vertices.push_back(root);
    plan.parent_local.push_back(-1);
    local_of[static_cast<std::size_t>(root)] = 0;
    for (std::size_t i = 0; i < plan.vertices.size(); ++i) {
        const int v = plan.vertices[i];
        for (int c = tree.child_begin(v); c < tree.child_end(v); ++c) {
            local_of[static_cast<std::size_t>(c)] = static_cast<int>(plan.vertices.size());
            plan.vertices.push_back(c);
            plan.parent_local.push_back(static_cast<int>(i));
        }
    }
    return plan;
}

ProcessSamples run_process(const ProcessConfig& cfg, bool with_eta) {
    cfg.validate();
    const TreeIndex tree = build_bethe_truncation(cfg.params);
    // misaligned depths clip the bottom blocks; the block potential just
    // restricts, so depth-stability scans may use consecutive L
    const BlockTiling tiling =
        block_tiling(tree, cfg.params.m0, cfg.params.strict_bethe_depth());
    const int n = tree.n_vertices;
    const int nb = tiling.n_blocks();
    const double a = cfg.energy + cfg.lo / n;
    const double b = cfg.energy + cfg.hi / n;

    ProcessSamples out;
    out.volume = n;
    out.block_rank = cfg.params.block_rank();
    out.samples.resize(static_cast<std::size_t>(cfg.trials));

    std::vector<SubtreePlan> plans;
    if (with_eta) {
        const int l = cfg.split_depth();
        if (l < 1 || cfg.params.L - l < cfg.params.m0)
            throw std::invalid_argument("eta split: depth constraints violated");
        out.split_depth = l;
        for (int v = 0; v < n; ++v)
            if (tree.depth[v] == l) {
                out.subtree_roots.push_back(v);
                plans.push_back(subtree_plan(tree, v));
            }
    }

    for (int begin = 0; begin < cfg.trials; begin += kChunk) {
        const int m = std::min(kChunk, cfg.trials - begin);
        std::vector<std::vector<double>> omegas(static_cast<std::size_t>(m));
        std::vector<std::vector<double>> diags(static_cast<std::size_t>(m));
        for (int t = 0; t < m; ++t) {
            omegas[static_cast<std::size_t>(t)] =
                sample_disorder(cfg.density, nb, cfg.seed,
                                static_cast<std::uint64_t>(begin + t))
                    .values;
            std::vector<double> d(static_cast<std::size_t>(n));
            for (int v = 0; v < n; ++v)
                d[static_cast<std::size_t>(v)] =
                    cfg.lambda * omegas[static_cast<std::size_t>(t)][tiling.block_of[v]];
            diags[static_cast<std::size_t>(t)] = std::move(d);
        }
        const std::vector<int> mu =
            count_in_interval_batch(tree.parent, diags, a, b, &out.perturbations);
        for (int t = 0; t < m; ++t) {
            out.samples[static_cast<std::size_t>(begin + t)].trial = begin + t;
            out.samples[static_cast<std::size_t>(begin + t)].mu_count = mu[static_cast<std::size_t>(t)];
        }

        for (std::size_t r = 0; r < plans.size(); ++r) {
            const SubtreePlan& plan = plans[r];
            std::vector<std::vector<double>> sub(static_cast<std::size_t>(m));
            for (int t = 0; t < m; ++t) {
                std::vector<double> d(plan.vertices.size());
                for (std::size_t i = 0; i < plan.vertices.size(); ++i)
                    d[i] = diags[static_cast<std::size_t>(t)]
                               [static_cast<std::size_t>(plan.vertices[i])];
                sub[static_cast<std::size_t>(t)] = std::move(d);
            }
            const std::vector<int> eta =
                count_in_interval_batch(plan.parent_local, sub, a, b, &out.perturbations);
            for (int t = 0; t < m; ++t) {
                auto& s = out.samples[static_cast<std::size_t>(begin + t)];
                if (s.eta_counts.empty()) s.eta_counts.resize(plans.size(), 0);
                s.eta_counts[r] = eta[static_cast<std::size_t>(t)];
            }
        }
    }
    return out;
}

}  // namespace

void ProcessConfig::validate() const {
    params.validate();
    density.validate();
    if (!(lo < hi)) throw std::invalid_argument("process: need lo < hi");
    if (trials < 1) throw std::invalid_argument("process: need trials >= 1");
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("process: need alpha in (0, 1/2)");
}

int ProcessConfig::split_depth() const {
    if (params.m0 == 0) return static_cast<int>(std::floor(alpha * params.L));
    return params.m0 * static_cast<int>(std::floor(alpha * params.L / params.m0));
}

double ProcessSamples::mu_mean() const {
    std::vector<double> x;
    x.reserve(samples.size());
    for (const auto& s : samples) x.push_back(s.mu_count);
    return mean_of(x);
}

double ProcessSamples::mu_stderr() const {
    std::vector<double> x;
    x.reserve(samples.size());
    for (const auto& s : samples) x.push_back(s.mu_count);
    return stderr_of(x, mean_of(x));
}

double ProcessSamples::decomposition_defect() const {
    double acc = 0.0;
    for (const auto& s : samples) {
        int eta_total = 0;
        for (int c : s.eta_counts) eta_total += c;
        acc += std::abs(s.mu_count - eta_total);
    }
    return acc / static_cast<double>(samples.size());
}

ProcessSamples sample_mu(const ProcessConfig& cfg) { return run_process(cfg, false); }

ProcessSamples sample_eta(const ProcessConfig& cfg) { return run_process(cfg, true); }

AtomEstimate estimate_atoms(const ProcessSamples& eta_samples, int bootstrap,
                            std::uint64_t seed) {
    const int M0 = static_cast<int>(eta_samples.block_rank);
    const std::size_t T = eta_samples.samples.size();
    if (T == 0 || eta_samples.subtree_roots.empty())
        throw std::invalid_argument("estimate_atoms: no eta samples");

    // Per-trial contribution to each atom: number of sub-trees with count k.
    std::vector<std::vector<double>> contrib(static_cast<std::size_t>(M0) + 1,
                                             std::vector<double>(T, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
        for (int c : eta_samples.samples[t].eta_counts) {
            if (c >= 1 && c <= M0)
                contrib[static_cast<std::size_t>(c - 1)][t] += 1.0;
            else if (c > M0)
                contrib[static_cast<std::size_t>(M0)][t] += 1.0;
        }
    }

    AtomEstimate est;
    est.p.resize(static_cast<std::size_t>(M0));
    est.se.assign(static_cast<std::size_t>(M0), 0.0);
    for (int k = 0; k < M0; ++k) est.p[static_cast<std::size_t>(k)] = mean_of(contrib[static_cast<std::size_t>(k)]);
    est.overflow = mean_of(contrib[static_cast<std::size_t>(M0)]);

    std::mt19937_64 gen(mix64(seed ^ 0x61746f6dULL));
    std::uniform_int_distribution<std::size_t> pick(0, T - 1);
    std::vector<std::vector<double>> reps(static_cast<std::size_t>(M0) + 1);
    for (int rep = 0; rep < bootstrap; ++rep) {
        std::vector<double> acc(static_cast<std::size_t>(M0) + 1, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            const std::size_t j = pick(gen);
            for (int k = 0; k <= M0; ++k) acc[static_cast<std::size_t>(k)] += contrib[static_cast<std::size_t>(k)][j];
        }
        for (int k = 0; k <= M0; ++k)
            reps[static_cast<std::size_t>(k)].push_back(acc[static_cast<std::size_t>(k)] / static_cast<double>(T));
    }
    for (int k = 0; k < M0; ++k) {
        const double m = mean_of(reps[static_cast<std::size_t>(k)]);
        est.se[static_cast<std::size_t>(k)] =
            stderr_of(reps[static_cast<std::size_t>(k)], m) * std::sqrt(static_cast<double>(bootstrap));
    }
    const double mo = mean_of(reps[static_cast<std::size_t>(M0)]);
    est.overflow_se =
        stderr_of(reps[static_cast<std::size_t>(M0)], mo) * std::sqrt(static_cast<double>(bootstrap));
    return est;
}

CompoundPoissonFit fit_and_test(const ProcessSamples& mu_samples, const AtomEstimate& atoms,
                                double mean_intensity) {
    CompoundPoissonFit fit;
    fit.atoms = atoms.p;
    fit.atom_se = atoms.se;
    fit.overflow = atoms.overflow;
    fit.overflow_se = atoms.overflow_se;
    fit.mu_mean = mu_samples.mu_mean();
    fit.mu_stderr = mu_samples.mu_stderr();
    const int M0 = static_cast<int>(fit.atoms.size());
    double intensity_total = 0.0;
    for (int k = 1; k <= M0; ++k) {
        intensity_total += fit.atoms[static_cast<std::size_t>(k - 1)];
        fit.fitted_mean += k * fit.atoms[static_cast<std::size_t>(k - 1)];
    }

    int max_obs = 0;
    for (const auto& s : mu_samples.samples) max_obs = std::max(max_obs, s.mu_count);
    const int cap =
        std::max(max_obs, static_cast<int>(std::ceil(10.0 * (fit.fitted_mean + 10.0))));

    // Jump recursion for the compound Poisson pmf.
    fit.fitted_pmf.assign(static_cast<std::size_t>(cap) + 1, 0.0);
    fit.fitted_pmf[0] = std::exp(-intensity_total);
    for (int nn = 1; nn <= cap; ++nn) {
        double acc = 0.0;
        for (int k = 1; k <= std::min(nn, M0); ++k)
            acc += k * fit.atoms[static_cast<std::size_t>(k - 1)] *
                   fit.fitted_pmf[static_cast<std::size_t>(nn - k)];
        fit.fitted_pmf[static_cast<std::size_t>(nn)] = acc / nn;
    }

    fit.empirical_pmf.assign(static_cast<std::size_t>(cap) + 1, 0.0);
    for (const auto& s : mu_samples.samples)
        fit.empirical_pmf[static_cast<std::size_t>(s.mu_count)] +=
            1.0 / static_cast<double>(mu_samples.samples.size());

    double tv = 0.0, fitted_mass = 0.0;
    for (int i = 0; i <= cap; ++i) {
        tv += std::abs(fit.empirical_pmf[static_cast<std::size_t>(i)] -
                       fit.fitted_pmf[static_cast<std::size_t>(i)]);
        fitted_mass += fit.fitted_pmf[static_cast<std::size_t>(i)];
    }
    fit.tv_distance = 0.5 * (tv + std::max(0.0, 1.0 - fitted_mass));

    const int n_grid = 201;
    double cf_acc = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        const double t = -kPi + 2.0 * kPi * i / (n_grid - 1);
        std::complex<double> emp(0.0, 0.0);
        for (int c = 0; c <= cap; ++c)
            emp += fit.empirical_pmf[static_cast<std::size_t>(c)] *
                   std::exp(std::complex<double>(0.0, t * c));
        std::complex<double> expo(0.0, 0.0);
        for (int k = 1; k <= M0; ++k)
            expo += fit.atoms[static_cast<std::size_t>(k - 1)] *
                    (std::exp(std::complex<double>(0.0, t * k)) - 1.0);
        cf_acc += std::norm(emp - std::exp(expo));
    }
    fit.cf_distance = std::sqrt(cf_acc / n_grid);

    fit.mean_intensity = mean_intensity;
    if (mean_intensity > 0.0) {
        for (int k = 1; k <= M0; ++k) {
            const double bound = mean_intensity / k;
            fit.atom_bound.push_back(bound);
            if (fit.atoms[static_cast<std::size_t>(k - 1)] -
                    3.0 * fit.atom_se[static_cast<std::size_t>(k - 1)] >
                bound)
                fit.atoms_within_bound = false;
        }
    }
    return fit;
}

DispersionResult dispersion_index(const ProcessSamples& mu_samples, int bootstrap,
                                  std::uint64_t seed) {
    const std::size_t T = mu_samples.samples.size();
    if (T < 2) throw std::invalid_argument("dispersion: need >= 2 samples");
    std::vector<double> x;
    x.reserve(T);
    for (const auto& s : mu_samples.samples) x.push_back(s.mu_count);
    DispersionResult r;
    r.mean = mean_of(x);
    if (!(r.mean > 0)) throw std::invalid_argument("dispersion: zero mean");
    double ss = 0.0;
    for (double v : x) ss += (v - r.mean) * (v - r.mean);
    r.variance = ss / static_cast<double>(T - 1);
    r.index = r.variance / r.mean;

    std::mt19937_64 gen(mix64(seed ^ 0x64697370ULL));
    std::uniform_int_distribution<std::size_t> pick(0, T - 1);
    std::vector<double> reps;
    for (int rep = 0; rep < bootstrap; ++rep) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const double v = x[pick(gen)];
            s1 += v;
            s2 += v * v;
        }
        const double m = s1 / static_cast<double>(T);
        if (!(m > 0)) continue;
        const double var = (s2 - static_cast<double>(T) * m * m) / static_cast<double>(T - 1);
        reps.push_back(var / m);
    }
    if (!reps.empty()) {
        std::sort(reps.begin(), reps.end());
        r.ci_lo = reps[static_cast<std::size_t>(0.005 * (reps.size() - 1))];
        r.ci_hi = reps[static_cast<std::size_t>(0.995 * (reps.size() - 1))];
    }
    return r;
}

}  // namespace andlab
