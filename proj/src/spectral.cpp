// SPDX-License-Identifier: Apache-2.0
#include "andlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "andlab/chebyshev.hpp"
#include "andlab/kernels/negcount.hpp"
#include "andlab/parallel.hpp"
#include "andlab/rng.hpp"

namespace andlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

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

}  // namespace

std::vector<double> eigenvalues(const SparseSymmetricOperator& H, int cap) {
    Eigen::MatrixXd dense = H.dense_materialize(cap);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
    std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + H.n);
    return out;
}

void CountExperimentConfig::validate() const {
    params.validate();
    density.validate();
    if (!(lo < hi)) throw std::invalid_argument("count experiment: need lo < hi");
    if (trials < 1) throw std::invalid_argument("count experiment: need trials >= 1");
    if (!(lambda > 0)) throw std::invalid_argument("count experiment: need lambda > 0");
}

IntervalCountStats sample_interval_counts(const CountExperimentConfig& cfg) {
    cfg.validate();
    const TreeIndex tree = build_bethe_truncation(cfg.params);
    const BlockTiling tiling = block_tiling(tree, cfg.params.m0);
    const int n = tree.n_vertices;
    const int nb = tiling.n_blocks();

    std::vector<std::vector<double>> diags(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, cfg.workers, [&](int t) {
        const DisorderSample omega = sample_disorder(cfg.density, nb, cfg.seed,
                                                     static_cast<std::uint64_t>(t));
        std::vector<double> d(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) d[v] = cfg.lambda * omega.values[tiling.block_of[v]];
        diags[static_cast<std::size_t>(t)] = std::move(d);
    });

    IntervalCountStats stats;
    stats.counts = count_in_interval_batch(tree.parent, diags, cfg.lo, cfg.hi,
                                           &stats.perturbations);
    std::vector<double> as_double(stats.counts.begin(), stats.counts.end());
    stats.mean = mean_of(as_double);
    stats.stderr_mean = stderr_of(as_double, stats.mean);
    return stats;
}

WegnerResult wegner_check(const CountExperimentConfig& cfg) {
    WegnerResult r;
    r.stats = sample_interval_counts(cfg);
    r.interval_len = cfg.hi - cfg.lo;
    r.volume = build_bethe_truncation(cfg.params).n_vertices;
    const double base = kPi * cfg.density.sup_norm() * r.volume * r.interval_len;
    r.bound = base / cfg.lambda;
    r.bound_raw = base;
    r.pass = r.stats.mean + 3.0 * r.stats.stderr_mean <= r.bound;
    return r;
}

MinamiResult minami_tail_check(const CountExperimentConfig& cfg) {
    MinamiResult r;
    r.stats = sample_interval_counts(cfg);
    r.interval_len = cfg.hi - cfg.lo;
    r.volume = build_bethe_truncation(cfg.params).n_vertices;
    r.block_rank = cfg.params.block_rank();

    const double m0r = static_cast<double>(r.block_rank);
    std::vector<double> excess(r.stats.counts.size());
    int max_count = 0;
    for (std::size_t t = 0; t < r.stats.counts.size(); ++t) {
        excess[t] = std::max(0.0, static_cast<double>(r.stats.counts[t]) - m0r);
        max_count = std::max(max_count, r.stats.counts[t]);
    }
    r.excess_mean = mean_of(excess);
    r.excess_stderr = stderr_of(excess, r.excess_mean);

    // tail_prob[j] = P[count > block_rank + j]; the excess mean is their sum.
    for (int m = static_cast<int>(r.block_rank); m <= max_count; ++m) {
        int hits = 0;
        for (int c : r.stats.counts)
            if (c > m) ++hits;
        r.tail_prob.push_back(static_cast<double>(hits) /
                              static_cast<double>(r.stats.counts.size()));
    }

    const double base = kPi * cfg.density.sup_norm() * r.volume * r.interval_len;
    r.bound = (base / cfg.lambda) * (base / cfg.lambda);
    r.bound_raw = base * base;
    r.vacuous = r.bound >= 1.0;
    r.pass = r.excess_mean - 3.0 * r.excess_stderr <= r.bound;
    return r;
}

namespace {

// Canopy side of the DOS formula: one representative vertex per boundary
// distance n <= n_max, weighted (K-1)/K * K^{-n}.
struct CanopyPipeline {
    TreeIndex tree;
    BlockTiling tiling;
    std::vector<int> reps;      // reps[n] has boundary distance n
    std::vector<double> weights;
    double weight_total = 0.0;
};

CanopyPipeline make_canopy_pipeline(const TreeParams& params, int depth, int n_max) {
    if (depth < n_max + params.m0)
        throw std::invalid_argument("canopy pipeline: depth too small for n_max");
    CanopyPipeline p;
    p.tree = build_canopy_truncation(params, depth);
    const bool aligned = depth % (params.m0 + 1) == params.m0 % (params.m0 + 1);
    p.tiling = block_tiling(p.tree, params.m0, aligned);
    p.reps.assign(static_cast<std::size_t>(n_max) + 1, -1);
    for (int v = 0; v < p.tree.n_vertices; ++v) {
        const int n = p.tree.depth[v];
        if (n <= n_max && p.reps[static_cast<std::size_t>(n)] < 0)
            p.reps[static_cast<std::size_t>(n)] = v;
    }
    for (int n = 0; n <= n_max; ++n) {
        if (p.reps[static_cast<std::size_t>(n)] < 0)
            throw std::logic_error("canopy pipeline: missing layer representative");
        const double w = (params.K - 1.0) / params.K * std::pow(params.K, -n);
        p.weights.push_back(w);
        p.weight_total += w;
    }
    return p;
}

// Weighted layer masses of each interval [edges[i], edges[i+1]) for one
// disorder realization; kpm_moments == 0 switches to a dense eigensolve.
std::vector<double> canopy_interval_masses(const CanopyPipeline& p, const TreeParams& params,
                                           const DensitySpec& density, double lambda,
                                           const std::vector<double>& edges, int kpm_moments,
                                           std::uint64_t seed, std::uint64_t trial) {
    const DisorderSample omega =
        sample_disorder(density, p.tiling.n_blocks(), seed, trial);
    HamiltonianSpec spec;
    spec.tree = &p.tree;
    spec.tiling = &p.tiling;
    spec.lambda = lambda;
    spec.disorder = &omega;
    const SparseSymmetricOperator H = assemble(spec);

    const int n_intervals = static_cast<int>(edges.size()) - 1;
    std::vector<double> out(static_cast<std::size_t>(n_intervals), 0.0);
    if (kpm_moments > 0) {
        ChebyshevLocalMeasures kpm(H, p.reps, kpm_moments);
        for (int i = 0; i < n_intervals; ++i) {
            double mass = 0.0;
            for (std::size_t j = 0; j < p.reps.size(); ++j)
                mass += p.weights[j] * kpm.interval_mass(static_cast<int>(j), edges[i],
                                                         edges[static_cast<std::size_t>(i) + 1]);
            out[static_cast<std::size_t>(i)] = mass;
        }
    } else {
        Eigen::MatrixXd dense = H.dense_materialize();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
        if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
        const auto& ev = solver.eigenvalues();
        const auto& U = solver.eigenvectors();
        for (int k = 0; k < H.n; ++k) {
            const auto it = std::upper_bound(edges.begin(), edges.end(), ev[k]);
            if (it == edges.begin() || it == edges.end()) continue;
            const int bin = static_cast<int>(it - edges.begin()) - 1;
            double mass = 0.0;
            for (std::size_t j = 0; j < p.reps.size(); ++j)
                mass += p.weights[j] * U(p.reps[j], k) * U(p.reps[j], k);
            out[static_cast<std::size_t>(bin)] += mass;
        }
    }
    (void)params;
    return out;
}

}  // namespace

void DosConfig::validate() const {
    params.validate();
    density.validate();
    if (bin_width <= 0) throw std::invalid_argument("dos: need bin_width > 0");
    if (bethe_trials < 1 || canopy_trials < 1) throw std::invalid_argument("dos: need trials >= 1");
    if (n_max < 0) throw std::invalid_argument("dos: need n_max >= 0");
    if (canopy_depth < n_max + params.m0)
        throw std::invalid_argument("dos: canopy_depth too small for n_max");
}

DosResult dos_compare(const DosConfig& cfg) {
    cfg.validate();
    DosResult r;
    r.bin_width = cfg.bin_width;

    // Common grid from the a-priori spectral enclosure of both operators.
    const double dlo = std::min(cfg.lambda * cfg.density.a, cfg.lambda * cfg.density.b);
    const double dhi = std::max(cfg.lambda * cfg.density.a, cfg.lambda * cfg.density.b);
    const double e_lo = std::min(0.0, dlo) - (cfg.params.K + 1);
    const double e_hi = std::max(0.0, dhi) + (cfg.params.K + 1);
    r.e_min = std::floor(e_lo / cfg.bin_width) * cfg.bin_width;
    r.n_bins = static_cast<int>(std::ceil((e_hi - r.e_min) / cfg.bin_width));
    std::vector<double> edges(static_cast<std::size_t>(r.n_bins) + 1);
    for (int i = 0; i <= r.n_bins; ++i) edges[static_cast<std::size_t>(i)] = r.e_min + i * cfg.bin_width;

    // Bethe side: normalized eigenvalue histograms.
    const TreeIndex btree = build_bethe_truncation(cfg.params);
    const BlockTiling btiling = block_tiling(btree, cfg.params.m0);
    const int n = btree.n_vertices;
    std::vector<std::vector<double>> bethe_slots(static_cast<std::size_t>(cfg.bethe_trials));
    parallel_for(cfg.bethe_trials, cfg.workers, [&](int t) {
        const DisorderSample omega = sample_disorder(cfg.density, btiling.n_blocks(), cfg.seed,
                                                     static_cast<std::uint64_t>(t));
        HamiltonianSpec spec;
        spec.tree = &btree;
        spec.tiling = &btiling;
        spec.lambda = cfg.lambda;
        spec.disorder = &omega;
        const std::vector<double> ev = eigenvalues(assemble(spec));
        std::vector<double> hist(static_cast<std::size_t>(r.n_bins), 0.0);
        for (double e : ev) {
            const int bin = static_cast<int>(std::floor((e - r.e_min) / cfg.bin_width));
            if (bin >= 0 && bin < r.n_bins)
                hist[static_cast<std::size_t>(bin)] += 1.0 / (n * cfg.bin_width);
        }
        bethe_slots[static_cast<std::size_t>(t)] = std::move(hist);
    });

    // Canopy side: layer-weighted local measures, independent seed stream.
    const CanopyPipeline pipeline = make_canopy_pipeline(cfg.params, cfg.canopy_depth, cfg.n_max);
    r.layer_weight_total = pipeline.weight_total;
    const std::uint64_t canopy_seed = derive_seed(cfg.seed, 0x63616e6f7079ULL);
    std::vector<std::vector<double>> canopy_slots(static_cast<std::size_t>(cfg.canopy_trials));
    parallel_for(cfg.canopy_trials, cfg.workers, [&](int t) {
        std::vector<double> masses =
            canopy_interval_masses(pipeline, cfg.params, cfg.density, cfg.lambda, edges,
                                   cfg.kpm_moments, canopy_seed, static_cast<std::uint64_t>(t));
        for (double& m : masses) m /= cfg.bin_width;
        canopy_slots[static_cast<std::size_t>(t)] = std::move(masses);
    });

    const auto reduce = [&](const std::vector<std::vector<double>>& slots,
                            std::vector<double>& mean_out, std::vector<double>& err_out) {
        mean_out.assign(static_cast<std::size_t>(r.n_bins), 0.0);
        err_out.assign(static_cast<std::size_t>(r.n_bins), 0.0);
        std::vector<double> column(slots.size());
        for (int i = 0; i < r.n_bins; ++i) {
            for (std::size_t t = 0; t < slots.size(); ++t) column[t] = slots[t][static_cast<std::size_t>(i)];
            mean_out[static_cast<std::size_t>(i)] = mean_of(column);
            err_out[static_cast<std::size_t>(i)] = stderr_of(column, mean_out[static_cast<std::size_t>(i)]);
        }
    };
    reduce(bethe_slots, r.bethe_density, r.bethe_stderr);
    reduce(canopy_slots, r.canopy_density, r.canopy_stderr);

    for (int i = 0; i < r.n_bins; ++i) {
        r.bethe_total += r.bethe_density[static_cast<std::size_t>(i)] * cfg.bin_width;
        r.canopy_total += r.canopy_density[static_cast<std::size_t>(i)] * cfg.bin_width;
        const double diff = std::abs(r.bethe_density[static_cast<std::size_t>(i)] -
                                     r.canopy_density[static_cast<std::size_t>(i)]);
        const double err = std::hypot(r.bethe_stderr[static_cast<std::size_t>(i)],
                                      r.canopy_stderr[static_cast<std::size_t>(i)]);
        // the 1e-6 floor absorbs deterministic expansion leakage in
        // zero-variance bins outside the spectrum
        if (diff <= 3.0 * err + 1e-6) ++r.bins_agree;
    }
    r.pass = r.bins_agree * 10 >= r.n_bins * 9;
    return r;
}

void DensityPointConfig::validate() const {
    params.validate();
    density.validate();
    if (!(half_width > 0)) throw std::invalid_argument("density point: need half_width > 0");
    if (trials < 1) throw std::invalid_argument("density point: need trials >= 1");
    if (n_max < 0) throw std::invalid_argument("density point: need n_max >= 0");
    if (canopy_depth < n_max + params.m0)
        throw std::invalid_argument("density point: canopy_depth too small for n_max");
}

DensityPointResult dos_density_at(const DensityPointConfig& cfg) {
    cfg.validate();
    const CanopyPipeline pipeline = make_canopy_pipeline(cfg.params, cfg.canopy_depth, cfg.n_max);
    const std::vector<double> edges = {cfg.energy - cfg.half_width, cfg.energy + cfg.half_width};
    std::vector<double> slots(static_cast<std::size_t>(cfg.trials), 0.0);
    parallel_for(cfg.trials, cfg.workers, [&](int t) {
        const std::vector<double> mass =
            canopy_interval_masses(pipeline, cfg.params, cfg.density, cfg.lambda, edges,
                                   cfg.kpm_moments, cfg.seed, static_cast<std::uint64_t>(t));
        slots[static_cast<std::size_t>(t)] = mass[0] / (2.0 * cfg.half_width);
    });
    DensityPointResult r;
    r.value = mean_of(slots);
    r.stderr_value = stderr_of(slots, r.value);
    return r;
}

}  // namespace andlab
