// SPDX-License-Identifier: Apache-2.0
#include "andlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "andlab/hamiltonian.hpp"
#include "andlab/point_process.hpp"
#include "andlab/resolvent.hpp"
#include "andlab/rng.hpp"
#include "andlab/spectral.hpp"

namespace andlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string timestamp_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& path) {
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw std::invalid_argument("config: unknown key '" + path + item.key() + "'");
}

DensitySpec density_from_json(const json& j) {
    reject_unknown_keys(j, {"kind", "a", "b", "mean", "sigma"}, "density.");
    const std::string kind = j.value("kind", "uniform");
    if (kind == "uniform") {
        return DensitySpec::uniform(j.value("a", 0.0), j.value("b", 1.0));
    }
    if (kind == "truncated_gaussian") {
        return DensitySpec::truncated_gaussian(j.value("mean", 0.0), j.value("sigma", 1.0),
                                               j.value("a", -1.0), j.value("b", 1.0));
    }
    throw std::invalid_argument("config: unknown key 'density.kind=" + kind + "'");
}

ordered_json density_to_json(const DensitySpec& d) {
    ordered_json j;
    if (d.kind == DensitySpec::Kind::Uniform) {
        j["kind"] = "uniform";
        j["a"] = d.a;
        j["b"] = d.b;
    } else {
        j["kind"] = "truncated_gaussian";
        j["mean"] = d.mean;
        j["sigma"] = d.sigma;
        j["a"] = d.a;
        j["b"] = d.b;
    }
    return j;
}

struct CsvWriter {
    std::ofstream os;
    explicit CsvWriter(const fs::path& p) : os(p) {
        if (!os) throw std::runtime_error("cannot open " + p.string());
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    }
};

void write_json_file(const fs::path& p, const ordered_json& j) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot open " + p.string());
    os << j.dump(2) << '\n';
}

}  // namespace

std::string file_digest(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char buf[4096];
    while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
        for (std::streamsize i = 0; i < is.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
        if (!is) break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    static const std::set<std::string> known = {
        "kind",        "K",          "m0",           "L",           "tree",
        "density",     "lambda",     "energy",       "lo",          "hi",
        "s",           "epsilon",    "alpha",        "trials",      "n_max",
        "canopy_depth", "kpm_moments", "canopy_trials", "bin_width", "half_width",
        "seed",        "workers",    "out_dir"};
    reject_unknown_keys(j, known, "");
    ExperimentConfig c;
    c.kind = j.value("kind", c.kind);
    c.params.K = j.value("K", c.params.K);
    c.params.m0 = j.value("m0", c.params.m0);
    c.params.L = j.value("L", c.params.L);
    c.tree = j.value("tree", c.tree);
    if (j.contains("density")) c.density = density_from_json(j.at("density"));
    c.lambda = j.value("lambda", c.lambda);
    c.energy = j.value("energy", c.energy);
    c.lo = j.value("lo", c.lo);
    c.hi = j.value("hi", c.hi);
    c.s = j.value("s", c.s);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.alpha = j.value("alpha", c.alpha);
    c.trials = j.value("trials", c.trials);
    c.n_max = j.value("n_max", c.n_max);
    c.canopy_depth = j.value("canopy_depth", c.canopy_depth);
    c.kpm_moments = j.value("kpm_moments", c.kpm_moments);
    c.canopy_trials = j.value("canopy_trials", c.canopy_trials);
    c.bin_width = j.value("bin_width", c.bin_width);
    c.half_width = j.value("half_width", c.half_width);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.validate();
    return c;
}

ordered_json ExperimentConfig::to_json() const {
    ordered_json j;
    j["kind"] = kind;
    j["K"] = params.K;
    j["m0"] = params.m0;
    j["L"] = params.L;
    j["tree"] = tree;
    j["density"] = density_to_json(density);
    j["lambda"] = lambda;
    j["energy"] = energy;
    j["lo"] = lo;
    j["hi"] = hi;
    j["s"] = s;
    j["epsilon"] = epsilon;
    j["alpha"] = alpha;
    j["trials"] = trials;
    j["n_max"] = n_max;
    j["canopy_depth"] = canopy_depth;
    j["kpm_moments"] = kpm_moments;
    j["canopy_trials"] = canopy_trials;
    j["bin_width"] = bin_width;
    j["half_width"] = half_width;
    j["seed"] = seed;
    // workers and out_dir are execution environment, not experiment
    // identity; leaving them out keeps output digests comparable across
    // worker counts and run directories.
    return j;
}

void ExperimentConfig::validate() const {
    static const std::set<std::string> kinds = {"geometry", "oracle",  "wegner", "minami",
                                               "fracmom",  "dos",     "process"};
    if (!kinds.count(kind)) throw std::invalid_argument("config: unknown kind '" + kind + "'");
    if (tree != "bethe" && tree != "canopy")
        throw std::invalid_argument("config: tree must be bethe or canopy");
    params.validate();
    density.validate();
    if (workers < 1) throw std::invalid_argument("config: need workers >= 1");
}

OracleSweepResult oracle_sweep(std::uint64_t seed, int samples_per_config) {
    OracleSweepResult res;
    res.min_herglotz_eig = 1e300;
    const DensitySpec density = DensitySpec::uniform(0.0, 1.0);
    const double lambda = 2.5;
    for (int m0 : {0, 1}) {
        for (int L : {2, 3}) {
            const TreeParams params{2, m0, L};
            const TreeIndex tree = build_bethe_truncation(params);
            const BlockTiling tiling = block_tiling(tree, m0, false);
            const int n = tree.n_vertices;
            const std::uint64_t cfg_seed =
                derive_seed(seed, (static_cast<std::uint64_t>(m0) << 8) | static_cast<std::uint64_t>(L));
            const std::uint64_t z_seed = derive_seed(cfg_seed, 0x7aULL);
            for (int sample = 0; sample < samples_per_config; ++sample) {
                const DisorderSample omega =
                    sample_disorder(density, tiling.n_blocks(), cfg_seed,
                                    static_cast<std::uint64_t>(sample));
                HamiltonianSpec spec;
                spec.tree = &tree;
                spec.tiling = &tiling;
                spec.lambda = lambda;
                spec.disorder = &omega;
                const SparseSymmetricOperator H = assemble(spec);
                const double u1 = uniform01(z_seed, static_cast<std::uint64_t>(sample), 0);
                const double u2 = uniform01(z_seed, static_cast<std::uint64_t>(sample), 1);
                const SpectralParameter z(
                    Complex(-3.0 + 6.0 * u1, 1e-3 + (1.0 - 1e-3) * u2));

                Eigen::MatrixXcd A = H.dense_materialize().cast<Complex>();
                A.diagonal().array() -= z.z;
                const Eigen::MatrixXcd G = A.inverse();

                const SchurResolvent R(H, tree, tiling, z);
                double worst = 0.0;
                double herg = 1e300;
                for (int bidx = 0; bidx < tiling.n_blocks(); ++bidx) {
                    const Eigen::MatrixXcd M = R.block_green(bidx);
                    const auto& mem = tiling.members[static_cast<std::size_t>(bidx)];
                    for (std::size_t i = 0; i < mem.size(); ++i)
                        for (std::size_t jj = 0; jj < mem.size(); ++jj) {
                            const Complex exact = G(mem[i], mem[jj]);
                            const double rel =
                                std::abs(M(static_cast<long>(i), static_cast<long>(jj)) - exact) /
                                std::max(std::abs(exact), 1e-100);
                            worst = std::max(worst, rel);
                        }
                    const Eigen::MatrixXcd im =
                        (M - M.adjoint()) / Complex(0.0, 2.0);
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(im, Eigen::EigenvaluesOnly);
                    herg = std::min(herg, es.eigenvalues().minCoeff());
                }
                for (int x = 0; x < n; ++x)
                    for (int y = 0; y < n; ++y) {
                        const Complex exact = G(x, y);
                        const double rel = std::abs(R.green(x, y) - exact) /
                                           std::max(std::abs(exact), 1e-100);
                        worst = std::max(worst, rel);
                    }
                res.rows.push_back({m0, L, sample, worst, herg});
                res.max_rel_err = std::max(res.max_rel_err, worst);
                res.min_herglotz_eig = std::min(res.min_herglotz_eig, herg);
                ++res.n_samples;
            }
        }
    }
    res.pass = res.max_rel_err <= 1e-9 && res.min_herglotz_eig >= -1e-12;
    return res;
}

namespace {

bool run_geometry(const ExperimentConfig& cfg, const fs::path& dir, ordered_json& summary) {
    const TreeIndex tree = cfg.tree == "bethe"
                               ? build_bethe_truncation(cfg.params)
                               : build_canopy_truncation(cfg.params, cfg.canopy_depth);
    const bool aligned =
        cfg.tree == "bethe"
            ? cfg.params.strict_bethe_depth()
            : cfg.canopy_depth % (cfg.params.m0 + 1) == cfg.params.m0 % (cfg.params.m0 + 1);
    const BlockTiling tiling = block_tiling(tree, cfg.params.m0, aligned);
    CsvWriter csv(dir / "geometry.csv");
    csv.row({"vertex", "parent", "depth", "block"});
    for (int v = 0; v < tree.n_vertices; ++v)
        csv.row({std::to_string(v), std::to_string(tree.parent[v]), std::to_string(tree.depth[v]),
                 std::to_string(tiling.block_of[v])});
    summary = geometry_json(tree, &tiling);
    return true;
}

bool run_oracle(const ExperimentConfig& cfg, const fs::path& dir, ordered_json& summary) {
    const int per_config = std::max(1, cfg.trials / 4);
    const OracleSweepResult res = oracle_sweep(cfg.seed, per_config);
    CsvWriter csv(dir / "oracle.csv");
    csv.row({"m0", "L", "sample", "max_rel_err", "min_herglotz_eig"});
    for (const auto& r : res.rows)
        csv.row({std::to_string(r.m0), std::to_string(r.L), std::to_string(r.sample),
                 fmt(r.rel_err), fmt(r.herglotz_min)});
    summary["n_samples"] = res.n_samples;
    summary["max_rel_err"] = res.max_rel_err;
    summary["min_herglotz_eig"] = res.min_herglotz_eig;
    summary["pass"] = res.pass;
    return res.pass;
}

CountExperimentConfig to_count_config(const ExperimentConfig& cfg) {
    CountExperimentConfig c;
    c.params = cfg.params;
    c.density = cfg.density;
    c.lambda = cfg.lambda;
    c.lo = cfg.lo;
    c.hi = cfg.hi;
    c.trials = cfg.trials;
    c.seed = cfg.seed;
    c.workers = cfg.workers;
    return c;
}

bool run_wegner(const ExperimentConfig& cfg, const fs::path& dir, ordered_json& summary) {
    const WegnerResult r = wegner_check(to_count_config(cfg));
    CsvWriter csv(dir / "wegner.csv");
    csv.row({"trial", "count"});
    for (std::size_t t = 0; t < r.stats.counts.size(); ++t)
        csv.row({std::to_string(t), std::to_string(r.stats.counts[t])});
    summary["mean"] = r.stats.mean;
    summary["stderr"] = r.stats.stderr_mean;
    summary["interval_len"] = r.interval_len;
    summary["volume"] = r.volume;
    summary["bound_effective_density"] = r.bound;
    summary["bound_raw_density"] = r.bound_raw;
    summary["perturbations"] = r.stats.perturbations;
    summary["pass"] = r.pass;
    return r.pass;
}

bool run_minami(const ExperimentConfig& cfg, const fs::path& dir, ordered_json& summary) {
    const MinamiResult r = minami_tail_check(to_count_config(cfg));
    CsvWriter csv(dir / "minami.csv");
    csv.row({"m", "tail_prob"});
    for (std::size_t i = 0; i < r.tail_prob.size(); ++i)
        csv.row({std::to_string(static_cast<long long>(r.block_rank) + static_cast<long long>(i)),
                 fmt(r.tail_prob[i])});
    summary["block_rank"] = r.block_rank;
    summary["excess_mean"] = r.excess_mean;
    summary["excess_stderr"] = r.excess_stderr;
    summary["bound_effective_density"] = r.bound;
    summary["bound_raw_density"] = r.bound_raw;
    summary["vacuous"] = r.vacuous;
    summary["perturbations"] = r.stats.perturbations;
    summary["pass"] = r.pass;
    return r.pass;
}

bool run_fracmom(const ExperimentConfig& cfg, const fs::path& dir, ordered_json& summary) {
    FracMomentConfig c;
    c.params = cfg.params;
    c.density = cfg.density;
    c.s = cfg.s;
    c.energy = cfg.energy;
    c.epsilon = cfg.epsilon;
    c.lambda = cfg.lambda;
    c.trials = cfg.trials;
    c.seed = cfg.seed;
    c.workers = cfg.workers;
    const FracMomentEstimate est = fractional_moment_estimate(c);
    CsvWriter csv(dir / "fracmom.csv");
    csv.row({"distance", "mean_moment", "stderr", "n_samples"});
    for (std::size_t i = 0; i < est.distances.size(); ++i)
        csv.row({std::to_string(est.distances[i]), fmt(est.mean_moment[i]),
                 fmt(est.stderr_moment[i]), std::to_string(est.n_samples[i])});
    summary["s"] = est.s;
    summary["energy"] = est.energy;
    summary["epsilon"] = est.epsilon;
    summary["lambda"] = est.lambda;
    summary["gamma_hat"] = est.gamma_hat;
    summary["gamma_stderr"] = est.gamma_stderr;
    summary["intercept"] = est.intercept;
    const bool pass = est.gamma_hat > 0.0;
    summary["pass"] = pass;
    return pass;
}

bool run_dos(const ExperimentConfig& cfg, const fs::path& dir, ordered_json& summary) {
    DosConfig c;
    c.params = cfg.params;
    c.canopy_depth = cfg.canopy_depth;
    c.n_max = cfg.n_max;
    c.density = cfg.density;
    c.lambda = cfg.lambda;
    c.bin_width = cfg.bin_width;
    c.bethe_trials = cfg.trials;
    c.canopy_trials = cfg.canopy_trials > 0 ? cfg.canopy_trials : cfg.trials;
    c.kpm_moments = cfg.kpm_moments;
    c.seed = cfg.seed;
    c.workers = cfg.workers;
    const DosResult r = dos_compare(c);
    CsvWriter csv(dir / "dos.csv");
    csv.row({"bin_center", "lhs", "lhs_err", "rhs", "rhs_err"});
    for (int i = 0; i < r.n_bins; ++i)
        csv.row({fmt(r.bin_center(i)), fmt(r.bethe_density[static_cast<std::size_t>(i)]),
                 fmt(r.bethe_stderr[static_cast<std::size_t>(i)]),
                 fmt(r.canopy_density[static_cast<std::size_t>(i)]),
                 fmt(r.canopy_stderr[static_cast<std::size_t>(i)])});
    summary["n_bins"] = r.n_bins;
    summary["bins_agree"] = r.bins_agree;
    summary["bethe_total"] = r.bethe_total;
    summary["canopy_total"] = r.canopy_total;
    summary["layer_weight_total"] = r.layer_weight_total;
    summary["pass"] = r.pass;
    return r.pass;
}

bool run_point_process(const ExperimentConfig& cfg, const fs::path& dir, ordered_json& summary) {
    ProcessConfig c;
    c.params = cfg.params;
    c.density = cfg.density;
    c.lambda = cfg.lambda;
    c.energy = cfg.energy;
    c.lo = cfg.lo;
    c.hi = cfg.hi;
    c.alpha = cfg.alpha;
    c.trials = cfg.trials;
    c.seed = cfg.seed;
    c.workers = cfg.workers;
    const ProcessSamples samples = sample_eta(c);
    const AtomEstimate atoms = estimate_atoms(samples, 200, cfg.seed);

    double mean_intensity = 0.0;
    if (cfg.canopy_trials > 0) {
        DensityPointConfig dc;
        dc.params = cfg.params;
        dc.canopy_depth = cfg.canopy_depth;
        dc.n_max = cfg.n_max;
        dc.density = cfg.density;
        dc.lambda = cfg.lambda;
        dc.energy = cfg.energy;
        dc.half_width = cfg.half_width;
        dc.trials = cfg.canopy_trials;
        dc.kpm_moments = cfg.kpm_moments;
        dc.seed = derive_seed(cfg.seed, 0x6e686174ULL);
        dc.workers = cfg.workers;
        const DensityPointResult nhat = dos_density_at(dc);
        mean_intensity = cfg.params.K * nhat.value * (cfg.hi - cfg.lo);
        summary["nhat"] = nhat.value;
        summary["nhat_stderr"] = nhat.stderr_value;
    }
    const CompoundPoissonFit fit = fit_and_test(samples, atoms, mean_intensity);

    CsvWriter csv(dir / "process.csv");
    std::vector<std::string> header = {"trial", "mu_count"};
    for (std::size_t r = 0; r < samples.subtree_roots.size(); ++r)
        header.push_back("eta_" + std::to_string(samples.subtree_roots[r]));
    csv.row(header);
    for (const auto& s : samples.samples) {
        std::vector<std::string> cells = {std::to_string(s.trial), std::to_string(s.mu_count)};
        for (int e : s.eta_counts) cells.push_back(std::to_string(e));
        csv.row(cells);
    }

    summary["volume"] = samples.volume;
    summary["split_depth"] = samples.split_depth;
    summary["block_rank"] = samples.block_rank;
    summary["mu_mean"] = fit.mu_mean;
    summary["mu_stderr"] = fit.mu_stderr;
    summary["decomposition_defect"] = samples.decomposition_defect();
    summary["atoms"] = fit.atoms;
    summary["atom_stderr"] = fit.atom_se;
    summary["overflow_mass"] = fit.overflow;
    summary["overflow_stderr"] = fit.overflow_se;
    summary["fitted_mean"] = fit.fitted_mean;
    summary["tv_distance"] = fit.tv_distance;
    summary["cf_distance"] = fit.cf_distance;
    summary["fitted_pmf"] = fit.fitted_pmf;
    summary["empirical_pmf"] = fit.empirical_pmf;
    summary["mean_intensity"] = fit.mean_intensity;
    summary["atom_bound"] = fit.atom_bound;
    summary["atoms_within_bound"] = fit.atoms_within_bound;
    summary["perturbations"] = samples.perturbations;
    try {
        const DispersionResult disp = dispersion_index(samples, 400, cfg.seed);
        summary["dispersion_index"] = disp.index;
        summary["dispersion_ci"] = {disp.ci_lo, disp.ci_hi};
    } catch (const std::invalid_argument&) {
        summary["dispersion_index"] = nullptr;  // zero-mean counts
    }
    const bool pass = fit.tv_distance <= 0.05 && fit.atoms_within_bound;
    summary["pass"] = pass;
    return pass;
}

}  // namespace

RunManifest run(const ExperimentConfig& cfg) {
    cfg.validate();
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);

    RunManifest manifest;
    manifest.config = cfg.to_json();
    manifest.version = kArtifactVersion;
    manifest.started_at = timestamp_utc();

    ordered_json summary;
    summary["kind"] = cfg.kind;
    summary["config"] = cfg.to_json();
    ordered_json result = ordered_json::object();
    bool pass = false;
    if (cfg.kind == "geometry")
        pass = run_geometry(cfg, dir, result);
    else if (cfg.kind == "oracle")
        pass = run_oracle(cfg, dir, result);
    else if (cfg.kind == "wegner")
        pass = run_wegner(cfg, dir, result);
    else if (cfg.kind == "minami")
        pass = run_minami(cfg, dir, result);
    else if (cfg.kind == "fracmom")
        pass = run_fracmom(cfg, dir, result);
    else if (cfg.kind == "dos")
        pass = run_dos(cfg, dir, result);
    else if (cfg.kind == "process")
        pass = run_point_process(cfg, dir, result);
    summary["result"] = result;
    summary["pass"] = pass;
    write_json_file(dir / (cfg.kind + "_summary.json"), summary);

    manifest.finished_at = timestamp_utc();
    manifest.pass = pass;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name == "manifest.json" || name.rfind("plot_", 0) == 0) continue;
        manifest.file_digests.emplace_back(name, file_digest(entry.path().string()));
    }
    std::sort(manifest.file_digests.begin(), manifest.file_digests.end());

    ordered_json mj;
    mj["version"] = manifest.version;
    mj["config"] = manifest.config;
    mj["started_at"] = manifest.started_at;
    mj["finished_at"] = manifest.finished_at;
    mj["pass"] = manifest.pass;
    ordered_json digests = ordered_json::object();
    for (const auto& [name, digest] : manifest.file_digests) digests[name] = digest;
    mj["file_digests"] = digests;
    write_json_file(dir / "manifest.json", mj);
    return manifest;
}

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream is(p);
    if (!is) throw std::runtime_error("missing input " + p.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

std::vector<std::string> emit_plot_data(const std::string& run_dir) {
    const fs::path dir(run_dir);
    std::ifstream mis(dir / "manifest.json");
    if (!mis) throw std::runtime_error("missing manifest in " + run_dir);
    json manifest;
    mis >> manifest;
    const std::string kind = manifest.at("config").at("kind").get<std::string>();

    std::vector<std::string> written;
    const auto emit = [&](const std::string& name,
                          const std::vector<std::vector<std::string>>& rows) {
        CsvWriter csv(dir / name);
        csv.row({"series", "x", "y", "yerr"});
        for (const auto& r : rows) csv.row(r);
        written.push_back((dir / name).string());
    };

    if (kind == "fracmom") {
        const auto rows = read_csv(dir / "fracmom.csv");
        std::vector<std::vector<std::string>> out;
        for (std::size_t i = 1; i < rows.size(); ++i)
            out.push_back({"fractional_moment", rows[i][0], rows[i][1], rows[i][2]});
        emit("plot_decay.csv", out);
    } else if (kind == "dos") {
        const auto rows = read_csv(dir / "dos.csv");
        std::vector<std::vector<std::string>> out;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            out.push_back({"lhs", rows[i][0], rows[i][1], rows[i][2]});
            out.push_back({"rhs", rows[i][0], rows[i][3], rows[i][4]});
        }
        emit("plot_dos_overlay.csv", out);
    } else if (kind == "process") {
        std::ifstream sis(dir / "process_summary.json");
        if (!sis) throw std::runtime_error("missing process_summary.json in " + run_dir);
        json summary;
        sis >> summary;
        const auto fitted = summary.at("result").at("fitted_pmf").get<std::vector<double>>();
        const auto empirical = summary.at("result").at("empirical_pmf").get<std::vector<double>>();
        std::vector<std::vector<std::string>> out;
        for (std::size_t k = 0; k < empirical.size(); ++k)
            out.push_back({"empirical", std::to_string(k), fmt(empirical[k]), "0"});
        for (std::size_t k = 0; k < fitted.size(); ++k)
            out.push_back({"fitted", std::to_string(k), fmt(fitted[k]), "0"});
        emit("plot_count_pmf.csv", out);
    } else {
        throw std::runtime_error("emit-plots: no figure mapping for kind '" + kind + "'");
    }
    return written;
}

}  // namespace andlab
