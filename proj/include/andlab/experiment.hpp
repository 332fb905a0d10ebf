// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "andlab/disorder.hpp"
#include "andlab/tree.hpp"

namespace andlab {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// One experiment run: kind selects the pipeline, the remaining knobs are
/// interpreted per kind and ignored otherwise.  JSON parsing is
/// fail-closed: unknown keys are rejected with their field path.
struct ExperimentConfig {
    std::string kind = "geometry";  // geometry|oracle|wegner|minami|fracmom|dos|process
    TreeParams params{2, 1, 5};
    std::string tree = "bethe";  // geometry only: bethe|canopy
    DensitySpec density = DensitySpec::uniform(0.0, 1.0);
    double lambda = 1.0;

    double energy = 0.0;
    double lo = 0.0;  // interval ends: absolute for wegner/minami, rescaled for process
    double hi = 0.5;
    double s = 0.5;
    double epsilon = 1e-3;
    double alpha = 0.25;
    int trials = 1000;

    int n_max = 10;          // dos / process intensity oracle
    int canopy_depth = 13;
    int kpm_moments = 1024;  // 0 = dense canopy eigensolve
    int canopy_trials = 0;   // dos rhs trials; process: intensity-oracle trials (0 = skip)
    double bin_width = 0.25;
    double half_width = 0.5;  // density-at-a-point window for the process bound

    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = ".";

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
    void validate() const;
};

struct RunManifest {
    nlohmann::ordered_json config;
    std::string version;
    std::string started_at, finished_at;
    std::vector<std::pair<std::string, std::string>> file_digests;  // name -> fnv1a-64 hex
    bool pass = false;
};

/// Executes the configured experiment, writes `<kind>.csv`,
/// `<kind>_summary.json` and `manifest.json` into cfg.out_dir.
RunManifest run(const ExperimentConfig& cfg);

/// Reshapes the outputs of a completed run into long-format plot CSVs
/// (series, x, y, yerr); returns the files written.
std::vector<std::string> emit_plot_data(const std::string& run_dir);

/// Resolvent equivalence sweep used by the `oracle` kind: compares every
/// block Green matrix entry and every pairwise Green value against the
/// dense solver, and checks Herglotz positivity of the block matrices.
struct OracleSweepResult {
    double max_rel_err = 0.0;
    double min_herglotz_eig = 0.0;
    int n_samples = 0;
    bool pass = false;  // max_rel_err <= 1e-9 and min_herglotz_eig >= -1e-12
    // per (m0, L, sample): worst errors, for the CSV
    struct Row {
        int m0, L, sample;
        double rel_err, herglotz_min;
    };
    std::vector<Row> rows;
};

OracleSweepResult oracle_sweep(std::uint64_t seed, int samples_per_config = 25);

/// FNV-1a 64-bit digest of a file's bytes, hex-encoded.
std::string file_digest(const std::string& path);

}  // namespace andlab
