// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace andlab {

/// Bounded compactly supported single-site density rho.
struct DensitySpec {
    enum class Kind { Uniform, TruncatedGaussian };
    Kind kind = Kind::Uniform;
    double a = 0.0;  // support [a, b]
    double b = 1.0;
    double mean = 0.0;   // TruncatedGaussian only
    double sigma = 1.0;  // TruncatedGaussian only

    static DensitySpec uniform(double a, double b);
    static DensitySpec truncated_gaussian(double mean, double sigma, double a, double b);

    void validate() const;
    /// ||rho||_inf
    double sup_norm() const;
    /// Inverse-CDF map from u in [0,1) to a draw; keeps counter-based
    /// sampling order-independent.
    double quantile(double u) const;
    std::string name() const;
};

/// One i.i.d. coupling per block head, indexed by head ordinal.
struct DisorderSample {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
};

DisorderSample sample_disorder(const DensitySpec& density, int n_heads,
                               std::uint64_t seed, std::uint64_t trial);

/// Standard normal CDF and its inverse (used by the truncated Gaussian).
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace andlab
