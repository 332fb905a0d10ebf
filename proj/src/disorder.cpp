// SPDX-License-Identifier: Apache-2.0
#include "andlab/disorder.hpp"

#include <cmath>
#include <stdexcept>

#include "andlab/rng.hpp"

namespace andlab {

DensitySpec DensitySpec::uniform(double a, double b) {
    DensitySpec d;
    d.kind = Kind::Uniform;
    d.a = a;
    d.b = b;
    d.validate();
    return d;
}

DensitySpec DensitySpec::truncated_gaussian(double mean, double sigma, double a, double b) {
    DensitySpec d;
    d.kind = Kind::TruncatedGaussian;
    d.mean = mean;
    d.sigma = sigma;
    d.a = a;
    d.b = b;
    d.validate();
    return d;
}

void DensitySpec::validate() const {
    if (!(a < b)) throw std::invalid_argument("density: support must satisfy a < b");
    if (kind == Kind::TruncatedGaussian && !(sigma > 0))
        throw std::invalid_argument("density: sigma must be > 0");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Acklam's rational approximation with one Halley refinement step;
// relative error well below 1e-12 after refinement.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= phigh) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    // Halley step on F(x) - p = 0
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
    x = x - u / (1 + x * u / 2);
    return x;
}

double DensitySpec::sup_norm() const {
    validate();
    switch (kind) {
        case Kind::Uniform:
            return 1.0 / (b - a);
        case Kind::TruncatedGaussian: {
            const double za = (a - mean) / sigma, zb = (b - mean) / sigma;
            const double Z = normal_cdf(zb) - normal_cdf(za);
            // mode of the restricted Gaussian: mean clamped to [a,b]
            const double xm = std::fmin(std::fmax(mean, a), b);
            const double zm = (xm - mean) / sigma;
            const double phi = std::exp(-zm * zm / 2) / (sigma * std::sqrt(2 * M_PI));
            return phi / Z;
        }
    }
    throw std::logic_error("unreachable");
}

double DensitySpec::quantile(double u) const {
    switch (kind) {
        case Kind::Uniform:
            return a + (b - a) * u;
        case Kind::TruncatedGaussian: {
            const double Fa = normal_cdf((a - mean) / sigma);
            const double Fb = normal_cdf((b - mean) / sigma);
            double p = Fa + u * (Fb - Fa);
            // clamp away from 0/1 so the inverse stays finite
            p = std::fmin(std::fmax(p, 1e-300), 1.0 - 1e-16);
            double x = mean + sigma * normal_quantile(p);
            return std::fmin(std::fmax(x, a), b);
        }
    }
    throw std::logic_error("unreachable");
}

std::string DensitySpec::name() const {
    return kind == Kind::Uniform ? "uniform" : "truncated_gaussian";
}

DisorderSample sample_disorder(const DensitySpec& density, int n_heads,
                               std::uint64_t seed, std::uint64_t trial) {
    density.validate();
    if (n_heads <= 0) throw std::invalid_argument("sample_disorder: need at least one head");
    DisorderSample s;
    s.seed = seed;
    s.trial = trial;
    s.values.resize(static_cast<std::size_t>(n_heads));
    for (int i = 0; i < n_heads; ++i)
        s.values[static_cast<std::size_t>(i)] =
            density.quantile(uniform01(seed, trial, static_cast<std::uint64_t>(i)));
    return s;
}

}  // namespace andlab
