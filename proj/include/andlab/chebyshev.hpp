// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "andlab/hamiltonian.hpp"

namespace andlab {

/// Local spectral measures <delta_x, E(I) delta_x> for a set of sites of
/// one operator, via a Chebyshev moment expansion with Jackson damping.
/// Interval masses are exact integrals of the damped polynomial density:
/// with x = cos(theta), integral of T_m over [x1,x2] against the
/// Chebyshev weight is (sin(m*theta1) - sin(m*theta2)) / (m*pi).
///
/// The operator is rescaled into [-1,1] from Gershgorin bounds, so no
/// spectrum is clipped.  All site recurrences advance together through a
/// row-major block, one fused matvec per moment.
class ChebyshevLocalMeasures {
  public:
    ChebyshevLocalMeasures(const SparseSymmetricOperator& H, std::vector<int> sites,
                           int n_moments);

    /// <delta_site, E([lo,hi)) delta_site> for sites[site_index].
    double interval_mass(int site_index, double lo, double hi) const;

    int n_sites() const { return static_cast<int>(sites_.size()); }
    int n_moments() const { return static_cast<int>(jackson_.size()); }
    double center() const { return center_; }
    double halfwidth() const { return halfwidth_; }
    /// Damped moments for sites[site_index]; moments[0] == 1.
    const Eigen::MatrixXd& moments() const { return moments_; }

  private:
    std::vector<int> sites_;
    double center_ = 0.0;
    double halfwidth_ = 1.0;
    Eigen::MatrixXd moments_;       // n_moments x n_sites, undamped
    std::vector<double> jackson_;   // damping factors g_m
};

/// Gershgorin enclosure [min(diag - deg), max(diag + deg)] of the spectrum.
void gershgorin_bounds(const SparseSymmetricOperator& H, double* lo, double* hi);

}  // namespace andlab
