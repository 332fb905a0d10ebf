// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "andlab/disorder.hpp"
#include "andlab/hamiltonian.hpp"
#include "andlab/tree.hpp"

namespace andlab {

using Complex = std::complex<double>;

/// Spectral parameter z = E + i*eps with Im z > 0.
struct SpectralParameter {
    Complex z;
    explicit SpectralParameter(Complex z_) : z(z_) {
        if (!(z.imag() > 0)) throw std::invalid_argument("spectral parameter needs Im z > 0");
    }
};

/// Direct-solve oracle: (H - z) u = delta_y, returns u[x].
Complex green_dense_oracle(const SparseSymmetricOperator& H, SpectralParameter z, int x, int y,
                           int cap = 5000);

/// Resolvent of one disorder realization through the recursive block
/// Schur decomposition.  A bottom-up pass produces, for every non-root
/// block head c, the diagonal Green value of the forward sub-tree
/// detached at c; a top-down pass produces the complementary value seen
/// from the root side.  Block Green matrices and arbitrary entries
/// G(x,y;z) are then products of per-block inverses.
class SchurResolvent {
  public:
    SchurResolvent(const SparseSymmetricOperator& H, const TreeIndex& tree,
                   const BlockTiling& tiling, SpectralParameter z);

    /// P_p (H - z)^{-1} P_p over the members of block b (full environment).
    Eigen::MatrixXcd block_green(int block_index) const;

    /// G(x, y; z) for any vertex pair.
    Complex green(int x, int y) const;

    /// Diagonal Green value of the detached forward sub-tree rooted at
    /// head c (c must not be the root block head).
    Complex forward_value(int block_index) const;

    const BlockTiling& tiling() const { return *tiling_; }
    Complex z() const { return z_; }

  private:
    const SparseSymmetricOperator* H_;
    const TreeIndex* tree_;
    const BlockTiling* tiling_;
    Complex z_;
    std::vector<int> local_index_;            // per-vertex index within its block
    std::vector<Eigen::MatrixXcd> fwd_inv_;   // per-block forward-environment inverse
    std::vector<Complex> g_;                  // forward diag Green at head, per block
    std::vector<Complex> u_;                  // root-side diag Green at parent(head), per block

    // Block matrix [P dP + (lambda w - z) I - D] restricted to block b.
    // `excluded` is a vertex outside the block whose attached component
    // has been decoupled (-1 for none); `with_backward` includes the
    // root-side coupling term u.
    Eigen::MatrixXcd block_matrix(int b, int excluded, bool with_backward) const;
};

/// Boundary Green values of all detached forward sub-trees, keyed by the
/// sub-tree root vertex (the non-root block heads).
std::map<int, Complex> subtree_boundary_green(const SparseSymmetricOperator& H,
                                              const TreeIndex& tree, const BlockTiling& tiling,
                                              SpectralParameter z);

/// Convenience wrappers over a freshly built SchurResolvent.
Eigen::MatrixXcd block_schur_green(const SparseSymmetricOperator& H, const TreeIndex& tree,
                                   const BlockTiling& tiling, SpectralParameter z, int head_vertex);
Complex path_green_product(const SparseSymmetricOperator& H, const TreeIndex& tree,
                           const BlockTiling& tiling, SpectralParameter z, int x, int y);

/// Monte Carlo fractional moments E|G(x,y)|^s grouped by dist(x,y), with
/// a weighted log-linear decay fit.
struct FracMomentEstimate {
    double s = 0.5;
    double energy = 0.0;
    double epsilon = 1e-3;
    double lambda = 0.0;
    std::vector<int> distances;
    std::vector<double> mean_moment;
    std::vector<double> stderr_moment;
    std::vector<int> n_samples;
    double gamma_hat = 0.0;     // decay rate (positive = decay)
    double gamma_stderr = 0.0;  // bootstrap standard error
    double intercept = 0.0;     // log C
};

struct FracMomentConfig {
    TreeParams params;
    DensitySpec density;
    double s = 0.5;
    double energy = 0.0;
    double epsilon = 1e-3;
    double lambda = 1.0;
    int trials = 1000;
    std::uint64_t seed = 1;
    int workers = 1;
    int bootstrap = 200;
};

FracMomentEstimate fractional_moment_estimate(const FracMomentConfig& cfg);

}  // namespace andlab
