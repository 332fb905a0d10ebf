// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "andlab/disorder.hpp"
#include "andlab/tree.hpp"

namespace andlab {

struct HamiltonianSpec {
    const TreeIndex* tree = nullptr;
    const BlockTiling* tiling = nullptr;
    double lambda = 0.0;  // 0 is allowed (free operator)
    const DisorderSample* disorder = nullptr;  // may be null when lambda == 0

    void validate() const;
};

/// H = adjacency of the truncated tree plus the block-constant diagonal
/// lambda * omega_{block(x)}.  Tree edges carry coupling 1; the tree
/// structure is kept (parent array) so O(n) solves stay available.
struct SparseSymmetricOperator {
    int n = 0;
    std::vector<int> parent;  // -1 for the root; edge (parent[v], v) for v >= 1
    std::vector<double> diag;

    std::vector<std::complex<double>> apply(const std::vector<std::complex<double>>& psi) const;
    void apply(const double* x, double* y) const;  // real in-place-free matvec
    Eigen::MatrixXd dense_materialize(int cap = 5000) const;
    double trace() const;
    void write_coo(std::ostream& os) const;
};

SparseSymmetricOperator assemble(const HamiltonianSpec& spec);

}  // namespace andlab
