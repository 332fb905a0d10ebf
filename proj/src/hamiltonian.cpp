// SPDX-License-Identifier: Apache-2.0
#include "andlab/hamiltonian.hpp"

#include <ostream>
#include <stdexcept>

namespace andlab {

void HamiltonianSpec::validate() const {
    if (!tree || !tiling) throw std::invalid_argument("HamiltonianSpec: tree and tiling required");
    if (lambda < 0) throw std::invalid_argument("HamiltonianSpec: lambda must be >= 0");
    if (static_cast<int>(tiling->block_of.size()) != tree->n_vertices)
        throw std::invalid_argument("HamiltonianSpec: tiling does not match tree");
    if (lambda > 0) {
        if (!disorder) throw std::invalid_argument("HamiltonianSpec: disorder required for lambda > 0");
        if (static_cast<int>(disorder->values.size()) != tiling->n_blocks())
            throw std::invalid_argument("HamiltonianSpec: disorder does not match tiling");
    }
}

SparseSymmetricOperator assemble(const HamiltonianSpec& spec) {
    spec.validate();
    SparseSymmetricOperator H;
    H.n = spec.tree->n_vertices;
    H.parent = spec.tree->parent;
    H.diag.assign(static_cast<std::size_t>(H.n), 0.0);
    if (spec.lambda > 0) {
        for (int v = 0; v < H.n; ++v)
            H.diag[static_cast<std::size_t>(v)] =
                spec.lambda *
                spec.disorder->values[static_cast<std::size_t>(
                    spec.tiling->block_of[static_cast<std::size_t>(v)])];
    }
    return H;
}

std::vector<std::complex<double>> SparseSymmetricOperator::apply(
    const std::vector<std::complex<double>>& psi) const {
    if (static_cast<int>(psi.size()) != n)
        throw std::invalid_argument("apply: dimension mismatch");
    std::vector<std::complex<double>> y(psi.size());
    for (int v = 0; v < n; ++v) y[static_cast<std::size_t>(v)] = diag[static_cast<std::size_t>(v)] * psi[static_cast<std::size_t>(v)];
    for (int v = 1; v < n; ++v) {
        const int p = parent[static_cast<std::size_t>(v)];
        y[static_cast<std::size_t>(v)] += psi[static_cast<std::size_t>(p)];
        y[static_cast<std::size_t>(p)] += psi[static_cast<std::size_t>(v)];
    }
    return y;
}

void SparseSymmetricOperator::apply(const double* x, double* y) const {
    for (int v = 0; v < n; ++v) y[v] = diag[static_cast<std::size_t>(v)] * x[v];
    for (int v = 1; v < n; ++v) {
        const int p = parent[static_cast<std::size_t>(v)];
        y[v] += x[p];
        y[p] += x[v];
    }
}

Eigen::MatrixXd SparseSymmetricOperator::dense_materialize(int cap) const {
    if (n > cap) throw std::invalid_argument("dense_materialize: dimension exceeds cap");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int v = 0; v < n; ++v) A(v, v) = diag[static_cast<std::size_t>(v)];
    for (int v = 1; v < n; ++v) {
        const int p = parent[static_cast<std::size_t>(v)];
        A(v, p) = 1.0;
        A(p, v) = 1.0;
    }
    return A;
}

double SparseSymmetricOperator::trace() const {
    double t = 0;
    for (double d : diag) t += d;
    return t;
}

void SparseSymmetricOperator::write_coo(std::ostream& os) const {
    os << "# row col value\n";
    char buf[64];
    for (int v = 0; v < n; ++v) {
        if (diag[static_cast<std::size_t>(v)] != 0.0) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", v, v, diag[static_cast<std::size_t>(v)]);
            os << buf;
        }
    }
    for (int v = 1; v < n; ++v) {
        const int p = parent[static_cast<std::size_t>(v)];
        os << p << ' ' << v << " 1\n" << v << ' ' << p << " 1\n";
    }
}

}  // namespace andlab
