// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "andlab/hamiltonian.hpp"

namespace andlab::kernels {

// LDLT pivot recursion on a tree in reverse level order:
//   d[v] = diag[v] - shift - sum_{children c} 1 / d[c]
// The number of negative pivots equals the number of eigenvalues < shift
// (Sylvester inertia).  `lanes` below run 4 independent diagonal sets
// against the same tree, which is the data-parallel inner loop of the
// Monte Carlo counting experiments.

struct NegcountResult {
    int count = 0;
    bool breakdown = false;  // a pivot hit exactly zero or overflowed
};

/// Scalar reference kernel.  diag is indexed per vertex.
NegcountResult negcount_scalar(const int* parent, const double* diag, int n, double shift);

/// Batched kernel: diag4 is lane-interleaved, diag4[4*v + lane].
/// Dispatches to the AVX2 variant when the CPU supports it.
void negcount_batch4(const int* parent, const double* diag4, int n, const double shift4[4],
                     NegcountResult out[4]);

/// Same contract as negcount_batch4, always the scalar path (testing hook).
void negcount_batch4_scalar(const int* parent, const double* diag4, int n, const double shift4[4],
                            NegcountResult out[4]);

#if defined(__x86_64__)
void negcount_batch4_avx2(const int* parent, const double* diag4, int n, const double shift4[4],
                          NegcountResult out[4]);
#endif

/// Name of the batch backend selected at runtime ("avx2" or "scalar").
const char* active_backend();

/// Force the scalar backend (equivalence tests); pass false to restore
/// runtime detection.
void force_scalar_backend(bool on);

}  // namespace andlab::kernels

namespace andlab {

/// Number of eigenvalues of H in [a, b), exact integer via two inertia
/// counts.  Breakdowns retry with the shift perturbed by 1e-12*(1+|shift|);
/// `perturbations`, when given, is incremented per retry.
int count_in_interval(const SparseSymmetricOperator& H, double a, double b,
                      int* perturbations = nullptr);

/// Batched interval counts for many diagonal realizations over one tree.
/// diags[t] is the per-vertex diagonal of trial t.
std::vector<int> count_in_interval_batch(const std::vector<int>& parent,
                                         const std::vector<std::vector<double>>& diags,
                                         double a, double b, int* perturbations = nullptr);

}  // namespace andlab
