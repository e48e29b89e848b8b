// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#ifndef FXC_PCA_HPP
#define FXC_PCA_HPP

#include <vector>

namespace fxc {

/**
 * @brief Per-region PCA basis.
 *
 * mean has length n; components holds k orthonormal rows of length n with
 * the sign convention that each row's first nonzero coordinate is
 * positive; eigenvalues are descending, clamped to be non-negative, and
 * use the 1/M covariance normalization (eigenvalue == variance captured).
 */
struct PcaModel {
    int n = 0;
    int k = 0;
    std::vector<double> mean;
    std::vector<std::vector<double>> components;
    std::vector<double> eigenvalues;
};

struct EigenResult {
    std::vector<double> eigenvalues;               // descending
    std::vector<std::vector<double>> eigenvectors; // [i] pairs with eigenvalues[i]
};

/**
 * @brief Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
 *
 * The input must be symmetric within 1e-9 per entry. Sweeps run until
 * every off-diagonal magnitude drops below 1e-10; more than 100 sweeps is
 * reported as non-convergence. Eigenvectors come back orthonormal, sign
 * normalized (first nonzero coordinate positive), sorted by eigenvalue
 * descending with a stable tie order.
 */
EigenResult sym_eigen(const std::vector<std::vector<double>>& matrix);

enum class PcaMethod {
    Auto,             // Gram when M < N, direct covariance otherwise
    DirectCovariance, // eigendecompose the N x N covariance (1/M) A A^T
    Gram,             // eigendecompose the M x M Gram matrix (1/M) A^T A
};

/**
 * @brief Fit a PCA basis on M samples of dimension N.
 *
 * Requires M >= 2 and 1 <= k <= min(N, M-1). The Gram route maps the
 * M-space eigenvectors back through the centered sample matrix and
 * re-orthonormalizes; directions whose eigenvalue collapses to zero
 * (< 1e-12 of the leading one) keep a zero eigenvalue and receive a
 * deterministic orthonormal completion vector.
 */
PcaModel pca_fit(const std::vector<std::vector<double>>& samples, int k,
                 PcaMethod method = PcaMethod::Auto);

/// Coefficients y_i = u_i . (x - mean), i = 1..k.
std::vector<double> pca_project(const PcaModel& model,
                                const std::vector<double>& x);

/// x_hat = mean + sum_i y_i u_i. y must have length k.
std::vector<double> pca_reconstruct(const PcaModel& model,
                                    const std::vector<double>& y);

} // namespace fxc

#endif
