// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#include "fxc/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fxc {

namespace {

constexpr double kSymmetryTol = 1e-9;
constexpr double kOffDiagTol = 1e-10;
constexpr int kMaxSweeps = 100;
constexpr double kEigenvalueFloor = 1e-12; // relative to the leading eigenvalue

void normalize_sign(std::vector<double>& v) {
    for (double c : v) {
        if (std::fabs(c) > 1e-12) {
            if (c < 0)
                for (double& x : v) x = -x;
            return;
        }
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

EigenResult sym_eigen(const std::vector<std::vector<double>>& matrix) {
    const std::size_t s = matrix.size();
    if (s == 0) throw std::invalid_argument("sym_eigen: empty matrix");
    for (const auto& row : matrix)
        if (row.size() != s)
            throw std::invalid_argument("sym_eigen: matrix is not square");
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j)
            if (std::fabs(matrix[i][j] - matrix[j][i]) > kSymmetryTol)
                throw std::invalid_argument(
                    "sym_eigen: matrix not symmetric at (" + std::to_string(i) +
                    "," + std::to_string(j) + ")");

    std::vector<std::vector<double>> a = matrix;
    std::vector<std::vector<double>> v(s, std::vector<double>(s, 0.0));
    for (std::size_t i = 0; i < s; ++i) v[i][i] = 1.0;

    auto max_offdiag = [&]() {
        double m = 0.0;
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = i + 1; j < s; ++j)
                m = std::max(m, std::fabs(a[i][j]));
        return m;
    };

    int sweep = 0;
    while (max_offdiag() >= kOffDiagTol) {
        if (++sweep > kMaxSweeps)
            throw std::runtime_error("sym_eigen: no convergence within " +
                                     std::to_string(kMaxSweeps) + " sweeps");
        for (std::size_t p = 0; p + 1 < s; ++p) {
            for (std::size_t q = p + 1; q < s; ++q) {
                double apq = a[p][q];
                if (apq == 0.0) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * c;

                double app = a[p][p], aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = a[q][p] = 0.0;
                for (std::size_t j = 0; j < s; ++j) {
                    if (j == p || j == q) continue;
                    double ajp = a[j][p], ajq = a[j][q];
                    a[j][p] = a[p][j] = c * ajp - sn * ajq;
                    a[j][q] = a[q][j] = sn * ajp + c * ajq;
                }
                for (std::size_t j = 0; j < s; ++j) {
                    double vjp = v[j][p], vjq = v[j][q];
                    v[j][p] = c * vjp - sn * vjq;
                    v[j][q] = sn * vjp + c * vjq;
                }
            }
        }
    }

    std::vector<std::size_t> order(s);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a[i][i] > a[j][j];
    });

    EigenResult result;
    result.eigenvalues.resize(s);
    result.eigenvectors.assign(s, std::vector<double>(s));
    for (std::size_t r = 0; r < s; ++r) {
        std::size_t src = order[r];
        result.eigenvalues[r] = a[src][src];
        for (std::size_t j = 0; j < s; ++j)
            result.eigenvectors[r][j] = v[j][src];
        normalize_sign(result.eigenvectors[r]);
    }
    return result;
}

namespace {

// Scale a symmetric matrix to unit max-|entry| before Jacobi so the fixed
// absolute off-diagonal threshold is reachable for any data magnitude;
// eigenvalues scale back linearly, eigenvectors are unchanged.
EigenResult scaled_sym_eigen(std::vector<std::vector<double>> m) {
    double scale = 0.0;
    for (const auto& row : m)
        for (double x : row) scale = std::max(scale, std::fabs(x));
    if (scale > 0.0)
        for (auto& row : m)
            for (double& x : row) x /= scale;
    EigenResult r = sym_eigen(m);
    for (double& ev : r.eigenvalues) ev *= scale;
    return r;
}

// Deterministic orthonormal completion: the first standard basis vector
// with a significant residual after projecting out `existing`.
std::vector<double> complete_direction(
    const std::vector<std::vector<double>>& existing, std::size_t n) {
    for (std::size_t axis = 0; axis < n; ++axis) {
        std::vector<double> cand(n, 0.0);
        cand[axis] = 1.0;
        for (const auto& u : existing) {
            double d = dot(cand, u);
            for (std::size_t j = 0; j < n; ++j) cand[j] -= d * u[j];
        }
        double norm = std::sqrt(dot(cand, cand));
        if (norm > 0.5) {
            for (double& x : cand) x /= norm;
            return cand;
        }
    }
    throw std::runtime_error("pca_fit: failed to complete an orthonormal basis");
}

} // namespace

PcaModel pca_fit(const std::vector<std::vector<double>>& samples, int k,
                 PcaMethod method) {
    const std::size_t m = samples.size();
    if (m < 2) throw std::invalid_argument("pca_fit: need at least 2 samples");
    const std::size_t n = samples[0].size();
    if (n == 0) throw std::invalid_argument("pca_fit: zero-dimensional samples");
    for (const auto& sample : samples)
        if (sample.size() != n)
            throw std::invalid_argument("pca_fit: inconsistent sample dimensions");
    const std::size_t max_k = std::min(n, m - 1);
    if (k < 1 || static_cast<std::size_t>(k) > max_k)
        throw std::invalid_argument("pca_fit: k=" + std::to_string(k) +
                                    " outside [1, min(N, M-1)=" +
                                    std::to_string(max_k) + "]");

    PcaModel model;
    model.n = static_cast<int>(n);
    model.k = k;
    model.mean.assign(n, 0.0);
    for (const auto& sample : samples)
        for (std::size_t j = 0; j < n; ++j) model.mean[j] += sample[j];
    for (double& v : model.mean) v /= static_cast<double>(m);

    std::vector<std::vector<double>> centered(m, std::vector<double>(n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            centered[i][j] = samples[i][j] - model.mean[j];

    if (method == PcaMethod::Auto)
        method = m < n ? PcaMethod::Gram : PcaMethod::DirectCovariance;

    if (method == PcaMethod::DirectCovariance) {
        std::vector<std::vector<double>> cov(n, std::vector<double>(n, 0.0));
        for (const auto& phi : centered)
            for (std::size_t i = 0; i < n; ++i) {
                double pi = phi[i];
                if (pi == 0.0) continue;
                for (std::size_t j = i; j < n; ++j) cov[i][j] += pi * phi[j];
            }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                cov[i][j] /= static_cast<double>(m);
                cov[j][i] = cov[i][j];
            }
        EigenResult eig = scaled_sym_eigen(std::move(cov));
        double lead = std::max(eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues[0], 0.0);
        for (int i = 0; i < k; ++i) {
            double ev = eig.eigenvalues[i];
            if (ev < kEigenvalueFloor * lead || ev < 0.0) ev = 0.0;
            model.eigenvalues.push_back(ev);
            model.components.push_back(std::move(eig.eigenvectors[i]));
        }
    } else {
        std::vector<std::vector<double>> gram(m, std::vector<double>(m, 0.0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) {
                double g = dot(centered[i], centered[j]) / static_cast<double>(m);
                gram[i][j] = gram[j][i] = g;
            }
        EigenResult eig = scaled_sym_eigen(std::move(gram));
        double lead = std::max(eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues[0], 0.0);
        for (int i = 0; i < k; ++i) {
            double ev = eig.eigenvalues[i];
            if (ev < kEigenvalueFloor * lead || ev < 0.0) ev = 0.0;
            model.eigenvalues.push_back(ev);
            if (ev > 0.0) {
                // u = A v / ||A v||
                std::vector<double> u(n, 0.0);
                for (std::size_t smp = 0; smp < m; ++smp) {
                    double w = eig.eigenvectors[i][smp];
                    if (w == 0.0) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        u[j] += w * centered[smp][j];
                }
                // re-orthonormalize against earlier components
                for (const auto& prev : model.components) {
                    double d = dot(u, prev);
                    for (std::size_t j = 0; j < n; ++j) u[j] -= d * prev[j];
                }
                double norm = std::sqrt(dot(u, u));
                if (norm > 0.0) {
                    for (double& x : u) x /= norm;
                    model.components.push_back(std::move(u));
                    continue;
                }
                model.eigenvalues.back() = 0.0;
            }
            model.components.push_back(complete_direction(model.components, n));
        }
    }

    for (auto& comp : model.components) normalize_sign(comp);
    return model;
}

std::vector<double> pca_project(const PcaModel& model,
                                const std::vector<double>& x) {
    if (x.size() != static_cast<std::size_t>(model.n))
        throw std::invalid_argument("pca_project: vector length " +
                                    std::to_string(x.size()) + " != N=" +
                                    std::to_string(model.n));
    std::vector<double> y(model.k, 0.0);
    for (int i = 0; i < model.k; ++i) {
        double s = 0.0;
        const auto& u = model.components[i];
        for (int j = 0; j < model.n; ++j) s += u[j] * (x[j] - model.mean[j]);
        y[i] = s;
    }
    return y;
}

std::vector<double> pca_reconstruct(const PcaModel& model,
                                    const std::vector<double>& y) {
    if (y.size() != static_cast<std::size_t>(model.k))
        throw std::invalid_argument("pca_reconstruct: vector length " +
                                    std::to_string(y.size()) + " != K=" +
                                    std::to_string(model.k));
    std::vector<double> x = model.mean;
    for (int i = 0; i < model.k; ++i) {
        double yi = y[i];
        if (yi == 0.0) continue;
        const auto& u = model.components[i];
        for (int j = 0; j < model.n; ++j) x[j] += yi * u[j];
    }
    return x;
}

} // namespace fxc
