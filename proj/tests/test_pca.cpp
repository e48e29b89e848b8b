#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fxc/pca.hpp"
#include "fxc/rng.hpp"

using namespace fxc;

namespace {

std::vector<std::vector<double>> random_samples(Rng& rng, int m, int n,
                                                double scale = 1.0) {
    std::vector<std::vector<double>> samples(m, std::vector<double>(n));
    for (auto& s : samples)
        for (double& v : s) v = rng.next_double(-scale, scale);
    return samples;
}

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

TEST_SUITE("pca") {

TEST_CASE("sym_eigen on the identity") {
    std::vector<std::vector<double>> eye = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    EigenResult r = sym_eigen(eye);
    for (double ev : r.eigenvalues) CHECK(ev == doctest::Approx(1.0));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(dot(r.eigenvectors[i], r.eigenvectors[j]) ==
                  doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
}

TEST_CASE("sym_eigen on a diagonal matrix sorts descending") {
    std::vector<std::vector<double>> d = {{5, 0, 0}, {0, 2, 0}, {0, 0, 7}};
    EigenResult r = sym_eigen(d);
    CHECK(r.eigenvalues[0] == doctest::Approx(7.0));
    CHECK(r.eigenvalues[1] == doctest::Approx(5.0));
    CHECK(r.eigenvalues[2] == doctest::Approx(2.0));
    CHECK(r.eigenvectors[0][2] == doctest::Approx(1.0));
    CHECK(r.eigenvectors[1][0] == doctest::Approx(1.0));
    CHECK(r.eigenvectors[2][1] == doctest::Approx(1.0));
}

TEST_CASE("sym_eigen matches the hand-derived 2x2 case") {
    // characteristic polynomial of [[2,1],[1,2]]: (2-l)^2 - 1 -> l in {3, 1}
    EigenResult r = sym_eigen({{2, 1}, {1, 2}});
    CHECK(r.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(r.eigenvectors[0][0] == doctest::Approx(inv_sqrt2));
    CHECK(r.eigenvectors[0][1] == doctest::Approx(inv_sqrt2));
    CHECK(r.eigenvectors[1][0] == doctest::Approx(inv_sqrt2));
    CHECK(r.eigenvectors[1][1] == doctest::Approx(-inv_sqrt2));
}

TEST_CASE("sym_eigen rejects non-symmetric input") {
    CHECK_THROWS_AS(sym_eigen({{1, 2}, {3, 4}}), std::invalid_argument);
    CHECK_THROWS_AS(sym_eigen({{1, 2, 3}, {2, 1}}), std::invalid_argument);
}

TEST_CASE("sym_eigen residuals and orthonormality on random matrices") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        int s = 2 + static_cast<int>(rng.next_below(7));
        std::vector<std::vector<double>> a(s, std::vector<double>(s));
        for (int i = 0; i < s; ++i)
            for (int j = i; j < s; ++j)
                a[i][j] = a[j][i] = rng.next_double(-3.0, 3.0);
        double fro = 0.0;
        for (const auto& row : a)
            for (double v : row) fro += v * v;
        fro = std::sqrt(fro);

        EigenResult r = sym_eigen(a);
        for (int i = 0; i < s; ++i) {
            // residual ||A u - lambda u||
            double res = 0.0;
            for (int row = 0; row < s; ++row) {
                double au = 0.0;
                for (int col = 0; col < s; ++col)
                    au += a[row][col] * r.eigenvectors[i][col];
                double d = au - r.eigenvalues[i] * r.eigenvectors[i][row];
                res += d * d;
            }
            CHECK(std::sqrt(res) <= 1e-8 * fro);
            CHECK(norm(r.eigenvectors[i]) == doctest::Approx(1.0).epsilon(1e-9));
            for (int j = i + 1; j < s; ++j)
                CHECK(std::fabs(dot(r.eigenvectors[i], r.eigenvectors[j])) < 1e-9);
        }
        for (int i = 0; i + 1 < s; ++i)
            CHECK(r.eigenvalues[i] >= r.eigenvalues[i + 1]);
    }
}

TEST_CASE("pca mean of two points") {
    PcaModel m = pca_fit({{1, 2}, {3, 4}}, 1);
    CHECK(m.mean[0] == doctest::Approx(2.0));
    CHECK(m.mean[1] == doctest::Approx(3.0));
}

TEST_CASE("two distinct points give a unit component along their chord") {
    PcaModel m = pca_fit({{0, 0, 0}, {2, 2, 0}}, 1);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(m.components[0][0] == doctest::Approx(inv_sqrt2));
    CHECK(m.components[0][1] == doctest::Approx(inv_sqrt2));
    CHECK(m.components[0][2] == doctest::Approx(0.0));
    CHECK(norm(m.components[0]) == doctest::Approx(1.0));
}

TEST_CASE("axis-aligned degenerate data") {
    // all variance on e1; lambda_2.. are zero and the sign rule makes the
    // leading component +e1
    std::vector<std::vector<double>> samples = {
        {1, 0, 0, 0}, {5, 0, 0, 0}, {-3, 0, 0, 0}};
    PcaModel m = pca_fit(samples, 2);
    CHECK(m.components[0][0] == doctest::Approx(1.0));
    for (int j = 1; j < 4; ++j)
        CHECK(m.components[0][j] == doctest::Approx(0.0));
    CHECK(m.eigenvalues[1] == 0.0);
    // degenerate direction still orthonormal
    CHECK(norm(m.components[1]) == doctest::Approx(1.0));
    CHECK(std::fabs(dot(m.components[0], m.components[1])) < 1e-6);
}

TEST_CASE("degenerate data through the gram route") {
    // M=3 < N=4 forces the gram path; rank is 1
    std::vector<std::vector<double>> samples = {
        {1, 0, 0, 0}, {5, 0, 0, 0}, {-3, 0, 0, 0}};
    PcaModel m = pca_fit(samples, 2, PcaMethod::Gram);
    CHECK(m.components[0][0] == doctest::Approx(1.0));
    CHECK(m.eigenvalues[1] == 0.0);
    CHECK(norm(m.components[1]) == doctest::Approx(1.0));
    CHECK(std::fabs(dot(m.components[0], m.components[1])) < 1e-6);
}

TEST_CASE("pca_fit validates its preconditions") {
    CHECK_THROWS_AS(pca_fit({{1, 2}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(pca_fit({{1, 2}, {3, 4}}, 2), std::invalid_argument); // k > M-1
    CHECK_THROWS_AS(pca_fit({{1, 2}, {3, 4, 5}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(pca_fit({{1, 2}, {3, 4}}, 0), std::invalid_argument);
}

TEST_CASE("projection of the mean is zero and of mean+u1 is e1") {
    Rng rng(15);
    auto samples = random_samples(rng, 10, 6);
    PcaModel m = pca_fit(samples, 4);

    auto y0 = pca_project(m, m.mean);
    for (double v : y0) CHECK(v == doctest::Approx(0.0));

    std::vector<double> x = m.mean;
    for (int j = 0; j < m.n; ++j) x[j] += m.components[0][j];
    auto y1 = pca_project(m, x);
    CHECK(y1[0] == doctest::Approx(1.0));
    for (int i = 1; i < m.k; ++i) CHECK(y1[i] == doctest::Approx(0.0));
}

TEST_CASE("reconstruct of zero coefficients is the mean") {
    Rng rng(16);
    auto samples = random_samples(rng, 8, 5);
    PcaModel m = pca_fit(samples, 3);
    auto x = pca_reconstruct(m, {0.0, 0.0, 0.0});
    for (int j = 0; j < m.n; ++j) CHECK(x[j] == doctest::Approx(m.mean[j]));
}

TEST_CASE("full basis reconstructs exactly") {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3 + static_cast<int>(rng.next_below(4));
        int mcount = n + 2 + static_cast<int>(rng.next_below(4));
        auto samples = random_samples(rng, mcount, n);
        PcaModel m = pca_fit(samples, n);
        std::vector<double> x(n);
        for (double& v : x) v = rng.next_double(-2.0, 2.0);
        auto back = pca_reconstruct(m, pca_project(m, x));
        for (int j = 0; j < n; ++j)
            CHECK(back[j] == doctest::Approx(x[j]).epsilon(1e-6));
    }
}

TEST_CASE("reconstruction error is non-increasing in k") {
    Rng rng(33);
    auto samples = random_samples(rng, 9, 6);
    int kmax = 6; // min(N, M-1) = min(6, 8)
    PcaModel full = pca_fit(samples, kmax);
    double prev = -1.0;
    for (int k = 1; k <= kmax; ++k) {
        double err = 0.0;
        for (const auto& s : samples) {
            auto y = pca_project(full, s);
            for (int i = k; i < kmax; ++i) y[i] = 0.0; // prefix reconstruction
            auto back = pca_reconstruct(full, y);
            double d2 = 0.0;
            for (int j = 0; j < full.n; ++j) {
                double d = back[j] - s[j];
                d2 += d * d;
            }
            err += std::sqrt(d2);
        }
        err /= static_cast<double>(samples.size());
        if (prev >= 0.0) CHECK(err <= prev + 1e-12);
        prev = err;
    }
}

TEST_CASE("projection length mismatches are rejected") {
    PcaModel m = pca_fit({{1, 2}, {3, 4}, {4, 1}}, 1);
    CHECK_THROWS_AS(pca_project(m, {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(pca_reconstruct(m, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("fitted components are orthonormal and eigenvalues capture variance") {
    Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3 + static_cast<int>(rng.next_below(5));
        int mcount = 4 + static_cast<int>(rng.next_below(5));
        int k = std::min<int>(n, mcount - 1);
        auto samples = random_samples(rng, mcount, n, 2.0);
        PcaModel m = pca_fit(samples, k);

        for (int i = 0; i < k; ++i) {
            CHECK(norm(m.components[i]) == doctest::Approx(1.0).epsilon(1e-6));
            for (int j = i + 1; j < k; ++j)
                CHECK(std::fabs(dot(m.components[i], m.components[j])) < 1e-6);
        }
        // lambda_i == mean squared projection onto component i
        for (int i = 0; i < k; ++i) {
            double var = 0.0;
            for (const auto& s : samples) {
                double y = 0.0;
                for (int j = 0; j < n; ++j)
                    y += m.components[i][j] * (s[j] - m.mean[j]);
                var += y * y;
            }
            var /= static_cast<double>(mcount);
            if (m.eigenvalues[i] > 1e-9)
                CHECK(var == doctest::Approx(m.eigenvalues[i]).epsilon(1e-6));
        }
        for (int i = 0; i + 1 < k; ++i)
            CHECK(m.eigenvalues[i] >= m.eigenvalues[i + 1]);
    }
}

TEST_CASE("gram and direct covariance routes agree up to sign") {
    Rng rng(88);
    for (int trial = 0; trial < 15; ++trial) {
        int n = 2 + static_cast<int>(rng.next_below(7));
        int mcount = 3 + static_cast<int>(rng.next_below(6));
        int k = std::min<int>(n, mcount - 1);
        auto samples = random_samples(rng, mcount, n, 3.0);
        PcaModel direct = pca_fit(samples, k, PcaMethod::DirectCovariance);
        PcaModel gram = pca_fit(samples, k, PcaMethod::Gram);

        std::vector<double> probe(n);
        for (double& v : probe) v = rng.next_double(-1.0, 1.0);
        auto yd = pca_project(direct, probe);
        auto yg = pca_project(gram, probe);
        for (int i = 0; i < k; ++i)
            CHECK(std::fabs(yd[i]) == doctest::Approx(std::fabs(yg[i])).epsilon(1e-6));
    }
}

} // TEST_SUITE
