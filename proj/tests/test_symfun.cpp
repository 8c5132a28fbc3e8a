#include <array>
#include <cmath>
#include <vector>

#include "cmaeig/error.hpp"
#include "cmaeig/symfun.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cmaeig;
using testsupport::rel_err;

namespace {

// Brute force over index subsets.
double sigma_brute(const Diagonal& d, int k) {
    if (k == 0) return 1.0;
    if (k < 0 || k > 4) return 0.0;
    double total = 0.0;
    for (int mask = 0; mask < 16; ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        double prod = 1.0;
        for (int i = 0; i < 4; ++i)
            if (mask & (1 << i)) prod *= d[i];
        total += prod;
    }
    return total;
}

using Mat = std::array<std::array<long double, 4>, 4>;

long double det_sub(const Mat& a, const std::vector<int>& idx) {
    // Laplace expansion on a principal submatrix, at most 4x4.
    size_t n = idx.size();
    if (n == 0) return 1.0L;
    if (n == 1) return a[idx[0]][idx[0]];
    long double total = 0.0L;
    for (size_t c = 0; c < n; ++c) {
        std::vector<int> rows(idx.begin() + 1, idx.end());
        std::vector<int> cols;
        for (size_t j = 0; j < n; ++j)
            if (j != c) cols.push_back(idx[j]);
        // minor with rows idx[1..] and cols (idx minus c)
        Mat m{};
        size_t mn = n - 1;
        std::vector<int> id(mn);
        for (size_t r = 0; r < mn; ++r) {
            id[r] = static_cast<int>(r);
            for (size_t s = 0; s < mn; ++s) m[r][s] = a[rows[r]][cols[s]];
        }
        long double sign = (c % 2 == 0) ? 1.0L : -1.0L;
        total += sign * a[idx[0]][idx[c]] * det_sub(m, id);
    }
    return total;
}

// sigma_k of a general matrix: the sum of its k x k principal minors.
long double sigma_matrix(const Mat& a, int k) {
    if (k == 0) return 1.0L;
    if (k < 0 || k > 4) return 0.0L;
    long double total = 0.0L;
    for (int mask = 0; mask < 16; ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        std::vector<int> idx;
        for (int i = 0; i < 4; ++i)
            if (mask & (1 << i)) idx.push_back(i);
        total += det_sub(a, idx);
    }
    return total;
}

Mat diag_mat(const Diagonal& d) {
    Mat a{};
    for (int i = 0; i < 4; ++i) a[i][i] = d[i];
    return a;
}

}  // namespace

TEST_SUITE("symfun") {

TEST_CASE("sigma examples") {
    CHECK(sigma(Spectrum({1, 2, 3, 0}), 2) == doctest::Approx(11.0));
    CHECK(sigma(Spectrum({1, 1, 1, 1}), 4) == doctest::Approx(1.0));
    CHECK(sigma(Spectrum({3, 2, 1, 0}), 3) == doctest::Approx(sigma_brute({3, 2, 1, 0}, 3)));
    CHECK(sigma(Diagonal{1, 2, 3, 4}, 0) == 1.0);
    CHECK(sigma(Diagonal{1, 2, 3, 4}, 5) == 0.0);
    CHECK(sigma(Diagonal{1, 2, 3, 4}, -1) == 0.0);
    CHECK_THROWS_AS(sigma(Diagonal{1, 2, 3, 4}, 6), InvalidArgument);
    CHECK_THROWS_AS(sigma(Diagonal{1, 2, 3, 4}, -2), InvalidArgument);
}

TEST_CASE("spectrum sorts descending") {
    Spectrum s({0.5, 3.0, -1.0, 2.0});
    CHECK(s[0] == 3.0);
    CHECK(s[1] == 2.0);
    CHECK(s[2] == 0.5);
    CHECK(s[3] == -1.0);
}

TEST_CASE("sigma_excluding examples") {
    CHECK(sigma_excluding({1, 2, 3, 4}, 2, {1}) == doctest::Approx(26.0));
    CHECK(sigma_excluding({1, 2, 3, 4}, 1, {1, 2}) == doctest::Approx(7.0));
    CHECK(sigma_excluding({5, 0, 0, 0}, 1, {1}) == 0.0);
    CHECK_THROWS_AS(sigma_excluding({1, 2, 3, 4}, 1, {1, 2, 3}), InvalidArgument);
}

TEST_CASE("dsigma and d2sigma examples") {
    Diagonal d{1, 2, 3, 4};
    CHECK(dsigma(d, 3, 1, 1) == doctest::Approx(26.0));
    CHECK(dsigma(d, 3, 1, 2) == 0.0);
    CHECK(dsigma({1, 1, 1, 1}, 1, 2, 2) == 1.0);
    CHECK(d2sigma(d, 3, 1, 1, 2, 2) == doctest::Approx(7.0));
    CHECK(d2sigma(d, 3, 1, 2, 2, 1) == doctest::Approx(-7.0));
    CHECK(d2sigma(d, 3, 1, 1, 1, 1) == 0.0);
    CHECK_THROWS_AS(dsigma(d, 3, 0, 1), InvalidArgument);
}

TEST_CASE("q and phi examples") {
    CHECK(q_value({3, 2, 1, 1}, 2) == doctest::Approx(6.0 / 17.0));
    CHECK(q_value({3, 2, 0, 0}, 2) == 0.0);
    CHECK(q_value({1, 1, 1, 0}, 3) == 0.0);
    CHECK(phi_value({3, 2, 1, 1}, 2) == doctest::Approx(17.0 + 6.0 / 17.0));
    CHECK(phi_value({3, 2, 0, 0}, 2) == 0.0);
    CHECK(phi_value({1, 1, 1, 1}, 3) == doctest::Approx(1.0));
    CHECK_THROWS_AS(q_value({1, 1, -3, 0}, 2), DomainError);
    CHECK_THROWS_AS(q_value({1, 1, 1, 1}, 1), InvalidArgument);
}

TEST_CASE("dq examples") {
    CHECK(dq_exact({1, 1, 1, 1}, 3, 1) == 0.0);
    CHECK_THROWS_AS(dq_exact({3, 2, 0, 0}, 2, 3), DomainError);

    Diagonal d{2, 2, 1, 1};
    double h = 1e-6;
    Diagonal dp = d, dm = d;
    dp[2] += h;
    dm[2] -= h;
    double fd = (q_value(dp, 2) - q_value(dm, 2)) / (2 * h);
    CHECK(rel_err(dq_exact(d, 2, 3), fd) < 1e-8);
}

TEST_CASE("dq approaches its leading-order form as bad eigenvalues shrink") {
    double prev_gap = 1e300;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        Diagonal d{2, 2, eps, eps};
        double exact = dq_exact(d, 2, 3);
        double lead = dq_leading(d, 2, 3);
        CHECK(lead == doctest::Approx(0.25));
        CHECK(exact == doctest::Approx(1.0 / ((2.0 + eps) * (2.0 + eps))).epsilon(1e-12));
        double gap = std::fabs(exact - lead);
        CHECK(gap < prev_gap);
        CHECK(gap <= 0.3 * eps);
        prev_gap = gap;
    }
}

TEST_CASE("recurrence over random spectra") {
    testsupport::Rng rng(20240601);
    for (int t = 0; t < 200; ++t) {
        Diagonal d;
        for (double& x : d) x = rng.uniform(-3, 3);
        for (int k = 1; k <= 4; ++k) {
            for (int i = 1; i <= 4; ++i) {
                double lhs = sigma(d, k);
                double rhs = sigma_excluding(d, k, {i}) + d[i - 1] * sigma_excluding(d, k - 1, {i});
                CHECK(rel_err(lhs, rhs) < 1e-13);
                CHECK(rel_err(lhs, sigma_brute(d, k)) < 1e-13);
            }
        }
    }
}

TEST_CASE("dsigma and d2sigma match finite differences of the principal-minor sum") {
    testsupport::Rng rng(77);
    const long double h = 1e-5L;
    for (int t = 0; t < 100; ++t) {
        Diagonal d;
        for (double& x : d) x = rng.uniform(-2, 2);
        Mat a = diag_mat(d);
        for (int k = 1; k <= 4; ++k) {
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    Mat ap = a, am = a;
                    ap[i][j] += h;
                    am[i][j] -= h;
                    double fd = static_cast<double>((sigma_matrix(ap, k) - sigma_matrix(am, k)) / (2 * h));
                    CHECK(rel_err(dsigma(d, k, i + 1, j + 1), fd) < 1e-6);
                }
            }
            for (int n = 0; n < 30; ++n) {
                int i = rng.integer(0, 3), j = rng.integer(0, 3), p = rng.integer(0, 3), q = rng.integer(0, 3);
                if (n < 8) { j = i; q = p; }
                if (n >= 8 && n < 16) { q = i; p = j; }
                auto eval = [&](long double si, long double sp) {
                    Mat m = a;
                    m[i][j] += si;
                    m[p][q] += sp;
                    return sigma_matrix(m, k);
                };
                long double fd = (eval(h, h) - eval(h, -h) - eval(-h, h) + eval(-h, -h)) / (4 * h * h);
                CHECK(rel_err(d2sigma(d, k, i + 1, j + 1, p + 1, q + 1), static_cast<double>(fd)) < 1e-6);
            }
        }
    }
}

TEST_CASE("dq_exact matches finite differences where sigma_{l+1} is not small") {
    testsupport::Rng rng(5);
    int checked = 0;
    for (int t = 0; t < 400 && checked < 100; ++t) {
        Diagonal d;
        for (double& x : d) x = rng.uniform(0.0, 2.0);
        for (int l : {2, 3}) {
            if (sigma(d, l + 1) <= 1e-3) continue;
            for (int i = 1; i <= 4; ++i) {
                double h = 1e-5;
                Diagonal dp = d, dm = d;
                dp[i - 1] += h;
                dm[i - 1] -= h;
                if (sigma(dm, l + 1) <= 0.0) continue;
                double fd = (q_value(dp, l) - q_value(dm, l)) / (2 * h);
                CHECK(rel_err(dq_exact(d, l, i), fd) < 1e-6);
            }
            ++checked;
        }
    }
    CHECK(checked >= 100);
}

TEST_CASE("q is continuous as the bad eigenvalues vanish") {
    const Diagonal pattern{3.0, 1.5, 0.7, 0.4};
    double prev = 1e300;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        Diagonal d = pattern;
        d[2] *= eps;
        d[3] *= eps;
        double q = q_value(d, 2);
        CHECK(q >= 0.0);
        CHECK(q < prev);
        prev = q;
    }
    CHECK(prev < 1e-5);
    // With l = 3 the quotient involves sigma_5 and vanishes identically.
    CHECK(q_value({3.0, 1.5, 0.7, 1e-6}, 3) == 0.0);
}

TEST_CASE("phi is nonnegative on nonnegative spectra") {
    testsupport::Rng rng(9);
    for (int t = 0; t < 500; ++t) {
        Diagonal d;
        for (double& x : d) x = rng.integer(0, 3) == 0 ? 0.0 : rng.uniform(0.0, 5.0);
        CHECK(phi_value(d, 2) >= 0.0);
        CHECK(phi_value(d, 3) >= 0.0);
    }
}

}
