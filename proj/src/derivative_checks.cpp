#include "cmaeig/derivative_checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "cmaeig/cmaop.hpp"
#include "cmaeig/error.hpp"
#include "cmaeig/symfun.hpp"

namespace cmaeig::checks {

namespace {

// First derivatives by central differences with this step. Second
// derivatives of sigma_k use a wider step: sigma_k is affine in every single
// entry, so the mixed difference is exact and only roundoff (~eps/h^2) remains.
constexpr double kStep = 1e-5;
constexpr double kStep2 = 1e-3;

struct Worst {
    double err = 0.0;
    std::string where;
    void update(double e, const std::string& w) {
        if (e > err || (std::isnan(e) && !std::isnan(err))) {
            err = e;
            where = w;
        }
    }
};

DerivativeCheck finish(std::string tag, std::string desc, int samples, const Worst& w, double tol) {
    DerivativeCheck c;
    c.tag = std::move(tag);
    c.description = std::move(desc);
    c.samples = samples;
    c.max_rel_err = w.err;
    c.tolerance = tol;
    c.passed = w.err <= tol;
    c.worst = w.where;
    return c;
}

std::string at(int sample, const std::string& what) {
    std::ostringstream os;
    os << "sample " << sample << ", " << what;
    return os.str();
}

// Sum of the principal k x k minors: sigma_k of the eigenvalues of any
// square matrix, with every entry an independent variable.
double sigma_matrix(const Eigen::Matrix4d& A, int k) {
    if (k == 0) return 1.0;
    if (k < 0 || k > 4) return 0.0;
    double sum = 0.0;
    for (int mask = 0; mask < 16; ++mask) {
        int idx[4], m = 0;
        for (int b = 0; b < 4; ++b)
            if (mask & (1 << b)) idx[m++] = b;
        if (m != k) continue;
        Eigen::MatrixXd S(k, k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) S(r, c) = A(idx[r], idx[c]);
        sum += S.determinant();
    }
    return sum;
}

FullState random_state(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    FullState s;
    for (double& g : s.grad) g = U(gen);
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) s.hess.set(i, j, U(gen));
    return s;
}

Diagonal random_diagonal(std::mt19937_64& gen, double lo, double hi) {
    std::uniform_real_distribution<double> U(lo, hi);
    return {U(gen), U(gen), U(gen), U(gen)};
}

DerivativeCheck check_F_ij(const DerivativeOptions& opt) {
    std::mt19937_64 gen(opt.seed);
    Worst w;
    for (int n = 0; n < opt.samples; ++n) {
        FullState s = random_state(gen);
        SymMat4 F = F_ij(s);
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                FullState p = s, m = s;
                p.hess.add(i, j, kStep);
                m.hess.add(i, j, -kStep);
                double fd = (F_eval(p, 1.0) - F_eval(m, 1.0)) / (2.0 * kStep);
                // A joint perturbation of (ij) and (ji) moves F by F^{ij} + F^{ji}.
                double exact = i == j ? F(i, j) : 2.0 * F(i, j);
                w.update(fd_rel_err(fd, exact), at(n, "F^" + std::to_string(i + 1) + std::to_string(j + 1)));
            }
    }
    return finish("fd.F_ij", "F^{ij} against central differences of F in the Hessian", opt.samples, w,
                  opt.tolerance);
}

DerivativeCheck check_F_vk(const DerivativeOptions& opt) {
    std::mt19937_64 gen(opt.seed + 1);
    Worst w;
    for (int n = 0; n < opt.samples; ++n) {
        FullState s = random_state(gen);
        Vec4 g = F_vk(s);
        for (int k = 0; k < 4; ++k) {
            FullState p = s, m = s;
            p.grad[k] += kStep;
            m.grad[k] -= kStep;
            double fd = (F_eval(p, 1.0) - F_eval(m, 1.0)) / (2.0 * kStep);
            w.update(fd_rel_err(fd, g[k]), at(n, "F^{v" + std::to_string(k + 1) + "}"));
        }
    }
    return finish("fd.F_vk", "F^{v_k} against central differences of F in the gradient", opt.samples, w,
                  opt.tolerance);
}

DerivativeCheck check_dsigma(const DerivativeOptions& opt) {
    std::mt19937_64 gen(opt.seed + 2);
    Worst w;
    for (int n = 0; n < opt.samples; ++n) {
        Diagonal d = random_diagonal(gen, -2.0, 2.0);
        Eigen::Matrix4d A = Eigen::Vector4d(d[0], d[1], d[2], d[3]).asDiagonal();
        for (int k = 1; k <= 4; ++k)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    Eigen::Matrix4d P = A, M = A;
                    P(i, j) += kStep;
                    M(i, j) -= kStep;
                    double fd = (sigma_matrix(P, k) - sigma_matrix(M, k)) / (2.0 * kStep);
                    std::ostringstream os;
                    os << "k=" << k << " (" << i + 1 << "," << j + 1 << ")";
                    w.update(fd_rel_err(fd, dsigma(d, k, i + 1, j + 1)), at(n, os.str()));
                }
    }
    return finish("fd.dsigma", "d sigma_k / d A_ij at diagonal A against central differences", opt.samples, w,
                  opt.tolerance);
}

DerivativeCheck check_d2sigma(const DerivativeOptions& opt) {
    std::mt19937_64 gen(opt.seed + 3);
    Worst w;
    const double h = kStep2;
    for (int n = 0; n < opt.samples; ++n) {
        Diagonal d = random_diagonal(gen, -2.0, 2.0);
        Eigen::Matrix4d A = Eigen::Vector4d(d[0], d[1], d[2], d[3]).asDiagonal();
        for (int k = 2; k <= 4; ++k)
            for (int a = 0; a < 16; ++a)
                for (int b = 0; b < 16; ++b) {
                    int i = a / 4, j = a % 4, p = b / 4, q = b % 4;
                    double fd;
                    if (a == b) {
                        Eigen::Matrix4d P = A, M = A;
                        P(i, j) += h;
                        M(i, j) -= h;
                        fd = (sigma_matrix(P, k) - 2.0 * sigma_matrix(A, k) + sigma_matrix(M, k)) / (h * h);
                    } else {
                        auto f = [&](double si, double sp) {
                            Eigen::Matrix4d X = A;
                            X(i, j) += si * h;
                            X(p, q) += sp * h;
                            return sigma_matrix(X, k);
                        };
                        fd = (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4.0 * h * h);
                    }
                    std::ostringstream os;
                    os << "k=" << k << " (" << i + 1 << j + 1 << "," << p + 1 << q + 1 << ")";
                    w.update(fd_rel_err(fd, d2sigma(d, k, i + 1, j + 1, p + 1, q + 1)), at(n, os.str()));
                }
    }
    return finish("fd.d2sigma", "second derivatives of sigma_k at diagonal A against central differences",
                  opt.samples, w, opt.tolerance);
}

DerivativeCheck check_dq(const DerivativeOptions& opt) {
    std::mt19937_64 gen(opt.seed + 4);
    Worst w;
    int used = 0;
    while (used < opt.samples) {
        Diagonal d = random_diagonal(gen, 0.05, 2.0);
        for (int l : {2, 3}) {
            if (sigma(d, l + 1) <= 1e-3) continue;
            for (int i = 0; i < 4; ++i) {
                Diagonal p = d, m = d;
                p[i] += kStep;
                m[i] -= kStep;
                double fd = (q_value(p, l) - q_value(m, l)) / (2.0 * kStep);
                w.update(fd_rel_err(fd, dq_exact(d, l, i + 1)),
                         at(used, "l=" + std::to_string(l) + " i=" + std::to_string(i + 1)));
            }
        }
        ++used;
    }
    return finish("fd.dq_exact", "d q / d A_ii against central differences of q", opt.samples, w, opt.tolerance);
}

DerivativeCheck check_pattern(const DerivativeOptions& opt) {
    std::mt19937_64 gen(opt.seed + 5);
    Worst w;
    int bad = 0;
    for (int n = 0; n < opt.samples; ++n) {
        FullState s = random_state(gen);
        Diagonal d = random_diagonal(gen, -2.0, 2.0);
        s.hess = SymMat4::diagonal(d);
        SymMat4 F = F_ij(s);
        bool ok = F(0, 2) == 0.0 && F(1, 3) == 0.0 && F(2, 2) == F(0, 0) && F(3, 3) == F(1, 1) &&
                  F(2, 3) == F(0, 1) && F(0, 3) == -F(1, 2);
        if (!ok && bad++ == 0) w.where = at(n, "pattern broken");
    }
    DerivativeCheck c = finish("exact.F_ij_pattern",
                               "F^13 = F^24 = 0, F^33 = F^11, F^44 = F^22, F^34 = F^12, F^14 = -F^23 at diagonal "
                               "Hessians",
                               opt.samples, w, opt.tolerance);
    c.passed = bad == 0;
    return c;
}

}  // namespace

double fd_rel_err(double fd, double exact) { return std::fabs(fd - exact) / std::max(std::fabs(exact), 1.0); }

std::vector<DerivativeCheck> run_derivative_checks(const DerivativeOptions& opt) {
    if (opt.samples < 1) throw InvalidArgument("samples must be positive");
    if (!(opt.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
    return {check_F_ij(opt), check_F_vk(opt), check_dsigma(opt), check_d2sigma(opt), check_dq(opt), check_pattern(opt)};
}

}  // namespace cmaeig::checks
