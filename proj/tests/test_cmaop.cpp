#include <cmath>
#include <complex>

#include "cmaeig/cmaop.hpp"
#include "cmaeig/error.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cmaeig;
using testsupport::rel_err;

namespace {

// det of the complex Hessian u_{j kbar} = (u_{xj xk} + u_{yj yk} + i(u_{xj yk} - u_{yj xk})) / 4.
double complex_det_oracle(const SymMat4& h) {
    auto x = [](int j) { return j; };
    auto y = [](int j) { return j + 2; };
    std::complex<double> m[2][2];
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            m[j][k] = 0.25 * std::complex<double>(h(x(j), x(k)) + h(y(j), y(k)), h(x(j), y(k)) - h(y(j), x(k)));
    std::complex<double> d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return d.real();
}

// The operator written with v_ij and v_ji as separate symbols.
double F_general(const double g[4], const double v[4][4], double Lambda) {
    double s1 = g[0] * g[0] + g[2] * g[2];
    double s2 = g[1] * g[1] + g[3] * g[3];
    return (v[0][0] + v[2][2]) * (v[1][1] + v[3][3]) - (v[0][1] + v[2][3]) * (v[1][0] + v[3][2]) -
           (v[0][3] - v[2][1]) * (v[3][0] - v[1][2]) - s2 * (v[0][0] + v[2][2]) - s1 * (v[1][1] + v[3][3]) +
           (g[0] * g[1] + g[2] * g[3]) * (v[0][1] + v[2][3] + v[1][0] + v[3][2]) +
           (g[0] * g[3] - g[1] * g[2]) * (v[0][3] - v[2][1] + v[3][0] - v[1][2]) - Lambda;
}

FullState random_state(testsupport::Rng& rng, double scale = 2.0) {
    FullState s;
    for (double& g : s.grad) g = rng.uniform(-scale, scale);
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) s.hess.set(i, j, rng.uniform(-scale, scale));
    return s;
}

}  // namespace

TEST_SUITE("cmaop") {

TEST_CASE("complex_det_real examples") {
    CHECK(complex_det_real(SymMat4::identity(2.0)) == doctest::Approx(1.0));
    CHECK(complex_det_real(SymMat4::identity(1.0)) == doctest::Approx(0.25));
    SymMat4 h = SymMat4::identity(2.0);
    h.set(0, 1, 1.0);
    CHECK(complex_det_real(h) == doctest::Approx(15.0 / 16.0));
}

TEST_CASE("complex_det_real agrees with the complex Hessian determinant") {
    testsupport::Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        FullState s = random_state(rng);
        CHECK(rel_err(complex_det_real(s.hess), complex_det_oracle(s.hess)) < 1e-13);
    }
}

TEST_CASE("complex_det_real is invariant under rotation of the (x1, y1) plane") {
    testsupport::Rng rng(12);
    FullState s = random_state(rng);
    for (int t = 0; t < 10; ++t) {
        double th = rng.uniform(0.0, 2.0 * M_PI);
        double c = std::cos(th), sn = std::sin(th);
        double R[4][4] = {{c, 0, -sn, 0}, {0, 1, 0, 0}, {sn, 0, c, 0}, {0, 0, 0, 1}};
        SymMat4 hr;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                double acc = 0.0;
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) acc += R[a][i] * s.hess(a, b) * R[b][j];
                hr.set(i, j, acc);
            }
        CHECK(rel_err(complex_det_real(hr), complex_det_real(s.hess)) < 1e-12);
    }
}

TEST_CASE("F_eval examples") {
    FullState s;
    s.hess = SymMat4::identity();
    CHECK(F_eval(s, 3.0) == doctest::Approx(1.0));
    s.grad = {1, 0, 0, 0};
    CHECK(F_eval(s, 3.0) == doctest::Approx(-1.0));
    FullState z;
    CHECK(F_eval(z, 5.0) == doctest::Approx(-5.0));
    CHECK(F_eval(s, TransformedEigenvalue::from_lambda(0.25)) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(TransformedEigenvalue(0.0), DomainError);
}

TEST_CASE("F_eval matches the two-index display at symmetric states") {
    testsupport::Rng rng(13);
    for (int t = 0; t < 100; ++t) {
        FullState s = random_state(rng);
        double v[4][4];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) v[i][j] = s.hess(i, j);
        CHECK(rel_err(F_eval(s, 1.7), F_general(s.grad.data(), v, 1.7)) < 1e-13);
    }
}

TEST_CASE("F_ij examples and pattern") {
    FullState s;
    s.grad = {1, 2, 0, 0};
    s.hess = SymMat4::diagonal({0.3, 1.1, 2.0, 0.9});
    CHECK(F_ij(s)(0, 1) == doctest::Approx(2.0));

    FullState d;
    d.hess = SymMat4::diagonal({1, 2, 3, 4});
    SymMat4 f = F_ij(d);
    CHECK(f(0, 0) == doctest::Approx(6.0));
    CHECK(f(1, 1) == doctest::Approx(4.0));
    CHECK(f(2, 2) == doctest::Approx(6.0));
    CHECK(f(3, 3) == doctest::Approx(4.0));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) CHECK(f(i, j) == 0.0);

    testsupport::Rng rng(14);
    for (int t = 0; t < 100; ++t) {
        FullState r = random_state(rng);
        CHECK(F_ij(r)(0, 2) == 0.0);
        CHECK(F_ij(r)(1, 3) == 0.0);
        FullState q;
        q.grad = r.grad;
        q.hess = SymMat4::diagonal({r.hess(0, 0), r.hess(1, 1), r.hess(2, 2), r.hess(3, 3)});
        SymMat4 g = F_ij(q);
        CHECK(g(2, 2) == g(0, 0));
        CHECK(g(3, 3) == g(1, 1));
        CHECK(g(2, 3) == g(0, 1));
        CHECK(g(0, 3) == -g(1, 2));
        CHECK(g(0, 1) == q.grad[0] * q.grad[1] + q.grad[2] * q.grad[3]);
        CHECK(g(1, 2) == -(q.grad[0] * q.grad[3] - q.grad[1] * q.grad[2]));
        double s1 = q.grad[0] * q.grad[0] + q.grad[2] * q.grad[2];
        double s2 = q.grad[1] * q.grad[1] + q.grad[3] * q.grad[3];
        CHECK(rel_err(g(0, 1) * g(0, 1) + g(1, 2) * g(1, 2), s1 * s2) < 1e-14);
    }
}

TEST_CASE("F_ij and F_vk match central differences of F_eval") {
    testsupport::Rng rng(15);
    const double h = 1e-5;
    for (int t = 0; t < 100; ++t) {
        FullState s = random_state(rng);
        SymMat4 f = F_ij(s);
        for (int i = 0; i < 4; ++i) {
            for (int j = i; j < 4; ++j) {
                FullState p = s, m = s;
                p.hess.add(i, j, h);
                m.hess.add(i, j, -h);
                double fd = (F_eval(p, 1.0) - F_eval(m, 1.0)) / (2 * h);
                // Joint perturbation of (ij) and (ji) collects both grid entries.
                double expect = i == j ? f(i, j) : 2.0 * f(i, j);
                CHECK(rel_err(expect, fd) < 1e-6);
            }
        }
        Vec4 fv = F_vk(s);
        for (int k = 0; k < 4; ++k) {
            FullState p = s, m = s;
            p.grad[k] += h;
            m.grad[k] -= h;
            double fd = (F_eval(p, 1.0) - F_eval(m, 1.0)) / (2 * h);
            CHECK(rel_err(fv[k], fd) < 1e-6);
        }
    }
}

TEST_CASE("F_vk examples") {
    FullState s;
    s.grad = {0, 0, 0, 0};
    s.hess = SymMat4::identity();
    for (double x : F_vk(s)) CHECK(x == 0.0);
}

TEST_CASE("second partials match differences of the two-index form") {
    CHECK(F_second_partial(1, 1, 2, 2) == 1.0);
    CHECK(F_second_partial(1, 2, 2, 1) == -1.0);
    CHECK(F_second_partial(1, 1, 3, 3) == 0.0);
    CHECK_THROWS_AS(F_second_partial(0, 1, 2, 2), InvalidArgument);

    double g[4] = {0.3, -1.2, 0.7, 2.1};
    double base[4][4] = {{0.5, 0.1, -0.4, 0.2}, {0.3, 1.4, 0.6, -0.7}, {0.9, -0.2, 2.2, 0.8}, {0.1, 0.4, -1.3, 0.6}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    auto eval = [&](double a, double b) {
                        double v[4][4];
                        for (int p = 0; p < 4; ++p)
                            for (int q = 0; q < 4; ++q) v[p][q] = base[p][q];
                        v[i][j] += a;
                        v[k][l] += b;
                        return F_general(g, v, 0.0);
                    };
                    double fd = (eval(1, 1) - eval(1, -1) - eval(-1, 1) + eval(-1, -1)) / 4.0;
                    if (i == k && j == l) fd = (eval(1, 0) - 2 * eval(0, 0) + eval(-1, 0));
                    CHECK(F_second_partial(i + 1, j + 1, k + 1, l + 1) == doctest::Approx(fd).epsilon(1e-12));
                }
}

TEST_CASE("log transforms") {
    UFields u;
    u.u = -4.0;
    VFields v = log_transform_u_to_v(u);
    CHECK(v.v == doctest::Approx(0.0));
    u.u = -1.0;
    CHECK(log_transform_u_to_v(u).v == doctest::Approx(2.0 * std::log(2.0)));
    u.u = 0.0;
    CHECK_THROWS_AS(log_transform_u_to_v(u), DomainError);

    VFields z;
    CHECK(log_transform_v_to_u(z).u == doctest::Approx(-4.0));
    z.v = 2.0 * std::log(2.0);
    CHECK(log_transform_v_to_u(z).u == doctest::Approx(-1.0));

    testsupport::Rng rng(16);
    for (int t = 0; t < 100; ++t) {
        UFields w;
        w.u = -rng.uniform(0.1, 5.0);
        FullState s = random_state(rng);
        w.grad = s.grad;
        w.hess = s.hess;
        UFields back = log_transform_v_to_u(log_transform_u_to_v(w));
        CHECK(rel_err(back.u, w.u) < 1e-12);
        for (int i = 0; i < 4; ++i) {
            CHECK(rel_err(back.grad[i], w.grad[i]) < 1e-12);
            for (int j = i; j < 4; ++j) CHECK(rel_err(back.hess(i, j), w.hess(i, j)) < 1e-12);
        }
        VFields vv;
        vv.v = rng.uniform(-2.0, 3.0);
        vv.state = random_state(rng);
        VFields vb = log_transform_u_to_v(log_transform_v_to_u(vv));
        CHECK(rel_err(vb.v, vv.v) < 1e-12);
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) CHECK(rel_err(vb.state.hess(i, j), vv.state.hess(i, j)) < 1e-12);
    }
}

TEST_CASE("transformed equation equals the original up to the factor 16 exp(-2v)") {
    testsupport::Rng rng(17);
    for (int t = 0; t < 100; ++t) {
        VFields v;
        v.v = rng.uniform(-1.0, 2.0);
        v.state = random_state(rng);
        double lambda = rng.uniform(0.1, 5.0);
        UFields u = log_transform_v_to_u(v);
        double e3 = 16.0 * complex_det_real(u.hess) - 16.0 * lambda * u.u * u.u;
        double e4 = F_eval(v.state, TransformedEigenvalue::from_lambda(lambda));
        double scale = 16.0 * std::exp(-2.0 * v.v);
        CHECK(std::fabs(e3 - scale * e4) <= 1e-10 * std::max(std::fabs(e3), scale));
    }
}

TEST_CASE("ellipticity examples") {
    FullState s;
    s.hess = SymMat4::identity();
    CHECK(ellipticity_min_eig(s) == doctest::Approx(2.0));
    FullState z;
    CHECK(ellipticity_min_eig(z) == doctest::Approx(0.0));
    FullState g;
    g.grad = {1, 0, 0, 0};
    g.hess = SymMat4::identity(3.0);
    // F^{11} = F^{33} = 6, F^{22} = F^{44} = 5, no couplings.
    CHECK(ellipticity_min_eig(g) == doctest::Approx(5.0));
}

}
