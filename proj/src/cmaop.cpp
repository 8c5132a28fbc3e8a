#include "cmaeig/cmaop.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "cmaeig/error.hpp"

namespace cmaeig {

SymMat4 SymMat4::identity(double s) {
    SymMat4 m;
    for (int i = 0; i < 4; ++i) m.set(i, i, s);
    return m;
}

SymMat4 SymMat4::diagonal(const std::array<double, 4>& d) {
    SymMat4 m;
    for (int i = 0; i < 4; ++i) m.set(i, i, d[i]);
    return m;
}

TransformedEigenvalue::TransformedEigenvalue(double Lambda) : Lambda_(Lambda) {
    if (!(Lambda > 0.0)) throw DomainError("Lambda must be positive");
}

double complex_det_real(const SymMat4& h) {
    double a = h(0, 0) + h(2, 2);
    double b = h(1, 1) + h(3, 3);
    double c = h(0, 1) + h(2, 3);
    double d = h(0, 3) - h(1, 2);
    return (a * b - c * c - d * d) / 16.0;
}

double F_eval(const FullState& s, double Lambda) {
    const Vec4& g = s.grad;
    const SymMat4& h = s.hess;
    double a = h(0, 0) + h(2, 2);
    double b = h(1, 1) + h(3, 3);
    double c = h(0, 1) + h(2, 3);
    double d = h(0, 3) - h(1, 2);
    double s1 = g[0] * g[0] + g[2] * g[2];
    double s2 = g[1] * g[1] + g[3] * g[3];
    double p = g[0] * g[1] + g[2] * g[3];
    double m = g[0] * g[3] - g[1] * g[2];
    return a * b - c * c - d * d - s2 * a - s1 * b + 2.0 * p * c + 2.0 * m * d - Lambda;
}

SymMat4 F_ij(const FullState& s) {
    const Vec4& g = s.grad;
    const SymMat4& h = s.hess;
    double a = h(0, 0) + h(2, 2);
    double b = h(1, 1) + h(3, 3);
    double c = h(0, 1) + h(2, 3);
    double d = h(0, 3) - h(1, 2);
    double s1 = g[0] * g[0] + g[2] * g[2];
    double s2 = g[1] * g[1] + g[3] * g[3];
    double p = g[0] * g[1] + g[2] * g[3];
    double m = g[0] * g[3] - g[1] * g[2];

    SymMat4 f;
    f.set(0, 0, b - s2);
    f.set(2, 2, b - s2);
    f.set(1, 1, a - s1);
    f.set(3, 3, a - s1);
    f.set(0, 1, p - c);
    f.set(2, 3, p - c);
    f.set(0, 3, m - d);
    f.set(1, 2, d - m);
    return f;
}

Vec4 F_vk(const FullState& s) {
    const Vec4& g = s.grad;
    const SymMat4& h = s.hess;
    double a = h(0, 0) + h(2, 2);
    double b = h(1, 1) + h(3, 3);
    double c = h(0, 1) + h(2, 3);
    double d = h(0, 3) - h(1, 2);
    return {
        -2.0 * g[0] * b + 2.0 * g[1] * c + 2.0 * g[3] * d,
        -2.0 * g[1] * a + 2.0 * g[0] * c - 2.0 * g[2] * d,
        -2.0 * g[2] * b + 2.0 * g[3] * c - 2.0 * g[1] * d,
        -2.0 * g[3] * a + 2.0 * g[2] * c + 2.0 * g[0] * d,
    };
}

double F_second_partial(int i, int j, int k, int l) {
    for (int x : {i, j, k, l}) {
        if (x < 1 || x > 4) throw InvalidArgument("index out of range 1..4: " + std::to_string(x));
    }
    auto code = [](int p, int q) { return p * 10 + q; };
    int e1 = code(i, j);
    int e2 = code(k, l);
    if (e1 > e2) std::swap(e1, e2);
    switch (e1 * 100 + e2) {
        case 1122: case 1144: case 2233: case 3344:
            return 1.0;
        case 1221: case 1243: case 2134: case 3443:
            return -1.0;
        case 1441: case 2332:
            return -1.0;
        case 1423: case 3241:
            return 1.0;
        default:
            return 0.0;
    }
}

VFields log_transform_u_to_v(const UFields& in) {
    if (!(in.u < 0.0)) throw DomainError("log transform needs u < 0");
    double w = -in.u;
    VFields out;
    out.v = -std::log(w / 4.0);
    for (int i = 0; i < 4; ++i) out.state.grad[i] = in.grad[i] / w;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            out.state.hess.set(i, j, in.hess(i, j) / w + out.state.grad[i] * out.state.grad[j]);
        }
    }
    return out;
}

UFields log_transform_v_to_u(const VFields& in) {
    double e = 4.0 * std::exp(-in.v);
    UFields out;
    out.u = -e;
    for (int i = 0; i < 4; ++i) out.grad[i] = e * in.state.grad[i];
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            out.hess.set(i, j, e * (in.state.hess(i, j) - in.state.grad[i] * in.state.grad[j]));
        }
    }
    return out;
}

double ellipticity_min_eig(const FullState& s) {
    SymMat4 f = F_ij(s);
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = f(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

}  // namespace cmaeig
