#pragma once

// Real form of the complex Monge-Ampere operator on C^2 = R^4 and the
// operator F obtained from it by u = -4 exp(-v).
//
// Coordinate order is (x1, x2, y1, y2) everywhere: grad[0] = d/dx1,
// grad[1] = d/dx2, grad[2] = d/dy1, grad[3] = d/dy2, and the Hessian uses
// the same order. Array indices are 0-based; the conventional 1-based names
// (v_1 .. v_4, F^{11} ..) map to index - 1.

#include <array>

namespace cmaeig {

class SymMat4 {
public:
    SymMat4() { a_.fill(0.0); }
    static SymMat4 identity(double s = 1.0);
    static SymMat4 diagonal(const std::array<double, 4>& d);

    double operator()(int i, int j) const { return a_[slot(i, j)]; }
    void set(int i, int j, double v) { a_[slot(i, j)] = v; }
    void add(int i, int j, double v) { a_[slot(i, j)] += v; }

private:
    static int slot(int i, int j) {
        if (i > j) { int t = i; i = j; j = t; }
        return i * 4 - i * (i - 1) / 2 + (j - i);
    }
    std::array<double, 10> a_;
};

using Vec4 = std::array<double, 4>;

struct FullState {
    Vec4 grad{0.0, 0.0, 0.0, 0.0};
    SymMat4 hess;
};

// Lambda = 16 * lambda, the constant appearing after the logarithmic change.
class TransformedEigenvalue {
public:
    explicit TransformedEigenvalue(double Lambda);
    static TransformedEigenvalue from_lambda(double lambda) { return TransformedEigenvalue(16.0 * lambda); }
    double Lambda() const { return Lambda_; }
    double lambda() const { return Lambda_ / 16.0; }

private:
    double Lambda_;
};

// det(u_{i jbar}) for the Hessian of u in real coordinates.
double complex_det_real(const SymMat4& hess_u);

// The transformed operator minus Lambda. Takes Lambda as a raw number so that
// degenerate values can be probed; see TransformedEigenvalue for the meaning.
double F_eval(const FullState& s, double Lambda);
inline double F_eval(const FullState& s, const TransformedEigenvalue& L) { return F_eval(s, L.Lambda()); }

// dF/dv_ij with v_ij and v_ji perturbed together: the first-order change of F
// equals sum over all (i, j) of F^{ij} dv_ij.
SymMat4 F_ij(const FullState& s);

// dF/dv_k.
Vec4 F_vk(const FullState& s);

// d^2 F / d v_ij d v_kl with all 16 Hessian entries independent. 1-based.
double F_second_partial(int i, int j, int k, int l);

struct UFields {
    double u = 0.0;
    Vec4 grad{0.0, 0.0, 0.0, 0.0};
    SymMat4 hess;
};

struct VFields {
    double v = 0.0;
    FullState state;
};

VFields log_transform_u_to_v(const UFields& u);
UFields log_transform_v_to_u(const VFields& v);

// Smallest eigenvalue of F_ij(s).
double ellipticity_min_eig(const FullState& s);

}  // namespace cmaeig
