#include <algorithm>
#include <cmath>

#include "cmaeig/kernels.hpp"
#include "kernels_impl.hpp"

namespace cmaeig::kernels::scalar {

void reduced_det(const double* P, const double* Q, const double* M, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (P[i] * Q[i] - M[i] * M[i]) * 0.0625;
}

void det_minus_rhs(const double* P, const double* Q, const double* M, const double* rhs, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (P[i] * Q[i] - M[i] * M[i]) * 0.0625 - rhs[i];
}

void eigen_residual(const double* P, const double* Q, const double* M, const double* u, double lambda, double* out,
                    std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (P[i] * Q[i] - M[i] * M[i]) * 0.0625 - lambda * (u[i] * u[i]);
}

void psh_margin(const double* P, const double* Q, const double* M, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double mean = (P[i] + Q[i]) * 0.5;
        double half = (P[i] - Q[i]) * 0.5;
        out[i] = (mean - std::sqrt(half * half + M[i] * M[i])) * 0.25;
    }
}

void sym2_eigs(const double* a, const double* b, const double* c, double* lo, double* hi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double mean = (a[i] + c[i]) * 0.5;
        double half = (a[i] - c[i]) * 0.5;
        double rad = std::sqrt(half * half + b[i] * b[i]);
        lo[i] = mean - rad;
        hi[i] = mean + rad;
    }
}

double max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

double min_value(const double* x, std::size_t n) {
    double m = n ? x[0] : 0.0;
    for (std::size_t i = 1; i < n; ++i) m = std::min(m, x[i]);
    return m;
}

}  // namespace cmaeig::kernels::scalar

namespace cmaeig::kernels {

const KernelTable& scalar_table() {
    static const KernelTable t{Backend::scalar,      scalar::reduced_det, scalar::det_minus_rhs, scalar::eigen_residual,
                               scalar::psh_margin,   scalar::sym2_eigs,   scalar::max_abs,       scalar::min_value};
    return t;
}

}  // namespace cmaeig::kernels
