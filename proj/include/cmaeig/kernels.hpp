#pragma once

// Pointwise grid kernels shared by the 2D solver and the spectral scans.
// P, Q, M are the reduced second-order quantities
//     P = u_11 + u_1/r1,  Q = u_22 + u_2/r2,  M = u_12
// at each node, so that det(u_{i jbar}) = (P Q - M^2) / 16.

#include <cstddef>

namespace cmaeig::kernels {

enum class Backend { scalar, avx2 };

struct KernelTable {
    Backend backend;
    // out = (P Q - M^2) / 16
    void (*reduced_det)(const double* P, const double* Q, const double* M, double* out, std::size_t n);
    // out = (P Q - M^2) / 16 - rhs
    void (*det_minus_rhs)(const double* P, const double* Q, const double* M, const double* rhs, double* out,
                          std::size_t n);
    // out = (P Q - M^2) / 16 - lambda u^2
    void (*eigen_residual)(const double* P, const double* Q, const double* M, const double* u, double lambda,
                           double* out, std::size_t n);
    // Smallest eigenvalue of [[P, M], [M, Q]] / 4, the reduced complex Hessian.
    void (*psh_margin)(const double* P, const double* Q, const double* M, double* out, std::size_t n);
    // Eigenvalues of [[a, b], [b, c]], lo <= hi.
    void (*sym2_eigs)(const double* a, const double* b, const double* c, double* lo, double* hi, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
    double (*min_value)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_has_avx2();

// The table chosen at first use: AVX2 when compiled in and supported by the
// CPU, unless CMAEIG_KERNELS=scalar is set in the environment.
const KernelTable& active();
void force_backend(Backend b);
const char* backend_name(Backend b);

}  // namespace cmaeig::kernels
