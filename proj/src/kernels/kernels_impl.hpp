#pragma once

#include <cstddef>

namespace cmaeig::kernels {

namespace scalar {
void reduced_det(const double* P, const double* Q, const double* M, double* out, std::size_t n);
void det_minus_rhs(const double* P, const double* Q, const double* M, const double* rhs, double* out, std::size_t n);
void eigen_residual(const double* P, const double* Q, const double* M, const double* u, double lambda, double* out,
                    std::size_t n);
void psh_margin(const double* P, const double* Q, const double* M, double* out, std::size_t n);
void sym2_eigs(const double* a, const double* b, const double* c, double* lo, double* hi, std::size_t n);
double max_abs(const double* x, std::size_t n);
double min_value(const double* x, std::size_t n);
}  // namespace scalar

struct KernelTable;
const KernelTable* avx2_table_impl();

}  // namespace cmaeig::kernels
