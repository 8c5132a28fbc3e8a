// Built with -mavx2 (no FMA), so every lane performs the same roundings as
// the scalar loop and the two backends agree bit for bit.

#include "cmaeig/kernels.hpp"
#include "kernels_impl.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <algorithm>

namespace cmaeig::kernels::avx2 {

namespace {

inline __m256d det4(__m256d p, __m256d q, __m256d m) {
    return _mm256_mul_pd(_mm256_sub_pd(_mm256_mul_pd(p, q), _mm256_mul_pd(m, m)), _mm256_set1_pd(0.0625));
}

inline __m256d abs4(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

}  // namespace

void reduced_det(const double* P, const double* Q, const double* M, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, det4(_mm256_loadu_pd(P + i), _mm256_loadu_pd(Q + i), _mm256_loadu_pd(M + i)));
    scalar::reduced_det(P + i, Q + i, M + i, out + i, n - i);
}

void det_minus_rhs(const double* P, const double* Q, const double* M, const double* rhs, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = det4(_mm256_loadu_pd(P + i), _mm256_loadu_pd(Q + i), _mm256_loadu_pd(M + i));
        _mm256_storeu_pd(out + i, _mm256_sub_pd(d, _mm256_loadu_pd(rhs + i)));
    }
    scalar::det_minus_rhs(P + i, Q + i, M + i, rhs + i, out + i, n - i);
}

void eigen_residual(const double* P, const double* Q, const double* M, const double* u, double lambda, double* out,
                    std::size_t n) {
    const __m256d lam = _mm256_set1_pd(lambda);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = det4(_mm256_loadu_pd(P + i), _mm256_loadu_pd(Q + i), _mm256_loadu_pd(M + i));
        __m256d uu = _mm256_loadu_pd(u + i);
        _mm256_storeu_pd(out + i, _mm256_sub_pd(d, _mm256_mul_pd(lam, _mm256_mul_pd(uu, uu))));
    }
    scalar::eigen_residual(P + i, Q + i, M + i, u + i, lambda, out + i, n - i);
}

void psh_margin(const double* P, const double* Q, const double* M, double* out, std::size_t n) {
    const __m256d half = _mm256_set1_pd(0.5), quarter = _mm256_set1_pd(0.25);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d p = _mm256_loadu_pd(P + i), q = _mm256_loadu_pd(Q + i), m = _mm256_loadu_pd(M + i);
        __m256d mean = _mm256_mul_pd(_mm256_add_pd(p, q), half);
        __m256d h = _mm256_mul_pd(_mm256_sub_pd(p, q), half);
        __m256d rad = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(h, h), _mm256_mul_pd(m, m)));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sub_pd(mean, rad), quarter));
    }
    scalar::psh_margin(P + i, Q + i, M + i, out + i, n - i);
}

void sym2_eigs(const double* a, const double* b, const double* c, double* lo, double* hi, std::size_t n) {
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i), vb = _mm256_loadu_pd(b + i), vc = _mm256_loadu_pd(c + i);
        __m256d mean = _mm256_mul_pd(_mm256_add_pd(va, vc), half);
        __m256d h = _mm256_mul_pd(_mm256_sub_pd(va, vc), half);
        __m256d rad = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(h, h), _mm256_mul_pd(vb, vb)));
        _mm256_storeu_pd(lo + i, _mm256_sub_pd(mean, rad));
        _mm256_storeu_pd(hi + i, _mm256_add_pd(mean, rad));
    }
    scalar::sym2_eigs(a + i, b + i, c + i, lo + i, hi + i, n - i);
}

double max_abs(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, abs4(_mm256_loadu_pd(x + i)));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    return std::max(m, scalar::max_abs(x + i, n - i));
}

double min_value(const double* x, std::size_t n) {
    if (n < 4) return scalar::min_value(x, n);
    __m256d acc = _mm256_loadu_pd(x);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
    return i < n ? std::min(m, scalar::min_value(x + i, n - i)) : m;
}

}  // namespace cmaeig::kernels::avx2

namespace cmaeig::kernels {

const KernelTable* avx2_table_impl() {
    static const KernelTable t{Backend::avx2,      avx2::reduced_det, avx2::det_minus_rhs, avx2::eigen_residual,
                               avx2::psh_margin,   avx2::sym2_eigs,   avx2::max_abs,       avx2::min_value};
    return &t;
}

}  // namespace cmaeig::kernels

#else

namespace cmaeig::kernels {

const KernelTable* avx2_table_impl() { return nullptr; }

}  // namespace cmaeig::kernels

#endif
