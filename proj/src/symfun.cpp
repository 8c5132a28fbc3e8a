#include "cmaeig/symfun.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "cmaeig/error.hpp"

namespace cmaeig {

namespace {

void check_index(int i) {
    if (i < 1 || i > 4) throw InvalidArgument("index out of range 1..4: " + std::to_string(i));
}

void check_order(int k) {
    if (k < -1 || k > 5) throw InvalidArgument("invalid order k = " + std::to_string(k));
}

// Coefficients of prod (1 + d_i t); entry k is sigma_k.
std::array<double, 5> sigma_all(const Diagonal& d) {
    std::array<double, 5> c{1.0, 0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
        for (int k = i + 1; k >= 1; --k) c[k] += d[i] * c[k - 1];
    }
    return c;
}

double sigma_unchecked(const Diagonal& d, int k) {
    if (k < 0 || k > 4) return 0.0;
    return sigma_all(d)[k];
}

Diagonal zeroed(const Diagonal& d, std::initializer_list<int> idx) {
    Diagonal out = d;
    for (int i : idx) out[i - 1] = 0.0;
    return out;
}

void check_l(int l) {
    if (l != 2 && l != 3) throw InvalidArgument("l must be 2 or 3");
}

}  // namespace

Spectrum::Spectrum(const std::array<double, 4>& values) : values_(values) {
    std::sort(values_.begin(), values_.end(), std::greater<double>());
}

double sigma(const Diagonal& d, int k) {
    check_order(k);
    return sigma_unchecked(d, k);
}

double sigma(const Spectrum& s, int k) { return sigma(s.diagonal(), k); }

double sigma_excluding(const Diagonal& d, int k, std::initializer_list<int> excluded) {
    check_order(k);
    if (excluded.size() > 2) throw InvalidArgument("at most two excluded indices are supported");
    for (int i : excluded) check_index(i);
    return sigma_unchecked(zeroed(d, excluded), k);
}

double dsigma(const Diagonal& d, int k, int i, int j) {
    check_order(k);
    check_index(i);
    check_index(j);
    if (i != j) return 0.0;
    return sigma_unchecked(zeroed(d, {i}), k - 1);
}

double d2sigma(const Diagonal& d, int k, int i, int j, int p, int q) {
    check_order(k);
    for (int x : {i, j, p, q}) check_index(x);
    if (i == p) return 0.0;
    if (i == j && p == q) return sigma_unchecked(zeroed(d, {i, p}), k - 2);
    if (i == q && j == p) return -sigma_unchecked(zeroed(d, {i, p}), k - 2);
    return 0.0;
}

double q_value(const Diagonal& d, int l) {
    check_l(l);
    double den = sigma_unchecked(d, l + 1);
    if (den < 0.0) throw DomainError("sigma_{l+1} < 0: Hessian is not in the convex cone");
    if (den == 0.0) return 0.0;
    return sigma_unchecked(d, l + 2) / den;
}

double phi_value(const Diagonal& d, int l) {
    return sigma_unchecked(d, l + 1) + q_value(d, l);
}

double dq_exact(const Diagonal& d, int l, int i) {
    check_l(l);
    check_index(i);
    double s1 = sigma_unchecked(d, l + 1);
    if (s1 <= 0.0) throw DomainError("dq undefined where sigma_{l+1} <= 0");
    Diagonal di = zeroed(d, {i});
    double s2 = sigma_unchecked(d, l + 2);
    return (sigma_unchecked(di, l + 1) * s1 - s2 * sigma_unchecked(di, l)) / (s1 * s1);
}

double dq_leading(const Diagonal& d, int l, int i) {
    check_l(l);
    check_index(i);
    if (i <= l) throw InvalidArgument("dq_leading needs a bad index i > l");
    Diagonal b{0.0, 0.0, 0.0, 0.0};
    for (int p = l; p < 4; ++p) b[p] = d[p];
    Diagonal bi = b;
    bi[i - 1] = 0.0;
    double s1b = sigma_unchecked(b, 1);
    if (s1b == 0.0) throw DomainError("bad block is zero");
    double s1bi = sigma_unchecked(bi, 1);
    return (s1bi * s1bi - sigma_unchecked(bi, 2)) / (s1b * s1b);
}

}  // namespace cmaeig
