#pragma once

// Elementary symmetric functions of 4x4 diagonal Hessians and the quotient
// auxiliary function phi = sigma_{l+1} + sigma_{l+2} / sigma_{l+1}.
//
// Index arguments are 1-based (1..4) and refer to positions in the Diagonal
// exactly as given; Spectrum is the sorted view used where order is irrelevant.

#include <array>
#include <initializer_list>

namespace cmaeig {

using Diagonal = std::array<double, 4>;

class Spectrum {
public:
    explicit Spectrum(const std::array<double, 4>& values);

    const std::array<double, 4>& values() const { return values_; }
    double operator[](int i) const { return values_[i]; }
    Diagonal diagonal() const { return values_; }

private:
    std::array<double, 4> values_;
};

double sigma(const Diagonal& d, int k);
double sigma(const Spectrum& s, int k);

// sigma_k with the listed eigenvalues set to zero; at most two exclusions.
double sigma_excluding(const Diagonal& d, int k, std::initializer_list<int> excluded);

// d sigma_k / d A_ij at A = diag(d).
double dsigma(const Diagonal& d, int k, int i, int j);

// d^2 sigma_k / d A_ij d A_pq at A = diag(d), entries treated as independent.
double d2sigma(const Diagonal& d, int k, int i, int j, int p, int q);

// sigma_{l+2}/sigma_{l+1}, defined as 0 where sigma_{l+1} vanishes. l in {2, 3}.
double q_value(const Diagonal& d, int l);
double phi_value(const Diagonal& d, int l);

// Exact d q / d A_ii by the quotient rule. Requires sigma_{l+1} > 0.
double dq_exact(const Diagonal& d, int l, int i);

// (sigma_1(B|i)^2 - sigma_2(B|i)) / sigma_1(B)^2 for the bad block B, the
// leading-order form of dq_exact as the bad eigenvalues shrink.
double dq_leading(const Diagonal& d, int l, int i);

}  // namespace cmaeig
