#pragma once

// Rational expressions: a polynomial numerator over a factored denominator.
// Keeping the denominator as a product of atoms lets sums use an lcm instead
// of a full product, which keeps the matrix computations small.

#include <string>
#include <utility>
#include <vector>

#include "cmaeig/algebra/poly.hpp"

namespace cmaeig::algebra {

class RatExpr {
public:
    // Atom with a positive exponent. Atoms are non-constant and have leading
    // coefficient 1; single-variable atoms are plain variables.
    using Factor = std::pair<PolyExpr, int>;

    RatExpr() = default;
    RatExpr(int c) : num_(c) {}  // NOLINT
    RatExpr(const mpq_class& c) : num_(c) {}  // NOLINT
    RatExpr(PolyExpr p) : num_(std::move(p)) {}  // NOLINT

    static RatExpr quotient(const PolyExpr& num, const PolyExpr& den);

    const PolyExpr& num() const { return num_; }
    const std::vector<Factor>& den_factors() const { return den_; }
    PolyExpr den() const;

    bool is_zero() const { return num_.is_zero(); }

    RatExpr operator-() const;
    RatExpr& operator+=(const RatExpr& o);
    RatExpr& operator-=(const RatExpr& o) { return *this += -o; }
    RatExpr& operator*=(const RatExpr& o);
    RatExpr& operator/=(const RatExpr& o);

    friend RatExpr operator+(RatExpr a, const RatExpr& b) { return a += b; }
    friend RatExpr operator-(RatExpr a, const RatExpr& b) { return a -= b; }
    friend RatExpr operator*(RatExpr a, const RatExpr& b) { return a *= b; }
    friend RatExpr operator/(RatExpr a, const RatExpr& b) { return a /= b; }

    // Throws DomainError if the denominator vanishes at p.
    mpq_class eval(const Point& p) const;

    // Numerator and every atom reduced under the regime. Throws DomainError
    // if an atom reduces to zero.
    RatExpr normalized(const Regime& r) const;

    std::string to_string() const;

private:
    void divide_by(const PolyExpr& p, int exponent);
    PolyExpr num_;
    std::vector<Factor> den_;  // sorted by atom
};

// a - b is the zero rational function.
bool exactly_equal(const RatExpr& a, const RatExpr& b);

// a - b reduces to zero under the regime.
bool equivalent(const RatExpr& a, const RatExpr& b, const Regime& r);

// Numerator of a - b over the lcm of the denominators, optionally reduced.
PolyExpr difference_numerator(const RatExpr& a, const RatExpr& b, const Regime* r);

class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}
    static RatMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    RatExpr& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
    const RatExpr& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

    RatMatrix transpose() const;
    RatMatrix block(int r0, int c0, int nr, int nc) const;
    // Principal submatrix on the given indices.
    RatMatrix principal(const std::vector<int>& idx) const;
    RatMatrix permuted(const std::vector<int>& order) const { return principal(order); }

    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
    friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
    RatMatrix scaled(const RatExpr& s) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<RatExpr> data_;
};

// Cofactor expansion; intended for n <= 6.
RatExpr determinant(const RatMatrix& m);

// Leading principal minor of order k.
RatExpr leading_minor(const RatMatrix& m, int k);

}  // namespace cmaeig::algebra
