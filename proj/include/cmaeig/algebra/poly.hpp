#pragma once

// Sparse multivariate polynomials with exact rational coefficients over the
// fixed variable universe (v1, v2, v3, v4, d1, d2, d3, d4, lam). d_i stands
// for the diagonal Hessian entry v_ii.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cmaeig::algebra {

enum class Var : int { v1 = 0, v2, v3, v4, d1, d2, d3, d4, lam };

inline constexpr int kNumVars = 9;

using Point = std::array<mpq_class, kNumVars>;
using Exponents = std::array<int, kNumVars>;

class PolyExpr {
public:
    using Key = std::uint64_t;
    using Term = std::pair<Key, mpq_class>;

    PolyExpr() = default;
    PolyExpr(int c);  // NOLINT: constants convert implicitly
    PolyExpr(const mpq_class& c);  // NOLINT

    static PolyExpr var(Var v);
    static PolyExpr monomial(const mpq_class& c, const Exponents& e);
    // Sorts and merges; zero coefficients are dropped.
    static PolyExpr from_terms(std::vector<Term> terms);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::size_t size() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    static int exponent(Key k, Var v) { return static_cast<int>((k >> (7 * static_cast<int>(v))) & 127u); }
    static Exponents unpack(Key k);
    static Key pack(const Exponents& e);

    int degree(Var v) const;
    int total_degree() const;

    PolyExpr operator-() const;
    PolyExpr& operator+=(const PolyExpr& o);
    PolyExpr& operator-=(const PolyExpr& o);
    PolyExpr& operator*=(const mpq_class& c);

    friend PolyExpr operator+(PolyExpr a, const PolyExpr& b) { return a += b; }
    friend PolyExpr operator-(PolyExpr a, const PolyExpr& b) { return a -= b; }
    friend PolyExpr operator*(const PolyExpr& a, const PolyExpr& b);

    friend bool operator==(const PolyExpr& a, const PolyExpr& b);
    friend bool operator!=(const PolyExpr& a, const PolyExpr& b) { return !(a == b); }
    // Arbitrary but total order, used to key denominator factors.
    friend bool operator<(const PolyExpr& a, const PolyExpr& b);

    PolyExpr pow(int n) const;

    // Replace one variable by a polynomial.
    PolyExpr substitute(Var v, const PolyExpr& value) const;

    mpq_class eval(const Point& p) const;

    // Coefficient of the leading (largest key) term.
    const mpq_class& leading_coefficient() const;

    std::string to_string() const;

private:
    static PolyExpr from_sorted(std::vector<Term> terms);
    std::vector<Term> terms_;  // sorted by key, no zero coefficients
};

// Convenience symbols.
namespace sym {
inline PolyExpr v(int i) { return PolyExpr::var(static_cast<Var>(i - 1)); }
inline PolyExpr d(int i) { return PolyExpr::var(static_cast<Var>(3 + i)); }
inline PolyExpr lam() { return PolyExpr::var(Var::lam); }
}  // namespace sym

enum class RegimeTag { R2, R3 };

// Realizes "equal modulo phi" as exact substitution: the bad diagonal entries
// vanish and lam takes the value forced by the equation.
class Regime {
public:
    static Regime R2();
    static Regime R3();

    RegimeTag tag() const { return tag_; }
    std::string name() const { return tag_ == RegimeTag::R2 ? "R2" : "R3"; }
    const PolyExpr& lam_value() const { return lam_value_; }
    const std::vector<Var>& zeroed() const { return zeroed_; }

    PolyExpr normalize(const PolyExpr& p) const;

private:
    Regime(RegimeTag tag, PolyExpr lam_value, std::vector<Var> zeroed);
    RegimeTag tag_;
    PolyExpr lam_value_;
    std::vector<Var> zeroed_;
};

inline PolyExpr normalize(const PolyExpr& p, const Regime& r) { return r.normalize(p); }

std::string var_name(Var v);

}  // namespace cmaeig::algebra
