#include "cmaeig/algebra/ratexpr.hpp"

#include <algorithm>
#include <sstream>

#include "cmaeig/error.hpp"

namespace cmaeig::algebra {

namespace {

using Factor = RatExpr::Factor;

void add_factor(std::vector<Factor>& den, const PolyExpr& atom, int e) {
    auto it = std::lower_bound(den.begin(), den.end(), atom,
                               [](const Factor& f, const PolyExpr& a) { return f.first < a; });
    if (it != den.end() && it->first == atom)
        it->second += e;
    else
        den.insert(it, {atom, e});
}

int exponent_of(const std::vector<Factor>& den, const PolyExpr& atom) {
    auto it = std::lower_bound(den.begin(), den.end(), atom,
                               [](const Factor& f, const PolyExpr& a) { return f.first < a; });
    return (it != den.end() && it->first == atom) ? it->second : 0;
}

std::vector<Factor> lcm(const std::vector<Factor>& a, const std::vector<Factor>& b) {
    std::vector<Factor> out = a;
    for (const auto& [atom, e] : b) {
        int have = exponent_of(out, atom);
        if (e > have) add_factor(out, atom, e - have);
    }
    return out;
}

// num * (L / den) where den divides L.
PolyExpr lift(const PolyExpr& num, const std::vector<Factor>& den, const std::vector<Factor>& L,
              const Regime* r) {
    PolyExpr out = r ? r->normalize(num) : num;
    for (const auto& [atom, e] : L) {
        int missing = e - exponent_of(den, atom);
        if (missing <= 0) continue;
        PolyExpr a = r ? r->normalize(atom) : atom;
        out = out * a.pow(missing);
    }
    return out;
}

}  // namespace

RatExpr RatExpr::quotient(const PolyExpr& num, const PolyExpr& den) {
    RatExpr out(num);
    out.divide_by(den, 1);
    return out;
}

void RatExpr::divide_by(const PolyExpr& p, int exponent) {
    if (p.is_zero()) throw DomainError("division by the zero polynomial");
    // Split off the monomial content as single-variable atoms.
    Exponents content{};
    bool first = true;
    for (const auto& [k, c] : p.terms()) {
        Exponents e = PolyExpr::unpack(k);
        for (int v = 0; v < kNumVars; ++v) content[v] = first ? e[v] : std::min(content[v], e[v]);
        first = false;
    }
    PolyExpr rest;
    if (p.size() == 1) {
        rest = PolyExpr(p.terms()[0].second);
    } else {
        std::vector<PolyExpr::Term> ts;
        PolyExpr::Key ck = PolyExpr::pack(content);
        for (const auto& [k, c] : p.terms()) ts.emplace_back(k - ck, c);
        rest = PolyExpr::from_terms(std::move(ts));
    }
    for (int v = 0; v < kNumVars; ++v)
        if (content[v] > 0) add_factor(den_, PolyExpr::var(static_cast<Var>(v)), content[v] * exponent);
    mpq_class lc = rest.leading_coefficient();
    mpq_class scale = 1;
    for (int i = 0; i < exponent; ++i) scale *= lc;
    num_ *= mpq_class(1) / scale;
    if (!rest.is_constant()) {
        rest *= mpq_class(1) / lc;
        add_factor(den_, rest, exponent);
    }
}

PolyExpr RatExpr::den() const {
    PolyExpr out(1);
    for (const auto& [atom, e] : den_) out = out * atom.pow(e);
    return out;
}

RatExpr RatExpr::operator-() const {
    RatExpr out = *this;
    out.num_ = -out.num_;
    return out;
}

RatExpr& RatExpr::operator+=(const RatExpr& o) {
    if (o.num_.is_zero()) return *this;
    if (num_.is_zero()) return *this = o;
    if (den_ == o.den_) {
        num_ += o.num_;
    } else {
        auto L = lcm(den_, o.den_);
        num_ = lift(num_, den_, L, nullptr) + lift(o.num_, o.den_, L, nullptr);
        den_ = std::move(L);
    }
    if (num_.is_zero()) den_.clear();
    return *this;
}

RatExpr& RatExpr::operator*=(const RatExpr& o) {
    if (num_.is_zero() || o.num_.is_zero()) {
        *this = RatExpr();
        return *this;
    }
    num_ = num_ * o.num_;
    for (const auto& [atom, e] : o.den_) add_factor(den_, atom, e);
    return *this;
}

RatExpr& RatExpr::operator/=(const RatExpr& o) {
    if (o.num_.is_zero()) throw DomainError("division by zero rational expression");
    if (num_.is_zero()) return *this;
    num_ = num_ * o.den();
    divide_by(o.num_, 1);
    return *this;
}

mpq_class RatExpr::eval(const Point& p) const {
    mpq_class d = 1;
    for (const auto& [atom, e] : den_) {
        mpq_class a = atom.eval(p);
        if (a == 0) throw DomainError("denominator vanishes at evaluation point");
        for (int i = 0; i < e; ++i) d *= a;
    }
    return num_.eval(p) / d;
}

RatExpr RatExpr::normalized(const Regime& r) const {
    RatExpr out(r.normalize(num_));
    if (out.num_.is_zero()) {
        for (const auto& [atom, e] : den_)
            if (r.normalize(atom).is_zero()) throw DomainError("denominator atom vanishes under " + r.name());
        return out;
    }
    for (const auto& [atom, e] : den_) {
        PolyExpr a = r.normalize(atom);
        if (a.is_zero()) throw DomainError("denominator atom vanishes under " + r.name());
        out.divide_by(a, e);
    }
    return out;
}

std::string RatExpr::to_string() const {
    std::ostringstream os;
    os << "(" << num_.to_string() << ")";
    if (!den_.empty()) {
        os << " / (";
        bool first = true;
        for (const auto& [atom, e] : den_) {
            if (!first) os << " * ";
            first = false;
            os << "(" << atom.to_string() << ")";
            if (e > 1) os << "^" << e;
        }
        os << ")";
    }
    return os.str();
}

PolyExpr difference_numerator(const RatExpr& a, const RatExpr& b, const Regime* r) {
    if (r) {
        for (const auto* x : {&a, &b})
            for (const auto& [atom, e] : x->den_factors())
                if (r->normalize(atom).is_zero()) throw DomainError("denominator atom vanishes under " + r->name());
    }
    auto L = lcm(a.den_factors(), b.den_factors());
    return lift(a.num(), a.den_factors(), L, r) - lift(b.num(), b.den_factors(), L, r);
}

bool exactly_equal(const RatExpr& a, const RatExpr& b) { return difference_numerator(a, b, nullptr).is_zero(); }

bool equivalent(const RatExpr& a, const RatExpr& b, const Regime& r) {
    return difference_numerator(a, b, &r).is_zero();
}

RatMatrix RatMatrix::identity(int n) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RatMatrix RatMatrix::block(int r0, int c0, int nr, int nc) const {
    RatMatrix b(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

RatMatrix RatMatrix::principal(const std::vector<int>& idx) const {
    int n = static_cast<int>(idx.size());
    RatMatrix b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = (*this)(idx[i], idx[j]);
    return b;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("matrix shape mismatch");
    RatMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            RatExpr s;
            for (int k = 0; k < a.cols(); ++k)
                if (!a(i, k).is_zero() && !b(k, j).is_zero()) s += a(i, k) * b(k, j);
            c(i, j) = std::move(s);
        }
    return c;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("matrix shape mismatch");
    RatMatrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

RatMatrix RatMatrix::scaled(const RatExpr& s) const {
    RatMatrix c = *this;
    for (auto& x : c.data_) x = x * s;
    return c;
}

RatExpr determinant(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw InvalidArgument("determinant of a non-square matrix");
    int n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    RatExpr total;
    std::vector<int> rows(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) rows[static_cast<std::size_t>(i - 1)] = i;
    for (int c = 0; c < n; ++c) {
        if (m(0, c).is_zero()) continue;
        RatMatrix minor(n - 1, n - 1);
        for (int i = 0; i < n - 1; ++i) {
            int cc = 0;
            for (int j = 0; j < n; ++j) {
                if (j == c) continue;
                minor(i, cc++) = m(rows[static_cast<std::size_t>(i)], j);
            }
        }
        RatExpr term = m(0, c) * determinant(minor);
        if (c % 2) total -= term;
        else total += term;
    }
    return total;
}

RatExpr leading_minor(const RatMatrix& m, int k) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    return determinant(m.principal(idx));
}

}  // namespace cmaeig::algebra
