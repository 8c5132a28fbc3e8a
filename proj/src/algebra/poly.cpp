#include "cmaeig/algebra/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "cmaeig/error.hpp"

namespace cmaeig::algebra {

namespace {

constexpr int kBits = 7;
constexpr int kMaxExp = (1 << kBits) - 1;

std::array<int, kNumVars> max_degrees(const std::vector<PolyExpr::Term>& t) {
    std::array<int, kNumVars> out{};
    for (const auto& [k, c] : t)
        for (int v = 0; v < kNumVars; ++v) out[v] = std::max(out[v], PolyExpr::exponent(k, static_cast<Var>(v)));
    return out;
}

}  // namespace

std::string var_name(Var v) {
    static const char* names[kNumVars] = {"v1", "v2", "v3", "v4", "d1", "d2", "d3", "d4", "lam"};
    return names[static_cast<int>(v)];
}

PolyExpr::PolyExpr(int c) : PolyExpr(mpq_class(c)) {}

PolyExpr::PolyExpr(const mpq_class& c) {
    if (c != 0) terms_.emplace_back(0, c);
}

PolyExpr PolyExpr::var(Var v) {
    Exponents e{};
    e[static_cast<int>(v)] = 1;
    return monomial(1, e);
}

PolyExpr PolyExpr::monomial(const mpq_class& c, const Exponents& e) {
    PolyExpr p;
    if (c != 0) p.terms_.emplace_back(pack(e), c);
    return p;
}

PolyExpr::Key PolyExpr::pack(const Exponents& e) {
    Key k = 0;
    for (int v = 0; v < kNumVars; ++v) {
        if (e[v] < 0 || e[v] > kMaxExp) throw InvalidArgument("exponent out of range");
        k |= static_cast<Key>(e[v]) << (kBits * v);
    }
    return k;
}

Exponents PolyExpr::unpack(Key k) {
    Exponents e{};
    for (int v = 0; v < kNumVars; ++v) e[v] = exponent(k, static_cast<Var>(v));
    return e;
}

bool PolyExpr::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0); }

int PolyExpr::degree(Var v) const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, exponent(k, v));
    return d;
}

int PolyExpr::total_degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) {
        int s = 0;
        for (int v = 0; v < kNumVars; ++v) s += exponent(k, static_cast<Var>(v));
        d = std::max(d, s);
    }
    return d;
}

PolyExpr PolyExpr::from_sorted(std::vector<Term> terms) {
    PolyExpr p;
    p.terms_ = std::move(terms);
    return p;
}

PolyExpr PolyExpr::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return t.second == 0; });
    return from_sorted(std::move(out));
}

PolyExpr PolyExpr::operator-() const {
    PolyExpr p = *this;
    for (auto& t : p.terms_) t.second = -t.second;
    return p;
}

PolyExpr& PolyExpr::operator+=(const PolyExpr& o) {
    if (o.terms_.empty()) return *this;
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin(), ae = terms_.end();
    auto b = o.terms_.begin(), be = o.terms_.end();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->first < b->first)) {
            out.push_back(std::move(*a++));
        } else if (a == ae || b->first < a->first) {
            out.push_back(*b++);
        } else {
            mpq_class s = a->second + b->second;
            if (s != 0) out.emplace_back(a->first, std::move(s));
            ++a;
            ++b;
        }
    }
    terms_ = std::move(out);
    return *this;
}

PolyExpr& PolyExpr::operator-=(const PolyExpr& o) { return *this += -o; }

PolyExpr& PolyExpr::operator*=(const mpq_class& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.second *= c;
    return *this;
}

PolyExpr operator*(const PolyExpr& a, const PolyExpr& b) {
    if (a.terms_.empty() || b.terms_.empty()) return {};
    auto da = max_degrees(a.terms_), db = max_degrees(b.terms_);
    for (int v = 0; v < kNumVars; ++v)
        if (da[v] + db[v] > kMaxExp) throw InvalidArgument("polynomial degree overflow");

    if (a.terms_.size() == 1 || b.terms_.size() == 1) {
        const PolyExpr& mono = a.terms_.size() == 1 ? a : b;
        const PolyExpr& other = a.terms_.size() == 1 ? b : a;
        // Adding a fixed key preserves order.
        std::vector<PolyExpr::Term> out;
        out.reserve(other.terms_.size());
        for (const auto& [k, c] : other.terms_) out.emplace_back(k + mono.terms_[0].first, c * mono.terms_[0].second);
        return PolyExpr::from_sorted(std::move(out));
    }

    std::unordered_map<PolyExpr::Key, mpq_class> acc;
    acc.reserve(a.terms_.size() * b.terms_.size() / 2 + 1);
    mpq_class prod;
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            mpq_mul(prod.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
            auto [it, inserted] = acc.try_emplace(ka + kb, prod);
            if (!inserted) it->second += prod;
        }
    }
    std::vector<PolyExpr::Term> out;
    out.reserve(acc.size());
    for (auto& [k, c] : acc)
        if (c != 0) out.emplace_back(k, std::move(c));
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return PolyExpr::from_sorted(std::move(out));
}

bool operator==(const PolyExpr& a, const PolyExpr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].first != b.terms_[i].first || a.terms_[i].second != b.terms_[i].second) return false;
    return true;
}

bool operator<(const PolyExpr& a, const PolyExpr& b) {
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size();
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].first != b.terms_[i].first) return a.terms_[i].first < b.terms_[i].first;
        int c = cmp(a.terms_[i].second, b.terms_[i].second);
        if (c != 0) return c < 0;
    }
    return false;
}

PolyExpr PolyExpr::pow(int n) const {
    if (n < 0) throw InvalidArgument("negative power");
    PolyExpr result(1), base = *this;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

PolyExpr PolyExpr::substitute(Var v, const PolyExpr& value) const {
    // Group by the exponent of v, then expand with cached powers.
    std::map<int, std::vector<Term>> groups;
    const Key mask = ~(static_cast<Key>(kMaxExp) << (kBits * static_cast<int>(v)));
    for (const auto& [k, c] : terms_) groups[exponent(k, v)].emplace_back(k & mask, c);
    PolyExpr out;
    PolyExpr power(1);
    int at = 0;
    for (auto& [e, ts] : groups) {
        while (at < e) {
            power = power * value;
            ++at;
        }
        out += from_terms(std::move(ts)) * power;
    }
    return out;
}

mpq_class PolyExpr::eval(const Point& p) const {
    std::array<std::vector<mpq_class>, kNumVars> powers;
    auto deg = max_degrees(terms_);
    for (int v = 0; v < kNumVars; ++v) {
        powers[v].resize(deg[v] + 1);
        powers[v][0] = 1;
        for (int e = 1; e <= deg[v]; ++e) powers[v][e] = powers[v][e - 1] * p[v];
    }
    mpq_class total = 0, term;
    for (const auto& [k, c] : terms_) {
        term = c;
        for (int v = 0; v < kNumVars; ++v) {
            int e = exponent(k, static_cast<Var>(v));
            if (e) term *= powers[v][e];
        }
        total += term;
    }
    return total;
}

const mpq_class& PolyExpr::leading_coefficient() const {
    if (terms_.empty()) throw InvalidArgument("zero polynomial has no leading coefficient");
    return terms_.back().second;
}

std::string PolyExpr::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [k, c] = *it;
        mpq_class mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool unit = (mag == 1) && k != 0;
        if (!unit) os << mag.get_str();
        bool need_star = !unit;
        for (int v = 0; v < kNumVars; ++v) {
            int e = exponent(k, static_cast<Var>(v));
            if (!e) continue;
            if (need_star) os << "*";
            os << var_name(static_cast<Var>(v));
            if (e > 1) os << "^" << e;
            need_star = true;
        }
    }
    return os.str();
}

Regime::Regime(RegimeTag tag, PolyExpr lam_value, std::vector<Var> zeroed)
    : tag_(tag), lam_value_(std::move(lam_value)), zeroed_(std::move(zeroed)) {}

namespace {

PolyExpr s1_poly() { return sym::v(1) * sym::v(1) + sym::v(3) * sym::v(3); }
PolyExpr s2_poly() { return sym::v(2) * sym::v(2) + sym::v(4) * sym::v(4); }

}  // namespace

// lam from the reduced equation F = 0 with the bad diagonal entries dropped.
Regime Regime::R2() {
    using namespace sym;
    PolyExpr lam = d(1) * d(2) - s1_poly() * d(2) - s2_poly() * d(1);
    return Regime(RegimeTag::R2, lam, {Var::d3, Var::d4});
}

Regime Regime::R3() {
    using namespace sym;
    PolyExpr a = d(1) + d(3);
    PolyExpr lam = a * d(2) - s2_poly() * a - s1_poly() * d(2);
    return Regime(RegimeTag::R3, lam, {Var::d4});
}

PolyExpr Regime::normalize(const PolyExpr& p) const {
    std::map<int, std::vector<PolyExpr::Term>> buckets;
    const PolyExpr::Key lam_mask = ~(static_cast<PolyExpr::Key>(kMaxExp) << (kBits * static_cast<int>(Var::lam)));
    for (const auto& [k, c] : p.terms()) {
        bool killed = false;
        for (Var z : zeroed_)
            if (PolyExpr::exponent(k, z)) killed = true;
        if (killed) continue;
        buckets[PolyExpr::exponent(k, Var::lam)].emplace_back(k & lam_mask, c);
    }
    PolyExpr out;
    PolyExpr power(1);
    int at = 0;
    for (auto& [e, ts] : buckets) {
        while (at < e) {
            power = power * lam_value_;
            ++at;
        }
        out += PolyExpr::from_terms(std::move(ts)) * power;
    }
    return out;
}

}  // namespace cmaeig::algebra
