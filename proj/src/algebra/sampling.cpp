#include "cmaeig/algebra/sampling.hpp"

#include <random>
#include <sstream>

#include "cmaeig/algebra/catalog.hpp"
#include "cmaeig/error.hpp"

namespace cmaeig::algebra {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform over the rationals num/den, den in 1..8, lo <= num/den <= hi.
mpq_class draw_rational(std::mt19937_64& gen, const mpq_class& lo, const mpq_class& hi) {
    long den = 1 + static_cast<long>(gen() % 8);
    mpq_class qa = lo * den, qb = hi * den;
    mpz_class nlo, nhi;
    mpz_cdiv_q(nlo.get_mpz_t(), qa.get_num_mpz_t(), qa.get_den_mpz_t());
    mpz_fdiv_q(nhi.get_mpz_t(), qb.get_num_mpz_t(), qb.get_den_mpz_t());
    long span = mpz_class(nhi - nlo).get_si();
    long num = nlo.get_si() + static_cast<long>(gen() % static_cast<std::uint64_t>(span + 1));
    mpq_class out(num, den);
    out.canonicalize();
    return out;
}

mpq_class regime_lam(RegimeTag tag, const Point& p) {
    Regime r = tag == RegimeTag::R2 ? Regime::R2() : Regime::R3();
    return r.lam_value().eval(p);
}

mpq_class det(std::vector<std::vector<mpq_class>> m) {
    // Fraction-exact Gaussian elimination.
    int n = static_cast<int>(m.size());
    mpq_class result = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            result = -result;
        }
        result *= m[c][c];
        for (int r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            mpq_class f = m[r][c] / m[c][c];
            for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return result;
}

mpq_class leading(const std::vector<std::vector<mpq_class>>& m, int r0, int k) {
    std::vector<std::vector<mpq_class>> sub(static_cast<std::size_t>(k), std::vector<mpq_class>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub[i][j] = m[r0 + i][r0 + j];
    return det(sub);
}

}  // namespace

std::string AdmissibleSample::describe() const {
    std::ostringstream os;
    os << (regime == RegimeTag::R2 ? "R2" : "R3") << " {";
    for (int k = 0; k < kNumVars; ++k) {
        if (k) os << ", ";
        os << var_name(static_cast<Var>(k)) << "=" << point[k].get_str();
    }
    os << "}";
    return os.str();
}

AdmissibleSample make_sample(RegimeTag regime, const std::array<mpq_class, 4>& v, const std::array<mpq_class, 3>& d) {
    AdmissibleSample s;
    s.regime = regime;
    for (int k = 0; k < 4; ++k) s.point[k] = v[k];
    s.point[4] = d[0];
    s.point[5] = d[1];
    s.point[6] = regime == RegimeTag::R3 ? d[2] : mpq_class(0);
    s.point[7] = 0;
    s.point[8] = regime_lam(regime, s.point);
    return s;
}

AdmissibleSample draw_candidate(RegimeTag regime, std::uint64_t seed, std::uint64_t index) {
    std::uint64_t stream = splitmix(seed ^ splitmix(index + (regime == RegimeTag::R2 ? 0x100000000ULL : 0)));
    std::mt19937_64 gen(stream);
    std::array<mpq_class, 4> v;
    for (auto& x : v) x = draw_rational(gen, -2, 2);
    std::array<mpq_class, 3> d;
    for (auto& x : d) x = draw_rational(gen, mpq_class(1, 4), 4);
    return make_sample(regime, v, d);
}

bool is_admissible(const AdmissibleSample& s) {
    const Point& p = s.point;
    if (p[4] <= 0 || p[5] <= 0) return false;
    if (s.regime == RegimeTag::R3 && p[6] <= 0) return false;
    return p[8] > 0;
}

MinorValues evaluate_minors(const AdmissibleSample& s) {
    if (s.regime != RegimeTag::R3) throw InvalidArgument("minors are defined for the rank-3 regime");
    const FExprs f = fexprs();
    MinorValues out;
    out.F11 = f.F11.eval(s.point);
    out.F22 = f.F22.eval(s.point);
    if (out.F11 == 0 || out.F22 == 0) throw DomainError("F11 or F22 vanishes at the sample");

    static const RatMatrix A = build_matrix_A();
    std::vector<std::vector<mpq_class>> m(5, std::vector<mpq_class>(5));
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) m[i][j] = A(i, j).eval(s.point);

    // Column and row operations with the same multipliers as the symbolic reduction.
    auto combine = [&](int src, int dst, const mpq_class& c) {
        for (int i = 0; i < 5; ++i) m[i][dst] += c * m[i][src];
        for (int j = 0; j < 5; ++j) m[dst][j] += c * m[src][j];
    };
    combine(0, 3, -f.F12.eval(s.point) / out.F11);
    combine(1, 4, -f.F23.eval(s.point) / out.F11);

    for (int i = 0; i < 2; ++i)
        for (int j = 2; j < 5; ++j)
            if (m[i][j] != 0 || m[j][i] != 0) out.offblock_zero = false;

    out.P1_A1 = leading(m, 0, 1);
    out.P2_A1 = leading(m, 0, 2);
    out.P1_A2 = leading(m, 2, 1);
    out.P2_A2 = leading(m, 2, 2);
    out.P3_A2 = leading(m, 2, 3);
    for (int k = 1; k <= 5; ++k) out.reduced_leading[k - 1] = leading(m, 0, k);
    return out;
}

PositivityReport positivity_sample_suite(int count, std::uint64_t seed) {
    if (count < 1) throw InvalidArgument("sample count must be at least 1");
    PositivityReport rep;
    rep.requested = count;
    rep.quantities = {"F11>0", "F22>0", "P1(A1)>0", "P2(A1)>0", "P1(A2)>0", "P2(A2)>0", "P3(A2)>=0",
                      "offblock=0", "D1..D4>0", "D5>=0", "R2:F11>0", "R2:F22>0", "R2:quadratic coefficients>0"};

    auto flag = [&](const std::string& q, const AdmissibleSample& s, const mpq_class& value) {
        rep.violations.push_back({q, s.describe(), value.get_str()});
    };

    const std::uint64_t max_draws = static_cast<std::uint64_t>(count) * 100;
    std::uint64_t idx = 0;
    while (rep.accepted < count) {
        if (idx >= max_draws) throw ConvergenceError("too many rejected samples");
        AdmissibleSample s = draw_candidate(RegimeTag::R3, seed, idx++);
        if (!is_admissible(s)) {
            ++rep.rejected;
            continue;
        }
        ++rep.accepted;
        MinorValues mv = evaluate_minors(s);
        if (mv.F11 <= 0) flag("F11>0", s, mv.F11);
        if (mv.F22 <= 0) flag("F22>0", s, mv.F22);
        if (mv.P1_A1 <= 0) flag("P1(A1)>0", s, mv.P1_A1);
        if (mv.P2_A1 <= 0) flag("P2(A1)>0", s, mv.P2_A1);
        if (mv.P1_A2 <= 0) flag("P1(A2)>0", s, mv.P1_A2);
        if (mv.P2_A2 <= 0) flag("P2(A2)>0", s, mv.P2_A2);
        if (mv.P3_A2 < 0) flag("P3(A2)>=0", s, mv.P3_A2);
        if (!mv.offblock_zero) flag("offblock=0", s, 0);
        for (int k = 0; k < 4; ++k)
            if (mv.reduced_leading[k] <= 0) flag("D1..D4>0", s, mv.reduced_leading[k]);
        if (mv.reduced_leading[4] < 0) flag("D5>=0", s, mv.reduced_leading[4]);
    }

    const FExprs f = fexprs();
    idx = 0;
    while (rep.accepted_r2 < count) {
        if (idx >= max_draws) throw ConvergenceError("too many rejected samples");
        AdmissibleSample s = draw_candidate(RegimeTag::R2, seed, idx++);
        if (!is_admissible(s)) {
            ++rep.rejected_r2;
            continue;
        }
        ++rep.accepted_r2;
        const Point& p = s.point;
        mpq_class F11 = f.F11.eval(p), F22 = f.F22.eval(p), F23 = f.F23.eval(p);
        if (F11 <= 0) flag("R2:F11>0", s, F11);
        if (F22 <= 0) flag("R2:F22>0", s, F22);
        if (F11 > 0 && F22 > 0) {
            const mpq_class& lam = p[8];
            mpq_class c1 = 2 * lam / (p[4] * F22 * p[5]);
            mpq_class c2 = 2 * lam * (lam + F23 * F23) / (F11 * p[4] * F22 * p[5]);
            if (c1 <= 0) flag("R2:quadratic coefficients>0", s, c1);
            if (c2 <= 0) flag("R2:quadratic coefficients>0", s, c2);
        }
    }
    return rep;
}

}  // namespace cmaeig::algebra
