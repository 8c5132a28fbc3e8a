#include <algorithm>
#include <random>
#include <vector>

#include "cmaeig/algebra/poly.hpp"
#include "cmaeig/algebra/ratexpr.hpp"
#include "cmaeig/error.hpp"
#include "doctest.h"

using namespace cmaeig::algebra;
using namespace cmaeig::algebra::sym;

namespace {

mpq_class q(long n, long d = 1) {
    mpq_class r(n, d);
    r.canonicalize();
    return r;
}

PolyExpr random_poly(std::mt19937_64& gen, int terms, int maxdeg) {
    PolyExpr p;
    for (int t = 0; t < terms; ++t) {
        Exponents e{};
        for (int v = 0; v < kNumVars; ++v) e[v] = static_cast<int>(gen() % static_cast<unsigned>(maxdeg + 1)) * (gen() % 3 == 0);
        long num = static_cast<long>(gen() % 11) - 5;
        long den = 1 + static_cast<long>(gen() % 4);
        p += PolyExpr::monomial(q(num, den), e);
    }
    return p;
}

Point random_point(std::mt19937_64& gen) {
    Point p;
    for (auto& x : p) x = q(static_cast<long>(gen() % 13) - 6, 1 + static_cast<long>(gen() % 5));
    return p;
}

}  // namespace

TEST_SUITE("poly") {

TEST_CASE("ring examples") {
    CHECK((v(1) + v(2)) * (v(1) - v(2)) == v(1) * v(1) - v(2) * v(2));
    Point p{};
    p[0] = q(1, 2);
    p[4] = 3;
    CHECK((v(1) * v(1) + d(1)).eval(p) == q(13, 4));
    PolyExpr a = v(3) * d(2) + lam();
    CHECK((a - a).is_zero());
    CHECK((a - a).size() == 0);
}

TEST_CASE("no zero coefficients are stored") {
    PolyExpr a = v(1) + v(2);
    PolyExpr b = a - v(2);
    CHECK(b == v(1));
    CHECK(b.size() == 1);
    for (const auto& [k, c] : (a * a - v(1) * v(1)).terms()) CHECK(c != 0);
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937_64 gen(11);
    for (int t = 0; t < 40; ++t) {
        PolyExpr a = random_poly(gen, 6, 3), b = random_poly(gen, 5, 2), c = random_poly(gen, 4, 2);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK((a - b) + b == a);
        CHECK(a.pow(3) == a * a * a);
    }
}

TEST_CASE("eval is a ring homomorphism") {
    std::mt19937_64 gen(12);
    for (int t = 0; t < 40; ++t) {
        PolyExpr a = random_poly(gen, 6, 3), b = random_poly(gen, 6, 3);
        Point p = random_point(gen);
        CHECK((a * b).eval(p) == a.eval(p) * b.eval(p));
        CHECK((a + b).eval(p) == a.eval(p) + b.eval(p));
    }
}

TEST_CASE("substitute agrees with evaluation") {
    std::mt19937_64 gen(13);
    for (int t = 0; t < 30; ++t) {
        PolyExpr a = random_poly(gen, 6, 3), value = random_poly(gen, 3, 2);
        Point p = random_point(gen);
        Point p2 = p;
        p2[static_cast<int>(Var::d2)] = value.eval(p);
        CHECK(a.substitute(Var::d2, value).eval(p) == a.eval(p2));
    }
}

TEST_CASE("regime normalization examples") {
    Regime r3 = Regime::R3();
    PolyExpr s1 = v(1) * v(1) + v(3) * v(3), s2 = v(2) * v(2) + v(4) * v(4);
    CHECK(r3.normalize(lam() - ((d(1) + d(3)) * d(2) - s2 * (d(1) + d(3)) - s1 * d(2))).is_zero());
    CHECK(r3.normalize(d(4)).is_zero());
    CHECK(r3.normalize(d(3)) == d(3));
    Regime r2 = Regime::R2();
    CHECK(r2.normalize(d(3) * v(1) + d(4)).is_zero());
    CHECK(r2.normalize(lam()) == d(1) * d(2) - s1 * d(2) - s2 * d(1));
}

TEST_CASE("normalization is a ring homomorphism and matches evaluation on the constraint") {
    std::mt19937_64 gen(14);
    for (Regime r : {Regime::R2(), Regime::R3()}) {
        for (int t = 0; t < 30; ++t) {
            PolyExpr a = random_poly(gen, 5, 2), b = random_poly(gen, 5, 2);
            CHECK(r.normalize(a * b) == r.normalize(a) * r.normalize(b));
            Point p = random_point(gen);
            for (Var z : r.zeroed()) p[static_cast<int>(z)] = 0;
            p[static_cast<int>(Var::lam)] = r.lam_value().eval(p);
            CHECK(r.normalize(a).eval(p) == a.eval(p));
        }
    }
}

TEST_CASE("degree overflow is rejected") {
    PolyExpr x = v(1).pow(100);
    CHECK_THROWS_AS(x * x, cmaeig::InvalidArgument);
}

TEST_CASE("rational expressions evaluate consistently") {
    std::mt19937_64 gen(15);
    for (int t = 0; t < 30; ++t) {
        PolyExpr a = random_poly(gen, 4, 2), b = random_poly(gen, 3, 2) + 7;
        PolyExpr c = random_poly(gen, 4, 2), e = random_poly(gen, 3, 2) + d(1) * d(2) + 5;
        RatExpr x = RatExpr::quotient(a, b), y = RatExpr::quotient(c, e);
        Point p = random_point(gen);
        mpq_class be = b.eval(p), ee = e.eval(p), ce = c.eval(p);
        if (be == 0 || ee == 0) continue;
        mpq_class xv = a.eval(p) / be, yv = ce / ee;
        CHECK((x + y).eval(p) == xv + yv);
        CHECK((x - y).eval(p) == xv - yv);
        CHECK((x * y).eval(p) == xv * yv);
        if (ce != 0 && !c.is_zero()) CHECK((x / y).eval(p) == xv / yv);
    }
}

TEST_CASE("cross-multiplied equality") {
    RatExpr a = RatExpr::quotient(v(1) * d(1), d(1) * d(2));
    RatExpr b = RatExpr::quotient(v(1), d(2));
    CHECK(exactly_equal(a, b));
    CHECK_FALSE(exactly_equal(a, RatExpr::quotient(v(1), d(1))));
    // Scaling numerator and denominator together.
    RatExpr c = RatExpr::quotient(2 * (v(1) + v(2)), 4 * (d(1) + d(2)));
    RatExpr e = RatExpr::quotient(v(1) + v(2), 2 * d(1) + 2 * d(2));
    CHECK(exactly_equal(c, e));
    CHECK(exactly_equal(RatExpr::quotient(v(1), d(2)) - b, 0));
}

TEST_CASE("equivalence under a regime") {
    Regime r3 = Regime::R3();
    RatExpr a = RatExpr::quotient(lam(), d(2));
    PolyExpr s1 = v(1) * v(1) + v(3) * v(3), s2 = v(2) * v(2) + v(4) * v(4);
    RatExpr b = RatExpr::quotient((d(1) + d(3)) * d(2) - s2 * (d(1) + d(3)) - s1 * d(2), d(2));
    CHECK(equivalent(a, b, r3));
    CHECK_FALSE(exactly_equal(a, b));
    // A denominator that vanishes under the regime is an error, not a silent pass.
    CHECK_THROWS_AS(equivalent(RatExpr::quotient(1, d(4)), 0, r3), cmaeig::DomainError);
}

TEST_CASE("division by zero is rejected") {
    CHECK_THROWS_AS(RatExpr::quotient(v(1), PolyExpr()), cmaeig::DomainError);
    RatExpr x = RatExpr::quotient(1, d(1));
    Point p{};
    CHECK_THROWS_AS(x.eval(p), cmaeig::DomainError);
}

TEST_CASE("determinant matches exact elimination on constant matrices") {
    std::mt19937_64 gen(16);
    for (int n = 1; n <= 5; ++n) {
        RatMatrix m(n, n);
        std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                a[i][j] = q(static_cast<long>(gen() % 9) - 4, 1 + static_cast<long>(gen() % 3));
                m(i, j) = a[i][j];
            }
        // Leibniz formula as the oracle.
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        mpq_class expect = 0;
        do {
            int inv = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
            mpq_class prod = inv % 2 ? -1 : 1;
            for (int i = 0; i < n; ++i) prod *= a[i][perm[i]];
            expect += prod;
        } while (std::next_permutation(perm.begin(), perm.end()));
        Point p{};
        CHECK(determinant(m).eval(p) == expect);
    }
}

}
