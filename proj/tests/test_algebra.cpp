#include <chrono>
#include <random>
#include <set>

#include "cmaeig/algebra/catalog.hpp"
#include "cmaeig/algebra/sampling.hpp"
#include "cmaeig/cmaop.hpp"
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

const CheckResult* find(const std::vector<CheckResult>& all, const std::string& tag) {
    for (const auto& c : all)
        if (c.tag == tag) return &c;
    return nullptr;
}

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("fexprs examples") {
    FExprs f = fexprs();
    CHECK((f.F12 * f.F12 + f.F23 * f.F23 - f.s1 * f.s2).is_zero());
    CHECK(Regime::R2().normalize(f.F11 * f.F22 - lam() - f.F12 * f.F12 - f.F23 * f.F23).is_zero());
    CHECK(Regime::R3().normalize(f.F22 * d(2) - (f.s2 * (d(1) + d(3)) + lam())).is_zero());
    CHECK(Regime::R3().normalize(f.F11 * f.F22 - f.F12 * f.F12 - f.F23 * f.F23 - lam()).is_zero());
}

TEST_CASE("coefficient matrix agrees with the numerical operator at diagonal states") {
    FExprs f = fexprs();
    std::mt19937_64 gen(3);
    for (int t = 0; t < 50; ++t) {
        Point p;
        cmaeig::FullState s;
        for (int k = 0; k < 4; ++k) {
            p[k] = q(static_cast<long>(gen() % 9) - 4, 2);
            s.grad[k] = p[k].get_d();
        }
        for (int k = 0; k < 4; ++k) {
            p[4 + k] = q(1 + static_cast<long>(gen() % 8), 2);
            s.hess.set(k, k, p[4 + k].get_d());
        }
        p[8] = 1;
        cmaeig::SymMat4 Fij = cmaeig::F_ij(s);
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j) CHECK(f.F(i, j).eval(p).get_d() == doctest::Approx(Fij(i - 1, j - 1)).epsilon(1e-14));
    }
}

TEST_CASE("full catalog passes") {
    auto t0 = std::chrono::steady_clock::now();
    auto all = run_identity_catalog();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(all.size() >= 20);
    std::set<std::string> tags;
    for (const auto& c : all) {
        INFO(c.tag << ": " << c.detail);
        CHECK(c.passed);
        tags.insert(c.tag);
    }
    CHECK(tags.size() == all.size());
    CHECK(secs < 10.0);
}

TEST_CASE("rank-2 quadratic form") {
    StepOutcome ok = verify_claim1_quadratic();
    CHECK(ok.ok);
    StepOutcome bad = verify_claim1_quadratic(Mutation::flip_F12);
    CHECK_FALSE(bad.ok);
    CHECK(bad.failing == "rank2.form.expansion");
}

TEST_CASE("matrix A entries") {
    FExprs f = fexprs();
    RatMatrix A = build_matrix_A();
    RatExpr e11 = RatExpr::quotient(f.F11 * (f.s2 * d(3) + lam()), f.F22 * d(2) * d(1));
    CHECK(exactly_equal(A(0, 0), e11));
    CHECK(A(0, 2).is_zero());
    CHECK(A(1, 2).is_zero());
    CHECK(exactly_equal(A(2, 3), RatExpr::quotient(f.F23, d(1))));
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(exactly_equal(A(i, j), A(j, i)));
}

TEST_CASE("coefficient bullets and their mutation") {
    StepOutcome ok = verify_coefficient_bullets();
    CHECK(ok.ok);
    StepOutcome bad = verify_coefficient_bullets(Mutation::drop_v124_constant);
    CHECK_FALSE(bad.ok);
    CHECK(bad.failing == "rank3.coef.v124^2");
}

TEST_CASE("block reduction") {
    StepOutcome r = verify_block_reduction();
    CHECK(r.ok);
    // The (4,4) entry after reduction.
    FExprs f = fexprs();
    RatMatrix S = block_reduction_transform();
    RatMatrix Ap = S.transpose() * build_matrix_A() * S;
    RatExpr expect = RatExpr::quotient((f.F11 * f.F22 - f.F12 * f.F12) * (f.s2 * d(3) + lam()),
                                       f.F11 * d(1) * f.F22 * d(2));
    CHECK(equivalent(Ap(3, 3), expect, Regime::R3()));
    CHECK(equivalent(Ap(0, 3), 0, Regime::R3()));
}

TEST_CASE("principal minors of A1 and A2") {
    CHECK(verify_claim2().ok);
    StepOutcome c3 = verify_claim3();
    CHECK(c3.ok);
    StepOutcome bad = verify_claim3(Mutation::F33_as_F22);
    CHECK_FALSE(bad.ok);
    CHECK(bad.failing == "rank3.A2.product");
    auto all = c3.checks;
    const CheckResult* nullity = find(all, "rank3.A2.nullity");
    REQUIRE(nullity);
    CHECK(nullity->regime == "exact");
}

TEST_CASE("mutation names round trip") {
    for (Mutation m : {Mutation::none, Mutation::flip_F12, Mutation::drop_v124_constant, Mutation::F33_as_F22})
        CHECK(parse_mutation(mutation_name(m)) == m);
    CHECK_THROWS_AS(parse_mutation("bogus"), cmaeig::InvalidArgument);
}

TEST_CASE("worked sample") {
    AdmissibleSample s = make_sample(RegimeTag::R3, {q(1, 2), q(1, 2), 0, 0}, {2, 2, 2});
    CHECK(s.point[8] == q(13, 2));
    CHECK(is_admissible(s));
    MinorValues m = evaluate_minors(s);
    // Hand-evaluated minor formulas: s1 = s2 = 1/4, F11 = 7/4, F22 = 15/4, F12 = 1/4, F23 = 0.
    mpq_class lam = q(13, 2), s2 = q(1, 4), F11 = q(7, 4), F22 = q(15, 4), d1 = 2, d2 = 2, d3 = 2;
    CHECK(m.F11 == F11);
    CHECK(m.F22 == F22);
    mpq_class P1A1 = F11 * (s2 * d3 + lam) / (F22 * d2 * d1);
    CHECK(m.P1_A1 == P1A1);
    mpq_class P2A1 = lam * F11 * F11 * (s2 * (d1 + d3) + lam) / (F22 * d2 * F22 * d2 * d1 * d3);
    CHECK(m.P2_A1 == P2A1);
    // F23 = 0 makes P2(A2) collapse to lam F22 d2 F33 d3/(F11 d1 F22 d2 d1 d3) + lam^2/(F22 d2 d1 d3).
    mpq_class P2A2 = lam * F22 * d2 * F11 * d3 / (F11 * d1 * F22 * d2 * d1 * d3) + lam * lam / (F22 * d2 * d1 * d3);
    CHECK(m.P2_A2 == P2A2);
    CHECK(m.P1_A1 > 0);
    CHECK(m.P2_A1 > 0);
    CHECK(m.P1_A2 > 0);
    CHECK(m.P2_A2 > 0);
    CHECK(m.P3_A2 >= 0);
    mpq_class D = F11 * d1 * F22 * d2 * F22 * d2 * F11 * d3;
    CHECK(m.P3_A2 >= lam * lam * F11 * F22 * s2 * s2 / D);
    CHECK(m.offblock_zero);
}

TEST_CASE("vanishing v2, v4 leaves P3(A2) nonnegative") {
    AdmissibleSample s = make_sample(RegimeTag::R3, {q(1, 3), 0, q(-1, 2), 0}, {q(3, 2), 2, q(5, 4)});
    REQUIRE(is_admissible(s));
    MinorValues m = evaluate_minors(s);
    CHECK(m.P3_A2 >= 0);
}

TEST_CASE("P2(A1) tends to zero with lam") {
    // Along v = (0, t, 0, 0), d = (1, 1, 1): lam = 2 - 2 t^2.
    mpq_class prev = -1;
    for (long k = 1; k <= 6; ++k) {
        mpq_class t = 1 - mpq_class(1, 1L << (2 * k));
        AdmissibleSample s = make_sample(RegimeTag::R3, {0, t, 0, 0}, {1, 1, 1});
        REQUIRE(is_admissible(s));
        mpq_class p2 = evaluate_minors(s).P2_A1;
        CHECK(p2 > 0);
        if (prev > 0) CHECK(p2 < prev);
        prev = p2;
    }
    CHECK(prev < mpq_class(1, 100));
}

TEST_CASE("positivity sampling, seed 42") {
    PositivityReport r = positivity_sample_suite(1000, 42);
    CHECK(r.accepted == 1000);
    CHECK(r.accepted_r2 == 1000);
    CHECK(r.rejected > 0);
    CHECK(r.ok());
    PositivityReport again = positivity_sample_suite(1000, 42);
    CHECK(again.rejected == r.rejected);
}

TEST_CASE("positivity sampling, other seeds") {
    for (std::uint64_t seed : {1ULL, 7ULL, 2024ULL}) {
        PositivityReport r = positivity_sample_suite(200, seed);
        CHECK(r.ok());
    }
}

TEST_CASE("candidates stay in the sampling box") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        AdmissibleSample s = draw_candidate(RegimeTag::R3, 5, i);
        for (int k = 0; k < 4; ++k) {
            CHECK(abs(s.point[k]) <= 2);
            CHECK(s.point[k].get_den() <= 8);
        }
        for (int k = 4; k < 7; ++k) {
            CHECK(s.point[k] >= q(1, 4));
            CHECK(s.point[k] <= 4);
        }
        CHECK(s.point[7] == 0);
    }
}

}
