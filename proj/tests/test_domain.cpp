#include <cmath>
#include <numbers>
#include <vector>

#include "cmaeig/domain.hpp"
#include "cmaeig/error.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cmaeig::domain;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double G(double x, double y, double p, double mu) {
    return std::pow(x, p) + std::pow(y, p) + mu * std::pow(x * x + y * y, p / 2.0);
}

// Dense polyline of the implicit superellipse boundary, parametrized by polar angle.
std::vector<Point2> implicit_boundary(double R, double p, double mu, int n) {
    std::vector<Point2> pts;
    for (int i = 0; i <= n; ++i) {
        double phi = kHalfPi * i / n;
        double c = std::cos(phi), s = std::sin(phi);
        double rho = std::pow((1.0 + mu) * std::pow(R, p) / (std::pow(c, p) + std::pow(s, p) + mu), 1.0 / p);
        pts.push_back({rho * c, rho * s});
    }
    return pts;
}

double nearest(const std::vector<Point2>& pts, double x, double y) {
    double best = 1e300;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double ax = pts[i][0], ay = pts[i][1], bx = pts[i + 1][0], by = pts[i + 1][1];
        double dx = bx - ax, dy = by - ay;
        double s = std::clamp(((x - ax) * dx + (y - ay) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
        best = std::min(best, std::hypot(x - ax - s * dx, y - ay - s * dy));
    }
    return best;
}

}  // namespace

TEST_SUITE("domain") {

TEST_CASE("ball examples") {
    ReinhardtProfile b = profile_ball(1.0);
    CHECK(b.support(std::numbers::pi / 4) == doctest::Approx(1.0));
    CHECK(b.contains(0.5, 0.5));
    CHECK_FALSE(b.contains(1.1, 0.0));
    CHECK(boundary_distance(b, {0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(std::fabs(boundary_distance(b, {1.0, 0.0})) <= 1e-12);
    CHECK(std::fabs(boundary_distance(b, {0.6, 0.8})) <= 1e-12);
    CHECK(boundary_distance(b, {0.3, 0.4}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(boundary_distance(b, {1.2, 1.6}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(b.boundary_r1_at(0.6) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(b.boundary_r2_at(0.28) == doctest::Approx(0.96).epsilon(1e-12));
    CHECK(b.radial_extent(0.3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.gauge(0.3, 0.4) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b.inradius() == 1.0);
    CHECK_THROWS_AS(profile_ball(0.0), cmaeig::DomainError);
    CHECK_THROWS_AS(profile_ball(-2.0), cmaeig::DomainError);
}

TEST_CASE("superellipse with p = 2 is the ball") {
    ReinhardtProfile a = profile_superellipse(1.3, 2.0);
    ReinhardtProfile b = profile_ball(1.3);
    for (std::size_t k = 0; k < a.samples().size(); ++k) {
        CHECK(std::fabs(a.samples()[k].h - b.samples()[k].h) <= 1e-12);
        CHECK(std::fabs(a.samples()[k].rho - b.samples()[k].rho) <= 1e-12);
        CHECK(std::fabs(a.samples()[k].hp) <= 1e-12);
    }
}

TEST_CASE("superellipse examples and implicit-equation oracle") {
    const double mu = 0.1;
    ReinhardtProfile s = profile_superellipse(1.0, 4.0, mu);
    CHECK(s.contains(0.9, 0.5));
    CHECK(G(0.9, 0.5, 4.0, mu) <= 1.0 + mu);
    CHECK(s.support(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.support(kHalfPi) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.strictly_convex());
    // Boundary points lie on the level set.
    for (int i = 0; i <= 50; ++i) {
        Point2 x = s.boundary_point(kHalfPi * i / 50.0);
        CHECK(G(x[0], x[1], 4.0, mu) == doctest::Approx(1.0 + mu).epsilon(1e-10));
    }
    // Membership agrees with the implicit inequality away from the boundary.
    testsupport::Rng rng(5);
    for (int t = 0; t < 500; ++t) {
        double x = rng.uniform(0.0, 1.2), y = rng.uniform(0.0, 1.2);
        double g = G(x, y, 4.0, mu) - (1.0 + mu);
        if (std::fabs(g) < 1e-6) continue;
        CHECK(s.contains(x, y) == (g < 0.0));
    }
    CHECK_THROWS_AS(profile_superellipse(1.0, 1.5), cmaeig::DomainError);
    CHECK_THROWS_AS(profile_superellipse(1.0, 4.0, 0.0), cmaeig::DomainError);
}

TEST_CASE("support function matches a brute-force maximum over boundary points") {
    ReinhardtProfile s = profile_superellipse(1.0, 4.0, 0.1);
    auto pts = implicit_boundary(1.0, 4.0, 0.1, 20000);
    for (int i = 0; i <= 40; ++i) {
        double th = kHalfPi * i / 40.0;
        double best = 0.0;
        for (const auto& x : pts) best = std::max(best, x[0] * std::cos(th) + x[1] * std::sin(th));
        CHECK(s.support(th) == doctest::Approx(best).epsilon(1e-7));
    }
}

TEST_CASE("grid-line crossings and distances agree with the polyline oracle") {
    ReinhardtProfile s = profile_superellipse(1.0, 4.0, 0.1);
    auto pts = implicit_boundary(1.0, 4.0, 0.1, 40000);
    testsupport::Rng rng(6);
    for (int t = 0; t < 100; ++t) {
        double c = rng.uniform(0.0, 0.98);
        double x = s.boundary_r1_at(c);
        CHECK(G(x, c, 4.0, 0.1) == doctest::Approx(1.1).epsilon(1e-9));
        double y = s.boundary_r2_at(c);
        CHECK(G(c, y, 4.0, 0.1) == doctest::Approx(1.1).epsilon(1e-9));
    }
    for (int t = 0; t < 100; ++t) {
        double x = rng.uniform(0.0, 1.3), y = rng.uniform(0.0, 1.3);
        double d = boundary_distance(s, {x, y});
        double oracle = nearest(pts, x, y);
        CHECK(std::fabs(std::fabs(d) - oracle) <= 1e-6);
        CHECK((d > 0.0) == s.contains(x, y));
    }
}

TEST_CASE("boundary distance is 1-Lipschitz along rays") {
    ReinhardtProfile s = profile_superellipse(1.2, 6.0, 0.1);
    for (int j = 0; j <= 8; ++j) {
        double phi = kHalfPi * j / 8.0;
        double prev = boundary_distance(s, {0.0, 0.0});
        for (int i = 1; i <= 100; ++i) {
            double r = 1.4 * i / 100.0;
            double d = boundary_distance(s, {r * std::cos(phi), r * std::sin(phi)});
            CHECK(std::fabs(d - prev) <= 0.014 + 1e-12);
            prev = d;
        }
    }
}

TEST_CASE("minkowski interpolation") {
    DeformationPath balls{profile_ball(1.0), profile_ball(2.0)};
    ReinhardtProfile mid = minkowski_interpolate(balls, 0.5);
    for (const auto& s : mid.samples()) CHECK(s.h == doctest::Approx(1.5));
    CHECK(mid.boundary_r1_at(0.9) == doctest::Approx(1.2).epsilon(1e-12));

    DeformationPath path = deformation_from_ball(profile_superellipse(1.0, 4.0, 0.1));
    ReinhardtProfile t0 = minkowski_interpolate(path, 0.0);
    ReinhardtProfile t1 = minkowski_interpolate(path, 1.0);
    for (std::size_t k = 0; k < t0.samples().size(); ++k) {
        CHECK(t0.samples()[k].h == path.start.samples()[k].h);
        CHECK(t1.samples()[k].h == path.end.samples()[k].h);
    }
    CHECK_THROWS_AS(minkowski_interpolate(path, -0.1), cmaeig::DomainError);
    CHECK_THROWS_AS(minkowski_interpolate(path, 1.5), cmaeig::DomainError);
}

TEST_CASE("interpolated profiles stay strictly convex and sandwiched") {
    DeformationPath path = deformation_from_ball(profile_superellipse(1.0, 4.0, 0.1));
    for (double t : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        ReinhardtProfile p = minkowski_interpolate(path, t);
        CHECK(p.strictly_convex());
        for (std::size_t k = 0; k < p.samples().size(); ++k) {
            double ha = path.start.samples()[k].h, hb = path.end.samples()[k].h, h = p.samples()[k].h;
            CHECK(h >= (1.0 - t) * 1.0 - 1e-15);
            CHECK(h <= std::max(ha, hb) + 1e-15);
            CHECK(h >= std::min(ha, hb) - 1e-15);
        }
        // h + h'' from second differences of the table, independent of the stored radius.
        const auto& s = p.samples();
        double dt = s[1].theta - s[0].theta;
        for (std::size_t k = 1; k + 1 < s.size(); k += 16) {
            double hpp = (s[k + 1].h - 2.0 * s[k].h + s[k - 1].h) / (dt * dt);
            CHECK(s[k].h + hpp > 0.0);
            CHECK(s[k].h + hpp == doctest::Approx(s[k].rho).epsilon(2e-3));
        }
    }
}

TEST_CASE("profiles from support samples") {
    std::vector<double> th, hb, hs;
    ReinhardtProfile se = profile_superellipse(1.0, 4.0, 0.1);
    for (int i = 0; i <= 64; ++i) {
        double t = kHalfPi * i / 64.0;
        th.push_back(t);
        hb.push_back(0.7);
        hs.push_back(se.support(t));
    }
    ReinhardtProfile b = profile_from_support_samples(th, hb);
    for (const auto& s : b.samples()) {
        CHECK(s.h == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(s.rho == doctest::Approx(0.7).epsilon(1e-10));
    }
    ReinhardtProfile r = profile_from_support_samples(th, hs);
    for (int i = 0; i <= 200; ++i) {
        double t = kHalfPi * i / 200.0;
        CHECK(r.support(t) == doctest::Approx(se.support(t)).epsilon(1e-5));
    }
    std::vector<double> bad = hb;
    bad[10] = -1.0;
    CHECK_THROWS_AS(profile_from_support_samples(th, bad), cmaeig::DomainError);
    std::vector<double> shortth(th.begin(), th.begin() + 10), shorth(hb.begin(), hb.begin() + 10);
    CHECK_THROWS_AS(profile_from_support_samples(shortth, shorth), cmaeig::InvalidArgument);
    // A dent makes h + h'' negative.
    std::vector<double> dent = hb;
    dent[32] = 0.5;
    CHECK_THROWS_AS(profile_from_support_samples(th, dent), cmaeig::DomainError);
}

TEST_CASE("radial extent and gauge are consistent with the boundary") {
    ReinhardtProfile s = profile_superellipse(1.0, 4.0, 0.1);
    for (int i = 0; i <= 30; ++i) {
        double phi = kHalfPi * i / 30.0;
        double rho = s.radial_extent(phi);
        CHECK(G(rho * std::cos(phi), rho * std::sin(phi), 4.0, 0.1) == doctest::Approx(1.1).epsilon(1e-9));
        CHECK(s.gauge(0.5 * rho * std::cos(phi), 0.5 * rho * std::sin(phi)) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

}
