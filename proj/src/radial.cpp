#include "cmaeig/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "cmaeig/error.hpp"

namespace cmaeig::radial {

namespace {

using State = std::array<double, 3>;  // u, u', moment

State rhs(double r, const State& s, double lambda) {
    return {s[1], ode_rhs_u(r, s[0], s[1], lambda), s[0] * s[0] * r * r * r};
}

State axpy(const State& a, double h, const State& k) {
    return {a[0] + h * k[0], a[1] + h * k[1], a[2] + h * k[2]};
}

State rk4(double r, double h, const State& s, double lambda) {
    State k1 = rhs(r, s, lambda);
    State k2 = rhs(r + 0.5 * h, axpy(s, 0.5 * h, k1), lambda);
    State k3 = rhs(r + 0.5 * h, axpy(s, 0.5 * h, k2), lambda);
    State k4 = rhs(r + h, axpy(s, h, k3), lambda);
    State out;
    for (int i = 0; i < 3; ++i) out[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

void check_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive");
}

// p = v' as a function of r, with lambda = 1.
double vform_p_rhs(double r, double p) { return 8.0 * r / p - p / r + p * p; }

// r as a function of y = 1/v', with lambda = 1.
double vform_r_rhs(double y, double r) { return 1.0 / (-8.0 * r * y * y * y + y / r - 1.0); }

}  // namespace

double ode_rhs_u(double r, double u, double uprime, double lambda) {
    if (!(r > 0.0)) throw DomainError("ode_rhs_u needs r > 0");
    if (!(uprime > 0.0)) throw ConvergenceError("radial integration breakdown: u' <= 0 at r = " + std::to_string(r));
    return (16.0 * lambda * u * u - 2.0 * uprime * uprime / (r * r)) * r / (2.0 * uprime);
}

double residual_u(double r, double u, double uprime, double upp, double lambda) {
    return 16.0 * lambda * u * u - (2.0 * uprime * upp / r + 2.0 * uprime * uprime / (r * r));
}

double radial_det(double r, double uprime, double upp) {
    if (r == 0.0) return upp * upp / 4.0;
    return (2.0 * uprime * upp / r + 2.0 * uprime * uprime / (r * r)) / 16.0;
}

std::vector<double> mesh(double R, double step, double launch) {
    check_positive(R, "R");
    check_positive(step, "step");
    check_positive(launch, "launch offset");
    const double rg = R / 16.0;
    if (launch >= rg) throw InvalidArgument("launch offset must lie below R/16");
    long n = std::max(1L, std::lround((R - rg) / step));
    long k = std::max(1L, static_cast<long>(std::ceil(std::log(rg / launch) * rg / (R - rg))));
    long m = n * k;
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(m + n + 1));
    const double q = std::log(rg / launch) / static_cast<double>(m);
    for (long i = 0; i < m; ++i) g.push_back(launch * std::exp(q * static_cast<double>(i)));
    const double h = (R - rg) / static_cast<double>(n);
    for (long i = 0; i < n; ++i) g.push_back(rg + h * static_cast<double>(i));
    g.push_back(R);
    return g;
}

Trajectory integrate(double lambda, double R, double step, double u0, double launch_fraction) {
    check_positive(lambda, "lambda");
    if (!(u0 < 0.0)) throw DomainError("u0 must be negative");
    const double delta = launch_fraction * R;
    std::vector<double> g = mesh(R, step, delta);
    Trajectory t;
    t.r.reserve(g.size() + 1);
    t.u.reserve(g.size() + 1);
    t.uprime.reserve(g.size() + 1);
    t.moment.reserve(g.size() + 1);
    t.r.push_back(0.0);
    t.u.push_back(u0);
    t.uprime.push_back(0.0);
    t.moment.push_back(0.0);

    // Series launch: u = u0 + a r^2 with a = sqrt(lambda) |u0|.
    const double a = std::sqrt(lambda) * std::fabs(u0);
    State s{u0 + a * delta * delta, 2.0 * a * delta, 0.0};
    s[2] = delta * delta * s[1] * s[1] / (16.0 * lambda);
    t.r.push_back(g[0]);
    t.u.push_back(s[0]);
    t.uprime.push_back(s[1]);
    t.moment.push_back(s[2]);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        s = rk4(g[i], g[i + 1] - g[i], s, lambda);
        t.r.push_back(g[i + 1]);
        t.u.push_back(s[0]);
        t.uprime.push_back(s[1]);
        t.moment.push_back(s[2]);
    }
    return t;
}

double shoot(double lambda, double R, double step, double u0) {
    return integrate(lambda, R, step, u0).u.back();
}

double conserved_residual(const Trajectory& t, double lambda) {
    double worst = 0.0;
    for (std::size_t i = 1; i < t.r.size(); ++i) {
        double lhs = t.r[i] * t.r[i] * t.uprime[i] * t.uprime[i];
        double rhs = 16.0 * lambda * t.moment[i];
        worst = std::max(worst, std::fabs(lhs - rhs) / lhs);
    }
    return worst;
}

RadialSolution solve_lambda(double R, double tol) {
    RadialOptions opt;
    opt.boundary_tol = tol;
    return solve_lambda(R, opt);
}

RadialSolution solve_lambda(double R, const RadialOptions& opt) {
    check_positive(R, "R");
    check_positive(opt.boundary_tol, "boundary tolerance");
    check_positive(opt.lambda_rel_tol, "lambda tolerance");
    const double step = opt.step_fraction * R;
    auto f = [&](double lam) { return integrate(lam, R, step, opt.u0, opt.launch_fraction).u.back(); };

    const double scale = 1.0 / (R * R * R * R);
    double lo = scale, hi = 64.0 * scale;
    double flo = f(lo), fhi = f(hi);
    int expansions = 0;
    while (flo > 0.0) {
        if (++expansions > opt.max_bracket_expansions) throw ConvergenceError("bracket not found for the ball eigenvalue");
        hi = lo;
        fhi = flo;
        lo /= 4.0;
        flo = f(lo);
    }
    while (fhi < 0.0) {
        if (++expansions > opt.max_bracket_expansions) throw ConvergenceError("bracket not found for the ball eigenvalue");
        lo = hi;
        flo = fhi;
        hi *= 4.0;
        fhi = f(hi);
    }

    double mid = 0.5 * (lo + hi), fmid = 0.0;
    int it = 0;
    for (;; ++it) {
        if (it > opt.max_bisections) throw ConvergenceError("bisection on lambda did not converge");
        mid = 0.5 * (lo + hi);
        fmid = f(mid);
        bool narrow = (hi - lo) <= opt.lambda_rel_tol * mid;
        if (std::fabs(fmid) <= opt.boundary_tol && narrow) break;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * mid) {
            if (std::fabs(fmid) <= opt.boundary_tol) break;
            throw ConvergenceError("boundary tolerance not reachable at double precision");
        }
        if (fmid < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    Trajectory t = integrate(mid, R, step, opt.u0, opt.launch_fraction);
    RadialSolution sol;
    sol.R = R;
    sol.lambda = mid;
    sol.grid = std::move(t.r);
    sol.u = std::move(t.u);
    sol.uprime = std::move(t.uprime);
    return sol;
}

VProfile v_profile(const RadialSolution& sol) {
    const std::size_t n = sol.grid.size();
    VProfile p;
    p.v.resize(n);
    p.vp.resize(n);
    p.vpp.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r = sol.grid[i], u = sol.u[i], up = sol.uprime[i];
        if (!(u < 0.0)) {
            // The boundary node: v is +infinity there.
            p.v[i] = p.vp[i] = p.vpp[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        double upp = r > 0.0 ? ode_rhs_u(r, u, up, sol.lambda) : 2.0 * std::sqrt(sol.lambda) * std::fabs(u);
        p.v[i] = -std::log(-u / 4.0);
        p.vp[i] = up / (-u);
        p.vpp[i] = upp / (-u) + p.vp[i] * p.vp[i];
    }
    return p;
}

double residual_v(double r, double vp, double vpp, double lambda) {
    return r * vp * vpp - r * vp * vp * vp + vp * vp - 8.0 * lambda * r * r;
}

ConvexityCertificate certify_convexity(const RadialSolution& sol, double margin_radius) {
    if (!(margin_radius < sol.R)) throw InvalidArgument("margin radius must be below R");
    VProfile p = v_profile(sol);
    ConvexityCertificate c;
    c.min_vpp = std::numeric_limits<double>::infinity();
    c.min_lift_eig = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        double r = sol.grid[i];
        if (r > margin_radius) break;
        ++c.points;
        double vpp = p.vpp[i];
        double tangential = r > 0.0 ? p.vp[i] / r : vpp;
        if (!(vpp > 0.0) || !(tangential > 0.0)) ok = false;
        if (vpp < c.min_vpp) {
            c.min_vpp = vpp;
            c.r_at_min = r;
        }
        c.min_lift_eig = std::min({c.min_lift_eig, vpp, tangential});
    }
    c.certified = ok && c.points > 0;
    return c;
}

double blowup_radius(double step) {
    check_positive(step, "step");
    const double kappa = 0.02;
    double r = 1e-5;
    double p = 2.0 * r;
    auto prk4 = [](double r0, double h, double p0) {
        double k1 = vform_p_rhs(r0, p0);
        double k2 = vform_p_rhs(r0 + 0.5 * h, p0 + 0.5 * h * k1);
        double k3 = vform_p_rhs(r0 + 0.5 * h, p0 + 0.5 * h * k2);
        double k4 = vform_p_rhs(r0 + h, p0 + h * k3);
        return p0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    long guard = 0;
    while (p * r < 8.0) {
        if (++guard > 100000000L) throw ConvergenceError("v-form integration did not reach the blow-up region");
        double h = std::min(step, kappa * r);
        p = prk4(r, h, p);
        r += h;
        if (!(p > 0.0) || !std::isfinite(p)) throw ConvergenceError("v-form integration breakdown");
    }
    double y = 1.0 / p;
    long n = std::max(1L, static_cast<long>(std::ceil(y / step)));
    double hy = -y / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
        double k1 = vform_r_rhs(y, r);
        double k2 = vform_r_rhs(y + 0.5 * hy, r + 0.5 * hy * k1);
        double k3 = vform_r_rhs(y + 0.5 * hy, r + 0.5 * hy * k2);
        double k4 = vform_r_rhs(y + hy, r + hy * k3);
        r += hy / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        y += hy;
    }
    return r;
}

double lambda_vform(double R, double step) {
    check_positive(R, "R");
    double q = blowup_radius(step) / R;
    return q * q * q * q;
}

}  // namespace cmaeig::radial
