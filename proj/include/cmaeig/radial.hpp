#pragma once

// Radial eigenpairs on balls B_R in C^2 = R^4.
//
// For u = u(r) the eigen-equation reads
//     16 lambda u^2 = 2 u' u'' / r + 2 (u')^2 / r^2,
// and v = -log(-u/4) satisfies
//     r v' v'' - r (v')^3 + (v')^2 = 8 lambda r^2.

#include <vector>

namespace cmaeig::radial {

struct RadialOptions {
    double u0 = -1.0;               // value at the centre
    double step_fraction = 1.0 / 4096.0;  // uniform step as a fraction of R
    double launch_fraction = 1e-4;  // series launch offset as a fraction of R
    double boundary_tol = 1e-10;
    double lambda_rel_tol = 1e-12;
    int max_bisections = 400;
    int max_bracket_expansions = 60;
};

struct RadialSolution {
    double R = 0.0;
    double lambda = 0.0;
    std::vector<double> grid;  // grid[0] = 0, grid.back() = R
    std::vector<double> u;
    std::vector<double> uprime;
};

// u'' from the eigen-equation. Throws ConvergenceError when uprime <= 0.
double ode_rhs_u(double r, double u, double uprime, double lambda);

// 16 lambda u^2 - (2 u' u'' / r + 2 (u')^2 / r^2).
double residual_u(double r, double u, double uprime, double upp, double lambda);

// det(u_{i jbar}) for a radial u at r > 0; the centre uses the limit u''(0)^2/4.
double radial_det(double r, double uprime, double upp);

// Integration mesh: geometric from the launch offset to R/16, then uniform
// with spacing close to `step`. Halving `step` exactly doubles both parts.
std::vector<double> mesh(double R, double step, double launch);

struct Trajectory {
    std::vector<double> r, u, uprime;
    std::vector<double> moment;  // integral of u^2 s^3 ds from 0
};

Trajectory integrate(double lambda, double R, double step, double u0 = -1.0, double launch_fraction = 1e-4);

// u(R) for the trajectory launched from u(0) = u0.
double shoot(double lambda, double R, double step, double u0 = -1.0);

// max |r^2 (u')^2 - 16 lambda moment| / (r^2 (u')^2) along the trajectory.
double conserved_residual(const Trajectory& t, double lambda);

RadialSolution solve_lambda(double R, double tol);
RadialSolution solve_lambda(double R, const RadialOptions& opt);

struct VProfile {
    std::vector<double> v, vp, vpp;
};

VProfile v_profile(const RadialSolution& sol);

double residual_v(double r, double vp, double vpp, double lambda);

struct ConvexityCertificate {
    bool certified = false;
    double min_vpp = 0.0;       // min of v'' over [0, margin]
    double min_lift_eig = 0.0;  // min over {v'', v'/r} of the lifted Hessian
    double r_at_min = 0.0;
    int points = 0;
};

ConvexityCertificate certify_convexity(const RadialSolution& sol, double margin_radius);

// Independent eigenvalue from the v-equation alone. With lambda = 1 the
// solution starting at v(0) = 2 log 2 blows up at a finite radius r*; by
// dilation lambda(B_R) = (r*/R)^4. Past the point where v' r >= 8 the
// equation is rewritten for y = 1/v' with y as the independent variable,
// which lands on the blow-up exactly.
double blowup_radius(double step);
double lambda_vform(double R, double step = 1e-4);

}  // namespace cmaeig::radial
