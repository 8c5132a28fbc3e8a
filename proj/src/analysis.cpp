#include "cmaeig/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "cmaeig/cmaop.hpp"
#include "cmaeig/error.hpp"
#include "cmaeig/symfun.hpp"

namespace cmaeig::analysis {

namespace {

using solver2d::Grid2D;
using solver2d::NodeKind;

void check_scan_args(double eps, double tau_rank) {
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    if (!(tau_rank > 0.0 && tau_rank < 1.0)) throw InvalidArgument("tau_rank must lie in (0, 1)");
}

bool full_rank_positive(const std::array<double, 4>& eig, double tau_rank) {
    return rank_at(eig, tau_rank) == 4 && eig[3] > 0.0;
}

// Derivatives of v at a node; throws DomainError when the stencil is incomplete.
using Derivs = std::function<solver2d::ReducedDerivatives(int, int)>;

Derivs direct(const Grid2D& grid, const std::vector<double>& v) {
    return [&grid, &v](int i, int j) { return solver2d::reduced_derivatives(grid, v, i, j); };
}

Derivs through_u(const Grid2D& grid, const std::vector<double>& u) {
    return [&grid, &u](int i, int j) { return solver2d::log_derivatives(grid, u, i, j); };
}

// Hessian of a Reinhardt-invariant field at the lifted point (r1, r2, 0, 0).
SymMat4 lifted(const solver2d::ReducedDerivatives& d) {
    SymMat4 h;
    h.set(0, 0, d.w11);
    h.set(1, 1, d.w22);
    h.set(0, 1, d.w12);
    h.set(2, 2, d.t1);
    h.set(3, 3, d.t2);
    return h;
}

}  // namespace

int rank_at(const std::array<double, 4>& eig, double tau_rank) {
    double threshold = tau_rank * std::max(eig[0], kScaleFloor);
    return static_cast<int>(std::count_if(eig.begin(), eig.end(), [&](double x) { return x > threshold; }));
}

double eps_from_cells(const Grid2D& grid, double cells) {
    if (!(cells > 0.0)) throw InvalidArgument("eps must be a positive number of cells");
    return cells * std::max(grid.hx(), grid.hy());
}

namespace {

SpectralReport scan(const Grid2D& grid, const Derivs& dv, double eps, double tau_rank) {
    check_scan_args(eps, tau_rank);
    SpectralReport rep;
    rep.eps = eps;
    rep.tau_rank = tau_rank;
    rep.min_eig = std::numeric_limits<double>::infinity();
    rep.min_rank = 4;
    rep.max_rank = 0;
    const int n = grid.n();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (grid.kind(i, j) != NodeKind::interior) continue;
            double d = domain::boundary_distance(grid.profile(), {grid.r1(i), grid.r2(j)});
            if (d <= eps) continue;
            NodeSpectrum ns;
            try {
                ns.eig = solver2d::lifted_spectrum(dv(i, j));
            } catch (const DomainError&) {
                ++rep.skipped;
                continue;
            }
            ns.i = i;
            ns.j = j;
            ns.r1 = grid.r1(i);
            ns.r2 = grid.r2(j);
            ns.distance = d;
            ns.rank = rank_at(ns.eig, tau_rank);
            ns.min_eig = ns.eig[3];
            rep.min_eig = std::min(rep.min_eig, ns.min_eig);
            rep.min_rank = std::min(rep.min_rank, ns.rank);
            rep.max_rank = std::max(rep.max_rank, ns.rank);
            rep.nodes.push_back(ns);
        }
    if (rep.nodes.empty()) throw ConfigError("no grid node lies farther than eps from the boundary");
    rep.log_concave = rep.min_eig > 0.0;
    return rep;
}

bool strip(const Grid2D& grid, const Derivs& dv, double eps, double tau_rank) {
    check_scan_args(eps, tau_rank);
    const int n = grid.n();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (grid.kind(i, j) != NodeKind::interior) continue;
            double d = domain::boundary_distance(grid.profile(), {grid.r1(i), grid.r2(j)});
            if (d > eps) continue;
            std::array<double, 4> eig;
            try {
                eig = solver2d::lifted_spectrum(dv(i, j));
            } catch (const DomainError&) {
                continue;
            }
            if (!full_rank_positive(eig, tau_rank)) return false;
        }
    return true;
}

PhiReport phi_report(const Grid2D& grid, const Derivs& dvf, int l, double floor) {
    if (l != 2 && l != 3) throw InvalidArgument("l must be 2 or 3");
    if (!(floor > 0.0)) throw InvalidArgument("floor must be positive");
    const int n = grid.n();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> vals(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), nan);
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) {
            if (grid.kind(i, j) != NodeKind::interior) continue;
            try {
                std::array<double, 4> eig = solver2d::lifted_spectrum(dvf(i, j));
                vals[grid.node(i, j)] = phi_value(eig, l);
            } catch (const DomainError&) {
            }
        }

    PhiReport rep;
    rep.l = l;
    rep.floor = floor;
    rep.min_phi = std::numeric_limits<double>::infinity();
    rep.max_ratio = -std::numeric_limits<double>::infinity();
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) {
            if (!std::isfinite(vals[grid.node(i, j)])) continue;
            solver2d::ReducedDerivatives dv, dp;
            try {
                dp = solver2d::reduced_derivatives(grid, vals, i, j);
                dv = dvf(i, j);
            } catch (const DomainError&) {
                continue;
            }
            FullState s;
            s.grad = {dv.w1, dv.w2, 0.0, 0.0};
            s.hess = lifted(dv);
            SymMat4 F = F_ij(s);
            SymMat4 H = lifted(dp);
            PhiNode pn;
            pn.i = i;
            pn.j = j;
            pn.r1 = grid.r1(i);
            pn.r2 = grid.r2(j);
            pn.phi = vals[grid.node(i, j)];
            pn.grad_norm = std::hypot(dp.w1, dp.w2);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) pn.elliptic += F(a, b) * H(a, b);
            double den = pn.phi + pn.grad_norm;
            pn.ratio = den > floor ? pn.elliptic / den : nan;
            rep.min_phi = std::min(rep.min_phi, pn.phi);
            if (std::isfinite(pn.ratio)) rep.max_ratio = std::max(rep.max_ratio, pn.ratio);
            rep.nodes.push_back(pn);
        }
    if (rep.nodes.empty()) {
        rep.note = "no node with a complete stencil";
    } else if (rep.min_phi > floor) {
        rep.note = "phi bounded away from zero; the differential inequality is not binding";
    } else {
        rep.note = "phi reaches the floor; ratios reported where phi + |grad phi| exceeds it";
    }
    return rep;
}

}  // namespace

SpectralReport spectral_scan(const Grid2D& grid, const std::vector<double>& v, double eps, double tau_rank) {
    return scan(grid, direct(grid, v), eps, tau_rank);
}

SpectralReport spectral_scan(const solver2d::Grid2DSolution& sol, double eps, double tau_rank) {
    std::vector<double> u = solver2d::masked_field(sol);
    return scan(*sol.grid, through_u(*sol.grid, u), eps, tau_rank);
}

bool strip_check(const Grid2D& grid, const std::vector<double>& v, double eps, double tau_rank) {
    return strip(grid, direct(grid, v), eps, tau_rank);
}

bool strip_check(const solver2d::Grid2DSolution& sol, double eps, double tau_rank) {
    std::vector<double> u = solver2d::masked_field(sol);
    return strip(*sol.grid, through_u(*sol.grid, u), eps, tau_rank);
}

PhiReport phi_field(const Grid2D& grid, const std::vector<double>& v, int l, double floor) {
    return phi_report(grid, direct(grid, v), l, floor);
}

PhiReport phi_field(const solver2d::Grid2DSolution& sol, int l, double floor) {
    std::vector<double> u = solver2d::masked_field(sol);
    return phi_report(*sol.grid, through_u(*sol.grid, u), l, floor);
}

DeformationReport deformation_scan(const domain::DeformationPath& path, const DeformationOptions& opt) {
    if (opt.steps < 2) throw InvalidArgument("deformation needs at least two steps");
    if (!(opt.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    solver2d::SolverOptions so;
    so.outer_tol = opt.tol;
    so.inner_tol = std::min(so.inner_tol, opt.tol * 1e-2);

    DeformationReport rep;
    for (int k = 0; k < opt.steps; ++k) {
        DeformationStep st;
        st.t = static_cast<double>(k) / (opt.steps - 1);
        try {
            auto grid = std::make_shared<const Grid2D>(domain::minkowski_interpolate(path, st.t), opt.grid_n);
            st.solution = solver2d::inverse_iteration(grid, so);
            st.converged = true;
            st.lambda = st.solution.lambda;
            st.residual_inf = st.solution.residual_inf;
            st.outer_iterations = st.solution.outer_iterations;
            if (opt.solution_hook) opt.solution_hook(k, st.solution);
            double eps = eps_from_cells(*grid, opt.eps_cells);
            st.spectral = spectral_scan(st.solution, eps, opt.tau_rank);
            st.strip_ok = strip_check(st.solution, eps, opt.tau_rank);
            st.ok = st.spectral.min_rank == 4 && st.spectral.log_concave && st.strip_ok;
            if (!st.ok) st.error = "rank drop or non-positive Hessian of v";
        } catch (const ConvergenceError& e) {
            st.error = e.what();
        } catch (const ConfigError& e) {
            st.error = e.what();
        } catch (const DomainError& e) {
            st.error = e.what();
        }
        if (!st.ok && rep.first_failure < 0) rep.first_failure = k;
        rep.steps.push_back(std::move(st));
    }
    rep.ok = rep.first_failure < 0;
    return rep;
}

}  // namespace cmaeig::analysis
