#include "cmaeig/solver2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "cmaeig/error.hpp"
#include "cmaeig/kernels.hpp"

namespace cmaeig::solver2d {

namespace {

using Triplet = Eigen::Triplet<double>;
using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using ColSparse = Eigen::SparseMatrix<double>;

// Arms closer to the boundary than this fraction of a cell are snapped onto it.
constexpr double kMinArm = 1e-6;
constexpr double kBoundaryBand = 1e-12;

struct Arm {
    int node = -1;      // neighbour grid node, -1 when the arm ends on the boundary
    double length = 0;  // distance to the neighbour or to the boundary
};

// One-dimensional second derivative and first derivative weights on an
// uneven three-point stencil (left, centre, right).
struct LineWeights {
    double l2, c2, r2;  // second derivative
    double l1, c1, r1;  // first derivative
};

LineWeights line_weights(double hl, double hr) {
    LineWeights w;
    double s = hl + hr;
    w.l2 = 2.0 / (hl * s);
    w.r2 = 2.0 / (hr * s);
    w.c2 = -(w.l2 + w.r2);
    w.l1 = -hr / (hl * s);
    w.r1 = hl / (hr * s);
    w.c1 = -(w.l1 + w.r1);
    return w;
}

}  // namespace

double reduced_det(double u11, double u22, double u12, double u1, double u2, double r1, double r2) {
    if (r1 < 0.0 || r2 < 0.0) throw DomainError("reduced_det needs r1, r2 >= 0");
    double P = u11 + (r1 > 0.0 ? u1 / r1 : u11);
    double Q = u22 + (r2 > 0.0 ? u2 / r2 : u22);
    return (P * Q - u12 * u12) / 16.0;
}

Grid2D::Grid2D(domain::ReinhardtProfile profile, int n) : profile_(std::move(profile)), n_(n) {
    if (n < 17 || n % 2 == 0) throw InvalidArgument("grid size must be odd and at least 17");
    hx_ = profile_.extent_r1() / (n - 1);
    hy_ = profile_.extent_r2() / (n - 1);
    const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    kind_.assign(total, NodeKind::outside);
    unknown_.assign(total, -1);

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double g = profile_.gauge(r1(i), r2(j));
            NodeKind k = NodeKind::outside;
            if (g < 1.0 - kBoundaryBand) {
                k = NodeKind::interior;
            } else if (g <= 1.0 + kBoundaryBand) {
                k = NodeKind::boundary;
            }
            kind_[node(i, j)] = k;
        }

    // Arms leaving the interior; nodes almost on the boundary become boundary nodes.
    auto right_arm = [&](int i, int j) -> Arm {
        if (i + 1 < n && kind_[node(i + 1, j)] == NodeKind::interior) return {node(i + 1, j), hx_};
        if (i + 1 < n && kind_[node(i + 1, j)] == NodeKind::boundary) return {-1, hx_};
        return {-1, std::min(hx_, profile_.boundary_r1_at(r2(j)) - r1(i))};
    };
    auto top_arm = [&](int i, int j) -> Arm {
        if (j + 1 < n && kind_[node(i, j + 1)] == NodeKind::interior) return {node(i, j + 1), hy_};
        if (j + 1 < n && kind_[node(i, j + 1)] == NodeKind::boundary) return {-1, hy_};
        return {-1, std::min(hy_, profile_.boundary_r2_at(r1(i)) - r2(j))};
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                if (kind_[node(i, j)] != NodeKind::interior) continue;
                if (right_arm(i, j).length < kMinArm * hx_ || top_arm(i, j).length < kMinArm * hy_) {
                    kind_[node(i, j)] = NodeKind::boundary;
                    changed = true;
                }
            }
    }

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (kind_[node(i, j)] == NodeKind::interior) {
                unknown_[node(i, j)] = static_cast<int>(nodes_.size());
                nodes_.push_back(node(i, j));
            }
    if (nodes_.empty()) throw InvalidArgument("grid has no interior nodes");

    std::vector<Triplet> tp, tq, tm;
    auto add = [&](std::vector<Triplet>& t, int row, int gnode, double w) {
        if (gnode < 0) return;
        int col = unknown_[gnode];
        if (col >= 0) t.emplace_back(row, col, w);
    };
    for (int row = 0; row < unknowns(); ++row) {
        int gn = nodes_[row];
        int i = gn % n, j = gn / n;

        // r1 direction: P = u_11 + u_1 / r1.
        Arm ra = right_arm(i, j);
        if (i == 0) {
            // Even reflection: u_1 = 0 and u_1/r1 -> u_11, so P = 2 u_11.
            double w = 2.0 * 2.0 / (ra.length * ra.length);
            add(tp, row, gn, -w);
            add(tp, row, ra.node, w);
        } else {
            LineWeights w = line_weights(hx_, ra.length);
            double inv = 1.0 / r1(i);
            add(tp, row, node(i - 1, j), w.l2 + w.l1 * inv);
            add(tp, row, gn, w.c2 + w.c1 * inv);
            add(tp, row, ra.node, w.r2 + w.r1 * inv);
        }

        Arm ta = top_arm(i, j);
        if (j == 0) {
            double w = 2.0 * 2.0 / (ta.length * ta.length);
            add(tq, row, gn, -w);
            add(tq, row, ta.node, w);
        } else {
            LineWeights w = line_weights(hy_, ta.length);
            double inv = 1.0 / r2(j);
            add(tq, row, node(i, j - 1), w.l2 + w.l1 * inv);
            add(tq, row, gn, w.c2 + w.c1 * inv);
            add(tq, row, ta.node, w.r2 + w.r1 * inv);
        }

        // Mixed derivative: zero on the axes by symmetry; elsewhere the mean of
        // the one-sided quadrant differences whose three nodes are all known.
        if (i == 0 || j == 0) continue;
        struct Quad {
            int sx, sy;
        };
        std::vector<Quad> quads;
        for (int sx : {-1, 1})
            for (int sy : {-1, 1}) {
                int ii = i + sx, jj = j + sy;
                if (ii >= n || jj >= n) continue;
                if (kind_[node(ii, j)] == NodeKind::outside || kind_[node(i, jj)] == NodeKind::outside ||
                    kind_[node(ii, jj)] == NodeKind::outside)
                    continue;
                quads.push_back({sx, sy});
            }
        double scale = 1.0 / (static_cast<double>(quads.size()) * hx_ * hy_);
        for (const Quad& q : quads) {
            double s = q.sx * q.sy * scale;
            add(tm, row, node(i + q.sx, j + q.sy), s);
            add(tm, row, node(i + q.sx, j), -s);
            add(tm, row, node(i, j + q.sy), -s);
            add(tm, row, gn, s);
        }
    }
    const int N = unknowns();
    AP_.resize(N, N);
    AQ_.resize(N, N);
    AM_.resize(N, N);
    AP_.setFromTriplets(tp.begin(), tp.end());
    AQ_.setFromTriplets(tq.begin(), tq.end());
    AM_.setFromTriplets(tm.begin(), tm.end());
}

std::vector<double> Grid2D::to_field(const Eigen::VectorXd& x) const {
    std::vector<double> f(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0.0);
    for (int k = 0; k < unknowns(); ++k) f[nodes_[k]] = x[k];
    return f;
}

Eigen::VectorXd Grid2D::from_field(const std::vector<double>& f) const {
    Eigen::VectorXd x(unknowns());
    for (int k = 0; k < unknowns(); ++k) x[k] = f[nodes_[k]];
    return x;
}

ReducedHessian reduced_hessian(const Grid2D& grid, const Eigen::VectorXd& u) {
    return {grid.AP() * u, grid.AQ() * u, grid.AM() * u};
}

double eigen_residual_inf(const Grid2D& grid, const Eigen::VectorXd& u, double lambda) {
    ReducedHessian h = reduced_hessian(grid, u);
    Eigen::VectorXd r(u.size());
    const auto& k = kernels::active();
    k.eigen_residual(h.P.data(), h.Q.data(), h.M.data(), u.data(), lambda, r.data(), static_cast<std::size_t>(u.size()));
    return k.max_abs(r.data(), static_cast<std::size_t>(r.size()));
}

double min_psh_margin(const Grid2D& grid, const Eigen::VectorXd& u) {
    ReducedHessian h = reduced_hessian(grid, u);
    Eigen::VectorXd m(u.size());
    const auto& k = kernels::active();
    k.psh_margin(h.P.data(), h.Q.data(), h.M.data(), m.data(), static_cast<std::size_t>(u.size()));
    return k.min_value(m.data(), static_cast<std::size_t>(m.size()));
}

Eigen::VectorXd newton_dirichlet_solve(const Grid2D& grid, const Eigen::VectorXd& rhs, const Eigen::VectorXd& u_init,
                                       const SolverOptions& opt, NewtonReport* report) {
    const int N = grid.unknowns();
    if (rhs.size() != N || u_init.size() != N) throw InvalidArgument("vector sizes do not match the grid");
    if (!(rhs.minCoeff() > 0.0)) throw DomainError("right-hand side must be positive at interior nodes");
    const auto& k = kernels::active();
    const std::size_t n = static_cast<std::size_t>(N);

    Eigen::VectorXd u = u_init;
    Eigen::VectorXd R(N);
    auto evaluate = [&](const Eigen::VectorXd& x, Eigen::VectorXd& res) {
        ReducedHessian h = reduced_hessian(grid, x);
        k.det_minus_rhs(h.P.data(), h.Q.data(), h.M.data(), rhs.data(), res.data(), n);
        return h;
    };
    if (!(min_psh_margin(grid, u) > 0.0)) throw DomainError("initial iterate is not strictly plurisubharmonic");
    ReducedHessian h = evaluate(u, R);
    double res = k.max_abs(R.data(), n);

    Eigen::SparseLU<ColSparse, Eigen::COLAMDOrdering<int>> lu;
    bool analyzed = false;
    NewtonReport rep;
    for (int it = 0;; ++it) {
        rep.iterations = it;
        rep.residual_inf = res;
        if (res <= opt.inner_tol) break;
        if (it >= opt.max_newton) {
            std::ostringstream os;
            os << "Newton iteration limit reached; residual " << res;
            throw ConvergenceError(os.str());
        }
        RowSparse Jr = (h.Q.asDiagonal() * grid.AP() + h.P.asDiagonal() * grid.AQ() -
                        (2.0 * h.M).asDiagonal() * grid.AM()) *
                       (1.0 / 16.0);
        ColSparse J = Jr;
        J.makeCompressed();
        if (!analyzed) {
            lu.analyzePattern(J);
            analyzed = true;
        }
        lu.factorize(J);
        if (lu.info() != Eigen::Success) throw ConvergenceError("Newton Jacobian factorization failed");
        Eigen::VectorXd step = lu.solve(-R);
        if (it == 0) rep.first_step_norm = step.lpNorm<Eigen::Infinity>();

        double alpha = 1.0;
        int halvings = 0;
        Eigen::VectorXd trial(N), Rt(N);
        for (;;) {
            trial = u + alpha * step;
            ReducedHessian ht = evaluate(trial, Rt);
            double rt = k.max_abs(Rt.data(), n);
            // Near the boundary rhs is tiny and the Hessian almost degenerate,
            // so intermediate iterates may leave the PSH cone there. Positive
            // trace keeps them off the concave branch; det = rhs > 0 then
            // makes the limit PSH.
            double tm = (ht.P + ht.Q).minCoeff();
            if (tm > 0.0 && rt < res) {
                u = trial;
                R = Rt;
                h = std::move(ht);
                res = rt;
                break;
            }
            if (++halvings > opt.max_halvings) {
                std::ostringstream os;
                os << "Newton line search failed after " << opt.max_halvings << " halvings; residual " << res
                   << ", trial residual " << rt << ", trial min trace " << tm;
                throw ConvergenceError(os.str());
            }
            alpha *= 0.5;
        }
        rep.total_halvings += halvings;
    }
    if (report) *report = rep;
    return u;
}

Eigen::VectorXd initial_guess(const Grid2D& grid) {
    Eigen::VectorXd u(grid.unknowns());
    const int n = grid.n();
    for (int k = 0; k < grid.unknowns(); ++k) {
        int gn = grid.unknown_nodes()[k];
        int i = gn % n, j = gn / n;
        double g = grid.profile().gauge(grid.r1(i), grid.r2(j));
        u[k] = -(1.0 - g * g);
    }
    return u / (-u.minCoeff());
}

Grid2DSolution inverse_iteration(std::shared_ptr<const Grid2D> grid, const SolverOptions& opt,
                                 const Eigen::VectorXd* u_start) {
    if (!(opt.outer_tol > 0.0) || !(opt.inner_tol > 0.0)) throw InvalidArgument("tolerances must be positive");
    Eigen::VectorXd u = u_start ? *u_start : initial_guess(*grid);
    if (u.size() != grid->unknowns()) throw InvalidArgument("starting vector does not match the grid");
    u /= -u.minCoeff();

    // Scale of the first Newton start from the deepest node: det(m u) = u^2 there.
    double m;
    {
        ReducedHessian h = reduced_hessian(*grid, u);
        Eigen::Index at = 0;
        u.minCoeff(&at);
        double d = (h.P[at] * h.Q[at] - h.M[at] * h.M[at]) / 16.0;
        m = d > 0.0 ? std::sqrt(u[at] * u[at] / d) : 1.0;
    }

    Grid2DSolution sol;
    sol.grid = grid;
    double lambda = 0.0;
    for (int it = 1; it <= opt.max_outer; ++it) {
        Eigen::VectorXd rhs = u.array().square();
        Eigen::VectorXd w = newton_dirichlet_solve(*grid, rhs, m * u, opt);
        double m_new = -w.minCoeff();
        Eigen::VectorXd u_new = w / m_new;
        double lambda_new = 1.0 / (m_new * m_new);
        sol.lambda_history.push_back(lambda_new);
        double change = lambda > 0.0 ? std::fabs(lambda_new - lambda) / lambda : std::numeric_limits<double>::infinity();
        double res = eigen_residual_inf(*grid, u_new, lambda_new);
        u = std::move(u_new);
        lambda = lambda_new;
        m = m_new;
        if (change <= opt.outer_tol && res <= opt.outer_tol) {
            sol.u = u;
            sol.lambda = lambda;
            sol.residual_inf = res;
            sol.outer_iterations = it;
            return sol;
        }
    }
    std::ostringstream os;
    os << "inverse iteration did not converge in " << opt.max_outer << " iterations; lambda history tail:";
    std::size_t from = sol.lambda_history.size() > 5 ? sol.lambda_history.size() - 5 : 0;
    for (std::size_t i = from; i < sol.lambda_history.size(); ++i) os << ' ' << sol.lambda_history[i];
    throw ConvergenceError(os.str());
}

Grid2DSolution inverse_iteration(const domain::ReinhardtProfile& prof, int grid_n, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    SolverOptions opt;
    opt.outer_tol = tol;
    opt.inner_tol = std::min(opt.inner_tol, tol * 1e-2);
    return inverse_iteration(std::make_shared<const Grid2D>(prof, grid_n), opt);
}

ReducedDerivatives reduced_derivatives(const Grid2D& grid, const std::vector<double>& w, int i, int j) {
    const int n = grid.n();
    if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidArgument("node outside the grid");
    if (i + 1 >= n || j + 1 >= n) throw DomainError("stencil leaves the grid");
    auto at = [&](int a, int b) {
        double x = w[grid.node(std::abs(a), std::abs(b))];
        if (!std::isfinite(x)) throw DomainError("stencil touches the boundary");
        return x;
    };
    const double hx = grid.hx(), hy = grid.hy();
    double c = at(i, j);
    double e = at(i + 1, j), wv = at(i - 1, j), nv = at(i, j + 1), s = at(i, j - 1);
    ReducedDerivatives d;
    d.w11 = (e - 2.0 * c + wv) / (hx * hx);
    d.w22 = (nv - 2.0 * c + s) / (hy * hy);
    d.w12 = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) / (4.0 * hx * hy);
    d.w1 = (e - wv) / (2.0 * hx);
    d.w2 = (nv - s) / (2.0 * hy);
    d.t1 = i == 0 ? d.w11 : d.w1 / grid.r1(i);
    d.t2 = j == 0 ? d.w22 : d.w2 / grid.r2(j);
    return d;
}

std::array<double, 4> lifted_spectrum(const ReducedDerivatives& d) {
    double mean = 0.5 * (d.w11 + d.w22), half = 0.5 * (d.w11 - d.w22);
    double rad = std::sqrt(half * half + d.w12 * d.w12);
    std::array<double, 4> out{d.t1, d.t2, mean + rad, mean - rad};
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

std::array<double, 4> lift_hessian(const Grid2D& grid, const std::vector<double>& w, int i, int j) {
    return lifted_spectrum(reduced_derivatives(grid, w, i, j));
}

std::vector<double> masked_field(const Grid2DSolution& sol) {
    std::vector<double> f = sol.field();
    const Grid2D& g = *sol.grid;
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i)
            if (g.kind(i, j) == NodeKind::outside) f[g.node(i, j)] = std::numeric_limits<double>::quiet_NaN();
    return f;
}

ReducedDerivatives log_derivatives(const Grid2D& grid, const std::vector<double>& u, int i, int j) {
    ReducedDerivatives d = reduced_derivatives(grid, u, i, j);
    double a = -u[grid.node(i, j)];
    if (!(a > 0.0)) throw DomainError("u must be negative at the node");
    ReducedDerivatives v;
    v.w1 = d.w1 / a;
    v.w2 = d.w2 / a;
    v.w11 = d.w11 / a + v.w1 * v.w1;
    v.w22 = d.w22 / a + v.w2 * v.w2;
    v.w12 = d.w12 / a + v.w1 * v.w2;
    v.t1 = i == 0 ? v.w11 : d.t1 / a;
    v.t2 = j == 0 ? v.w22 : d.t2 / a;
    return v;
}

std::vector<double> v_field(const Grid2DSolution& sol) {
    std::vector<double> f = sol.field();
    for (double& x : f) x = x < 0.0 ? -std::log(-x / 4.0) : std::numeric_limits<double>::infinity();
    return f;
}

std::array<double, 4> lift_v_hessian(const Grid2DSolution& sol, int i, int j) {
    return lifted_spectrum(log_derivatives(*sol.grid, masked_field(sol), i, j));
}

}  // namespace cmaeig::solver2d
