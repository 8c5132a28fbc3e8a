#pragma once

// Eigenpairs of det(u_{i jbar}) = lambda (-u)^2 on complete Reinhardt domains,
// solved on the (r1, r2) profile quarter-plane where
//     det(u_{i jbar}) = [(u_11 + u_1/r1)(u_22 + u_2/r2) - u_12^2] / 16.

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "cmaeig/domain.hpp"

namespace cmaeig::solver2d {

// det(u_{i jbar}) for u = u(|z1|, |z2|). On an axis the first-derivative
// quotient is replaced by its limit, the second derivative.
double reduced_det(double u11, double u22, double u12, double u1, double u2, double r1, double r2);

enum class NodeKind : unsigned char { outside, boundary, interior };

// Tensor grid over the bounding box of the profile with the linear stencils
// of P = u_11 + u_1/r1, Q = u_22 + u_2/r2 and M = u_12 acting on interior
// unknowns (boundary values are zero and drop out).
class Grid2D {
public:
    Grid2D(domain::ReinhardtProfile profile, int n);

    const domain::ReinhardtProfile& profile() const { return profile_; }
    int n() const { return n_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double r1(int i) const { return hx_ * i; }
    double r2(int j) const { return hy_ * j; }
    int node(int i, int j) const { return j * n_ + i; }
    NodeKind kind(int i, int j) const { return kind_[node(i, j)]; }
    // -1 for non-interior nodes.
    int unknown(int i, int j) const { return unknown_[node(i, j)]; }
    int unknowns() const { return static_cast<int>(nodes_.size()); }
    // Grid node of each unknown.
    const std::vector<int>& unknown_nodes() const { return nodes_; }

    const Eigen::SparseMatrix<double, Eigen::RowMajor>& AP() const { return AP_; }
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& AQ() const { return AQ_; }
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& AM() const { return AM_; }

    // Scatter unknowns into a full n*n field with zeros elsewhere, and back.
    std::vector<double> to_field(const Eigen::VectorXd& x) const;
    Eigen::VectorXd from_field(const std::vector<double>& f) const;

private:
    domain::ReinhardtProfile profile_;
    int n_;
    double hx_, hy_;
    std::vector<NodeKind> kind_;
    std::vector<int> unknown_;
    std::vector<int> nodes_;
    Eigen::SparseMatrix<double, Eigen::RowMajor> AP_, AQ_, AM_;
};

struct SolverOptions {
    double inner_tol = 1e-10;
    double outer_tol = 1e-8;
    int max_outer = 200;
    int max_newton = 50;
    int max_halvings = 30;
};

struct NewtonReport {
    int iterations = 0;
    double residual_inf = 0.0;
    double first_step_norm = 0.0;
    int total_halvings = 0;
};

// Damped Newton for det(u_{i jbar}) = rhs with u = 0 on the boundary.
// rhs and u_init are indexed by unknown. Throws ConvergenceError when the
// line search or the iteration limit is exhausted.
Eigen::VectorXd newton_dirichlet_solve(const Grid2D& grid, const Eigen::VectorXd& rhs, const Eigen::VectorXd& u_init,
                                       const SolverOptions& opt = {}, NewtonReport* report = nullptr);

struct Grid2DSolution {
    std::shared_ptr<const Grid2D> grid;
    Eigen::VectorXd u;  // by unknown; sup(-u) = 1
    double lambda = 0.0;
    double residual_inf = 0.0;
    int outer_iterations = 0;
    std::vector<double> lambda_history;
    std::vector<double> field() const { return grid->to_field(u); }
};

// P, Q, M at every unknown.
struct ReducedHessian {
    Eigen::VectorXd P, Q, M;
};
ReducedHessian reduced_hessian(const Grid2D& grid, const Eigen::VectorXd& u);

double eigen_residual_inf(const Grid2D& grid, const Eigen::VectorXd& u, double lambda);
double min_psh_margin(const Grid2D& grid, const Eigen::VectorXd& u);

// u0 = -(1 - g^2) with g the gauge of the profile.
Eigen::VectorXd initial_guess(const Grid2D& grid);

Grid2DSolution inverse_iteration(std::shared_ptr<const Grid2D> grid, const SolverOptions& opt = {},
                                 const Eigen::VectorXd* u_start = nullptr);
Grid2DSolution inverse_iteration(const domain::ReinhardtProfile& prof, int grid_n, double tol);

// Central differences of a field at node (i, j), reflected evenly across the
// axes. t1 = w_1/r1 and t2 = w_2/r2, replaced by w_11 and w_22 on the axes.
struct ReducedDerivatives {
    double w1 = 0, w2 = 0, w11 = 0, w22 = 0, w12 = 0, t1 = 0, t2 = 0;
};
ReducedDerivatives reduced_derivatives(const Grid2D& grid, const std::vector<double>& w, int i, int j);

// Spectrum of the 4D Hessian of a field w(r1, r2) at the lifted point of
// node (i, j), descending: {w_1/r1, w_2/r2} and the eigenvalues of the
// (r1, r2) block, with the axis limit w_r/r -> w_rr. Needs the 3x3 stencil
// (after reflection across the axes) to consist of finite values; throws
// DomainError otherwise.
std::array<double, 4> lift_hessian(const Grid2D& grid, const std::vector<double>& w, int i, int j);
std::array<double, 4> lifted_spectrum(const ReducedDerivatives& d);

// Solution field with NaN at nodes outside the profile.
std::vector<double> masked_field(const Grid2DSolution& sol);

// Derivatives of v = -log(-u/4) from central differences of u through
//     grad v = grad u / |u|,  hess v = hess u / |u| + grad v grad v^T.
// u is smooth up to the boundary while v is not, so this stays accurate
// much closer to the boundary than differencing v itself.
ReducedDerivatives log_derivatives(const Grid2D& grid, const std::vector<double>& u, int i, int j);

// Spectrum of the 4D Hessian of v at node (i, j) via log_derivatives.
std::array<double, 4> lift_v_hessian(const Grid2DSolution& sol, int i, int j);

// v = -log(-u/4) over the grid, +infinity where u >= 0.
std::vector<double> v_field(const Grid2DSolution& sol);

}  // namespace cmaeig::solver2d
