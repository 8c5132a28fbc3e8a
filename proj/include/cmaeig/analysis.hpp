#pragma once

// Convexity and rank diagnostics for v = -log(-u/4) on computed solutions.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "cmaeig/domain.hpp"
#include "cmaeig/solver2d.hpp"

namespace cmaeig::analysis {

constexpr double kDefaultTauRank = 1e-6;
constexpr double kScaleFloor = 1e-12;
constexpr double kDefaultEpsCells = 2.0;

// Number of eigenvalues above tau * max(eig[0], kScaleFloor); eig descending.
int rank_at(const std::array<double, 4>& eig, double tau_rank);

struct NodeSpectrum {
    int i = 0, j = 0;
    double r1 = 0.0, r2 = 0.0;
    double distance = 0.0;  // to the boundary of the profile
    std::array<double, 4> eig{};
    int rank = 0;
    double min_eig = 0.0;
};

struct SpectralReport {
    double eps = 0.0;
    double tau_rank = 0.0;
    std::vector<NodeSpectrum> nodes;
    double min_eig = 0.0;  // over nodes
    int min_rank = 0;
    int max_rank = 0;
    bool log_concave = false;  // min_eig > 0 on every scanned node
    int skipped = 0;           // nodes beyond eps whose stencil was not finite
};

// eps in cells of the grid, converted to a length.
double eps_from_cells(const solver2d::Grid2D& grid, double cells);

// Lifted Hessian spectra of v at every interior node at distance > eps from
// the boundary. The grid overloads difference a given v field directly; the
// solution overloads use solver2d::log_derivatives on u. Nodes whose stencil
// is incomplete are not part of the scan. Throws ConfigError when no node
// qualifies.
SpectralReport spectral_scan(const solver2d::Grid2D& grid, const std::vector<double>& v, double eps,
                             double tau_rank = kDefaultTauRank);
SpectralReport spectral_scan(const solver2d::Grid2DSolution& sol, double eps, double tau_rank = kDefaultTauRank);

// Strip nodes (0 < distance <= eps) with a finite stencil all carry rank 4
// and a positive spectrum.
bool strip_check(const solver2d::Grid2D& grid, const std::vector<double>& v, double eps,
                 double tau_rank = kDefaultTauRank);
bool strip_check(const solver2d::Grid2DSolution& sol, double eps, double tau_rank = kDefaultTauRank);

struct PhiNode {
    int i = 0, j = 0;
    double r1 = 0.0, r2 = 0.0;
    double phi = 0.0;
    double grad_norm = 0.0;
    double elliptic = 0.0;  // sum F^{ij} phi_ij
    double ratio = 0.0;     // elliptic / (phi + |grad phi|), NaN below the floor
};

struct PhiReport {
    int l = 0;
    double floor = 0.0;
    std::vector<PhiNode> nodes;
    double min_phi = 0.0;
    double max_ratio = 0.0;  // over nodes with a defined ratio
    std::string note;
};

// phi = sigma_{l+1} + q of the lifted Hessian of v, its gradient and the
// combination sum F^{ij} phi_ij at nodes whose 5x5 neighbourhood is finite.
PhiReport phi_field(const solver2d::Grid2D& grid, const std::vector<double>& v, int l, double floor = 1e-8);
PhiReport phi_field(const solver2d::Grid2DSolution& sol, int l, double floor = 1e-8);

struct DeformationOptions {
    int steps = 5;  // number of t values, uniform over [0, 1]
    int grid_n = 129;
    double eps_cells = kDefaultEpsCells;
    double tau_rank = kDefaultTauRank;
    double tol = 1e-8;
    // Test hook: may alter the solution of a step before it is scanned.
    std::function<void(int step, solver2d::Grid2DSolution&)> solution_hook;
};

struct DeformationStep {
    double t = 0.0;
    bool converged = false;
    std::string error;
    double lambda = 0.0;
    double residual_inf = 0.0;
    int outer_iterations = 0;
    SpectralReport spectral;
    bool strip_ok = false;
    bool ok = false;  // converged, rank 4 everywhere, positive spectrum, strip passes
    solver2d::Grid2DSolution solution;
};

struct DeformationReport {
    std::vector<DeformationStep> steps;
    bool ok = false;
    int first_failure = -1;  // step index, -1 when every step passed
};

DeformationReport deformation_scan(const domain::DeformationPath& path, const DeformationOptions& opt);

}  // namespace cmaeig::analysis
