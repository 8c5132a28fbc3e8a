#pragma once

// Complete Reinhardt domains in C^2 described by their profile body D in the
// (r1, r2) = (|z1|, |z2|) quarter-plane. D is stored through its support
// function h(theta) on a uniform grid of normal angles theta in [0, pi/2],
// together with h' and the curvature radius rho = h + h''. The boundary point
// with outward normal n(theta) is X(theta) = h n + h' n_perp.

#include <array>
#include <string>
#include <vector>

namespace cmaeig::domain {

using Point2 = std::array<double, 2>;

struct SupportSample {
    double theta = 0.0;
    double h = 0.0;
    double hp = 0.0;   // dh/dtheta
    double rho = 0.0;  // h + h''
};

class ReinhardtProfile {
public:
    static constexpr int kDefaultIntervals = 2048;

    // samples must be uniform in theta from 0 to pi/2.
    ReinhardtProfile(std::vector<SupportSample> samples, std::string description);

    const std::vector<SupportSample>& samples() const { return samples_; }
    const std::string& description() const { return description_; }

    double support(double theta) const;
    double curvature_radius(double theta) const;
    Point2 boundary_point(double theta) const;

    // Extent along the axes: the bounding box is [0, extent_r1] x [0, extent_r2].
    double extent_r1() const { return samples_.front().h; }
    double extent_r2() const { return samples_.back().h; }
    double inradius() const;
    double min_curvature_radius() const;
    bool strictly_convex() const { return min_curvature_radius() > 0.0; }

    bool contains(double r1, double r2) const;
    // Distance from the origin to the boundary along polar angle phi.
    double radial_extent(double phi) const;
    // |x| / radial_extent; 1 on the boundary.
    double gauge(double r1, double r2) const;
    // Boundary crossing of the horizontal line r2 = c (resp. vertical r1 = c).
    double boundary_r1_at(double r2) const;
    double boundary_r2_at(double r1) const;
    // Positive inside.
    double signed_distance(double r1, double r2) const;

private:
    int segment_for_theta(double theta, double& s) const;
    Point2 hermite(int k, double s) const;
    // Root of component `comp` of X on [theta_0, pi/2] equal to `value`.
    double solve_component(int comp, double value) const;
    double solve_polar(double phi) const;

    std::vector<SupportSample> samples_;
    std::vector<Point2> points_;
    double dtheta_ = 0.0;
    std::string description_;
};

ReinhardtProfile profile_ball(double R, int intervals = ReinhardtProfile::kDefaultIntervals);

// Smoothed superellipse r1^p + r2^p + mu (r1^2 + r2^2)^{p/2} <= (1 + mu) R^p.
// The mu term keeps the boundary curvature positive at the axis points,
// where the bare superellipse is flat for p > 2.
ReinhardtProfile profile_superellipse(double R, double p, double mu = 0.1,
                                      int intervals = ReinhardtProfile::kDefaultIntervals);

// Cubic spline through given support samples on [0, pi/2], extended by the
// reflection symmetries h(-theta) = h(theta) = h(pi - theta).
ReinhardtProfile profile_from_support_samples(const std::vector<double>& theta, const std::vector<double>& h,
                                              int intervals = ReinhardtProfile::kDefaultIntervals);

struct DeformationPath {
    ReinhardtProfile start;
    ReinhardtProfile end;
};

DeformationPath deformation_from_ball(const ReinhardtProfile& end);

// (1 - t) start + t end, computed on support tables. Both ends must share the
// theta grid.
ReinhardtProfile minkowski_interpolate(const DeformationPath& path, double t);

double boundary_distance(const ReinhardtProfile& prof, const Point2& point);

}  // namespace cmaeig::domain
