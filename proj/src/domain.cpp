#include "cmaeig/domain.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <utility>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include "cmaeig/error.hpp"

namespace cmaeig::domain {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_intervals(int n) {
    if (n < 16) throw InvalidArgument("profile tables need at least 16 intervals");
}

std::string fmt_num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// h(s) on [0, 1] from endpoint values and endpoint slopes (already scaled).
double hermite1(double a, double b, double da, double db, double s) {
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * a + (s3 - 2 * s2 + s) * da + (-2 * s3 + 3 * s2) * b + (s3 - s2) * db;
}

}  // namespace

ReinhardtProfile::ReinhardtProfile(std::vector<SupportSample> samples, std::string description)
    : samples_(std::move(samples)), description_(std::move(description)) {
    if (samples_.size() < 17) throw InvalidArgument("profile tables need at least 16 intervals");
    dtheta_ = kHalfPi / static_cast<double>(samples_.size() - 1);
    points_.reserve(samples_.size());
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        const SupportSample& s = samples_[k];
        if (std::fabs(s.theta - dtheta_ * static_cast<double>(k)) > 1e-12) throw InvalidArgument("support table must be uniform in theta");
        if (!(s.h > 0.0)) throw DomainError("support function must be positive");
        double c = std::cos(s.theta), sn = std::sin(s.theta);
        points_.push_back({s.h * c - s.hp * sn, s.h * sn + s.hp * c});
    }
    // Exact axis points; the reflection symmetry forces h' = 0 there.
    points_.front() = {samples_.front().h, 0.0};
    points_.back() = {0.0, samples_.back().h};
}

int ReinhardtProfile::segment_for_theta(double theta, double& s) const {
    theta = std::clamp(theta, 0.0, kHalfPi);
    int n = static_cast<int>(samples_.size()) - 1;
    int k = std::min(n - 1, static_cast<int>(theta / dtheta_));
    s = (theta - samples_[k].theta) / dtheta_;
    return k;
}

double ReinhardtProfile::support(double theta) const {
    double s = 0.0;
    int k = segment_for_theta(theta, s);
    const SupportSample& a = samples_[k];
    const SupportSample& b = samples_[k + 1];
    return hermite1(a.h, b.h, a.hp * dtheta_, b.hp * dtheta_, s);
}

double ReinhardtProfile::curvature_radius(double theta) const {
    double s = 0.0;
    int k = segment_for_theta(theta, s);
    return (1.0 - s) * samples_[k].rho + s * samples_[k + 1].rho;
}

Point2 ReinhardtProfile::hermite(int k, double s) const {
    // dX/dtheta = rho * (-sin, cos).
    const SupportSample& a = samples_[k];
    const SupportSample& b = samples_[k + 1];
    Point2 out;
    double ta[2] = {-std::sin(a.theta), std::cos(a.theta)};
    double tb[2] = {-std::sin(b.theta), std::cos(b.theta)};
    for (int c = 0; c < 2; ++c)
        out[c] = hermite1(points_[k][c], points_[k + 1][c], a.rho * ta[c] * dtheta_, b.rho * tb[c] * dtheta_, s);
    return out;
}

Point2 ReinhardtProfile::boundary_point(double theta) const {
    double s = 0.0;
    int k = segment_for_theta(theta, s);
    return hermite(k, s);
}

double ReinhardtProfile::inradius() const {
    double m = samples_.front().h;
    for (const auto& s : samples_) m = std::min(m, s.h);
    return m;
}

double ReinhardtProfile::min_curvature_radius() const {
    double m = samples_.front().rho;
    for (const auto& s : samples_) m = std::min(m, s.rho);
    return m;
}

double ReinhardtProfile::solve_component(int comp, double value) const {
    // X2 increases with theta and X1 decreases.
    const int n = static_cast<int>(points_.size()) - 1;
    const double sign = comp == 1 ? 1.0 : -1.0;
    auto key = [&](const Point2& p) { return sign * p[comp]; };
    const double target = sign * value;
    int lo = 0, hi = n;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (key(points_[mid]) <= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double a = 0.0, b = 1.0;
    for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (a + b);
        if (sign * hermite(lo, m)[comp] <= target) {
            a = m;
        } else {
            b = m;
        }
    }
    return hermite(lo, 0.5 * (a + b))[1 - comp];
}

double ReinhardtProfile::boundary_r1_at(double r2) const {
    if (r2 < 0.0 || r2 > extent_r2()) throw DomainError("horizontal line misses the profile");
    if (r2 == 0.0) return extent_r1();
    return solve_component(1, r2);
}

double ReinhardtProfile::boundary_r2_at(double r1) const {
    if (r1 < 0.0 || r1 > extent_r1()) throw DomainError("vertical line misses the profile");
    if (r1 == 0.0) return extent_r2();
    return solve_component(0, r1);
}

double ReinhardtProfile::solve_polar(double phi) const {
    const int n = static_cast<int>(points_.size()) - 1;
    auto polar = [](const Point2& p) { return std::atan2(p[1], p[0]); };
    int lo = 0, hi = n;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (polar(points_[mid]) <= phi) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double a = 0.0, b = 1.0;
    for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (a + b);
        if (polar(hermite(lo, m)) <= phi) {
            a = m;
        } else {
            b = m;
        }
    }
    Point2 p = hermite(lo, 0.5 * (a + b));
    return std::hypot(p[0], p[1]);
}

double ReinhardtProfile::radial_extent(double phi) const {
    if (phi <= 0.0) return extent_r1();
    if (phi >= kHalfPi) return extent_r2();
    return solve_polar(phi);
}

double ReinhardtProfile::gauge(double r1, double r2) const {
    double r = std::hypot(r1, r2);
    if (r == 0.0) return 0.0;
    return r / radial_extent(std::atan2(r2, r1));
}

bool ReinhardtProfile::contains(double r1, double r2) const {
    if (r1 < 0.0 || r2 < 0.0) throw DomainError("point outside the quarter-plane");
    return gauge(r1, r2) <= 1.0;
}

double ReinhardtProfile::signed_distance(double r1, double r2) const {
    // Distance to the boundary of a convex body from the support function:
    // min over normals of h(n) - x.n, for points inside and outside alike.
    auto gap = [&](double th) { return support(th) - (r1 * std::cos(th) + r2 * std::sin(th)); };
    int best = 0;
    double bv = gap(samples_[0].theta);
    for (std::size_t k = 1; k < samples_.size(); ++k) {
        const SupportSample& s = samples_[k];
        double g = s.h - (r1 * std::cos(s.theta) + r2 * std::sin(s.theta));
        if (g < bv) {
            bv = g;
            best = static_cast<int>(k);
        }
    }
    // Golden-section refinement on the neighbouring cells.
    double a = samples_[std::max(0, best - 1)].theta;
    double b = samples_[std::min(static_cast<int>(samples_.size()) - 1, best + 1)].theta;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = gap(c), fd = gap(d);
    for (int it = 0; it < 50; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = gap(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = gap(d);
        }
    }
    return std::min({bv, fc, fd});
}

ReinhardtProfile profile_ball(double R, int intervals) {
    if (!(R > 0.0)) throw DomainError("ball radius must be positive");
    check_intervals(intervals);
    std::vector<SupportSample> s(static_cast<std::size_t>(intervals) + 1);
    for (int k = 0; k <= intervals; ++k) s[k] = {kHalfPi * k / intervals, R, 0.0, R};
    return ReinhardtProfile(std::move(s), "ball(R=" + fmt_num(R) + ")");
}

ReinhardtProfile profile_superellipse(double R, double p, double mu, int intervals) {
    if (!(R > 0.0)) throw DomainError("superellipse radius must be positive");
    if (!(p >= 2.0) || !std::isfinite(p)) throw DomainError("superellipse exponent must satisfy 2 <= p < infinity");
    if (!(mu >= 0.0)) throw DomainError("smoothing weight must be nonnegative");
    if (p > 2.0 && mu == 0.0) throw DomainError("p > 2 needs a positive smoothing weight for strict convexity");
    check_intervals(intervals);
    const double level = (1.0 + mu) * std::pow(R, p);

    auto point = [&](double phi) -> Point2 {
        double c = std::cos(phi), s = std::sin(phi);
        double g = std::pow(c, p) + std::pow(s, p) + mu;
        double rho = std::pow(level / g, 1.0 / p);
        return {rho * c, rho * s};
    };
    struct Deriv {
        double gx, gy, gxx, gyy, gxy;
    };
    auto derivs = [&](const Point2& x) -> Deriv {
        double r2 = x[0] * x[0] + x[1] * x[1];
        double rp2 = std::pow(r2, (p - 2.0) / 2.0);
        double rp4 = p > 2.0 ? std::pow(r2, (p - 4.0) / 2.0) : 0.0;
        Deriv d;
        d.gx = p * std::pow(x[0], p - 1.0) + mu * p * rp2 * x[0];
        d.gy = p * std::pow(x[1], p - 1.0) + mu * p * rp2 * x[1];
        d.gxx = p * (p - 1.0) * std::pow(x[0], p - 2.0) + mu * p * (rp2 + (p - 2.0) * rp4 * x[0] * x[0]);
        d.gyy = p * (p - 1.0) * std::pow(x[1], p - 2.0) + mu * p * (rp2 + (p - 2.0) * rp4 * x[1] * x[1]);
        d.gxy = mu * p * (p - 2.0) * rp4 * x[0] * x[1];
        return d;
    };
    auto normal_angle = [&](double phi) {
        Deriv d = derivs(point(phi));
        return std::atan2(d.gy, d.gx);
    };

    std::vector<SupportSample> out(static_cast<std::size_t>(intervals) + 1);
    for (int k = 0; k <= intervals; ++k) {
        double theta = kHalfPi * k / intervals;
        double phi;
        if (k == 0) {
            phi = 0.0;
        } else if (k == intervals) {
            phi = kHalfPi;
        } else {
            double a = 0.0, b = kHalfPi;
            for (int it = 0; it < 100 && b - a > 1e-16; ++it) {
                double m = 0.5 * (a + b);
                if (normal_angle(m) < theta) {
                    a = m;
                } else {
                    b = m;
                }
            }
            phi = 0.5 * (a + b);
        }
        Point2 x = point(phi);
        Deriv d = derivs(x);
        double grad = std::hypot(d.gx, d.gy);
        double kappa = (d.gxx * d.gy * d.gy - 2.0 * d.gxy * d.gx * d.gy + d.gyy * d.gx * d.gx) / (grad * grad * grad);
        double c = std::cos(theta), s = std::sin(theta);
        SupportSample ss;
        ss.theta = theta;
        ss.h = x[0] * c + x[1] * s;
        ss.hp = -x[0] * s + x[1] * c;
        ss.rho = 1.0 / kappa;
        if (k == 0 || k == intervals) ss.hp = 0.0;
        out[k] = ss;
    }
    return ReinhardtProfile(std::move(out),
                            "superellipse(R=" + fmt_num(R) + ",p=" + fmt_num(p) + ",mu=" + fmt_num(mu) + ")");
}

ReinhardtProfile profile_from_support_samples(const std::vector<double>& theta, const std::vector<double>& h,
                                              int intervals) {
    check_intervals(intervals);
    if (theta.size() != h.size()) throw InvalidArgument("theta and h must have equal length");
    if (theta.size() < 4) throw InvalidArgument("need at least 4 support samples");
    if (std::fabs(theta.front()) > 1e-12 || std::fabs(theta.back() - kHalfPi) > 1e-12)
        throw InvalidArgument("support samples must cover [0, pi/2]");
    for (std::size_t i = 1; i < theta.size(); ++i)
        if (!(theta[i] > theta[i - 1])) throw InvalidArgument("theta samples must increase");
    for (double x : h)
        if (!(x > 0.0)) throw DomainError("support function must be positive");

    std::vector<double> xs, ys;
    const std::size_t n = theta.size();
    for (std::size_t i = n - 1; i >= 1; --i) {
        xs.push_back(-theta[i]);
        ys.push_back(h[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        xs.push_back(i == 0 ? 0.0 : (i == n - 1 ? kHalfPi : theta[i]));
        ys.push_back(h[i]);
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        xs.push_back(std::numbers::pi - theta[i]);
        ys.push_back(h[i]);
    }

    gsl_error_handler_t* old = gsl_set_error_handler_off();
    std::unique_ptr<gsl_interp_accel, void (*)(gsl_interp_accel*)> acc(gsl_interp_accel_alloc(), gsl_interp_accel_free);
    std::unique_ptr<gsl_spline, void (*)(gsl_spline*)> spl(gsl_spline_alloc(gsl_interp_cspline, xs.size()), gsl_spline_free);
    int status = gsl_spline_init(spl.get(), xs.data(), ys.data(), xs.size());
    gsl_set_error_handler(old);
    if (status != 0) throw InvalidArgument("support spline construction failed");

    std::vector<SupportSample> out(static_cast<std::size_t>(intervals) + 1);
    for (int k = 0; k <= intervals; ++k) {
        double th = kHalfPi * k / intervals;
        SupportSample s;
        s.theta = th;
        s.h = gsl_spline_eval(spl.get(), th, acc.get());
        s.hp = (k == 0 || k == intervals) ? 0.0 : gsl_spline_eval_deriv(spl.get(), th, acc.get());
        s.rho = s.h + gsl_spline_eval_deriv2(spl.get(), th, acc.get());
        if (!(s.rho > 0.0)) throw DomainError("support samples do not describe a strictly convex profile");
        out[k] = s;
    }
    return ReinhardtProfile(std::move(out), "support_samples(n=" + std::to_string(n) + ")");
}

DeformationPath deformation_from_ball(const ReinhardtProfile& end) {
    return DeformationPath{profile_ball(1.0, static_cast<int>(end.samples().size()) - 1), end};
}

ReinhardtProfile minkowski_interpolate(const DeformationPath& path, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("deformation parameter must lie in [0, 1]");
    const auto& a = path.start.samples();
    const auto& b = path.end.samples();
    if (a.size() != b.size()) throw InvalidArgument("deformation endpoints use different theta grids");
    if (t == 0.0) return path.start;
    if (t == 1.0) return path.end;
    std::vector<SupportSample> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        out[k].theta = a[k].theta;
        out[k].h = (1.0 - t) * a[k].h + t * b[k].h;
        out[k].hp = (1.0 - t) * a[k].hp + t * b[k].hp;
        out[k].rho = (1.0 - t) * a[k].rho + t * b[k].rho;
    }
    return ReinhardtProfile(std::move(out), "minkowski(t=" + fmt_num(t) + "," + path.start.description() + "," +
                                                path.end.description() + ")");
}

double boundary_distance(const ReinhardtProfile& prof, const Point2& point) {
    if (point[0] < 0.0 || point[1] < 0.0) throw DomainError("point outside the quarter-plane");
    return prof.signed_distance(point[0], point[1]);
}

}  // namespace cmaeig::domain
