#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "riemdp/geometry.hpp"

namespace riemdp {

/// The d-dimensional sphere of constant curvature kappa > 0, embedded in
/// R^(d+1) as the set of vectors of norm kappa^(-1/2), with the metric
/// induced by the ambient dot product.
template <typename Scalar>
class SphereT {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Ambient = Vector;

    struct Point {
        Vector coords;
    };
    struct Tangent {
        Point base;
        Vector value;  // ambient vector orthogonal to base
    };

    explicit SphereT(int dim, Scalar curvature = Scalar(1))
        : dim_(dim), kappa_(curvature) {
        if (dim < 1) throw std::invalid_argument("sphere dimension must be >= 1");
        if (!(curvature > Scalar(0))) {
            throw std::invalid_argument("sphere curvature must be positive");
        }
    }

    int dim() const { return dim_; }
    Scalar curvature() const { return kappa_; }
    Scalar radius() const { return Scalar(1) / std::sqrt(kappa_); }

    ManifoldDescriptor descriptor() const {
        return ManifoldDescriptor{
            dim_, dim_ + 1, static_cast<double>(kappa_), static_cast<double>(kappa_),
            std::numbers::pi / std::sqrt(static_cast<double>(kappa_))};
    }

    Point north_pole() const {
        Vector c = Vector::Zero(dim_ + 1);
        c[dim_] = radius();
        return Point{std::move(c)};
    }

    /// Validating constructor for points supplied from outside the library.
    Point make_point(Vector coords) const {
        Point p{std::move(coords)};
        check_point(p);
        return p;
    }

    void check_point(const Point& p) const {
        detail::require(p.coords.size() == dim_ + 1, "sphere point: wrong ambient dimension");
        if (std::abs(p.coords.norm() - radius()) > kMembershipTol) {
            throw std::invalid_argument("sphere point: ambient norm differs from kappa^(-1/2)");
        }
    }

    Tangent make_tangent(const Point& base, Vector value) const {
        check_point(base);
        detail::require(value.size() == dim_ + 1, "sphere tangent: wrong ambient dimension");
        if (std::abs(value.dot(base.coords)) > kMembershipTol) {
            throw std::invalid_argument("sphere tangent: not orthogonal to base point");
        }
        return Tangent{base, std::move(value)};
    }

    Tangent zero_tangent(const Point& p) const {
        return Tangent{p, Vector::Zero(dim_ + 1)};
    }

    Point exp(const Point& p, const Tangent& v) const {
        require_same_base(p, v.base, "sphere exp");
        const Scalar sqk = std::sqrt(kappa_);
        const Scalar len = v.value.norm();  // Riemannian norm = ambient norm
        if (len < Scalar(1e-14)) return p;
        const Scalar ang = len * sqk;
        Vector c = std::cos(ang) * p.coords + (std::sin(ang) / sqk) * (v.value / len);
        return Point{std::move(c)};
    }

    /// Inverse of exp; valid strictly inside the cut locus (the antipode).
    /// Writes the result as f(theta) * (q - kappa<q,p> p) with
    /// f = theta/sin(theta), expanded in series near theta = 0.
    Tangent log(const Point& p, const Point& q) const {
        const Scalar c = clamp_unit(kappa_ * p.coords.dot(q.coords));
        const Scalar theta = std::acos(c);  // angle; distance is theta/sqrt(kappa)
        if (theta >= std::numbers::pi - 1e-9) {
            throw std::domain_error(
                "sphere log: point at or beyond the cut locus, distance " +
                std::to_string(theta / std::sqrt(static_cast<double>(kappa_))));
        }
        Scalar f;
        if (theta < Scalar(1e-6)) {
            f = Scalar(1) + theta * theta / Scalar(6);  // theta/sin(theta)
        } else {
            f = theta / std::sin(theta);
        }
        Vector w = f * (q.coords - (kappa_ * q.coords.dot(p.coords)) * p.coords);
        return Tangent{p, std::move(w)};
    }

    Scalar distance(const Point& p, const Point& q) const {
        const Scalar c = clamp_unit(kappa_ * p.coords.dot(q.coords));
        return std::acos(c) / std::sqrt(kappa_);
    }

    Scalar inner(const Point& p, const Tangent& u, const Tangent& v) const {
        require_same_base(p, u.base, "sphere inner");
        require_same_base(p, v.base, "sphere inner");
        return u.value.dot(v.value);
    }

    Scalar norm(const Point& p, const Tangent& v) const {
        require_same_base(p, v.base, "sphere norm");
        return v.value.norm();
    }

    /// Orthogonal projection of an ambient vector onto the tangent plane.
    Tangent project_tangent(const Point& p, const Ambient& w) const {
        Vector t = w - (kappa_ * w.dot(p.coords)) * p.coords;
        return Tangent{p, std::move(t)};
    }

private:
    static Scalar clamp_unit(Scalar x) {
        return std::min(Scalar(1), std::max(Scalar(-1), x));
    }

    void require_same_base(const Point& p, const Point& base, const char* op) const {
        if (p.coords.size() != base.coords.size() ||
            (p.coords - base.coords).cwiseAbs().maxCoeff() > kMembershipTol) {
            throw std::invalid_argument(std::string(op) + ": tangent base differs from point");
        }
    }

    int dim_;
    Scalar kappa_;
};

using Sphere = SphereT<double>;

/// Polar-coordinate sampler on the unit 2-sphere: polar angle from the north
/// pole uniform on [0, r], azimuth uniform on [0, 2pi). The benchmark's data
/// generator; deliberately not area-uniform, mass concentrates near the pole.
inline std::vector<Sphere::Point> sample_ball_uniform_polar(const Sphere& sphere, double r,
                                                            int count, std::mt19937_64& rng) {
    if (sphere.dim() != 2 || sphere.curvature() != 1.0) {
        throw std::domain_error("polar ball sampler is defined on the unit 2-sphere only");
    }
    if (!(r >= 0.0) || r > std::numbers::pi / 4.0) {
        throw std::domain_error("polar ball sampler requires 0 <= r <= pi/4");
    }
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Sphere::Point> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double theta = r * u01(rng);
        const double phi = 2.0 * std::numbers::pi * u01(rng);
        Eigen::Vector3d c(std::sin(theta) * std::cos(phi),
                          std::sin(theta) * std::sin(phi), std::cos(theta));
        out.push_back(Sphere::Point{c});
    }
    return out;
}

}  // namespace riemdp
