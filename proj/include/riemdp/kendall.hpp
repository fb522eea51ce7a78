#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "riemdp/geometry.hpp"

namespace riemdp {

/// A raw planar landmark configuration: k labelled points in the complex
/// plane, with no normalization applied.
using LandmarkConfig = Eigen::VectorXcd;

/// Kendall's shape space of k labelled 2D landmarks. Points are preshapes
/// (centered, unit-norm complex k-vectors); shapes are preshapes modulo
/// rotation e^{i theta}. Tangents are horizontal: centered and Hermitian-
/// orthogonal to the base, so their geodesics project to shape geodesics.
template <typename Scalar>
class KendallT {
public:
    using Complex = std::complex<Scalar>;
    using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
    using Ambient = Vector;

    struct Point {
        Vector coords;
    };
    struct Tangent {
        Point base;
        Vector value;
    };

    explicit KendallT(int landmarks) : k_(landmarks) {
        if (landmarks < 3) throw std::invalid_argument("kendall: need at least 3 landmarks");
    }

    int landmarks() const { return k_; }

    ManifoldDescriptor descriptor() const {
        // Holomorphic sectional curvature is constant 4; the remaining
        // sectional curvatures of CP^(k-2) at this scale lie in [1, 4].
        return ManifoldDescriptor{2 * k_ - 4, 2 * k_, 4.0, 1.0, std::numbers::pi / 2.0};
    }

    /// Center and scale a raw configuration to a preshape. Rejects
    /// configurations that collapse to a single repeated point.
    Point to_preshape(const LandmarkConfig& c) const {
        detail::require(c.size() == k_, "kendall: configuration has wrong landmark count");
        Vector centered = c.array() - c.mean();
        const Scalar nrm = centered.norm();
        if (nrm <= Scalar(1e-12)) {
            throw std::domain_error("kendall: degenerate configuration (all landmarks equal)");
        }
        return Point{centered / nrm};
    }

    Point make_point(Vector coords) const {
        Point p{std::move(coords)};
        check_point(p);
        return p;
    }

    void check_point(const Point& p) const {
        detail::require(p.coords.size() == k_, "kendall point: wrong landmark count");
        if (std::abs(p.coords.mean()) > kMembershipTol) {
            throw std::invalid_argument("kendall point: landmarks are not centered");
        }
        if (std::abs(p.coords.norm() - Scalar(1)) > kMembershipTol) {
            throw std::invalid_argument("kendall point: landmarks are not unit norm");
        }
    }

    void check_tangent(const Tangent& v) const {
        check_point(v.base);
        detail::require(v.value.size() == k_, "kendall tangent: wrong landmark count");
        if (std::abs(v.value.sum()) > kMembershipTol) {
            throw std::invalid_argument("kendall tangent: not centered");
        }
        if (std::abs(herm(v.base.coords, v.value)) > kMembershipTol) {
            throw std::invalid_argument("kendall tangent: not horizontal at base");
        }
    }

    Tangent zero_tangent(const Point& p) const { return Tangent{p, Vector::Zero(k_)}; }

    /// Optimal rotation of q onto p: returns (e^{i theta*} q, theta*) with
    /// sum_j p_j conj(q~_j) real and nonnegative, which attains the infimum
    /// in the shape distance.
    std::pair<Point, Scalar> align(const Point& p, const Point& q) const {
        const Complex z = herm(p.coords, q.coords);
        if (std::abs(z) <= Scalar(1e-15)) {
            throw std::domain_error(
                "kendall align: shapes at maximal distance pi/2, rotation undefined");
        }
        Scalar theta = std::arg(z);
        Vector rotated = std::polar(Scalar(1), theta) * q.coords;
        if (theta < Scalar(0)) theta += Scalar(2) * std::numbers::pi_v<Scalar>;
        return {Point{std::move(rotated)}, theta};
    }

    /// rho(x, y) = arccos |<x, y>|, in [0, pi/2]; rotation invariant. Near
    /// zero, where arccos loses half the significant digits, the angle is
    /// recovered from the chord of the rotationally aligned pair instead.
    Scalar distance(const Point& x, const Point& y) const {
        const Complex z = herm(x.coords, y.coords);
        const Scalar a = std::abs(z);
        if (a < Scalar(0.99)) return std::acos(a);
        const Scalar chord = (std::polar(Scalar(1), std::arg(z)) * y.coords - x.coords).norm();
        return Scalar(2) * std::asin(std::min(Scalar(1), chord / Scalar(2)));
    }

    Scalar inner(const Point& p, const Tangent& u, const Tangent& v) const {
        require_same_base(p, u.base, "kendall inner");
        require_same_base(p, v.base, "kendall inner");
        return herm(u.value, v.value).real();
    }

    Scalar norm(const Point& p, const Tangent& v) const {
        require_same_base(p, v.base, "kendall norm");
        return v.value.norm();
    }

    /// Horizontal geodesic: x cos(s) + (v/||v||) sin(s), s = ||v||. Stays
    /// centered and unit-norm along its whole length.
    Point exp(const Point& x, const Tangent& v) const {
        require_same_base(x, v.base, "kendall exp");
        const Scalar s = v.value.norm();
        if (s < Scalar(1e-14)) return x;
        Vector out = std::cos(s) * x.coords + (std::sin(s) / s) * v.value;
        return Point{std::move(out)};
    }

    /// Log map: align y to x, strip the component along x from the aligned
    /// residual and rescale to the shape distance. Defined for
    /// 0 <= rho(x,y) < pi/2; same shape (up to rotation) maps to zero.
    Tangent log(const Point& x, const Point& y) const {
        const Scalar d = distance(x, y);
        if (d >= std::numbers::pi_v<Scalar> / 2 - Scalar(1e-12)) {
            throw std::domain_error("kendall log: shape distance " + std::to_string(d) +
                                    " is at the injectivity radius pi/2");
        }
        if (d < Scalar(1e-9)) return zero_tangent(x);
        Point aligned = align(x, y).first;
        // after alignment <aligned, x> is real and equals cos(d)
        const Complex c = herm(aligned.coords, x.coords);
        Vector w = aligned.coords - c * x.coords;
        const Scalar wn = w.norm();
        return Tangent{x, (d / wn) * w};
    }

    /// Metric-orthogonal projection of an ambient vector onto the horizontal
    /// tangent space at x: center, then remove the complex span of x (which
    /// kills the sphere-normal and vertical rotation directions at once).
    Tangent make_horizontal(const Point& x, const Ambient& w) const {
        Vector centered = w.array() - w.mean();
        Vector out = centered - herm(centered, x.coords) * x.coords;
        return Tangent{x, std::move(out)};
    }

    Tangent project_tangent(const Point& x, const Ambient& w) const {
        return make_horizontal(x, w);
    }

    /// sum_j a_j conj(b_j)
    static Complex herm(const Vector& a, const Vector& b) { return b.dot(a); }

private:
    void require_same_base(const Point& p, const Point& base, const char* op) const {
        if (p.coords.size() != base.coords.size() ||
            (p.coords - base.coords).cwiseAbs().maxCoeff() > kMembershipTol) {
            throw std::invalid_argument(std::string(op) + ": tangent base differs from point");
        }
    }

    int k_;
};

using Kendall = KendallT<double>;

}  // namespace riemdp
