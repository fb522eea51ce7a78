#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace riemdp {

// Absolute tolerance on ambient coordinates for membership and tangency checks.
inline constexpr double kMembershipTol = 1e-12;
// Tolerance for exp/log roundtrips and norm/distance consistency.
inline constexpr double kRoundtripTol = 1e-9;

/// Static description of a manifold: intrinsic/ambient dimension, sectional
/// curvature bounds and injectivity radius (+infinity on Hadamard manifolds).
struct ManifoldDescriptor {
    int dimension = 0;
    int ambient_dimension = 0;
    double kappa_max = 0.0;
    double kappa_min = 0.0;
    double injectivity_radius = std::numeric_limits<double>::infinity();
};

/// Largest admissible radius for a geodesic ball hosting a dataset:
/// (1/2) min{ inj M, (pi/2) kappa_max^(-1/2) }, the second term read as
/// +infinity when kappa_max <= 0. Data balls must be strictly smaller.
inline double assumption_radius_limit(const ManifoldDescriptor& d) {
    double curvature_cap = std::numeric_limits<double>::infinity();
    if (d.kappa_max > 0.0) {
        curvature_cap = (std::numbers::pi / 2.0) / std::sqrt(d.kappa_max);
    }
    return 0.5 * std::min(d.injectivity_radius, curvature_cap);
}

/// Contract every concrete geometry implements. Points and tangents are
/// manifold-specific value types; a Tangent carries its base point and the
/// coordinate value in the ambient representation (field `value`).
template <class M>
concept Manifold = requires(const M& m, const typename M::Point& p,
                            const typename M::Tangent& v) {
    typename M::Point;
    typename M::Tangent;
    { m.exp(p, v) } -> std::same_as<typename M::Point>;
    { m.log(p, p) } -> std::same_as<typename M::Tangent>;
    { m.distance(p, p) } -> std::convertible_to<double>;
    { m.inner(p, v, v) } -> std::convertible_to<double>;
    { m.norm(p, v) } -> std::convertible_to<double>;
    { m.zero_tangent(p) } -> std::same_as<typename M::Tangent>;
    { m.descriptor() } -> std::same_as<ManifoldDescriptor>;
    { m.check_point(p) };
};

/// Ball assumed to contain a dataset. Validity against the curvature and
/// injectivity limits is checked once, at Dataset construction.
template <class M>
struct GeodesicBall {
    typename M::Point center;
    double radius = 0.0;
};

template <Manifold M>
void validate_ball(const M& m, const GeodesicBall<M>& ball) {
    if (!(ball.radius > 0.0)) {
        throw std::domain_error("geodesic ball radius must be positive");
    }
    const double limit = assumption_radius_limit(m.descriptor());
    if (!(ball.radius < limit)) {
        throw std::domain_error(
            "geodesic ball radius " + std::to_string(ball.radius) +
            " violates the curvature/injectivity limit " + std::to_string(limit));
    }
    m.check_point(ball.center);
}

namespace detail {

inline void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace detail

}  // namespace riemdp
