#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <vector>

#include "riemdp/frechet.hpp"
#include "riemdp/kendall.hpp"
#include "riemdp/spd.hpp"
#include "riemdp/sphere.hpp"

namespace riemdp::testutil {

inline Eigen::VectorXd gaussian_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = g(rng);
    return v;
}

/// Random unit tangent at p, by projecting an ambient Gaussian.
inline Sphere::Tangent random_unit_tangent(const Sphere& m, const Sphere::Point& p,
                                           std::mt19937_64& rng) {
    for (;;) {
        auto t = m.project_tangent(p, gaussian_vector(m.dim() + 1, rng));
        const double n = t.value.norm();
        if (n > 1e-8) {
            t.value /= n;
            return t;
        }
    }
}

/// Point at a uniform distance in (0, radius] along a random geodesic from p.
inline Sphere::Point random_point_near(const Sphere& m, const Sphere::Point& p, double radius,
                                       std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto t = random_unit_tangent(m, p, rng);
    t.value *= radius * u(rng);
    return m.exp(p, t);
}

inline Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    return q;
}

inline Eigen::MatrixXd random_symmetric(int k, double scale, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, scale);
    Eigen::MatrixXd m(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
            m(i, j) = g(rng);
            m(j, i) = m(i, j);
        }
    }
    return m;
}

/// Random SPD point within geodesic distance at most `radius` of the
/// identity: exp_I(v) for a symmetric v with Frobenius norm <= radius.
inline Spd::Point random_spd_near_identity(const Spd& m, double radius, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd v = random_symmetric(m.order(), 1.0, rng);
    const double n = v.norm();
    if (n > 1e-12) v *= radius * u(rng) / n;
    Spd::Point eye{Eigen::MatrixXd::Identity(m.order(), m.order())};
    return m.exp(eye, Spd::Tangent{eye, v});
}

inline Kendall::Point random_preshape(const Kendall& m, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    LandmarkConfig c(m.landmarks());
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = std::complex<double>(g(rng), g(rng));
    return m.to_preshape(c);
}

/// Random preshape within shape distance at most `radius` of x.
inline Kendall::Point random_preshape_near(const Kendall& m, const Kendall::Point& x,
                                           double radius, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        Kendall::Vector raw(m.landmarks());
        for (Eigen::Index i = 0; i < raw.size(); ++i) {
            raw[i] = std::complex<double>(g(rng), g(rng));
        }
        auto t = m.make_horizontal(x, raw);
        const double n = t.value.norm();
        if (n < 1e-8) continue;
        t.value *= radius * u(rng) / n;
        return m.exp(x, t);
    }
}

inline Dataset<Sphere> make_sphere_dataset(int n, double r, std::mt19937_64& rng) {
    Sphere m(2);
    auto pts = sample_ball_uniform_polar(m, r, n, rng);
    return Dataset<Sphere>(m, std::move(pts), GeodesicBall<Sphere>{m.north_pole(), r});
}

inline Dataset<Spd> make_spd_dataset(int n, double r, std::mt19937_64& rng) {
    Spd m(2);
    std::vector<Spd::Point> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) pts.push_back(random_spd_near_identity(m, r, rng));
    Spd::Point center{Eigen::MatrixXd::Identity(2, 2)};
    return Dataset<Spd>(m, std::move(pts), GeodesicBall<Spd>{center, r});
}

inline Dataset<Kendall> make_kendall_dataset(int n, int k, double r, std::mt19937_64& rng) {
    Kendall m(k);
    auto center = random_preshape(m, rng);
    std::vector<Kendall::Point> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) pts.push_back(random_preshape_near(m, center, r, rng));
    return Dataset<Kendall>(m, std::move(pts), GeodesicBall<Kendall>{center, r});
}

}  // namespace riemdp::testutil
