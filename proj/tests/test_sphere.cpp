#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "riemdp/sphere.hpp"
#include "test_util.hpp"

using namespace riemdp;
namespace tu = riemdp::testutil;

namespace {
const double kPi = std::numbers::pi;

Sphere::Point pt(double x, double y, double z) {
    return Sphere::Point{Eigen::Vector3d(x, y, z)};
}
}  // namespace

TEST_CASE("exp map: zero velocity and axis-aligned arcs") {
    Sphere m(2);
    const auto pole = m.north_pole();

    auto same = m.exp(pole, m.zero_tangent(pole));
    CHECK((same.coords - pole.coords).norm() == doctest::Approx(0.0).epsilon(1e-15));

    Sphere::Tangent quarter{pole, Eigen::Vector3d(kPi / 2.0, 0.0, 0.0)};
    auto east = m.exp(pole, quarter);
    CHECK((east.coords - Eigen::Vector3d(1, 0, 0)).norm() < 1e-12);

    Sphere::Tangent half{pole, Eigen::Vector3d(kPi, 0.0, 0.0)};
    auto antipode = m.exp(pole, half);
    CHECK((antipode.coords - Eigen::Vector3d(0, 0, -1)).norm() < 1e-12);
}

TEST_CASE("log map: fixed points and the quarter-arc inverse") {
    Sphere m(2);
    const auto pole = m.north_pole();

    auto zero = m.log(pole, pole);
    CHECK(zero.value.norm() == doctest::Approx(0.0).epsilon(1e-15));

    auto v = m.log(pole, pt(1, 0, 0));
    CHECK((v.value - Eigen::Vector3d(kPi / 2.0, 0.0, 0.0)).norm() < 1e-12);
}

TEST_CASE("log map rejects the antipode and names the distance") {
    Sphere m(2);
    const auto pole = m.north_pole();
    CHECK_THROWS_AS(m.log(pole, pt(0, 0, -1)), std::domain_error);
}

TEST_CASE("distance: identity, right angle, diameter, clamping") {
    Sphere m(2);
    const auto pole = m.north_pole();
    CHECK(m.distance(pole, pole) == doctest::Approx(0.0));
    CHECK(m.distance(pole, pt(1, 0, 0)) == doctest::Approx(kPi / 2.0));
    CHECK(m.distance(pole, pt(0, 0, -1)) == doctest::Approx(kPi));

    // dot products a hair above 1 in magnitude must not produce NaN
    Eigen::Vector3d q(std::sqrt(0.5), std::sqrt(0.5), 0.0);
    auto a = Sphere::Point{q};
    CHECK(std::isfinite(m.distance(a, a)));
    CHECK(m.distance(a, a) == doctest::Approx(0.0));
}

TEST_CASE("roundtrip, norm consistency and arc length on random pairs") {
    std::mt19937_64 rng(11);
    for (double kappa : {1.0, 4.0}) {
        for (int d : {2, 3}) {
            SphereT<double> m(d, kappa);
            Sphere::Point base = m.north_pole();
            for (int trial = 0; trial < 300; ++trial) {
                auto p = tu::random_point_near(m, base, 0.3 * m.radius(), rng);
                auto q = tu::random_point_near(m, p, kPi / 4.0 * m.radius(), rng);
                auto v = m.log(p, q);
                CHECK(m.norm(p, v) == doctest::Approx(m.distance(p, q)).epsilon(1e-9));
                auto back = m.exp(p, v);
                CHECK((back.coords - q.coords).norm() < 1e-9);

                auto u = tu::random_unit_tangent(m, p, rng);
                const double t = 0.7 * m.radius();
                u.value *= t;
                CHECK(m.distance(p, m.exp(p, u)) == doctest::Approx(t).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("log near theta = 0 stays accurate") {
    Sphere m(2);
    const auto pole = m.north_pole();
    Sphere::Tangent tiny{pole, Eigen::Vector3d(1e-8, 0, 0)};
    auto q = m.exp(pole, tiny);
    auto v = m.log(pole, q);
    CHECK(std::abs(v.value.norm() - 1e-8) < 1e-15);
}

TEST_CASE("rotation equivariance of distance and exp") {
    std::mt19937_64 rng(12);
    Sphere m(2);
    const auto pole = m.north_pole();
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd o = tu::random_orthogonal(3, rng);
        auto p = tu::random_point_near(m, pole, 1.0, rng);
        auto q = tu::random_point_near(m, pole, 1.0, rng);
        auto op = Sphere::Point{o * p.coords};
        auto oq = Sphere::Point{o * q.coords};
        CHECK(m.distance(op, oq) == doctest::Approx(m.distance(p, q)).epsilon(1e-12));

        auto v = tu::random_unit_tangent(m, p, rng);
        v.value *= 0.5;
        auto ov = Sphere::Tangent{op, o * v.value};
        CHECK((Eigen::VectorXd(o * m.exp(p, v).coords) - m.exp(op, ov).coords).norm() < 1e-12);
    }
}

TEST_CASE("tangent projection is idempotent and fixes tangent vectors") {
    std::mt19937_64 rng(13);
    Sphere m(2);
    const auto pole = m.north_pole();
    for (int trial = 0; trial < 50; ++trial) {
        auto p = tu::random_point_near(m, pole, 1.0, rng);
        Eigen::VectorXd w = tu::gaussian_vector(3, rng);
        auto once = m.project_tangent(p, w);
        auto twice = m.project_tangent(p, once.value);
        CHECK((once.value - twice.value).norm() < 1e-12);
        CHECK(std::abs(once.value.dot(p.coords)) < 1e-12);

        auto t = tu::random_unit_tangent(m, p, rng);
        auto same = m.project_tangent(p, t.value);
        CHECK((same.value - t.value).norm() < 1e-12);
    }
}

TEST_CASE("base point mismatch is rejected") {
    Sphere m(2);
    const auto pole = m.north_pole();
    const auto east = pt(1, 0, 0);
    Sphere::Tangent at_east{east, Eigen::Vector3d(0, 0, 1)};
    CHECK_THROWS_AS(m.exp(pole, at_east), std::invalid_argument);
    CHECK_THROWS_AS(m.inner(pole, at_east, at_east), std::invalid_argument);
}

TEST_CASE("membership validation") {
    Sphere m(2);
    CHECK_THROWS_AS(m.make_point(Eigen::Vector3d(1.0, 1.0, 0.0)), std::invalid_argument);
    CHECK_NOTHROW(m.make_point(Eigen::Vector3d(0.0, 1.0, 0.0)));
    SphereT<double> quarter(2, 4.0);  // radius 1/2
    CHECK_NOTHROW(quarter.make_point(Eigen::Vector3d(0.0, 0.0, 0.5)));
    CHECK_THROWS_AS(quarter.make_point(Eigen::Vector3d(0.0, 0.0, 1.0)), std::invalid_argument);
}

TEST_CASE("polar ball sampler: support, degenerate radius, mean polar angle") {
    Sphere m(2);
    const auto pole = m.north_pole();
    std::mt19937_64 rng(14);

    auto zero = sample_ball_uniform_polar(m, 0.0, 25, rng);
    for (const auto& p : zero) CHECK((p.coords - pole.coords).norm() < 1e-12);

    const double r = kPi / 8.0;
    const int n = 10000;
    auto pts = sample_ball_uniform_polar(m, r, n, rng);
    REQUIRE(pts.size() == n);
    double max_dist = 0.0, mean_polar = 0.0;
    for (const auto& p : pts) {
        const double d = m.distance(pole, p);
        max_dist = std::max(max_dist, d);
        mean_polar += d;
    }
    mean_polar /= n;
    CHECK(max_dist <= r + 1e-12);

    // polar angle ~ Uniform[0, r]: mean r/2 = pi/16, se = (r/sqrt(12))/sqrt(n)
    const double se = (r / std::sqrt(12.0)) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(mean_polar - kPi / 16.0) <= 3.0 * se);

    CHECK_THROWS_AS(sample_ball_uniform_polar(m, kPi / 2.0, 1, rng), std::domain_error);
    SphereT<double> curved(2, 4.0);
    CHECK_THROWS_AS(sample_ball_uniform_polar(curved, r, 1, rng), std::domain_error);
}

TEST_CASE("descriptor reflects curvature and injectivity radius") {
    SphereT<double> m(2, 4.0);
    auto d = m.descriptor();
    CHECK(d.dimension == 2);
    CHECK(d.ambient_dimension == 3);
    CHECK(d.kappa_max == doctest::Approx(4.0));
    CHECK(d.injectivity_radius == doctest::Approx(kPi / 2.0));
    CHECK(assumption_radius_limit(d) == doctest::Approx(0.5 * std::min(kPi / 2.0, kPi / 4.0)));
}
