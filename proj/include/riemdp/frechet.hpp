#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riemdp/geometry.hpp"

namespace riemdp {

/// A dataset on one manifold together with the geodesic ball assumed to
/// contain it. Construction validates both the ball (curvature/injectivity
/// limit) and the containment of every point, so downstream solvers and
/// samplers can rely on the log map being defined between any two members.
template <Manifold M>
class Dataset {
public:
    using Point = typename M::Point;

    Dataset(M manifold, std::vector<Point> points, GeodesicBall<M> ball)
        : manifold_(std::move(manifold)), points_(std::move(points)), ball_(std::move(ball)) {
        if (points_.empty()) throw std::invalid_argument("dataset: needs at least one point");
        validate_ball(manifold_, ball_);
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const double d = manifold_.distance(ball_.center, points_[i]);
            if (d > ball_.radius + 1e-9) {
                throw std::domain_error("dataset: point " + std::to_string(i) +
                                        " lies at distance " + std::to_string(d) +
                                        " outside the stated ball of radius " +
                                        std::to_string(ball_.radius));
            }
        }
    }

    const M& manifold() const { return manifold_; }
    std::span<const Point> points() const { return points_; }
    const GeodesicBall<M>& ball() const { return ball_; }
    int size() const { return static_cast<int>(points_.size()); }

private:
    M manifold_;
    std::vector<Point> points_;
    GeodesicBall<M> ball_;
};

struct SolverConfig {
    double step = 0.5;        // in (0, 1]
    double grad_tol = 1e-5;   // stop when the gradient norm falls below this
    int max_iter = 500;
    bool track_variance = false;
};

template <Manifold M>
struct FrechetResult {
    typename M::Point mean;
    bool converged = false;
    int iterations = 0;
    double grad_norm = 0.0;
    std::vector<double> variance_trace;  // filled when cfg.track_variance
};

/// F(x; D) = (1/2n) sum_i rho(x_i, x)^2.
template <Manifold M>
double variance(const M& m, const typename M::Point& x,
                std::span<const typename M::Point> points) {
    double acc = 0.0;
    for (const auto& p : points) {
        const double d = m.distance(p, x);
        acc += d * d;
    }
    return acc / (2.0 * static_cast<double>(points.size()));
}

/// -grad F(x; D) = (1/n) sum_i log_x(x_i): the tangent-space sample mean.
/// Equals grad U for the utility U = -F.
template <Manifold M>
typename M::Tangent neg_gradient(const M& m, const typename M::Point& x,
                                 std::span<const typename M::Point> points) {
    typename M::Tangent acc = m.zero_tangent(x);
    for (const auto& p : points) {
        acc.value += m.log(x, p).value;
    }
    acc.value *= 1.0 / static_cast<double>(points.size());
    return acc;
}

template <Manifold M>
double variance(const typename M::Point& x, const Dataset<M>& data) {
    return variance(data.manifold(), x, data.points());
}

template <Manifold M>
typename M::Tangent neg_gradient(const typename M::Point& x, const Dataset<M>& data) {
    return neg_gradient(data.manifold(), x, data.points());
}

/// Riemannian gradient descent for the Frechet mean: iterate
/// x <- exp(x, step * (-grad F)) from the first data point until the
/// gradient norm drops below grad_tol. Non-convergence is reported through
/// the flag, not an exception, so benchmark harnesses can record it.
template <Manifold M>
FrechetResult<M> frechet_mean(const M& m, std::span<const typename M::Point> points,
                              const SolverConfig& cfg = {}) {
    if (points.empty()) throw std::invalid_argument("frechet_mean: empty dataset");
    if (!(cfg.step > 0.0 && cfg.step <= 1.0)) {
        throw std::invalid_argument("frechet_mean: step must lie in (0, 1]");
    }
    FrechetResult<M> res{points[0], false, 0, 0.0, {}};
    if (cfg.track_variance) res.variance_trace.push_back(variance(m, res.mean, points));
    for (int it = 0; it < cfg.max_iter; ++it) {
        typename M::Tangent g = neg_gradient(m, res.mean, points);
        res.grad_norm = m.norm(res.mean, g);
        res.iterations = it;
        if (res.grad_norm < cfg.grad_tol) {
            res.converged = true;
            return res;
        }
        g.value *= cfg.step;
        res.mean = m.exp(res.mean, g);
        if (cfg.track_variance) res.variance_trace.push_back(variance(m, res.mean, points));
    }
    typename M::Tangent g = neg_gradient(m, res.mean, points);
    res.grad_norm = m.norm(res.mean, g);
    res.iterations = cfg.max_iter;
    res.converged = res.grad_norm < cfg.grad_tol;
    return res;
}

template <Manifold M>
FrechetResult<M> frechet_mean(const Dataset<M>& data, const SolverConfig& cfg = {}) {
    return frechet_mean(data.manifold(), data.points(), cfg);
}

}  // namespace riemdp
