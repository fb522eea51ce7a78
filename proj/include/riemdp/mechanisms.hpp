#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "riemdp/calibration.hpp"
#include "riemdp/frechet.hpp"
#include "riemdp/geometry.hpp"
#include "riemdp/kendall.hpp"
#include "riemdp/spd.hpp"
#include "riemdp/sphere.hpp"

namespace riemdp {

// ---------------------------------------------------------------------------
// Chain plumbing
// ---------------------------------------------------------------------------

struct ChainConfig {
    long burn_in = 5000;
    long thin = 5000;
    double step_scale = 0.5;  // t in (0, 1]
    std::uint64_t seed = 0;

    void validate() const {
        if (burn_in < 0) throw std::invalid_argument("chain config: burn_in must be >= 0");
        if (thin < 1) throw std::invalid_argument("chain config: thin must be >= 1");
        if (!(step_scale > 0.0 && step_scale <= 1.0)) {
            throw std::invalid_argument("chain config: step_scale must lie in (0, 1]");
        }
    }
};

inline ChainConfig sphere_chain_defaults() { return ChainConfig{20000, 600, 0.5, 0}; }
inline ChainConfig spd_chain_defaults() { return ChainConfig{5000, 5000, 0.5, 0}; }
inline ChainConfig kendall_chain_defaults() { return ChainConfig{7500, 500, 0.5, 0}; }

struct ChainDiagnostics {
    long proposals = 0;
    long accepted = 0;
    bool stall_warning = false;  // a full 10*thin window went by without an accept

    double acceptance_rate() const {
        return proposals > 0 ? static_cast<double>(accepted) / static_cast<double>(proposals)
                             : 0.0;
    }
};

/// Metropolis chain for an unnormalized density exp(-neglog(x)): proposals
/// from a symmetric-treated kernel, acceptance min(1, exp(neglog(x) -
/// neglog(x'))), current state retained on rejection. Discards burn_in
/// steps, then emits every thin-th state. Deterministic given cfg.seed.
template <Manifold M, class NegLog, class Proposal>
std::vector<typename M::Point> sample_mh(const M& m, NegLog&& neglog,
                                         const typename M::Point& start, Proposal&& propose,
                                         const ChainConfig& cfg, int count,
                                         ChainDiagnostics* diag = nullptr) {
    cfg.validate();
    if (count < 1) throw std::invalid_argument("sample_mh: count must be >= 1");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    typename M::Point x = start;
    double lx = neglog(x);
    if (!std::isfinite(lx)) {
        throw std::domain_error("sample_mh: start point has zero target density");
    }

    ChainDiagnostics local;
    const long total = cfg.burn_in + static_cast<long>(count) * cfg.thin;
    const long window = 10 * cfg.thin;
    long window_accepts = 0;

    std::vector<typename M::Point> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long step = 1; step <= total; ++step) {
        typename M::Point proposal = propose(m, x, rng);
        const double lp = neglog(proposal);
        const double u = u01(rng);
        ++local.proposals;
        if (std::log(u) < lx - lp) {
            x = std::move(proposal);
            lx = lp;
            ++local.accepted;
            ++window_accepts;
        }
        if (step % window == 0) {
            if (window_accepts == 0) local.stall_warning = true;
            window_accepts = 0;
        }
        if (step > cfg.burn_in && (step - cfg.burn_in) % cfg.thin == 0) {
            out.push_back(x);
        }
    }
    if (diag) *diag = local;
    return out;
}

// ---------------------------------------------------------------------------
// Target densities (negative log, unnormalized, ball-restricted)
// ---------------------------------------------------------------------------

/// KNG target: (1/sigma) || (1/n) sum_i log_x(x_i) ||_x inside the data
/// ball, +inf outside. Instances hold scratch buffers; use one per chain.
template <Manifold M>
class KngDensity {
public:
    KngDensity(const Dataset<M>& data, double sigma) : data_(&data), sigma_(sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("kng density: sigma must be > 0");
    }

    double operator()(const typename M::Point& x) const {
        const auto& m = data_->manifold();
        if (m.distance(data_->ball().center, x) > data_->ball().radius) {
            return std::numeric_limits<double>::infinity();
        }
        auto g = neg_gradient(m, x, data_->points());
        return m.norm(x, g) / sigma_;
    }

    double sigma() const { return sigma_; }

private:
    const Dataset<M>* data_;
    double sigma_;
};

/// Sphere specialization: the dataset is stacked once and each evaluation is
/// two mat-vec products plus n scalar acos calls, instead of n log maps.
template <typename S>
class KngDensity<SphereT<S>> {
public:
    using M = SphereT<S>;

    KngDensity(const Dataset<M>& data, double sigma)
        : manifold_(data.manifold()), sigma_(sigma), center_(data.ball().center.coords),
          radius_(data.ball().radius) {
        if (!(sigma > 0.0)) throw std::invalid_argument("kng density: sigma must be > 0");
        const auto pts = data.points();
        stacked_.resize(center_.size(), static_cast<Eigen::Index>(pts.size()));
        for (Eigen::Index i = 0; i < stacked_.cols(); ++i) {
            stacked_.col(i) = pts[static_cast<std::size_t>(i)].coords;
        }
        dots_.resize(stacked_.cols());
        coeff_.resize(stacked_.cols());
    }

    double operator()(const typename M::Point& x) const {
        const S kappa = manifold_.curvature();
        const S sqk = std::sqrt(kappa);
        const S cc = std::clamp(kappa * center_.dot(x.coords), S(-1), S(1));
        if (std::acos(cc) / sqk > radius_) return std::numeric_limits<double>::infinity();

        dots_.noalias() = stacked_.transpose() * x.coords;
        for (Eigen::Index i = 0; i < dots_.size(); ++i) {
            const S c = std::clamp(kappa * dots_[i], S(-1), S(1));
            const S theta = std::acos(c);
            coeff_[i] = theta < S(1e-6) ? S(1) + theta * theta / S(6) : theta / std::sin(theta);
        }
        // sum_i f_i (q_i - kappa <q_i, x> x) = X f - kappa (f . dots) x
        sum_.noalias() = stacked_ * coeff_;
        sum_ -= (kappa * coeff_.dot(dots_)) * x.coords;
        return sum_.norm() / (sigma_ * static_cast<double>(stacked_.cols()));
    }

    double sigma() const { return sigma_; }

private:
    M manifold_;
    double sigma_;
    typename M::Vector center_;
    double radius_;
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> stacked_;
    mutable Eigen::Matrix<S, Eigen::Dynamic, 1> dots_, coeff_, sum_;
};

/// SPD specialization: x^(-1/2) and the ball check factor are computed once
/// per evaluation and shared across the n log maps, using the identity
/// || sum_i log_x(x_i) ||_x = || sum_i Log(x^(-1/2) x_i x^(-1/2)) ||_F.
template <typename S>
class KngDensity<SpdT<S>> {
public:
    using M = SpdT<S>;
    using Matrix = typename M::Matrix;

    KngDensity(const Dataset<M>& data, double sigma)
        : manifold_(data.manifold()), sigma_(sigma), radius_(data.ball().radius) {
        if (!(sigma > 0.0)) throw std::invalid_argument("kng density: sigma must be > 0");
        points_.assign(data.points().begin(), data.points().end());
        Eigen::SelfAdjointEigenSolver<Matrix> es(data.ball().center.mat);
        center_isqrt_ = inv_sqrt(es);
    }

    double operator()(const typename M::Point& x) const {
        if (manifold_.order() == 2) return eval_2x2(x);
        return eval_general(x);
    }

    double sigma() const { return sigma_; }

private:
    double eval_general(const typename M::Point& x) const {
        const int k = manifold_.order();
        Eigen::SelfAdjointEigenSolver<Matrix> es_ball(
            M::symmetrize(center_isqrt_ * x.mat * center_isqrt_), Eigen::EigenvaluesOnly);
        double d2 = 0.0;
        for (int i = 0; i < k; ++i) {
            const double lg = std::log(std::max(1e-300, es_ball.eigenvalues()[i]));
            d2 += lg * lg;
        }
        if (std::sqrt(d2) > radius_) return std::numeric_limits<double>::infinity();

        Eigen::SelfAdjointEigenSolver<Matrix> es_x(x.mat);
        const Matrix x_isqrt = inv_sqrt(es_x);
        Matrix acc = Matrix::Zero(k, k);
        for (const auto& p : points_) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(M::symmetrize(x_isqrt * p.mat * x_isqrt));
            typename M::Vector lam = es.eigenvalues();
            for (int i = 0; i < k; ++i) lam[i] = std::log(std::max(1e-300, lam[i]));
            acc.noalias() += es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
        }
        return acc.norm() / (sigma_ * static_cast<double>(points_.size()));
    }

    // closed-form symmetric 2x2 path, the benchmark's hot loop
    double eval_2x2(const typename M::Point& x) const {
        using M2 = Eigen::Matrix<S, 2, 2>;
        const M2 ci = center_isqrt_;
        const M2 xm = x.mat;
        if (log_norm_2x2(ci * xm * ci) > radius_) {
            return std::numeric_limits<double>::infinity();
        }
        const M2 xi = inv_sqrt_2x2(xm);
        M2 acc = M2::Zero();
        for (const auto& p : points_) {
            acc += log_2x2(xi * p.mat * xi);
        }
        return acc.norm() / (sigma_ * static_cast<double>(points_.size()));
    }

    template <class M2>
    static void eig_2x2(const M2& a, S& l1, S& l2, S& c, S& s) {
        // eigenvalues/rotation of [[a00, a01], [a01, a11]]
        const S half_tr = (a(0, 0) + a(1, 1)) / S(2);
        const S off = (a(0, 1) + a(1, 0)) / S(2);
        const S half_diff = (a(0, 0) - a(1, 1)) / S(2);
        const S root = std::sqrt(half_diff * half_diff + off * off);
        l1 = half_tr + root;
        l2 = half_tr - root;
        if (root < S(1e-300)) {
            c = S(1);
            s = S(0);
            return;
        }
        // eigenvector for l1: (off, l1 - a00) or (l1 - a11, off), whichever
        // branch is numerically safe
        S vx, vy;
        if (half_diff >= S(0)) {
            vx = half_diff + root;
            vy = off;
        } else {
            vx = off;
            vy = root - half_diff;
        }
        const S n = std::sqrt(vx * vx + vy * vy);
        c = vx / n;
        s = vy / n;
    }

    static Eigen::Matrix<S, 2, 2> log_2x2(const Eigen::Matrix<S, 2, 2>& a) {
        S l1, l2, c, s;
        eig_2x2(a, l1, l2, c, s);
        const S g1 = std::log(std::max(S(1e-300), l1));
        const S g2 = std::log(std::max(S(1e-300), l2));
        Eigen::Matrix<S, 2, 2> out;
        out(0, 0) = g1 * c * c + g2 * s * s;
        out(0, 1) = (g1 - g2) * c * s;
        out(1, 0) = out(0, 1);
        out(1, 1) = g1 * s * s + g2 * c * c;
        return out;
    }

    static S log_norm_2x2(const Eigen::Matrix<S, 2, 2>& a) {
        S l1, l2, c, s;
        eig_2x2(a, l1, l2, c, s);
        const S g1 = std::log(std::max(S(1e-300), l1));
        const S g2 = std::log(std::max(S(1e-300), l2));
        return std::sqrt(g1 * g1 + g2 * g2);
    }

    static Eigen::Matrix<S, 2, 2> inv_sqrt_2x2(const Eigen::Matrix<S, 2, 2>& a) {
        S l1, l2, c, s;
        eig_2x2(a, l1, l2, c, s);
        const S g1 = S(1) / std::sqrt(std::max(S(1e-300), l1));
        const S g2 = S(1) / std::sqrt(std::max(S(1e-300), l2));
        Eigen::Matrix<S, 2, 2> out;
        out(0, 0) = g1 * c * c + g2 * s * s;
        out(0, 1) = (g1 - g2) * c * s;
        out(1, 0) = out(0, 1);
        out(1, 1) = g1 * s * s + g2 * c * c;
        return out;
    }

    static Matrix inv_sqrt(const Eigen::SelfAdjointEigenSolver<Matrix>& es) {
        typename M::Vector lam = es.eigenvalues();
        for (int i = 0; i < lam.size(); ++i) {
            if (lam[i] < SpdT<S>::kEigenvalueFloor) {
                throw std::domain_error("kng density: matrix singular to working precision");
            }
            lam[i] = S(1) / std::sqrt(lam[i]);
        }
        return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    }

    M manifold_;
    double sigma_;
    double radius_;
    std::vector<typename M::Point> points_;
    Matrix center_isqrt_;
};

/// Intrinsic Laplace target: (1/sigma) rho(x, eta), ball-restricted the same
/// way as the KNG target.
template <Manifold M>
class LaplaceDensity {
public:
    LaplaceDensity(M manifold, typename M::Point eta, GeodesicBall<M> ball, double sigma)
        : manifold_(std::move(manifold)), eta_(std::move(eta)), ball_(std::move(ball)),
          sigma_(sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("laplace density: sigma must be > 0");
    }

    double operator()(const typename M::Point& x) const {
        if (manifold_.distance(ball_.center, x) > ball_.radius) {
            return std::numeric_limits<double>::infinity();
        }
        return manifold_.distance(x, eta_) / sigma_;
    }

    double sigma() const { return sigma_; }

private:
    M manifold_;
    typename M::Point eta_;
    GeodesicBall<M> ball_;
    double sigma_;
};

// ---------------------------------------------------------------------------
// Proposal kernels (all propose x' = exp(x, t * w))
// ---------------------------------------------------------------------------

/// Sphere kernel: a standard Gaussian ambient vector rescaled to length
/// sigma and projected onto the tangent plane, so ||w|| <= sigma.
struct SphereProposal {
    double sigma;
    double step_scale;

    template <typename S>
    typename SphereT<S>::Point operator()(const SphereT<S>& m,
                                          const typename SphereT<S>::Point& x,
                                          std::mt19937_64& rng) const {
        std::normal_distribution<double> gauss(0.0, 1.0);
        typename SphereT<S>::Vector g(x.coords.size());
        for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = gauss(rng);
        const double n = g.norm();
        if (n < 1e-300) return x;
        g *= sigma / n;
        auto v = m.project_tangent(x, g);
        v.value *= step_scale;
        return m.exp(x, v);
    }
};

/// SPD kernel: unvech of k(k+1)/2 independent Uniform[-0.5, 0.5] draws,
/// scaled by t * sigma and applied additively in the vech chart. The
/// additive form is exactly sign-symmetric, so the plain Metropolis ratio
/// targets the written density with respect to Lebesgue measure on vech
/// coordinates; combined with the volume-measure shift below the chain
/// leaves the intended density against d(mu) invariant. (Stepping with the
/// exponential map instead injects the positive-semidefinite second-order
/// term (t sigma)^2 v x^{-1} v / 2 for either sign of v, an outward drift
/// the plain ratio cannot correct; it measurably inflates the sampled
/// spread on wide data balls.) Candidates outside the cone are declined in
/// place, which is the rejection of a zero-density proposal.
struct SpdProposal {
    double sigma;
    double step_scale;

    template <typename S>
    typename SpdT<S>::Point operator()(const SpdT<S>& m, const typename SpdT<S>::Point& x,
                                       std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        Eigen::VectorXd raw(m.order() * (m.order() + 1) / 2);
        for (Eigen::Index i = 0; i < raw.size(); ++i) raw[i] = u(rng);
        typename SpdT<S>::Matrix candidate =
            x.mat + step_scale * sigma * unvech(raw).template cast<S>();
        Eigen::SelfAdjointEigenSolver<typename SpdT<S>::Matrix> es(candidate,
                                                                   Eigen::EigenvaluesOnly);
        if (!(es.eigenvalues().minCoeff() > SpdT<S>::kEigenvalueFloor)) return x;
        return typename SpdT<S>::Point{std::move(candidate)};
    }
};

/// Shift turning a volume-measure target into the coordinates in which the
/// manifold's proposal kernel is symmetric. The sphere and shape-space
/// kernels take isotropic steps through the exponential map and are already
/// volume-symmetric to second order; the SPD kernel moves additively in the
/// vech chart, where d(mu) = det(x)^{-(k+1)/2} dLeb.
template <Manifold M>
double base_measure_shift(const M&, const typename M::Point&) {
    return 0.0;
}

template <typename S>
double base_measure_shift(const SpdT<S>& m, const typename SpdT<S>::Point& x) {
    const double k = static_cast<double>(m.order());
    return 0.5 * (k + 1.0) *
           static_cast<double>(std::log(std::max(S(1e-300), x.mat.determinant())));
}

/// Negative log target for a chain whose proposal kernel is symmetric in
/// chart coordinates: the mechanism density plus the base-measure shift.
template <Manifold M, class NegLog>
auto chain_target(const M& m, NegLog&& neglog) {
    return [&m, neglog = std::forward<NegLog>(neglog)](const typename M::Point& x) {
        const double v = neglog(x);
        if (!std::isfinite(v)) return v;
        return v + base_measure_shift(m, x);
    };
}

/// Kendall kernel: components with Uniform(0,1) real and imaginary parts,
/// centered and projected to the horizontal space; the step is controlled
/// by t alone (the raw draw has norm ~ sqrt(k/6), so t carries the scale).
struct KendallProposal {
    double step_scale;

    template <typename S>
    typename KendallT<S>::Point operator()(const KendallT<S>& m,
                                           const typename KendallT<S>::Point& x,
                                           std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        typename KendallT<S>::Vector raw(m.landmarks());
        for (Eigen::Index i = 0; i < raw.size(); ++i) {
            raw[i] = std::complex<S>(u(rng), u(rng));
        }
        auto v = m.make_horizontal(x, raw);
        v.value *= step_scale;
        return m.exp(x, v);
    }
};

template <typename S>
SphereProposal default_proposal(const SphereT<S>&, double sigma, double step_scale) {
    return SphereProposal{sigma, step_scale};
}
template <typename S>
SpdProposal default_proposal(const SpdT<S>&, double sigma, double step_scale) {
    return SpdProposal{sigma, step_scale};
}
template <typename S>
KendallProposal default_proposal(const KendallT<S>&, double /*sigma*/, double step_scale) {
    return KendallProposal{step_scale};
}

/// Independence kernel on the unit 2-sphere: area-uniform draws over the
/// support cap. Its proposal density is constant on the support, so the
/// plain-ratio Metropolis accept step is exact for this kernel; it exists
/// to audit the random-walk kernels against an unquestionably correct one.
class SphereBallIndependenceProposal {
public:
    SphereBallIndependenceProposal(const Sphere::Point& center, double radius)
        : radius_(radius) {
        // rotation taking the north pole to the cap center
        const Eigen::Vector3d c = center.coords;
        const Eigen::Vector3d pole(0.0, 0.0, 1.0);
        rot_ = Eigen::Quaterniond::FromTwoVectors(pole, c).toRotationMatrix();
    }

    Sphere::Point operator()(const Sphere&, const Sphere::Point&, std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const double z = 1.0 - u01(rng) * (1.0 - std::cos(radius_));
        const double phi = 2.0 * std::numbers::pi * u01(rng);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        Eigen::Vector3d p(s * std::cos(phi), s * std::sin(phi), z);
        return Sphere::Point{rot_ * p};
    }

private:
    double radius_;
    Eigen::Matrix3d rot_;
};

// ---------------------------------------------------------------------------
// Mechanism releases
// ---------------------------------------------------------------------------

template <Manifold M>
struct MechanismResult {
    typename M::Point point;
    std::string mechanism;
    double sigma = 0.0;
    ChainDiagnostics chain;
};

/// One draw from the KNG density restricted to the data ball, chain started
/// at the (non-private) Frechet mean unless a start point is supplied.
template <Manifold M>
MechanismResult<M> sample_kng(const Dataset<M>& data, const PrivacyParams& params,
                              const ChainConfig& cfg,
                              std::optional<typename M::Point> start = std::nullopt) {
    const double sigma = scale_sigma(params);
    typename M::Point x0 = start ? *start : frechet_mean(data).mean;
    KngDensity<M> density(data, sigma);
    auto proposal = default_proposal(data.manifold(), sigma, cfg.step_scale);
    ChainDiagnostics diag;
    auto states = sample_mh(data.manifold(), chain_target(data.manifold(), density), x0,
                            proposal, cfg, 1, &diag);
    return MechanismResult<M>{std::move(states.front()), "kng", sigma, diag};
}

/// One draw from the intrinsic Laplace density around eta restricted to the
/// ball, calibrated with the distance-statistic sensitivity.
template <Manifold M>
MechanismResult<M> sample_manifold_laplace(const M& manifold, const typename M::Point& eta,
                                           const GeodesicBall<M>& ball,
                                           const PrivacyParams& params, const ChainConfig& cfg) {
    const double sigma = laplace_scale_sigma(params);
    LaplaceDensity<M> density(manifold, eta, ball, sigma);
    auto proposal = default_proposal(manifold, sigma, cfg.step_scale);
    ChainDiagnostics diag;
    auto states =
        sample_mh(manifold, chain_target(manifold, density), eta, proposal, cfg, 1, &diag);
    return MechanismResult<M>{std::move(states.front()), "laplace", sigma, diag};
}

// ---------------------------------------------------------------------------
// Euclidean Laplace and scalar noise primitives
// ---------------------------------------------------------------------------

/// Marsaglia-Tsang gamma sampler (shape >= 1, unit scale). Rejection loop
/// consumes the generator deterministically for a fixed seed.
inline double sample_gamma(double shape, std::mt19937_64& rng) {
    if (!(shape >= 1.0)) throw std::invalid_argument("sample_gamma: shape must be >= 1");
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z = gauss(rng);
        double v = 1.0 + c * z;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = u01(rng);
        if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) {
            return d * v;
        }
    }
}

/// Scalar Laplace draw via inverse CDF.
inline double sample_scalar_laplace(double scale, std::mt19937_64& rng) {
    if (scale < 0.0) throw std::invalid_argument("sample_scalar_laplace: scale must be >= 0");
    if (scale == 0.0) return 0.0;
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const double x = u(rng);
    return -scale * (x < 0.0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::abs(x));
}

/// Draw from the d-dimensional Euclidean Laplace f(y) ~ exp(-||y-c||/sigma):
/// Y = c + R sigma V with V uniform on the unit sphere and R ~ Gamma(d, 1).
inline Eigen::VectorXd sample_euclidean_laplace(const Eigen::VectorXd& center, double sigma,
                                                int d, std::mt19937_64& rng) {
    if (d < 1) throw std::invalid_argument("euclidean laplace: dimension must be >= 1");
    if (center.size() != d) {
        throw std::invalid_argument("euclidean laplace: center has wrong dimension");
    }
    if (!(sigma >= 0.0)) throw std::invalid_argument("euclidean laplace: sigma must be >= 0");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(d);
    double n = 0.0;
    do {
        for (int i = 0; i < d; ++i) v[i] = gauss(rng);
        n = v.norm();
    } while (n < 1e-300);
    const double radius = sample_gamma(static_cast<double>(d), rng);
    return center + (radius * sigma / n) * v;
}

/// Post-processing for the ambient mechanism on the unit sphere.
inline Sphere::Point project_to_sphere(const Eigen::VectorXd& y) {
    const double n = y.norm();
    if (n <= 1e-12) {
        throw std::domain_error("project_to_sphere: vector too close to the origin");
    }
    return Sphere::Point{y / n};
}

// ---------------------------------------------------------------------------
// Point-wise landmark noise and smoothing
// ---------------------------------------------------------------------------

struct PointwiseLaplaceScales {
    Eigen::VectorXd real_scale;  // per landmark, 4 * d_xj * k / (n * eps)
    Eigen::VectorXd imag_scale;
};

/// Per-coordinate Laplace scales for sanitizing the mean configuration:
/// the privacy budget splits as eps/(2k) per coordinate, and each coordinate
/// uses its own data range r = max_i |coordinate deviation from the mean|,
/// giving scale (2r/n) / (eps/2k) = 4 r k / (n eps).
inline PointwiseLaplaceScales pointwise_laplace_scales(
    std::span<const Kendall::Point> shapes, const Kendall::Point& mean, double epsilon) {
    if (shapes.empty()) throw std::domain_error("pointwise laplace: empty data");
    if (!(epsilon > 0.0)) throw std::invalid_argument("pointwise laplace: epsilon must be > 0");
    const auto k = mean.coords.size();
    const double n = static_cast<double>(shapes.size());
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(k), dy = Eigen::VectorXd::Zero(k);
    for (const auto& s : shapes) {
        if (s.coords.size() != k) {
            throw std::invalid_argument("pointwise laplace: inconsistent landmark count");
        }
        for (Eigen::Index j = 0; j < k; ++j) {
            dx[j] = std::max(dx[j], std::abs(s.coords[j].real() - mean.coords[j].real()));
            dy[j] = std::max(dy[j], std::abs(s.coords[j].imag() - mean.coords[j].imag()));
        }
    }
    const double factor = 4.0 * static_cast<double>(k) / (n * epsilon);
    return PointwiseLaplaceScales{factor * dx, factor * dy};
}

/// Sanitize each landmark of the mean with independent scalar Laplace noise
/// in the real and imaginary directions. Callers decide whether the shapes
/// were rotationally aligned to the mean beforehand; the deviations (and so
/// the noise) are computed against the shapes exactly as given.
inline LandmarkConfig shape_pointwise_laplace(std::span<const Kendall::Point> shapes,
                                              const Kendall::Point& mean, double epsilon,
                                              std::mt19937_64& rng) {
    const PointwiseLaplaceScales scales = pointwise_laplace_scales(shapes, mean, epsilon);
    LandmarkConfig out = mean.coords;
    for (Eigen::Index j = 0; j < out.size(); ++j) {
        out[j] += std::complex<double>(sample_scalar_laplace(scales.real_scale[j], rng),
                                       sample_scalar_laplace(scales.imag_scale[j], rng));
    }
    return out;
}

/// First-order local linear regression along the closed landmark curve,
/// applied independently to the real and imaginary coordinate sequences.
/// Landmark j sits at curve parameter j/k; offsets wrap cyclically and are
/// weighted by a Gaussian kernel of the given bandwidth (same units).
inline LandmarkConfig smooth_landmarks(const LandmarkConfig& c, double bandwidth) {
    const auto k = c.size();
    if (k < 5) throw std::domain_error("smooth_landmarks: need at least 5 landmarks");
    if (!(bandwidth > 0.0)) throw std::domain_error("smooth_landmarks: bandwidth must be > 0");
    LandmarkConfig out(k);
    const double kd = static_cast<double>(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        double s0 = 0, s1 = 0, s2 = 0;
        double t0r = 0, t1r = 0, t0i = 0, t1i = 0;
        for (Eigen::Index i = 0; i < k; ++i) {
            double diff = static_cast<double>(i - j);
            diff -= kd * std::round(diff / kd);  // signed cyclic offset in landmarks
            const double s = diff / kd;
            const double w = std::exp(-s * s / (2.0 * bandwidth * bandwidth));
            s0 += w;
            s1 += w * s;
            s2 += w * s * s;
            t0r += w * c[i].real();
            t1r += w * s * c[i].real();
            t0i += w * c[i].imag();
            t1i += w * s * c[i].imag();
        }
        const double det = s0 * s2 - s1 * s1;
        if (det > 1e-14 * s0 * s2 && s2 > 0.0) {
            out[j] = std::complex<double>((s2 * t0r - s1 * t1r) / det,
                                          (s2 * t0i - s1 * t1i) / det);
        } else {
            out[j] = std::complex<double>(t0r / s0, t0i / s0);  // weighted mean fallback
        }
    }
    return out;
}

}  // namespace riemdp
