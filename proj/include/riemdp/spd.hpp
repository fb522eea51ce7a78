#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "riemdp/geometry.hpp"

namespace riemdp {

/// k x k symmetric positive-definite matrices under the affine-invariant
/// metric <u,v>_p = Tr(p^-1 u p^-1 v). A Hadamard manifold: log and exp are
/// globally defined, the injectivity radius is infinite.
template <typename Scalar>
class SpdT {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Ambient = Matrix;

    struct Point {
        Matrix mat;
    };
    struct Tangent {
        Point base;
        Matrix value;  // symmetric matrix
    };

    static constexpr Scalar kEigenvalueFloor = Scalar(1e-14);

    explicit SpdT(int k) : k_(k) {
        if (k < 1) throw std::invalid_argument("spd: matrix order must be >= 1");
    }

    int order() const { return k_; }

    ManifoldDescriptor descriptor() const {
        // kappa_min = -1/2 is the exact sectional-curvature lower bound at
        // k = 2 under this metric normalization; kappa_max = 0 is what the
        // sensitivity calibration uses.
        return ManifoldDescriptor{k_ * (k_ + 1) / 2, k_ * k_, 0.0, -0.5,
                                  std::numeric_limits<double>::infinity()};
    }

    Point make_point(Matrix m) const {
        Point p{std::move(m)};
        check_point(p);
        return p;
    }

    void check_point(const Point& p) const {
        detail::require(p.mat.rows() == k_ && p.mat.cols() == k_, "spd point: wrong order");
        if ((p.mat - p.mat.transpose()).cwiseAbs().maxCoeff() > kMembershipTol) {
            throw std::invalid_argument("spd point: matrix is not symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(p.mat, Eigen::EigenvaluesOnly);
        if (!(es.eigenvalues().minCoeff() > Scalar(0))) {
            throw std::invalid_argument("spd point: matrix is not positive definite");
        }
    }

    Tangent make_tangent(const Point& base, Matrix value) const {
        check_point(base);
        if ((value - value.transpose()).cwiseAbs().maxCoeff() > kMembershipTol) {
            throw std::invalid_argument("spd tangent: matrix is not symmetric");
        }
        return Tangent{base, std::move(value)};
    }

    Tangent zero_tangent(const Point& p) const {
        return Tangent{p, Matrix::Zero(k_, k_)};
    }

    Scalar inner(const Point& p, const Tangent& u, const Tangent& v) const {
        require_same_base(p, u.base, "spd inner");
        require_same_base(p, v.base, "spd inner");
        Matrix pinv = inverse_checked(p.mat);
        return (pinv * u.value * pinv * v.value).trace();
    }

    Scalar norm(const Point& p, const Tangent& v) const {
        return std::sqrt(std::max(Scalar(0), inner(p, v, v)));
    }

    /// exp(p, v) = p^(1/2) Exp(p^(-1/2) v p^(-1/2)) p^(1/2).
    Point exp(const Point& p, const Tangent& v) const {
        require_same_base(p, v.base, "spd exp");
        auto [sqrtp, isqrtp] = sqrt_pair(p.mat);
        Matrix a = isqrtp * v.value * isqrtp;
        Matrix r = sqrtp * sym_function(symmetrize(a), [](Scalar x) { return std::exp(x); }) * sqrtp;
        return Point{symmetrize(r)};
    }

    /// log(q, p) = q^(1/2) Log(q^(-1/2) p q^(-1/2)) q^(1/2), a tangent at q.
    Tangent log(const Point& q, const Point& p) const {
        auto [sqrtq, isqrtq] = sqrt_pair(q.mat);
        Matrix a = symmetrize(isqrtq * p.mat * isqrtq);
        Matrix l = sqrtq * sym_function(a, [](Scalar x) { return std::log(x); }) * sqrtq;
        return Tangent{q, symmetrize(l)};
    }

    /// rho(q, p) = || Log(q^(-1/2) p q^(-1/2)) ||_F = sqrt(sum log^2 lambda_i).
    Scalar distance(const Point& q, const Point& p) const {
        auto [sqrtq, isqrtq] = sqrt_pair(q.mat);
        Matrix a = symmetrize(isqrtq * p.mat * isqrtq);
        Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
        Scalar s = 0;
        for (int i = 0; i < k_; ++i) {
            Scalar lg = std::log(positive_checked(es.eigenvalues()[i]));
            s += lg * lg;
        }
        return std::sqrt(s);
    }

    /// Projection of an arbitrary k x k ambient matrix onto the tangent space
    /// Sym_k; orthogonal with respect to the ambient Frobenius inner product.
    Tangent project_tangent(const Point& p, const Ambient& w) const {
        return Tangent{p, symmetrize(w)};
    }

    static Matrix symmetrize(const Matrix& m) { return ((m + m.transpose()) / Scalar(2)).eval(); }

private:
    std::pair<Matrix, Matrix> sqrt_pair(const Matrix& p) const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(p);
        Vector lam = es.eigenvalues();
        Vector s(k_), si(k_);
        for (int i = 0; i < k_; ++i) {
            Scalar l = positive_checked(lam[i]);
            s[i] = std::sqrt(l);
            si[i] = Scalar(1) / s[i];
        }
        const Matrix& u = es.eigenvectors();
        return {u * s.asDiagonal() * u.transpose(), u * si.asDiagonal() * u.transpose()};
    }

    template <class F>
    Matrix sym_function(const Matrix& a, F f) const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(a);
        Vector lam = es.eigenvalues();
        for (int i = 0; i < lam.size(); ++i) lam[i] = f(lam[i]);
        return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    }

    Matrix inverse_checked(const Matrix& p) const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(p);
        Vector lam = es.eigenvalues();
        Vector inv(k_);
        for (int i = 0; i < k_; ++i) inv[i] = Scalar(1) / positive_checked(lam[i]);
        return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    }

    Scalar positive_checked(Scalar eigenvalue) const {
        if (eigenvalue < kEigenvalueFloor) {
            throw std::domain_error("spd: matrix is singular to working precision (eigenvalue " +
                                    std::to_string(static_cast<double>(eigenvalue)) + ")");
        }
        return eigenvalue;
    }

    void require_same_base(const Point& p, const Point& base, const char* op) const {
        if (p.mat.rows() != base.mat.rows() || p.mat.cols() != base.mat.cols() ||
            (p.mat - base.mat).cwiseAbs().maxCoeff() > kMembershipTol) {
            throw std::invalid_argument(std::string(op) + ": tangent base differs from point");
        }
    }

    int k_;
};

using Spd = SpdT<double>;

/// Half-vectorization: stack the lower triangle column by column, diagonal
/// included. vech([[a,b],[b,c]]) = (a, b, c).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vech(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
    const int k = static_cast<int>(m.rows());
    detail::require(m.cols() == k, "vech: matrix must be square");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kMembershipTol) {
        throw std::invalid_argument("vech: matrix is not symmetric");
    }
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(k * (k + 1) / 2);
    int idx = 0;
    for (int j = 0; j < k; ++j) {
        for (int i = j; i < k; ++i) v[idx++] = m(i, j);
    }
    return v;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> unvech(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v) {
    // invert n = k(k+1)/2
    const int n = static_cast<int>(v.size());
    const int k = static_cast<int>(std::lround((std::sqrt(8.0 * n + 1.0) - 1.0) / 2.0));
    if (k * (k + 1) / 2 != n) {
        throw std::invalid_argument("unvech: length " + std::to_string(n) +
                                    " is not a triangular number");
    }
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(k, k);
    int idx = 0;
    for (int j = 0; j < k; ++j) {
        for (int i = j; i < k; ++i) {
            m(i, j) = v[idx];
            m(j, i) = v[idx];
            ++idx;
        }
    }
    return m;
}

/// Euclidean radius in Sym_k of the smallest ambient ball centered at I that
/// encloses the geodesic ball B_r(I): r_E = e^r - 1.
inline double ambient_radius(double r) {
    if (r < 0.0) throw std::domain_error("ambient_radius: r must be nonnegative");
    return std::expm1(r);
}

/// Rejection sampler: Wishart(V = I/k, df = k) draws via the Bartlett
/// decomposition, keeping those within geodesic distance r of the identity.
/// Aborts if the acceptance rate over a probe batch falls below 1e-4.
template <typename Scalar>
std::vector<typename SpdT<Scalar>::Point> sample_wishart_ball(const SpdT<Scalar>& manifold,
                                                              double r, int count,
                                                              std::mt19937_64& rng,
                                                              long* attempts_out = nullptr) {
    if (!(r > 0.0)) throw std::domain_error("wishart ball sampler: r must be positive");
    const int k = manifold.order();
    using Matrix = typename SpdT<Scalar>::Matrix;
    const typename SpdT<Scalar>::Point identity{Matrix::Identity(k, k)};
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<typename SpdT<Scalar>::Point> out;
    out.reserve(static_cast<std::size_t>(count));
    long attempts = 0;
    long accepted = 0;
    constexpr long kProbeBatch = 20000;
    while (accepted < count) {
        // Bartlett factor: A lower triangular, A_ii = sqrt(chi^2(df - i)),
        // strictly-lower entries standard normal; here V = I/k so L = I/sqrt(k).
        Matrix a = Matrix::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            double chi2 = 0.0;
            for (int dof = 0; dof < k - i; ++dof) {
                const double z = gauss(rng);
                chi2 += z * z;
            }
            a(i, i) = std::sqrt(chi2);
            for (int j = 0; j < i; ++j) a(i, j) = gauss(rng);
        }
        Matrix w = (a * a.transpose()) / Scalar(k);
        ++attempts;
        bool ok = true;
        double dist = 0.0;
        try {
            dist = manifold.distance(identity, typename SpdT<Scalar>::Point{w});
        } catch (const std::domain_error&) {
            ok = false;  // numerically singular draw
        }
        if (ok && dist <= r) {
            out.push_back(typename SpdT<Scalar>::Point{SpdT<Scalar>::symmetrize(w)});
            ++accepted;
        }
        if (attempts % kProbeBatch == 0 &&
            static_cast<double>(accepted) / static_cast<double>(attempts) < 1e-4) {
            throw std::domain_error("wishart ball sampler: acceptance rate below 1e-4; "
                                    "ball radius too small for Wishart(I/k, k)");
        }
    }
    if (attempts_out) *attempts_out = attempts;
    return out;
}

}  // namespace riemdp
