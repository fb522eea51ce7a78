#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace riemdp {

/// Curvature factor s*sqrt(kappa)*cot(s*sqrt(kappa)) for kappa > 0, 1
/// otherwise. On the calibration domain s*sqrt(kappa) < pi/2 the value lies
/// in (0, 1] and decreases in s.
inline double h_max(double s, double kappa) {
    if (kappa <= 0.0) return 1.0;
    const double x = s * std::sqrt(kappa);
    if (x >= std::numbers::pi) {
        throw std::domain_error("h_max: s*sqrt(kappa) = " + std::to_string(x) +
                                " is outside [0, pi)");
    }
    if (x < 1e-8) return 1.0 - x * x / 3.0;  // x cot x series
    return x * std::cos(x) / std::sin(x);
}

/// Curvature factor s*sqrt(|kappa|)*coth(s*sqrt(|kappa|)) for kappa < 0, 1
/// otherwise. Always >= 1, increasing in s for negative curvature.
inline double h_min(double s, double kappa) {
    if (kappa >= 0.0) return 1.0;
    const double x = s * std::sqrt(-kappa);
    if (x < 1e-8) return 1.0 + x * x / 3.0;  // x coth x series
    return x / std::tanh(x);
}

/// Everything needed to calibrate a mechanism release: privacy budget,
/// the data ball radius, the sample size and the curvature bounds of the
/// hosting manifold.
struct PrivacyParams {
    double epsilon = 1.0;
    double r = 0.0;       // geodesic ball radius containing the data
    int n = 1;            // sample size
    double kappa_max = 0.0;
    double kappa_min = 0.0;

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("privacy params: epsilon must be > 0");
        if (!(r > 0.0)) throw std::invalid_argument("privacy params: r must be > 0");
        if (n < 1) throw std::invalid_argument("privacy params: n must be >= 1");
        if (kappa_min > kappa_max) {
            throw std::invalid_argument("privacy params: kappa_min exceeds kappa_max");
        }
    }
};

/// Global sensitivity of the gradient field for mean estimation:
/// Delta = 2r (2 - h_max(2r, kappa_max)) / n. Equals the flat rate 2r/n
/// when kappa_max <= 0 and is strictly larger otherwise.
inline double sensitivity(const PrivacyParams& p) {
    p.validate();
    return 2.0 * p.r * (2.0 - h_max(2.0 * p.r, p.kappa_max)) / static_cast<double>(p.n);
}

/// Rate parameter sigma = 2 Delta / epsilon for the gradient mechanism.
inline double scale_sigma(const PrivacyParams& p) {
    return 2.0 * sensitivity(p) / p.epsilon;
}

/// Sensitivity of the distance-to-mean statistic used by the intrinsic
/// Laplace mechanism: 2r (2 - h_max) / (n h_max). Coincides with the
/// gradient sensitivity when kappa_max <= 0 and is strictly larger on
/// positively curved spaces.
inline double laplace_sensitivity(const PrivacyParams& p) {
    p.validate();
    const double h = h_max(2.0 * p.r, p.kappa_max);
    return 2.0 * p.r * (2.0 - h) / (static_cast<double>(p.n) * h);
}

inline double laplace_scale_sigma(const PrivacyParams& p) {
    return 2.0 * laplace_sensitivity(p) / p.epsilon;
}

}  // namespace riemdp
