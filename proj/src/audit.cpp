#include "riemdp/harness/audit.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "riemdp/calibration.hpp"
#include "riemdp/frechet.hpp"
#include "riemdp/harness/io.hpp"
#include "riemdp/mechanisms.hpp"
#include "riemdp/rng.hpp"

namespace riemdp::harness {

namespace {

// log of the area-normalized density on each grid cell, via log-sum-exp
std::vector<double> grid_log_density(const Sphere& m, const std::vector<Sphere::Point>& data,
                                     const AuditConfig& cfg, double sigma, double r) {
    Dataset<Sphere> dataset(m, data, GeodesicBall<Sphere>{m.north_pole(), r});

    std::vector<double> neglog(static_cast<std::size_t>(cfg.grid_theta) * cfg.grid_phi);
    const double dtheta = r / cfg.grid_theta;
    const double dphi = 2.0 * std::numbers::pi / cfg.grid_phi;

    if (cfg.mechanism == "kng") {
        KngDensity<Sphere> dens(dataset, sigma);
        std::size_t idx = 0;
        for (int i = 0; i < cfg.grid_theta; ++i) {
            const double theta = (i + 0.5) * dtheta;
            for (int j = 0; j < cfg.grid_phi; ++j) {
                const double phi = (j + 0.5) * dphi;
                Sphere::Point x{Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                                std::sin(theta) * std::sin(phi),
                                                std::cos(theta))};
                neglog[idx++] = dens(x);
            }
        }
    } else if (cfg.mechanism == "laplace") {
        auto eta = frechet_mean(dataset, SolverConfig{0.5, 1e-10, 500, false}).mean;
        LaplaceDensity<Sphere> dens(m, eta, dataset.ball(), sigma);
        std::size_t idx = 0;
        for (int i = 0; i < cfg.grid_theta; ++i) {
            const double theta = (i + 0.5) * dtheta;
            for (int j = 0; j < cfg.grid_phi; ++j) {
                const double phi = (j + 0.5) * dphi;
                Sphere::Point x{Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                                std::sin(theta) * std::sin(phi),
                                                std::cos(theta))};
                neglog[idx++] = dens(x);
            }
        }
    } else {
        throw config_error("audit: unknown mechanism '" + cfg.mechanism + "' (kng|laplace)");
    }

    // normalize: log q = log f + log w - logsumexp(log f + log w)
    std::vector<double> logq(neglog.size());
    double max_term = -std::numeric_limits<double>::infinity();
    std::size_t idx = 0;
    for (int i = 0; i < cfg.grid_theta; ++i) {
        const double theta = (i + 0.5) * dtheta;
        const double logw = std::log(std::sin(theta) * dtheta * dphi);
        for (int j = 0; j < cfg.grid_phi; ++j, ++idx) {
            logq[idx] = -neglog[idx] + logw;
            max_term = std::max(max_term, logq[idx]);
        }
    }
    double sum = 0.0;
    for (double t : logq) sum += std::exp(t - max_term);
    const double log_z = max_term + std::log(sum);
    for (double& t : logq) t -= log_z;
    return logq;
}

}  // namespace

AuditReport dp_ratio_audit(const std::vector<Sphere::Point>& data,
                           const std::vector<Sphere::Point>& data_prime,
                           const AuditConfig& cfg) {
    if (cfg.grid_theta < 50 || cfg.grid_phi < 50) {
        throw config_error("audit: grid resolution must be at least 50 per axis");
    }
    if (!(cfg.epsilon > 0.0)) throw config_error("audit: epsilon must be > 0");
    const double r = cfg.radius > 0.0 ? cfg.radius : std::numbers::pi / 8.0;
    const double eps_cal = cfg.calibration_epsilon > 0.0 ? cfg.calibration_epsilon : cfg.epsilon;

    const Sphere m(2);
    const PrivacyParams params{eps_cal, r, static_cast<int>(data.size()), 1.0, 1.0};
    const double sigma =
        cfg.mechanism == "laplace" ? laplace_scale_sigma(params) : scale_sigma(params);

    auto logq = grid_log_density(m, data, cfg, sigma, r);
    auto logq_prime = grid_log_density(m, data_prime, cfg, sigma, r);

    double worst = 0.0;
    for (std::size_t i = 0; i < logq.size(); ++i) {
        worst = std::max(worst, std::abs(logq[i] - logq_prime[i]));
    }

    AuditReport report;
    report.mechanism = cfg.mechanism;
    report.epsilon = cfg.epsilon;
    report.sigma = sigma;
    report.max_log_ratio = worst;
    report.threshold = cfg.epsilon + std::log(1.05);
    report.pass = worst <= report.threshold;
    report.grid_theta = cfg.grid_theta;
    report.grid_phi = cfg.grid_phi;
    return report;
}

std::pair<std::vector<Sphere::Point>, std::vector<Sphere::Point>> make_adjacent_pair(
    double radius, int n, std::uint64_t seed, bool well_separated) {
    if (n < 2) throw config_error("audit: adjacent pair needs n >= 2");
    const Sphere m(2);
    std::mt19937_64 rng = make_rng(seed, 0);
    auto data = sample_ball_uniform_polar(m, radius, n, rng);
    auto prime = data;
    if (well_separated) {
        const double t = 0.95 * radius;
        data.back() = Sphere::Point{Eigen::Vector3d(std::sin(t), 0.0, std::cos(t))};
        prime.back() = Sphere::Point{Eigen::Vector3d(-std::sin(t), 0.0, std::cos(t))};
    } else {
        prime.back() = sample_ball_uniform_polar(m, radius, 1, rng)[0];
    }
    return {std::move(data), std::move(prime)};
}

std::string audit_report_text(const AuditReport& report) {
    std::ostringstream out;
    out << "mechanism=" << report.mechanism << " epsilon=" << format_double(report.epsilon)
        << " sigma=" << format_double(report.sigma) << " grid=" << report.grid_theta << "x"
        << report.grid_phi << " max_log_ratio=" << format_double(report.max_log_ratio)
        << " threshold=" << format_double(report.threshold)
        << (report.pass ? " PASS" : " FAIL");
    return out.str();
}

}  // namespace riemdp::harness
