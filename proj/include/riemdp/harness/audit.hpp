#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "riemdp/sphere.hpp"

namespace riemdp::harness {

struct AuditConfig {
    double epsilon = 1.0;             // budget the densities are audited against
    double calibration_epsilon = 0.0; // sigma computed from this; 0 = same as epsilon
    double radius = 0.0;              // 0 = pi/8
    int n = 20;
    int grid_theta = 200;
    int grid_phi = 200;
    std::string mechanism = "kng";    // "kng" | "laplace"
};

struct AuditReport {
    std::string mechanism;
    double epsilon = 0.0;
    double sigma = 0.0;
    double max_log_ratio = 0.0;
    double threshold = 0.0;           // epsilon + log(1.05)
    bool pass = false;
    int grid_theta = 0;
    int grid_phi = 0;
};

/// Discretized privacy-ratio audit on the unit 2-sphere: both mechanism
/// densities are evaluated on a polar grid over the support ball around the
/// north pole, normalized by their (area-weighted) grid sums, and the
/// worst cell-wise log-ratio is compared against epsilon + log(1.05).
AuditReport dp_ratio_audit(const std::vector<Sphere::Point>& data,
                           const std::vector<Sphere::Point>& data_prime,
                           const AuditConfig& cfg);

/// Adjacent pair (D, D') differing in the last element, drawn from the polar
/// ball sampler. With well_separated, the differing elements are pinned on
/// opposite sides of the ball near its boundary, which maximizes the realized
/// sensitivity; used to make the deliberate-miscalibration audit decisive.
std::pair<std::vector<Sphere::Point>, std::vector<Sphere::Point>> make_adjacent_pair(
    double radius, int n, std::uint64_t seed, bool well_separated = false);

std::string audit_report_text(const AuditReport& report);

}  // namespace riemdp::harness
