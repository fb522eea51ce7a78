#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riemdp/harness/io.hpp"
#include "riemdp/kendall.hpp"
#include "riemdp/spd.hpp"
#include "riemdp/sphere.hpp"

namespace riemdp::harness {

enum class Mechanism { kng, laplace, euclidean, euclidean_projected };

std::string mechanism_name(Mechanism m);
Mechanism mechanism_from_name(const std::string& name);

struct BenchmarkConfig {
    std::string manifold;      // "sphere" | "spd"
    std::vector<int> sizes;    // sample sizes n
    int replicates = 1;
    double epsilon = 1.0;
    double radius = 0.0;       // 0 = manifold default (pi/8 sphere, 1.5 spd)
    std::vector<Mechanism> mechanisms;  // empty = manifold default set
    std::uint64_t seed = 0;
    int threads = 0;           // 0 = hardware concurrency
    bool timing = false;       // wall_ms stays 0 unless enabled (reproducible output)
    long burn_in = -1;         // -1 = manifold chain default
    long thin = -1;
    double step_scale = -1.0;  // -1 = 0.5
};

/// Ambient utility between the mean and its sanitized release:
/// vector difference norm on the sphere, vech difference for SPD matrices,
/// complex-vector norm after rotational alignment on shape space.
double utility_distance(const Sphere& m, const Sphere::Point& mean, const Sphere::Point& tilde);
double utility_distance(const Spd& m, const Spd::Point& mean, const Spd::Point& tilde);
double utility_distance(const Kendall& m, const Kendall::Point& mean,
                        const Kendall::Point& tilde);

/// One row per (n, replicate, mechanism), in that deterministic order
/// regardless of thread count. Every mechanism row is reproducible from
/// (seed, n, replicate, mechanism) alone, so mechanism subsets and parallel
/// execution do not disturb each other's draws.
std::vector<ResultRow> run_benchmark(const BenchmarkConfig& cfg);

}  // namespace riemdp::harness
