#include "riemdp/harness/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "riemdp/calibration.hpp"
#include "riemdp/frechet.hpp"
#include "riemdp/mechanisms.hpp"
#include "riemdp/rng.hpp"

namespace riemdp::harness {

std::string mechanism_name(Mechanism m) {
    switch (m) {
        case Mechanism::kng: return "kng";
        case Mechanism::laplace: return "laplace";
        case Mechanism::euclidean: return "euclidean";
        case Mechanism::euclidean_projected: return "euclidean_projected";
    }
    return "?";
}

Mechanism mechanism_from_name(const std::string& name) {
    if (name == "kng") return Mechanism::kng;
    if (name == "laplace") return Mechanism::laplace;
    if (name == "euclidean") return Mechanism::euclidean;
    if (name == "euclidean_projected") return Mechanism::euclidean_projected;
    throw config_error("unknown mechanism '" + name +
                       "' (kng|laplace|euclidean|euclidean_projected)");
}

double utility_distance(const Sphere&, const Sphere::Point& mean, const Sphere::Point& tilde) {
    return (mean.coords - tilde.coords).norm();
}

double utility_distance(const Spd&, const Spd::Point& mean, const Spd::Point& tilde) {
    return (vech(mean.mat) - vech(tilde.mat)).norm();
}

double utility_distance(const Kendall& m, const Kendall::Point& mean,
                        const Kendall::Point& tilde) {
    auto aligned = m.align(mean, tilde).first;
    return (mean.coords - aligned.coords).norm();
}

namespace {

// RNG substream layout: stream = (n << 24) ^ (replicate << 4) ^ channel.
// Channel 0 draws the dataset; each mechanism owns one channel, with the
// projected euclidean release sharing the ambient euclidean draw (projection
// is post-processing of the same release).
constexpr std::uint64_t kDataChannel = 0;

std::uint64_t task_stream(int n, int replicate, std::uint64_t channel) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 24) ^
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(replicate)) << 4) ^ channel;
}

std::uint64_t mechanism_channel(Mechanism m) {
    switch (m) {
        case Mechanism::kng: return 1;
        case Mechanism::laplace: return 2;
        case Mechanism::euclidean:
        case Mechanism::euclidean_projected: return 3;
    }
    return 15;
}

long elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

struct TaskSpec {
    int n;
    int replicate;
};

template <class RunTask>
void run_parallel(const std::vector<TaskSpec>& tasks, int threads, RunTask&& run_task) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const int nthreads = threads > 0 ? threads : static_cast<int>(hw);
    if (nthreads <= 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                run_task(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

ChainConfig chain_for(const BenchmarkConfig& cfg, ChainConfig defaults, std::uint64_t seed) {
    ChainConfig out = defaults;
    if (cfg.burn_in >= 0) out.burn_in = cfg.burn_in;
    if (cfg.thin >= 1) out.thin = cfg.thin;
    if (cfg.step_scale > 0.0) out.step_scale = cfg.step_scale;
    out.seed = seed;
    return out;
}

std::vector<ResultRow> run_sphere(const BenchmarkConfig& cfg) {
    const double r = cfg.radius > 0.0 ? cfg.radius : std::numbers::pi / 8.0;
    const Sphere manifold(2);

    std::vector<TaskSpec> tasks;
    for (int n : cfg.sizes) {
        for (int rep = 0; rep < cfg.replicates; ++rep) tasks.push_back(TaskSpec{n, rep});
    }
    std::vector<std::vector<ResultRow>> per_task(tasks.size());

    run_parallel(tasks, cfg.threads, [&](std::size_t ti) {
        const auto [n, rep] = tasks[ti];
        auto& rows = per_task[ti];
        std::mt19937_64 data_rng = make_rng(cfg.seed, task_stream(n, rep, kDataChannel));
        auto points = sample_ball_uniform_polar(manifold, r, n, data_rng);
        Dataset<Sphere> data(manifold, std::move(points),
                             GeodesicBall<Sphere>{manifold.north_pole(), r});
        const auto mean = frechet_mean(data).mean;
        const PrivacyParams params{cfg.epsilon, r, n, 1.0, 1.0};

        for (Mechanism mech : cfg.mechanisms) {
            const std::uint64_t stream = task_stream(n, rep, mechanism_channel(mech));
            const std::uint64_t mech_seed = derive_seed(cfg.seed, stream);
            ResultRow row;
            row.manifold = "sphere";
            row.mechanism = mechanism_name(mech);
            row.n = n;
            row.replicate = rep;
            row.seed = mech_seed;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                switch (mech) {
                    case Mechanism::kng: {
                        auto cc = chain_for(cfg, sphere_chain_defaults(), mech_seed);
                        auto res = sample_kng(data, params, cc, mean);
                        row.utility_euclidean = utility_distance(manifold, mean, res.point);
                        row.utility_intrinsic = manifold.distance(mean, res.point);
                        row.has_euclidean = row.has_intrinsic = true;
                        break;
                    }
                    case Mechanism::laplace: {
                        auto cc = chain_for(cfg, sphere_chain_defaults(), mech_seed);
                        auto res =
                            sample_manifold_laplace(manifold, mean, data.ball(), params, cc);
                        row.utility_euclidean = utility_distance(manifold, mean, res.point);
                        row.utility_intrinsic = manifold.distance(mean, res.point);
                        row.has_euclidean = row.has_intrinsic = true;
                        break;
                    }
                    case Mechanism::euclidean:
                    case Mechanism::euclidean_projected: {
                        // ambient release of the intrinsic mean: its chord
                        // displacement across adjacent datasets is bounded by
                        // the geodesic bound 2r(2-h)/(n h); the flat rate
                        // 2r/n is not an upper bound on a positively curved
                        // space. Same 2*Delta/eps calibration as the
                        // mechanisms it is compared with.
                        const double delta_e = laplace_sensitivity(params);
                        const double sigma_e = 2.0 * delta_e / cfg.epsilon;
                        std::mt19937_64 rng = make_rng(cfg.seed, stream);
                        Eigen::VectorXd y =
                            sample_euclidean_laplace(mean.coords, sigma_e, 3, rng);
                        if (mech == Mechanism::euclidean) {
                            row.utility_euclidean = (mean.coords - y).norm();
                            row.has_euclidean = true;  // off-manifold: no intrinsic utility
                        } else {
                            auto proj = project_to_sphere(y);
                            row.utility_euclidean = utility_distance(manifold, mean, proj);
                            row.utility_intrinsic = manifold.distance(mean, proj);
                            row.has_euclidean = row.has_intrinsic = true;
                        }
                        break;
                    }
                }
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            if (cfg.timing) row.wall_ms = elapsed_ms(t0);
            rows.push_back(std::move(row));
        }
    });

    std::vector<ResultRow> out;
    out.reserve(tasks.size() * cfg.mechanisms.size());
    for (auto& rows : per_task) {
        for (auto& r2 : rows) out.push_back(std::move(r2));
    }
    return out;
}

std::vector<ResultRow> run_spd(const BenchmarkConfig& cfg) {
    const double r = cfg.radius > 0.0 ? cfg.radius : 1.5;
    const Spd manifold(2);
    const Spd::Point identity{Eigen::MatrixXd::Identity(2, 2)};

    std::vector<TaskSpec> tasks;
    for (int n : cfg.sizes) {
        for (int rep = 0; rep < cfg.replicates; ++rep) tasks.push_back(TaskSpec{n, rep});
    }
    std::vector<std::vector<ResultRow>> per_task(tasks.size());

    run_parallel(tasks, cfg.threads, [&](std::size_t ti) {
        const auto [n, rep] = tasks[ti];
        auto& rows = per_task[ti];
        std::mt19937_64 data_rng = make_rng(cfg.seed, task_stream(n, rep, kDataChannel));
        auto points = sample_wishart_ball(manifold, r, n, data_rng);
        Dataset<Spd> data(manifold, std::move(points), GeodesicBall<Spd>{identity, r});
        const auto mean = frechet_mean(data).mean;
        const PrivacyParams params{cfg.epsilon, r, n, 0.0, -0.5};

        for (Mechanism mech : cfg.mechanisms) {
            const std::uint64_t stream = task_stream(n, rep, mechanism_channel(mech));
            const std::uint64_t mech_seed = derive_seed(cfg.seed, stream);
            ResultRow row;
            row.manifold = "spd";
            row.mechanism = mechanism_name(mech);
            row.n = n;
            row.replicate = rep;
            row.seed = mech_seed;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                switch (mech) {
                    case Mechanism::kng: {
                        auto cc = chain_for(cfg, spd_chain_defaults(), mech_seed);
                        auto res = sample_kng(data, params, cc, mean);
                        row.utility_euclidean = utility_distance(manifold, mean, res.point);
                        row.utility_intrinsic = manifold.distance(mean, res.point);
                        row.has_euclidean = row.has_intrinsic = true;
                        break;
                    }
                    case Mechanism::laplace: {
                        auto cc = chain_for(cfg, spd_chain_defaults(), mech_seed);
                        auto res =
                            sample_manifold_laplace(manifold, mean, data.ball(), params, cc);
                        row.utility_euclidean = utility_distance(manifold, mean, res.point);
                        row.utility_intrinsic = manifold.distance(mean, res.point);
                        row.has_euclidean = row.has_intrinsic = true;
                        break;
                    }
                    case Mechanism::euclidean: {
                        // embed as vech in R^3; data ball maps into the
                        // ambient ball of radius e^r - 1 around vech(I)
                        const double r_e = ambient_radius(r);
                        const double delta_e = 2.0 * r_e / static_cast<double>(n);
                        const double sigma_e = 2.0 * delta_e / cfg.epsilon;
                        std::mt19937_64 rng = make_rng(cfg.seed, stream);
                        const Eigen::VectorXd v = vech(mean.mat);
                        Eigen::VectorXd y = sample_euclidean_laplace(v, sigma_e, 3, rng);
                        row.utility_euclidean = (v - y).norm();
                        row.has_euclidean = true;
                        // the released matrix may leave the cone; intrinsic
                        // utility only exists when it stays inside
                        Eigen::MatrixXd back = unvech(y);
                        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(back,
                                                                          Eigen::EigenvaluesOnly);
                        if (es.eigenvalues().minCoeff() > 1e-12) {
                            row.utility_intrinsic = manifold.distance(mean, Spd::Point{back});
                            row.has_intrinsic = true;
                        }
                        break;
                    }
                    case Mechanism::euclidean_projected:
                        throw config_error(
                            "euclidean_projected is undefined for spd (no unique projection "
                            "onto the cone)");
                }
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            if (cfg.timing) row.wall_ms = elapsed_ms(t0);
            rows.push_back(std::move(row));
        }
    });

    std::vector<ResultRow> out;
    out.reserve(tasks.size() * cfg.mechanisms.size());
    for (auto& rows : per_task) {
        for (auto& r2 : rows) out.push_back(std::move(r2));
    }
    return out;
}

}  // namespace

std::vector<ResultRow> run_benchmark(const BenchmarkConfig& cfg) {
    if (cfg.sizes.empty()) throw config_error("benchmark: at least one sample size required");
    for (int n : cfg.sizes) {
        if (n < 1) throw config_error("benchmark: sample sizes must be positive");
    }
    if (cfg.replicates < 1) throw config_error("benchmark: replicates must be >= 1");
    if (!(cfg.epsilon > 0.0)) throw config_error("benchmark: epsilon must be > 0");

    BenchmarkConfig c = cfg;
    if (c.mechanisms.empty()) {
        if (c.manifold == "sphere") {
            c.mechanisms = {Mechanism::kng, Mechanism::laplace, Mechanism::euclidean,
                            Mechanism::euclidean_projected};
        } else {
            c.mechanisms = {Mechanism::kng, Mechanism::laplace, Mechanism::euclidean};
        }
    }
    if (c.manifold == "sphere") return run_sphere(c);
    if (c.manifold == "spd") return run_spd(c);
    throw config_error("benchmark: unknown manifold '" + cfg.manifold + "' (sphere|spd)");
}

}  // namespace riemdp::harness
