// Acceptance suite: runs every gate criterion end to end and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "riemdp/calibration.hpp"
#include "riemdp/frechet.hpp"
#include "riemdp/harness/audit.hpp"
#include "riemdp/harness/bench.hpp"
#include "riemdp/harness/corpus.hpp"
#include "riemdp/harness/io.hpp"
#include "riemdp/harness/pipeline.hpp"
#include "riemdp/kendall.hpp"
#include "riemdp/mechanisms.hpp"
#include "riemdp/rng.hpp"
#include "riemdp/spd.hpp"
#include "riemdp/sphere.hpp"
#include "test_util.hpp"

using namespace riemdp;
using namespace riemdp::harness;
namespace tu = riemdp::testutil;

namespace {

const double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

template <class Fn>
void criterion(int id, const std::string& name, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = fn();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              t0)
            .count() /
        1000.0;
    if (!out.pass) ++g_failures;
    std::printf("[%2d] %s  %s (%.1fs)\n      %s\n", id, out.pass ? "PASS" : "FAIL", name.c_str(),
                secs, out.detail.c_str());
    std::fflush(stdout);
}

struct Stats {
    long count = 0;
    double mean = 0.0;
    double m2 = 0.0;  // sum of squared deviations (Welford)

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
    double se() const {
        if (count < 2) return 0.0;
        return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
    }
};

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------

Outcome c1_roundtrips() {
    std::mt19937_64 rng(101);
    const int trials = 10000;

    Sphere sph(2);
    const auto pole = sph.north_pole();
    double sphere_worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        auto p = tu::random_point_near(sph, pole, kPi / 8.0, rng);
        auto q = tu::random_point_near(sph, pole, kPi / 8.0, rng);
        auto v = sph.log(p, q);
        sphere_worst = std::max(sphere_worst, (sph.exp(p, v).coords - q.coords).norm());
    }

    Spd spd(2);
    double spd_worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        auto p = tu::random_spd_near_identity(spd, 1.5, rng);
        auto q = tu::random_spd_near_identity(spd, 1.5, rng);
        auto v = spd.log(p, q);
        spd_worst = std::max(spd_worst, (spd.exp(p, v).mat - q.mat).norm());
    }

    Kendall ken(12);
    auto center = tu::random_preshape(ken, rng);
    double ken_worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        auto p = tu::random_preshape_near(ken, center, kPi / 16.0, rng);
        auto q = tu::random_preshape_near(ken, center, kPi / 16.0, rng);
        auto v = ken.log(p, q);
        ken_worst = std::max(ken_worst, static_cast<double>(ken.distance(ken.exp(p, v), q)));
    }

    Outcome out;
    out.pass = sphere_worst < 1e-9 && spd_worst < 1e-9 && ken_worst < 1e-7;
    std::ostringstream d;
    d << "max roundtrip error: sphere " << sphere_worst << " (<1e-9), spd " << spd_worst
      << " (<1e-9), kendall shape " << ken_worst << " (<1e-7), " << trials << " pairs each";
    out.detail = d.str();
    return out;
}

Outcome c2_gradients() {
    std::mt19937_64 rng(102);
    const int trials = 1000;
    const double h = 1e-5;
    const double rel_tol = 1e-5;
    double worst_rel = 0.0;

    auto fd_check = [&](auto& data, const auto& x, auto u) {
        const auto& m = data.manifold();
        const double un = m.norm(x, u);
        u.value *= 1.0 / un;
        const double analytic = m.inner(x, neg_gradient(x, data), u);
        auto fwd = u;
        fwd.value *= h;
        auto bwd = u;
        bwd.value *= -h;
        const double fd =
            (-variance(m.exp(x, fwd), data) + variance(m.exp(x, bwd), data)) / (2.0 * h);
        const double rel = std::abs(fd - analytic) / std::max(1e-3, std::abs(analytic));
        worst_rel = std::max(worst_rel, rel);
    };

    for (int i = 0; i < trials; ++i) {
        auto data = tu::make_sphere_dataset(15, kPi / 8.0, rng);
        auto x = tu::random_point_near(data.manifold(), data.ball().center, 0.9 * kPi / 8.0, rng);
        fd_check(data, x, tu::random_unit_tangent(data.manifold(), x, rng));
    }
    for (int i = 0; i < trials; ++i) {
        auto data = tu::make_spd_dataset(10, 1.4, rng);
        auto x = tu::random_spd_near_identity(data.manifold(), 1.3, rng);
        fd_check(data, x,
                 Spd::Tangent{x, tu::random_symmetric(data.manifold().order(), 1.0, rng)});
    }
    for (int i = 0; i < trials; ++i) {
        auto data = tu::make_kendall_dataset(10, 9, kPi / 16.0, rng);
        const auto& m = data.manifold();
        auto x = tu::random_preshape_near(m, data.ball().center, 0.9 * kPi / 16.0, rng);
        fd_check(data, x, m.make_horizontal(x, tu::random_preshape(m, rng).coords));
    }

    Outcome out;
    out.pass = worst_rel < rel_tol;
    std::ostringstream d;
    d << "central differences (h=1e-5) vs analytic gradient: worst relative error " << worst_rel
      << " over " << 3 * trials << " cases (<1e-5)";
    out.detail = d.str();
    return out;
}

Outcome c3_sandwich() {
    std::mt19937_64 rng(103);
    const int trials = 1000;
    const double r = kPi / 8.0;
    const double lo = h_max(2.0 * r, 1.0);
    const double hi = h_min(2.0 * r, 1.0);  // = 1 on the unit sphere
    const SolverConfig tight{0.5, 1e-12, 500, false};
    double worst_lower = 1e300, worst_upper = -1e300;
    bool all_ok = true;
    for (int i = 0; i < trials; ++i) {
        auto data = tu::make_sphere_dataset(20, r, rng);
        const auto& m = data.manifold();
        auto mean = frechet_mean(data, tight);
        if (!mean.converged) {
            all_ok = false;
            break;
        }
        auto x = tu::random_point_near(m, data.ball().center, r, rng);
        const double gn = m.norm(x, neg_gradient(x, data));
        const double rho = m.distance(mean.mean, x);
        worst_lower = std::min(worst_lower, gn - lo * rho);
        worst_upper = std::max(worst_upper, gn - hi * rho);
        all_ok = all_ok && gn >= lo * rho - 1e-9 && gn <= hi * rho + 1e-9;
    }
    Outcome out;
    out.pass = all_ok;
    std::ostringstream d;
    d << "h_max(2r)*rho <= |grad U| <= h_min(2r)*rho on S^2 (r=pi/8, " << trials
      << " datasets): min lower-slack " << worst_lower << ", max upper-slack " << worst_upper
      << " (within 1e-9)";
    out.detail = d.str();
    return out;
}

Outcome c4_sensitivity() {
    std::mt19937_64 rng(104);
    const int trials = 1000;

    double worst_ratio = 0.0;
    bool ok = true;
    std::ostringstream d;

    {
        const int n = 20;
        const double r = kPi / 8.0;
        const double delta = sensitivity(PrivacyParams{1.0, r, n, 1.0, 1.0});
        double worst = 0.0;
        for (int i = 0; i < trials; ++i) {
            auto data = tu::make_sphere_dataset(n, r, rng);
            const auto& m = data.manifold();
            std::vector<Sphere::Point> swapped(data.points().begin(), data.points().end());
            swapped.back() = sample_ball_uniform_polar(m, r, 1, rng)[0];
            Dataset<Sphere> prime(m, swapped, data.ball());
            auto x = tu::random_point_near(m, data.ball().center, r, rng);
            Sphere::Tangent diff{x, neg_gradient(x, data).value - neg_gradient(x, prime).value};
            worst = std::max(worst, static_cast<double>(m.norm(x, diff)));
        }
        ok = ok && worst <= delta + 1e-9;
        worst_ratio = std::max(worst_ratio, worst / delta);
        d << "sphere max " << worst << " <= " << delta;
    }
    {
        const int n = 15;
        const double r = 1.5;
        const double delta = sensitivity(PrivacyParams{1.0, r, n, 0.0, -0.5});
        const bool flat_rate = std::abs(delta - 2.0 * r / n) < 1e-15;
        double worst = 0.0;
        for (int i = 0; i < trials; ++i) {
            auto data = tu::make_spd_dataset(n, r, rng);
            const auto& m = data.manifold();
            std::vector<Spd::Point> swapped(data.points().begin(), data.points().end());
            swapped.back() = tu::random_spd_near_identity(m, r, rng);
            Dataset<Spd> prime(m, swapped, data.ball());
            auto x = tu::random_spd_near_identity(m, r, rng);
            Spd::Tangent diff{x, neg_gradient(x, data).value - neg_gradient(x, prime).value};
            worst = std::max(worst, static_cast<double>(m.norm(x, diff)));
        }
        ok = ok && flat_rate && worst <= delta + 1e-9;
        worst_ratio = std::max(worst_ratio, worst / delta);
        d << "; spd max " << worst << " <= 2r/n = " << delta;
    }
    {
        const int n = 15;
        const double r = kPi / 16.0;
        const double delta = sensitivity(PrivacyParams{1.0, r, n, 4.0, 1.0});
        double worst = 0.0;
        for (int i = 0; i < trials; ++i) {
            auto data = tu::make_kendall_dataset(n, 10, r, rng);
            const auto& m = data.manifold();
            std::vector<Kendall::Point> swapped(data.points().begin(), data.points().end());
            swapped.back() = tu::random_preshape_near(m, data.ball().center, r, rng);
            Dataset<Kendall> prime(m, swapped, data.ball());
            auto x = tu::random_preshape_near(m, data.ball().center, r, rng);
            Kendall::Tangent diff{x, neg_gradient(x, data).value - neg_gradient(x, prime).value};
            worst = std::max(worst, static_cast<double>(m.norm(x, diff)));
        }
        ok = ok && worst <= delta + 1e-9;
        worst_ratio = std::max(worst_ratio, worst / delta);
        d << "; kendall max " << worst << " <= " << delta;
    }
    d << " (1000 adjacent pairs each; tightest fill " << worst_ratio << ")";
    return Outcome{ok, d.str()};
}

Outcome c5_audit() {
    const int pairs = 20;
    AuditConfig cfg;
    cfg.epsilon = 1.0;
    cfg.n = 20;
    cfg.grid_theta = cfg.grid_phi = 200;

    bool ok = true;
    double worst = 0.0;
    for (const char* mech : {"kng", "laplace"}) {
        cfg.mechanism = mech;
        for (int i = 0; i < pairs; ++i) {
            auto [d, dp] = make_adjacent_pair(kPi / 8.0, cfg.n, 500 + i, false);
            auto report = dp_ratio_audit(d, dp, cfg);
            ok = ok && report.pass;
            worst = std::max(worst, report.max_log_ratio);
        }
    }

    AuditConfig bad = cfg;
    bad.mechanism = "kng";
    bad.epsilon = 0.1;
    bad.calibration_epsilon = 1.0;
    auto [sd, sdp] = make_adjacent_pair(kPi / 8.0, cfg.n, 999, true);
    auto fail_report = dp_ratio_audit(sd, sdp, bad);
    ok = ok && !fail_report.pass;

    Outcome out;
    out.pass = ok;
    std::ostringstream d;
    d << "kng+laplace on 20 adjacent pairs, 200x200 grid: worst log-ratio " << worst
      << " <= " << cfg.epsilon + std::log(1.05) << "; eps/10 miscalibration ratio "
      << fail_report.max_log_ratio << " > " << fail_report.threshold << " (correctly fails)";
    out.detail = d.str();
    return out;
}

struct CellStats {
    Stats euclidean;
    Stats intrinsic_sq;
};

std::map<std::pair<std::string, int>, CellStats> collect(const std::vector<ResultRow>& rows,
                                                         long* errors) {
    std::map<std::pair<std::string, int>, CellStats> cells;
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            ++*errors;
            continue;
        }
        auto& c = cells[{r.mechanism, r.n}];
        if (r.has_euclidean) c.euclidean.add(r.utility_euclidean);
        if (r.has_intrinsic) c.intrinsic_sq.add(r.utility_intrinsic * r.utility_intrinsic);
    }
    return cells;
}

std::vector<ResultRow> g_sphere_rows;  // shared between criteria 6 and 8

Outcome c6_sphere_benchmark() {
    BenchmarkConfig cfg;
    cfg.manifold = "sphere";
    cfg.sizes = {25, 50, 100, 200, 400};
    cfg.replicates = 2000;
    cfg.epsilon = 1.0;
    cfg.radius = kPi / 8.0;
    cfg.mechanisms = {Mechanism::kng, Mechanism::laplace, Mechanism::euclidean,
                      Mechanism::euclidean_projected};
    cfg.seed = 746574;
    g_sphere_rows = run_benchmark(cfg);

    long errors = 0;
    auto cells = collect(g_sphere_rows, &errors);
    bool ok = errors == 0;
    std::ostringstream d;
    d << "2000 replicates, eps=1, r=pi/8:";
    for (int n : cfg.sizes) {
        const auto& kng = cells[{"kng", n}].euclidean;
        const auto& lap = cells[{"laplace", n}].euclidean;
        const auto& proj = cells[{"euclidean_projected", n}].euclidean;
        const double sep = 2.0 * std::sqrt(kng.se() * kng.se() + lap.se() * lap.se());
        const bool kng_vs_lap = lap.mean - kng.mean >= sep;
        const bool proj_at_or_above = proj.mean >= kng.mean;
        ok = ok && kng_vs_lap && proj_at_or_above;
        d << " n=" << n << " [kng " << kng.mean << " < lap " << lap.mean << " by "
          << (lap.mean - kng.mean) / (sep / 2.0) << " se; proj " << proj.mean
          << (proj_at_or_above ? " >= kng" : " BELOW kng") << "]";
    }
    if (errors > 0) d << " errors=" << errors;
    return Outcome{ok, d.str()};
}

Outcome c7_spd_benchmark() {
    BenchmarkConfig cfg;
    cfg.manifold = "spd";
    cfg.sizes = {50, 100, 225};
    cfg.replicates = 200;
    cfg.epsilon = 1.0;
    cfg.radius = 1.5;
    cfg.mechanisms = {Mechanism::kng, Mechanism::euclidean};
    cfg.seed = 157842;
    auto rows = run_benchmark(cfg);

    long errors = 0;
    auto cells = collect(rows, &errors);
    bool ok = errors == 0;
    std::ostringstream d;
    d << "200 replicates, eps=1, r=1.5, k=2:";
    for (int n : cfg.sizes) {
        const auto& kng = cells[{"kng", n}].euclidean;
        const auto& euc = cells[{"euclidean", n}].euclidean;
        const double sep = 2.0 * std::sqrt(kng.se() * kng.se() + euc.se() * euc.se());
        const bool kng_better = euc.mean - kng.mean >= sep;
        ok = ok && kng_better;
        d << " n=" << n << " [kng " << kng.mean << " < euclidean " << euc.mean << " by "
          << (euc.mean - kng.mean) / (sep / 2.0) << " se]";
    }
    if (errors > 0) d << " errors=" << errors;
    return Outcome{ok, d.str()};
}

Outcome c8_rate() {
    long errors = 0;
    auto cells = collect(g_sphere_rows, &errors);
    std::vector<double> log_n, log_msq;
    for (int n : {25, 50, 100, 200, 400}) {
        const auto& cell = cells[{"kng", n}].intrinsic_sq;
        if (cell.count == 0) return Outcome{false, "criterion 6 rows unavailable"};
        log_n.push_back(std::log(static_cast<double>(n)));
        log_msq.push_back(std::log(cell.mean));
    }
    const double slope_n = ols_slope(log_n, log_msq);

    std::vector<double> log_eps, log_msq_eps;
    for (double eps : {0.5, 1.0, 2.0}) {
        BenchmarkConfig cfg;
        cfg.manifold = "sphere";
        cfg.sizes = {100};
        cfg.replicates = 2000;
        cfg.epsilon = eps;
        cfg.radius = kPi / 8.0;
        cfg.mechanisms = {Mechanism::kng};
        cfg.seed = 365406;
        auto rows = run_benchmark(cfg);
        long eps_errors = 0;
        auto eps_cells = collect(rows, &eps_errors);
        errors += eps_errors;
        log_eps.push_back(std::log(eps));
        log_msq_eps.push_back(std::log(eps_cells[{"kng", 100}].intrinsic_sq.mean));
    }
    const double slope_eps = ols_slope(log_eps, log_msq_eps);

    const bool ok = errors == 0 && slope_n > -2.4 && slope_n < -1.6 && slope_eps > -2.4 &&
                    slope_eps < -1.6;
    std::ostringstream d;
    d << "log E[rho^2] slopes: vs log n " << slope_n << ", vs log eps " << slope_eps
      << " (both within [-2.4, -1.6])";
    return Outcome{ok, d.str()};
}

Outcome c9_shape_pipeline() {
    const int replicates = 50;
    Kendall m(32);
    Stats aligned, unaligned;
    int kng_valid = 0;
    for (int rep = 0; rep < replicates; ++rep) {
        auto corpus = gen_synthetic_corpus(CorpusTemplate::ellipse, 32, 50, 0.05,
                                           1000 + static_cast<std::uint64_t>(rep));
        ShapePipelineConfig cfg;
        cfg.epsilon = 1.0;
        cfg.seed = 9000 + static_cast<std::uint64_t>(rep);
        auto res = run_shape_pipeline(corpus, cfg);
        try {
            m.check_point(Kendall::Point{res.kng});
            ++kng_valid;
        } catch (const std::exception&) {
        }
        aligned.add(m.distance(m.to_preshape(res.laplace_aligned), res.mean));
        unaligned.add(m.distance(m.to_preshape(res.laplace_unaligned), res.mean));
    }
    const double sep =
        2.0 * std::sqrt(aligned.se() * aligned.se() + unaligned.se() * unaligned.se());
    const bool ok = kng_valid == replicates && unaligned.mean - aligned.mean >= sep;
    std::ostringstream d;
    d << "50-shape ellipse corpus, k=32, 50 replicates: aligned point-wise " << aligned.mean
      << " vs unaligned " << unaligned.mean << " (separation "
      << (unaligned.mean - aligned.mean) / (sep / 2.0) << " se); kng valid preshapes "
      << kng_valid << "/50";
    return Outcome{ok, d.str()};
}

Outcome c10_determinism() {
    BenchmarkConfig cfg;
    cfg.manifold = "sphere";
    cfg.sizes = {25, 50};
    cfg.replicates = 3;
    cfg.epsilon = 1.0;
    cfg.mechanisms = {Mechanism::kng, Mechanism::laplace, Mechanism::euclidean,
                      Mechanism::euclidean_projected};
    cfg.seed = 99;
    cfg.burn_in = 500;
    cfg.thin = 50;

    cfg.threads = 1;
    const std::string serial = results_to_csv(run_benchmark(cfg));
    cfg.threads = 4;
    const std::string parallel_a = results_to_csv(run_benchmark(cfg));
    const std::string parallel_b = results_to_csv(run_benchmark(cfg));

    BenchmarkConfig spd_cfg;
    spd_cfg.manifold = "spd";
    spd_cfg.sizes = {30};
    spd_cfg.replicates = 3;
    spd_cfg.mechanisms = {Mechanism::kng, Mechanism::euclidean};
    spd_cfg.seed = 99;
    spd_cfg.burn_in = 300;
    spd_cfg.thin = 30;
    spd_cfg.threads = 1;
    const std::string spd_a = results_to_csv(run_benchmark(spd_cfg));
    spd_cfg.threads = 4;
    const std::string spd_b = results_to_csv(run_benchmark(spd_cfg));

    const bool ok =
        serial == parallel_a && parallel_a == parallel_b && spd_a == spd_b && !serial.empty();
    std::ostringstream d;
    d << "sphere csv bytes identical across (1 thread, 4 threads, rerun): "
      << (serial == parallel_a && parallel_a == parallel_b ? "yes" : "NO")
      << "; spd across thread counts: " << (spd_a == spd_b ? "yes" : "NO");
    return Outcome{ok, d.str()};
}

}  // namespace

int main() {
    std::printf("acceptance suite (%u hardware threads)\n",
                std::thread::hardware_concurrency());
    criterion(1, "geometry roundtrips (1e4 pairs per manifold)", c1_roundtrips);
    criterion(2, "gradient vs central finite differences (1e3 cases per manifold)",
              c2_gradients);
    criterion(3, "gradient-norm sandwich on the unit sphere (1e3 datasets)", c3_sandwich);
    criterion(4, "gradient sensitivity bound (1e3 adjacent pairs per manifold)",
              c4_sensitivity);
    criterion(5, "discretized privacy-ratio audit (20 pairs, 200x200 grid)", c5_audit);
    criterion(6, "sphere utility benchmark ordering (figure-1 left)", c6_sphere_benchmark);
    criterion(7, "spd utility benchmark ordering (figure-1 right)", c7_spd_benchmark);
    criterion(8, "squared-utility scaling in n and epsilon", c8_rate);
    criterion(9, "shape pipeline: alignment matters, kng releases are preshapes",
              c9_shape_pipeline);
    criterion(10, "byte-level determinism incl. parallel execution", c10_determinism);
    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
