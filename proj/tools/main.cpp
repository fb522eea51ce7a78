#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "riemdp/harness/audit.hpp"
#include "riemdp/harness/bench.hpp"
#include "riemdp/harness/corpus.hpp"
#include "riemdp/harness/io.hpp"
#include "riemdp/harness/pipeline.hpp"

namespace {

using namespace riemdp;
using namespace riemdp::harness;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitAuditFail = 4;

std::string sibling_path(const std::string& out, const std::string& suffix,
                         const std::string& extension = "") {
    const auto dot = out.rfind('.');
    if (dot == std::string::npos || out.find('/', dot) != std::string::npos) {
        return out + suffix + extension;
    }
    return out.substr(0, dot) + suffix + (extension.empty() ? out.substr(dot) : extension);
}

struct BenchCli {
    BenchmarkConfig cfg;
    std::vector<std::string> mechanism_names;
    std::string out;
    bool emit_plot = false;
    int replicates = -1;
};

int run_bench(BenchCli& cli, const std::string& manifold) {
    cli.cfg.manifold = manifold;
    cli.cfg.replicates = cli.replicates > 0 ? cli.replicates : (manifold == "sphere" ? 2000 : 200);
    for (const auto& name : cli.mechanism_names) {
        cli.cfg.mechanisms.push_back(mechanism_from_name(name));
    }
    auto rows = run_benchmark(cli.cfg);
    write_results(rows, cli.out);
    const std::string summary_path = sibling_path(cli.out, "_summary");
    write_summary(rows, summary_path);
    auto summary = summarize(rows);
    std::cout << summary_to_csv(summary);
    if (cli.emit_plot) {
        write_plot_script(sibling_path(cli.out, "_plot", ".gnuplot"), summary_path, summary);
    }
    long failures = 0;
    for (const auto& r : rows) {
        if (!r.error.empty()) ++failures;
    }
    if (failures > 0) {
        std::cerr << failures << " replicate(s) recorded an error; see the error column\n";
    }
    return kExitOk;
}

int run_shape(const std::string& in, ShapePipelineConfig& cfg, const std::string& out) {
    auto shapes = load_landmarks(in);
    auto res = run_shape_pipeline(shapes, cfg);

    std::vector<std::string> meta = {
        "epsilon=" + format_double(cfg.epsilon),
        "seed=" + std::to_string(cfg.seed),
        "n=" + std::to_string(res.n),
        "k=" + std::to_string(res.k),
        "radius=" + format_double(res.radius) + " (data_dependent=true)",
        "sigma_kng=" + format_double(res.sigma_kng),
    };
    auto emit = [&](const std::string& tag, const LandmarkConfig& c) {
        std::vector<std::string> m = meta;
        m.insert(m.begin(), "variant=" + tag);
        const std::string path = out + "." + tag + ".csv";
        write_landmarks(path, std::span<const LandmarkConfig>(&c, 1), m);
        std::cout << "wrote " << path << "\n";
    };
    emit("mean", LandmarkConfig(res.mean.coords));
    emit("kng", res.kng);
    emit("laplace_aligned", res.laplace_aligned);
    emit("laplace_unaligned", res.laplace_unaligned);
    if (res.kng_smoothed) {
        emit("kng_smoothed", *res.kng_smoothed);
        emit("laplace_aligned_smoothed", *res.laplace_aligned_smoothed);
        emit("laplace_unaligned_smoothed", *res.laplace_unaligned_smoothed);
    }
    if (res.kng_chain.stall_warning) {
        std::cerr << "warning: kng chain accepted nothing over a full window; "
                     "inspect --step/--burn-in\n";
    }
    std::cout << "kng chain acceptance rate: " << format_double(res.kng_chain.acceptance_rate())
              << "\n";
    return kExitOk;
}

int run_audit(const AuditConfig& cfg, int pairs, std::uint64_t seed, bool separated) {
    const double radius = cfg.radius > 0.0 ? cfg.radius : std::numbers::pi / 8.0;
    bool all_pass = true;
    for (int i = 0; i < pairs; ++i) {
        auto [d, dp] = make_adjacent_pair(radius, cfg.n, seed + static_cast<std::uint64_t>(i),
                                          separated);
        auto report = dp_ratio_audit(d, dp, cfg);
        std::cout << "pair " << i << ": " << audit_report_text(report) << "\n";
        all_pass = all_pass && report.pass;
    }
    return all_pass ? kExitOk : kExitAuditFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"differentially private Frechet means on manifolds"};
    app.require_subcommand(1);

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "replicated utility benchmarks");
    bench->require_subcommand(1);
    BenchCli bcli;
    auto add_bench_flags = [&](CLI::App* sub) {
        sub->add_option("--epsilon", bcli.cfg.epsilon, "privacy budget")->capture_default_str();
        sub->add_option("--radius", bcli.cfg.radius, "data ball radius (0 = manifold default)");
        sub->add_option("--sizes", bcli.cfg.sizes, "sample sizes")->delimiter(',');
        sub->add_option("--replicates", bcli.replicates, "replicates per size");
        sub->add_option("--mechanisms", bcli.mechanism_names,
                        "kng,laplace,euclidean,euclidean_projected")
            ->delimiter(',');
        sub->add_option("--seed", bcli.cfg.seed, "master seed")->capture_default_str();
        sub->add_option("--burn-in", bcli.cfg.burn_in, "chain burn-in override");
        sub->add_option("--thin", bcli.cfg.thin, "chain thinning override");
        sub->add_option("--step", bcli.cfg.step_scale, "chain step scale override");
        sub->add_option("--threads", bcli.cfg.threads, "worker threads (0 = hardware)");
        sub->add_flag("--timing", bcli.cfg.timing,
                      "record wall times (breaks byte-reproducibility of the CSV)");
        sub->add_option("--out", bcli.out, "results CSV path")->required();
        sub->add_flag("--emit-plot", bcli.emit_plot, "write a gnuplot script next to --out");
    };
    auto* bench_sphere = bench->add_subcommand("sphere", "unit 2-sphere benchmark");
    add_bench_flags(bench_sphere);
    auto* bench_spd = bench->add_subcommand("spd", "2x2 SPD matrix benchmark");
    add_bench_flags(bench_spd);

    // ---- shape ----
    auto* shape = app.add_subcommand("shape", "private shape releases");
    auto* shape_run = shape->add_subcommand("run", "run the landmark release pipeline");
    std::string shape_in, shape_out;
    ShapePipelineConfig scfg;
    shape_run->add_option("--in", shape_in, "landmark CSV input")->required();
    shape_run->add_option("--epsilon", scfg.epsilon, "privacy budget")->capture_default_str();
    shape_run->add_option("--seed", scfg.seed, "master seed")->capture_default_str();
    shape_run->add_option("--smooth-bandwidth", scfg.smooth_bandwidth,
                          "local linear regression bandwidth (0 = off)");
    shape_run->add_option("--burn-in", scfg.burn_in, "kng chain burn-in override");
    shape_run->add_option("--thin", scfg.thin, "kng chain thinning override");
    shape_run->add_option("--step", scfg.step_scale, "kng chain step scale override");
    shape_run->add_option("--out", shape_out, "output path prefix")->required();

    // ---- audit ----
    auto* audit = app.add_subcommand("audit", "privacy ratio audits");
    auto* audit_dp = audit->add_subcommand("dp", "discretized density-ratio audit on the sphere");
    AuditConfig acfg;
    int audit_pairs = 1;
    std::uint64_t audit_seed = 0;
    bool audit_separated = false;
    int audit_grid = 200;
    audit_dp->add_option("--epsilon", acfg.epsilon, "audited budget")->capture_default_str();
    audit_dp->add_option("--calibration-epsilon", acfg.calibration_epsilon,
                         "budget the densities were calibrated for (default: --epsilon)");
    audit_dp->add_option("--radius", acfg.radius, "ball radius (0 = pi/8)");
    audit_dp->add_option("--n", acfg.n, "dataset size")->capture_default_str();
    audit_dp->add_option("--grid", audit_grid, "cells per axis")->capture_default_str();
    audit_dp->add_option("--mechanism", acfg.mechanism, "kng|laplace")->capture_default_str();
    audit_dp->add_option("--pairs", audit_pairs, "adjacent pairs to test")->capture_default_str();
    audit_dp->add_option("--seed", audit_seed, "master seed")->capture_default_str();
    audit_dp->add_flag("--separated", audit_separated,
                       "pin the differing elements on opposite sides of the ball");

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "synthetic data");
    auto* gen_corpus = gen->add_subcommand("corpus", "synthetic landmark corpus");
    std::string tmpl = "ellipse", gen_out;
    int gen_k = 32, gen_count = 50;
    double gen_noise = 0.05;
    std::uint64_t gen_seed = 0;
    gen_corpus->add_option("--template", tmpl, "ellipse|blob")->capture_default_str();
    gen_corpus->add_option("--k", gen_k, "landmarks per shape")->capture_default_str();
    gen_corpus->add_option("--count", gen_count, "number of shapes")->capture_default_str();
    gen_corpus->add_option("--noise", gen_noise, "landmark jitter scale")->capture_default_str();
    gen_corpus->add_option("--seed", gen_seed, "master seed")->capture_default_str();
    gen_corpus->add_option("--out", gen_out, "corpus CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (bench_sphere->parsed()) return run_bench(bcli, "sphere");
        if (bench_spd->parsed()) return run_bench(bcli, "spd");
        if (shape_run->parsed()) return run_shape(shape_in, scfg, shape_out);
        if (audit_dp->parsed()) {
            acfg.grid_theta = acfg.grid_phi = audit_grid;
            return run_audit(acfg, audit_pairs, audit_seed, audit_separated);
        }
        if (gen_corpus->parsed()) {
            auto corpus =
                gen_synthetic_corpus(corpus_template_from_name(tmpl), gen_k, gen_count,
                                     gen_noise, gen_seed);
            std::vector<std::string> meta = {
                "template=" + tmpl, "k=" + std::to_string(gen_k),
                "count=" + std::to_string(gen_count), "noise=" + format_double(gen_noise),
                "seed=" + std::to_string(gen_seed)};
            write_landmarks(gen_out, corpus, meta);
            std::cout << "wrote " << gen_out << "\n";
            return kExitOk;
        }
        std::cerr << "no subcommand selected\n";
        return kExitConfig;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
