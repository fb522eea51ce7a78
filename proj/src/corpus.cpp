#include "riemdp/harness/corpus.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "riemdp/harness/io.hpp"
#include "riemdp/rng.hpp"

namespace riemdp::harness {

CorpusTemplate corpus_template_from_name(const std::string& name) {
    if (name == "ellipse") return CorpusTemplate::ellipse;
    if (name == "blob") return CorpusTemplate::blob;
    throw config_error("unknown corpus template '" + name + "' (ellipse|blob)");
}

LandmarkConfig corpus_template(CorpusTemplate shape, int k) {
    if (k < 8) throw config_error("corpus template: k must be >= 8");
    LandmarkConfig c(k);
    for (int j = 0; j < k; ++j) {
        const double t = 2.0 * std::numbers::pi * j / k;
        switch (shape) {
            case CorpusTemplate::ellipse:
                c[j] = std::complex<double>(std::cos(t), 0.6 * std::sin(t));
                break;
            case CorpusTemplate::blob: {
                const double rad = 1.0 + 0.25 * std::cos(2.0 * t) + 0.15 * std::sin(3.0 * t);
                c[j] = std::complex<double>(rad * std::cos(t), rad * std::sin(t));
                break;
            }
        }
    }
    return c;
}

std::vector<LandmarkConfig> gen_synthetic_corpus(CorpusTemplate shape, int k, int count,
                                                 double noise, std::uint64_t seed) {
    if (count < 1) throw config_error("corpus: count must be >= 1");
    if (noise < 0.0) throw config_error("corpus: noise must be >= 0");
    const LandmarkConfig base = corpus_template(shape, k);
    std::mt19937_64 rng = make_rng(seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    std::vector<LandmarkConfig> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        LandmarkConfig c(k);
        for (int j = 0; j < k; ++j) {
            c[j] = base[j] + std::complex<double>(noise * gauss(rng), noise * gauss(rng));
        }
        const double angle = 2.0 * std::numbers::pi * u01(rng);
        const double scale = std::exp(0.1 * gauss(rng));
        const std::complex<double> shift(0.5 * gauss(rng), 0.5 * gauss(rng));
        const std::complex<double> pose = scale * std::polar(1.0, angle);
        for (int j = 0; j < k; ++j) c[j] = pose * c[j] + shift;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace riemdp::harness
