#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riemdp/kendall.hpp"

namespace riemdp::harness {

enum class CorpusTemplate { ellipse, blob };

CorpusTemplate corpus_template_from_name(const std::string& name);

/// The unperturbed closed template curve sampled at k landmarks.
LandmarkConfig corpus_template(CorpusTemplate shape, int k);

/// Synthetic stand-in for a registered landmark corpus: each shape is the
/// template with Gaussian jitter of the given scale on every coordinate,
/// carried to a random pose (rotation uniform on [0, 2pi), log-normal scale,
/// Gaussian translation). Pose variation is shape-irrelevant by construction
/// and is what the alignment steps downstream have to undo. Deterministic
/// per seed.
std::vector<LandmarkConfig> gen_synthetic_corpus(CorpusTemplate shape, int k, int count,
                                                 double noise, std::uint64_t seed);

}  // namespace riemdp::harness
