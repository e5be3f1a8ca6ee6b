#pragma once

#include "visnec/ingest.hpp"
#include "visnec/scoring.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace visnec {

/// Synthetic scored corpus with planted categories. Scores are drawn per
/// category from misaligned [-3, -0.5], redundant [-0.05, 0.05] and
/// vision-critical [1, 4]; embeddings from unit-variance Gaussians around
/// `clusters` random centers in [-10, 10]^dim.
struct SynthConfig {
    std::size_t n = 1000;
    std::array<double, 3> fractions = {0.2, 0.3, 0.5};  // misaligned, redundant, vision-critical
    std::uint64_t seed = 0;
    std::size_t clusters = 20;
    std::size_t dim = 16;

    void validate() const;
};

struct SynthSample {
    std::string id;
    SampleCategory category = SampleCategory::Redundant;
    std::size_t cluster = 0;
    double planted_score = 0.0;
};

struct SynthData {
    std::vector<LossRecord> records;
    EmbeddingTable embeddings;
    std::vector<SynthSample> truth;
};

SynthData synthesize(const SynthConfig& cfg);

/// Labels file: one `{"id","category","cluster","planted_score"}` per line.
std::string format_synth_labels(const std::vector<SynthSample>& truth);

}  // namespace visnec
