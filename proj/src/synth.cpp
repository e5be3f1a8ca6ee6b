#include "visnec/synth.hpp"

#include "visnec/error.hpp"
#include "visnec/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <algorithm>
#include <string>

namespace visnec {

void SynthConfig::validate() const {
    double sum = 0.0;
    for (double f : fractions) {
        if (!(f >= 0.0 && f <= 1.0)) fail(ErrorCode::InvalidConfig, "fractions must lie in [0, 1]");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) fail(ErrorCode::InvalidConfig, "fractions must sum to 1");
    if (clusters == 0) fail(ErrorCode::InvalidConfig, "clusters must be positive");
    if (dim == 0) fail(ErrorCode::InvalidConfig, "dim must be positive");
}

SynthData synthesize(const SynthConfig& cfg) {
    cfg.validate();
    SplitMix64 rng(cfg.seed);

    const auto n_mis = static_cast<std::size_t>(std::llround(cfg.fractions[0] * static_cast<double>(cfg.n)));
    const auto n_red = std::min(cfg.n - n_mis,
                                static_cast<std::size_t>(std::llround(cfg.fractions[1] * static_cast<double>(cfg.n))));
    std::vector<SampleCategory> planted;
    planted.reserve(cfg.n);
    planted.insert(planted.end(), n_mis, SampleCategory::Misaligned);
    planted.insert(planted.end(), n_red, SampleCategory::Redundant);
    planted.insert(planted.end(), cfg.n - n_mis - n_red, SampleCategory::VisionCritical);
    shuffle(std::span<SampleCategory>(planted), rng);

    RowMatrix<double> centers(static_cast<Eigen::Index>(cfg.clusters), static_cast<Eigen::Index>(cfg.dim));
    for (Eigen::Index c = 0; c < centers.rows(); ++c)
        for (Eigen::Index d = 0; d < centers.cols(); ++d) centers(c, d) = -10.0 + 20.0 * rng.uniform();

    const int width = std::max(6, static_cast<int>(std::to_string(cfg.n).size()));
    SynthData out;
    out.embeddings = EmbeddingTable::with_shape(cfg.n, cfg.dim);
    out.records.reserve(cfg.n);
    out.truth.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        std::string id = std::to_string(i);
        id.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(id.size()))), '0');
        SynthSample s{"s" + id, planted[i], static_cast<std::size_t>(rng.bounded(cfg.clusters)), 0.0};

        const double u = rng.uniform();
        switch (s.category) {
            case SampleCategory::Misaligned: s.planted_score = -3.0 + 2.5 * u; break;
            case SampleCategory::Redundant: s.planted_score = -0.05 + 0.1 * u; break;
            case SampleCategory::VisionCritical: s.planted_score = 1.0 + 3.0 * u; break;
        }
        // multimodal loss in [3, 5] keeps the blind loss non-negative for every planted score
        const double mm = 3.0 + 2.0 * rng.uniform();
        out.records.push_back({s.id, mm + s.planted_score, mm});

        const auto row = static_cast<Eigen::Index>(i);
        for (Eigen::Index d = 0; d < centers.cols(); ++d)
            out.embeddings.data(row, d) = static_cast<float>(centers(static_cast<Eigen::Index>(s.cluster), d) + rng.normal());
        out.embeddings.ids[i] = s.id;
        out.truth.push_back(std::move(s));
    }
    return out;
}

std::string format_synth_labels(const std::vector<SynthSample>& truth) {
    std::string out;
    for (const auto& s : truth) {
        nlohmann::ordered_json j;
        j["id"] = s.id;
        j["category"] = std::string(to_string(s.category));
        j["cluster"] = s.cluster;
        j["planted_score"] = s.planted_score;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace visnec
