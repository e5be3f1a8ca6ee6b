#pragma once

#include "visnec/ingest.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace visnec {

/// Blind-pass loss minus multimodal loss, in nats per response token.
/// Positive means the image made the response easier to predict.
struct VisNecScore {
    std::string id;
    double score = 0.0;

    friend bool operator==(const VisNecScore&, const VisNecScore&) = default;
};

enum class SampleCategory { Misaligned, Redundant, VisionCritical };

std::string_view to_string(SampleCategory c) noexcept;
std::optional<SampleCategory> parse_category(std::string_view s) noexcept;

/// Half-width of the band around zero reported as Redundant. Reporting
/// only: selection filters on sign, not on this band.
struct CategoryConfig {
    double epsilon = 0.25;

    void validate() const;
};

inline double visnec_score(double blind_loss, double multimodal_loss) noexcept {
    return blind_loss - multimodal_loss;
}

inline VisNecScore compute_visnec(const LossRecord& record) {
    return {record.id, visnec_score(record.blind_loss, record.multimodal_loss)};
}

/// score < -eps -> Misaligned, |score| <= eps -> Redundant, score > eps -> VisionCritical.
inline SampleCategory categorize(double score, const CategoryConfig& cfg) noexcept {
    if (score < -cfg.epsilon) return SampleCategory::Misaligned;
    if (score > cfg.epsilon) return SampleCategory::VisionCritical;
    return SampleCategory::Redundant;
}

inline SampleCategory categorize(const VisNecScore& s, const CategoryConfig& cfg) noexcept {
    return categorize(s.score, cfg);
}

struct ScoreTable {
    std::vector<VisNecScore> scores;
    std::vector<SampleCategory> categories;
};

ScoreTable score_all(std::span<const LossRecord> records, const CategoryConfig& cfg);
ScoreTable score_all(const ScoredDataset& dataset, const CategoryConfig& cfg);

/// One `{"id","score","category"}` object per line, in the given order.
std::string format_scores_jsonl(const ScoreTable& table);

}  // namespace visnec
