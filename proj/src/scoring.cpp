#include "visnec/scoring.hpp"

#include "visnec/error.hpp"

#include <json.hpp>

#include <cmath>

namespace visnec {

std::string_view to_string(SampleCategory c) noexcept {
    switch (c) {
        case SampleCategory::Misaligned: return "misaligned";
        case SampleCategory::Redundant: return "redundant";
        case SampleCategory::VisionCritical: return "vision_critical";
    }
    return "redundant";
}

std::optional<SampleCategory> parse_category(std::string_view s) noexcept {
    if (s == "misaligned") return SampleCategory::Misaligned;
    if (s == "redundant") return SampleCategory::Redundant;
    if (s == "vision_critical") return SampleCategory::VisionCritical;
    return std::nullopt;
}

void CategoryConfig::validate() const {
    if (!std::isfinite(epsilon) || epsilon < 0.0)
        fail(ErrorCode::InvalidConfig, "epsilon must be finite and >= 0");
}

ScoreTable score_all(std::span<const LossRecord> records, const CategoryConfig& cfg) {
    cfg.validate();
    ScoreTable out;
    out.scores.reserve(records.size());
    out.categories.reserve(records.size());
    for (const auto& r : records) {
        out.scores.push_back(compute_visnec(r));
        out.categories.push_back(categorize(out.scores.back(), cfg));
    }
    return out;
}

ScoreTable score_all(const ScoredDataset& dataset, const CategoryConfig& cfg) {
    return score_all(std::span<const LossRecord>(dataset.records()), cfg);
}

std::string format_scores_jsonl(const ScoreTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.scores.size(); ++i) {
        nlohmann::ordered_json j;
        j["id"] = table.scores[i].id;
        j["score"] = table.scores[i].score;
        j["category"] = std::string(to_string(table.categories[i]));
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace visnec
