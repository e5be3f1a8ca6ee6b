#include "visnec/selection.hpp"

#include "visnec/error.hpp"
#include "visnec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace visnec {

std::string_view to_string(SelectionStrategy s) noexcept {
    switch (s) {
        case SelectionStrategy::Random: return "random";
        case SelectionStrategy::TextLoss: return "text_loss";
        case SelectionStrategy::MultimodalLoss: return "multimodal_loss";
        case SelectionStrategy::TopVisNec: return "top_visnec";
        case SelectionStrategy::VisNecClustered: return "visnec";
    }
    return "visnec";
}

std::string_view to_string(BudgetBase b) noexcept {
    return b == BudgetBase::PreFilterClusterSize ? "pre_filter" : "post_filter";
}

std::optional<SelectionStrategy> parse_strategy(std::string_view s) noexcept {
    if (s == "random") return SelectionStrategy::Random;
    if (s == "text_loss" || s == "text") return SelectionStrategy::TextLoss;
    if (s == "multimodal_loss" || s == "multimodal") return SelectionStrategy::MultimodalLoss;
    if (s == "top_visnec") return SelectionStrategy::TopVisNec;
    if (s == "visnec" || s == "visnec_clustered") return SelectionStrategy::VisNecClustered;
    return std::nullopt;
}

std::optional<BudgetBase> parse_budget_base(std::string_view s) noexcept {
    if (s == "pre_filter" || s == "pre") return BudgetBase::PreFilterClusterSize;
    if (s == "post_filter" || s == "post") return BudgetBase::PostFilterPositiveCount;
    return std::nullopt;
}

void SelectionConfig::validate() const {
    if (!(ratio > 0.0 && ratio <= 1.0))
        fail(ErrorCode::RatioOutOfRange, "ratio must lie in (0, 1], got " + std::to_string(ratio));
}

std::size_t per_cluster_budget(std::size_t cluster_size, double ratio) {
    if (!(ratio > 0.0 && ratio <= 1.0))
        fail(ErrorCode::RatioOutOfRange, "ratio must lie in (0, 1], got " + std::to_string(ratio));
    if (cluster_size == 0) return 0;

    constexpr std::uint64_t kScale = 1'000'000'000;
    const auto scaled = static_cast<std::uint64_t>(std::llround(ratio * static_cast<double>(kScale)));
    if (static_cast<double>(scaled) / static_cast<double>(kScale) == ratio) {
        const unsigned __int128 product = static_cast<unsigned __int128>(cluster_size) * scaled;
        return static_cast<std::size_t>(product / kScale);
    }
    const double product = ratio * static_cast<double>(cluster_size);
    double whole = std::floor(product);
    const double half_ulp = (std::nextafter(product, INFINITY) - product) / 2.0;
    if (whole + 1.0 - product <= half_ulp) whole += 1.0;
    return static_cast<std::size_t>(whole);
}

std::vector<std::string> SelectionResult::selected_ids() const {
    std::vector<std::string> ids;
    ids.reserve(selected.size());
    for (const auto& s : selected) ids.push_back(s.id);
    return ids;
}

namespace {

struct Candidate {
    std::size_t row;
    const std::string* id;
    double key;
};

/// key descending, id ascending
void rank(std::vector<Candidate>& c) {
    std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) {
        if (a.key != b.key) return a.key > b.key;
        return *a.id < *b.id;
    });
}

}  // namespace

SelectionResult select(std::span<const LossRecord> records, std::span<const VisNecScore> scores,
                       const Assignment* assignment, const SelectionConfig& cfg) {
    cfg.validate();
    if (records.size() != scores.size())
        fail(ErrorCode::InvariantViolation, "scores not aligned with records");
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].id != scores[i].id)
            fail(ErrorCode::InvariantViolation, "score id " + scores[i].id + " != record id " + records[i].id);

    const std::size_t n = records.size();
    SelectionResult out;
    out.config = cfg;
    out.pool_size = n;
    out.global_budget = per_cluster_budget(n, cfg.ratio);

    std::vector<std::optional<std::size_t>> cluster_of(n);
    if (assignment) {
        std::unordered_map<std::string_view, std::size_t> lookup;
        lookup.reserve(assignment->size());
        for (std::size_t i = 0; i < assignment->size(); ++i) {
            if (assignment->clusters[i] >= assignment->k)
                fail(ErrorCode::InvariantViolation, "cluster index out of range for " + assignment->ids[i]);
            lookup.emplace(assignment->ids[i], assignment->clusters[i]);
        }
        for (std::size_t i = 0; i < n; ++i)
            if (auto it = lookup.find(records[i].id); it != lookup.end()) cluster_of[i] = it->second;
    }

    auto emit = [&](const Candidate& c, std::size_t rank_1based) {
        out.selected.push_back({*c.id, cluster_of[c.row], scores[c.row].score, rank_1based});
    };

    if (cfg.strategy == SelectionStrategy::VisNecClustered) {
        if (!assignment) fail(ErrorCode::MissingAssignment, "visnec strategy requires a cluster assignment");
        std::vector<std::vector<Candidate>> positives(assignment->k);
        std::vector<std::size_t> sizes(assignment->k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (!cluster_of[i]) fail(ErrorCode::MissingAssignment, "no cluster for " + records[i].id);
            const std::size_t c = *cluster_of[i];
            ++sizes[c];
            if (scores[i].score > 0.0) positives[c].push_back({i, &records[i].id, scores[i].score});
        }
        for (std::size_t c = 0; c < assignment->k; ++c) {
            auto& pool = positives[c];
            rank(pool);
            ClusterSelection row;
            row.cluster = c;
            row.cluster_size = sizes[c];
            row.positive_count = pool.size();
            row.budget = per_cluster_budget(
                cfg.budget_base == BudgetBase::PreFilterClusterSize ? sizes[c] : pool.size(), cfg.ratio);
            row.selected_count = std::min(row.budget, row.positive_count);
            for (std::size_t r = 0; r < row.selected_count; ++r) emit(pool[r], r + 1);
            out.per_cluster.push_back(row);
        }
        return out;
    }

    std::vector<Candidate> pool;
    pool.reserve(n);
    switch (cfg.strategy) {
        case SelectionStrategy::TopVisNec:
            for (std::size_t i = 0; i < n; ++i)
                if (scores[i].score > 0.0) pool.push_back({i, &records[i].id, scores[i].score});
            rank(pool);
            break;
        case SelectionStrategy::TextLoss:
            for (std::size_t i = 0; i < n; ++i) pool.push_back({i, &records[i].id, records[i].blind_loss});
            rank(pool);
            break;
        case SelectionStrategy::MultimodalLoss:
            for (std::size_t i = 0; i < n; ++i) pool.push_back({i, &records[i].id, records[i].multimodal_loss});
            rank(pool);
            break;
        case SelectionStrategy::Random: {
            for (std::size_t i = 0; i < n; ++i) pool.push_back({i, &records[i].id, 0.0});
            std::sort(pool.begin(), pool.end(),
                      [](const Candidate& a, const Candidate& b) { return *a.id < *b.id; });
            SplitMix64 rng(cfg.seed);
            shuffle(std::span<Candidate>(pool), rng);
            break;
        }
        case SelectionStrategy::VisNecClustered:
            break;
    }
    const std::size_t take = std::min(out.global_budget, pool.size());
    for (std::size_t r = 0; r < take; ++r) emit(pool[r], r + 1);
    return out;
}

SelectionResult select(const ScoredDataset& dataset, std::span<const VisNecScore> scores,
                       const Assignment* assignment, const SelectionConfig& cfg) {
    return select(std::span<const LossRecord>(dataset.records()), scores, assignment, cfg);
}

}  // namespace visnec
