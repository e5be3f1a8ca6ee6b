#pragma once

#include "visnec/clustering.hpp"
#include "visnec/ingest.hpp"
#include "visnec/scoring.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace visnec {

enum class SelectionStrategy { Random, TextLoss, MultimodalLoss, TopVisNec, VisNecClustered };

/// Which set size the ratio is applied to inside a cluster.
enum class BudgetBase { PreFilterClusterSize, PostFilterPositiveCount };

std::string_view to_string(SelectionStrategy s) noexcept;
std::string_view to_string(BudgetBase b) noexcept;
std::optional<SelectionStrategy> parse_strategy(std::string_view s) noexcept;
std::optional<BudgetBase> parse_budget_base(std::string_view s) noexcept;

struct SelectionConfig {
    double ratio = 0.15;
    SelectionStrategy strategy = SelectionStrategy::VisNecClustered;
    std::uint64_t seed = 0;  // Random only
    BudgetBase budget_base = BudgetBase::PreFilterClusterSize;

    void validate() const;
    friend bool operator==(const SelectionConfig&, const SelectionConfig&) = default;
};

/// floor(ratio * size) without letting binary rounding of a decimal ratio
/// drop a unit: ratios with at most nine decimals are applied in exact
/// integer arithmetic.
std::size_t per_cluster_budget(std::size_t cluster_size, double ratio);

struct ClusterSelection {
    std::size_t cluster = 0;
    std::size_t cluster_size = 0;
    std::size_t positive_count = 0;
    std::size_t budget = 0;
    std::size_t selected_count = 0;

    friend bool operator==(const ClusterSelection&, const ClusterSelection&) = default;
};

struct SelectedSample {
    std::string id;
    std::optional<std::size_t> cluster;  // known when an assignment was supplied
    double score = 0.0;
    std::size_t rank = 0;  // 1-based; within cluster for VisNecClustered, global otherwise

    friend bool operator==(const SelectedSample&, const SelectedSample&) = default;
};

struct SelectionResult {
    std::vector<SelectedSample> selected;  // emission order
    std::vector<ClusterSelection> per_cluster;  // VisNecClustered only
    std::size_t pool_size = 0;
    std::size_t global_budget = 0;  // floor(ratio * N); informational for VisNecClustered
    SelectionConfig config;

    std::vector<std::string> selected_ids() const;

    friend bool operator==(const SelectionResult&, const SelectionResult&) = default;
};

/// `records` and `scores` are aligned; `assignment` may be in any order but
/// must cover every record id when the strategy is VisNecClustered.
SelectionResult select(std::span<const LossRecord> records, std::span<const VisNecScore> scores,
                       const Assignment* assignment, const SelectionConfig& cfg);

SelectionResult select(const ScoredDataset& dataset, std::span<const VisNecScore> scores,
                       const Assignment* assignment, const SelectionConfig& cfg);

}  // namespace visnec
