#pragma once

#include "visnec/scoring.hpp"
#include "visnec/selection.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace visnec {

struct BenchmarkScore {
    std::string name;
    double value = 0.0;
    double full_value = 0.0;  // full-data baseline, > 0
};

struct BenchmarkRel {
    std::string name;
    double rel_percent = 0.0;
};

struct RelReport {
    std::vector<BenchmarkRel> per_benchmark;
    double average_rel_percent = 0.0;
};

/// rel_i = 100 * value_i / full_value_i, averaged without weights.
RelReport relative_performance(std::span<const BenchmarkScore> scores);

/// Rows `name,value,full_value`. A first line whose value column is not a
/// number is taken as a header.
std::vector<BenchmarkScore> parse_benchmark_csv(std::string_view text);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
};

struct CategoryCounts {
    std::size_t misaligned = 0;
    std::size_t redundant = 0;
    std::size_t vision_critical = 0;

    std::size_t total() const noexcept { return misaligned + redundant + vision_critical; }
};

inline constexpr std::array<double, 5> kReportedQuantiles = {0.05, 0.25, 0.50, 0.75, 0.95};

struct ScoreStats {
    std::size_t count = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;  // population
    std::array<double, 5> quantiles{};  // at kReportedQuantiles
    CategoryCounts categories;
    std::vector<HistogramBin> histogram;
};

/// Quantile of an ascending-sorted sample, linear interpolation between
/// order statistics at h = (n - 1) * p.
double sorted_quantile(std::span<const double> sorted, double p);

ScoreStats score_stats(std::span<const VisNecScore> scores, std::span<const SampleCategory> categories,
                       std::size_t bins = 50);

struct ClusterSummaryRow {
    std::size_t cluster = 0;
    std::size_t size = 0;
    std::size_t positive_count = 0;
    std::optional<double> mean_score;  // nullopt for empty clusters
    std::optional<std::size_t> selected_count;  // only with a selection attached
};

/// One row per cluster, empty clusters included. `partition` lists ids per
/// cluster and must cover every id in `scores`.
std::vector<ClusterSummaryRow> cluster_summary(const std::vector<std::vector<std::string>>& partition,
                                               std::span<const VisNecScore> scores,
                                               const SelectionResult* selection = nullptr);

}  // namespace visnec
