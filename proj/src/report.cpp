#include "visnec/report.hpp"

#include "visnec/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace visnec {

RelReport relative_performance(std::span<const BenchmarkScore> scores) {
    if (scores.empty()) fail(ErrorCode::EmptyInput, "no benchmark rows");
    RelReport report;
    double sum = 0.0;
    for (const auto& s : scores) {
        if (!(s.full_value > 0.0) || !std::isfinite(s.full_value))
            fail(ErrorCode::NonPositiveBaseline, s.name);
        if (!std::isfinite(s.value)) fail(ErrorCode::MalformedLine, s.name + ": non-finite value");
        const double rel = 100.0 * s.value / s.full_value;
        report.per_benchmark.push_back({s.name, rel});
        sum += rel;
    }
    report.average_rel_percent = sum / static_cast<double>(scores.size());
    return report;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

}  // namespace

std::vector<BenchmarkScore> parse_benchmark_csv(std::string_view text) {
    std::vector<BenchmarkScore> rows;
    std::uint64_t line_no = 0;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string_view> cols;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                cols.push_back(trim(line.substr(start, i - start)));
                start = i + 1;
            }
        }
        if (cols.size() != 3) fail_at(ErrorCode::MalformedLine, line_no, "expected name,value,full_value");
        const auto value = to_double(cols[1]);
        const auto full = to_double(cols[2]);
        if (first && !value) {
            first = false;
            continue;  // header
        }
        first = false;
        if (!value || !full) fail_at(ErrorCode::MalformedLine, line_no, "non-numeric value");
        rows.push_back({std::string(cols[0]), *value, *full});
    }
    return rows;
}

double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) fail(ErrorCode::EmptyInput, "quantile of empty sample");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ScoreStats score_stats(std::span<const VisNecScore> scores, std::span<const SampleCategory> categories,
                       std::size_t bins) {
    if (scores.empty()) fail(ErrorCode::EmptyInput, "no scores");
    if (categories.size() != scores.size())
        fail(ErrorCode::InvariantViolation, "categories not aligned with scores");
    if (bins == 0) fail(ErrorCode::InvalidConfig, "histogram needs at least one bin");

    ScoreStats st;
    st.count = scores.size();
    std::vector<double> sorted;
    sorted.reserve(scores.size());
    for (const auto& s : scores) sorted.push_back(s.score);
    std::sort(sorted.begin(), sorted.end());
    st.min = sorted.front();
    st.max = sorted.back();

    double sum = 0.0;
    for (const auto& s : scores) sum += s.score;
    st.mean = sum / static_cast<double>(st.count);
    double sq = 0.0;
    for (const auto& s : scores) sq += (s.score - st.mean) * (s.score - st.mean);
    st.stddev = std::sqrt(sq / static_cast<double>(st.count));

    for (std::size_t q = 0; q < kReportedQuantiles.size(); ++q)
        st.quantiles[q] = sorted_quantile(sorted, kReportedQuantiles[q]);

    for (auto c : categories) {
        switch (c) {
            case SampleCategory::Misaligned: ++st.categories.misaligned; break;
            case SampleCategory::Redundant: ++st.categories.redundant; break;
            case SampleCategory::VisionCritical: ++st.categories.vision_critical; break;
        }
    }

    const double width = (st.max - st.min) / static_cast<double>(bins);
    st.histogram.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        st.histogram[b].lower = st.min + width * static_cast<double>(b);
        st.histogram[b].upper = b + 1 == bins ? st.max : st.min + width * static_cast<double>(b + 1);
    }
    for (double v : sorted) {
        std::size_t b = 0;
        if (width > 0.0) b = std::min(bins - 1, static_cast<std::size_t>((v - st.min) / width));
        ++st.histogram[b].count;
    }
    return st;
}

std::vector<ClusterSummaryRow> cluster_summary(const std::vector<std::vector<std::string>>& partition,
                                               std::span<const VisNecScore> scores,
                                               const SelectionResult* selection) {
    std::unordered_map<std::string_view, double> score_of;
    score_of.reserve(scores.size());
    for (const auto& s : scores) score_of.emplace(s.id, s.score);

    std::unordered_map<std::string_view, std::size_t> cluster_of;
    for (std::size_t c = 0; c < partition.size(); ++c)
        for (const auto& id : partition[c]) cluster_of.emplace(id, c);
    for (const auto& s : scores)
        if (!cluster_of.count(s.id)) fail(ErrorCode::UnknownId, s.id + " has no cluster");

    std::vector<ClusterSummaryRow> rows(partition.size());
    for (std::size_t c = 0; c < partition.size(); ++c) {
        auto& row = rows[c];
        row.cluster = c;
        double sum = 0.0;
        for (const auto& id : partition[c]) {
            auto it = score_of.find(id);
            if (it == score_of.end()) fail(ErrorCode::UnknownId, id + " has no score");
            ++row.size;
            if (it->second > 0.0) ++row.positive_count;
            sum += it->second;
        }
        if (row.size > 0) row.mean_score = sum / static_cast<double>(row.size);
        if (selection) row.selected_count = 0;
    }
    if (selection) {
        for (const auto& s : selection->selected) {
            auto it = cluster_of.find(s.id);
            if (it == cluster_of.end()) fail(ErrorCode::UnknownId, s.id + " selected but not partitioned");
            ++*rows[it->second].selected_count;
        }
    }
    return rows;
}

}  // namespace visnec
