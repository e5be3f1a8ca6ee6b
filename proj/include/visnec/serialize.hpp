#pragma once

#include "visnec/clustering.hpp"
#include "visnec/ingest.hpp"
#include "visnec/report.hpp"
#include "visnec/scoring.hpp"
#include "visnec/selection.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Writers and readers for the engine's output files. Writers return the
// exact bytes so callers can hash or compare them; keys are emitted in a
// fixed order and floats in shortest round-trip form.
namespace visnec {

using Json = nlohmann::ordered_json;

Json to_json(const KMeansConfig& cfg);
Json to_json(const SelectionConfig& cfg);
Json to_json(const CategoryConfig& cfg);

/// clusters.json: config echo, centroids, inertia, iterations_run.
std::string format_clusters_json(const ClusterModel& model, const Json& echo);
/// Reads k back from a clusters.json document.
std::size_t parse_clusters_k(std::string_view text);

/// assignment.jsonl in ascending id order.
std::string format_assignment_jsonl(const Assignment& assignment);
/// k is taken from `k` when given, else max cluster + 1.
Assignment parse_assignment_jsonl(std::string_view text, std::optional<std::size_t> k = std::nullopt);

std::string format_selection_jsonl(const SelectionResult& result);
std::vector<SelectedSample> parse_selection_jsonl(std::string_view text);
std::string format_selection_summary(const SelectionResult& result, const Json& echo);

struct ReportInputs {
    const ScoreStats* stats = nullptr;
    const std::vector<ClusterSummaryRow>* clusters = nullptr;  // optional
    const JoinWarnings* warnings = nullptr;                    // optional
    std::string embedding_provenance;
    Json echo = Json::object();
};

std::string format_report_json(const ReportInputs& in);
std::string format_report_txt(const ReportInputs& in);

Json to_json(const RelReport& rel);
std::string format_rel_txt(const RelReport& rel);

/// Writes bytes to path, replacing any existing file.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace visnec
