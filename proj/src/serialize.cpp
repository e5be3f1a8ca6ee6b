#include "visnec/serialize.hpp"

#include "visnec/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace visnec {

namespace {

std::string dump_document(const Json& j) { return j.dump(2) + "\n"; }

template <typename Fn>
void for_each_json_line(std::string_view text, Fn&& fn) {
    std::uint64_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) fail_at(ErrorCode::MalformedLine, line_no, "expected a JSON object");
        fn(line_no, j);
    }
}

std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::Io, "write failed: " + path.string());
}

Json to_json(const KMeansConfig& cfg) {
    Json j;
    j["k"] = cfg.k;
    j["max_iterations"] = cfg.max_iterations;
    j["tolerance"] = cfg.tolerance;
    j["seed"] = cfg.seed;
    j["init"] = "kmeans++";
    j["normalize"] = cfg.normalize;
    return j;
}

Json to_json(const SelectionConfig& cfg) {
    Json j;
    j["ratio"] = cfg.ratio;
    j["strategy"] = std::string(to_string(cfg.strategy));
    j["seed"] = cfg.seed;
    j["budget_base"] = std::string(to_string(cfg.budget_base));
    return j;
}

Json to_json(const CategoryConfig& cfg) {
    Json j;
    j["epsilon"] = cfg.epsilon;
    return j;
}

// ---------------------------------------------------------------------------
// clustering

std::string format_clusters_json(const ClusterModel& model, const Json& echo) {
    Json j;
    j["config"] = echo;
    j["k"] = model.k();
    j["dim"] = model.dim();
    Json centroids = Json::array();
    for (Eigen::Index r = 0; r < model.centroids.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < model.centroids.cols(); ++c) row.push_back(model.centroids(r, c));
        centroids.push_back(std::move(row));
    }
    j["centroids"] = std::move(centroids);
    j["inertia"] = model.inertia;
    j["iterations_run"] = model.iterations_run;
    return dump_document(j);
}

std::size_t parse_clusters_k(std::string_view text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("k") || !j["k"].is_number_unsigned())
        fail(ErrorCode::MalformedLine, "clusters.json: missing unsigned 'k'");
    return j["k"].get<std::size_t>();
}

std::string format_assignment_jsonl(const Assignment& a) {
    std::vector<std::size_t> order(a.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a.ids[x] < a.ids[y]; });
    std::string out;
    for (std::size_t i : order) {
        Json j;
        j["id"] = a.ids[i];
        j["cluster"] = a.clusters[i];
        out += j.dump();
        out += '\n';
    }
    return out;
}

Assignment parse_assignment_jsonl(std::string_view text, std::optional<std::size_t> k) {
    Assignment a;
    std::unordered_set<std::string> seen;
    std::size_t max_cluster = 0;
    for_each_json_line(text, [&](std::uint64_t line_no, const Json& j) {
        if (!j.contains("id") || !j["id"].is_string() || !j.contains("cluster") ||
            !j["cluster"].is_number_unsigned())
            fail_at(ErrorCode::MalformedLine, line_no, "expected string 'id' and unsigned 'cluster'");
        std::string id = j["id"].get<std::string>();
        const auto c = j["cluster"].get<std::size_t>();
        if (k && c >= *k)
            fail_at(ErrorCode::MalformedLine, line_no, id + ": cluster " + std::to_string(c) + " >= k");
        if (!seen.insert(id).second) fail_at(ErrorCode::DuplicateId, line_no, id);
        max_cluster = std::max(max_cluster, c);
        a.ids.push_back(std::move(id));
        a.clusters.push_back(c);
    });
    a.k = k ? *k : (a.ids.empty() ? 0 : max_cluster + 1);
    return a;
}

// ---------------------------------------------------------------------------
// selection

std::string format_selection_jsonl(const SelectionResult& result) {
    std::string out;
    for (const auto& s : result.selected) {
        Json j;
        j["id"] = s.id;
        j["cluster"] = s.cluster ? Json(*s.cluster) : Json(nullptr);
        j["score"] = s.score;
        j["rank_in_cluster"] = s.rank;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<SelectedSample> parse_selection_jsonl(std::string_view text) {
    std::vector<SelectedSample> rows;
    std::unordered_set<std::string> seen;
    for_each_json_line(text, [&](std::uint64_t line_no, const Json& j) {
        if (!j.contains("id") || !j["id"].is_string() || !j.contains("score") || !j["score"].is_number())
            fail_at(ErrorCode::MalformedLine, line_no, "expected string 'id' and numeric 'score'");
        SelectedSample s;
        s.id = j["id"].get<std::string>();
        s.score = j["score"].get<double>();
        if (auto it = j.find("cluster"); it != j.end() && it->is_number_unsigned()) s.cluster = it->get<std::size_t>();
        if (auto it = j.find("rank_in_cluster"); it != j.end() && it->is_number_unsigned())
            s.rank = it->get<std::size_t>();
        if (!seen.insert(s.id).second) fail_at(ErrorCode::DuplicateId, line_no, s.id);
        rows.push_back(std::move(s));
    });
    return rows;
}

std::string format_selection_summary(const SelectionResult& result, const Json& echo) {
    Json j;
    j["config"] = echo;
    j["strategy"] = std::string(to_string(result.config.strategy));
    j["pool_size"] = result.pool_size;
    j["global_budget"] = result.global_budget;
    j["selected_count"] = result.selected.size();
    Json rows = Json::array();
    for (const auto& r : result.per_cluster) {
        Json row;
        row["cluster"] = r.cluster;
        row["cluster_size"] = r.cluster_size;
        row["positive_count"] = r.positive_count;
        row["budget"] = r.budget;
        row["selected_count"] = r.selected_count;
        rows.push_back(std::move(row));
    }
    j["per_cluster"] = std::move(rows);
    return dump_document(j);
}

// ---------------------------------------------------------------------------
// report

std::string format_report_json(const ReportInputs& in) {
    if (!in.stats) fail(ErrorCode::InvariantViolation, "report without score statistics");
    const ScoreStats& st = *in.stats;
    Json j;
    j["config"] = in.echo;
    j["embedding_provenance"] = in.embedding_provenance;

    Json s;
    s["count"] = st.count;
    s["min"] = st.min;
    s["max"] = st.max;
    s["mean"] = st.mean;
    s["stddev"] = st.stddev;
    s["stddev_convention"] = "population";
    Json q;
    const char* names[] = {"p5", "p25", "p50", "p75", "p95"};
    for (std::size_t i = 0; i < kReportedQuantiles.size(); ++i) q[names[i]] = st.quantiles[i];
    s["quantiles"] = std::move(q);
    s["quantile_convention"] = "linear interpolation at h=(n-1)p on the sorted sample";
    Json cats;
    cats["misaligned"] = st.categories.misaligned;
    cats["redundant"] = st.categories.redundant;
    cats["vision_critical"] = st.categories.vision_critical;
    s["category_counts"] = std::move(cats);
    Json hist = Json::array();
    for (const auto& b : st.histogram) {
        Json bin;
        bin["lower"] = b.lower;
        bin["upper"] = b.upper;
        bin["count"] = b.count;
        hist.push_back(std::move(bin));
    }
    s["histogram"] = std::move(hist);
    j["scores"] = std::move(s);

    if (in.clusters) {
        Json rows = Json::array();
        for (const auto& r : *in.clusters) {
            Json row;
            row["cluster"] = r.cluster;
            row["size"] = r.size;
            row["positive_count"] = r.positive_count;
            row["mean_score"] = r.mean_score ? Json(*r.mean_score) : Json(nullptr);
            row["selected_count"] = r.selected_count ? Json(*r.selected_count) : Json(nullptr);
            rows.push_back(std::move(row));
        }
        j["clusters"] = std::move(rows);
    }
    if (in.warnings) {
        Json w;
        w["missing_embedding"] = in.warnings->missing_embedding.size();
        w["orphan_embedding"] = in.warnings->orphan_embedding.size();
        w["unknown_sample"] = in.warnings->unknown_sample.size();
        w["unscored_sample"] = in.warnings->unscored_sample.size();
        w["total"] = in.warnings->total();
        j["join_warnings"] = std::move(w);
    }
    return dump_document(j);
}

std::string format_report_txt(const ReportInputs& in) {
    if (!in.stats) fail(ErrorCode::InvariantViolation, "report without score statistics");
    const ScoreStats& st = *in.stats;
    std::ostringstream os;
    os << "Visual necessity score report\n";
    os << "=============================\n";
    if (!in.embedding_provenance.empty()) os << "embeddings: " << in.embedding_provenance << "\n";
    os << "samples:    " << st.count << "\n";
    os << "score:      min " << fixed(st.min) << "  mean " << fixed(st.mean) << "  max " << fixed(st.max)
       << "  stddev " << fixed(st.stddev) << "\n";
    os << "quantiles:  p5 " << fixed(st.quantiles[0]) << "  p25 " << fixed(st.quantiles[1]) << "  p50 "
       << fixed(st.quantiles[2]) << "  p75 " << fixed(st.quantiles[3]) << "  p95 " << fixed(st.quantiles[4])
       << "\n";
    os << "categories: misaligned " << st.categories.misaligned << "  redundant " << st.categories.redundant
       << "  vision_critical " << st.categories.vision_critical << "\n";
    if (in.warnings && in.warnings->total() > 0) os << "join warnings: " << in.warnings->total() << "\n";
    if (in.clusters) {
        os << "\ncluster      size  positive  mean_score  selected\n";
        for (const auto& r : *in.clusters) {
            char line[160];
            std::snprintf(line, sizeof line, "%7zu  %8zu  %8zu  %10s  %8s\n", r.cluster, r.size, r.positive_count,
                          r.mean_score ? fixed(*r.mean_score).c_str() : "-",
                          r.selected_count ? std::to_string(*r.selected_count).c_str() : "-");
            os << line;
        }
    }
    return os.str();
}

Json to_json(const RelReport& rel) {
    Json j;
    Json rows = Json::array();
    for (const auto& b : rel.per_benchmark) {
        Json row;
        row["name"] = b.name;
        row["rel_percent"] = b.rel_percent;
        rows.push_back(std::move(row));
    }
    j["per_benchmark"] = std::move(rows);
    j["average_rel_percent"] = rel.average_rel_percent;
    return j;
}

std::string format_rel_txt(const RelReport& rel) {
    std::ostringstream os;
    for (const auto& b : rel.per_benchmark) os << b.name << "\t" << fixed(b.rel_percent, 2) << "%\n";
    os << "Rel\t" << fixed(rel.average_rel_percent, 2) << "%\n";
    return os.str();
}

}  // namespace visnec
