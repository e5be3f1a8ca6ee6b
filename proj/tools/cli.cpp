#include "cli.hpp"

#include "visnec/error.hpp"
#include "visnec/report.hpp"
#include "visnec/synth.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace visnec::cli {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorCode::InvariantViolation, "sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

namespace {

/// Output files of one command, written together once everything is computed.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    void add(std::string name, std::string bytes) { files_.emplace_back(std::move(name), std::move(bytes)); }
    const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

    /// Writes every file; on failure removes whatever this call created.
    std::vector<fs::path> commit() {
        std::vector<fs::path> written;
        try {
            fs::create_directories(dir_);
            for (const auto& [name, bytes] : files_) {
                const fs::path p = dir_ / name;
                write_file(p, bytes);
                written.push_back(p);
            }
        } catch (const fs::filesystem_error& e) {
            remove_all(written);
            fail(ErrorCode::Io, e.what());
        } catch (...) {
            remove_all(written);
            throw;
        }
        return written;
    }

private:
    static void remove_all(const std::vector<fs::path>& paths) {
        std::error_code ec;
        for (const auto& p : paths) fs::remove(p, ec);
    }

    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

const fs::path& require(const std::optional<fs::path>& p, const char* flag) {
    if (!p) fail(ErrorCode::InvalidConfig, std::string("missing required input ") + flag);
    return *p;
}

std::vector<LossRecord> load_sorted_records(const PipelineConfig& cfg) {
    auto records = load_loss_records(require(cfg.paths.records, "--records"));
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return records;
}

EmbeddingTable load_table(const PipelineConfig& cfg) {
    const fs::path& path = require(cfg.paths.embeddings, "--embeddings");
    return load_embeddings(path, cfg.embeddings_format.value_or(guess_embedding_format(path)));
}

EmbeddingTable sorted_by_id(const EmbeddingTable& table) {
    std::vector<std::size_t> order(table.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return table.ids[a] < table.ids[b]; });
    EmbeddingTable out = EmbeddingTable::with_shape(table.size(), table.dim());
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.ids[i] = table.ids[order[i]];
        out.data.row(static_cast<Eigen::Index>(i)) = table.data.row(static_cast<Eigen::Index>(order[i]));
    }
    return out;
}

KMeansConfig seeded_kmeans(const PipelineConfig& cfg) {
    if (!cfg.kmeans_seed) fail(ErrorCode::InvalidConfig, "clustering requires --seed (no default seed)");
    KMeansConfig k = cfg.kmeans;
    k.seed = *cfg.kmeans_seed;
    return k;
}

SelectionConfig seeded_selection(const PipelineConfig& cfg) {
    SelectionConfig s = cfg.selection;
    if (s.strategy == SelectionStrategy::Random) {
        if (!cfg.selection_seed) fail(ErrorCode::InvalidConfig, "random selection requires --seed (no default seed)");
    }
    s.seed = cfg.selection_seed.value_or(0);
    return s;
}

std::optional<Assignment> load_assignment(const PipelineConfig& cfg) {
    if (!cfg.paths.assignment) return std::nullopt;
    std::optional<std::size_t> k;
    if (cfg.paths.clusters) k = parse_clusters_k(read_file(*cfg.paths.clusters));
    return parse_assignment_jsonl(read_file(*cfg.paths.assignment), k);
}

Json command_echo(const PipelineConfig& cfg, std::string_view command) {
    Json j;
    j["command"] = std::string(command);
    j["tool"] = std::string(kToolName) + " " + std::string(kToolVersion);
    const Json cfg_echo = cfg.echo();
    for (const auto& [key, value] : cfg_echo.items()) j[key] = value;
    return j;
}

/// Re-checks the selection contract before anything is written; a breach
/// here is a bug, not bad input.
void verify_selection(const SelectionResult& result, std::span<const VisNecScore> scores) {
    std::unordered_map<std::string_view, double> score_of;
    for (const auto& s : scores) score_of.emplace(s.id, s.score);
    std::unordered_map<std::string_view, int> seen;
    const bool positive_only = result.config.strategy == SelectionStrategy::VisNecClustered ||
                               result.config.strategy == SelectionStrategy::TopVisNec;
    for (const auto& s : result.selected) {
        if (++seen[s.id] > 1) fail(ErrorCode::InvariantViolation, "selected twice: " + s.id);
        auto it = score_of.find(s.id);
        if (it == score_of.end()) fail(ErrorCode::InvariantViolation, "selected unknown id " + s.id);
        if (positive_only && !(it->second > 0.0))
            fail(ErrorCode::InvariantViolation, "non-positive score selected: " + s.id);
    }
    for (const auto& row : result.per_cluster) {
        const std::size_t base = result.config.budget_base == BudgetBase::PreFilterClusterSize
                                     ? row.cluster_size
                                     : row.positive_count;
        if (row.selected_count != std::min(per_cluster_budget(base, result.config.ratio), row.positive_count))
            fail(ErrorCode::InvariantViolation, "budget law broken in cluster " + std::to_string(row.cluster));
    }
}

std::string scores_meta(const PipelineConfig& cfg, const ScoreTable& table) {
    Json j;
    j["config"] = command_echo(cfg, "score");
    j["count"] = table.scores.size();
    std::size_t counts[3] = {0, 0, 0};
    for (auto c : table.categories) ++counts[static_cast<int>(c)];
    j["category_counts"] = {{"misaligned", counts[0]}, {"redundant", counts[1]}, {"vision_critical", counts[2]}};
    return j.dump(2) + "\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// subcommands

std::vector<fs::path> cmd_score(const PipelineConfig& cfg) {
    cfg.category.validate();
    const auto records = load_sorted_records(cfg);
    const ScoreTable table = score_all(records, cfg.category);
    OutputSet out(cfg.paths.out_dir);
    out.add("scores.jsonl", format_scores_jsonl(table));
    out.add("scores.meta.json", scores_meta(cfg, table));
    return out.commit();
}

std::vector<fs::path> cmd_cluster(const PipelineConfig& cfg) {
    const KMeansConfig kcfg = seeded_kmeans(cfg);
    kcfg.validate();
    EmbeddingTable table = load_table(cfg);
    if (cfg.paths.records) {
        auto ds = join_dataset(load_loss_records(*cfg.paths.records), table, std::nullopt, {cfg.strict});
        table = ds.embeddings();
    } else {
        table = sorted_by_id(table);
    }
    const KMeansResult fit = kmeans_fit(table, kcfg, cfg.threads);
    OutputSet out(cfg.paths.out_dir);
    out.add("clusters.json", format_clusters_json(fit.model, command_echo(cfg, "cluster")));
    out.add("assignment.jsonl", format_assignment_jsonl(fit.assignment));
    return out.commit();
}

std::vector<fs::path> cmd_select(const PipelineConfig& cfg) {
    const SelectionConfig scfg = seeded_selection(cfg);
    scfg.validate();
    const auto records = load_sorted_records(cfg);
    const auto assignment = load_assignment(cfg);
    if (scfg.strategy == SelectionStrategy::VisNecClustered && !assignment)
        fail(ErrorCode::MissingAssignment, "strategy visnec needs --assignment");
    const ScoreTable scores = score_all(records, cfg.category);
    const SelectionResult result = select(records, scores.scores, assignment ? &*assignment : nullptr, scfg);
    verify_selection(result, scores.scores);
    OutputSet out(cfg.paths.out_dir);
    out.add("selection.jsonl", format_selection_jsonl(result));
    out.add("selection_summary.json", format_selection_summary(result, command_echo(cfg, "select")));
    return out.commit();
}

std::vector<fs::path> cmd_report(const PipelineConfig& cfg) {
    cfg.validate();
    const auto records = load_sorted_records(cfg);
    const ScoreTable scores = score_all(records, cfg.category);
    const ScoreStats stats = score_stats(scores.scores, scores.categories, cfg.bins);

    std::optional<std::vector<ClusterSummaryRow>> clusters;
    if (const auto assignment = load_assignment(cfg)) {
        std::optional<SelectionResult> selection;
        if (cfg.paths.selection) {
            selection.emplace();
            selection->selected = parse_selection_jsonl(read_file(*cfg.paths.selection));
        }
        clusters = cluster_summary(partition(*assignment), scores.scores, selection ? &*selection : nullptr);
    }
    ReportInputs in;
    in.stats = &stats;
    in.clusters = clusters ? &*clusters : nullptr;
    in.embedding_provenance = cfg.embedding_provenance;
    in.echo = command_echo(cfg, "report");
    OutputSet out(cfg.paths.out_dir);
    out.add("report.json", format_report_json(in));
    out.add("report.txt", format_report_txt(in));
    return out.commit();
}

std::vector<fs::path> cmd_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    const KMeansConfig kcfg = seeded_kmeans(cfg);
    const SelectionConfig scfg = seeded_selection(cfg);

    const fs::path& records_path = require(cfg.paths.records, "--records");
    const fs::path& embeddings_path = require(cfg.paths.embeddings, "--embeddings");
    const std::string records_bytes = read_file(records_path);
    const std::string embeddings_bytes = read_file(embeddings_path);
    std::optional<std::string> manifest_bytes;
    if (cfg.paths.manifest) manifest_bytes = read_file(*cfg.paths.manifest);

    auto records = parse_loss_records(records_bytes);
    const EmbeddingTable table =
        cfg.embeddings_format.value_or(guess_embedding_format(embeddings_path)) == EmbeddingFormat::Packed
            ? parse_embeddings_packed(std::as_bytes(std::span(embeddings_bytes.data(), embeddings_bytes.size())))
            : parse_embeddings_jsonl(embeddings_bytes);
    std::optional<std::vector<RawSample>> samples;
    if (manifest_bytes) samples = parse_manifest(*manifest_bytes);
    const ScoredDataset ds = join_dataset(std::move(records), table, std::move(samples), {cfg.strict});
    if (ds.empty()) fail(ErrorCode::EmptyInput, "no records survived the join");

    const ScoreTable scores = score_all(ds, cfg.category);
    const KMeansResult fit = kmeans_fit(ds.embeddings(), kcfg, cfg.threads);
    const SelectionResult selection = select(ds, scores.scores, &fit.assignment, scfg);
    verify_selection(selection, scores.scores);

    const ScoreStats stats = score_stats(scores.scores, scores.categories, cfg.bins);
    const auto clusters = cluster_summary(partition(fit.assignment), scores.scores, &selection);

    const Json echo = command_echo(cfg, "pipeline");
    ReportInputs report;
    report.stats = &stats;
    report.clusters = &clusters;
    report.warnings = &ds.warnings();
    report.embedding_provenance = cfg.embedding_provenance;
    report.echo = echo;

    OutputSet out(cfg.paths.out_dir);
    out.add("scores.jsonl", format_scores_jsonl(scores));
    out.add("clusters.json", format_clusters_json(fit.model, echo));
    out.add("assignment.jsonl", format_assignment_jsonl(fit.assignment));
    out.add("selection.jsonl", format_selection_jsonl(selection));
    out.add("selection_summary.json", format_selection_summary(selection, echo));
    out.add("report.json", format_report_json(report));
    out.add("report.txt", format_report_txt(report));

    Json meta;
    meta["tool"] = std::string(kToolName);
    meta["version"] = std::string(kToolVersion);
    meta["config"] = echo;
    Json inputs;
    inputs["records"] = {{"path", records_path.generic_string()}, {"sha256", sha256_hex(records_bytes)}};
    inputs["embeddings"] = {{"path", embeddings_path.generic_string()}, {"sha256", sha256_hex(embeddings_bytes)}};
    if (manifest_bytes)
        inputs["manifest"] = {{"path", cfg.paths.manifest->generic_string()}, {"sha256", sha256_hex(*manifest_bytes)}};
    meta["inputs"] = std::move(inputs);
    Json outputs;
    for (const auto& [name, bytes] : out.files()) outputs[name] = sha256_hex(bytes);
    meta["outputs"] = std::move(outputs);
    meta["counts"] = {{"records", ds.size()},
                      {"selected", selection.selected.size()},
                      {"join_warnings", ds.warnings().total()},
                      {"kmeans_iterations", fit.model.iterations_run}};
    out.add("run_meta.json", meta.dump(2) + "\n");
    return out.commit();
}

// ---------------------------------------------------------------------------
// argument handling

namespace {

struct Flags {
    std::string config, records, embeddings, manifest, assignment, clusters, selection, out = ".";
    std::string strategy, budget_base, provenance, format;
    std::size_t k = 0, bins = 0, max_iterations = 0;
    double ratio = 0.0, epsilon = 0.0, tolerance = 0.0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool strict = false, normalize = false;
    // synth
    std::size_t n = 5000, synth_clusters = 20, dim = 16;
    std::string fractions = "0.2,0.3,0.5";
    bool packed = false;
    // rel
    std::string csv;
};

class Options {
public:
    explicit Options(CLI::App* app, Flags& f) : app_(app), f_(f) {}

    Options& config() {
        opt_["config"] = app_->add_option("--config", f_.config, "TOML-style config file");
        return *this;
    }
    Options& out() {
        opt_["out"] = app_->add_option("--out", f_.out, "output directory");
        return *this;
    }
    Options& records() {
        opt_["records"] = app_->add_option("--records", f_.records, "loss records (JSONL)");
        return *this;
    }
    Options& embeddings() {
        opt_["embeddings"] = app_->add_option("--embeddings", f_.embeddings, "embeddings (.jsonl or .vnec)");
        opt_["format"] = app_->add_option("--embeddings-format", f_.format, "jsonl|packed (default: by extension)")
                             ->check(CLI::IsMember({"jsonl", "packed"}));
        return *this;
    }
    Options& manifest() {
        opt_["manifest"] = app_->add_option("--manifest", f_.manifest, "optional sample manifest (JSONL)");
        return *this;
    }
    Options& assignment() {
        opt_["assignment"] = app_->add_option("--assignment", f_.assignment, "assignment.jsonl from `cluster`");
        opt_["clusters"] = app_->add_option("--clusters", f_.clusters, "clusters.json (supplies k)");
        return *this;
    }
    Options& selection_file() {
        opt_["selection"] = app_->add_option("--selection", f_.selection, "selection.jsonl from `select`");
        return *this;
    }
    Options& kmeans() {
        opt_["k"] = app_->add_option("--k", f_.k, "number of clusters (default 20)");
        opt_["max_iterations"] = app_->add_option("--max-iterations", f_.max_iterations, "Lloyd iteration cap");
        opt_["tolerance"] = app_->add_option("--tolerance", f_.tolerance, "relative inertia tolerance");
        opt_["normalize"] = app_->add_flag("--normalize", f_.normalize, "L2-normalize embeddings first");
        return *this;
    }
    Options& selection() {
        opt_["ratio"] = app_->add_option("--ratio", f_.ratio, "selection ratio in (0,1] (default 0.15)");
        opt_["strategy"] = app_->add_option("--strategy", f_.strategy,
                                            "visnec|top_visnec|text_loss|multimodal_loss|random");
        opt_["budget_base"] = app_->add_option("--budget-base", f_.budget_base, "pre_filter|post_filter");
        return *this;
    }
    Options& seed() {
        opt_["seed"] = app_->add_option("--seed", f_.seed, "seed for k-means++ and random selection");
        return *this;
    }
    Options& epsilon() {
        opt_["epsilon"] = app_->add_option("--epsilon", f_.epsilon, "redundancy half-band (default 0.25)");
        return *this;
    }
    Options& threads() {
        opt_["threads"] = app_->add_option("--threads", f_.threads, "worker threads (never changes output)");
        return *this;
    }
    Options& strict() {
        opt_["strict"] = app_->add_flag("--strict", f_.strict, "treat join mismatches as errors");
        return *this;
    }
    Options& report() {
        opt_["bins"] = app_->add_option("--bins", f_.bins, "histogram bins (default 50)");
        opt_["provenance"] = app_->add_option("--provenance", f_.provenance, "embedding provenance string");
        return *this;
    }

    bool given(const std::string& name) const {
        auto it = opt_.find(name);
        return it != opt_.end() && it->second->count() > 0;
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg;
        cfg.threads = std::max(1u, std::thread::hardware_concurrency());
        if (given("config")) {
            const fs::path path(f_.config);
            cfg.apply(KeyValueConfig::load(path), path.parent_path());
        }
        if (given("records")) cfg.paths.records = f_.records;
        if (given("embeddings")) cfg.paths.embeddings = f_.embeddings;
        if (given("manifest")) cfg.paths.manifest = f_.manifest;
        if (given("assignment")) cfg.paths.assignment = f_.assignment;
        if (given("clusters")) cfg.paths.clusters = f_.clusters;
        if (given("selection")) cfg.paths.selection = f_.selection;
        if (given("out")) cfg.paths.out_dir = f_.out;
        if (given("format"))
            cfg.embeddings_format = f_.format == "packed" ? EmbeddingFormat::Packed : EmbeddingFormat::Jsonl;
        if (given("k")) cfg.kmeans.k = f_.k;
        if (given("max_iterations")) cfg.kmeans.max_iterations = f_.max_iterations;
        if (given("tolerance")) cfg.kmeans.tolerance = f_.tolerance;
        if (given("normalize")) cfg.kmeans.normalize = f_.normalize;
        if (given("ratio")) cfg.selection.ratio = f_.ratio;
        if (given("strategy")) {
            auto s = parse_strategy(f_.strategy);
            if (!s) fail(ErrorCode::InvalidConfig, "unknown strategy " + f_.strategy);
            cfg.selection.strategy = *s;
        }
        if (given("budget_base")) {
            auto b = parse_budget_base(f_.budget_base);
            if (!b) fail(ErrorCode::InvalidConfig, "unknown budget base " + f_.budget_base);
            cfg.selection.budget_base = *b;
        }
        if (given("seed")) {
            cfg.kmeans_seed = f_.seed;
            cfg.selection_seed = f_.seed;
        }
        if (given("epsilon")) cfg.category.epsilon = f_.epsilon;
        if (given("threads")) cfg.threads = std::max(1u, f_.threads);
        if (given("strict")) cfg.strict = f_.strict;
        if (given("bins")) cfg.bins = f_.bins;
        if (given("provenance")) cfg.embedding_provenance = f_.provenance;
        return cfg;
    }

private:
    CLI::App* app_;
    Flags& f_;
    std::map<std::string, CLI::Option*> opt_;
};

std::array<double, 3> parse_fractions(const std::string& text) {
    std::array<double, 3> f{};
    std::istringstream in(text);
    std::string part;
    std::size_t i = 0;
    while (std::getline(in, part, ',')) {
        if (i == 3) fail(ErrorCode::InvalidConfig, "--fractions takes three values");
        try {
            std::size_t used = 0;
            f[i] = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            fail(ErrorCode::InvalidConfig, "bad fraction '" + part + "'");
        }
        ++i;
    }
    if (i != 3) fail(ErrorCode::InvalidConfig, "--fractions takes three values");
    return f;
}

void print_written(std::ostream& out, const std::vector<fs::path>& files) {
    for (const auto& f : files) out << "wrote " << f.generic_string() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Visual-necessity data selection engine", std::string(kToolName)};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    Flags f;

    auto* score = app.add_subcommand("score", "compute per-sample scores -> scores.jsonl");
    Options score_opts(score, f);
    score_opts.config().records().out().epsilon();

    auto* cluster = app.add_subcommand("cluster", "k-means over question embeddings -> clusters.json, assignment.jsonl");
    Options cluster_opts(cluster, f);
    cluster_opts.config().embeddings().records().out().kmeans().seed().threads().strict();

    auto* sel = app.add_subcommand("select", "choose the subset -> selection.jsonl, selection_summary.json");
    Options select_opts(sel, f);
    select_opts.config().records().assignment().out().selection().seed().epsilon();

    auto* rep = app.add_subcommand("report", "score analytics -> report.json, report.txt");
    Options report_opts(rep, f);
    report_opts.config().records().assignment().selection_file().out().epsilon().report();

    auto* rel = app.add_subcommand("rel", "average relative performance from a benchmark CSV");
    rel->add_option("csv", f.csv, "CSV with rows name,value,full_value")->required();
    auto* rel_out = rel->add_option("--out", f.out, "also write rel.json into this directory");

    auto* pipe = app.add_subcommand("pipeline", "score -> cluster -> select -> report");
    Options pipe_opts(pipe, f);
    pipe_opts.config().records().embeddings().manifest().out().kmeans().selection().seed().epsilon().threads()
        .strict().report();

    auto* synth = app.add_subcommand("synth", "synthetic records and embeddings with planted categories");
    auto* synth_seed = synth->add_option("--seed", f.seed, "generator seed");
    synth->add_option("--n", f.n, "number of samples");
    synth->add_option("--fractions", f.fractions, "misaligned,redundant,vision_critical");
    synth->add_option("--clusters", f.synth_clusters, "planted embedding clusters");
    synth->add_option("--dim", f.dim, "embedding dimension");
    synth->add_option("--out", f.out, "output directory");
    synth->add_flag("--packed", f.packed, "write embeddings.vnec instead of embeddings.jsonl");

    std::vector<const char*> argv;
    argv.push_back(kToolName.data());
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*score) print_written(out, cmd_score(score_opts.resolve()));
        else if (*cluster) print_written(out, cmd_cluster(cluster_opts.resolve()));
        else if (*sel) print_written(out, cmd_select(select_opts.resolve()));
        else if (*rep) print_written(out, cmd_report(report_opts.resolve()));
        else if (*pipe) print_written(out, cmd_pipeline(pipe_opts.resolve()));
        else if (*rel) {
            const auto rows = parse_benchmark_csv(read_file(f.csv));
            const RelReport report = relative_performance(rows);
            out << format_rel_txt(report);
            if (rel_out->count() > 0) {
                OutputSet files(f.out);
                files.add("rel.json", to_json(report).dump(2) + "\n");
                print_written(out, files.commit());
            }
        } else if (*synth) {
            if (synth_seed->count() == 0) fail(ErrorCode::InvalidConfig, "synth requires --seed (no default seed)");
            SynthConfig sc;
            sc.n = f.n;
            sc.fractions = parse_fractions(f.fractions);
            sc.seed = f.seed;
            sc.clusters = f.synth_clusters;
            sc.dim = f.dim;
            const SynthData data = synthesize(sc);
            fs::create_directories(f.out);
            const fs::path dir(f.out);
            write_loss_records(dir / "records.jsonl", data.records);
            if (f.packed) write_embeddings_packed(dir / "embeddings.vnec", data.embeddings);
            else write_embeddings_jsonl(dir / "embeddings.jsonl", data.embeddings);
            write_file(dir / "labels.jsonl", format_synth_labels(data.truth));
            out << "wrote " << data.records.size() << " samples to " << dir.generic_string() << "\n";
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.is_validation() ? kInputError : kInternalError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kOk;
}

}  // namespace visnec::cli
