#include "config.hpp"

#include "visnec/error.hpp"

#include <charconv>
#include <cmath>

namespace visnec::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Drops a trailing `# comment` that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '\\' && quoted) {
            ++i;
        } else if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

KeyValueConfig::Value parse_value(std::string_view raw, std::uint64_t line_no) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
        std::string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size()) {
                const char e = raw[++i];
                out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
            } else {
                out += raw[i];
            }
        }
        return out;
    }
    if (raw == "true") return true;
    if (raw == "false") return false;
    std::int64_t i = 0;
    if (auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), i);
        ec == std::errc{} && p == raw.data() + raw.size())
        return i;
    double d = 0.0;
    if (auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), d);
        ec == std::errc{} && p == raw.data() + raw.size())
        return d;
    fail_at(ErrorCode::InvalidConfig, line_no, "cannot parse value '" + std::string(raw) + "'");
}

std::string as_string(const std::string& key, const KeyValueConfig::Value& v) {
    if (auto s = std::get_if<std::string>(&v)) return *s;
    fail(ErrorCode::InvalidConfig, key + " must be a string");
}

bool as_bool(const std::string& key, const KeyValueConfig::Value& v) {
    if (auto b = std::get_if<bool>(&v)) return *b;
    fail(ErrorCode::InvalidConfig, key + " must be true or false");
}

double as_double(const std::string& key, const KeyValueConfig::Value& v) {
    if (auto d = std::get_if<double>(&v)) return *d;
    if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    fail(ErrorCode::InvalidConfig, key + " must be a number");
}

std::uint64_t as_unsigned(const std::string& key, const KeyValueConfig::Value& v) {
    if (auto i = std::get_if<std::int64_t>(&v); i && *i >= 0) return static_cast<std::uint64_t>(*i);
    fail(ErrorCode::InvalidConfig, key + " must be a non-negative integer");
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    KeyValueConfig cfg;
    std::string section;
    std::uint64_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
        pos = end + 1;
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail_at(ErrorCode::InvalidConfig, line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail_at(ErrorCode::InvalidConfig, line_no, "expected key = value");
        const auto key = std::string(trim(line.substr(0, eq)));
        if (key.empty()) fail_at(ErrorCode::InvalidConfig, line_no, "empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (!cfg.entries_.emplace(full, parse_value(trim(line.substr(eq + 1)), line_no)).second)
            fail_at(ErrorCode::InvalidConfig, line_no, "duplicate key " + full);
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) { return parse(read_file(path)); }

void PipelineConfig::apply(const KeyValueConfig& kv, const std::filesystem::path& base_dir) {
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };
    for (const auto& [key, v] : kv.entries()) {
        if (key == "embedding_provenance") embedding_provenance = as_string(key, v);
        else if (key == "paths.records") paths.records = resolve(as_string(key, v));
        else if (key == "paths.embeddings") paths.embeddings = resolve(as_string(key, v));
        else if (key == "paths.manifest") paths.manifest = resolve(as_string(key, v));
        else if (key == "paths.assignment") paths.assignment = resolve(as_string(key, v));
        else if (key == "paths.clusters") paths.clusters = resolve(as_string(key, v));
        else if (key == "paths.selection") paths.selection = resolve(as_string(key, v));
        else if (key == "paths.out_dir") paths.out_dir = resolve(as_string(key, v));
        else if (key == "kmeans.k") kmeans.k = as_unsigned(key, v);
        else if (key == "kmeans.max_iterations") kmeans.max_iterations = as_unsigned(key, v);
        else if (key == "kmeans.tolerance") kmeans.tolerance = as_double(key, v);
        else if (key == "kmeans.seed") kmeans_seed = as_unsigned(key, v);
        else if (key == "kmeans.normalize") kmeans.normalize = as_bool(key, v);
        else if (key == "selection.ratio") selection.ratio = as_double(key, v);
        else if (key == "selection.seed") selection_seed = as_unsigned(key, v);
        else if (key == "selection.strategy") {
            auto s = parse_strategy(as_string(key, v));
            if (!s) fail(ErrorCode::InvalidConfig, "unknown strategy " + as_string(key, v));
            selection.strategy = *s;
        } else if (key == "selection.budget_base") {
            auto b = parse_budget_base(as_string(key, v));
            if (!b) fail(ErrorCode::InvalidConfig, "unknown budget_base " + as_string(key, v));
            selection.budget_base = *b;
        } else if (key == "category.epsilon") category.epsilon = as_double(key, v);
        else if (key == "report.bins") bins = as_unsigned(key, v);
        else if (key == "run.threads") threads = static_cast<unsigned>(as_unsigned(key, v));
        else if (key == "run.strict") strict = as_bool(key, v);
        else fail(ErrorCode::InvalidConfig, "unknown config key " + key);
    }
}

void PipelineConfig::validate() const {
    kmeans.validate();
    selection.validate();
    category.validate();
    if (bins == 0) fail(ErrorCode::InvalidConfig, "bins must be positive");
}

Json PipelineConfig::echo() const {
    auto opt_path = [](const std::optional<std::filesystem::path>& p) {
        return p ? Json(p->generic_string()) : Json(nullptr);
    };
    Json j;
    Json p;
    p["records"] = opt_path(paths.records);
    p["embeddings"] = opt_path(paths.embeddings);
    p["manifest"] = opt_path(paths.manifest);
    p["assignment"] = opt_path(paths.assignment);
    p["selection"] = opt_path(paths.selection);
    j["paths"] = std::move(p);
    Json km = to_json(kmeans);
    km["seed"] = kmeans_seed ? Json(*kmeans_seed) : Json(nullptr);
    j["kmeans"] = std::move(km);
    Json sel = to_json(selection);
    sel["seed"] = selection_seed ? Json(*selection_seed) : Json(nullptr);
    j["selection"] = std::move(sel);
    j["category"] = to_json(category);
    j["embedding_provenance"] = embedding_provenance;
    j["strict"] = strict;
    j["bins"] = bins;
    return j;
}

}  // namespace visnec::cli
