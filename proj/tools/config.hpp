#pragma once

#include "visnec/clustering.hpp"
#include "visnec/ingest.hpp"
#include "visnec/scoring.hpp"
#include "visnec/selection.hpp"
#include "visnec/serialize.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace visnec::cli {

/// Flat `section.key -> value` view of a TOML-style config file. Supports
/// `[section]` headers, `key = value` with quoted strings, booleans,
/// integers and floats, and `#` comments. Nothing else.
class KeyValueConfig {
public:
    using Value = std::variant<std::string, bool, std::int64_t, double>;

    static KeyValueConfig parse(std::string_view text);
    static KeyValueConfig load(const std::filesystem::path& path);

    const std::map<std::string, Value>& entries() const noexcept { return entries_; }

private:
    std::map<std::string, Value> entries_;
};

struct PipelineConfig {
    struct Paths {
        std::optional<std::filesystem::path> records;
        std::optional<std::filesystem::path> embeddings;
        std::optional<std::filesystem::path> manifest;
        std::optional<std::filesystem::path> assignment;
        std::optional<std::filesystem::path> clusters;
        std::optional<std::filesystem::path> selection;
        std::filesystem::path out_dir = ".";
    } paths;

    KMeansConfig kmeans;
    std::optional<std::uint64_t> kmeans_seed;
    SelectionConfig selection;
    std::optional<std::uint64_t> selection_seed;
    CategoryConfig category;
    std::string embedding_provenance;
    std::optional<EmbeddingFormat> embeddings_format;
    bool strict = false;
    std::size_t bins = 50;
    unsigned threads = 1;

    /// Overlays every recognised key; unknown keys are an InvalidConfig error.
    /// Relative paths are resolved against `base_dir`.
    void apply(const KeyValueConfig& kv, const std::filesystem::path& base_dir);

    void validate() const;

    /// Everything needed to reproduce an output. Deliberately excludes the
    /// thread count and the output directory so neither changes a byte.
    Json echo() const;
};

}  // namespace visnec::cli
