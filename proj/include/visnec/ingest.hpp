#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace visnec {

enum class Speaker { User, Assistant, System };

struct Turn {
    Speaker speaker = Speaker::User;
    std::string text;
};

struct RawSample {
    std::string id;
    std::vector<Turn> conversation;
    std::optional<std::string> image_ref;
};

/// Per-response-token averaged losses in nats, as produced by the scorer.
struct LossRecord {
    std::string id;
    double blind_loss = 0.0;
    double multimodal_loss = 0.0;

    friend bool operator==(const LossRecord&, const LossRecord&) = default;
};

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Question embeddings, one row per id. Stored as f32 like on disk;
/// distance arithmetic promotes rows to f64.
struct EmbeddingTable {
    std::vector<std::string> ids;
    RowMatrix<float> data;

    std::size_t size() const noexcept { return ids.size(); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(data.cols()); }
    bool empty() const noexcept { return ids.empty(); }

    /// Table of n rows with the given dim; ids left empty.
    static EmbeddingTable with_shape(std::size_t rows, std::size_t dim);
};

enum class EmbeddingFormat { Jsonl, Packed };

/// Picks Packed for a ".vnec" extension, Jsonl otherwise.
EmbeddingFormat guess_embedding_format(const std::filesystem::path& path);

std::vector<LossRecord> load_loss_records(const std::filesystem::path& path);
std::vector<LossRecord> parse_loss_records(std::string_view text);

EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format);
EmbeddingTable parse_embeddings_jsonl(std::string_view text);
EmbeddingTable parse_embeddings_packed(std::span<const std::byte> bytes);

std::vector<RawSample> load_manifest(const std::filesystem::path& path);
std::vector<RawSample> parse_manifest(std::string_view text);

void write_loss_records(const std::filesystem::path& path, std::span<const LossRecord> records);
void write_embeddings_jsonl(const std::filesystem::path& path, const EmbeddingTable& table);
void write_embeddings_packed(const std::filesystem::path& path, const EmbeddingTable& table);
std::vector<std::byte> encode_embeddings_packed(const EmbeddingTable& table);

struct JoinOptions {
    bool strict = false;
};

struct JoinWarnings {
    std::vector<std::string> missing_embedding;  // record without an embedding row (dropped)
    std::vector<std::string> orphan_embedding;   // embedding row without a record (dropped)
    std::vector<std::string> unknown_sample;     // record absent from the manifest
    std::vector<std::string> unscored_sample;    // manifest sample without a record

    std::size_t total() const noexcept {
        return missing_embedding.size() + orphan_embedding.size() + unknown_sample.size() +
               unscored_sample.size();
    }
};

/// Records joined to their embedding rows in ascending id order.
/// Immutable once built; safe to share across threads.
class ScoredDataset {
public:
    ScoredDataset() = default;

    const std::vector<LossRecord>& records() const noexcept { return records_; }
    /// Rows aligned with records(): row i belongs to records()[i].
    const EmbeddingTable& embeddings() const noexcept { return embeddings_; }
    const std::optional<std::vector<RawSample>>& samples() const noexcept { return samples_; }
    const JoinWarnings& warnings() const noexcept { return warnings_; }

    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    /// Row index of id, or nullopt.
    std::optional<std::size_t> find(const std::string& id) const;

private:
    friend ScoredDataset join_dataset(std::vector<LossRecord>, const EmbeddingTable&,
                                      std::optional<std::vector<RawSample>>, JoinOptions);

    std::vector<LossRecord> records_;
    EmbeddingTable embeddings_;
    std::optional<std::vector<RawSample>> samples_;
    std::unordered_map<std::string, std::size_t> join_index_;
    JoinWarnings warnings_;
};

ScoredDataset join_dataset(std::vector<LossRecord> records, const EmbeddingTable& embeddings,
                           std::optional<std::vector<RawSample>> samples = std::nullopt,
                           JoinOptions options = {});

std::string read_file(const std::filesystem::path& path);

}  // namespace visnec
