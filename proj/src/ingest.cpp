#include "visnec/ingest.hpp"

#include "visnec/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace visnec {

using nlohmann::json;

namespace {

bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(),
                       [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

/// Calls fn(line_number, line) for every non-blank line. Line numbers are 1-based.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::uint64_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(pos, end - pos);
        if (!is_blank(line)) fn(line_no, line);
        pos = end + 1;
    }
}

json parse_object(std::uint64_t line_no, std::string_view line) {
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) fail_at(ErrorCode::MalformedLine, line_no, "not valid JSON");
    if (!j.is_object()) fail_at(ErrorCode::MalformedLine, line_no, "expected a JSON object");
    return j;
}

std::string required_id(const json& j, std::uint64_t line_no) {
    auto it = j.find("id");
    if (it == j.end() || !it->is_string())
        fail_at(ErrorCode::MalformedLine, line_no, "missing string field 'id'");
    std::string id = it->get<std::string>();
    if (id.empty()) fail_at(ErrorCode::MalformedLine, line_no, "empty 'id'");
    return id;
}

double required_number(const json& j, const char* key, std::uint64_t line_no) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number())
        fail_at(ErrorCode::MalformedLine, line_no, std::string("missing numeric field '") + key + "'");
    return it->get<double>();
}

template <typename T>
T read_le(std::span<const std::byte> bytes, std::size_t offset) {
    static_assert(std::is_unsigned_v<T>);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        value |= static_cast<T>(std::to_integer<std::uint8_t>(bytes[offset + i])) << (8 * i);
    return value;
}

template <typename T>
void append_le(std::vector<std::byte>& out, T value) {
    static_assert(std::is_unsigned_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i)
        out.push_back(static_cast<std::byte>((value >> (8 * i)) & 0xFF));
}

constexpr std::array<char, 4> kMagic = {'V', 'N', 'E', 'C'};
constexpr std::uint32_t kPackedVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 4;

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open for writing: " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) fail(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail(ErrorCode::Io, "read failed: " + path.string());
    return std::move(ss).str();
}

EmbeddingTable EmbeddingTable::with_shape(std::size_t rows, std::size_t dim) {
    EmbeddingTable t;
    t.ids.resize(rows);
    t.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
    return t;
}

EmbeddingFormat guess_embedding_format(const std::filesystem::path& path) {
    return path.extension() == ".vnec" ? EmbeddingFormat::Packed : EmbeddingFormat::Jsonl;
}

// ---------------------------------------------------------------------------
// loss records

std::vector<LossRecord> parse_loss_records(std::string_view text) {
    std::vector<LossRecord> records;
    std::unordered_set<std::string> seen;
    for_each_line(text, [&](std::uint64_t line_no, std::string_view line) {
        const json j = parse_object(line_no, line);
        LossRecord r;
        r.id = required_id(j, line_no);
        r.blind_loss = required_number(j, "blind_loss", line_no);
        r.multimodal_loss = required_number(j, "multimodal_loss", line_no);
        if (!std::isfinite(r.blind_loss) || !std::isfinite(r.multimodal_loss))
            fail_at(ErrorCode::NonFiniteLoss, line_no, r.id);
        if (r.blind_loss < 0.0 || r.multimodal_loss < 0.0)
            fail_at(ErrorCode::NegativeLoss, line_no, r.id);
        if (!seen.insert(r.id).second) fail_at(ErrorCode::DuplicateId, line_no, r.id);
        records.push_back(std::move(r));
    });
    return records;
}

std::vector<LossRecord> load_loss_records(const std::filesystem::path& path) {
    return parse_loss_records(read_file(path));
}

void write_loss_records(const std::filesystem::path& path, std::span<const LossRecord> records) {
    std::string out;
    for (const auto& r : records) {
        json j = {{"id", r.id}, {"blind_loss", r.blind_loss}, {"multimodal_loss", r.multimodal_loss}};
        out += j.dump();
        out += '\n';
    }
    write_text(path, out);
}

// ---------------------------------------------------------------------------
// embeddings

EmbeddingTable parse_embeddings_jsonl(std::string_view text) {
    std::vector<std::string> ids;
    std::vector<float> values;
    std::optional<std::size_t> dim;
    std::unordered_set<std::string> seen;

    for_each_line(text, [&](std::uint64_t line_no, std::string_view line) {
        const json j = parse_object(line_no, line);
        std::string id = required_id(j, line_no);
        auto it = j.find("embedding");
        if (it == j.end() || !it->is_array())
            fail_at(ErrorCode::MalformedLine, line_no, "missing array field 'embedding'");
        const std::size_t got = it->size();
        if (!dim) {
            if (got == 0) fail_at(ErrorCode::DimMismatch, line_no, id + ": empty embedding");
            dim = got;
        } else if (got != *dim) {
            fail_at(ErrorCode::DimMismatch, line_no,
                    id + ": expected dim " + std::to_string(*dim) + ", got " + std::to_string(got));
        }
        for (const auto& v : *it) {
            if (!v.is_number()) fail_at(ErrorCode::MalformedLine, line_no, id + ": non-numeric entry");
            const float f = static_cast<float>(v.get<double>());
            if (!std::isfinite(f)) fail_at(ErrorCode::NonFiniteEmbedding, line_no, id);
            values.push_back(f);
        }
        if (!seen.insert(id).second) fail_at(ErrorCode::DuplicateId, line_no, id);
        ids.push_back(std::move(id));
    });

    EmbeddingTable table = EmbeddingTable::with_shape(ids.size(), dim.value_or(0));
    table.ids = std::move(ids);
    if (!values.empty())
        std::memcpy(table.data.data(), values.data(), values.size() * sizeof(float));
    return table;
}

EmbeddingTable parse_embeddings_packed(std::span<const std::byte> bytes) {
    if (bytes.size() < kMagic.size() ||
        std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0)
        fail(ErrorCode::BadMagic, "expected 'VNEC' header");
    if (bytes.size() < kHeaderBytes) fail(ErrorCode::TruncatedPayload, "header shorter than 20 bytes");

    const auto version = read_le<std::uint32_t>(bytes, 4);
    if (version != kPackedVersion)
        fail(ErrorCode::UnsupportedVersion, "packed version " + std::to_string(version));
    const auto rows = read_le<std::uint64_t>(bytes, 8);
    const auto dim = read_le<std::uint32_t>(bytes, 16);
    if (rows > 0 && dim == 0) fail(ErrorCode::DimMismatch, "dim 0 with non-empty payload");

    // Each row needs at least 4 + 4*dim bytes; reject absurd counts before allocating.
    const std::uint64_t min_row = 4 + 4ULL * dim;
    if (rows > (bytes.size() - kHeaderBytes) / min_row)
        fail(ErrorCode::TruncatedPayload, "row count " + std::to_string(rows) + " exceeds payload");

    EmbeddingTable table = EmbeddingTable::with_shape(rows, dim);
    std::unordered_set<std::string> seen;
    std::size_t off = kHeaderBytes;
    for (std::uint64_t r = 0; r < rows; ++r) {
        if (bytes.size() - off < 4) fail(ErrorCode::TruncatedPayload, "row " + std::to_string(r));
        const auto id_len = read_le<std::uint32_t>(bytes, off);
        off += 4;
        if (bytes.size() - off < std::uint64_t{id_len} + 4ULL * dim)
            fail(ErrorCode::TruncatedPayload, "row " + std::to_string(r));
        std::string id(reinterpret_cast<const char*>(bytes.data() + off), id_len);
        off += id_len;
        if (id.empty()) fail(ErrorCode::MalformedLine, "row " + std::to_string(r) + ": empty id");
        for (std::uint32_t c = 0; c < dim; ++c) {
            const auto bits = read_le<std::uint32_t>(bytes, off);
            off += 4;
            float f;
            std::memcpy(&f, &bits, sizeof f);
            if (!std::isfinite(f)) fail(ErrorCode::NonFiniteEmbedding, id);
            table.data(static_cast<Eigen::Index>(r), c) = f;
        }
        if (!seen.insert(id).second) fail(ErrorCode::DuplicateId, id);
        table.ids[r] = std::move(id);
    }
    if (off != bytes.size())
        fail(ErrorCode::TruncatedPayload,
             std::to_string(bytes.size() - off) + " trailing bytes after last row");
    return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
    const std::string text = read_file(path);
    if (format == EmbeddingFormat::Jsonl) return parse_embeddings_jsonl(text);
    return parse_embeddings_packed(std::as_bytes(std::span(text.data(), text.size())));
}

std::vector<std::byte> encode_embeddings_packed(const EmbeddingTable& table) {
    std::vector<std::byte> out;
    for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
    append_le<std::uint32_t>(out, kPackedVersion);
    append_le<std::uint64_t>(out, table.size());
    append_le<std::uint32_t>(out, static_cast<std::uint32_t>(table.dim()));
    for (std::size_t r = 0; r < table.size(); ++r) {
        const std::string& id = table.ids[r];
        append_le<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
        for (char c : id) out.push_back(static_cast<std::byte>(c));
        for (std::size_t c = 0; c < table.dim(); ++c) {
            std::uint32_t bits;
            const float f = table.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            std::memcpy(&bits, &f, sizeof bits);
            append_le<std::uint32_t>(out, bits);
        }
    }
    return out;
}

void write_embeddings_packed(const std::filesystem::path& path, const EmbeddingTable& table) {
    const auto bytes = encode_embeddings_packed(table);
    write_text(path, std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void write_embeddings_jsonl(const std::filesystem::path& path, const EmbeddingTable& table) {
    std::string out;
    for (std::size_t r = 0; r < table.size(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < table.dim(); ++c)
            row.push_back(table.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
        out += json{{"id", table.ids[r]}, {"embedding", std::move(row)}}.dump();
        out += '\n';
    }
    write_text(path, out);
}

// ---------------------------------------------------------------------------
// manifest

std::vector<RawSample> parse_manifest(std::string_view text) {
    std::vector<RawSample> samples;
    std::unordered_set<std::string> seen;
    for_each_line(text, [&](std::uint64_t line_no, std::string_view line) {
        const json j = parse_object(line_no, line);
        RawSample s;
        s.id = required_id(j, line_no);
        auto conv = j.find("conversation");
        if (conv == j.end()) conv = j.find("conversations");  // LLaVA spelling
        if (conv == j.end() || !conv->is_array())
            fail_at(ErrorCode::MalformedLine, line_no, s.id + ": missing array 'conversation'");
        bool has_assistant = false;
        for (const auto& t : *conv) {
            if (!t.is_object() || !t.contains("from") || !t.contains("value") ||
                !t["from"].is_string() || !t["value"].is_string())
                fail_at(ErrorCode::MalformedLine, line_no, s.id + ": turn needs string 'from' and 'value'");
            const auto from = t["from"].get<std::string>();
            Turn turn;
            if (from == "human" || from == "user") {
                turn.speaker = Speaker::User;
            } else if (from == "gpt" || from == "assistant") {
                turn.speaker = Speaker::Assistant;
                has_assistant = true;
            } else if (from == "system") {
                turn.speaker = Speaker::System;
            } else {
                fail_at(ErrorCode::InvalidSample, line_no, s.id + ": unknown speaker '" + from + "'");
            }
            turn.text = t["value"].get<std::string>();
            s.conversation.push_back(std::move(turn));
        }
        if (!has_assistant) fail_at(ErrorCode::InvalidSample, line_no, s.id + ": no assistant turn");
        if (auto img = j.find("image"); img != j.end() && !img->is_null()) {
            if (!img->is_string()) fail_at(ErrorCode::MalformedLine, line_no, s.id + ": 'image' must be a string");
            s.image_ref = img->get<std::string>();
        }
        if (!seen.insert(s.id).second) fail_at(ErrorCode::DuplicateId, line_no, s.id);
        samples.push_back(std::move(s));
    });
    return samples;
}

std::vector<RawSample> load_manifest(const std::filesystem::path& path) {
    return parse_manifest(read_file(path));
}

// ---------------------------------------------------------------------------
// join

std::optional<std::size_t> ScoredDataset::find(const std::string& id) const {
    auto it = join_index_.find(id);
    if (it == join_index_.end()) return std::nullopt;
    return it->second;
}

ScoredDataset join_dataset(std::vector<LossRecord> records, const EmbeddingTable& embeddings,
                           std::optional<std::vector<RawSample>> samples, JoinOptions options) {
    ScoredDataset ds;
    JoinWarnings& w = ds.warnings_;

    std::unordered_map<std::string_view, std::size_t> emb_row;
    emb_row.reserve(embeddings.size());
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        if (!emb_row.emplace(embeddings.ids[i], i).second)
            fail(ErrorCode::DuplicateId, "embedding " + embeddings.ids[i]);
    }

    std::sort(records.begin(), records.end(),
              [](const LossRecord& a, const LossRecord& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].id == records[i - 1].id) fail(ErrorCode::DuplicateId, records[i].id);

    std::vector<LossRecord> kept;
    std::vector<std::size_t> rows;
    kept.reserve(records.size());
    std::unordered_set<std::string_view> matched;
    for (auto& r : records) {
        auto it = emb_row.find(r.id);
        if (it == emb_row.end()) {
            if (options.strict) fail(ErrorCode::MissingEmbedding, r.id);
            w.missing_embedding.push_back(r.id);
            continue;
        }
        matched.insert(it->first);
        rows.push_back(it->second);
        kept.push_back(std::move(r));
    }
    for (const auto& id : embeddings.ids) {
        if (matched.count(id)) continue;
        if (options.strict) fail(ErrorCode::OrphanEmbedding, id);
        w.orphan_embedding.push_back(id);
    }
    std::sort(w.orphan_embedding.begin(), w.orphan_embedding.end());

    if (samples) {
        std::unordered_set<std::string_view> sample_ids;
        for (const auto& s : *samples)
            if (!sample_ids.insert(s.id).second) fail(ErrorCode::DuplicateId, "manifest " + s.id);
        std::unordered_set<std::string_view> record_ids;
        for (const auto& r : kept) {
            record_ids.insert(r.id);
            if (!sample_ids.count(r.id)) {
                if (options.strict) fail(ErrorCode::UnknownSample, r.id);
                w.unknown_sample.push_back(r.id);
            }
        }
        for (const auto& s : *samples) {
            if (record_ids.count(s.id)) continue;
            if (options.strict) fail(ErrorCode::UnknownSample, "manifest sample without record: " + s.id);
            w.unscored_sample.push_back(s.id);
        }
        std::sort(w.unscored_sample.begin(), w.unscored_sample.end());
        std::sort(samples->begin(), samples->end(),
                  [](const RawSample& a, const RawSample& b) { return a.id < b.id; });
    }

    ds.embeddings_ = EmbeddingTable::with_shape(kept.size(), embeddings.dim());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        ds.embeddings_.ids[i] = kept[i].id;
        ds.embeddings_.data.row(static_cast<Eigen::Index>(i)) =
            embeddings.data.row(static_cast<Eigen::Index>(rows[i]));
        ds.join_index_.emplace(kept[i].id, i);
    }
    ds.records_ = std::move(kept);
    ds.samples_ = std::move(samples);
    return ds;
}

}  // namespace visnec
