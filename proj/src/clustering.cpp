#include "visnec/clustering.hpp"

#include "visnec/error.hpp"
#include "visnec/parallel.hpp"
#include "visnec/rng.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace visnec {

namespace {

using Index = Eigen::Index;

struct AssignStep {
    std::vector<std::size_t> labels;
    std::vector<double> dist2;
    double inertia = 0.0;
};

AssignStep assign_step(const RowMatrix<float>& data, const Eigen::MatrixXd& centroids, unsigned threads) {
    const auto n = static_cast<std::size_t>(data.rows());
    AssignStep s;
    s.labels.resize(n);
    s.dist2.resize(n);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto [c, d] = nearest_centroid(data.row(static_cast<Index>(i)), centroids);
            s.labels[i] = static_cast<std::size_t>(c);
            s.dist2[i] = d;
        }
    });
    // Sequential sum in row order keeps inertia independent of the split.
    s.inertia = std::accumulate(s.dist2.begin(), s.dist2.end(), 0.0);
    return s;
}

/// Members of each cluster in ascending row order.
std::vector<std::vector<std::size_t>> members_of(const std::vector<std::size_t>& labels, std::size_t k) {
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
    return members;
}

/// Mean of each non-empty cluster; empty clusters are moved onto the point
/// farthest from its own (updated) centroid, ties to the lowest id.
void update_step(const EmbeddingTable& table, const std::vector<std::size_t>& labels,
                 Eigen::MatrixXd& centroids, unsigned threads) {
    const auto k = static_cast<std::size_t>(centroids.rows());
    const auto members = members_of(labels, k);

    parallel_for(k, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            if (members[c].empty()) continue;
            Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(centroids.cols());
            for (std::size_t i : members[c]) sum += table.data.row(static_cast<Index>(i)).cast<double>();
            centroids.row(static_cast<Index>(c)) = sum / static_cast<double>(members[c].size());
        }
    });

    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < k; ++c)
        if (members[c].empty()) empty.push_back(c);
    if (empty.empty()) return;

    const std::size_t n = labels.size();
    std::vector<double> dist2(n);
    for (std::size_t i = 0; i < n; ++i)
        dist2[i] = (centroids.row(static_cast<Index>(labels[i])) -
                    table.data.row(static_cast<Index>(i)).cast<double>())
                       .squaredNorm();
    for (std::size_t c : empty) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (dist2[i] > dist2[far] || (dist2[i] == dist2[far] && table.ids[i] < table.ids[far])) far = i;
        }
        if (!(dist2[far] > 0.0))
            fail(ErrorCode::InvariantViolation, "empty-cluster repair found no displaced point");
        centroids.row(static_cast<Index>(c)) = table.data.row(static_cast<Index>(far)).cast<double>();
        dist2[far] = 0.0;
    }
}

void check_table(const EmbeddingTable& table) {
    if (table.ids.size() != static_cast<std::size_t>(table.data.rows()))
        fail(ErrorCode::InvariantViolation, "embedding ids and rows disagree");
}

}  // namespace

void KMeansConfig::validate() const {
    if (k == 0) fail(ErrorCode::InvalidConfig, "k must be positive");
    if (max_iterations == 0) fail(ErrorCode::InvalidConfig, "max_iterations must be positive");
    if (!std::isfinite(tolerance) || tolerance < 0.0)
        fail(ErrorCode::InvalidConfig, "tolerance must be finite and >= 0");
}

std::size_t count_distinct_rows(const RowMatrix<float>& data) {
    const auto n = static_cast<std::size_t>(data.rows());
    if (n == 0) return 0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto row_less = [&](std::size_t a, std::size_t b) {
        for (Index c = 0; c < data.cols(); ++c) {
            const float x = data(static_cast<Index>(a), c), y = data(static_cast<Index>(b), c);
            if (x != y) return x < y;
        }
        return false;
    };
    std::sort(order.begin(), order.end(), row_less);
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < n; ++i)
        if (row_less(order[i - 1], order[i])) ++distinct;
    return distinct;
}

EmbeddingTable l2_normalized(const EmbeddingTable& table) {
    EmbeddingTable out = table;
    for (Index r = 0; r < out.data.rows(); ++r) {
        const double norm = out.data.row(r).cast<double>().norm();
        if (norm > 0.0) out.data.row(r) = (out.data.row(r).cast<double>() / norm).cast<float>();
    }
    return out;
}

std::vector<std::size_t> kmeanspp_seed_rows(const RowMatrix<float>& data, std::size_t k,
                                            std::uint64_t seed, unsigned threads) {
    const auto n = static_cast<std::size_t>(data.rows());
    if (n == 0 || k == 0) return {};
    SplitMix64 rng(seed);
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    chosen.push_back(static_cast<std::size_t>(rng.bounded(n)));

    std::vector<double> d2(n);
    auto refresh = [&](std::size_t center, bool first) {
        const Eigen::RowVectorXd c = data.row(static_cast<Index>(center)).cast<double>();
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const double d = (data.row(static_cast<Index>(i)).cast<double>() - c).squaredNorm();
                d2[i] = first ? d : std::min(d2[i], d);
            }
        });
    };
    refresh(chosen[0], true);

    while (chosen.size() < k) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        if (!(total > 0.0)) break;  // fewer distinct rows than k
        const double target = rng.uniform() * total;
        std::size_t pick = n;
        std::size_t last_positive = n;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            last_positive = i;
            acc += d2[i];
            if (acc > target) {
                pick = i;
                break;
            }
        }
        if (pick == n) pick = last_positive;  // rounding pushed target past the running sum
        chosen.push_back(pick);
        refresh(pick, false);
    }
    return chosen;
}

KMeansResult kmeans_fit(const EmbeddingTable& input, const KMeansConfig& cfg, unsigned threads) {
    cfg.validate();
    check_table(input);
    if (input.empty()) fail(ErrorCode::EmptyInput, "cannot cluster an empty embedding table");
    const EmbeddingTable normalized = cfg.normalize ? l2_normalized(input) : EmbeddingTable{};
    const EmbeddingTable& table = cfg.normalize ? normalized : input;

    const std::size_t distinct = count_distinct_rows(table.data);
    if (distinct == 1 && cfg.k > 1)
        fail(ErrorCode::DegenerateInput, "all rows identical with k=" + std::to_string(cfg.k));
    if (cfg.k > distinct)
        fail(ErrorCode::TooFewDistinctPoints,
             "k=" + std::to_string(cfg.k) + " exceeds " + std::to_string(distinct) + " distinct rows");

    const auto seeds = kmeanspp_seed_rows(table.data, cfg.k, cfg.seed, threads);
    if (seeds.size() != cfg.k) fail(ErrorCode::InvariantViolation, "k-means++ produced too few seeds");

    Eigen::MatrixXd centroids(static_cast<Index>(cfg.k), table.data.cols());
    for (std::size_t c = 0; c < cfg.k; ++c)
        centroids.row(static_cast<Index>(c)) = table.data.row(static_cast<Index>(seeds[c])).cast<double>();

    ClusterModel model;
    model.config = cfg;
    AssignStep step = assign_step(table.data, centroids, threads);
    model.inertia_trace.push_back(step.inertia);

    std::size_t iterations = 0;
    while (iterations < cfg.max_iterations) {
        const double previous = step.inertia;
        update_step(table, step.labels, centroids, threads);
        step = assign_step(table.data, centroids, threads);
        ++iterations;
        model.inertia_trace.push_back(step.inertia);
        // Lloyd never increases inertia; allow for last-bit rounding only.
        assert(step.inertia <= previous * (1.0 + 1e-12) + 1e-300);
        if (!(previous > 0.0)) break;
        if ((previous - step.inertia) / previous < cfg.tolerance) break;
    }

    model.centroids = std::move(centroids);
    model.inertia = step.inertia;
    model.iterations_run = iterations;

    KMeansResult result;
    result.assignment.ids = table.ids;
    result.assignment.clusters = std::move(step.labels);
    result.assignment.k = cfg.k;
    result.model = std::move(model);
    return result;
}

Assignment kmeans_assign(const ClusterModel& model, const EmbeddingTable& input, unsigned threads) {
    check_table(input);
    Assignment out;
    out.k = model.k();
    if (input.empty()) return out;
    if (input.dim() != model.dim())
        fail(ErrorCode::DimMismatch,
             "table dim " + std::to_string(input.dim()) + " vs model dim " + std::to_string(model.dim()));
    const EmbeddingTable normalized = model.config.normalize ? l2_normalized(input) : EmbeddingTable{};
    const EmbeddingTable& table = model.config.normalize ? normalized : input;
    AssignStep step = assign_step(table.data, model.centroids, threads);
    out.ids = table.ids;
    out.clusters = std::move(step.labels);
    return out;
}

std::vector<std::vector<std::string>> partition(const Assignment& assignment) {
    std::vector<std::vector<std::string>> lists(assignment.k);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const std::size_t c = assignment.clusters[i];
        if (c >= assignment.k)
            fail(ErrorCode::InvariantViolation, "cluster index out of range for " + assignment.ids[i]);
        lists[c].push_back(assignment.ids[i]);
    }
    for (auto& l : lists) std::sort(l.begin(), l.end());
    return lists;
}

}  // namespace visnec
