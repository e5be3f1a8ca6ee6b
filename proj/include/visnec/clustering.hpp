#pragma once

#include "visnec/ingest.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace visnec {

enum class KMeansInit { KMeansPlusPlus };

struct KMeansConfig {
    std::size_t k = 20;
    std::size_t max_iterations = 100;
    double tolerance = 1e-6;  // relative inertia improvement
    std::uint64_t seed = 0;
    KMeansInit init = KMeansInit::KMeansPlusPlus;
    bool normalize = false;  // L2-normalize rows before clustering

    void validate() const;
};

struct ClusterModel {
    Eigen::MatrixXd centroids;  // k x dim
    double inertia = 0.0;
    std::size_t iterations_run = 0;
    KMeansConfig config;
    /// Inertia after the initial assignment and after every Lloyd iteration.
    std::vector<double> inertia_trace;

    std::size_t k() const noexcept { return static_cast<std::size_t>(centroids.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(centroids.cols()); }
};

/// Cluster index per id, aligned with the table the assignment came from.
struct Assignment {
    std::vector<std::string> ids;
    std::vector<std::size_t> clusters;
    std::size_t k = 0;

    std::size_t size() const noexcept { return ids.size(); }

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Nearest row of `centroids` to `point` by squared Euclidean distance in
/// double precision. Ties go to the lowest centroid index.
template <typename PointDerived, typename CentroidDerived>
std::pair<Eigen::Index, double> nearest_centroid(const Eigen::MatrixBase<PointDerived>& point,
                                                 const Eigen::MatrixBase<CentroidDerived>& centroids) {
    Eigen::Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    const auto p = point.template cast<double>();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        const double d = (centroids.row(c).template cast<double>() - p).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return {best, best_d};
}

/// Number of pairwise-distinct rows (exact float comparison).
std::size_t count_distinct_rows(const RowMatrix<float>& data);

/// Copy of `table` with every non-zero row scaled to unit L2 norm.
EmbeddingTable l2_normalized(const EmbeddingTable& table);

/// k-means++ seeding. The first center is drawn uniformly, each later one
/// with probability proportional to squared distance to the nearest chosen
/// center; all draws come from SplitMix64(seed). Returns the chosen row
/// indices in draw order.
std::vector<std::size_t> kmeanspp_seed_rows(const RowMatrix<float>& data, std::size_t k,
                                            std::uint64_t seed, unsigned threads = 1);

struct KMeansResult {
    ClusterModel model;
    Assignment assignment;
};

/// Lloyd iterations from k-means++ seeds. Output is a pure function of
/// (table, cfg); `threads` never changes a bit of it.
KMeansResult kmeans_fit(const EmbeddingTable& table, const KMeansConfig& cfg, unsigned threads = 1);

Assignment kmeans_assign(const ClusterModel& model, const EmbeddingTable& table, unsigned threads = 1);

/// Ids grouped per cluster, each list in ascending id order. Always k lists.
std::vector<std::vector<std::string>> partition(const Assignment& assignment);

}  // namespace visnec
