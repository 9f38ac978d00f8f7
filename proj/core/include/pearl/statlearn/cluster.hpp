#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pearl::statlearn {

enum class Linkage { ward, complete, average };

Linkage parse_linkage(const std::string& name);
const char* to_string(Linkage l);

struct ClusterResult {
    /// One label per input point, contiguous in 0..n_clusters-1 and numbered
    /// by first appearance in input order.
    std::vector<int> labels;
    int n_clusters = 0;
    double threshold_used = 0.0;
};

struct Merge {
    std::size_t a = 0;  ///< a point index inside the first cluster
    std::size_t b = 0;  ///< a point index inside the second cluster
    double height = 0.0;
};

/// Full agglomerative hierarchy over a point set. Built once with the
/// nearest-neighbour-chain algorithm (O(n^2) time and memory); every threshold
/// cut afterwards is a union-find pass over the merges.
class Dendrogram {
public:
    Dendrogram(const std::vector<std::vector<double>>& points, Linkage linkage);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] const std::vector<Merge>& merges() const { return merges_; }

    /// Number of clusters left after applying every merge with height <= t.
    [[nodiscard]] int clusters_at(double threshold) const;
    [[nodiscard]] ClusterResult cut(double threshold) const;

private:
    std::size_t n_;
    std::vector<Merge> merges_;
    std::vector<double> sorted_heights_;
};

/// Bottom-up clustering that stops once the smallest linkage distance
/// between clusters exceeds `threshold`.
ClusterResult agglomerate(const std::vector<std::vector<double>>& points, double threshold,
                          Linkage linkage = Linkage::ward);

/// Tries thresholds start, start+step, start+2*step, ... and returns the
/// first cut with at most `max_clusters` clusters.
ClusterResult adaptive_cluster(const std::vector<std::vector<double>>& points, int max_clusters,
                               double start = 0.1, double step = 0.001,
                               Linkage linkage = Linkage::ward);

}  // namespace pearl::statlearn
