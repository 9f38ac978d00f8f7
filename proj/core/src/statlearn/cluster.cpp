#include "pearl/statlearn/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pearl/core/error.hpp"

namespace pearl::statlearn {

namespace {

class CondensedMatrix {
public:
    explicit CondensedMatrix(std::size_t n) : n_(n), data_(n < 2 ? 0 : n * (n - 1) / 2) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }

private:
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return n_ * i - i * (i + 1) / 2 + (j - i - 1);
    }

    std::size_t n_;
    std::vector<double> data_;
};

double lance_williams(Linkage linkage, double d_ki, double d_kj, double d_ij, double n_k,
                      double n_i, double n_j) {
    switch (linkage) {
        case Linkage::complete:
            return std::max(d_ki, d_kj);
        case Linkage::average:
            return (n_i * d_ki + n_j * d_kj) / (n_i + n_j);
        case Linkage::ward: {
            double v = ((n_k + n_i) * d_ki * d_ki + (n_k + n_j) * d_kj * d_kj - n_k * d_ij * d_ij) /
                       (n_k + n_i + n_j);
            return std::sqrt(std::max(v, 0.0));
        }
    }
    return 0.0;
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

Linkage parse_linkage(const std::string& name) {
    if (name == "ward") return Linkage::ward;
    if (name == "complete") return Linkage::complete;
    if (name == "average") return Linkage::average;
    throw InvalidArgument("unknown linkage '" + name + "'");
}

const char* to_string(Linkage l) {
    switch (l) {
        case Linkage::ward: return "ward";
        case Linkage::complete: return "complete";
        case Linkage::average: return "average";
    }
    return "?";
}

Dendrogram::Dendrogram(const std::vector<std::vector<double>>& points, Linkage linkage)
    : n_(points.size()) {
    if (points.empty()) throw InvalidArgument("clustering needs at least one point");
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        if (p.size() != dim) throw DimensionMismatch("points must share one dimension");
    }
    if (n_ == 1) return;

    CondensedMatrix dist(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                double d = points[i][k] - points[j][k];
                s += d * d;
            }
            dist(i, j) = std::sqrt(s);
        }
    }

    std::vector<char> active(n_, 1);
    std::vector<double> sizes(n_, 1.0);
    std::vector<std::size_t> chain;
    chain.reserve(n_);
    std::size_t remaining = n_;
    std::size_t first_active = 0;
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    merges_.reserve(n_ - 1);

    while (remaining > 1) {
        if (chain.empty()) {
            while (!active[first_active]) ++first_active;
            chain.push_back(first_active);
        }
        const std::size_t a = chain.back();
        const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : none;

        double best = std::numeric_limits<double>::infinity();
        std::size_t b = none;
        if (prev != none) {
            best = dist(a, prev);
            b = prev;
        }
        for (std::size_t k = 0; k < n_; ++k) {
            if (!active[k] || k == a) continue;
            double d = dist(a, k);
            if (d < best) {
                best = d;
                b = k;
            }
        }

        if (b != prev) {
            chain.push_back(b);
            continue;
        }

        chain.pop_back();
        chain.pop_back();
        const std::size_t i = std::min(a, b);
        const std::size_t j = std::max(a, b);
        const double d_ij = best;
        merges_.push_back({i, j, d_ij});
        for (std::size_t k = 0; k < n_; ++k) {
            if (!active[k] || k == i || k == j) continue;
            dist(i, k) = lance_williams(linkage, dist(i, k), dist(j, k), d_ij, sizes[k], sizes[i],
                                        sizes[j]);
        }
        sizes[i] += sizes[j];
        active[j] = 0;
        --remaining;
    }

    sorted_heights_.reserve(merges_.size());
    for (const auto& m : merges_) sorted_heights_.push_back(m.height);
    std::sort(sorted_heights_.begin(), sorted_heights_.end());
}

int Dendrogram::clusters_at(double threshold) const {
    auto merged = std::upper_bound(sorted_heights_.begin(), sorted_heights_.end(), threshold) -
                  sorted_heights_.begin();
    return static_cast<int>(n_ - static_cast<std::size_t>(merged));
}

ClusterResult Dendrogram::cut(double threshold) const {
    UnionFind uf(n_);
    for (const auto& m : merges_) {
        if (m.height <= threshold) uf.unite(m.a, m.b);
    }
    ClusterResult result;
    result.threshold_used = threshold;
    result.labels.assign(n_, -1);
    std::vector<int> label_of_root(n_, -1);
    for (std::size_t i = 0; i < n_; ++i) {
        std::size_t r = uf.find(i);
        if (label_of_root[r] < 0) label_of_root[r] = result.n_clusters++;
        result.labels[i] = label_of_root[r];
    }
    return result;
}

ClusterResult agglomerate(const std::vector<std::vector<double>>& points, double threshold,
                          Linkage linkage) {
    if (!(threshold > 0.0)) throw InvalidArgument("threshold must be positive");
    return Dendrogram(points, linkage).cut(threshold);
}

ClusterResult adaptive_cluster(const std::vector<std::vector<double>>& points, int max_clusters,
                               double start, double step, Linkage linkage) {
    if (max_clusters < 1) throw InvalidArgument("max_clusters must be >= 1");
    if (!(step > 0.0)) throw InvalidArgument("threshold step must be positive");
    Dendrogram tree(points, linkage);

    auto threshold_at = [&](long i) { return start + static_cast<double>(i) * step; };
    if (tree.clusters_at(threshold_at(0)) <= max_clusters) return tree.cut(threshold_at(0));

    // Jump to the first grid point at or above the height that leaves
    // max_clusters clusters, then settle against rounding on either side.
    std::vector<double> heights;
    heights.reserve(tree.merges().size());
    for (const auto& m : tree.merges()) heights.push_back(m.height);
    std::sort(heights.begin(), heights.end());
    const std::size_t needed = tree.size() - static_cast<std::size_t>(max_clusters);
    const double target = heights[needed - 1];
    long i = std::max(0L, static_cast<long>(std::ceil((target - start) / step)));
    while (tree.clusters_at(threshold_at(i)) > max_clusters) ++i;
    while (i > 0 && tree.clusters_at(threshold_at(i - 1)) <= max_clusters) --i;
    return tree.cut(threshold_at(i));
}

}  // namespace pearl::statlearn
