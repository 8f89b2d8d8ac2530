#ifndef GRAPHCLUST_TYPES_HPP
#define GRAPHCLUST_TYPES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace graphclust {

/// Row-major matrix of observations; rows = observations, cols = features.
struct DataMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    DataMatrix() = default;
    DataMatrix(int n, int d) : rows(n), cols(d), values(static_cast<std::size_t>(n) * d, 0.0) {}

    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    const double* row(int r) const { return values.data() + static_cast<std::size_t>(r) * cols; }
    double* row(int r) { return values.data() + static_cast<std::size_t>(r) * cols; }

    /// Throws invalid_argument on n < 2, d < 1, or any non-finite entry
    /// (message names the offending row).
    void validate() const;
};

/// Symmetric nonnegative distances with a zero diagonal.
struct DistanceMatrix {
    int n = 0;
    std::vector<double> d;

    DistanceMatrix() = default;
    explicit DistanceMatrix(int size) : n(size), d(static_cast<std::size_t>(size) * size, 0.0) {}

    double at(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return d[static_cast<std::size_t>(i) * n + j]; }

    void validate() const;
};

struct Edge {
    int u = 0; // u < v
    int v = 0;
    double w = 0.0;
};

/// Undirected simple graph over n vertices. Edge weights are kept for
/// diagnostics and export only; no statistic depends on them.
struct SimilarityGraph {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<int> degrees;

    long long num_edges() const { return static_cast<long long>(edges.size()); }

    /// Rebuilds the degree table from the edge list.
    void recompute_degrees();

    /// Checks simplicity (no loops, no duplicates) and index ranges.
    void validate() const;
};

/// Length-n assignment into k non-empty clusters, ids 1..k.
struct ClusterLabels {
    std::vector<int> ids;
    int k = 0;
    std::vector<int> sizes; // sizes[j] = |cluster j+1|

    int n() const { return static_cast<int>(ids.size()); }

    /// Builds labels from ids already in 1..k with every cluster non-empty.
    static ClusterLabels from_ids(std::vector<int> ids);

    /// Compacts arbitrary integer ids to 1..k by order of first appearance.
    static ClusterLabels compact(const std::vector<long long>& raw);

    void validate() const;
};

enum class Metric {
    euclidean,
    sqeuclidean,
    manhattan,
};

Metric metric_from_string(const std::string& name);
std::string to_string(Metric m);

} // namespace graphclust

#endif
