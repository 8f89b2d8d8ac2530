#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "error.hpp"

namespace graphclust {

void DataMatrix::validate() const {
    if (rows < 2) fail(errc::invalid_argument, "data matrix needs at least 2 rows, got " + std::to_string(rows));
    if (cols < 1) fail(errc::invalid_argument, "data matrix needs at least 1 column, got " + std::to_string(cols));
    if (values.size() != static_cast<std::size_t>(rows) * cols)
        fail(errc::internal, "data matrix storage size mismatch");
    for (int r = 0; r < rows; ++r) {
        const double* p = row(r);
        for (int c = 0; c < cols; ++c) {
            if (!std::isfinite(p[c]))
                fail(errc::invalid_argument, "non-finite value in data row " + std::to_string(r));
        }
    }
}

void DistanceMatrix::validate() const {
    if (n < 2) fail(errc::invalid_argument, "distance matrix needs at least 2 points");
    if (d.size() != static_cast<std::size_t>(n) * n) fail(errc::internal, "distance matrix storage size mismatch");
    for (int i = 0; i < n; ++i) {
        if (at(i, i) != 0.0) fail(errc::invalid_argument, "distance matrix diagonal must be zero at " + std::to_string(i));
        for (int j = i + 1; j < n; ++j) {
            double a = at(i, j);
            if (!std::isfinite(a) || a < 0.0)
                fail(errc::invalid_argument, "invalid distance at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            if (a != at(j, i))
                fail(errc::invalid_argument, "distance matrix not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
}

void SimilarityGraph::recompute_degrees() {
    degrees.assign(n, 0);
    for (const Edge& e : edges) {
        ++degrees[e.u];
        ++degrees[e.v];
    }
}

void SimilarityGraph::validate() const {
    if (n < 2) fail(errc::invalid_argument, "graph needs at least 2 vertices");
    long long degsum = 0;
    std::vector<std::pair<int, int>> seen;
    seen.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
            fail(errc::invalid_argument, "edge endpoint out of range");
        if (e.u == e.v) fail(errc::invalid_argument, "self-loop in graph");
        if (e.u >= e.v) fail(errc::internal, "edge not normalized (u < v expected)");
        seen.emplace_back(e.u, e.v);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        fail(errc::invalid_argument, "duplicate edge in graph");
    if (degrees.size() != static_cast<std::size_t>(n)) fail(errc::internal, "degree table size mismatch");
    for (int t = 0; t < n; ++t) degsum += degrees[t];
    if (degsum != 2 * num_edges()) fail(errc::internal, "degree sum does not match edge count");
}

ClusterLabels ClusterLabels::from_ids(std::vector<int> ids) {
    ClusterLabels l;
    l.ids = std::move(ids);
    int k = 0;
    for (int id : l.ids) k = std::max(k, id);
    l.k = k;
    l.sizes.assign(k, 0);
    for (int id : l.ids) {
        if (id < 1 || id > k) fail(errc::invalid_argument, "cluster id out of range 1..k");
        ++l.sizes[id - 1];
    }
    l.validate();
    return l;
}

ClusterLabels ClusterLabels::compact(const std::vector<long long>& raw) {
    std::unordered_map<long long, int> remap;
    ClusterLabels l;
    l.ids.reserve(raw.size());
    for (long long r : raw) {
        auto [it, inserted] = remap.emplace(r, static_cast<int>(remap.size()) + 1);
        l.ids.push_back(it->second);
    }
    l.k = static_cast<int>(remap.size());
    l.sizes.assign(l.k, 0);
    for (int id : l.ids) ++l.sizes[id - 1];
    return l;
}

void ClusterLabels::validate() const {
    if (ids.empty()) fail(errc::invalid_argument, "empty label vector");
    if (k < 1) fail(errc::invalid_argument, "cluster count must be positive");
    if (sizes.size() != static_cast<std::size_t>(k)) fail(errc::internal, "cluster size table mismatch");
    long long total = 0;
    for (int j = 0; j < k; ++j) {
        if (sizes[j] < 1) fail(errc::invalid_argument, "cluster " + std::to_string(j + 1) + " is empty");
        total += sizes[j];
    }
    if (total != n()) fail(errc::internal, "cluster sizes do not sum to n");
}

Metric metric_from_string(const std::string& name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "sqeuclidean") return Metric::sqeuclidean;
    if (name == "manhattan") return Metric::manhattan;
    fail(errc::invalid_argument, "unknown metric '" + name + "'");
}

std::string to_string(Metric m) {
    switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::sqeuclidean: return "sqeuclidean";
    case Metric::manhattan: return "manhattan";
    }
    return "euclidean";
}

} // namespace graphclust
