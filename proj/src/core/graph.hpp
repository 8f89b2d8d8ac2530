#ifndef GRAPHCLUST_GRAPH_HPP
#define GRAPHCLUST_GRAPH_HPP

#include <string>
#include <vector>

#include "types.hpp"

namespace graphclust {

DistanceMatrix pairwise_distances(const DataMatrix& x, Metric metric);

/// Union of `k` edge-disjoint minimum spanning trees, extracted iteratively
/// from the dense distance graph (Prim with an excluded-edge mask). Distance
/// ties are broken by lexicographic (u, v) edge order, so the result is a
/// deterministic function of the distance matrix.
SimilarityGraph build_kmst(const DistanceMatrix& d, int k);

/// Symmetrized k-nearest-neighbour graph: edge (u, v) iff v is among u's k
/// nearest or u among v's. Neighbour ties are broken by smaller vertex index.
SimilarityGraph build_knn(const DistanceMatrix& d, int k);

/// Maximum k for which build_kmst can succeed on a complete graph of n vertices.
int max_feasible_kmst(int n);

struct EdgeRecord {
    int u = 0;
    int v = 0;
    double w = 0.0;
    bool has_w = false;
    long long line = 0; // 1-based source line for diagnostics; 0 = positional
};

/// Builds a simple graph from raw edge records (deduplicated; the first
/// occurrence of an unordered pair wins). `n = 0` infers max index + 1.
SimilarityGraph graph_from_edges(int n, const std::vector<EdgeRecord>& records);

/// Edge-list file: one "u,v" or "u,v,w" per line, 0-based vertices,
/// '#' comments ignored. Errors carry 1-based line numbers.
SimilarityGraph read_edge_list(const std::string& path, int n);

/// Writes "u,v,w" lines; `header_comments` lines are emitted first, each
/// prefixed with "# ".
void write_edge_list(const SimilarityGraph& g, const std::string& path,
                     const std::vector<std::string>& header_comments = {});

struct GraphStats {
    long long size_g = 0; // |G|
    double g_c = 0.0;     // sum of squared degrees - (4/n)|G|^2
    double g_e = 0.0;     // 2|G|^2 / (n(n-1))
};

GraphStats graph_stats(const SimilarityGraph& g);

} // namespace graphclust

#endif
