#ifndef GRAPHCLUST_CLUSTER_HPP
#define GRAPHCLUST_CLUSTER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "types.hpp"

namespace graphclust {

struct KMeansConfig {
    int k = 1;
    int restarts = 10;
    int max_iter = 100;
    double tol = 1e-6; // relative center-shift convergence threshold
    std::uint64_t seed = 0;
};

/// Lloyd iterations from k-means++ seeding; best of cfg.restarts by
/// within-cluster sum of squares (ties go to the lowest restart index, so the
/// result does not depend on restart scheduling). An emptied cluster is
/// reseeded at the point farthest from its assigned center.
ClusterLabels kmeans(const DataMatrix& x, const KMeansConfig& cfg);

/// kmeans plus the winning within-cluster sum of squares.
struct KMeansResult {
    ClusterLabels labels;
    double wcss = 0.0;
};
KMeansResult kmeans_full(const DataMatrix& x, const KMeansConfig& cfg);

/// Maximum label-agreement fraction over all bijective renamings of the
/// estimated cluster ids, solved as an assignment problem on the k x k
/// agreement matrix.
struct AccuracyReport {
    double accuracy = 0.0;
    std::vector<int> matching; // matching[e-1] = true id assigned to estimated id e
};

AccuracyReport accuracy(const ClusterLabels& truth, const ClusterLabels& est);

/// One integer per line; ids compacted to 1..k by order of first appearance.
/// Parse errors report 1-based line numbers.
ClusterLabels load_labels(const std::string& path);

} // namespace graphclust

#endif
