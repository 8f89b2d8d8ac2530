#ifndef GRAPHCLUST_EDGECOUNT_HPP
#define GRAPHCLUST_EDGECOUNT_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "graph.hpp"
#include "types.hpp"

namespace graphclust {

/// Per-cluster within edge counts: R_j = #{(u,v) in G : label(u) = label(v) = j}.
std::vector<long long> within_counts(const SimilarityGraph& g, const ClusterLabels& labels);

/// Exact moments of the within-cluster edge counts, and of the size-weighted
/// sum W = sum_j R_j / n_j, under uniform permutation of the cluster labels.
struct NullMoments {
    std::vector<double> cluster_mean;             // E(R_j)
    std::vector<double> cluster_var;              // Var(R_j)
    std::vector<std::vector<double>> cluster_cov; // Cov(R_i, R_j), symmetric, diagonal = Var
    double weighted_mean = 0.0;                   // E(W)
    double weighted_var = 0.0;                    // Var(W)
};

/// Closed-form permutation-null moments from graph summary statistics.
/// Requires n >= 4 when k >= 2 (variance denominators n-2, n-3).
NullMoments null_moments(const GraphStats& stats, int n, const std::vector<int>& sizes);

/// One evaluated clustering: observed W, its null mean/variance, and the
/// squared standardized deviation Q = (W - E)^2 / Var. `z` keeps the sign.
struct QRecord {
    int k = 0;
    double w = 0.0;
    double e = 0.0;
    double var = 0.0;
    double q = 0.0;
    double z = 0.0;
    bool valid = false;
    std::string reason; // degenerate-variance | empty-cluster | clusterer-failure
};

/// Threshold below which the null variance is treated as degenerate.
double variance_floor(long long size_g, int n);

QRecord q_statistic(const SimilarityGraph& g, const ClusterLabels& labels);

/// Supplies labels for a given k. Must be safe to call concurrently for
/// distinct k (estimate_k may fan out); throw to mark the k as failed.
using Labeler = std::function<ClusterLabels(int k)>;

struct QProfile {
    std::vector<QRecord> records;
    int chosen_k = 0; // 0 = no valid k
    std::string failure_reason;
};

/// Evaluates Q(k) for k in [kmin, kmax] on a graph built once, and picks
/// argmax Q over valid records (smallest k on ties). Labeler failures mark
/// single records invalid; estimation continues.
QProfile estimate_k(const SimilarityGraph& g, const Labeler& labeler, int kmin, int kmax);

/// Serialization; `meta` key/values are embedded so artifacts are self-describing.
std::string profile_to_json(const QProfile& p, const std::map<std::string, std::string>& meta);
std::string profile_to_csv(const QProfile& p, const std::map<std::string, std::string>& meta);

} // namespace graphclust

#endif
