#ifndef GRAPHCLUST_ORACLE_HPP
#define GRAPHCLUST_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "types.hpp"

namespace graphclust {

/// Permutation-null moments measured directly from label placements, used to
/// validate the closed forms. Exhaustive mode enumerates every distinct
/// placement; Monte Carlo mode samples uniformly and reports standard errors.
struct OracleEstimate {
    std::vector<double> cluster_mean;
    std::vector<double> cluster_var;
    std::vector<std::vector<double>> cluster_cov;
    double weighted_mean = 0.0;
    double weighted_var = 0.0;

    std::vector<double> cluster_mean_se; // Monte Carlo only
    std::vector<double> cluster_var_se;
    double weighted_mean_se = 0.0;
    double weighted_var_se = 0.0;

    std::uint64_t draws = 0;
    bool exhaustive = false;
};

/// Number of distinct label placements n! / prod(n_j!); +inf once it
/// overflows double precision meaningfully.
double multinomial_count(int n, const std::vector<int>& sizes);

/// Exact moments by enumerating all distinct multiset permutations of the
/// label vector (two passes; central moments accumulate exactly enough for a
/// 1e-12 gate). Throws when the placement count exceeds `limit`.
OracleEstimate exhaustive_moments(const SimilarityGraph& g, const std::vector<int>& sizes,
                                  double limit = 1e6);

/// Seeded uniform placements via Fisher-Yates; batches combine in fixed order
/// so results are independent of worker count.
OracleEstimate mc_moments(const SimilarityGraph& g, const std::vector<int>& sizes,
                          std::uint64_t draws, std::uint64_t seed);

} // namespace graphclust

#endif
