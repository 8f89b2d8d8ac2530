#include "cluster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "error.hpp"
#include "numfmt.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace graphclust {

namespace {

double sq_dist(const double* a, const double* b, int d) {
    double acc = 0.0;
    for (int f = 0; f < d; ++f) {
        double diff = a[f] - b[f];
        acc += diff * diff;
    }
    return acc;
}

struct LloydOutcome {
    std::vector<int> assign; // 0-based
    double wcss = std::numeric_limits<double>::infinity();
};

void kmeanspp_init(const DataMatrix& x, int k, Rng& rng, std::vector<double>& centers) {
    const int n = x.rows, d = x.cols;
    centers.assign(static_cast<std::size_t>(k) * d, 0.0);

    int first = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    std::copy_n(x.row(first), d, centers.begin());

    std::vector<double> dist2(n);
    for (int i = 0; i < n; ++i) dist2[i] = sq_dist(x.row(i), centers.data(), d);

    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += dist2[i];
        int pick;
        if (total > 0.0) {
            double target = rng.u01() * total;
            double run = 0.0;
            pick = n - 1;
            for (int i = 0; i < n; ++i) {
                run += dist2[i];
                if (run > target) {
                    pick = i;
                    break;
                }
            }
        } else {
            // all remaining points coincide with chosen centers
            pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        }
        double* center = centers.data() + static_cast<std::size_t>(c) * d;
        std::copy_n(x.row(pick), d, center);
        for (int i = 0; i < n; ++i) dist2[i] = std::min(dist2[i], sq_dist(x.row(i), center, d));
    }
}

LloydOutcome lloyd(const DataMatrix& x, int k, int max_iter, double tol, Rng& rng) {
    const int n = x.rows, d = x.cols;
    std::vector<double> centers;
    kmeanspp_init(x, k, rng, centers);

    LloydOutcome out;
    out.assign.assign(n, 0);
    std::vector<double> next(centers.size());
    std::vector<int> counts(k);

    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            const double* p = x.row(i);
            int best = 0;
            double best_d = sq_dist(p, centers.data(), d);
            for (int c = 1; c < k; ++c) {
                double dd = sq_dist(p, centers.data() + static_cast<std::size_t>(c) * d, d);
                if (dd < best_d) {
                    best_d = dd;
                    best = c;
                }
            }
            if (out.assign[i] != best) {
                out.assign[i] = best;
                changed = true;
            }
        }

        // empty-cluster repair: move the point farthest from its center
        for (int c = 0; c < k; ++c) {
            std::fill(counts.begin(), counts.end(), 0);
            for (int i = 0; i < n; ++i) ++counts[out.assign[i]];
            if (counts[c] > 0) continue;
            int far = -1;
            double far_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (counts[out.assign[i]] <= 1) continue;
                double dd = sq_dist(x.row(i), centers.data() + static_cast<std::size_t>(out.assign[i]) * d, d);
                if (dd > far_d) {
                    far_d = dd;
                    far = i;
                }
            }
            if (far < 0) fail(errc::internal, "cannot repair empty cluster");
            out.assign[far] = c;
            changed = true;
        }

        std::fill(next.begin(), next.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            int c = out.assign[i];
            ++counts[c];
            const double* p = x.row(i);
            double* target = next.data() + static_cast<std::size_t>(c) * d;
            for (int f = 0; f < d; ++f) target[f] += p[f];
        }
        for (int c = 0; c < k; ++c)
            for (int f = 0; f < d; ++f) next[static_cast<std::size_t>(c) * d + f] /= counts[c];

        double shift2 = 0.0, scale2 = 1.0;
        for (int c = 0; c < k; ++c) {
            const double* a = centers.data() + static_cast<std::size_t>(c) * d;
            const double* b = next.data() + static_cast<std::size_t>(c) * d;
            shift2 = std::max(shift2, sq_dist(a, b, d));
            double norm2 = 0.0;
            for (int f = 0; f < d; ++f) norm2 += b[f] * b[f];
            scale2 = std::max(scale2, norm2);
        }
        centers.swap(next);
        if (!changed || shift2 <= tol * tol * scale2) break;
    }

    out.wcss = 0.0;
    for (int i = 0; i < n; ++i)
        out.wcss += sq_dist(x.row(i), centers.data() + static_cast<std::size_t>(out.assign[i]) * d, d);
    return out;
}

} // namespace

KMeansResult kmeans_full(const DataMatrix& x, const KMeansConfig& cfg) {
    x.validate();
    if (cfg.k < 1) fail(errc::invalid_argument, "k must be >= 1");
    if (cfg.k > x.rows) fail(errc::invalid_argument, "k = " + std::to_string(cfg.k) + " exceeds n = " + std::to_string(x.rows));
    if (cfg.restarts < 1 || cfg.max_iter < 1 || !(cfg.tol > 0.0))
        fail(errc::invalid_argument, "invalid k-means configuration");

    std::vector<LloydOutcome> runs(cfg.restarts);
    parallel_for(runs.size(), [&](std::size_t r) {
        Rng rng(derive_seed(cfg.seed, r));
        runs[r] = lloyd(x, cfg.k, cfg.max_iter, cfg.tol, rng);
    });

    // lowest restart index wins ties, independent of scheduling
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].wcss < runs[best].wcss) best = r;

    KMeansResult result;
    result.wcss = runs[best].wcss;
    std::vector<int> ids(x.rows);
    for (int i = 0; i < x.rows; ++i) ids[i] = runs[best].assign[i] + 1;
    result.labels = ClusterLabels::from_ids(std::move(ids));
    return result;
}

ClusterLabels kmeans(const DataMatrix& x, const KMeansConfig& cfg) { return kmeans_full(x, cfg).labels; }

namespace {

/// Hungarian algorithm (potentials form) on a square cost matrix; returns the
/// column matched to each row. O(m^3), exact for integer costs.
std::vector<int> solve_assignment(const std::vector<std::vector<long long>>& cost) {
    const int m = static_cast<int>(cost.size());
    const long long inf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> u(m + 1, 0), v(m + 1, 0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= m; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long long> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            long long delta = inf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(m);
    for (int j = 1; j <= m; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

} // namespace

AccuracyReport accuracy(const ClusterLabels& truth, const ClusterLabels& est) {
    if (truth.n() != est.n())
        fail(errc::invalid_argument, "label vectors have different lengths");
    if (truth.k > 64 || est.k > 64) fail(errc::invalid_argument, "accuracy supports at most 64 clusters");

    const int m = std::max(truth.k, est.k);
    std::vector<std::vector<long long>> agree(m, std::vector<long long>(m, 0));
    for (int i = 0; i < truth.n(); ++i) ++agree[est.ids[i] - 1][truth.ids[i] - 1];

    // maximize agreement == minimize (max - agreement)
    long long top = 0;
    for (auto& row : agree)
        for (long long a : row) top = std::max(top, a);
    std::vector<std::vector<long long>> cost(m, std::vector<long long>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) cost[i][j] = top - agree[i][j];

    std::vector<int> match = solve_assignment(cost);
    long long agreed = 0;
    for (int e = 0; e < m; ++e) agreed += agree[e][match[e]];

    AccuracyReport rep;
    rep.accuracy = static_cast<double>(agreed) / truth.n();
    rep.matching.resize(est.k);
    for (int e = 0; e < est.k; ++e) rep.matching[e] = match[e] + 1;
    return rep;
}

ClusterLabels load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open '" + path + "'");

    std::vector<long long> raw;
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        auto v = parse_int(sv);
        if (!v) fail(errc::parse, path + ": line " + std::to_string(lineno) + ": expected an integer label");
        raw.push_back(*v);
    }
    if (raw.empty()) fail(errc::parse, path + ": empty label file");
    return ClusterLabels::compact(raw);
}

} // namespace graphclust
