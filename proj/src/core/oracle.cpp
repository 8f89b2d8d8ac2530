#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace graphclust {

double multinomial_count(int n, const std::vector<int>& sizes) {
    long long total = 0;
    for (int s : sizes) {
        if (s < 1) fail(errc::invalid_argument, "cluster sizes must be >= 1");
        total += s;
    }
    if (total != n) fail(errc::invalid_argument, "cluster sizes must sum to n");

    double count = 1.0;
    int remaining = n;
    for (int s : sizes) {
        for (int i = 0; i < s; ++i) {
            count *= static_cast<double>(remaining - i) / (s - i);
            if (count > 1e15) return std::numeric_limits<double>::infinity();
        }
        remaining -= s;
    }
    return std::round(count);
}

namespace {

std::vector<int> canonical_labels(const std::vector<int>& sizes) {
    std::vector<int> labels;
    for (std::size_t j = 0; j < sizes.size(); ++j)
        labels.insert(labels.end(), sizes[j], static_cast<int>(j));
    return labels;
}

void count_within(const SimilarityGraph& g, const std::vector<int>& labels, std::vector<double>& r) {
    std::fill(r.begin(), r.end(), 0.0);
    for (const Edge& e : g.edges) {
        int lu = labels[e.u];
        if (lu == labels[e.v]) r[lu] += 1.0;
    }
}

} // namespace

OracleEstimate exhaustive_moments(const SimilarityGraph& g, const std::vector<int>& sizes, double limit) {
    g.validate();
    const int k = static_cast<int>(sizes.size());
    double count = multinomial_count(g.n, sizes);
    if (count > limit)
        fail(errc::infeasible, "placement count " + std::to_string(count) + " exceeds exhaustive limit " +
                                   std::to_string(limit) + "; use Monte Carlo");

    std::vector<double> inv_size(k);
    for (int j = 0; j < k; ++j) inv_size[j] = 1.0 / sizes[j];

    OracleEstimate est;
    est.exhaustive = true;
    est.cluster_mean.assign(k, 0.0);
    est.cluster_var.assign(k, 0.0);
    est.cluster_cov.assign(k, std::vector<double>(k, 0.0));

    // pass 1: means
    std::vector<int> labels = canonical_labels(sizes);
    std::vector<double> r(k);
    std::vector<long double> sum_r(k, 0.0L);
    long double sum_w = 0.0L;
    std::uint64_t m = 0;
    do {
        count_within(g, labels, r);
        double w = 0.0;
        for (int j = 0; j < k; ++j) {
            sum_r[j] += r[j];
            w += r[j] * inv_size[j];
        }
        sum_w += w;
        ++m;
    } while (std::next_permutation(labels.begin(), labels.end()));

    if (static_cast<double>(m) != count) fail(errc::internal, "placement enumeration count mismatch");
    est.draws = m;
    for (int j = 0; j < k; ++j) est.cluster_mean[j] = static_cast<double>(sum_r[j] / m);
    est.weighted_mean = static_cast<double>(sum_w / m);

    // pass 2: central second moments (population, matching the finite null)
    labels = canonical_labels(sizes);
    std::vector<std::vector<long double>> comoment(k, std::vector<long double>(k, 0.0L));
    long double w_central = 0.0L;
    do {
        count_within(g, labels, r);
        double w = 0.0;
        for (int j = 0; j < k; ++j) w += r[j] * inv_size[j];
        for (int i = 0; i < k; ++i) {
            double di = r[i] - est.cluster_mean[i];
            for (int j = i; j < k; ++j) comoment[i][j] += static_cast<long double>(di) * (r[j] - est.cluster_mean[j]);
        }
        long double dw = w - est.weighted_mean;
        w_central += dw * dw;
    } while (std::next_permutation(labels.begin(), labels.end()));

    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            double cov = static_cast<double>(comoment[i][j] / m);
            est.cluster_cov[i][j] = cov;
            est.cluster_cov[j][i] = cov;
        }
        est.cluster_var[i] = est.cluster_cov[i][i];
    }
    est.weighted_var = static_cast<double>(w_central / m);
    return est;
}

namespace {

/// Welford accumulator over (R_1..R_k, W): co-moment matrix for the R block
/// plus third/fourth central moments per track for variance standard errors.
/// Combining is exact in any bracketing but is always done in batch order.
struct MomentAccum {
    std::uint64_t m = 0;
    std::vector<double> mean;     // k+1
    std::vector<double> comoment; // k*k, row-major
    std::vector<double> m2, m3, m4;

    explicit MomentAccum(int k) : mean(k + 1, 0.0), comoment(static_cast<std::size_t>(k) * k, 0.0), m2(k + 1, 0.0), m3(k + 1, 0.0), m4(k + 1, 0.0) {}

    void add(const std::vector<double>& x, int k) {
        const double n1 = static_cast<double>(m);
        ++m;
        const double inv_m = 1.0 / static_cast<double>(m);

        // univariate tracks
        for (int t = 0; t <= k; ++t) {
            double d = x[t] - mean[t];
            double d_n = d * inv_m;
            double d_n2 = d_n * d_n;
            double term1 = d * d_n * n1;
            m4[t] += term1 * d_n2 * (static_cast<double>(m) * m - 3.0 * m + 3.0) + 6.0 * d_n2 * m2[t] - 4.0 * d_n * m3[t];
            m3[t] += term1 * d_n * (static_cast<double>(m) - 2.0) - 3.0 * d_n * m2[t];
            m2[t] += term1;
        }
        // co-moments over the R block (pre-update deltas x post-update deltas)
        std::vector<double> pre(k);
        for (int t = 0; t < k; ++t) pre[t] = x[t] - mean[t];
        for (int t = 0; t <= k; ++t) mean[t] += (x[t] - mean[t]) * inv_m;
        for (int i = 0; i < k; ++i) {
            double post_i = x[i] - mean[i];
            for (int j = 0; j < k; ++j) comoment[static_cast<std::size_t>(i) * k + j] += pre[j] * post_i;
        }
    }

    void combine(const MomentAccum& b, int k) {
        if (b.m == 0) return;
        if (m == 0) {
            *this = b;
            return;
        }
        const double ma = static_cast<double>(m), mb = static_cast<double>(b.m);
        const double mt = ma + mb;
        for (int i = 0; i < k; ++i) {
            double di = b.mean[i] - mean[i];
            for (int j = 0; j < k; ++j) {
                double dj = b.mean[j] - mean[j];
                comoment[static_cast<std::size_t>(i) * k + j] +=
                    b.comoment[static_cast<std::size_t>(i) * k + j] + di * dj * ma * mb / mt;
            }
        }
        for (int t = 0; t <= k; ++t) {
            double d = b.mean[t] - mean[t];
            double d2 = d * d;
            double m2a = m2[t], m2b = b.m2[t], m3a = m3[t], m3b = b.m3[t];
            m4[t] += b.m4[t] + d2 * d2 * ma * mb * (ma * ma - ma * mb + mb * mb) / (mt * mt * mt) +
                     6.0 * d2 * (ma * ma * m2b + mb * mb * m2a) / (mt * mt) + 4.0 * d * (ma * m3b - mb * m3a) / mt;
            m3[t] += m3b + d * d2 * ma * mb * (ma - mb) / (mt * mt) + 3.0 * d * (ma * m2b - mb * m2a) / mt;
            m2[t] += m2b + d2 * ma * mb / mt;
            mean[t] += d * mb / mt;
        }
        m += b.m;
    }
};

} // namespace

OracleEstimate mc_moments(const SimilarityGraph& g, const std::vector<int>& sizes, std::uint64_t draws,
                          std::uint64_t seed) {
    g.validate();
    if (draws < 1000) fail(errc::invalid_argument, "Monte Carlo needs at least 1000 draws");
    const int k = static_cast<int>(sizes.size());
    long long total = 0;
    for (int s : sizes) total += s;
    if (total != g.n) fail(errc::invalid_argument, "cluster sizes must sum to n");

    std::vector<double> inv_size(k);
    for (int j = 0; j < k; ++j) inv_size[j] = 1.0 / sizes[j];

    constexpr std::uint64_t batch_size = 8192;
    const std::size_t batches = static_cast<std::size_t>((draws + batch_size - 1) / batch_size);
    std::vector<MomentAccum> acc(batches, MomentAccum(k));

    parallel_for(batches, [&](std::size_t b) {
        Rng rng(derive_seed(seed, b));
        std::vector<int> labels = canonical_labels(sizes);
        std::vector<double> r(k);
        std::vector<double> x(k + 1);
        std::uint64_t lo = static_cast<std::uint64_t>(b) * batch_size;
        std::uint64_t hi = std::min(draws, lo + batch_size);
        for (std::uint64_t i = lo; i < hi; ++i) {
            rng.shuffle(labels);
            count_within(g, labels, r);
            double w = 0.0;
            for (int j = 0; j < k; ++j) {
                x[j] = r[j];
                w += r[j] * inv_size[j];
            }
            x[k] = w;
            acc[b].add(x, k);
        }
    });

    MomentAccum all(k);
    for (const MomentAccum& a : acc) all.combine(a, k);

    const double m = static_cast<double>(all.m);
    OracleEstimate est;
    est.exhaustive = false;
    est.draws = all.m;
    est.cluster_mean.assign(k, 0.0);
    est.cluster_var.assign(k, 0.0);
    est.cluster_cov.assign(k, std::vector<double>(k, 0.0));
    est.cluster_mean_se.assign(k, 0.0);
    est.cluster_var_se.assign(k, 0.0);

    auto var_se = [&](double m2t, double m4t) {
        double sigma2 = m2t / m;
        double mu4 = m4t / m;
        double v = (mu4 - sigma2 * sigma2 * (m - 3.0) / (m - 1.0)) / m;
        return std::sqrt(std::max(v, 0.0));
    };

    for (int i = 0; i < k; ++i) {
        est.cluster_mean[i] = all.mean[i];
        for (int j = 0; j < k; ++j) est.cluster_cov[i][j] = all.comoment[static_cast<std::size_t>(i) * k + j] / (m - 1.0);
        est.cluster_var[i] = est.cluster_cov[i][i];
        est.cluster_mean_se[i] = std::sqrt(std::max(est.cluster_var[i], 0.0) / m);
        est.cluster_var_se[i] = var_se(all.m2[i], all.m4[i]);
    }
    est.weighted_mean = all.mean[k];
    est.weighted_var = all.m2[k] / (m - 1.0);
    est.weighted_mean_se = std::sqrt(std::max(est.weighted_var, 0.0) / m);
    est.weighted_var_se = var_se(all.m2[k], all.m4[k]);
    return est;
}

} // namespace graphclust
