#include "edgecount.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "numfmt.hpp"
#include "parallel.hpp"

namespace graphclust {

std::vector<long long> within_counts(const SimilarityGraph& g, const ClusterLabels& labels) {
    if (labels.n() != g.n)
        fail(errc::invalid_argument, "label vector length " + std::to_string(labels.n()) +
                                         " does not match graph vertex count " + std::to_string(g.n));
    std::vector<long long> r(labels.k, 0);
    for (const Edge& e : g.edges) {
        int lu = labels.ids[e.u];
        if (lu == labels.ids[e.v]) ++r[lu - 1];
    }
    return r;
}

NullMoments null_moments(const GraphStats& stats, int n, const std::vector<int>& sizes) {
    const int k = static_cast<int>(sizes.size());
    if (k < 1) fail(errc::invalid_argument, "need at least one cluster size");
    long long total = 0;
    for (int s : sizes) {
        if (s < 1) fail(errc::invalid_argument, "cluster sizes must be >= 1");
        total += s;
    }
    if (total != n) fail(errc::invalid_argument, "cluster sizes sum to " + std::to_string(total) + ", expected n = " + std::to_string(n));

    const double size_g = static_cast<double>(stats.size_g);
    NullMoments m;
    m.cluster_mean.resize(k);
    m.cluster_var.assign(k, 0.0);
    m.cluster_cov.assign(k, std::vector<double>(k, 0.0));

    const double nn = static_cast<double>(n);
    for (int i = 0; i < k; ++i) {
        double ni = sizes[i];
        m.cluster_mean[i] = size_g * ni * (ni - 1.0) / (nn * (nn - 1.0));
    }

    if (k == 1) {
        // single assignment up to renaming: R_1 = |G| identically
        m.cluster_cov[0][0] = 0.0;
        m.weighted_mean = m.cluster_mean[0] / sizes[0];
        m.weighted_var = 0.0;
        return m;
    }
    if (n < 4)
        fail(errc::invalid_argument, "n < 4: null variance undefined (n = " + std::to_string(n) + ")");

    const double denom = nn * (nn - 1.0) * (nn - 2.0) * (nn - 3.0);
    for (int i = 0; i < k; ++i) {
        double ni = sizes[i];
        // (n - n_i - 1) folded into the bracket so n_i = n - 1 stays finite
        double prefix = ni * (ni - 1.0) * (nn - ni) / denom;
        double bracket = (nn - ni - 1.0) * (size_g - stats.g_e) + (ni - 2.0) * stats.g_c;
        m.cluster_var[i] = prefix * bracket;
        m.cluster_cov[i][i] = m.cluster_var[i];
    }
    const double cov_bracket = size_g - stats.g_c - stats.g_e;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            double ni = sizes[i], nj = sizes[j];
            double cov = ni * nj * (ni - 1.0) * (nj - 1.0) / denom * cov_bracket;
            m.cluster_cov[i][j] = cov;
            m.cluster_cov[j][i] = cov;
        }
    }

    double we = 0.0, wv = 0.0;
    for (int i = 0; i < k; ++i) {
        double inv = 1.0 / sizes[i];
        we += inv * m.cluster_mean[i];
        wv += inv * inv * m.cluster_var[i];
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            wv += 2.0 * m.cluster_cov[i][j] / (static_cast<double>(sizes[i]) * sizes[j]);
    m.weighted_mean = we;
    m.weighted_var = wv;

    double tol = 1e-12 * size_g * size_g;
    for (int i = 0; i < k; ++i) {
        if (m.cluster_var[i] < -tol)
            fail(errc::internal, "negative per-cluster null variance");
        if (m.cluster_var[i] < 0.0) m.cluster_var[i] = 0.0;
    }
    if (m.weighted_var < -tol) fail(errc::internal, "negative weighted null variance");
    if (m.weighted_var < 0.0) m.weighted_var = 0.0;
    return m;
}

double variance_floor(long long size_g, int n) {
    double ratio = static_cast<double>(size_g) / n;
    return 1e-10 * std::max(1.0, ratio * ratio);
}

QRecord q_statistic(const SimilarityGraph& g, const ClusterLabels& labels) {
    labels.validate();
    GraphStats stats = graph_stats(g);
    std::vector<long long> r = within_counts(g, labels);
    NullMoments m = null_moments(stats, g.n, labels.sizes);

    QRecord rec;
    rec.k = labels.k;
    double w = 0.0;
    for (int j = 0; j < labels.k; ++j) w += static_cast<double>(r[j]) / labels.sizes[j];
    rec.w = w;
    rec.e = m.weighted_mean;
    rec.var = m.weighted_var;

    if (rec.var <= variance_floor(stats.size_g, g.n)) {
        rec.valid = false;
        rec.reason = "degenerate-variance";
        rec.q = 0.0;
        rec.z = 0.0;
        return rec;
    }
    double dev = rec.w - rec.e;
    rec.z = dev / std::sqrt(rec.var);
    rec.q = rec.z * rec.z;
    rec.valid = true;
    return rec;
}

QProfile estimate_k(const SimilarityGraph& g, const Labeler& labeler, int kmin, int kmax) {
    if (kmin < 2) fail(errc::invalid_argument, "kmin must be >= 2 (k = 1 has zero null variance)");
    if (kmin > kmax) fail(errc::invalid_argument, "kmin > kmax");
    if (kmax > g.n - 1) fail(errc::invalid_argument, "kmax must be <= n-1");
    if (g.n < 4) fail(errc::invalid_argument, "n < 4: null variance undefined");

    QProfile profile;
    profile.records.resize(kmax - kmin + 1);

    parallel_for(profile.records.size(), [&](std::size_t idx) {
        int k = kmin + static_cast<int>(idx);
        QRecord& rec = profile.records[idx];
        rec.k = k;
        try {
            ClusterLabels labels = labeler(k);
            if (labels.n() != g.n) {
                rec.valid = false;
                rec.reason = "clusterer-failure";
                return;
            }
            for (int s : labels.sizes) {
                if (s < 1) {
                    rec.valid = false;
                    rec.reason = "empty-cluster";
                    return;
                }
            }
            rec = q_statistic(g, labels);
            rec.k = k; // labeler may return fewer clusters than requested
        } catch (const std::exception&) {
            rec.valid = false;
            rec.reason = "clusterer-failure";
        }
    });

    int best = 0;
    double best_q = -1.0;
    for (const QRecord& rec : profile.records) {
        if (rec.valid && rec.q > best_q) {
            best_q = rec.q;
            best = rec.k;
        }
    }
    profile.chosen_k = best;
    if (best == 0) {
        std::map<std::string, int> reasons;
        for (const QRecord& rec : profile.records) ++reasons[rec.reason];
        std::ostringstream why;
        why << "no valid k in [" << kmin << "," << kmax << "]:";
        for (auto& [reason, count] : reasons) why << " " << reason << " x" << count;
        profile.failure_reason = why.str();
    }
    return profile;
}

namespace {

nlohmann::ordered_json record_to_json(const QRecord& r) {
    nlohmann::ordered_json j;
    j["k"] = r.k;
    j["W"] = r.w;
    j["E"] = r.e;
    j["var"] = r.var;
    if (r.valid) {
        j["Q"] = r.q;
        j["z"] = r.z;
    } else {
        j["Q"] = nullptr;
        j["z"] = nullptr;
    }
    j["valid"] = r.valid;
    j["reason"] = r.reason;
    return j;
}

} // namespace

std::string profile_to_json(const QProfile& p, const std::map<std::string, std::string>& meta) {
    nlohmann::ordered_json j;
    if (p.chosen_k > 0)
        j["chosen_k"] = p.chosen_k;
    else {
        j["chosen_k"] = nullptr;
        j["failure_reason"] = p.failure_reason;
    }
    j["records"] = nlohmann::ordered_json::array();
    for (const QRecord& r : p.records) j["records"].push_back(record_to_json(r));
    if (!meta.empty()) {
        nlohmann::ordered_json cfg;
        for (auto& [key, value] : meta) cfg[key] = value;
        j["config"] = cfg;
    }
    return j.dump(2) + "\n";
}

std::string profile_to_csv(const QProfile& p, const std::map<std::string, std::string>& meta) {
    std::ostringstream out;
    for (auto& [key, value] : meta) out << "# " << key << "=" << value << "\n";
    out << "# chosen_k=" << (p.chosen_k > 0 ? std::to_string(p.chosen_k) : "none") << "\n";
    out << "k,W,E,var,Q,z,valid,reason\n";
    for (const QRecord& r : p.records) {
        out << r.k << "," << format_double(r.w) << "," << format_double(r.e) << "," << format_double(r.var) << ",";
        if (r.valid)
            out << format_double(r.q) << "," << format_double(r.z);
        else
            out << ",";
        out << "," << (r.valid ? "true" : "false") << "," << r.reason << "\n";
    }
    return out.str();
}

} // namespace graphclust
