#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "csv.hpp"
#include "error.hpp"
#include "numfmt.hpp"

namespace graphclust {

DistanceMatrix pairwise_distances(const DataMatrix& x, Metric metric) {
    x.validate();
    const int n = x.rows;
    const int d = x.cols;
    DistanceMatrix dist(n);
    for (int i = 0; i < n; ++i) {
        const double* a = x.row(i);
        for (int j = i + 1; j < n; ++j) {
            const double* b = x.row(j);
            double acc = 0.0;
            if (metric == Metric::manhattan) {
                for (int f = 0; f < d; ++f) acc += std::abs(a[f] - b[f]);
            } else {
                for (int f = 0; f < d; ++f) {
                    double diff = a[f] - b[f];
                    acc += diff * diff;
                }
                if (metric == Metric::euclidean) acc = std::sqrt(acc);
            }
            dist.at(i, j) = acc;
            dist.at(j, i) = acc;
        }
    }
    return dist;
}

int max_feasible_kmst(int n) { return n / 2; }

namespace {

// Lexicographic order on normalized unordered pairs.
bool edge_pair_less(int a1, int a2, int b1, int b2) {
    if (a1 > a2) std::swap(a1, a2);
    if (b1 > b2) std::swap(b1, b2);
    if (a1 != b1) return a1 < b1;
    return a2 < b2;
}

} // namespace

SimilarityGraph build_kmst(const DistanceMatrix& d, int k) {
    if (k < 1) fail(errc::invalid_argument, "K must be >= 1, got " + std::to_string(k));
    d.validate();
    const int n = d.n;
    if (k > max_feasible_kmst(n))
        fail(errc::infeasible, "K-MST with K = " + std::to_string(k) + " infeasible for n = " + std::to_string(n) +
                                   ": max feasible K = " + std::to_string(max_feasible_kmst(n)));

    SimilarityGraph g;
    g.n = n;
    g.edges.reserve(static_cast<std::size_t>(k) * (n - 1));
    std::vector<std::uint8_t> excluded(static_cast<std::size_t>(n) * n, 0);
    auto excl = [&](int a, int b) -> std::uint8_t& { return excluded[static_cast<std::size_t>(a) * n + b]; };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> key(n);
    std::vector<int> parent(n);
    std::vector<char> in_tree(n);

    for (int round = 0; round < k; ++round) {
        std::fill(key.begin(), key.end(), inf);
        std::fill(parent.begin(), parent.end(), -1);
        std::fill(in_tree.begin(), in_tree.end(), 0);

        in_tree[0] = 1;
        for (int v = 1; v < n; ++v) {
            if (!excl(0, v)) {
                key[v] = d.at(0, v);
                parent[v] = 0;
            }
        }

        for (int step = 1; step < n; ++step) {
            int u = -1;
            for (int v = 1; v < n; ++v) {
                if (in_tree[v]) continue;
                if (u == -1 || key[v] < key[u]) u = v;
            }
            if (u == -1 || key[u] == inf)
                fail(errc::infeasible, "graph disconnected while extracting tree " + std::to_string(round + 1) +
                                           " of " + std::to_string(k) +
                                           ": max feasible K for this input = " + std::to_string(round));
            in_tree[u] = 1;
            int a = std::min(parent[u], u), b = std::max(parent[u], u);
            g.edges.push_back({a, b, d.at(a, b)});

            for (int v = 1; v < n; ++v) {
                if (in_tree[v] || excl(u, v)) continue;
                double w = d.at(u, v);
                if (w < key[v] || (w == key[v] && edge_pair_less(u, v, parent[v], v))) {
                    key[v] = w;
                    parent[v] = u;
                }
            }
        }

        for (std::size_t i = g.edges.size() - (n - 1); i < g.edges.size(); ++i) {
            excl(g.edges[i].u, g.edges[i].v) = 1;
            excl(g.edges[i].v, g.edges[i].u) = 1;
        }
    }

    std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    g.recompute_degrees();
    return g;
}

SimilarityGraph build_knn(const DistanceMatrix& d, int k) {
    d.validate();
    const int n = d.n;
    if (k < 1 || k >= n)
        fail(errc::invalid_argument, "K-NN needs 1 <= K <= n-1, got K = " + std::to_string(k) + ", n = " + std::to_string(n));

    std::vector<int> order(n);
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * k);
    for (int u = 0; u < n; ++u) {
        order.clear();
        for (int v = 0; v < n; ++v)
            if (v != u) order.push_back(v);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            double da = d.at(u, a), db = d.at(u, b);
            return da != db ? da < db : a < b;
        });
        for (int i = 0; i < k; ++i) {
            int v = order[i];
            pairs.emplace_back(std::min(u, v), std::max(u, v));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    SimilarityGraph g;
    g.n = n;
    g.edges.reserve(pairs.size());
    for (auto [u, v] : pairs) g.edges.push_back({u, v, d.at(u, v)});
    g.recompute_degrees();
    return g;
}

SimilarityGraph graph_from_edges(int n, const std::vector<EdgeRecord>& records) {
    int max_idx = -1;
    for (const EdgeRecord& r : records) max_idx = std::max({max_idx, r.u, r.v});
    if (n == 0) n = max_idx + 1;
    if (n < 2) fail(errc::invalid_argument, "graph needs at least 2 vertices, got n = " + std::to_string(n));

    std::vector<Edge> edges;
    edges.reserve(records.size());
    long long pos = 0;
    for (const EdgeRecord& r : records) {
        ++pos;
        long long line = r.line > 0 ? r.line : pos;
        if (r.u < 0 || r.v < 0 || r.u >= n || r.v >= n)
            fail(errc::invalid_argument, "vertex index out of range [0," + std::to_string(n) + ") at line " + std::to_string(line));
        if (r.u == r.v) fail(errc::invalid_argument, "self-loop at line " + std::to_string(line));
        edges.push_back({std::min(r.u, r.v), std::max(r.u, r.v), r.has_w ? r.w : 0.0});
    }
    // stable sort keeps the first occurrence of a duplicated pair
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    edges.erase(std::unique(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
                    return a.u == b.u && a.v == b.v;
                }),
                edges.end());

    SimilarityGraph g;
    g.n = n;
    g.edges = std::move(edges);
    g.recompute_degrees();
    g.validate();
    return g;
}

SimilarityGraph read_edge_list(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open '" + path + "'");

    std::vector<EdgeRecord> records;
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;

        EdgeRecord rec;
        rec.line = lineno;
        std::size_t c1 = sv.find(',');
        if (c1 == std::string_view::npos)
            fail(errc::parse, path + ": line " + std::to_string(lineno) + ": expected 'u,v' or 'u,v,w'");
        std::size_t c2 = sv.find(',', c1 + 1);
        auto u = parse_int(sv.substr(0, c1));
        auto v = parse_int(sv.substr(c1 + 1, (c2 == std::string_view::npos ? sv.size() : c2) - c1 - 1));
        if (!u || !v)
            fail(errc::parse, path + ": line " + std::to_string(lineno) + ": cannot parse vertex index");
        rec.u = static_cast<int>(*u);
        rec.v = static_cast<int>(*v);
        if (c2 != std::string_view::npos) {
            auto w = parse_double(sv.substr(c2 + 1));
            if (!w) fail(errc::parse, path + ": line " + std::to_string(lineno) + ": cannot parse weight");
            rec.w = *w;
            rec.has_w = true;
        }
        records.push_back(rec);
    }
    if (records.empty()) fail(errc::parse, path + ": no edges");

    try {
        return graph_from_edges(n, records);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

void write_edge_list(const SimilarityGraph& g, const std::string& path,
                     const std::vector<std::string>& header_comments) {
    std::ostringstream out;
    for (const std::string& c : header_comments) out << "# " << c << "\n";
    for (const Edge& e : g.edges)
        out << e.u << "," << e.v << "," << format_double(e.w) << "\n";
    write_file_atomic(path, out.str());
}

GraphStats graph_stats(const SimilarityGraph& g) {
    g.validate();
    GraphStats s;
    s.size_g = g.num_edges();
    double sum_deg_sq = 0.0;
    for (int t = 0; t < g.n; ++t) {
        double deg = static_cast<double>(g.degrees[t]);
        sum_deg_sq += deg * deg;
    }
    double size = static_cast<double>(s.size_g);
    s.g_c = sum_deg_sq - 4.0 * size * size / g.n;
    s.g_e = 2.0 * size * size / (static_cast<double>(g.n) * (g.n - 1));
    return s;
}

} // namespace graphclust
