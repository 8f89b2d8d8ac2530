#include "simlab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cluster.hpp"
#include "edgecount.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "numfmt.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "scenario_defaults.hpp"

namespace graphclust {

int ScenarioSpec::n() const {
    int total = 0;
    for (int s : sizes) total += s;
    return total;
}

void ScenarioSpec::validate() const {
    if (id != "I" && id != "II" && id != "III" && id != "IV" && id != "V" && id != "null")
        fail(errc::invalid_argument, "unknown scenario '" + id + "'");
    if (sizes.empty()) fail(errc::invalid_argument, "scenario has no cluster sizes");
    for (int s : sizes)
        if (s < 1) fail(errc::invalid_argument, "scenario cluster sizes must be >= 1");
    if (dim < 1) fail(errc::invalid_argument, "scenario dimension must be >= 1");
    if (!scales.empty() && scales.size() != sizes.size())
        fail(errc::invalid_argument, "scales must match cluster count");
    if (!rates.empty() && rates.size() != sizes.size())
        fail(errc::invalid_argument, "rates must match cluster count");
    if (id == "V" && rates.empty()) fail(errc::invalid_argument, "scenario V needs exponential rates");
    if (rho < 0.0 || rho >= 1.0) fail(errc::invalid_argument, "rho must be in [0, 1)");
}

namespace {

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= value.size(); ++i) {
        if (i == value.size() || value[i] == ',') {
            out.emplace_back(trim(value.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

} // namespace

std::map<std::string, ScenarioSpec> parse_scenario_config(const std::string& text, int* version) {
    std::map<std::string, ScenarioSpec> specs;
    std::istringstream in(text);
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        std::size_t eq = sv.find('=');
        if (eq == std::string_view::npos)
            fail(errc::parse, "scenario config line " + std::to_string(lineno) + ": expected key = value");
        std::string key(trim(sv.substr(0, eq)));
        std::string value(trim(sv.substr(eq + 1)));

        if (key == "version") {
            auto v = parse_int(value);
            if (!v) fail(errc::parse, "scenario config line " + std::to_string(lineno) + ": bad version");
            if (version) *version = static_cast<int>(*v);
            continue;
        }
        if (key.rfind("scenario.", 0) != 0)
            fail(errc::parse, "scenario config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        std::size_t dot = key.find('.', 9);
        if (dot == std::string::npos)
            fail(errc::parse, "scenario config line " + std::to_string(lineno) + ": expected scenario.<id>.<field>");
        std::string id = key.substr(9, dot - 9);
        std::string field = key.substr(dot + 1);
        ScenarioSpec& spec = specs[id];
        spec.id = id;

        auto as_doubles = [&](const std::string& v) {
            std::vector<double> out;
            for (const std::string& item : split_list(v)) {
                auto d = parse_double(item);
                if (!d) fail(errc::parse, "scenario config line " + std::to_string(lineno) + ": bad number '" + item + "'");
                out.push_back(*d);
            }
            return out;
        };

        if (field == "sizes") {
            spec.sizes.clear();
            for (double d : as_doubles(value)) spec.sizes.push_back(static_cast<int>(d));
        } else if (field == "dim") {
            auto v = parse_int(value);
            if (!v) fail(errc::parse, "scenario config line " + std::to_string(lineno) + ": bad dim");
            spec.dim = static_cast<int>(*v);
        } else if (field == "delta") {
            auto v = parse_double(value);
            if (!v) fail(errc::parse, "scenario config line " + std::to_string(lineno) + ": bad delta");
            spec.delta = *v;
        } else if (field == "scales") {
            spec.scales = as_doubles(value);
        } else if (field == "rho") {
            auto v = parse_double(value);
            if (!v) fail(errc::parse, "scenario config line " + std::to_string(lineno) + ": bad rho");
            spec.rho = *v;
        } else if (field == "rates") {
            spec.rates = as_doubles(value);
        } else {
            fail(errc::parse, "scenario config line " + std::to_string(lineno) + ": unknown field '" + field + "'");
        }
    }
    return specs;
}

ScenarioSpec scenario_defaults(const std::string& id) {
    static const std::map<std::string, ScenarioSpec> table = parse_scenario_config(kDefaultScenarioConfig);
    auto it = table.find(id);
    if (it == table.end()) fail(errc::invalid_argument, "unknown scenario '" + id + "'");
    ScenarioSpec spec = it->second;
    spec.validate();
    return spec;
}

ScenarioSpec scenario_from_file(const std::string& path, const std::string& id) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    auto table = parse_scenario_config(text.str());
    auto it = table.find(id);
    if (it == table.end()) fail(errc::invalid_argument, path + ": no scenario '" + id + "'");
    ScenarioSpec spec = it->second;
    spec.validate();
    return spec;
}

std::pair<DataMatrix, ClusterLabels> generate(const ScenarioSpec& spec) {
    spec.validate();
    const int k = spec.true_k();
    const int d = spec.dim;
    const int n = spec.n();

    // centers: cluster 1 at the origin, cluster j > 1 shifted by delta along
    // its own block of coordinates (blocks partition [0, d) into k-1 pieces)
    std::vector<std::vector<double>> centers(k, std::vector<double>(d, 0.0));
    if (k > 1 && spec.delta > 0.0 && spec.rates.empty()) {
        int blocks = k - 1;
        int width = std::max(1, d / blocks);
        for (int j = 1; j < k; ++j) {
            int lo = (j - 1) * width;
            int hi = std::min(d, lo + width);
            if (lo >= d) { lo = d - 1; hi = d; } // degenerate small-d fallback
            double per_coord = spec.delta / std::sqrt(static_cast<double>(hi - lo));
            for (int f = lo; f < hi; ++f) centers[j][f] = per_coord;
        }
    }
    if (!spec.rates.empty() && spec.delta > 0.0) {
        double per_coord = spec.delta / std::sqrt(static_cast<double>(d));
        for (int f = 0; f < d; ++f) centers[k - 1][f] = per_coord;
    }

    DataMatrix x(n, d);
    std::vector<int> ids(n);
    Rng rng(spec.seed);
    const double ar_noise = std::sqrt(1.0 - spec.rho * spec.rho);

    int row = 0;
    for (int j = 0; j < k; ++j) {
        double scale = spec.scales.empty() ? 1.0 : spec.scales[j];
        for (int i = 0; i < spec.sizes[j]; ++i, ++row) {
            double* p = x.row(row);
            ids[row] = j + 1;
            if (!spec.rates.empty()) {
                double rate = spec.rates[j];
                for (int f = 0; f < d; ++f) p[f] = centers[j][f] + rng.exponential(rate);
            } else if (spec.rho > 0.0) {
                double e = rng.normal();
                p[0] = centers[j][0] + scale * e;
                for (int f = 1; f < d; ++f) {
                    e = spec.rho * e + ar_noise * rng.normal();
                    p[f] = centers[j][f] + scale * e;
                }
            } else {
                for (int f = 0; f < d; ++f) p[f] = centers[j][f] + scale * rng.normal();
            }
        }
    }
    return {std::move(x), ClusterLabels::from_ids(std::move(ids))};
}

double mean_silhouette(const DistanceMatrix& d, const ClusterLabels& labels) {
    if (labels.n() != d.n) fail(errc::invalid_argument, "labels do not match distance matrix");
    const int n = d.n;
    const int k = labels.k;
    if (k < 2) fail(errc::invalid_argument, "silhouette needs k >= 2");

    double total = 0.0;
    std::vector<double> sums(k);
    for (int i = 0; i < n; ++i) {
        int own = labels.ids[i] - 1;
        if (labels.sizes[own] <= 1) continue; // singleton: s(i) = 0
        std::fill(sums.begin(), sums.end(), 0.0);
        for (int j = 0; j < n; ++j)
            if (j != i) sums[labels.ids[j] - 1] += d.at(i, j);
        double a = sums[own] / (labels.sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == own) continue;
            b = std::min(b, sums[c] / labels.sizes[c]);
        }
        double m = std::max(a, b);
        if (m > 0.0) total += (b - a) / m;
    }
    return total / n;
}

int silhouette_choose_k(const DistanceMatrix& d, const std::map<int, ClusterLabels>& labels_per_k) {
    int best_k = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [k, labels] : labels_per_k) {
        if (k < 2) continue;
        double width = mean_silhouette(d, labels);
        if (width > best) {
            best = width;
            best_k = k;
        }
    }
    return best_k;
}

const MethodTable& SimReport::table(const std::string& method) const {
    for (const MethodTable& t : tables)
        if (t.method == method) return t;
    fail(errc::invalid_argument, "no table for method '" + method + "'");
}

SimReport run_replicates(const ScenarioSpec& spec, const std::vector<std::string>& methods, int reps,
                         int kmin, int kmax, int graph_k) {
    spec.validate();
    if (reps < 1) fail(errc::invalid_argument, "reps must be >= 1");
    if (kmin < 1 || kmin > kmax) fail(errc::invalid_argument, "invalid k range");
    for (const std::string& m : methods)
        if (m != "graph-based" && m != "silhouette")
            fail(errc::invalid_argument, "unknown method '" + m + "' (expected graph-based or silhouette)");

    SimReport report;
    report.spec = spec;
    report.reps = reps;
    report.kmin = kmin;
    report.kmax = kmax;
    report.graph_k = graph_k;
    report.details.resize(reps);

    const int gb_kmin = std::max(2, kmin); // k = 1 is not applicable to either method
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
        RepDetail& det = report.details[r];
        det.rep = static_cast<int>(r);
        det.seed = derive_seed(spec.seed, r);
        try {
            ScenarioSpec local = spec;
            local.seed = det.seed;
            auto [x, truth] = generate(local);
            DistanceMatrix d = pairwise_distances(x, Metric::euclidean);

            SimilarityGraph g = build_kmst(d, graph_k);
            ++det.graph_builds;

            std::map<int, ClusterLabels> labels_per_k;
            for (int k = gb_kmin; k <= kmax; ++k) {
                KMeansConfig cfg;
                cfg.k = k;
                cfg.seed = derive_seed(det.seed, 1000 + k);
                labels_per_k.emplace(k, kmeans(x, cfg));
            }

            for (const std::string& method : methods) {
                if (method == "graph-based") {
                    QProfile profile = estimate_k(
                        g, [&](int k) { return labels_per_k.at(k); }, gb_kmin, kmax);
                    det.chosen[method] = profile.chosen_k;
                } else {
                    det.chosen[method] = silhouette_choose_k(d, labels_per_k);
                }
            }

            int tk = spec.true_k();
            if (tk >= gb_kmin && tk <= kmax) {
                det.accuracy_true_k = accuracy(truth, labels_per_k.at(tk)).accuracy;
            } else {
                det.accuracy_true_k = 1.0; // k = 1: single cluster is trivially recovered
            }
        } catch (const std::exception& e) {
            det.failed = true;
            det.error = e.what();
        }
    });

    double acc_sum = 0.0;
    long long ok = 0;
    for (const std::string& method : methods) {
        MethodTable t;
        t.method = method;
        t.counts.assign(kmax + 1, 0);
        t.replicates = reps;
        for (const RepDetail& det : report.details) {
            if (det.failed) {
                ++t.failures;
                continue;
            }
            int c = det.chosen.at(method);
            ++t.counts[(c >= 1 && c <= kmax) ? c : 0];
        }
        report.tables.push_back(std::move(t));
    }
    for (const RepDetail& det : report.details) {
        if (det.failed) {
            ++report.failures;
            continue;
        }
        acc_sum += det.accuracy_true_k;
        ++ok;
    }
    report.mean_accuracy_true_k = ok > 0 ? acc_sum / ok : 0.0;
    return report;
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

} // namespace

std::string SimReport::to_csv() const {
    std::ostringstream out;
    out << "# graphclust simulate schema=1\n";
    out << "# scenario=" << spec.id << " seed=" << spec.seed << " reps=" << reps << " kmin=" << kmin
        << " kmax=" << kmax << " graph_k=" << graph_k << "\n";
    out << "# sizes=" << join_ints(spec.sizes) << " dim=" << spec.dim << " delta=" << format_double(spec.delta);
    if (!spec.scales.empty()) out << " scales=" << join_doubles(spec.scales);
    if (spec.rho > 0.0) out << " rho=" << format_double(spec.rho);
    if (!spec.rates.empty()) out << " rates=" << join_doubles(spec.rates);
    out << "\n";
    out << "# parameters=reconstructed\n";
    out << "# mean_accuracy_at_true_k=" << format_double(mean_accuracy_true_k) << "\n";
    out << "method";
    for (int k = 1; k <= kmax; ++k) out << ",k=" << k;
    out << ",none,failures\n";
    for (const MethodTable& t : tables) {
        out << t.method;
        for (int k = 1; k <= kmax; ++k) out << "," << t.counts[k];
        out << "," << t.counts[0] << "," << t.failures << "\n";
    }
    return out.str();
}

std::string SimReport::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json cfg;
    cfg["scenario"] = spec.id;
    cfg["sizes"] = spec.sizes;
    cfg["dim"] = spec.dim;
    cfg["delta"] = spec.delta;
    if (!spec.scales.empty()) cfg["scales"] = spec.scales;
    if (spec.rho > 0.0) cfg["rho"] = spec.rho;
    if (!spec.rates.empty()) cfg["rates"] = spec.rates;
    cfg["true_k"] = spec.true_k();
    cfg["seed"] = spec.seed;
    cfg["reps"] = reps;
    cfg["kmin"] = kmin;
    cfg["kmax"] = kmax;
    cfg["graph_k"] = graph_k;
    cfg["parameters"] = "reconstructed";
    j["config"] = cfg;
    j["mean_accuracy_at_true_k"] = mean_accuracy_true_k;
    j["failures"] = failures;

    j["tables"] = nlohmann::ordered_json::array();
    for (const MethodTable& t : tables) {
        nlohmann::ordered_json tj;
        tj["method"] = t.method;
        nlohmann::ordered_json counts;
        for (int k = 1; k <= kmax; ++k) counts["k=" + std::to_string(k)] = t.counts[k];
        counts["none"] = t.counts[0];
        tj["counts"] = counts;
        tj["replicates"] = t.replicates;
        tj["failures"] = t.failures;
        j["tables"].push_back(tj);
    }

    j["replicates"] = nlohmann::ordered_json::array();
    for (const RepDetail& det : details) {
        nlohmann::ordered_json dj;
        dj["rep"] = det.rep;
        dj["seed"] = det.seed;
        if (det.failed) {
            dj["failed"] = true;
            dj["error"] = det.error;
        } else {
            nlohmann::ordered_json chosen;
            for (const auto& [method, k] : det.chosen) chosen[method] = k;
            dj["chosen"] = chosen;
            dj["accuracy_at_true_k"] = det.accuracy_true_k;
            dj["graph_builds"] = det.graph_builds;
        }
        j["replicates"].push_back(dj);
    }
    return j.dump(2) + "\n";
}

} // namespace graphclust
