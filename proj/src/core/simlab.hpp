#ifndef GRAPHCLUST_SIMLAB_HPP
#define GRAPHCLUST_SIMLAB_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace graphclust {

/// Generator settings for one synthetic scenario. Parameters are
/// reconstructions of a published study design (the original constants are
/// not recoverable); run metadata flags them as such.
struct ScenarioSpec {
    std::string id; // I..V or null
    std::vector<int> sizes;
    int dim = 400;
    double delta = 0.0;
    std::vector<double> scales;
    double rho = 0.0;
    std::vector<double> rates;
    std::uint64_t seed = 0;

    int true_k() const { return static_cast<int>(sizes.size()); }
    int n() const;
    void validate() const;
};

/// Parses the key-value scenario config format. Unknown keys are rejected.
std::map<std::string, ScenarioSpec> parse_scenario_config(const std::string& text, int* version = nullptr);

/// Scenario from the configuration compiled in from config/scenarios.cfg.
ScenarioSpec scenario_defaults(const std::string& id);

/// Scenario from a user-supplied config file.
ScenarioSpec scenario_from_file(const std::string& path, const std::string& id);

/// Draws the scenario's data matrix and ground-truth labels; byte-identical
/// for a fixed spec (seed included).
std::pair<DataMatrix, ClusterLabels> generate(const ScenarioSpec& spec);

/// Mean silhouette width of a labeling; silhouette of singleton-cluster
/// points is defined as 0.
double mean_silhouette(const DistanceMatrix& d, const ClusterLabels& labels);

/// argmax of mean silhouette width over the supplied per-k labelings
/// (smallest k on ties).
int silhouette_choose_k(const DistanceMatrix& d, const std::map<int, ClusterLabels>& labels_per_k);

struct RepDetail {
    int rep = 0;
    std::uint64_t seed = 0;
    std::map<std::string, int> chosen; // method -> chosen k (0 = none)
    double accuracy_true_k = 0.0;
    int graph_builds = 0;
    bool failed = false;
    std::string error;
};

struct MethodTable {
    std::string method;
    std::vector<long long> counts; // counts[k] = selections of k, counts[0] = none
    long long replicates = 0;
    long long failures = 0;
};

struct SimReport {
    ScenarioSpec spec;
    int reps = 0;
    int kmin = 2;
    int kmax = 10;
    int graph_k = 10;
    std::vector<MethodTable> tables;
    std::vector<RepDetail> details;
    double mean_accuracy_true_k = 0.0;
    long long failures = 0;

    const MethodTable& table(const std::string& method) const;
    std::string to_csv() const;
    std::string to_json() const;
};

/// Runs seeded replicates of generate -> cluster per k -> evaluate each
/// method. The similarity graph is built exactly once per replicate and
/// reused across all k. Replicate failures are tallied, not fatal.
SimReport run_replicates(const ScenarioSpec& spec, const std::vector<std::string>& methods, int reps,
                         int kmin, int kmax, int graph_k);

} // namespace graphclust

#endif
