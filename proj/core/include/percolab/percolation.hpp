#pragma once
#include <functional>

#include "percolab/graphs.hpp"

namespace percolab {

enum class ComponentShape { isolated, path, cycle, other };

struct ClusterReport {
    std::vector<int> component_of;     // per vertex
    std::vector<int> component_sizes;  // indexed by component id
    std::vector<ComponentShape> component_shapes;
    double largest_fraction = 0.0;
    std::vector<long> degree_histogram;  // index = degree

    int n_components() const { return static_cast<int>(component_sizes.size()); }
};

ClusterReport components(const SpatialGraph& graph);

struct CrossingResult {
    int axis = 0;
    bool crossed = false;
    int component = -1;  // crossing component id, -1 if none
    double delta = 0.0;
};

// True iff some component has a vertex within delta of each opposite face of
// the window along `axis`. Hard-boundary windows only.
CrossingResult crossing_probe(const SpatialGraph& graph, const PointConfiguration& config,
                              int axis, double delta);

struct PathCycleCensus {
    long paths = 0, cycles = 0, isolated = 0, other = 0;
};

PathCycleCensus path_cycle_census(const SpatialGraph& graph);

// true iff edges(g1) is a subset of edges(g2); throws on vertex-set mismatch
bool check_subgraph(const SpatialGraph& g1, const SpatialGraph& g2);

using GraphBuilder = std::function<SpatialGraph(const PointConfiguration&)>;

struct EdgePreservingReport {
    bool ok = true;
    // edges of the original graph, between surviving points, lost after deletion
    std::vector<std::pair<int, int>> lost_edges;  // original ids
};

// Rebuilds the graph on config minus `deletions` and reports every
// surviving-endpoint edge of the original graph that disappeared.
EdgePreservingReport check_edge_preserving(const GraphBuilder& builder,
                                           const PointConfiguration& config,
                                           const std::vector<int>& deletions);

// config restricted to the surviving ids (renumbered contiguously);
// out parameter maps old id -> new id (-1 for deleted)
PointConfiguration delete_points(const PointConfiguration& config,
                                 const std::vector<int>& deletions,
                                 std::vector<int>* old_to_new = nullptr);

struct CurvePoint {
    double param = 0.0;
    int replicates = 0;
    double crossing_freq = 0.0;
    double largest_frac_mean = 0.0;
    double largest_frac_stderr = 0.0;
    int max_degree_seen = 0;
};

using ConfigSampler = std::function<PointConfiguration(uint64_t seed)>;
using ParamBuilder = std::function<SpatialGraph(const PointConfiguration&, double param)>;

// Monte Carlo sweep: for each parameter value, `replicates` fresh samples are
// drawn with child seeds of `seed` and analyzed for crossing and cluster size.
std::vector<CurvePoint> percolation_curve(const ConfigSampler& sampler,
                                          const ParamBuilder& builder,
                                          const std::vector<double>& params, int replicates,
                                          uint64_t seed, int crossing_axis = 0,
                                          double crossing_delta = -1.0);

}  // namespace percolab
