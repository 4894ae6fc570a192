#include "percolab/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "percolab/rng.hpp"

namespace percolab {

namespace {

// weighted quick-union with path compression
struct UnionFind {
    std::vector<int> parent, size;
    explicit UnionFind(int n) : parent(n), size(n, 1) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int p) {
        int root = p;
        while (root != parent[root]) root = parent[root];
        while (p != root) {
            int next = parent[p];
            parent[p] = root;
            p = next;
        }
        return root;
    }
    void merge(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return;
        if (size[ra] < size[rb]) std::swap(ra, rb);
        parent[rb] = ra;
        size[ra] += size[rb];
    }
};

}  // namespace

ClusterReport components(const SpatialGraph& graph) {
    const int n = graph.n;
    UnionFind uf(n);
    for (const auto& [a, b] : graph.edges) uf.merge(a, b);

    ClusterReport rep;
    rep.component_of.assign(n, -1);
    std::vector<int> root_to_comp(n, -1);
    for (int v = 0; v < n; ++v) {
        int r = uf.find(v);
        if (root_to_comp[r] < 0) {
            root_to_comp[r] = rep.n_components();
            rep.component_sizes.push_back(0);
        }
        rep.component_of[v] = root_to_comp[r];
        ++rep.component_sizes[rep.component_of[v]];
    }

    std::vector<int> deg = graph.degrees();
    int max_deg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    rep.degree_histogram.assign(max_deg + 1, 0);
    for (int d : deg) ++rep.degree_histogram[d];

    // shape from the degree multiset of each component
    std::vector<int> deg1(rep.n_components(), 0), deg2(rep.n_components(), 0),
        deg_other(rep.n_components(), 0);
    for (int v = 0; v < n; ++v) {
        int c = rep.component_of[v];
        if (deg[v] == 1)
            ++deg1[c];
        else if (deg[v] == 2)
            ++deg2[c];
        else if (deg[v] != 0)
            ++deg_other[c];
    }
    rep.component_shapes.resize(rep.n_components());
    for (int c = 0; c < rep.n_components(); ++c) {
        int sz = rep.component_sizes[c];
        if (sz == 1)
            rep.component_shapes[c] = ComponentShape::isolated;
        else if (deg_other[c] == 0 && deg1[c] == 2 && deg2[c] == sz - 2)
            rep.component_shapes[c] = ComponentShape::path;
        else if (deg_other[c] == 0 && deg1[c] == 0 && deg2[c] == sz)
            rep.component_shapes[c] = ComponentShape::cycle;
        else
            rep.component_shapes[c] = ComponentShape::other;
    }
    if (n > 0)
        rep.largest_fraction =
            static_cast<double>(
                *std::max_element(rep.component_sizes.begin(), rep.component_sizes.end())) /
            n;
    return rep;
}

CrossingResult crossing_probe(const SpatialGraph& graph, const PointConfiguration& config,
                              int axis, double delta) {
    if (config.window.boundary == BoundaryMode::torus)
        throw std::invalid_argument("crossing_probe: undefined on torus windows");
    if (axis < 0 || axis >= config.window.dim)
        throw std::invalid_argument("crossing_probe: bad axis");
    CrossingResult res;
    res.axis = axis;
    res.delta = delta;
    ClusterReport rep = components(graph);
    std::vector<char> touch_lo(rep.n_components(), 0), touch_hi(rep.n_components(), 0);
    double lo = config.window.lower[axis] + delta;
    double hi = config.window.upper[axis] - delta;
    for (int v = 0; v < graph.n; ++v) {
        double x = config.coords(v)[axis];
        int c = rep.component_of[v];
        if (x <= lo) touch_lo[c] = 1;
        if (x >= hi) touch_hi[c] = 1;
    }
    for (int c = 0; c < rep.n_components(); ++c) {
        if (touch_lo[c] && touch_hi[c]) {
            res.crossed = true;
            res.component = c;
            break;
        }
    }
    return res;
}

PathCycleCensus path_cycle_census(const SpatialGraph& graph) {
    ClusterReport rep = components(graph);
    PathCycleCensus census;
    for (ComponentShape s : rep.component_shapes) {
        switch (s) {
            case ComponentShape::isolated: ++census.isolated; break;
            case ComponentShape::path: ++census.paths; break;
            case ComponentShape::cycle: ++census.cycles; break;
            case ComponentShape::other: ++census.other; break;
        }
    }
    return census;
}

bool check_subgraph(const SpatialGraph& g1, const SpatialGraph& g2) {
    if (g1.n != g2.n) throw std::invalid_argument("check_subgraph: vertex-set mismatch");
    return std::includes(g2.edges.begin(), g2.edges.end(), g1.edges.begin(), g1.edges.end());
}

PointConfiguration delete_points(const PointConfiguration& config,
                                 const std::vector<int>& deletions,
                                 std::vector<int>* old_to_new) {
    std::vector<char> deleted(config.size(), 0);
    for (int id : deletions) {
        if (id < 0 || id >= config.size())
            throw std::invalid_argument("delete_points: id out of range");
        deleted[id] = 1;
    }
    PointConfiguration out;
    out.window = config.window;
    out.norm = config.norm;
    out.meta = config.meta;
    std::vector<int> map(config.size(), -1);
    for (int id = 0; id < config.size(); ++id) {
        if (deleted[id]) continue;
        MarkedPoint mp = config.points[id];
        mp.point.id = out.size();
        map[id] = mp.point.id;
        out.points.push_back(std::move(mp));
    }
    if (old_to_new) *old_to_new = std::move(map);
    return out;
}

EdgePreservingReport check_edge_preserving(const GraphBuilder& builder,
                                           const PointConfiguration& config,
                                           const std::vector<int>& deletions) {
    EdgePreservingReport rep;
    SpatialGraph before = builder(config);
    std::vector<int> map;
    PointConfiguration reduced = delete_points(config, deletions, &map);
    if (reduced.size() == 0) return rep;
    SpatialGraph after = builder(reduced);
    for (const auto& [a, b] : before.edges) {
        if (map[a] < 0 || map[b] < 0) continue;  // endpoint deleted
        if (!after.has_edge(map[a], map[b])) rep.lost_edges.emplace_back(a, b);
    }
    rep.ok = rep.lost_edges.empty();
    return rep;
}

std::vector<CurvePoint> percolation_curve(const ConfigSampler& sampler,
                                          const ParamBuilder& builder,
                                          const std::vector<double>& params, int replicates,
                                          uint64_t seed, int crossing_axis,
                                          double crossing_delta) {
    if (replicates < 1) throw std::invalid_argument("percolation_curve: replicates >= 1");
    std::vector<CurvePoint> curve;
    for (size_t pi = 0; pi < params.size(); ++pi) {
        CurvePoint cp;
        cp.param = params[pi];
        cp.replicates = replicates;
        double sum = 0.0, sum2 = 0.0;
        int crossings = 0;
        for (int r = 0; r < replicates; ++r) {
            // replicate seeds ignore the parameter so sweeps are coupled per seed
            PointConfiguration cfg = sampler(child_seed(seed, r));
            SpatialGraph g = builder(cfg, params[pi]);
            ClusterReport rep = components(g);
            double delta = crossing_delta;
            if (delta < 0.0) delta = cfg.window.extent(crossing_axis) / 20.0;
            if (crossing_probe(g, cfg, crossing_axis, delta).crossed) ++crossings;
            sum += rep.largest_fraction;
            sum2 += rep.largest_fraction * rep.largest_fraction;
            cp.max_degree_seen = std::max(cp.max_degree_seen, g.max_degree());
        }
        cp.crossing_freq = static_cast<double>(crossings) / replicates;
        cp.largest_frac_mean = sum / replicates;
        double var = std::max(0.0, sum2 / replicates - cp.largest_frac_mean * cp.largest_frac_mean);
        cp.largest_frac_stderr = replicates > 1 ? std::sqrt(var / (replicates - 1)) : 0.0;
        curve.push_back(cp);
    }
    return curve;
}

}  // namespace percolab
