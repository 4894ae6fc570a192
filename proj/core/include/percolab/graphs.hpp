#pragma once
#include <string>
#include <utility>
#include <vector>

#include "percolab/geom.hpp"

namespace percolab {

struct PathLoss {
    enum class Kind { power_law, truncated, shifted };
    Kind kind = Kind::power_law;
    double alpha = 4.0;  // must exceed the dimension

    double operator()(double r) const;

    static PathLoss power_law(double alpha) { return {Kind::power_law, alpha}; }
    static PathLoss truncated(double alpha) { return {Kind::truncated, alpha}; }
    static PathLoss shifted(double alpha) { return {Kind::shifted, alpha}; }
};

// Ordering function f(distance, mark): candidates rank ascending in f, ties
// broken by distance, then lexicographic coordinates, then id.
struct OrderingSpec {
    enum class Kind { euclidean, sinr_order };
    Kind kind = Kind::euclidean;
    PathLoss pathloss{};

    double eval(double dist, double mark) const;

    static OrderingSpec euclidean() { return {Kind::euclidean, {}}; }
    static OrderingSpec sinr_order(PathLoss pl) { return {Kind::sinr_order, pl}; }
};

struct SinrParams {
    PathLoss pathloss{};
    double tau = 1.0;    // SINR threshold, > 0
    double gamma = 0.5;  // interference-cancellation factor, >= 0
    double n0 = 0.0;     // noise power, >= 0
};

struct SpatialGraph {
    int n = 0;  // vertex count; vertices are config ids 0..n-1
    bool directed = false;
    // undirected edges stored with smaller id first; sorted, deduplicated
    std::vector<std::pair<int, int>> edges;
    std::string builder;

    bool has_edge(int a, int b) const;
    std::vector<int> degrees() const;  // directed: total degree (in + out)
    int max_degree() const;
    void finalize();  // normalize, sort, dedupe, reject self-loops
};

enum class ExtremeMode { furthest, nearest };

// "cand1 ranks before cand2 in the f-order from base" (returns true for first)
bool f_closer(const PointConfiguration& config, const OrderingSpec& f, int base_id, int cand1,
              int cand2);

// First `count` ids of config \ {base} in ascending f-order from base.
std::vector<int> nn_sequence(const PointConfiguration& config, int base_id, const OrderingSpec& f,
                             int count);

SpatialGraph build_fknn(const PointConfiguration& config, int k, const OrderingSpec& f);
SpatialGraph build_bknn(const PointConfiguration& config, int k);
SpatialGraph build_uknn(const PointConfiguration& config, int k,
                        const OrderingSpec& f = OrderingSpec::euclidean());
SpatialGraph build_gilbert(const PointConfiguration& config, double r);
SpatialGraph build_sinr(const PointConfiguration& config, const SinrParams& params);
SpatialGraph build_f_k1k2(const PointConfiguration& config, int k1, int k2,
                          const OrderingSpec& f);
SpatialGraph build_local_extreme(const PointConfiguration& config, int k, double region_radius,
                                 ExtremeMode mode);
SpatialGraph build_kth_nn_directed(const PointConfiguration& config, int k);

// ceil(1/(tau*gamma)): the f-kNN bound containing the SINR graph
int sinr_knn_bound(const SinrParams& params);

}  // namespace percolab
