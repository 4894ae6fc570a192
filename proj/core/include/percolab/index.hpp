#pragma once
#include <functional>

#include "percolab/geom.hpp"

namespace percolab {

// Uniform grid over the window. Ranked queries expand cell rings outward and
// are exact (identical to a brute-force full sort) as long as the supplied
// lower bound is a nondecreasing function of distance with
// key(id, d) >= lower_bound(d) for every candidate.
class SpatialIndex {
public:
    explicit SpatialIndex(const PointConfiguration& config);

    struct RankKey {
        // ordering key of candidate `id` at distance `dist` from the query center
        std::function<double(int id, double dist)> key;
        // admissible lower bound on key over all candidates at distance >= dist
        std::function<double(double dist)> lower_bound;
    };

    // First `count` point ids (excluding exclude_id) in ascending key order;
    // ties broken by distance, then lexicographic coordinates, then id.
    // count exceeding the available points returns all of them ranked.
    std::vector<int> query_ranked(const Vec& center, int exclude_id, const RankKey& rk,
                                  int count) const;

    // Distance-ordered variant under the configuration's norm.
    std::vector<int> query_ranked(const Vec& center, int exclude_id, int count) const;

    // All ids with distance(center, point) < radius, unsorted.
    std::vector<int> query_radius(const Vec& center, double radius, int exclude_id = -1) const;

    const PointConfiguration& config() const { return *config_; }

private:
    const PointConfiguration* config_;
    std::vector<int> cells_per_axis_;
    std::vector<double> cell_size_;
    double min_cell_size_ = 0.0;
    std::vector<std::vector<int>> cell_points_;
    long total_cells_ = 0;

    long cell_of(const Vec& x) const;
    long flatten(const std::vector<int>& c) const;
    std::vector<int> cell_coords_of(const Vec& x) const;
    // visit all cells at Chebyshev cell-distance t from base; returns number
    // of previously unvisited cells delivered
    template <class F>
    int for_ring(const std::vector<int>& base, int t, std::vector<char>& visited, F&& f) const;
};

// Convenience comparator used by ranked queries and brute-force oracles:
// (key, distance, lexicographic coordinates, id).
bool rank_less(const PointConfiguration& config, int i, double key_i, double dist_i, int j,
               double key_j, double dist_j);

}  // namespace percolab
