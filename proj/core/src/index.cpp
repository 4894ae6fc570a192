#include "percolab/index.hpp"

#include <algorithm>
#include <cmath>

namespace percolab {

bool rank_less(const PointConfiguration& config, int i, double key_i, double dist_i, int j,
               double key_j, double dist_j) {
    if (key_i != key_j) return key_i < key_j;
    if (dist_i != dist_j) return dist_i < dist_j;
    const Vec& a = config.coords(i);
    const Vec& b = config.coords(j);
    for (size_t k = 0; k < a.size(); ++k)
        if (a[k] != b[k]) return a[k] < b[k];
    return i < j;
}

SpatialIndex::SpatialIndex(const PointConfiguration& config) : config_(&config) {
    if (config.size() == 0)
        throw std::invalid_argument("SpatialIndex: empty configuration");
    const Window& w = config.window;
    const int d = w.dim;
    // target about one point per cell, capped total cell count
    double h = std::pow(w.volume() / std::max(config.size(), 1), 1.0 / d);
    cells_per_axis_.resize(d);
    cell_size_.resize(d);
    total_cells_ = 1;
    for (int a = 0; a < d; ++a) {
        int m = std::max(1, static_cast<int>(std::floor(w.extent(a) / h)));
        m = std::min(m, 1024);
        cells_per_axis_[a] = m;
        cell_size_[a] = w.extent(a) / m;
        total_cells_ *= m;
    }
    min_cell_size_ = *std::min_element(cell_size_.begin(), cell_size_.end());
    cell_points_.assign(total_cells_, {});
    for (int i = 0; i < config.size(); ++i)
        cell_points_[cell_of(config.coords(i))].push_back(i);
}

std::vector<int> SpatialIndex::cell_coords_of(const Vec& x) const {
    const Window& w = config_->window;
    std::vector<int> c(w.dim);
    for (int a = 0; a < w.dim; ++a) {
        double t = (x[a] - w.lower[a]) / cell_size_[a];
        int ci = static_cast<int>(std::floor(t));
        ci = std::clamp(ci, 0, cells_per_axis_[a] - 1);
        c[a] = ci;
    }
    return c;
}

long SpatialIndex::flatten(const std::vector<int>& c) const {
    long idx = 0;
    for (size_t a = 0; a < c.size(); ++a) idx = idx * cells_per_axis_[a] + c[a];
    return idx;
}

long SpatialIndex::cell_of(const Vec& x) const { return flatten(cell_coords_of(x)); }

template <class F>
int SpatialIndex::for_ring(const std::vector<int>& base, int t, std::vector<char>& visited,
                           F&& f) const {
    const int d = config_->window.dim;
    const bool torus = config_->window.boundary == BoundaryMode::torus;
    int delivered = 0;
    std::vector<int> off(d, -t), cell(d);
    // enumerate offsets with Chebyshev norm exactly t (any offset for t == 0)
    while (true) {
        int cheb = 0;
        for (int a = 0; a < d; ++a) cheb = std::max(cheb, std::abs(off[a]));
        if (cheb == t) {
            bool ok = true;
            for (int a = 0; a < d; ++a) {
                int c = base[a] + off[a];
                if (torus) {
                    c %= cells_per_axis_[a];
                    if (c < 0) c += cells_per_axis_[a];
                } else if (c < 0 || c >= cells_per_axis_[a]) {
                    ok = false;
                    break;
                }
                cell[a] = c;
            }
            if (ok) {
                long idx = flatten(cell);
                if (!visited[idx]) {
                    visited[idx] = 1;
                    ++delivered;
                    f(cell_points_[idx]);
                }
            }
        }
        // advance odometer
        int a = d - 1;
        while (a >= 0 && off[a] == t) {
            off[a] = -t;
            --a;
        }
        if (a < 0) break;
        ++off[a];
    }
    return delivered;
}

std::vector<int> SpatialIndex::query_ranked(const Vec& center, int exclude_id, const RankKey& rk,
                                            int count) const {
    const PointConfiguration& cfg = *config_;
    if (count <= 0) return {};
    struct Cand {
        double key, dist;
        int id;
    };
    std::vector<Cand> cands;
    std::vector<char> visited(total_cells_, 0);
    std::vector<int> base = cell_coords_of(cfg.window.boundary == BoundaryMode::torus
                                               ? cfg.window.wrap(center)
                                               : center);
    long seen_cells = 0;
    auto cmp = [&](const Cand& x, const Cand& y) {
        return rank_less(cfg, x.id, x.key, x.dist, y.id, y.key, y.dist);
    };

    for (int t = 0;; ++t) {
        seen_cells += for_ring(base, t, visited, [&](const std::vector<int>& ids) {
            for (int id : ids) {
                if (id == exclude_id) continue;
                double dist = distance(cfg.norm, cfg.window, center, cfg.coords(id));
                cands.push_back({rk.key(id, dist), dist, id});
            }
        });
        bool exhausted = seen_cells >= total_cells_;
        if (!exhausted && static_cast<int>(cands.size()) >= count) {
            // worst key among the current best `count` candidates
            std::nth_element(cands.begin(), cands.begin() + (count - 1), cands.end(), cmp);
            double kth_key = cands[count - 1].key;
            // any point in ring t+1 or beyond is at distance >= t * min_cell_size
            if (rk.lower_bound(t * min_cell_size_) > kth_key) exhausted = true;
        }
        if (exhausted) break;
    }
    std::sort(cands.begin(), cands.end(), cmp);
    if (static_cast<int>(cands.size()) > count) cands.resize(count);
    std::vector<int> out;
    out.reserve(cands.size());
    for (const Cand& c : cands) out.push_back(c.id);
    return out;
}

std::vector<int> SpatialIndex::query_ranked(const Vec& center, int exclude_id, int count) const {
    RankKey rk;
    rk.key = [](int, double d) { return d; };
    rk.lower_bound = [](double d) { return d; };
    return query_ranked(center, exclude_id, rk, count);
}

std::vector<int> SpatialIndex::query_radius(const Vec& center, double radius,
                                            int exclude_id) const {
    const PointConfiguration& cfg = *config_;
    std::vector<int> out;
    if (radius <= 0.0) return out;
    std::vector<char> visited(total_cells_, 0);
    std::vector<int> base = cell_coords_of(cfg.window.boundary == BoundaryMode::torus
                                               ? cfg.window.wrap(center)
                                               : center);
    long seen_cells = 0;
    for (int t = 0;; ++t) {
        if (t > 0 && (t - 1) * min_cell_size_ >= radius) break;
        seen_cells += for_ring(base, t, visited, [&](const std::vector<int>& ids) {
            for (int id : ids) {
                if (id == exclude_id) continue;
                if (distance(cfg.norm, cfg.window, center, cfg.coords(id)) < radius)
                    out.push_back(id);
            }
        });
        if (seen_cells >= total_cells_) break;
    }
    return out;
}

}  // namespace percolab
