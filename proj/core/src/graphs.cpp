#include "percolab/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "percolab/index.hpp"

namespace percolab {

double PathLoss::operator()(double r) const {
    switch (kind) {
        case Kind::power_law:
            if (r <= 0.0) throw std::invalid_argument("PathLoss: power_law undefined at r = 0");
            return std::pow(r, -alpha);
        case Kind::truncated:
            return r <= 1.0 ? 1.0 : std::pow(r, -alpha);
        case Kind::shifted:
            return std::pow(1.0 + r, -alpha);
    }
    return 0.0;
}

double OrderingSpec::eval(double dist, double mark) const {
    if (kind == Kind::euclidean) return dist;
    // f(x, p) = 1 / (p l(|x|)); zero power ranks last
    double denom = mark * pathloss(dist);
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / denom;
}

bool SpatialGraph::has_edge(int a, int b) const {
    std::pair<int, int> e = directed ? std::pair{a, b} : std::pair{std::min(a, b), std::max(a, b)};
    return std::binary_search(edges.begin(), edges.end(), e);
}

std::vector<int> SpatialGraph::degrees() const {
    std::vector<int> deg(n, 0);
    for (const auto& [a, b] : edges) {
        ++deg[a];
        ++deg[b];
    }
    return deg;
}

int SpatialGraph::max_degree() const {
    auto deg = degrees();
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

void SpatialGraph::finalize() {
    for (auto& [a, b] : edges) {
        if (a == b) throw std::invalid_argument("SpatialGraph: self-loop");
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw std::invalid_argument("SpatialGraph: endpoint out of range");
        if (!directed && a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

namespace {

SpatialIndex::RankKey make_rank_key(const PointConfiguration& config, const OrderingSpec& f) {
    SpatialIndex::RankKey rk;
    if (f.kind == OrderingSpec::Kind::euclidean) {
        rk.key = [](int, double d) { return d; };
        rk.lower_bound = [](double d) { return d; };
        return rk;
    }
    double max_mark = 0.0;
    for (const MarkedPoint& mp : config.points) max_mark = std::max(max_mark, mp.mark);
    rk.key = [&config, f](int id, double d) { return f.eval(d, config.mark(id)); };
    // f(d, q) >= 1/(q_max l(d)), nondecreasing in d since l is nonincreasing
    rk.lower_bound = [f, max_mark](double d) {
        if (max_mark <= 0.0) return std::numeric_limits<double>::infinity();
        double l = d <= 0.0 ? (f.pathloss.kind == PathLoss::Kind::power_law
                                   ? std::numeric_limits<double>::infinity()
                                   : f.pathloss(d))
                            : f.pathloss(d);
        if (l <= 0.0) return std::numeric_limits<double>::infinity();
        return 1.0 / (max_mark * l);
    };
    return rk;
}

// per-point lists of the first k f-neighbors
std::vector<std::vector<int>> knn_lists(const PointConfiguration& config, int k,
                                        const OrderingSpec& f) {
    const int n = config.size();
    std::vector<std::vector<int>> lists(n);
    if (n <= 1) return lists;
    SpatialIndex index(config);
    auto rk = make_rank_key(config, f);
    for (int i = 0; i < n; ++i) lists[i] = index.query_ranked(config.coords(i), i, rk, k);
    return lists;
}

bool contains(const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

bool f_closer(const PointConfiguration& config, const OrderingSpec& f, int base_id, int cand1,
              int cand2) {
    if (cand1 == base_id || cand2 == base_id)
        throw std::invalid_argument("f_closer: candidates must differ from base");
    double d1 = distance(config, base_id, cand1);
    double d2 = distance(config, base_id, cand2);
    double k1 = f.eval(d1, config.mark(cand1));
    double k2 = f.eval(d2, config.mark(cand2));
    if (k1 == k2 && d1 != d2) {
        // mark-collision tie resolved by the distance clause
    } else if (k1 == k2 && d1 == d2) {
        std::cerr << "f_closer: exact tie between " << cand1 << " and " << cand2
                  << ", lexicographic break\n";
    }
    return rank_less(config, cand1, k1, d1, cand2, k2, d2);
}

std::vector<int> nn_sequence(const PointConfiguration& config, int base_id, const OrderingSpec& f,
                             int count) {
    if (count <= 0) return {};
    SpatialIndex index(config);
    auto rk = make_rank_key(config, f);
    return index.query_ranked(config.coords(base_id), base_id, rk, count);
}

SpatialGraph build_fknn(const PointConfiguration& config, int k, const OrderingSpec& f) {
    if (k < 1) throw std::invalid_argument("build_fknn: k must be >= 1");
    SpatialGraph g;
    g.n = config.size();
    g.builder = "fknn";
    auto lists = knn_lists(config, k, f);
    for (int i = 0; i < g.n; ++i)
        for (int j : lists[i])
            if (j > i && contains(lists[j], i)) g.edges.emplace_back(i, j);
    g.finalize();
    return g;
}

SpatialGraph build_bknn(const PointConfiguration& config, int k) {
    SpatialGraph g = build_fknn(config, k, OrderingSpec::euclidean());
    g.builder = "bknn";
    return g;
}

SpatialGraph build_uknn(const PointConfiguration& config, int k, const OrderingSpec& f) {
    if (k < 1) throw std::invalid_argument("build_uknn: k must be >= 1");
    SpatialGraph g;
    g.n = config.size();
    g.builder = "uknn";
    auto lists = knn_lists(config, k, f);
    for (int i = 0; i < g.n; ++i)
        for (int j : lists[i]) g.edges.emplace_back(std::min(i, j), std::max(i, j));
    g.finalize();
    return g;
}

SpatialGraph build_gilbert(const PointConfiguration& config, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("build_gilbert: r must be > 0");
    SpatialGraph g;
    g.n = config.size();
    g.builder = "gilbert";
    if (g.n > 1) {
        SpatialIndex index(config);
        for (int i = 0; i < g.n; ++i)
            for (int j : index.query_radius(config.coords(i), r, i))
                if (j > i) g.edges.emplace_back(i, j);
    }
    g.finalize();
    return g;
}

int sinr_knn_bound(const SinrParams& params) {
    return static_cast<int>(std::ceil(1.0 / (params.tau * params.gamma)));
}

SpatialGraph build_sinr(const PointConfiguration& config, const SinrParams& params) {
    if (!(params.tau > 0.0) || params.gamma < 0.0 || params.n0 < 0.0)
        throw std::invalid_argument("build_sinr: invalid parameters");
    if (params.gamma == 0.0 && params.n0 == 0.0)
        std::cerr << "build_sinr: gamma = 0 and N0 = 0, constraint degenerates\n";
    SpatialGraph g;
    g.n = config.size();
    g.builder = "sinr";
    const int n = g.n;
    if (n > 1) {
        // received power matrix S[i][j] = P_i l(|X_i - X_j|); the interference
        // at receiver j excluding sender i is total[j] - S[i][j]
        std::vector<std::vector<double>> S(n, std::vector<double>(n, 0.0));
        std::vector<double> total(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                S[i][j] = config.mark(i) * params.pathloss(distance(config, i, j));
                total[j] += S[i][j];
            }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double interf_at_j = total[j] - S[i][j];
                double interf_at_i = total[i] - S[j][i];
                bool fwd = S[i][j] > params.tau * (params.n0 + params.gamma * interf_at_j);
                bool bwd = S[j][i] > params.tau * (params.n0 + params.gamma * interf_at_i);
                if (fwd && bwd) g.edges.emplace_back(i, j);
            }
    }
    g.finalize();
    return g;
}

SpatialGraph build_f_k1k2(const PointConfiguration& config, int k1, int k2,
                          const OrderingSpec& f) {
    if (k1 < 1 || k2 <= k1) throw std::invalid_argument("build_f_k1k2: need 1 <= k1 < k2");
    SpatialGraph g;
    g.n = config.size();
    g.builder = "f_k1k2";
    const int n = g.n;
    if (n > 1) {
        int k2_eff = std::min(k2, n - 1);
        auto lists = knn_lists(config, k2_eff, f);
        for (int i = 0; i < n; ++i) {
            for (int m = 0; m < std::min(2, static_cast<int>(lists[i].size())); ++m) {
                int j = lists[i][m];
                // rank of i in j's list, 1-based
                auto it = std::find(lists[j].begin(), lists[j].end(), i);
                if (it == lists[j].end()) continue;
                int rank = static_cast<int>(it - lists[j].begin()) + 1;
                if (rank >= k1 && rank <= k2_eff)
                    g.edges.emplace_back(std::min(i, j), std::max(i, j));
            }
        }
    }
    g.finalize();
    return g;
}

SpatialGraph build_local_extreme(const PointConfiguration& config, int k, double region_radius,
                                 ExtremeMode mode) {
    if (k < 1 || !(region_radius > 0.0))
        throw std::invalid_argument("build_local_extreme: invalid parameters");
    SpatialGraph g;
    g.n = config.size();
    g.builder = "local_extreme";
    const int n = g.n;
    if (n > 1) {
        SpatialIndex index(config);
        // candidates are the points of the ball of region_radius around each
        // point; k extreme ones by distance (ties broken as everywhere else)
        std::vector<std::vector<int>> lists(n);
        for (int i = 0; i < n; ++i) {
            auto cand = index.query_radius(config.coords(i), region_radius, i);
            std::vector<std::pair<double, int>> ranked;
            ranked.reserve(cand.size());
            for (int j : cand) ranked.emplace_back(distance(config, i, j), j);
            std::sort(ranked.begin(), ranked.end(), [&](const auto& x, const auto& y) {
                return rank_less(config, x.second, x.first, x.first, y.second, y.first, y.first);
            });
            if (mode == ExtremeMode::furthest) std::reverse(ranked.begin(), ranked.end());
            if (static_cast<int>(ranked.size()) > k) ranked.resize(k);
            for (const auto& [d, j] : ranked) lists[i].push_back(j);
        }
        for (int i = 0; i < n; ++i)
            for (int j : lists[i])
                if (j > i && contains(lists[j], i)) g.edges.emplace_back(i, j);
    }
    g.finalize();
    return g;
}

SpatialGraph build_kth_nn_directed(const PointConfiguration& config, int k) {
    const int n = config.size();
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("build_kth_nn_directed: need 1 <= k <= n-1");
    SpatialGraph g;
    g.n = n;
    g.directed = true;
    g.builder = "kth_nn_directed";
    SpatialIndex index(config);
    for (int i = 0; i < n; ++i) {
        auto nn = index.query_ranked(config.coords(i), i, k);
        g.edges.emplace_back(i, nn[k - 1]);
    }
    g.finalize();
    return g;
}

}  // namespace percolab
