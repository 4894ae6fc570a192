#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "percolab/percolation.hpp"
#include "percolab/procgen.hpp"
#include "percolab/rng.hpp"

using namespace percolab;
using oracle::EdgeSet;

namespace {

SpatialGraph graph_on(int n, EdgeSet edges, bool directed = false) {
    SpatialGraph g;
    g.n = n;
    g.directed = directed;
    g.edges = std::move(edges);
    g.finalize();
    return g;
}

PointConfiguration line_config(const std::vector<double>& xs) {
    std::vector<Vec> pts;
    for (double x : xs) pts.push_back({x});
    return make_configuration(Window({-100.0}, {100.0}), Norm::euclidean(), pts);
}

}  // namespace

TEST_CASE("components examples") {
    auto rep = components(graph_on(4, {{0, 1}, {0, 2}, {1, 2}}));
    CHECK(rep.n_components() == 2);
    CHECK(rep.largest_fraction == doctest::Approx(0.75));
    std::vector<int> sizes = rep.component_sizes;
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<int>{1, 3});
    int cycles = 0, isolated = 0;
    for (auto s : rep.component_shapes) {
        if (s == ComponentShape::cycle) ++cycles;
        if (s == ComponentShape::isolated) ++isolated;
    }
    CHECK(cycles == 1);
    CHECK(isolated == 1);

    auto empty = components(graph_on(5, {}));
    CHECK(empty.n_components() == 5);
    for (auto s : empty.component_shapes) CHECK(s == ComponentShape::isolated);

    auto path = components(graph_on(3, {{0, 1}, {1, 2}}));
    CHECK(path.component_shapes[0] == ComponentShape::path);
}

TEST_CASE("components equals BFS labeling on random graphs") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng.below(300));
        EdgeSet edges;
        int m = static_cast<int>(rng.below(2 * n));
        for (int e = 0; e < m; ++e) {
            int a = static_cast<int>(rng.below(n)), b = static_cast<int>(rng.below(n));
            if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
        }
        auto g = graph_on(n, edges);
        auto rep = components(g);
        auto want = oracle::ref_components(n, g.edges);
        REQUIRE(rep.component_of.size() == want.size());
        // same partition up to relabeling; both label by first-seen vertex order
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                REQUIRE((rep.component_of[i] == rep.component_of[j]) ==
                        (want[i] == want[j]));
        std::vector<int> sum(rep.n_components(), 0);
        for (int c : rep.component_of) ++sum[c];
        CHECK(sum == rep.component_sizes);
    }
}

TEST_CASE("crossing probe examples") {
    auto cfg = make_configuration(Window({0.0, 0.0}, {10.0, 10.0}), Norm::euclidean(),
                                  {{0.0, 0.0}, {5.0, 0.0}, {10.0, 0.0}});
    auto chain = graph_on(3, {{0, 1}, {1, 2}});
    auto res = crossing_probe(chain, cfg, 0, 1.0);
    CHECK(res.crossed);
    CHECK(res.component == 0);

    CHECK(!crossing_probe(graph_on(3, {}), cfg, 0, 1.0).crossed);
    // no slab contact along the y axis
    CHECK(!crossing_probe(chain, cfg, 1, 1.0).crossed);

    auto torus = cfg;
    torus.window.boundary = BoundaryMode::torus;
    CHECK_THROWS_AS(crossing_probe(chain, torus, 0, 1.0), std::invalid_argument);
}

TEST_CASE("path cycle census") {
    CHECK(path_cycle_census(graph_on(3, {{0, 1}, {1, 2}, {0, 2}})).cycles == 1);
    auto star = path_cycle_census(graph_on(4, {{0, 1}, {0, 2}, {0, 3}}));
    CHECK(star.other == 1);

    for (uint64_t seed = 0; seed < 20; ++seed) {
        auto cfg = oracle::random_config(150, 2, 12.0, BoundaryMode::hard, 2.0, 3100 + seed);
        auto census = path_cycle_census(build_fknn(cfg, 2, OrderingSpec::euclidean()));
        CHECK(census.other == 0);
    }
}

TEST_CASE("check_subgraph examples") {
    auto cfg = line_config({0.0, 1.0, 3.0, 7.0});
    auto g1 = build_gilbert(cfg, 2.5);
    CHECK(check_subgraph(g1, g1));
    CHECK(check_subgraph(build_bknn(cfg, 2), build_uknn(cfg, 2)));
    CHECK(!check_subgraph(build_gilbert(cfg, 2.5), build_gilbert(cfg, 2.0)));
    auto other = graph_on(3, {});
    CHECK_THROWS_AS(check_subgraph(g1, other), std::invalid_argument);
}

TEST_CASE("delete_points renumbers and maps") {
    auto cfg = line_config({0.0, 1.0, 3.0, 7.0});
    std::vector<int> map;
    auto reduced = delete_points(cfg, {1}, &map);
    CHECK(reduced.size() == 3);
    CHECK(map == std::vector<int>{0, -1, 1, 2});
    CHECK(reduced.coords(1) == Vec{3.0});
    CHECK_THROWS_AS(delete_points(cfg, {9}), std::invalid_argument);
}

TEST_CASE("edge preserving examples") {
    auto cfg = line_config({0.0, 1.0, 3.0, 7.0});
    GraphBuilder bknn2 = [](const PointConfiguration& c) { return build_bknn(c, 2); };
    CHECK(check_edge_preserving(bknn2, cfg, {0}).ok);
    CHECK(check_edge_preserving(bknn2, cfg, {}).ok);

    // deleting 0 turns {1,3,7} into a mutual-2NN triangle
    auto reduced = delete_points(cfg, {0});
    CHECK(build_bknn(reduced, 2).edges == EdgeSet{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("edge preserving battery over random trials") {
    Rng rng(41);
    GraphBuilder builders[] = {
        [](const PointConfiguration& c) { return build_fknn(c, 2, OrderingSpec::euclidean()); },
        [](const PointConfiguration& c) { return build_uknn(c, 3); },
        [](const PointConfiguration& c) { return build_gilbert(c, 1.5); },
        [](const PointConfiguration& c) {
            return build_local_extreme(c, 2, 3.0, ExtremeMode::furthest);
        },
    };
    for (int trial = 0; trial < 40; ++trial) {
        auto cfg = oracle::random_config(40, 2, 8.0, BoundaryMode::hard, 2.0, 5200 + trial);
        std::vector<int> deletions;
        for (int i = 0; i < cfg.size(); ++i)
            if (rng.uniform() < 0.2) deletions.push_back(i);
        for (auto& b : builders) REQUIRE(check_edge_preserving(b, cfg, deletions).ok);
    }
}

TEST_CASE("percolation curve is monotone per seed for bknn") {
    ConfigSampler sampler = [](uint64_t seed) {
        return sample_poisson(1.0, Window::box(2, 15.0), seed);
    };
    ParamBuilder builder = [](const PointConfiguration& c, double k) {
        return build_bknn(c, static_cast<int>(k));
    };
    auto curve = percolation_curve(sampler, builder, {1, 2, 3, 4, 5}, 5, 77);
    REQUIRE(curve.size() == 5);
    for (size_t i = 1; i < curve.size(); ++i) {
        CHECK(curve[i].crossing_freq >= curve[i - 1].crossing_freq);
        CHECK(curve[i].largest_frac_mean >= curve[i - 1].largest_frac_mean - 1e-12);
    }
    for (const auto& cp : curve) CHECK(cp.replicates == 5);
}
