#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>

#include "percolab/index.hpp"
#include "percolab/procgen.hpp"
#include "percolab/rng.hpp"

namespace percolab {

namespace {

using P2 = std::array<double, 2>;

// convex cell polygon; src[k] labels the edge v[k] -> v[k+1] with the
// generator id whose bisector produced it (-1 for the starting box)
struct Cell {
    std::vector<P2> v;
    std::vector<int> src;
};

// keep the side a*x + b*y <= c
void clip_halfplane(Cell& cell, double a, double b, double c, int label) {
    if (cell.v.empty()) return;
    Cell out;
    const size_t n = cell.v.size();
    auto f = [&](const P2& p) { return a * p[0] + b * p[1] - c; };
    for (size_t k = 0; k < n; ++k) {
        const P2& A = cell.v[k];
        const P2& B = cell.v[(k + 1) % n];
        double fa = f(A), fb = f(B);
        bool ain = fa <= 0.0, bin = fb <= 0.0;
        if (ain) {
            out.v.push_back(A);
            out.src.push_back(cell.src[k]);
            if (!bin) {
                double t = fa / (fa - fb);
                out.v.push_back({A[0] + t * (B[0] - A[0]), A[1] + t * (B[1] - A[1])});
                out.src.push_back(label);
            }
        } else if (bin) {
            double t = fa / (fa - fb);
            out.v.push_back({A[0] + t * (B[0] - A[0]), A[1] + t * (B[1] - A[1])});
            out.src.push_back(cell.src[k]);
        }
    }
    cell = std::move(out);
}

// Liang-Barsky segment/box clip; returns false if fully outside
bool clip_to_window(P2& a, P2& b, const Window& w) {
    double t0 = 0.0, t1 = 1.0;
    double dx = b[0] - a[0], dy = b[1] - a[1];
    auto pass = [&](double p, double q) {
        if (p == 0.0) return q >= 0.0;
        double r = q / p;
        if (p < 0.0) {
            if (r > t1) return false;
            if (r > t0) t0 = r;
        } else {
            if (r < t0) return false;
            if (r < t1) t1 = r;
        }
        return true;
    };
    if (!pass(-dx, a[0] - w.lower[0])) return false;
    if (!pass(dx, w.upper[0] - a[0])) return false;
    if (!pass(-dy, a[1] - w.lower[1])) return false;
    if (!pass(dy, w.upper[1] - a[1])) return false;
    P2 na = {a[0] + t0 * dx, a[1] + t0 * dy};
    P2 nb = {a[0] + t1 * dx, a[1] + t1 * dy};
    a = na;
    b = nb;
    return true;
}

}  // namespace

SegmentSet voronoi_edges(const PointConfiguration& generators, const Window& window) {
    if (generators.window.dim != 2 || window.dim != 2)
        throw std::invalid_argument("voronoi_edges: d = 2 only");
    if (generators.size() < 3)
        throw std::invalid_argument("voronoi_edges: need at least 3 generators");

    // local copy so coincident generators can be perturbed
    PointConfiguration gens = generators;
    gens.window.boundary = BoundaryMode::hard;
    const double diam = gens.window.diameter();
    {
        SpatialIndex probe(gens);
        Rng jitter(0x70657274ULL ^ gens.meta.seed);
        for (int i = 0; i < gens.size(); ++i) {
            auto nn = probe.query_ranked(gens.coords(i), i, 1);
            if (!nn.empty() && distance(gens, i, nn[0]) < 1e-12 * diam) {
                std::cerr << "voronoi_edges: perturbing near-coincident generator " << i << "\n";
                for (double& c : gens.points[i].point.coords)
                    c += jitter.uniform(-1e-12 * diam, 1e-12 * diam);
            }
        }
    }
    SpatialIndex index(gens);

    // starting box: window and generators, padded
    double lox = std::min(window.lower[0], gens.window.lower[0]);
    double loy = std::min(window.lower[1], gens.window.lower[1]);
    double hix = std::max(window.upper[0], gens.window.upper[0]);
    double hiy = std::max(window.upper[1], gens.window.upper[1]);
    double pad = std::hypot(hix - lox, hiy - loy) + 1.0;
    lox -= pad;
    loy -= pad;
    hix += pad;
    hiy += pad;

    SegmentSet out;
    const int n = gens.size();
    for (int i = 0; i < n; ++i) {
        const Vec& gi = gens.coords(i);
        Cell cell;
        cell.v = {{lox, loy}, {hix, loy}, {hix, hiy}, {lox, hiy}};
        cell.src = {-1, -1, -1, -1};

        auto max_vertex_dist = [&] {
            double m = 0.0;
            for (const P2& p : cell.v)
                m = std::max(m, std::hypot(p[0] - gi[0], p[1] - gi[1]));
            return m;
        };

        // clip against neighbors in ascending distance; a generator farther
        // than twice the current cell radius cannot cut the cell
        const int batch = 16;
        int taken = 0;
        bool done = false;
        while (!done && taken < n - 1) {
            auto ids = index.query_ranked(gi, i, taken + batch);
            for (size_t r = taken; r < ids.size(); ++r) {
                int j = ids[r];
                const Vec& gj = gens.coords(j);
                double dij = std::hypot(gj[0] - gi[0], gj[1] - gi[1]);
                if (dij > 2.0 * max_vertex_dist()) {
                    done = true;
                    break;
                }
                // bisector half-plane: (x - mid) . (gj - gi) <= 0
                double a = gj[0] - gi[0], b = gj[1] - gi[1];
                double c = a * 0.5 * (gi[0] + gj[0]) + b * 0.5 * (gi[1] + gj[1]);
                clip_halfplane(cell, a, b, c, j);
                if (cell.v.empty()) {
                    done = true;
                    break;
                }
            }
            if (static_cast<int>(ids.size()) < taken + batch) done = true;  // exhausted
            taken = static_cast<int>(ids.size());
        }

        // emit each shared edge once, from the smaller generator id
        for (size_t k = 0; k < cell.v.size(); ++k) {
            int j = cell.src[k];
            if (j <= i) continue;
            P2 a = cell.v[k];
            P2 b = cell.v[(k + 1) % cell.v.size()];
            if (!clip_to_window(a, b, window)) continue;
            SegmentSet::Segment s{a, b};
            if (s.length() < 1e-12 * diam) continue;
            out.segments.push_back(s);
        }
    }
    out.recompute_length();
    return out;
}

}  // namespace percolab
