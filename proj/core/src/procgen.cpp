#include "percolab/procgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "percolab/index.hpp"
#include "percolab/rng.hpp"

namespace percolab {

MarkSpec MarkSpec::constant(double v) {
    if (v < 0.0) throw std::invalid_argument("MarkSpec: constant must be >= 0");
    return {Kind::constant, v, 0.0};
}
MarkSpec MarkSpec::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("MarkSpec: rate must be > 0");
    return {Kind::exponential, rate, 0.0};
}
MarkSpec MarkSpec::lognormal(double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("MarkSpec: sigma must be > 0");
    return {Kind::lognormal, mu, sigma};
}

double SegmentSet::Segment::length() const {
    double dx = b[0] - a[0], dy = b[1] - a[1];
    return std::sqrt(dx * dx + dy * dy);
}

void SegmentSet::recompute_length() {
    total_length = 0.0;
    for (const auto& s : segments) total_length += s.length();
}

PointConfiguration sample_poisson(double lambda, const Window& window, uint64_t seed) {
    if (lambda < 0.0) throw std::invalid_argument("sample_poisson: lambda must be >= 0");
    double mean = lambda * window.volume();
    if (mean > 1e8) throw std::runtime_error("sample_poisson: expected count exceeds 1e8");
    Rng rng(seed);
    long n = rng.poisson(mean);
    PointConfiguration cfg;
    cfg.window = window;
    cfg.points.reserve(n);
    for (long i = 0; i < n; ++i) {
        MarkedPoint mp;
        mp.point.id = static_cast<int>(i);
        mp.point.coords.resize(window.dim);
        for (int a = 0; a < window.dim; ++a)
            mp.point.coords[a] = rng.uniform(window.lower[a], window.upper[a]);
        cfg.points.push_back(std::move(mp));
    }
    cfg.meta.generator = "poisson";
    std::ostringstream ps;
    ps << "lambda=" << lambda;
    cfg.meta.params = ps.str();
    cfg.meta.seed = seed;
    return cfg;
}

PointConfiguration sample_on_segments(const SegmentSet& skeleton, double lambda_lin,
                                      const Window& window, uint64_t seed) {
    if (lambda_lin < 0.0) throw std::invalid_argument("sample_on_segments: rate must be >= 0");
    PointConfiguration cfg;
    cfg.window = window;
    cfg.meta.generator = "segments";
    cfg.meta.seed = seed;
    if (skeleton.segments.empty() || skeleton.total_length <= 0.0) return cfg;

    Rng rng(seed);
    long n = rng.poisson(lambda_lin * skeleton.total_length);
    // cumulative length table for uniform-by-length placement
    std::vector<double> cum(skeleton.segments.size());
    double acc = 0.0;
    for (size_t i = 0; i < skeleton.segments.size(); ++i) {
        acc += skeleton.segments[i].length();
        cum[i] = acc;
    }
    for (long i = 0; i < n; ++i) {
        double u = rng.uniform(0.0, acc);
        size_t si = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
        if (si >= skeleton.segments.size()) si = skeleton.segments.size() - 1;
        const auto& s = skeleton.segments[si];
        double t = rng.uniform();
        MarkedPoint mp;
        mp.point.id = static_cast<int>(cfg.points.size());
        mp.point.coords = {s.a[0] + t * (s.b[0] - s.a[0]), s.a[1] + t * (s.b[1] - s.a[1])};
        if (window.boundary == BoundaryMode::hard && !window.contains(mp.point.coords)) continue;
        cfg.points.push_back(std::move(mp));
    }
    // drops above can leave id gaps; renumber
    for (size_t i = 0; i < cfg.points.size(); ++i) cfg.points[i].point.id = static_cast<int>(i);
    return cfg;
}

PointConfiguration sample_cox_voronoi(double lambda_pv, double lambda_lin, const Window& window,
                                      uint64_t seed) {
    if (window.dim != 2) throw std::invalid_argument("sample_cox_voronoi: d = 2 only");
    if (lambda_pv < 0.0 || lambda_lin < 0.0)
        throw std::invalid_argument("sample_cox_voronoi: rates must be >= 0");
    PointConfiguration cfg;
    cfg.window = window;
    cfg.meta.generator = "cox_voronoi";
    std::ostringstream ps;
    ps << "lambda_pv=" << lambda_pv << ",lambda_lin=" << lambda_lin;
    cfg.meta.params = ps.str();
    cfg.meta.seed = seed;
    if (lambda_pv <= 0.0 || lambda_lin <= 0.0) return cfg;

    // oversample generators so clipped edges near the boundary are correct;
    // cell diameters decay like lambda_pv^{-1/2}
    double margin = 3.0 / std::sqrt(lambda_pv);
    Window gen_window(
        [&] {
            Vec lo = window.lower;
            for (int a = 0; a < window.dim; ++a) lo[a] -= margin;
            return lo;
        }(),
        [&] {
            Vec hi = window.upper;
            for (int a = 0; a < window.dim; ++a) hi[a] += margin;
            return hi;
        }(),
        BoundaryMode::hard);
    PointConfiguration generators = sample_poisson(lambda_pv, gen_window, child_seed(seed, 0));
    if (generators.size() < 3) return cfg;  // empty skeleton
    SegmentSet skel = voronoi_edges(generators, window);
    PointConfiguration pts = sample_on_segments(skel, lambda_lin, window, child_seed(seed, 1));
    cfg.points = std::move(pts.points);
    return cfg;
}

long pair_count_within(const PointConfiguration& config, double range) {
    if (config.size() < 2) return 0;
    SpatialIndex index(config);
    long count = 0;
    for (int i = 0; i < config.size(); ++i)
        for (int j : index.query_radius(config.coords(i), range, i))
            if (j > i) ++count;
    return count;
}

PointConfiguration sample_strauss(const StraussSpec& spec, const Window& window, uint64_t seed) {
    if (spec.lambda_act < 0.0 || spec.interaction_cost < 0.0 || !(spec.range > 0.0) ||
        spec.sweeps < 1)
        throw std::invalid_argument("sample_strauss: invalid parameters");
    const double vol = window.volume();
    const double lam = spec.lambda_act;
    const double cost = spec.interaction_cost;
    const bool hard_core = std::isinf(cost);
    Rng rng(seed);

    Norm norm = Norm::euclidean();
    std::vector<Vec> pts;
    auto pairs_with = [&](const Vec& x, int skip) {
        int c = 0;
        for (int j = 0; j < static_cast<int>(pts.size()); ++j) {
            if (j == skip) continue;
            if (distance(norm, window, x, pts[j]) < spec.range) ++c;
        }
        return c;
    };
    auto random_location = [&] {
        Vec x(window.dim);
        for (int a = 0; a < window.dim; ++a) x[a] = rng.uniform(window.lower[a], window.upper[a]);
        return x;
    };

    long proposals_per_sweep = std::max<long>(1, std::lround(lam * vol));
    long total = proposals_per_sweep * spec.sweeps;
    for (long step = 0; step < total; ++step) {
        double u = rng.uniform();
        long n = static_cast<long>(pts.size());
        if (u < 0.4) {
            // birth
            Vec x = random_location();
            double w = 1.0;
            if (cost > 0.0) {
                int d_pairs = pairs_with(x, -1);
                w = hard_core ? (d_pairs > 0 ? 0.0 : 1.0) : std::exp(-cost * d_pairs);
            }
            double acc = lam * vol / (n + 1) * w;
            if (rng.uniform() < acc) pts.push_back(std::move(x));
        } else if (n == 0) {
            // death/move of nothing: rejected proposal
        } else if (u < 0.8) {
            // death
            size_t pick = rng.below(pts.size());
            double w = 1.0;
            if (cost > 0.0 && !hard_core)
                w = std::exp(cost * pairs_with(pts[pick], static_cast<int>(pick)));
            double acc = n / (lam * vol) * w;
            if (rng.uniform() < acc) {
                pts[pick] = std::move(pts.back());
                pts.pop_back();
            }
        } else {
            // move
            size_t pick = rng.below(pts.size());
            Vec x = random_location();
            double acc = 1.0;
            if (cost > 0.0) {
                int before = pairs_with(pts[pick], static_cast<int>(pick));
                int after = pairs_with(x, static_cast<int>(pick));
                acc = hard_core ? (after > 0 ? 0.0 : 1.0) : std::exp(-cost * (after - before));
            }
            if (rng.uniform() < acc) pts[pick] = std::move(x);
        }
    }

    PointConfiguration out;
    out.window = window;
    out.points.reserve(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        MarkedPoint mp;
        mp.point.id = static_cast<int>(i);
        mp.point.coords = std::move(pts[i]);
        out.points.push_back(std::move(mp));
    }
    out.meta.generator = "strauss";
    std::ostringstream ps;
    ps << "lambda_act=" << lam << ",cost=" << cost << ",range=" << spec.range
       << ",sweeps=" << spec.sweeps;
    out.meta.params = ps.str();
    out.meta.seed = seed;
    return out;
}

PointConfiguration sample_shifted_lattice(double spacing, const Window& window, uint64_t seed) {
    if (!(spacing > 0.0)) throw std::invalid_argument("sample_shifted_lattice: spacing must be > 0");
    Rng rng(seed);
    Vec shift(window.dim);
    for (int a = 0; a < window.dim; ++a) shift[a] = rng.uniform(0.0, spacing);

    PointConfiguration cfg;
    cfg.window = window;
    std::vector<long> lo(window.dim), hi(window.dim);
    for (int a = 0; a < window.dim; ++a) {
        lo[a] = static_cast<long>(std::ceil((window.lower[a] - shift[a]) / spacing - 1e-12));
        hi[a] = static_cast<long>(std::floor((window.upper[a] - shift[a]) / spacing + 1e-12));
    }
    std::vector<long> idx = lo;
    while (true) {
        Vec x(window.dim);
        for (int a = 0; a < window.dim; ++a) x[a] = shift[a] + idx[a] * spacing;
        if (window.contains(x)) {
            MarkedPoint mp;
            mp.point.id = cfg.size();
            mp.point.coords = std::move(x);
            cfg.points.push_back(std::move(mp));
        }
        int a = window.dim - 1;
        while (a >= 0 && idx[a] == hi[a]) {
            idx[a] = lo[a];
            --a;
        }
        if (a < 0) break;
        ++idx[a];
    }
    cfg.meta.generator = "shifted_lattice";
    std::ostringstream ps;
    ps << "spacing=" << spacing;
    cfg.meta.params = ps.str();
    cfg.meta.seed = seed;
    return cfg;
}

PointConfiguration attach_marks(PointConfiguration config, const MarkSpec& markspec,
                                uint64_t seed) {
    Rng rng(seed);
    for (MarkedPoint& mp : config.points) {
        switch (markspec.kind) {
            case MarkSpec::Kind::constant:
                mp.mark = markspec.a;
                break;
            case MarkSpec::Kind::exponential:
                mp.mark = rng.exponential(markspec.a);
                break;
            case MarkSpec::Kind::lognormal:
                mp.mark = std::exp(rng.normal(markspec.a, markspec.b));
                break;
            case MarkSpec::Kind::degenerate_zero:
                mp.mark = 0.0;
                break;
        }
    }
    return config;
}

}  // namespace percolab
