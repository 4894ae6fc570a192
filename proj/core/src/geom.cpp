#include "percolab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace percolab {

Window::Window(Vec lo, Vec hi, BoundaryMode b)
    : dim(static_cast<int>(lo.size())), lower(std::move(lo)), upper(std::move(hi)), boundary(b) {
    if (lower.size() != upper.size())
        throw std::invalid_argument("Window: corner dimension mismatch");
    for (int a = 0; a < dim; ++a)
        if (!(lower[a] < upper[a]))
            throw std::invalid_argument("Window: lower must be componentwise below upper");
}

Window Window::box(int dim, double size, BoundaryMode b) {
    return Window(Vec(dim, 0.0), Vec(dim, size), b);
}

double Window::volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= extent(a);
    return v;
}

double Window::diameter() const {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += extent(a) * extent(a);
    return std::sqrt(s);
}

bool Window::contains(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim) return false;
    for (int a = 0; a < dim; ++a)
        if (x[a] < lower[a] || x[a] > upper[a]) return false;
    return true;
}

Vec Window::wrap(Vec x) const {
    for (int a = 0; a < dim; ++a) {
        double e = extent(a);
        double t = std::fmod(x[a] - lower[a], e);
        if (t < 0) t += e;
        x[a] = lower[a] + t;
    }
    return x;
}

Window Window::enlarged(double margin) const {
    Vec lo = lower, hi = upper;
    for (int a = 0; a < dim; ++a) {
        lo[a] -= margin;
        hi[a] += margin;
    }
    return Window(std::move(lo), std::move(hi), boundary);
}

Norm Norm::pnorm(double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("Norm: p must be >= 1");
    return Norm{p};
}

double Norm::operator()(const Vec& diff) const {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double d : diff) m = std::max(m, std::abs(d));
        return m;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (double d : diff) s += d * d;
        return std::sqrt(s);
    }
    if (p == 1.0) {
        double s = 0.0;
        for (double d : diff) s += std::abs(d);
        return s;
    }
    double s = 0.0;
    for (double d : diff) s += std::pow(std::abs(d), p);
    return std::pow(s, 1.0 / p);
}

double distance(const Norm& norm, const Window& window, const Vec& a, const Vec& b) {
    if (a.size() != b.size() || static_cast<int>(a.size()) != window.dim)
        throw std::invalid_argument("distance: dimension mismatch");
    Vec diff(a.size());
    for (size_t k = 0; k < a.size(); ++k) {
        double d = a[k] - b[k];
        if (window.boundary == BoundaryMode::torus) {
            double e = window.extent(static_cast<int>(k));
            d = std::fmod(d, e);
            if (d > 0.5 * e) d -= e;
            if (d < -0.5 * e) d += e;
        }
        diff[k] = d;
    }
    return norm(diff);
}

void PointConfiguration::validate() const {
    for (int i = 0; i < size(); ++i) {
        const MarkedPoint& mp = points[i];
        if (mp.point.id != i)
            throw std::invalid_argument("PointConfiguration: ids must be contiguous from 0");
        if (static_cast<int>(mp.point.coords.size()) != window.dim)
            throw std::invalid_argument("PointConfiguration: coordinate dimension mismatch");
        if (mp.mark < 0.0)
            throw std::invalid_argument("PointConfiguration: marks must be nonnegative");
        if (window.boundary == BoundaryMode::hard && !window.contains(mp.point.coords))
            throw std::invalid_argument("PointConfiguration: point outside hard window");
    }
}

NonequidistantReport nonequidistant_check(const PointConfiguration& config, double tol) {
    if (tol < 0.0) throw std::invalid_argument("nonequidistant_check: tol must be >= 0");
    NonequidistantReport rep;
    const int n = config.size();

    struct Entry {
        double d;
        int a, b;
    };
    std::vector<Entry> dists;
    dists.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            dists.push_back({distance(config, i, j), i, j});
    std::sort(dists.begin(), dists.end(), [](const Entry& x, const Entry& y) { return x.d < y.d; });
    for (size_t k = 0; k + 1 < dists.size(); ++k) {
        if (dists[k + 1].d - dists[k].d <= tol) {
            rep.pair_violations.push_back(
                {dists[k].a, dists[k].b, dists[k + 1].a, dists[k + 1].b, dists[k].d, dists[k + 1].d});
        }
    }

    std::vector<std::pair<double, int>> norms;
    norms.reserve(n);
    Vec origin(config.window.dim, 0.0);
    for (int i = 0; i < n; ++i) norms.emplace_back(config.norm(config.coords(i)), i);
    std::sort(norms.begin(), norms.end());
    for (size_t k = 0; k + 1 < norms.size(); ++k) {
        if (norms[k + 1].first - norms[k].first <= tol) {
            rep.origin_violations.push_back(
                {norms[k].second, norms[k + 1].second, norms[k].first, norms[k + 1].first});
        }
    }

    rep.ok = rep.pair_violations.empty() && rep.origin_violations.empty();
    return rep;
}

PointConfiguration make_configuration(Window window, Norm norm, const std::vector<Vec>& coords,
                                      const std::vector<double>& marks) {
    PointConfiguration c;
    c.window = std::move(window);
    c.norm = norm;
    c.points.reserve(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) {
        MarkedPoint mp;
        mp.point.id = static_cast<int>(i);
        mp.point.coords = coords[i];
        mp.mark = marks.empty() ? 0.0 : marks.at(i);
        c.points.push_back(std::move(mp));
    }
    c.meta.generator = "manual";
    c.validate();
    return c;
}

}  // namespace percolab
