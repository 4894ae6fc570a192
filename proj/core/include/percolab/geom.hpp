#pragma once
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace percolab {

using Vec = std::vector<double>;

enum class BoundaryMode { hard, torus };

// Finite observation window, axis-aligned box in R^d.
struct Window {
    int dim = 2;
    Vec lower;
    Vec upper;
    BoundaryMode boundary = BoundaryMode::hard;

    Window() = default;
    Window(Vec lo, Vec hi, BoundaryMode b = BoundaryMode::hard);

    // convenience: [0, size]^d
    static Window box(int dim, double size, BoundaryMode b = BoundaryMode::hard);

    double extent(int axis) const { return upper[axis] - lower[axis]; }
    double volume() const;
    double diameter() const;  // Euclidean diagonal, used for tolerance scales
    bool contains(const Vec& x) const;
    // reduce coordinates into the window (torus mode)
    Vec wrap(Vec x) const;
    // enlarged copy (same boundary mode), margin per side
    Window enlarged(double margin) const;
};

// p-norm, p >= 1 or infinity.
struct Norm {
    double p = 2.0;  // std::numeric_limits<double>::infinity() for sup norm

    static Norm euclidean() { return Norm{2.0}; }
    static Norm sup() { return Norm{std::numeric_limits<double>::infinity()}; }
    static Norm pnorm(double p);

    double operator()(const Vec& diff) const;
};

struct Point {
    int id = 0;
    Vec coords;
};

struct MarkedPoint {
    Point point;
    double mark = 0.0;
};

struct ConfigMeta {
    std::string generator;
    std::string params;
    uint64_t seed = 0;
};

struct PointConfiguration {
    Window window;
    Norm norm = Norm::euclidean();
    std::vector<MarkedPoint> points;
    ConfigMeta meta;

    int size() const { return static_cast<int>(points.size()); }
    const Vec& coords(int id) const { return points[id].point.coords; }
    double mark(int id) const { return points[id].mark; }

    // throws std::invalid_argument on id/window violations
    void validate() const;
};

// Distance between coordinate vectors under the window's boundary mode.
// Torus mode uses the minimal-image convention per axis.
double distance(const Norm& norm, const Window& window, const Vec& a, const Vec& b);

inline double distance(const PointConfiguration& c, int i, int j) {
    return distance(c.norm, c.window, c.coords(i), c.coords(j));
}

struct NonequidistantReport {
    bool ok = true;
    // two distinct unordered pairs realizing (near-)equal distance
    struct PairClash {
        int a1, b1, a2, b2;
        double d1, d2;
    };
    std::vector<PairClash> pair_violations;
    // two distinct points with (near-)equal norm from the origin
    struct OriginClash {
        int i, j;
        double ni, nj;
    };
    std::vector<OriginClash> origin_violations;
};

NonequidistantReport nonequidistant_check(const PointConfiguration& config, double tol);

// Helper for building simple configurations in tests and tools.
PointConfiguration make_configuration(Window window, Norm norm,
                                      const std::vector<Vec>& coords,
                                      const std::vector<double>& marks = {});

}  // namespace percolab
