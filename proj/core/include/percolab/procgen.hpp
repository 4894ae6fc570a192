#pragma once
#include <array>
#include <cstdint>
#include <optional>

#include "percolab/geom.hpp"

namespace percolab {

struct PoissonSpec {
    double lambda = 1.0;
};
struct CoxVoronoiSpec {
    double lambda_pv = 1.0;   // generator intensity per unit area
    double lambda_lin = 1.0;  // point intensity per unit edge length
};
struct StraussSpec {
    double lambda_act = 1.0;
    double interaction_cost = 0.0;  // may be +infinity (hard core)
    double range = 1.0;
    int sweeps = 200;
};
struct ShiftedLatticeSpec {
    double spacing = 1.0;
};

struct MarkSpec {
    enum class Kind { constant, exponential, lognormal, degenerate_zero };
    Kind kind = Kind::constant;
    double a = 1.0;  // constant value / exponential rate / lognormal mu
    double b = 0.0;  // lognormal sigma

    static MarkSpec constant(double v);
    static MarkSpec exponential(double rate);
    static MarkSpec lognormal(double mu, double sigma);
    static MarkSpec degenerate_zero() { return MarkSpec{Kind::degenerate_zero, 0.0, 0.0}; }
};

struct SegmentSet {
    struct Segment {
        std::array<double, 2> a, b;
        double length() const;
    };
    std::vector<Segment> segments;
    double total_length = 0.0;

    void recompute_length();
};

PointConfiguration sample_poisson(double lambda, const Window& window, uint64_t seed);

// Voronoi edge skeleton of the generators, clipped to `window`. d = 2 only.
SegmentSet voronoi_edges(const PointConfiguration& generators, const Window& window);

// Poisson points on a fixed segment skeleton with linear intensity lambda_lin.
PointConfiguration sample_on_segments(const SegmentSet& skeleton, double lambda_lin,
                                      const Window& window, uint64_t seed);

// Cox process driven by the edge-length measure of a Poisson-Voronoi
// tessellation; generators are drawn on a window enlarged by 3/sqrt(lambda_pv)
// per side to suppress boundary artifacts.
PointConfiguration sample_cox_voronoi(double lambda_pv, double lambda_lin, const Window& window,
                                      uint64_t seed);

// Strauss-type pairwise-interaction Gibbs process via birth-death-move
// Metropolis-Hastings (empty boundary condition). One sweep is
// max(1, round(lambda_act * |W|)) proposals.
PointConfiguration sample_strauss(const StraussSpec& spec, const Window& window, uint64_t seed);

PointConfiguration sample_shifted_lattice(double spacing, const Window& window, uint64_t seed);

PointConfiguration attach_marks(PointConfiguration config, const MarkSpec& markspec,
                                uint64_t seed);

// number of unordered pairs at distance < range
long pair_count_within(const PointConfiguration& config, double range);

}  // namespace percolab
