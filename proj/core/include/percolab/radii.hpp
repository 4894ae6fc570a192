#pragma once
#include <cstdint>

#include "percolab/geom.hpp"

namespace percolab {

// hinge overlap penalty v(x, rho, rho') = max{rho + rho' - x, 0}
double potential_eval(double x, double rho, double rho_prime);

struct PriorSpec {
    enum class Kind { exponential };
    Kind kind = Kind::exponential;
    double rate = 1.0;  // mu > 0

    static PriorSpec exponential(double mu);
};

struct RadiiState {
    PointConfiguration config;
    std::vector<double> radii;  // one per point, >= 0
    double beta = 0.0;
    PriorSpec prior{};
    long sweep = 0;

    void validate() const;
};

RadiiState make_radii_state(PointConfiguration config, double beta, PriorSpec prior,
                            uint64_t seed);  // radii initialized i.i.d. from the prior

// sum over unordered pairs of the hinge potential
double total_energy(const RadiiState& state);            // grid-accelerated
double total_energy_reference(const RadiiState& state);  // O(n^2)

// Exact draw from the single-site conditional
//   density(rho) ~ mu e^{-mu rho} exp(-beta sum_{j != i} max{rho + rho_j - d_ij, 0}),
// piecewise exponential with breakpoints at sorted (d_ij - rho_j)^+.
double conditional_radius_sample(const RadiiState& state, int i, uint64_t seed);

// One systematic scan i = 0..n-1 of conditional resampling.
RadiiState gibbs_sweep(RadiiState state, uint64_t seed);

// number of i with distance(x_i, location) < rho_i
int coverage_count(const RadiiState& state, const Vec& location);

struct CampbellCheck {
    double mc_estimate = 0.0;
    double stderr_ = 0.0;
    double analytic = 0.0;  // lambda * pi * E[rho^2] = lambda * pi * 2 / mu^2
};

// beta = 0 reference regime, d = 2: Monte Carlo coverage of the window center
// over fresh PPP + i.i.d. radii replicates vs the intensity-integral value.
CampbellCheck campbell_coverage_check(double lambda, const PriorSpec& prior, const Window& window,
                                      int replicates, uint64_t seed);

// test hook: exact log of the unnormalized conditional density of radius rho
// at site i (for quadrature oracles)
double conditional_log_density(const RadiiState& state, int i, double rho);

}  // namespace percolab
