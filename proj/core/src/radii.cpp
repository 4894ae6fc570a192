#include "percolab/radii.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "percolab/index.hpp"
#include "percolab/procgen.hpp"
#include "percolab/rng.hpp"

namespace percolab {

double potential_eval(double x, double rho, double rho_prime) {
    if (x < 0.0 || rho < 0.0 || rho_prime < 0.0)
        throw std::invalid_argument("potential_eval: arguments must be >= 0");
    return std::max(rho + rho_prime - x, 0.0);
}

PriorSpec PriorSpec::exponential(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("PriorSpec: mu must be > 0");
    return PriorSpec{Kind::exponential, mu};
}

void RadiiState::validate() const {
    if (static_cast<int>(radii.size()) != config.size())
        throw std::invalid_argument("RadiiState: radii length must equal point count");
    if (beta < 0.0) throw std::invalid_argument("RadiiState: beta must be >= 0");
    for (double r : radii)
        if (r < 0.0) throw std::invalid_argument("RadiiState: radii must be >= 0");
}

RadiiState make_radii_state(PointConfiguration config, double beta, PriorSpec prior,
                            uint64_t seed) {
    RadiiState st;
    st.config = std::move(config);
    st.beta = beta;
    st.prior = prior;
    Rng rng(seed);
    st.radii.resize(st.config.size());
    for (double& r : st.radii) r = rng.exponential(prior.rate);
    st.validate();
    return st;
}

double total_energy_reference(const RadiiState& state) {
    const int n = state.config.size();
    double e = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            e += potential_eval(distance(state.config, i, j), state.radii[i], state.radii[j]);
    return e;
}

double total_energy(const RadiiState& state) {
    const int n = state.config.size();
    if (n < 2) return 0.0;
    double rho_max = *std::max_element(state.radii.begin(), state.radii.end());
    if (rho_max <= 0.0) return 0.0;
    SpatialIndex index(state.config);
    double e = 0.0;
    // the hinge vanishes for d >= rho_i + rho_j, so 2 rho_max bounds the range
    for (int i = 0; i < n; ++i) {
        for (int j : index.query_radius(state.config.coords(i), state.radii[i] + rho_max, i)) {
            if (j <= i) continue;
            e += potential_eval(distance(state.config, i, j), state.radii[i], state.radii[j]);
        }
    }
    return e;
}

double conditional_log_density(const RadiiState& state, int i, double rho) {
    double l = -state.prior.rate * rho;
    for (int j = 0; j < state.config.size(); ++j) {
        if (j == i) continue;
        l -= state.beta *
             potential_eval(distance(state.config, i, j), rho, state.radii[j]);
    }
    return l;
}

double conditional_radius_sample(const RadiiState& state, int i, uint64_t seed) {
    const double mu = state.prior.rate;
    const double beta = state.beta;
    Rng rng(seed);
    if (beta <= 0.0 || state.config.size() <= 1) return rng.exponential(mu);

    // breakpoints (d_ij - rho_j)^+; the penalty for neighbor j is active on
    // rho > b_j, adding beta to the local exponential rate
    std::vector<double> breaks;
    breaks.reserve(state.config.size() - 1);
    int active0 = 0;
    for (int j = 0; j < state.config.size(); ++j) {
        if (j == i) continue;
        double b = distance(state.config, i, j) - state.radii[j];
        if (b <= 0.0)
            ++active0;
        else
            breaks.push_back(b);
    }
    std::sort(breaks.begin(), breaks.end());

    const size_t nseg = breaks.size() + 1;
    std::vector<double> seg_start(nseg), seg_rate(nseg), seg_logmass(nseg), seg_logstart(nseg);
    double log_at_start = 0.0;
    double s = 0.0;
    int active = active0;
    for (size_t t = 0; t < nseg; ++t) {
        seg_start[t] = s;
        seg_rate[t] = mu + beta * active;
        seg_logstart[t] = log_at_start;
        double next = t < breaks.size() ? breaks[t] : std::numeric_limits<double>::infinity();
        double width = next - s;
        if (std::isinf(width))
            seg_logmass[t] = log_at_start - std::log(seg_rate[t]);
        else
            seg_logmass[t] =
                log_at_start + std::log1p(-std::exp(-seg_rate[t] * width)) - std::log(seg_rate[t]);
        log_at_start -= seg_rate[t] * width;
        s = next;
        ++active;
    }

    // segment selection on normalized masses
    double lmax = *std::max_element(seg_logmass.begin(), seg_logmass.end());
    std::vector<double> w(nseg);
    double wsum = 0.0;
    for (size_t t = 0; t < nseg; ++t) {
        w[t] = std::exp(seg_logmass[t] - lmax);
        wsum += w[t];
    }
    double pick = rng.uniform() * wsum;
    size_t t = 0;
    for (; t + 1 < nseg; ++t) {
        if (pick < w[t]) break;
        pick -= w[t];
    }

    // inverse CDF within the chosen exponential segment
    double u = rng.uniform();
    double r = seg_rate[t];
    double width = t < breaks.size() ? breaks[t] - seg_start[t]
                                     : std::numeric_limits<double>::infinity();
    double rho;
    if (std::isinf(width))
        rho = seg_start[t] - std::log1p(-u) / r;
    else
        rho = seg_start[t] - std::log1p(-u * (1.0 - std::exp(-r * width))) / r;
    return std::max(rho, 0.0);
}

RadiiState gibbs_sweep(RadiiState state, uint64_t seed) {
    for (int i = 0; i < state.config.size(); ++i)
        state.radii[i] = conditional_radius_sample(state, i, child_seed(seed, i));
    ++state.sweep;
    return state;
}

int coverage_count(const RadiiState& state, const Vec& location) {
    int c = 0;
    for (int i = 0; i < state.config.size(); ++i) {
        if (distance(state.config.norm, state.config.window, state.config.coords(i), location) <
            state.radii[i])
            ++c;
    }
    return c;
}

CampbellCheck campbell_coverage_check(double lambda, const PriorSpec& prior, const Window& window,
                                      int replicates, uint64_t seed) {
    if (window.dim != 2) throw std::invalid_argument("campbell_coverage_check: d = 2 only");
    if (replicates < 1) throw std::invalid_argument("campbell_coverage_check: replicates >= 1");
    CampbellCheck res;
    res.analytic = lambda * std::numbers::pi * 2.0 / (prior.rate * prior.rate);
    Vec center(2);
    for (int a = 0; a < 2; ++a) center[a] = 0.5 * (window.lower[a] + window.upper[a]);
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < replicates; ++r) {
        PointConfiguration cfg = sample_poisson(lambda, window, child_seed(seed, r, 0));
        RadiiState st = make_radii_state(std::move(cfg), 0.0, prior, child_seed(seed, r, 1));
        int c = coverage_count(st, center);
        sum += c;
        sum2 += static_cast<double>(c) * c;
    }
    res.mc_estimate = sum / replicates;
    double var = std::max(0.0, sum2 / replicates - res.mc_estimate * res.mc_estimate);
    res.stderr_ = replicates > 1 ? std::sqrt(var / (replicates - 1)) : 0.0;
    return res;
}

}  // namespace percolab
