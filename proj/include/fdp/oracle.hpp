#pragma once

#include <cstdint>
#include <span>

#include "fdp/shuffle.hpp"
#include "fdp/tradeoff.hpp"

namespace fdp {

// Finite pair of distributions over a shared atom list, masses in log space.
struct DiscretePair {
    std::vector<double> log_p;
    std::vector<double> log_q;

    std::size_t size() const { return log_p.size(); }
    void validate() const;  // both masses sum to 1 within 1e-12, no all-zero atom
};

DiscretePair pair_from_masses(std::span<const double> p, std::span<const double> q);

// Dominating mixture pair (P, Q) of the shuffled mechanism, atoms (a, b)
// aggregated by their exact reduced ratio a/b. O(n^2) atoms.
DiscretePair build_shuffle_pair(const ShuffleParams& params, std::int64_t cap = 20000);
// The base pair (P0, Q0) before mixing, same aggregation.
DiscretePair build_shuffle_base_pair(const ShuffleParams& params, std::int64_t cap = 20000);

// Exact trade-off curve by likelihood-ratio sorting (Neyman-Pearson test
// family); ties bucketed at 1e-14 in the log ratio.
PiecewiseLinearTradeoff exact_tradeoff(const DiscretePair& pair);

// H_gamma(P||Q) = sum (p - gamma q)_+, exact.
double exact_hockey_stick(const DiscretePair& pair, double gamma);

// Smallest eps with H_{e^eps} <= delta, bisected to 1e-6.
EpsilonResult exact_epsilon(const DiscretePair& pair, double delta);

// Same quantities for the full shuffle mixture pair computed structurally
// (per-component binomial tail sums, no atom table); exact up to the weight
// window's tail mass. Handles n = 10000 in milliseconds.
double shuffle_mixture_hockey_stick(const ShuffleParams& params, double gamma);
EpsilonResult shuffle_mixture_exact_epsilon(const ShuffleParams& params, double delta);

// Sampling attack estimate of H_gamma for the shuffle mixture with
// Clopper-Pearson interval bounds on the two region masses.
struct McHockeyStick {
    double estimate = 0.0;
    double lower = 0.0;   // P_lo - gamma * Q_hi at confidence 1 - alpha
    double upper = 0.0;
    std::int64_t samples = 0;
};
McHockeyStick shuffle_mixture_hockey_stick_mc(const ShuffleParams& params, double gamma,
                                              std::int64_t samples, std::uint64_t seed,
                                              double confidence_alpha = 0.05);

}  // namespace fdp
