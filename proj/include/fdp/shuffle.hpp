#pragma once

#include <cstdint>
#include <vector>

#include "fdp/tradeoff.hpp"

namespace fdp {

// Shuffled eps0-DP local randomizer over n users. The dominating pair mixes
// P0/Q0 with weight w = 1/(e^eps0 + 1); the binomial count C has parameter
// p_c = 2/(e^eps0 + 1) over n-1 trials.
struct ShuffleParams {
    std::int64_t n = 0;
    double eps0 = 0.0;
    double truncation_tau = 1e-15;

    double w() const;
    double p_c() const;
    void validate() const;
};

// Contiguous index window of Binom(n-1, p_c) holding all but <= tau tail mass.
struct WeightWindow {
    std::int64_t lo = 0;
    std::int64_t hi = 0;                // inclusive
    std::vector<double> log_w;          // log P[C = i], i in [lo, hi]
    double tail_mass = 0.0;             // mass outside the window
};
WeightWindow shuffle_weight_window(const ShuffleParams& params);

enum class ThresholdPolicy { all_knots, grid };

// Exact piecewise-linear T(P0, Q0). Policy all_knots enumerates every
// achievable likelihood ratio a/b (O(n^2) knots, n capped); grid samples
// log-spaced thresholds and returns the conservative tangent envelope.
PiecewiseLinearTradeoff shuffle_base_knots(const ShuffleParams& params, ThresholdPolicy policy,
                                           int grid_points = 200, std::int64_t all_cap = 2000);

// Mechanism guarantee curve: symmetrize(2w Id + (1-2w) T(P0,Q0)).
PiecewiseLinearTradeoff shuffle_curve(const ShuffleParams& params,
                                      ThresholdPolicy policy = ThresholdPolicy::all_knots,
                                      int grid_points = 200, std::int64_t all_cap = 2000);

struct ShuffleDeltaResult {
    double delta = 0.0;
    double t_eps = 0.0;           // optimizing likelihood-ratio threshold a/b
    std::int64_t t_num = 0;       // a
    std::int64_t t_den = 1;       // b
    double alpha_at_knot = 0.0;
    double tail_mass = 0.0;       // truncated weight mass, added to delta
};

// delta(eps) = (2w - e^eps) sum_i w_i F_i(s_i) + (1-2w) sum_i w_i F_i(s_i+1)
// at the optimizing knot threshold t_eps; exact conjugate of the shuffle
// curve up to the (conservatively added) truncation tail.
ShuffleDeltaResult shuffle_delta(const ShuffleParams& params, double epsilon);

struct ShuffleEpsilonResult {
    double epsilon = 0.0;
    bool already_satisfied = false;
    ShuffleDeltaResult at;
};
// Bisection over the monotone delta map to 1e-6 in eps.
ShuffleEpsilonResult shuffle_epsilon(const ShuffleParams& params, double delta);

}  // namespace fdp
