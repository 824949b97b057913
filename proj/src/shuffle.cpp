#include "fdp/shuffle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fdp/logspace.hpp"
#include "fdp/parallel.hpp"
#include "fdp/special.hpp"

namespace fdp {

namespace {

// s_i = floor(i - (i+1)/(t+1)) for t = a/b, exact in integer arithmetic:
// (i+1)/(t+1) = b(i+1)/(a+b), so s_i = i - ceil(b(i+1)/(a+b)).
std::int64_t floor_index(std::int64_t i, std::int64_t a, std::int64_t b) {
    const std::int64_t num = b * (i + 1);
    const std::int64_t den = a + b;
    return i - (num + den - 1) / den;
}

struct Fraction {
    std::int64_t num = 0, den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Largest achievable likelihood ratio a/b strictly below r, with a,b >= 1 and
// a + b <= n. Returns {0,1} when no such ratio exists (knot at t -> 0+).
Fraction largest_ratio_below(double r, std::int64_t n) {
    Fraction best{0, 1};
    for (std::int64_t b = 1; b <= n - 1; ++b) {
        std::int64_t a = std::min<std::int64_t>(
            n - b, static_cast<std::int64_t>(std::ceil(r * static_cast<double>(b))) - 1);
        while (a >= 1 && static_cast<double>(a) / static_cast<double>(b) >= r) --a;
        if (a >= 1 && a * best.den > best.num * b) best = {a, b};
    }
    return best;
}

struct KnotSums {
    double alpha = 0.0;  // sum_i w_i F_i(s_i) over the window
    double bsum = 0.0;   // sum_i w_i F_i(s_i + 1) over the window
};

KnotSums knot_sums(const WeightWindow& win, std::int64_t a, std::int64_t b) {
    const std::int64_t m = win.hi - win.lo + 1;
    KnotSums out;
    out.alpha = par::block_sum(m, [&](std::int64_t j) {
        const std::int64_t i = win.lo + j;
        return std::exp(win.log_w[static_cast<std::size_t>(j)] +
                        binom_log_cdf(floor_index(i, a, b), i, 0.5));
    });
    out.bsum = par::block_sum(m, [&](std::int64_t j) {
        const std::int64_t i = win.lo + j;
        return std::exp(win.log_w[static_cast<std::size_t>(j)] +
                        binom_log_cdf(floor_index(i, a, b) + 1, i, 0.5));
    });
    return out;
}

}  // namespace

double ShuffleParams::w() const { return 1.0 / (std::exp(eps0) + 1.0); }
double ShuffleParams::p_c() const { return 2.0 / (std::exp(eps0) + 1.0); }

void ShuffleParams::validate() const {
    if (n < 1) throw std::invalid_argument("shuffle: n must be >= 1");
    if (!(eps0 > 0.0)) throw std::invalid_argument("shuffle: eps0 must be > 0");
    if (!(truncation_tau >= 0.0 && truncation_tau < 1e-3))
        throw std::invalid_argument("shuffle: truncation_tau outside [0, 1e-3)");
}

WeightWindow shuffle_weight_window(const ShuffleParams& params) {
    params.validate();
    const std::int64_t m = params.n - 1;
    const double pc = params.p_c();
    WeightWindow win;
    if (m == 0) {
        win.lo = win.hi = 0;
        win.log_w = {0.0};
        return win;
    }
    const double half_tail =
        params.truncation_tau > 0.0 ? std::log(0.5 * params.truncation_tau) : kNegInf;
    std::int64_t lo = 0, hi = m;
    if (params.truncation_tau > 0.0 && m > 4096) {
        const auto mode = static_cast<std::int64_t>(static_cast<double>(m) * pc);
        lo = mode;
        while (lo > 0 && binom_log_cdf(lo - 1, m, pc) > half_tail) --lo;
        hi = mode;
        while (hi < m && binom_log_sf(hi, m, pc) > half_tail) ++hi;
    }
    win.lo = lo;
    win.hi = hi;
    win.log_w.resize(static_cast<std::size_t>(hi - lo + 1));
    par::for_each(hi - lo + 1, [&](std::int64_t j) {
        win.log_w[static_cast<std::size_t>(j)] = binom_log_pmf(lo + j, m, pc);
    });
    double tail = 0.0;
    if (lo > 0) tail += std::exp(binom_log_cdf(lo - 1, m, pc));
    if (hi < m) tail += std::exp(binom_log_sf(hi, m, pc));
    win.tail_mass = tail;
    return win;
}

PiecewiseLinearTradeoff shuffle_base_knots(const ShuffleParams& params, ThresholdPolicy policy,
                                           int grid_points, std::int64_t all_cap) {
    params.validate();
    const std::int64_t n = params.n;

    if (policy == ThresholdPolicy::all_knots) {
        if (n > all_cap)
            throw std::invalid_argument("shuffle_base_knots: n exceeds the all-knots cap");
        // full window: the all-knots path is the exact reference
        ShuffleParams full = params;
        full.truncation_tau = 0.0;
        const WeightWindow win = shuffle_weight_window(full);

        // distinct achievable ratios a/b in reduced form, ascending
        std::vector<std::pair<std::int32_t, std::int32_t>> fr;
        for (std::int64_t b = 1; b <= n - 1; ++b)
            for (std::int64_t a = 1; a + b <= n; ++a)
                if (std::gcd(a, b) == 1)
                    fr.emplace_back(static_cast<std::int32_t>(a), static_cast<std::int32_t>(b));
        std::sort(fr.begin(), fr.end(), [](const auto& x, const auto& y) {
            return static_cast<std::int64_t>(x.first) * y.second <
                   static_cast<std::int64_t>(y.first) * x.second;
        });

        NeumaierSum alpha, bsum;
        for (std::int64_t i = 0; i <= win.hi; ++i)
            bsum.add(std::exp(win.log_w[static_cast<std::size_t>(i)] + binom_log_pmf(0, i, 0.5)));

        std::vector<Knot> knots;
        knots.reserve(fr.size() + 1);
        knots.push_back({0.0, 1.0 - bsum.value()});
        for (const auto& [a32, b32] : fr) {
            const std::int64_t a = a32, b = b32;
            // components with an atom at this ratio: i = m(a+b) - 1
            for (std::int64_t i = a + b - 1; i <= n - 1; i += a + b) {
                const std::int64_t mult = (i + 1) / (a + b);
                const double lw = win.log_w[static_cast<std::size_t>(i)];
                alpha.add(std::exp(lw + binom_log_pmf(mult * a - 1, i, 0.5)));
                bsum.add(std::exp(lw + binom_log_pmf(mult * a, i, 0.5)));
            }
            knots.push_back({alpha.value(), std::max(1.0 - bsum.value(), 0.0)});
        }
        return PiecewiseLinearTradeoff(std::move(knots));
    }

    // grid policy: conservative tangent envelope at log-spaced ratio thresholds
    if (grid_points < 2) throw std::invalid_argument("shuffle_base_knots: grid needs >= 2 points");
    const WeightWindow win = shuffle_weight_window(params);
    const double t_lo = 1.0 / static_cast<double>(std::max<std::int64_t>(n - 1, 1));
    const double t_hi = static_cast<double>(std::max<std::int64_t>(n - 1, 1));
    std::vector<TangentLine> lines;
    lines.reserve(static_cast<std::size_t>(grid_points));
    for (int k = 0; k < grid_points; ++k) {
        const double t =
            std::exp(std::log(t_lo) +
                     (std::log(t_hi) - std::log(t_lo)) * k / static_cast<double>(grid_points - 1));
        // rational snap keeps the knot an exact vertex of the true curve
        const Fraction f = largest_ratio_below(std::nextafter(t, 2.0 * t_hi), params.n);
        if (f.num == 0) continue;
        const KnotSums s = knot_sums(win, f.num, f.den);
        const double beta = (1.0 - win.tail_mass) - s.bsum;
        lines.push_back({s.alpha, beta, -1.0 / f.value()});
    }
    return curve_from_tangents(std::move(lines));
}

PiecewiseLinearTradeoff shuffle_curve(const ShuffleParams& params, ThresholdPolicy policy,
                                      int grid_points, std::int64_t all_cap) {
    const PiecewiseLinearTradeoff base = shuffle_base_knots(params, policy, grid_points, all_cap);
    const double w = params.w();
    return symmetrize(convex_combination(identity_curve(), 2.0 * w, base, 1.0 - 2.0 * w));
}

ShuffleDeltaResult shuffle_delta(const ShuffleParams& params, double epsilon) {
    params.validate();
    if (epsilon < 0.0) throw std::invalid_argument("shuffle_delta: epsilon must be >= 0");
    const double w = params.w();
    const double ee = std::exp(epsilon);

    // f_Shuffle segments at ratio r have slope -2w - (1-2w)/r; the conjugate
    // argmax is the last knot whose outgoing slope is still below -e^eps,
    // i.e. the largest achievable ratio below r*.
    const double rstar = (1.0 - 2.0 * w) / (ee - 2.0 * w);
    const Fraction t = largest_ratio_below(rstar, params.n);

    const WeightWindow win = shuffle_weight_window(params);
    const KnotSums s = knot_sums(win, t.num, t.den);

    ShuffleDeltaResult out;
    out.t_num = t.num;
    out.t_den = t.den;
    out.t_eps = t.value();
    out.alpha_at_knot = s.alpha;
    out.tail_mass = win.tail_mass;
    out.delta = std::clamp((2.0 * w - ee) * s.alpha + (1.0 - 2.0 * w) * s.bsum + win.tail_mass,
                           0.0, 1.0);
    return out;
}

ShuffleEpsilonResult shuffle_epsilon(const ShuffleParams& params, double delta) {
    params.validate();
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("shuffle_epsilon: delta must be in (0,1)");
    ShuffleDeltaResult d0 = shuffle_delta(params, 0.0);
    if (d0.delta <= delta) return {0.0, true, d0};
    double lo = 0.0, hi = 1.0;
    while (shuffle_delta(params, hi).delta > delta) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0)
            throw std::runtime_error(
                "shuffle_epsilon: target delta is below the curve floor; no epsilon satisfies it");
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (shuffle_delta(params, mid).delta > delta ? lo : hi) = mid;
    }
    return {hi, false, shuffle_delta(params, hi)};
}

}  // namespace fdp
