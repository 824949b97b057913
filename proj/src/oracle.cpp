#include "fdp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "fdp/logspace.hpp"
#include "fdp/parallel.hpp"
#include "fdp/special.hpp"

namespace fdp {

namespace {

double log_mass_sum(const std::vector<double>& log_m) {
    return log_sum_exp(std::span<const double>(log_m.data(), log_m.size()));
}

// mixture likelihood ratio at atom (a, b): ((1-w)a + wb) / ((1-w)b + wa)
bool mixture_ratio_at_least(std::int64_t a, std::int64_t b, double w, double gamma) {
    const double da = static_cast<double>(a), db = static_cast<double>(b);
    return (1.0 - w) * da + w * db >= gamma * ((1.0 - w) * db + w * da);
}

DiscretePair build_pair_impl(const ShuffleParams& params, std::int64_t cap, bool mixed) {
    params.validate();
    if (params.n > cap) throw std::invalid_argument("build_shuffle_pair: n exceeds the atom cap");
    ShuffleParams full = params;
    full.truncation_tau = 0.0;
    const WeightWindow win = shuffle_weight_window(full);
    const double w = params.w();
    const double lw1 = std::log1p(-w), lw2 = std::log(w);

    // one atom per raw (a, b); equal-ratio atoms are grouped later by the
    // likelihood-ratio sort (exact rational comparison below)
    struct Atom {
        std::int32_t a, b;
        double lp, lq;
    };
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(params.n) * (static_cast<std::size_t>(params.n) + 3) / 2);
    for (std::int64_t i = 0; i < params.n; ++i) {
        const double lwi = win.log_w[static_cast<std::size_t>(i)];
        for (std::int64_t a = 0; a <= i + 1; ++a) {
            const std::int64_t b = i + 1 - a;
            const double lp0 = lwi + binom_log_pmf(a - 1, i, 0.5);
            const double lq0 = lwi + binom_log_pmf(a, i, 0.5);
            double lp = lp0, lq = lq0;
            if (mixed) {
                lp = log_add(lw1 + lp0, lw2 + lq0);
                lq = log_add(lw1 + lq0, lw2 + lp0);
            }
            atoms.push_back({static_cast<std::int32_t>(a), static_cast<std::int32_t>(b), lp, lq});
        }
    }
    // ascending base ratio a/b, exact rational comparison
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) {
        const std::int64_t lhs = static_cast<std::int64_t>(x.a) * y.b;
        const std::int64_t rhs = static_cast<std::int64_t>(y.a) * x.b;
        return lhs != rhs ? lhs < rhs : x.a < y.a;
    });

    DiscretePair pair;
    pair.log_p.reserve(atoms.size());
    pair.log_q.reserve(atoms.size());
    for (const Atom& at : atoms) {
        pair.log_p.push_back(at.lp);
        pair.log_q.push_back(at.lq);
    }
    return pair;
}

}  // namespace

void DiscretePair::validate() const {
    if (log_p.empty() || log_p.size() != log_q.size())
        throw std::invalid_argument("DiscretePair: mass arrays empty or mismatched");
    for (std::size_t i = 0; i < log_p.size(); ++i)
        if (log_p[i] == kNegInf && log_q[i] == kNegInf)
            throw std::invalid_argument("DiscretePair: atom with zero mass under both P and Q");
    if (std::abs(std::expm1(log_mass_sum(log_p))) > 1e-12 ||
        std::abs(std::expm1(log_mass_sum(log_q))) > 1e-12)
        throw std::invalid_argument("DiscretePair: masses must each sum to 1");
}

DiscretePair pair_from_masses(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("pair_from_masses: size mismatch");
    DiscretePair out;
    out.log_p.reserve(p.size());
    out.log_q.reserve(q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0 || q[i] < 0.0) throw std::invalid_argument("pair_from_masses: negative mass");
        out.log_p.push_back(p[i] > 0.0 ? std::log(p[i]) : kNegInf);
        out.log_q.push_back(q[i] > 0.0 ? std::log(q[i]) : kNegInf);
    }
    return out;
}

DiscretePair build_shuffle_pair(const ShuffleParams& params, std::int64_t cap) {
    return build_pair_impl(params, cap, true);
}

DiscretePair build_shuffle_base_pair(const ShuffleParams& params, std::int64_t cap) {
    return build_pair_impl(params, cap, false);
}

PiecewiseLinearTradeoff exact_tradeoff(const DiscretePair& pair) {
    pair.validate();
    const std::size_t m = pair.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    auto ratio = [&](std::size_t i) {
        if (pair.log_q[i] == kNegInf) return std::numeric_limits<double>::infinity();
        if (pair.log_p[i] == kNegInf) return -std::numeric_limits<double>::infinity();
        return pair.log_p[i] - pair.log_q[i];
    };
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ratio(a) < ratio(b); });

    std::vector<Knot> knots;
    knots.reserve(m + 2);
    knots.push_back({0.0, 1.0});
    NeumaierSum pacc, qacc;
    std::size_t i = 0;
    while (i < m) {
        // bucket ties within 1e-14 of the group's first log ratio
        const double r0 = ratio(order[i]);
        std::size_t j = i;
        while (j < m && (std::isinf(r0) ? ratio(order[j]) == r0 : ratio(order[j]) - r0 <= 1e-14))
            ++j;
        for (std::size_t k = i; k < j; ++k) {
            pacc.add(std::exp(pair.log_p[order[k]]));
            qacc.add(std::exp(pair.log_q[order[k]]));
        }
        knots.push_back({std::min(pacc.value(), 1.0), std::max(1.0 - qacc.value(), 0.0)});
        i = j;
    }
    return PiecewiseLinearTradeoff(std::move(knots));
}

double exact_hockey_stick(const DiscretePair& pair, double gamma) {
    if (gamma < 1.0) throw std::invalid_argument("exact_hockey_stick: gamma must be >= 1");
    const double lg = std::log(gamma);
    NeumaierSum acc;
    for (std::size_t i = 0; i < pair.size(); ++i) {
        const double lp = pair.log_p[i], lq = pair.log_q[i];
        if (lp == kNegInf) continue;
        if (lq == kNegInf) {
            acc.add(std::exp(lp));
        } else if (lp - lq > lg) {
            acc.add(std::exp(lp) * -std::expm1(lg + lq - lp));
        }
    }
    return std::min(acc.value(), 1.0);
}

namespace {

EpsilonResult invert_monotone_delta(const std::function<double(double)>& delta_of_eps,
                                    double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("exact_epsilon: delta must be in (0,1)");
    if (delta_of_eps(0.0) <= delta) return {0.0, true};
    double lo = 0.0, hi = 1.0;
    while (delta_of_eps(hi) > delta) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0)
            throw std::runtime_error("exact_epsilon: delta below the pair's distinguishable floor");
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (delta_of_eps(mid) > delta ? lo : hi) = mid;
    }
    return {hi, false};
}

}  // namespace

EpsilonResult exact_epsilon(const DiscretePair& pair, double delta) {
    return invert_monotone_delta(
        [&](double eps) { return exact_hockey_stick(pair, std::exp(eps)); }, delta);
}

double shuffle_mixture_hockey_stick(const ShuffleParams& params, double gamma) {
    params.validate();
    if (gamma < 1.0) throw std::invalid_argument("shuffle_mixture_hockey_stick: gamma must be >= 1");
    const double w = params.w();
    const double c1 = (1.0 - w) - gamma * w;
    if (c1 <= 0.0) return 0.0;  // gamma at or beyond e^eps0: no positive part
    const double c2 = w - gamma * (1.0 - w);
    const double r = (gamma * (1.0 - w) - w) / c1;  // atoms with a/b >= r contribute

    const WeightWindow win = shuffle_weight_window(params);
    const std::int64_t m = win.hi - win.lo + 1;
    return par::block_sum(m, [&](std::int64_t j) {
        const std::int64_t i = win.lo + j;
        // smallest a with mixture ratio >= gamma among atoms (a, i+1-a)
        std::int64_t amin =
            static_cast<std::int64_t>(std::ceil(r * static_cast<double>(i + 1) / (1.0 + r))) ;
        amin = std::clamp<std::int64_t>(amin, 1, i + 2);
        while (amin <= i + 1 && !mixture_ratio_at_least(amin, i + 1 - amin, w, gamma)) ++amin;
        while (amin > 1 && mixture_ratio_at_least(amin - 1, i + 2 - amin, w, gamma)) --amin;
        if (amin > i + 1) return 0.0;
        const double lwi = win.log_w[static_cast<std::size_t>(j)];
        const double t1 = std::exp(binom_log_sf(amin - 2, i, 0.5));  // P0 mass of a >= amin
        const double t2 = std::exp(binom_log_sf(amin - 1, i, 0.5));  // Q0 mass of a >= amin
        return std::max(std::exp(lwi) * (c1 * t1 + c2 * t2), 0.0);
    });
}

EpsilonResult shuffle_mixture_exact_epsilon(const ShuffleParams& params, double delta) {
    return invert_monotone_delta(
        [&](double eps) { return shuffle_mixture_hockey_stick(params, std::exp(eps)); }, delta);
}

namespace {

// Clopper-Pearson bound via bisection on the binomial tail.
double clopper_pearson_upper(std::int64_t successes, std::int64_t trials, double alpha) {
    if (successes >= trials) return 1.0;
    double lo = static_cast<double>(successes) / static_cast<double>(trials), hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        // P[X <= successes; mid] >= alpha keeps mid feasible below the bound
        (std::exp(binom_log_cdf(successes, trials, mid)) >= alpha ? lo : hi) = mid;
    }
    return hi;
}

double clopper_pearson_lower(std::int64_t successes, std::int64_t trials, double alpha) {
    if (successes <= 0) return 0.0;
    double lo = 0.0, hi = static_cast<double>(successes) / static_cast<double>(trials);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (std::exp(binom_log_sf(successes - 1, trials, mid)) >= alpha ? hi : lo) = mid;
    }
    return lo;
}

}  // namespace

McHockeyStick shuffle_mixture_hockey_stick_mc(const ShuffleParams& params, double gamma,
                                              std::int64_t samples, std::uint64_t seed,
                                              double confidence_alpha) {
    params.validate();
    if (samples < 1) throw std::invalid_argument("hockey_stick_mc: needs samples >= 1");
    const double w = params.w();
    const WeightWindow win = shuffle_weight_window(params);

    // inverse-cdf table over the window for drawing C
    std::vector<double> cdf(win.log_w.size());
    NeumaierSum acc;
    for (std::size_t j = 0; j < win.log_w.size(); ++j) {
        acc.add(std::exp(win.log_w[j]));
        cdf[j] = acc.value();
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto draw_binom_half = [&](std::int64_t trials) {
        std::int64_t s = 0, left = trials;
        while (left >= 64) {
            s += std::popcount(rng());
            left -= 64;
        }
        if (left > 0) s += std::popcount(rng() & ((~0ULL) >> (64 - left)));
        return s;
    };

    // region R = {mixture ratio >= gamma}; H = P(R) - gamma Q(R)
    std::int64_t hits_p = 0, hits_q = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        const double u = unif(rng) * acc.value();
        const std::size_t j =
            static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const std::int64_t i = win.lo + static_cast<std::int64_t>(std::min(j, cdf.size() - 1));
        const std::int64_t a0 = draw_binom_half(i);
        const bool swap = unif(rng) < w;  // w-mixture: swap P0/Q0 roles
        // one draw serves both P and Q by symmetry of the construction
        const std::int64_t ap = swap ? a0 : a0 + 1;
        const std::int64_t aq = swap ? a0 + 1 : a0;
        if (mixture_ratio_at_least(ap, i + 1 - ap, w, gamma)) ++hits_p;
        if (mixture_ratio_at_least(aq, i + 1 - aq, w, gamma)) ++hits_q;
    }

    McHockeyStick out;
    out.samples = samples;
    const double php = static_cast<double>(hits_p) / static_cast<double>(samples);
    const double phq = static_cast<double>(hits_q) / static_cast<double>(samples);
    out.estimate = php - gamma * phq;
    const double a2 = 0.5 * confidence_alpha;
    out.lower = clopper_pearson_lower(hits_p, samples, a2) -
                gamma * clopper_pearson_upper(hits_q, samples, a2);
    out.upper = clopper_pearson_upper(hits_p, samples, a2) -
                gamma * clopper_pearson_lower(hits_q, samples, a2);
    return out;
}

}  // namespace fdp
