#include "fdp/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "fdp/logspace.hpp"
#include "fdp/parallel.hpp"
#include "fdp/special.hpp"

namespace fdp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_weights(std::span<const double> w) {
    if (w.empty()) throw std::invalid_argument("mixture: empty component list");
    double s = 0.0;
    for (double x : w) {
        if (x < 0.0) throw std::invalid_argument("mixture: negative weight");
        s += x;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("mixture: weights must sum to 1");
}

// per-atom likelihood ratio in log space, -inf/+inf for one-sided atoms
double log_ratio(const DiscretePair& pair, std::size_t i) {
    if (pair.log_q[i] == kNegInf) return kInf;
    if (pair.log_p[i] == kNegInf) return -kInf;
    return pair.log_p[i] - pair.log_q[i];
}
}  // namespace

PiecewiseLinearTradeoff ParametricCurve::chord_curve() const {
    std::vector<Knot> knots;
    knots.reserve(samples.size() + 2);
    // samples at alpha ~ 0 pin the left endpoint (beta(0) can be below 1)
    double left = 1.0;
    for (const auto& s : samples)
        if (s.alpha <= 1e-14) left = std::min(left, s.beta);
    knots.push_back({0.0, left});
    for (const auto& s : samples)
        if (s.alpha > 1e-14 && s.alpha < 1.0 - 1e-14)
            knots.push_back({s.alpha, std::min(s.beta, 1.0 - s.alpha)});
    knots.push_back({1.0, 0.0});
    return PiecewiseLinearTradeoff(std::move(knots));
}

PiecewiseLinearTradeoff ParametricCurve::tangent_curve() const {
    std::vector<TangentLine> lines;
    lines.reserve(samples.size());
    for (const auto& s : samples) {
        const double shift = s.err * (1.0 + std::abs(s.slope));
        lines.push_back({s.alpha, s.beta - shift, s.slope});
    }
    return curve_from_tangents(std::move(lines));
}

ComponentCurve discrete_component(const DiscretePair& raw, double weight) {
    // components sharing a larger atom space may carry empty padding atoms
    DiscretePair pair;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw.log_p[i] == kNegInf && raw.log_q[i] == kNegInf) continue;
        pair.log_p.push_back(raw.log_p[i]);
        pair.log_q.push_back(raw.log_q[i]);
    }
    pair.validate();
    const std::size_t m = pair.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return log_ratio(pair, a) < log_ratio(pair, b); });
    auto lr = std::make_shared<std::vector<double>>();
    auto cum_p = std::make_shared<std::vector<double>>();
    auto cum_q = std::make_shared<std::vector<double>>();
    NeumaierSum pacc, qacc;
    for (std::size_t k = 0; k < m; ++k) {
        pacc.add(std::exp(pair.log_p[order[k]]));
        qacc.add(std::exp(pair.log_q[order[k]]));
        lr->push_back(log_ratio(pair, order[k]));
        cum_p->push_back(std::min(pacc.value(), 1.0));
        cum_q->push_back(std::min(qacc.value(), 1.0));
    }
    return {weight, [lr, cum_p, cum_q](double t) {
                if (t < 0.0) throw std::invalid_argument("threshold map: t must be >= 0");
                const double lt = t > 0.0 ? std::log(t) : -kInf;
                // rejection region {p/q <= t} with c = 1 includes equality
                const auto it = std::upper_bound(lr->begin(), lr->end(), lt);
                const std::size_t idx = static_cast<std::size_t>(it - lr->begin());
                if (idx == 0) return std::make_pair(0.0, 1.0);
                return std::make_pair((*cum_p)[idx - 1], 1.0 - (*cum_q)[idx - 1]);
            }};
}

ComponentCurve gdp_component(double mu, double weight) {
    if (mu < 0.0) throw std::invalid_argument("gdp_component: mu must be >= 0");
    return {weight, [mu](double t) {
                if (t < 0.0) throw std::invalid_argument("threshold map: t must be >= 0");
                if (mu == 0.0) {
                    // identity component: the likelihood ratio is the point mass at 1
                    return t >= 1.0 ? std::make_pair(1.0, 0.0) : std::make_pair(0.0, 1.0);
                }
                if (t == 0.0) return std::make_pair(0.0, 1.0);
                const double l = std::log(t);
                const double alpha = gaussian_cdf(l / mu - 0.5 * mu);
                const double beta = gaussian_cdf(-l / mu - 0.5 * mu);
                return std::make_pair(alpha, beta);
            }};
}

std::vector<double> discrete_thresholds(const DiscretePair& pair) {
    std::vector<double> ts;
    ts.reserve(pair.size());
    for (std::size_t i = 0; i < pair.size(); ++i) {
        const double lr = log_ratio(pair, i);
        if (std::isfinite(lr)) ts.push_back(std::exp(lr));
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

ParametricCurve joint_concavity(std::span<const ComponentCurve> components,
                                std::span<const double> thresholds) {
    std::vector<double> w(components.size());
    for (std::size_t i = 0; i < components.size(); ++i) w[i] = components[i].weight;
    check_weights(w);
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw std::invalid_argument("joint_concavity: thresholds must be sorted ascending");

    ParametricCurve out;
    out.samples.reserve(thresholds.size());
    for (double t : thresholds) {
        if (t < 0.0) throw std::invalid_argument("joint_concavity: thresholds must be >= 0");
        NeumaierSum a, b;
        for (const auto& c : components) {
            const auto [ai, bi] = c.at_threshold(t);
            a.add(c.weight * ai);
            b.add(c.weight * bi);
        }
        out.samples.push_back({t, a.value(), b.value(), 0.0, t > 0.0 ? -1.0 / t : -kInf});
    }
    return out;
}

ParametricCurve joint_concavity_diff_weights(
    const std::vector<std::vector<ComponentCurve>>& pair_maps, std::span<const double> w_p,
    std::span<const double> w_q, std::span<const double> thresholds) {
    const std::size_t m = w_p.size();
    if (w_q.size() != m || pair_maps.size() != m)
        throw std::invalid_argument("diff_weights: dimension mismatch");
    for (const auto& row : pair_maps)
        if (row.size() != m) throw std::invalid_argument("diff_weights: pair map must be m x m");
    check_weights(w_p);
    check_weights(w_q);

    // diagonal min terms plus a northwest-corner coupling of the residuals
    std::vector<std::vector<double>> coef(m, std::vector<double>(m, 0.0));
    std::vector<double> rp(m), rq(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = std::min(w_p[i], w_q[i]);
        coef[i][i] = d;
        rp[i] = w_p[i] - d;
        rq[i] = w_q[i] - d;
    }
    std::size_t i = 0, j = 0;
    while (i < m && j < m) {
        if (rp[i] <= 1e-15) {
            ++i;
            continue;
        }
        if (rq[j] <= 1e-15) {
            ++j;
            continue;
        }
        const double x = std::min(rp[i], rq[j]);
        coef[i][j] += x;
        rp[i] -= x;
        rq[j] -= x;
    }

    ParametricCurve out;
    out.samples.reserve(thresholds.size());
    for (double t : thresholds) {
        NeumaierSum a, b;
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) {
                if (coef[r][c] <= 0.0) continue;
                const auto [ai, bi] = pair_maps[r][c].at_threshold(t);
                a.add(coef[r][c] * ai);
                b.add(coef[r][c] * bi);
            }
        out.samples.push_back({t, a.value(), b.value(), 0.0, t > 0.0 ? -1.0 / t : -kInf});
    }
    return out;
}

PiecewiseLinearTradeoff advanced_joint_concavity(const PiecewiseLinearTradeoff& f11,
                                                 const PiecewiseLinearTradeoff& f12,
                                                 const PiecewiseLinearTradeoff& f21,
                                                 const PiecewiseLinearTradeoff& f22, double w,
                                                 double gamma, double eta) {
    if (!(gamma >= 0.0 && gamma < w && w < eta && eta <= 1.0))
        throw std::invalid_argument("advanced_joint_concavity: needs 0 <= gamma < w < eta <= 1");
    if (!f11.is_symmetric(1e-6) || !f22.is_symmetric(1e-6))
        throw std::invalid_argument("advanced_joint_concavity: diagonal curves must be symmetric");

    const double l1 = (1.0 - w) * (eta - gamma) / (eta - w);
    const double l2 = w * (eta - gamma) / (w - gamma);
    const PiecewiseLinearConvex parts[4] = {
        conjugate(f11).scale_argument(l1), conjugate(f21).scale_argument(l2),
        conjugate(f12).scale_argument(l1), conjugate(f22).scale_argument(l2)};
    const double coef[4] = {(1.0 - w) * (1.0 - gamma), w * (1.0 - eta), (1.0 - w) * gamma, w * eta};
    const PiecewiseLinearConvex sum = PiecewiseLinearConvex::weighted_sum(parts, coef);
    return symmetrize(from_convex(sum.conjugate()));
}

PiecewiseLinearTradeoff advanced_joint_concavity_collapsed(const PiecewiseLinearTradeoff& t_p1_mix,
                                                           const PiecewiseLinearTradeoff& t_p2_mix,
                                                           double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("advanced collapsed: w outside [0,1]");
    return symmetrize(convex_combination(t_p1_mix, 1.0 - w, t_p2_mix, w));
}

AdvancedSearchResult advanced_joint_concavity_search(const PiecewiseLinearTradeoff& f11,
                                                     const PiecewiseLinearTradeoff& f12,
                                                     const PiecewiseLinearTradeoff& f21,
                                                     const PiecewiseLinearTradeoff& f22, double w,
                                                     double alpha_at, int grid) {
    if (grid < 2) throw std::invalid_argument("advanced search: grid must be >= 2");
    std::vector<double> gs(static_cast<std::size_t>(grid));
    for (int k = 0; k < grid; ++k)  // log-spaced offsets in (1e-6, 1]
        gs[static_cast<std::size_t>(k)] =
            std::exp(std::log(1e-6) * (1.0 - static_cast<double>(k) / (grid - 1)));

    AdvancedSearchResult best{identity_curve(), 0.0, 1.0, -1.0};
    for (double gg : gs)
        for (double ge : gs) {
            const double gamma = w * (1.0 - gg);
            const double eta = w + (1.0 - w) * ge;
            if (!(gamma < w && w < eta)) continue;
            const PiecewiseLinearTradeoff cand = advanced_joint_concavity(f11, f12, f21, f22, w, gamma, eta);
            const double v = cand(alpha_at);
            if (v > best.value) best = {cand, gamma, eta, v};
        }
    return best;
}

PiecewiseLinearTradeoff advanced_shuffle_bound(const PiecewiseLinearTradeoff& f0, double w) {
    if (!(w >= 0.0 && w <= 0.5))
        throw std::invalid_argument("advanced_shuffle_bound: w must lie in [0, 1/2]");
    return symmetrize(convex_combination(identity_curve(), 2.0 * w, f0, 1.0 - 2.0 * w));
}

PiecewiseLinearTradeoff subsample_bound(const PiecewiseLinearTradeoff& f11, double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("subsample_bound: w outside [0,1]");
    return symmetrize(convex_combination(identity_curve(), 1.0 - w, f11, w));
}

EqualityReport equality_diagnostic(const DiscretePair& c1, const DiscretePair& c2, double w1,
                                   double w2, double tol) {
    if (c1.size() != c2.size())
        throw std::invalid_argument("equality_diagnostic: components need a shared atom space");
    const double ws[2] = {w1, w2};
    check_weights(ws);

    EqualityReport rep{true, 0.0};
    for (std::size_t i = 0; i < c1.size(); ++i) {
        const double p1 = std::exp(c1.log_p[i]), q1 = std::exp(c1.log_q[i]);
        const double p2 = std::exp(c2.log_p[i]), q2 = std::exp(c2.log_q[i]);
        const double pw = w1 * p1 + w2 * p2;
        if (pw <= 0.0) continue;  // outside supp(P_w)
        const double qw = w1 * q1 + w2 * q2;
        const double lhs = qw > 0.0 ? pw / qw : kInf;

        // component ratios with the 0/0 convention
        double r1 = q1 > 0.0 ? p1 / q1 : (p1 > 0.0 ? kInf : -1.0);
        double r2 = q2 > 0.0 ? p2 / q2 : (p2 > 0.0 ? kInf : -1.0);
        if (r1 < 0.0 && r2 < 0.0) continue;  // not reachable given pw > 0
        if (r1 < 0.0) r1 = r2;
        if (r2 < 0.0) r2 = r1;
        const double rhs = (std::isinf(r1) || std::isinf(r2)) ? kInf : w1 * r1 + w2 * r2;

        double viol;
        if (std::isinf(lhs) || std::isinf(rhs))
            viol = std::isinf(lhs) && std::isinf(rhs) ? 0.0 : 1.0;
        else
            viol = std::abs(lhs - rhs) / std::max({1.0, lhs, rhs});
        rep.max_violation = std::max(rep.max_violation, viol);
    }
    rep.holds = rep.max_violation <= tol;
    return rep;
}

namespace {

DiscretePair mix_pairs(std::span<const DiscretePair> components, std::span<const double> weights) {
    const std::size_t atoms = components[0].size();
    std::vector<double> p(atoms, 0.0), q(atoms, 0.0);
    for (std::size_t c = 0; c < components.size(); ++c) {
        if (components[c].size() != atoms)
            throw std::invalid_argument("mixture: components need a shared atom space");
        for (std::size_t i = 0; i < atoms; ++i) {
            p[i] += weights[c] * std::exp(components[c].log_p[i]);
            q[i] += weights[c] * std::exp(components[c].log_q[i]);
        }
    }
    return pair_from_masses(p, q);
}

double power_divergence(const DiscretePair& pair, double order) {
    // D_F with F(s) = (s^order - order(s-1) - 1) / (order(order-1))
    NeumaierSum acc;
    for (std::size_t i = 0; i < pair.size(); ++i) {
        const double p = std::exp(pair.log_p[i]);
        const double q = std::exp(pair.log_q[i]);
        if (q <= 0.0) {
            if (p > 0.0) return kInf;  // tau_F = inf for order > 1
            continue;
        }
        const double s = p / q;
        acc.add(q * (std::pow(s, order) - order * (s - 1.0) - 1.0) / (order * (order - 1.0)));
    }
    return acc.value();
}

}  // namespace

InequalityReport hockey_stick_joint_convexity(std::span<const DiscretePair> components,
                                              std::span<const double> weights, double gamma) {
    check_weights(weights);
    const DiscretePair mixed = mix_pairs(components, weights);
    InequalityReport rep;
    rep.lhs = exact_hockey_stick(mixed, gamma);
    NeumaierSum rhs;
    for (std::size_t c = 0; c < components.size(); ++c)
        rhs.add(weights[c] * exact_hockey_stick(components[c], gamma));
    rep.rhs = rhs.value();
    rep.holds = rep.lhs <= rep.rhs + 1e-10;
    return rep;
}

InequalityReport power_divergence_joint_convexity(std::span<const DiscretePair> components,
                                                  std::span<const double> weights, double order) {
    if (order <= 1.0) throw std::invalid_argument("power divergence: order must be > 1");
    check_weights(weights);
    const DiscretePair mixed = mix_pairs(components, weights);
    InequalityReport rep;
    rep.lhs = power_divergence(mixed, order);
    double rhs = 0.0;
    for (std::size_t c = 0; c < components.size(); ++c) {
        const double d = power_divergence(components[c], order);
        rhs = std::isinf(d) ? kInf : rhs + weights[c] * d;
    }
    rep.rhs = rhs;
    rep.holds = std::isinf(rep.rhs) || rep.lhs <= rep.rhs + 1e-10;
    return rep;
}

InequalityReport advanced_hockey_stick_inequality(const DiscretePair& p1q1, const DiscretePair& p2q2,
                                                  double w, double eps0, double eps1, double gamma,
                                                  double eta) {
    if (p1q1.size() != p2q2.size())
        throw std::invalid_argument("advanced HS: components need a shared atom space");
    const double e0 = std::exp(eps0), e1 = std::exp(eps1);
    const double ep = (1.0 - w) * e0 + w * e1;  // constraint 1 defines eps'
    if (std::abs(e0 * (1.0 - w) * gamma + e1 * w * eta - ep * w) > 1e-9 * std::max(1.0, ep))
        throw std::invalid_argument("advanced HS: (gamma, eta) violate the constraint equations");

    const std::size_t atoms = p1q1.size();
    std::vector<double> pm(atoms), qm(atoms), q1g(atoms), q1e(atoms);
    for (std::size_t i = 0; i < atoms; ++i) {
        const double p1 = std::exp(p1q1.log_p[i]), q1 = std::exp(p1q1.log_q[i]);
        const double p2 = std::exp(p2q2.log_p[i]), q2 = std::exp(p2q2.log_q[i]);
        pm[i] = (1.0 - w) * p1 + w * p2;
        qm[i] = (1.0 - w) * q1 + w * q2;
        q1g[i] = (1.0 - gamma) * q1 + gamma * q2;
        q1e[i] = (1.0 - eta) * q1 + eta * q2;
    }
    InequalityReport rep;
    rep.lhs = exact_hockey_stick(pair_from_masses(pm, qm), ep);
    std::vector<double> p1(atoms), p2(atoms);
    for (std::size_t i = 0; i < atoms; ++i) {
        p1[i] = std::exp(p1q1.log_p[i]);
        p2[i] = std::exp(p2q2.log_p[i]);
    }
    rep.rhs = (1.0 - w) * exact_hockey_stick(pair_from_masses(p1, q1g), e0) +
              w * exact_hockey_stick(pair_from_masses(p2, q1e), e1);
    rep.holds = rep.lhs <= rep.rhs + 1e-10;
    return rep;
}

}  // namespace fdp
