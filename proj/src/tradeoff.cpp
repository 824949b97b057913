#include "fdp/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fdp/logspace.hpp"
#include "fdp/special.hpp"

namespace fdp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMergeEps = 1e-15;
constexpr double kSnapEps = 1e-12;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}
}  // namespace

PiecewiseLinearTradeoff::PiecewiseLinearTradeoff(std::vector<Knot> knots) {
    if (knots.empty()) throw std::invalid_argument("curve: needs at least one knot");
    for (auto& k : knots) {
        if (k.alpha > 1.0 + kSnapEps) throw std::invalid_argument("curve: knot alpha exceeds 1");
        k.alpha = std::min(k.alpha, 1.0);
    }
    std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) {
        return a.alpha != b.alpha ? a.alpha < b.alpha : a.beta > b.beta;
    });

    // merge clusters of near-duplicate alphas, keeping the lower beta
    knots_.reserve(knots.size());
    std::size_t i = 0;
    while (i < knots.size()) {
        const double a0 = knots[i].alpha;
        double beta = knots[i].beta;
        std::size_t j = i + 1;
        while (j < knots.size() && knots[j].alpha - a0 <= kMergeEps) {
            beta = std::min(beta, knots[j].beta);
            ++j;
        }
        knots_.push_back({a0, beta});
        i = j;
    }

    if (std::abs(knots_.front().alpha) > kMergeEps)
        throw std::invalid_argument("curve: first knot must have alpha = 0");
    knots_.front().alpha = 0.0;

    for (auto& k : knots_) {
        if (k.beta < -kSnapEps || k.beta > 1.0 + kSnapEps)
            throw std::invalid_argument("curve: knot beta outside [0,1]");
        k.beta = std::clamp(k.beta, 0.0, 1.0);
        if (k.beta > 1.0 - k.alpha) {
            if (k.beta > 1.0 - k.alpha + kSnapEps)
                throw std::invalid_argument("curve: beta exceeds 1 - alpha (f > Id)");
            k.beta = 1.0 - k.alpha;
        }
    }

    // betas non-increasing, tiny float noise repaired
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        if (knots_[k].beta > knots_[k - 1].beta) {
            if (knots_[k].beta > knots_[k - 1].beta + kSnapEps)
                throw std::invalid_argument("curve: beta must be non-increasing");
            knots_[k].beta = knots_[k - 1].beta;
        }
    }

    if (knots_.back().beta > kSnapEps)
        throw std::invalid_argument("curve: last knot must have beta = 0");
    knots_.back().beta = 0.0;

    // convexity: every interior knot must lie on or below the chord of its
    // neighbours. Violations that are small vertically (float noise) or small
    // horizontally (knots displaced by the 1e-15 alpha merge next to steep
    // segments) are artifacts and repaired by dropping the knot.
    std::vector<Knot> hull;
    hull.reserve(knots_.size());
    for (const auto& k : knots_) {
        while (hull.size() >= 2) {
            const Knot& a = hull[hull.size() - 2];
            const Knot& b = hull.back();
            const double chord =
                a.beta + (k.beta - a.beta) * (b.alpha - a.alpha) / (k.alpha - a.alpha);
            const double excess = b.beta - chord;
            if (excess <= 0.0) break;
            const double chord_slope = (k.beta - a.beta) / (k.alpha - a.alpha);
            const double horizontal = chord_slope < 0.0 ? excess / -chord_slope : 1.0;
            if (excess > 1e-9 && horizontal > 1e-12)
                throw std::invalid_argument("curve: knots are not convex");
            hull.pop_back();
        }
        hull.push_back(k);
    }
    knots_ = std::move(hull);
}

double PiecewiseLinearTradeoff::operator()(double alpha) const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("curve evaluation: alpha outside [0,1]");
    if (alpha >= knots_.back().alpha) return 0.0;
    if (alpha <= knots_.front().alpha) return knots_.front().beta;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), alpha,
                               [](double a, const Knot& k) { return a < k.alpha; });
    const Knot& hi = *it;
    const Knot& lo = *(it - 1);
    const double t = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
    return lo.beta + t * (hi.beta - lo.beta);
}

double PiecewiseLinearTradeoff::slope(std::size_t seg) const {
    const Knot &l = knots_[seg], &r = knots_[seg + 1];
    return (r.beta - l.beta) / (r.alpha - l.alpha);
}

double PiecewiseLinearTradeoff::first_zero() const {
    for (const auto& k : knots_)
        if (k.beta <= 0.0) return k.alpha;
    return knots_.back().alpha;
}

PiecewiseLinearTradeoff PiecewiseLinearTradeoff::left_inverse() const {
    std::vector<Knot> inv;
    inv.reserve(knots_.size() + 1);
    // f maps [0,1] onto [0, f(0)]; reflected knots in increasing beta order
    for (auto it = knots_.rbegin(); it != knots_.rend(); ++it) inv.push_back({it->beta, it->alpha});
    if (inv.front().alpha > kMergeEps) inv.insert(inv.begin(), {0.0, first_zero()});
    return PiecewiseLinearTradeoff(std::move(inv));
}

bool PiecewiseLinearTradeoff::is_symmetric(double tol) const {
    const PiecewiseLinearTradeoff inv = left_inverse();
    for (const auto& k : knots_)
        if (std::abs(inv(k.alpha) - k.beta) > tol) return false;
    for (const auto& k : inv.knots())
        if (std::abs((*this)(k.alpha) - k.beta) > tol) return false;
    return true;
}

PiecewiseLinearTradeoff identity_curve() {
    return PiecewiseLinearTradeoff({{0.0, 1.0}, {1.0, 0.0}});
}

PiecewiseLinearTradeoff pure_dp_curve(double eps0) {
    if (eps0 < 0.0) throw std::invalid_argument("pure_dp_curve: eps0 must be >= 0");
    if (eps0 == 0.0) return identity_curve();
    const double e = std::exp(eps0), einv = std::exp(-eps0);
    const double kink = (1.0 - einv) / (e - einv);
    return PiecewiseLinearTradeoff({{0.0, 1.0}, {kink, einv * (1.0 - kink)}, {1.0, 0.0}});
}

PiecewiseLinearTradeoff convex_combination(const PiecewiseLinearTradeoff& f, double wf,
                                           const PiecewiseLinearTradeoff& g, double wg) {
    if (wf < 0.0 || wg < 0.0 || std::abs(wf + wg - 1.0) > 1e-9)
        throw std::invalid_argument("convex_combination: weights must be >= 0 and sum to 1");
    std::vector<double> grid;
    grid.reserve(f.size() + g.size() + 1);
    for (const auto& k : f.knots()) grid.push_back(k.alpha);
    for (const auto& k : g.knots()) grid.push_back(k.alpha);
    grid.push_back(1.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<Knot> knots;
    knots.reserve(grid.size());
    for (double a : grid) knots.push_back({a, wf * f(a) + wg * g(a)});
    return PiecewiseLinearTradeoff(std::move(knots));
}

// ---------------------------------------------------------------------------
// convex calculus

PiecewiseLinearConvex::PiecewiseLinearConvex(std::vector<double> xs, std::vector<double> vals,
                                             double slope_left, double slope_right)
    : xs_(std::move(xs)), vals_(std::move(vals)), slope_left_(slope_left), slope_right_(slope_right) {
    if (xs_.empty() || xs_.size() != vals_.size())
        throw std::invalid_argument("convex fn: breakpoint/value size mismatch");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (!(xs_[i] > xs_[i - 1])) throw std::invalid_argument("convex fn: xs must increase");
}

double PiecewiseLinearConvex::operator()(double x) const {
    if (x < xs_.front()) {
        if (slope_left_ == -kInf) return kInf;
        return vals_.front() + slope_left_ * (x - xs_.front());
    }
    if (x > xs_.back()) {
        if (slope_right_ == kInf) return kInf;
        return vals_.back() + slope_right_ * (x - xs_.back());
    }
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    if (it == xs_.begin()) return vals_.front();
    const std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
    if (hi == xs_.size()) return vals_.back();
    const double t = (x - xs_[hi - 1]) / (xs_[hi] - xs_[hi - 1]);
    return vals_[hi - 1] + t * (vals_[hi] - vals_[hi - 1]);
}

PiecewiseLinearConvex PiecewiseLinearConvex::conjugate() const {
    std::vector<double> ys, vs;
    auto push = [&](double y, double v) {
        if (!ys.empty() && y <= ys.back() + 0.0) return;  // skip zero-length segments
        ys.push_back(y);
        vs.push_back(v);
    };
    if (slope_left_ != -kInf) push(slope_left_, xs_.front() * slope_left_ - vals_.front());
    for (std::size_t k = 0; k + 1 < xs_.size(); ++k) {
        const double s = (vals_[k + 1] - vals_[k]) / (xs_[k + 1] - xs_[k]);
        push(s, xs_[k] * s - vals_[k]);
    }
    if (slope_right_ != kInf) push(slope_right_, xs_.back() * slope_right_ - vals_.back());
    if (ys.empty()) {
        // single affine piece: conjugate is finite only at the slope; represent
        // as one breakpoint with truncation on both sides
        const double s = slope_left_ == -kInf ? slope_right_ : slope_left_;
        if (std::isinf(s)) {
            // single point with truncated domain on both sides: conjugate is
            // the linear function x0*y - v0
            ys.push_back(0.0);
            vs.push_back(-vals_.front());
            return PiecewiseLinearConvex(std::move(ys), std::move(vs), xs_.front(), xs_.front());
        }
        ys.push_back(s);
        vs.push_back(xs_.front() * s - vals_.front());
        return PiecewiseLinearConvex(std::move(ys), std::move(vs), -kInf, kInf);
    }
    const double left = slope_left_ == -kInf ? xs_.front() : -kInf;
    const double right = slope_right_ == kInf ? xs_.back() : kInf;
    return PiecewiseLinearConvex(std::move(ys), std::move(vs), left, right);
}

PiecewiseLinearConvex PiecewiseLinearConvex::scale_argument(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("scale_argument: lambda must be > 0");
    std::vector<double> xs(xs_), vs(vals_);
    for (double& x : xs) x *= lambda;
    auto scale_slope = [lambda](double s) { return std::isinf(s) ? s : s / lambda; };
    return PiecewiseLinearConvex(std::move(xs), std::move(vs), scale_slope(slope_left_),
                                 scale_slope(slope_right_));
}

PiecewiseLinearConvex PiecewiseLinearConvex::weighted_sum(std::span<const PiecewiseLinearConvex> fs,
                                                          std::span<const double> coef) {
    if (fs.empty() || fs.size() != coef.size())
        throw std::invalid_argument("weighted_sum: size mismatch");
    for (const auto& f : fs)
        if (std::isinf(f.slope_left()) || std::isinf(f.slope_right()))
            throw std::invalid_argument("weighted_sum: truncated domains unsupported");
    std::vector<double> grid;
    for (const auto& f : fs) grid.insert(grid.end(), f.xs().begin(), f.xs().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return b - a <= 1e-15 * std::max(1.0, std::abs(a)); }),
               grid.end());
    std::vector<double> vals(grid.size(), 0.0);
    double sl = 0.0, sr = 0.0;
    for (std::size_t j = 0; j < fs.size(); ++j) {
        for (std::size_t i = 0; i < grid.size(); ++i) vals[i] += coef[j] * fs[j](grid[i]);
        sl += coef[j] * fs[j].slope_left();
        sr += coef[j] * fs[j].slope_right();
    }
    return PiecewiseLinearConvex(std::move(grid), std::move(vals), sl, sr);
}

PiecewiseLinearConvex to_convex(const PiecewiseLinearTradeoff& f) {
    std::vector<double> xs, vs;
    xs.reserve(f.size() + 1);
    for (const auto& k : f.knots()) {
        xs.push_back(k.alpha);
        vs.push_back(k.beta);
    }
    if (xs.back() < 1.0 - 1e-15) {
        xs.push_back(1.0);
        vs.push_back(0.0);
    }
    return PiecewiseLinearConvex(std::move(xs), std::move(vs), -kInf, kInf);
}

PiecewiseLinearTradeoff from_convex(const PiecewiseLinearConvex& g) {
    const auto& xs = g.xs();
    const auto& vs = g.values();
    std::vector<Knot> knots;
    if (xs.front() > kMergeEps) knots.push_back({0.0, std::max(g(0.0), 0.0)});
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double a = xs[i];
        if (a < -kMergeEps || a > 1.0 + kSnapEps) continue;
        if (vs[i] < 0.0) {
            // crossed below zero: insert the zero crossing and stop
            if (i > 0 && vs[i - 1] > 0.0) {
                const double t = vs[i - 1] / (vs[i - 1] - vs[i]);
                knots.push_back({xs[i - 1] + t * (a - xs[i - 1]), 0.0});
            }
            break;
        }
        knots.push_back({std::clamp(a, 0.0, 1.0), vs[i]});
    }
    if (knots.empty() || knots.back().beta > 0.0) {
        // close the curve at its zero; a trade-off function always ends at 0
        double z = 1.0;
        if (!knots.empty() && knots.back().alpha < 1.0) {
            const double tail = g(1.0);
            if (tail > kSnapEps && knots.back().beta > kSnapEps) {
                const double s = (tail - knots.back().beta) / (1.0 - knots.back().alpha);
                if (s < 0.0) z = std::min(1.0, knots.back().alpha - knots.back().beta / s);
            }
        }
        knots.push_back({z, 0.0});
    }
    // the input is convex up to conjugation noise at near-duplicate
    // breakpoints; a lower-hull pass removes the stray vertices
    std::vector<Knot> hull;
    hull.reserve(knots.size());
    for (const auto& k : knots) {
        while (hull.size() >= 2) {
            const Knot& a = hull[hull.size() - 2];
            const Knot& b = hull.back();
            if ((b.alpha - a.alpha) * (k.beta - a.beta) -
                    (k.alpha - a.alpha) * (b.beta - a.beta) >
                0.0)
                break;
            hull.pop_back();
        }
        hull.push_back(k);
    }
    return PiecewiseLinearTradeoff(std::move(hull));
}

PiecewiseLinearConvex conjugate(const PiecewiseLinearTradeoff& f) {
    return to_convex(f).conjugate();
}

double to_epsilon_delta(const PiecewiseLinearTradeoff& f, double epsilon) {
    if (epsilon < 0.0) throw std::invalid_argument("to_epsilon_delta: epsilon must be >= 0");
    const double g = std::exp(epsilon);
    double best = 0.0;
    for (const auto& k : f.knots()) best = std::max(best, 1.0 - k.beta - g * k.alpha);
    return std::min(best, 1.0);
}

EpsilonResult invert_epsilon(const PiecewiseLinearTradeoff& f, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("invert_epsilon: delta must be in (0,1)");
    if (to_epsilon_delta(f, 0.0) <= delta) return {0.0, true};
    const double floor = 1.0 - f.value_at_zero();
    if (floor > delta)
        throw std::runtime_error("invert_epsilon: delta below the curve floor 1 - f(0)");
    double lo = 0.0, hi = 1.0;
    while (to_epsilon_delta(f, hi) > delta) {
        lo = hi;
        hi *= 2.0;
        if (hi > 700.0) throw std::runtime_error("invert_epsilon: failed to bracket epsilon");
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (to_epsilon_delta(f, mid) > delta ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), false};
}

PiecewiseLinearTradeoff symmetrize(const PiecewiseLinearTradeoff& f) {
    // C(f) = min{f, f^-1}**, computed exactly: sample min on the union of the
    // two knot grids (crossings are concave kinks and never hull vertices),
    // then take the lower convex hull. Where the slope -1 chord branch of the
    // double-conjugate form applies this reproduces it exactly.
    const PiecewiseLinearTradeoff inv = f.left_inverse();
    std::vector<double> grid;
    grid.reserve(f.size() + inv.size() + 1);
    for (const auto& k : f.knots()) grid.push_back(k.alpha);
    for (const auto& k : inv.knots()) grid.push_back(k.alpha);
    grid.push_back(1.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<Knot> pts;
    pts.reserve(grid.size());
    for (double a : grid) pts.push_back({a, std::min(f(a), inv(a))});

    std::vector<Knot> hull;
    auto above_or_on = [](const Knot& a, const Knot& b, const Knot& c) {
        // true when b lies on or above the segment a-c
        return (b.alpha - a.alpha) * (c.beta - a.beta) - (c.alpha - a.alpha) * (b.beta - a.beta) <=
               0.0;
    };
    for (const auto& p : pts) {
        while (hull.size() >= 2 && above_or_on(hull[hull.size() - 2], hull.back(), p))
            hull.pop_back();
        hull.push_back(p);
        if (p.beta <= 0.0) break;  // flat zero tail adds nothing
    }
    return PiecewiseLinearTradeoff(std::move(hull));
}

ConvexScalarFn hockey_stick_fn(double gamma) {
    if (gamma < 1.0) throw std::invalid_argument("hockey_stick_fn: gamma must be >= 1");
    return {[gamma](double s) { return std::max(s - gamma, 0.0); }, 0.0, 1.0};
}

ConvexScalarFn power_divergence_fn(double order) {
    if (order <= 1.0) throw std::invalid_argument("power_divergence_fn: order must be > 1");
    return {[order](double s) { return std::pow(s, order); }, 0.0, kInf};
}

double f_divergence(const PiecewiseLinearTradeoff& f, const ConvexScalarFn& F) {
    const double zf = f.first_zero();
    if (F.tau == kInf && zf < 1.0 - 1e-15) return kInf;
    NeumaierSum acc;
    const auto& ks = f.knots();
    for (std::size_t s = 0; s + 1 < ks.size(); ++s) {
        const double sl = f.slope(s);
        if (sl >= 0.0) continue;
        const double da = ks[s + 1].alpha - ks[s].alpha;
        acc.add(F.value(1.0 / -sl) * -sl * da);
    }
    double out = acc.value() + F.at_zero * (1.0 - f.value_at_zero());
    if (zf < 1.0 - 1e-15 && F.tau != 0.0) out += F.tau * (1.0 - zf);
    return out;
}

// ---------------------------------------------------------------------------
// Gaussian curve

GdpCurve::GdpCurve(double mu) : mu_(mu) {
    if (mu < 0.0) throw std::invalid_argument("GdpCurve: mu must be >= 0");
}

double GdpCurve::operator()(double alpha) const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("GdpCurve: alpha outside [0,1]");
    if (alpha <= 0.0) return 1.0;
    if (alpha >= 1.0) return 0.0;
    // Phi^-1(1-a) = -Phi^-1(a), well conditioned for a near 1
    return gaussian_cdf(-gaussian_quantile(alpha) - mu_);
}

double GdpCurve::derivative(double alpha) const {
    if (alpha <= 0.0) return -kInf;
    if (alpha >= 1.0) return 0.0;
    const double z = -gaussian_quantile(alpha);
    return -std::exp(mu_ * z - 0.5 * mu_ * mu_);
}

DiscretizedCurve GdpCurve::to_knots(std::span<const double> alphas, Envelope kind) const {
    if (kind == Envelope::chordal_upper) {
        std::vector<Knot> knots;
        knots.reserve(alphas.size() + 2);
        knots.push_back({0.0, 1.0});
        // samples inside the merge radius of the endpoints would displace them
        for (double a : alphas)
            if (a > 1e-14 && a < 1.0 - 1e-14) knots.push_back({a, (*this)(a)});
        knots.push_back({1.0, 0.0});
        return {PiecewiseLinearTradeoff(std::move(knots)), kind};
    }
    std::vector<TangentLine> lines;
    lines.reserve(alphas.size());
    for (double a : alphas)
        if (a > 0.0 && a < 1.0) lines.push_back({a, (*this)(a), derivative(a)});
    return {curve_from_tangents(std::move(lines)), kind};
}

DiscretizedCurve GdpCurve::to_knots(int points, Envelope kind, double zmax) const {
    if (points < 2) throw std::invalid_argument("GdpCurve::to_knots: needs >= 2 points");
    std::vector<double> alphas(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double z = -zmax + 2.0 * zmax * i / (points - 1);
        alphas[static_cast<std::size_t>(i)] = gaussian_cdf(-z);
    }
    std::sort(alphas.begin(), alphas.end());
    return to_knots(alphas, kind);
}

PiecewiseLinearTradeoff curve_from_tangents(std::vector<TangentLine> lines) {
    // lines as (m, c): y = m x + c; only negative slopes carry information
    struct Line {
        double m, c;
        double at(double x) const { return m * x + c; }
    };
    std::vector<Line> ls;
    ls.reserve(lines.size());
    for (const auto& l : lines)
        if (l.slope < 0.0 && std::isfinite(l.slope) && std::isfinite(l.beta))
            ls.push_back({l.slope, l.beta - l.slope * l.alpha});
    if (ls.empty()) throw std::invalid_argument("curve_from_tangents: no usable lines");
    std::sort(ls.begin(), ls.end(),
              [](const Line& a, const Line& b) { return a.m != b.m ? a.m < b.m : a.c > b.c; });

    // upper envelope; slopes ascend left to right
    auto cross = [](const Line& a, const Line& b) { return (b.c - a.c) / (a.m - b.m); };
    std::vector<Line> hull;
    for (const auto& l : ls) {
        if (!hull.empty() && l.m == hull.back().m) continue;  // sorted: lower intercept, skip
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2], l) <= cross(hull[hull.size() - 2], hull.back()))
            hull.pop_back();
        hull.push_back(l);
    }

    std::vector<Knot> knots;
    // active segment of line j runs to its crossing with line j+1
    std::size_t j = 0;
    while (j + 1 < hull.size() && cross(hull[j], hull[j + 1]) <= 0.0) ++j;
    if (hull[j].at(0.0) <= 0.0) return PiecewiseLinearTradeoff({{0.0, 0.0}});
    knots.push_back({0.0, std::min(hull[j].at(0.0), 1.0)});
    for (;; ++j) {
        const Line& cur = hull[j];
        const double x_zero = -cur.c / cur.m;
        const double x_next = j + 1 < hull.size() ? cross(cur, hull[j + 1]) : kInf;
        if (x_zero <= x_next || x_next >= 1.0) {
            if (x_zero <= 1.0) {
                knots.push_back({std::max(x_zero, 0.0), 0.0});
            } else {
                if (cur.at(1.0) > kSnapEps)
                    throw std::invalid_argument(
                        "curve_from_tangents: envelope positive at alpha = 1; grid misses the "
                        "flat end");
                knots.push_back({1.0, 0.0});
            }
            break;
        }
        knots.push_back({x_next, cur.at(x_next)});
    }
    return PiecewiseLinearTradeoff(std::move(knots));
}

// ---------------------------------------------------------------------------
// CSV

void write_curve_csv(std::ostream& os, const PiecewiseLinearTradeoff& f,
                     const std::map<std::string, std::string>& metadata) {
    for (const auto& [k, v] : metadata) os << "# " << k << ": " << v << "\n";
    os << "alpha,beta\n";
    for (const auto& k : f.knots()) os << fmt17(k.alpha) << "," << fmt17(k.beta) << "\n";
}

PiecewiseLinearTradeoff read_curve_csv(std::istream& is) {
    std::vector<Knot> knots;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("alpha", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("curve csv: malformed row");
        knots.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    return PiecewiseLinearTradeoff(std::move(knots));
}

}  // namespace fdp
