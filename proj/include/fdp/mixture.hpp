#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fdp/oracle.hpp"
#include "fdp/tradeoff.hpp"

namespace fdp {

// Threshold-indexed (t, alpha, beta) samples of a trade-off curve. t is the
// likelihood-ratio threshold of the underlying test (c = 1 at knots); slope
// is a supporting slope of the curve at the sample; err bounds the absolute
// error of alpha and beta.
struct ParametricSample {
    double t = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double err = 0.0;
    double slope = 0.0;
};

struct ParametricCurve {
    std::vector<ParametricSample> samples;

    // chords through the samples plus (0,1), (1,0): an upper approximation
    PiecewiseLinearTradeoff chord_curve() const;
    // supporting-line envelope, each line lowered by err*(1 + |slope|): a
    // certified lower bound, used on all privacy-reporting paths
    PiecewiseLinearTradeoff tangent_curve() const;
};

// One mixture component: weight plus the likelihood-ratio-test error map
// t -> (alpha_i(t), beta_i(t)) of its own pair.
struct ComponentCurve {
    double weight = 0.0;
    std::function<std::pair<double, double>(double)> at_threshold;
};

ComponentCurve discrete_component(const DiscretePair& pair, double weight);
ComponentCurve gdp_component(double mu, double weight);
// all achievable likelihood ratios of a pair, ascending; excludes 0 and inf
std::vector<double> discrete_thresholds(const DiscretePair& pair);

// Joint concavity: alpha(t) = sum_i w_i alpha_i(t), beta(t) = sum_i w_i
// beta_i(t); a valid lower-bound trade-off curve for the mixture pair.
ParametricCurve joint_concavity(std::span<const ComponentCurve> components,
                                std::span<const double> thresholds);

// Different P/Q weights (m = 2 exactly as stated; m > 2 via the same
// min-decomposition with a northwest-corner coupling of the residuals).
// pair_maps[i][j] must carry the threshold map of T(P_i, Q_j).
ParametricCurve joint_concavity_diff_weights(
    const std::vector<std::vector<ComponentCurve>>& pair_maps, std::span<const double> w_p,
    std::span<const double> w_q, std::span<const double> thresholds);

// Advanced joint concavity for 0 <= gamma < w < eta <= 1:
// C( ((1-w)(1-gamma) F11* + w(1-eta) F21* + (1-w)gamma F12* + w eta F22*)* )
// with F1j(x) = f1j(x (1-w)(eta-gamma)/(eta-w)), F2j(x) = f2j(x w (eta-gamma)/(w-gamma)).
PiecewiseLinearTradeoff advanced_joint_concavity(const PiecewiseLinearTradeoff& f11,
                                                 const PiecewiseLinearTradeoff& f12,
                                                 const PiecewiseLinearTradeoff& f21,
                                                 const PiecewiseLinearTradeoff& f22, double w,
                                                 double gamma, double eta);

// gamma = eta = w branch: C((1-w) T(P1, mix) + w T(P2, mix)).
PiecewiseLinearTradeoff advanced_joint_concavity_collapsed(const PiecewiseLinearTradeoff& t_p1_mix,
                                                           const PiecewiseLinearTradeoff& t_p2_mix,
                                                           double w);

struct AdvancedSearchResult {
    PiecewiseLinearTradeoff curve;
    double gamma = 0.0;
    double eta = 0.0;
    double value = 0.0;
};
// Log-spaced grid search over the feasible (gamma, eta) rectangle maximizing
// the bound at alpha_at.
AdvancedSearchResult advanced_joint_concavity_search(const PiecewiseLinearTradeoff& f11,
                                                     const PiecewiseLinearTradeoff& f12,
                                                     const PiecewiseLinearTradeoff& f21,
                                                     const PiecewiseLinearTradeoff& f22, double w,
                                                     double alpha_at, int grid = 32);

// Shuffle-shaped mixture P = (1-w)P0 + wQ0 vs Q = (1-w)Q0 + wP0:
// T(P,Q) >= C(2w Id + (1-2w) f0), 0 <= w <= 1/2.
PiecewiseLinearTradeoff advanced_shuffle_bound(const PiecewiseLinearTradeoff& f0, double w);
// Subsampling shape P0 vs (1-w)P0 + wQ1: T >= C((1-w) Id + w T(P1,Q1)).
PiecewiseLinearTradeoff subsample_bound(const PiecewiseLinearTradeoff& f11, double w);

struct EqualityReport {
    bool holds = false;
    double max_violation = 0.0;
};
// Necessary-and-sufficient equality condition for the two-component joint
// concavity bound: (w1 p1 + w2 p2)/(w1 q1 + w2 q2) = w1 p1/q1 + w2 p2/q2
// pointwise on the support of the P mixture, with the 0/0 convention that an
// undefined component ratio inherits the other component's ratio.
EqualityReport equality_diagnostic(const DiscretePair& c1, const DiscretePair& c2, double w1,
                                   double w2, double tol = 1e-10);

struct InequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};
InequalityReport hockey_stick_joint_convexity(std::span<const DiscretePair> components,
                                              std::span<const double> weights, double gamma);
// Scaled exponentiation of the Renyi divergence (power divergence of the
// given order); may report +inf when a component has mass where q = 0.
InequalityReport power_divergence_joint_convexity(std::span<const DiscretePair> components,
                                                  std::span<const double> weights, double order);
// Advanced joint convexity of the hockey-stick divergence; the five scalar
// parameters must satisfy exp(eps') = (1-w)exp(eps0) + w exp(eps1) and
// exp(eps0)(1-w)gamma + exp(eps1) w eta = exp(eps') w.
InequalityReport advanced_hockey_stick_inequality(const DiscretePair& p1q1_atoms,
                                                  const DiscretePair& p2q2_atoms, double w,
                                                  double eps0, double eps1, double gamma,
                                                  double eta);

}  // namespace fdp
