#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fdp/mixture.hpp"
#include "fdp/tradeoff.hpp"

namespace fdp {

// Per-initialization gradient sensitivity mu_I = (g(I,D1) - g(I,D0)) / sigma
// of the one-step noisy gradient descent output with I ~ N(0,1).
struct InitSensitivityModel {
    enum class Kind { linear_no_clip, clipped_linear, logistic, custom };
    Kind kind = Kind::clipped_linear;
    double a = 0.0;        // data constant of the linear example
    double c = 0.0;        // clipping norm
    double sigma = 1.0;    // noise scale
    double bound_m = 1.0;  // |xy| <= M for the logistic loss
    std::function<double(double)> custom_mu;

    double mu(double init) const;
    std::vector<double> kink_points() const;

    static InitSensitivityModel no_clip(double a, double sigma);
    static InitSensitivityModel clipped(double a, double c, double sigma);
    static InitSensitivityModel logistic_loss(double bound_m, double sigma);
    static InitSensitivityModel constant(double mu);
};

struct QuadratureSpec {
    double lo = -8.5;
    double hi = 8.5;
    double tolerance = 1e-9;    // absolute, per expectation
    int max_subdivisions = 48;  // adaptive Simpson recursion depth
};

// tanh-spaced grid of log-likelihood-ratio thresholds, denser near 0
std::vector<double> default_t_grid(int points = 201, double t_max = 25.0);

// Trade-off lower bound of one-step DP-GD with Gaussian initialization:
//   alpha(t) = E_I[ Phi(t_I) 1{mu<=0} + Phi(-t_I) 1{mu>0} ],
//   beta(t)  = E_I[ Phi(-t_I+mu) 1{mu<=0} + Phi(t_I-mu) 1{mu>0} ],
// t_I = -t/mu_I + mu_I/2, adaptive Simpson over I split at the model kinks.
// Sample slopes are -exp(-t); err carries the quadrature + tail bound.
ParametricCurve dpgd_curve(const InitSensitivityModel& model, const QuadratureSpec& quad,
                           std::span<const double> t_grid);

// c-GDP comparison curve (sensitivity-c gradient plus unit noise).
GdpCurve gdp_baseline(double c);

struct AmplificationRow {
    double alpha = 0.0;
    double f_init = 0.0;  // conservative envelope of the dpgd bound
    double g_c = 0.0;
    double margin = 0.0;
};
// Positive margins are certified up to quadrature tolerance: f_init comes
// from the error-shifted tangent envelope. t_points controls how tight the
// envelope hugs the true bound.
std::vector<AmplificationRow> amplification_report(const InitSensitivityModel& model,
                                                   const QuadratureSpec& quad,
                                                   std::span<const double> alpha_grid,
                                                   int t_points = 1201);

// Exact closed form for the unclipped linear model: the one-step output is a
// sum of Gaussians, so the instance trade-off is the Gaussian pair
// N(0, 1+sigma^2) vs N(a, 1+sigma^2), i.e. G_{a/sqrt(1+sigma^2)}. Sampled
// through the likelihood-ratio-threshold parameterization at t_grid.
ParametricCurve noclip_closed_form(double a, double sigma, std::span<const double> t_grid);

// Exact samples of T(N(0, s1^2), N(0, s2^2)) for s2 > s1 (a two-sided
// rejection region); used for the variance-mismatch Renyi contrast.
ParametricCurve gaussian_scale_pair_curve(double s1, double s2, int points = 2001,
                                          double x_max = 12.0);

// Monte Carlo estimate of the two dpgd expectations at one threshold.
struct DpgdMcSample {
    double alpha = 0.0;
    double beta = 0.0;
    double alpha_se = 0.0;
    double beta_se = 0.0;
};
DpgdMcSample dpgd_monte_carlo(const InitSensitivityModel& model, double t, std::int64_t draws,
                              std::uint64_t seed);

}  // namespace fdp
