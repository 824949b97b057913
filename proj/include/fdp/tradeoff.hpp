#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fdp {

struct Knot {
    double alpha = 0.0;
    double beta = 0.0;
};

// Exact convex, non-increasing trade-off curve stored as sorted knots.
//
// Invariants enforced on construction: alphas strictly increasing starting at
// 0, betas non-increasing, segment slopes non-positive and non-decreasing,
// beta <= 1 - alpha, last knot has beta = 0. Evaluation beyond the last knot
// is 0. Knots closer than 1e-15 in alpha are merged keeping the lower beta.
class PiecewiseLinearTradeoff {
public:
    explicit PiecewiseLinearTradeoff(std::vector<Knot> knots);

    double operator()(double alpha) const;

    const std::vector<Knot>& knots() const { return knots_; }
    std::size_t size() const { return knots_.size(); }

    // slope of the segment between knots seg and seg+1
    double slope(std::size_t seg) const;

    double value_at_zero() const { return knots_.front().beta; }
    // first zero z_f = inf{x : f(x) = 0}
    double first_zero() const;

    PiecewiseLinearTradeoff left_inverse() const;
    bool is_symmetric(double tol = 1e-12) const;

private:
    std::vector<Knot> knots_;
};

PiecewiseLinearTradeoff identity_curve();
// f(a) = max(0, 1 - e^eps0 a, e^-eps0 (1 - a)), the pure eps0-DP curve.
PiecewiseLinearTradeoff pure_dp_curve(double eps0);
// pointwise wf*f + wg*g on the union of knot grids (wf + wg = 1)
PiecewiseLinearTradeoff convex_combination(const PiecewiseLinearTradeoff& f, double wf,
                                           const PiecewiseLinearTradeoff& g, double wg);

// Convex piecewise-linear function on the real line used for conjugate
// calculus. A +-inf end slope marks a truncated domain (+inf outside).
class PiecewiseLinearConvex {
public:
    PiecewiseLinearConvex(std::vector<double> xs, std::vector<double> vals, double slope_left,
                          double slope_right);

    double operator()(double x) const;
    PiecewiseLinearConvex conjugate() const;
    // h(y) = f(y / lambda), lambda > 0
    PiecewiseLinearConvex scale_argument(double lambda) const;
    static PiecewiseLinearConvex weighted_sum(std::span<const PiecewiseLinearConvex> fs,
                                              std::span<const double> coef);

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& values() const { return vals_; }
    double slope_left() const { return slope_left_; }
    double slope_right() const { return slope_right_; }

private:
    std::vector<double> xs_, vals_;
    double slope_left_, slope_right_;
};

// f as a convex function on [0,1] (domain-truncated), flat tail included.
PiecewiseLinearConvex to_convex(const PiecewiseLinearTradeoff& f);
// clip a convex function with slopes in [0,1]-ish back to a trade-off curve
PiecewiseLinearTradeoff from_convex(const PiecewiseLinearConvex& g);

// Exact convex conjugate f*(y) = sup_x {xy - f(x)}, x over [0,1].
PiecewiseLinearConvex conjugate(const PiecewiseLinearTradeoff& f);

// delta(eps) = 1 + f*(-e^eps), the (eps, delta)-DP conversion.
double to_epsilon_delta(const PiecewiseLinearTradeoff& f, double epsilon);

struct EpsilonResult {
    double epsilon = 0.0;
    bool already_satisfied = false;
};
// Smallest eps with delta(eps) <= delta, bisected to 1e-6. Flags
// already_satisfied when delta(0) <= delta. Throws when delta lies below the
// curve's floor 1 - f(0).
EpsilonResult invert_epsilon(const PiecewiseLinearTradeoff& f, double delta);

// Symmetrization C(f) = min{f, f^-1}**, exact for piecewise-linear curves.
// Where the slope -1 chord applies (xbar <= f(xbar)) this equals the
// three-branch form: f on [0, xbar], the chord on [xbar, f(xbar)], f^-1
// beyond; its output is its own left inverse.
PiecewiseLinearTradeoff symmetrize(const PiecewiseLinearTradeoff& f);

struct ConvexScalarFn {
    std::function<double(double)> value;
    double at_zero = 0.0;  // F(0)
    double tau = 0.0;      // lim_{t->inf} F(t)/t
};
ConvexScalarFn hockey_stick_fn(double gamma);
// F(s) = s^order; l_F gives exp((order-1) * Renyi divergence of that order)
ConvexScalarFn power_divergence_fn(double order);

// l_F(f) = sum over segments F(1/|s|)|s| dalpha + F(0)(1 - f(0)) + tau (1 - z_f).
// Returns +inf (divergence) when tau = inf and z_f < 1.
double f_divergence(const PiecewiseLinearTradeoff& f, const ConvexScalarFn& F);

enum class Envelope { chordal_upper, tangent_lower };

struct DiscretizedCurve {
    PiecewiseLinearTradeoff curve;
    Envelope envelope;
};

// Exact Gaussian trade-off curve G_mu(a) = Phi(Phi^-1(1-a) - mu).
class GdpCurve {
public:
    explicit GdpCurve(double mu);
    double mu() const { return mu_; }
    double operator()(double alpha) const;
    double derivative(double alpha) const;
    DiscretizedCurve to_knots(std::span<const double> alphas, Envelope kind) const;
    // default grid: alphas = Phi(-z) for z equispaced over [-zmax, zmax]
    DiscretizedCurve to_knots(int points, Envelope kind, double zmax = 8.0) const;

private:
    double mu_;
};

// A line through (alpha, beta) with the given (negative) slope; used to build
// conservative tangent-envelope curves.
struct TangentLine {
    double alpha = 0.0;
    double beta = 0.0;
    double slope = 0.0;
};
PiecewiseLinearTradeoff curve_from_tangents(std::vector<TangentLine> lines);

// CSV: '#'-prefixed metadata lines, then "alpha,beta" header, 17 significant
// digits, sorted by alpha.
void write_curve_csv(std::ostream& os, const PiecewiseLinearTradeoff& f,
                     const std::map<std::string, std::string>& metadata = {});
PiecewiseLinearTradeoff read_curve_csv(std::istream& is);

}  // namespace fdp
