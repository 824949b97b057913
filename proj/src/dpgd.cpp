#include "fdp/dpgd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fdp/parallel.hpp"
#include "fdp/special.hpp"

namespace fdp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// indicator-form likelihood-ratio-test error terms at log threshold t
void error_terms(double mu, double t, double& a_term, double& b_term) {
    if (mu == 0.0) {
        // zero-sensitivity initialization: the log ratio is identically 0;
        // the two-sided mu -> 0 limit keeps the integrand continuous
        a_term = t > 0.0 ? 1.0 : (t < 0.0 ? 0.0 : 0.5);
        b_term = 1.0 - a_term;
        return;
    }
    const double ti = -t / mu + 0.5 * mu;
    if (mu < 0.0) {
        a_term = gaussian_cdf(ti);
        b_term = gaussian_cdf(-ti + mu);
    } else {
        a_term = gaussian_cdf(-ti);
        b_term = gaussian_cdf(ti - mu);
    }
}

struct PanelResult {
    double value = 0.0;
    bool converged = true;
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
void adaptive(F&& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
              int depth, PanelResult& out) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double d = left + right - whole;
    if (std::abs(d) <= 15.0 * tol) {
        out.value += left + right + d / 15.0;
        return;
    }
    if (depth <= 0) {
        out.value += left + right;
        out.converged = false;
        return;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
    adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

// adaptive Simpson over [a, b]
template <class F>
PanelResult integrate_panel(F&& f, double a, double b, double tol, int depth) {
    PanelResult out;
    if (b <= a) return out;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    adaptive(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth, out);
    return out;
}

}  // namespace

double InitSensitivityModel::mu(double init) const {
    switch (kind) {
        case Kind::linear_no_clip:
            return (a - init) / sigma;
        case Kind::clipped_linear:
            return std::clamp(a - init, -c, c) / sigma;
        case Kind::logistic:
            // sup over |xy| <= M of the softmax gradient magnitude
            return 1.0 / ((1.0 + std::exp(-bound_m * std::abs(init))) * sigma);
        case Kind::custom:
            return custom_mu(init);
    }
    return 0.0;
}

std::vector<double> InitSensitivityModel::kink_points() const {
    switch (kind) {
        case Kind::clipped_linear:
            return {a - c, a, a + c};  // clamp corners plus the sign change of mu
        case Kind::linear_no_clip:
            return {a};
        case Kind::logistic:
            return {0.0};
        case Kind::custom:
            return {};
    }
    return {};
}

InitSensitivityModel InitSensitivityModel::no_clip(double a, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("dpgd model: sigma must be > 0");
    InitSensitivityModel m;
    m.kind = Kind::linear_no_clip;
    m.a = a;
    m.sigma = sigma;
    return m;
}

InitSensitivityModel InitSensitivityModel::clipped(double a, double c, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("dpgd model: sigma must be > 0");
    if (!(c >= 0.0)) throw std::invalid_argument("dpgd model: clip norm must be >= 0");
    InitSensitivityModel m;
    m.kind = Kind::clipped_linear;
    m.a = a;
    m.c = c;
    m.sigma = sigma;
    return m;
}

InitSensitivityModel InitSensitivityModel::logistic_loss(double bound_m, double sigma) {
    if (!(sigma > 0.0) || !(bound_m > 0.0))
        throw std::invalid_argument("dpgd model: sigma and M must be > 0");
    InitSensitivityModel m;
    m.kind = Kind::logistic;
    m.bound_m = bound_m;
    m.sigma = sigma;
    return m;
}

InitSensitivityModel InitSensitivityModel::constant(double mu) {
    InitSensitivityModel m;
    m.kind = Kind::custom;
    m.custom_mu = [mu](double) { return mu; };
    return m;
}

std::vector<double> default_t_grid(int points, double t_max) {
    if (points < 3) throw std::invalid_argument("default_t_grid: needs >= 3 points");
    std::vector<double> ts(static_cast<std::size_t>(points));
    const double c = 2.5;
    for (int i = 0; i < points; ++i) {
        const double u = -1.0 + 2.0 * i / static_cast<double>(points - 1);
        ts[static_cast<std::size_t>(i)] = t_max * std::tanh(c * u) / std::tanh(c);
    }
    return ts;
}

ParametricCurve dpgd_curve(const InitSensitivityModel& model, const QuadratureSpec& quad,
                           std::span<const double> t_grid) {
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw std::invalid_argument("dpgd_curve: t_grid must be sorted");
    if (!(quad.tolerance > 0.0)) throw std::invalid_argument("dpgd_curve: tolerance must be > 0");

    std::vector<double> cuts{quad.lo, quad.hi};
    for (double k : model.kink_points())
        if (k > quad.lo && k < quad.hi) cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());

    const double tail = 2.0 * gaussian_cdf(quad.lo);  // Gaussian mass outside the domain
    ParametricCurve out;
    out.samples.resize(t_grid.size());
    std::vector<char> ok(t_grid.size(), 1);

    par::for_each(static_cast<std::int64_t>(t_grid.size()), [&](std::int64_t k) {
        const double t = t_grid[static_cast<std::size_t>(k)];
        auto fa = [&](double x) {
            double at, bt;
            error_terms(model.mu(x), t, at, bt);
            return gaussian_pdf(x) * at;
        };
        auto fb = [&](double x) {
            double at, bt;
            error_terms(model.mu(x), t, at, bt);
            return gaussian_pdf(x) * bt;
        };
        PanelResult alpha, beta;
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            const double ptol = quad.tolerance * (cuts[p + 1] - cuts[p]) / (quad.hi - quad.lo);
            const PanelResult ra =
                integrate_panel(fa, cuts[p], cuts[p + 1], ptol, quad.max_subdivisions);
            const PanelResult rb =
                integrate_panel(fb, cuts[p], cuts[p + 1], ptol, quad.max_subdivisions);
            alpha.value += ra.value;
            beta.value += rb.value;
            alpha.converged = alpha.converged && ra.converged && rb.converged;
        }
        if (!alpha.converged) ok[static_cast<std::size_t>(k)] = 0;
        out.samples[static_cast<std::size_t>(k)] = {t, std::clamp(alpha.value, 0.0, 1.0),
                                                    std::clamp(beta.value, 0.0, 1.0),
                                                    quad.tolerance + tail, -std::exp(-t)};
    });
    for (char c : ok)
        if (!c)
            throw std::runtime_error(
                "dpgd_curve: adaptive quadrature failed to converge within max_subdivisions");
    return out;
}

GdpCurve gdp_baseline(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("gdp_baseline: c must be > 0");
    return GdpCurve(c);
}

std::vector<AmplificationRow> amplification_report(const InitSensitivityModel& model,
                                                   const QuadratureSpec& quad,
                                                   std::span<const double> alpha_grid,
                                                   int t_points) {
    const std::vector<double> ts = default_t_grid(t_points);
    const PiecewiseLinearTradeoff env = dpgd_curve(model, quad, ts).tangent_curve();
    const GdpCurve base = gdp_baseline(model.c / model.sigma);
    std::vector<AmplificationRow> rows;
    rows.reserve(alpha_grid.size());
    for (double a : alpha_grid) {
        const double f = env(a), g = base(a);
        rows.push_back({a, f, g, f - g});
    }
    return rows;
}

ParametricCurve noclip_closed_form(double a, double sigma, std::span<const double> t_grid) {
    if (!(sigma > 0.0)) throw std::invalid_argument("noclip_closed_form: sigma must be > 0");
    const double mu = std::abs(a) / std::sqrt(1.0 + sigma * sigma);
    if (!(mu > 0.0)) throw std::invalid_argument("noclip_closed_form: needs a != 0");
    ParametricCurve out;
    out.samples.reserve(t_grid.size());
    for (double t : t_grid) {
        const double alpha = gaussian_cdf(t / mu - 0.5 * mu);
        const double beta = gaussian_cdf(-t / mu - 0.5 * mu);
        out.samples.push_back({t, alpha, beta, 0.0, -std::exp(-t)});
    }
    return out;
}

ParametricCurve gaussian_scale_pair_curve(double s1, double s2, int points, double x_max) {
    if (!(s2 > s1 && s1 > 0.0))
        throw std::invalid_argument("gaussian_scale_pair_curve: needs s2 > s1 > 0");
    if (points < 2) throw std::invalid_argument("gaussian_scale_pair_curve: needs >= 2 points");
    const double r2 = 1.0 / (s1 * s1) - 1.0 / (s2 * s2);
    ParametricCurve out;
    out.samples.reserve(static_cast<std::size_t>(points));
    // rejection region {|x| >= s}; s descends so alpha ascends
    for (int i = 0; i < points; ++i) {
        const double s = x_max * (1.0 - static_cast<double>(i) / (points - 1));
        const double alpha = 2.0 * gaussian_cdf(-s / s1);
        const double beta = 1.0 - 2.0 * gaussian_cdf(-s / s2);
        const double log_lr = std::log(s2 / s1) - 0.5 * s * s * r2;  // boundary likelihood ratio
        out.samples.push_back({std::exp(log_lr), alpha, std::max(beta, 0.0), 0.0, -std::exp(-log_lr)});
    }
    return out;
}

DpgdMcSample dpgd_monte_carlo(const InitSensitivityModel& model, double t, std::int64_t draws,
                              std::uint64_t seed) {
    if (draws < 2) throw std::invalid_argument("dpgd_monte_carlo: needs draws >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    NeumaierSum sa, sb, saa, sbb;
    for (std::int64_t i = 0; i < draws; ++i) {
        double at, bt;
        error_terms(model.mu(gauss(rng)), t, at, bt);
        sa.add(at);
        sb.add(bt);
        saa.add(at * at);
        sbb.add(bt * bt);
    }
    const double n = static_cast<double>(draws);
    DpgdMcSample out;
    out.alpha = sa.value() / n;
    out.beta = sb.value() / n;
    out.alpha_se = std::sqrt(std::max(saa.value() / n - out.alpha * out.alpha, 0.0) / n);
    out.beta_se = std::sqrt(std::max(sbb.value() / n - out.beta * out.beta, 0.0) / n);
    return out;
}

}  // namespace fdp
