// fdp: numerical f-DP accountant for shuffled mechanisms and one-step
// noisy gradient descent with random initialization.
//
// Exit codes: 0 success, 1 reproduction tolerance violated, 2 invalid
// arguments, 3 numeric non-convergence.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fdp/dpgd.hpp"
#include "fdp/mixture.hpp"
#include "fdp/oracle.hpp"
#include "fdp/parallel.hpp"
#include "fdp/shuffle.hpp"
#include "fdp/tradeoff.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt(double x, int significant = 17) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, x);
    return buf;
}

struct Output {
    std::string path;        // empty = stdout
    std::string format;      // csv | json

    void write(const std::string& body) const {
        if (path.empty()) {
            std::cout << body;
            return;
        }
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::invalid_argument("cannot open output file: " + path);
        os << body;
    }
};

std::string curve_csv(const fdp::PiecewiseLinearTradeoff& f,
                      std::map<std::string, std::string> meta) {
    meta["version"] = kVersion;
    std::ostringstream os;
    fdp::write_curve_csv(os, f, meta);
    return os.str();
}

std::string curve_json(const fdp::PiecewiseLinearTradeoff& f,
                       std::map<std::string, std::string> meta) {
    meta["version"] = kVersion;
    nlohmann::json j;
    for (const auto& [k, v] : meta) j["meta"][k] = v;
    auto& knots = j["knots"];
    for (const auto& k : f.knots()) knots.push_back({k.alpha, k.beta});
    return j.dump(2) + "\n";
}

int run_shuffle(const std::string& sub, const fdp::ShuffleParams& params, double eps, double delta,
                int grid, bool all, std::int64_t all_cap, const Output& out) {
    using namespace fdp;
    if (sub == "curve") {
        const ThresholdPolicy policy =
            all ? ThresholdPolicy::all_knots : (params.n <= all_cap ? ThresholdPolicy::all_knots
                                                                    : ThresholdPolicy::grid);
        const PiecewiseLinearTradeoff curve = shuffle_curve(params, policy, grid, all_cap);
        std::map<std::string, std::string> meta{
            {"command", "shuffle curve"},
            {"n", std::to_string(params.n)},
            {"eps0", fmt(params.eps0)},
            {"tau", fmt(params.truncation_tau)},
            {"policy", policy == ThresholdPolicy::all_knots ? "all" : "grid"},
            {"grid", std::to_string(grid)},
            {"envelope", policy == ThresholdPolicy::all_knots ? "exact" : "tangent_lower"},
        };
        out.write(out.format == "json" ? curve_json(curve, meta) : curve_csv(curve, meta));
        return 0;
    }

    nlohmann::json j;
    j["version"] = kVersion;
    j["n"] = params.n;
    j["eps0"] = params.eps0;
    j["truncation_tau"] = params.truncation_tau;
    if (sub == "delta") {
        const ShuffleDeltaResult r = shuffle_delta(params, eps);
        j["eps"] = eps;
        j["result"] = r.delta;
        j["t_eps"] = r.t_eps;
        j["tail_mass"] = r.tail_mass;
        std::cout << fmt(r.delta, 6) << "\n";
    } else {  // epsilon
        const ShuffleEpsilonResult r = shuffle_epsilon(params, delta);
        j["delta"] = delta;
        j["result"] = r.epsilon;
        j["already_satisfied"] = r.already_satisfied;
        j["t_eps"] = r.at.t_eps;
        j["tail_mass"] = r.at.tail_mass;
        std::cout << fmt(r.epsilon, 6) << "\n";
    }
    if (!out.path.empty()) {
        std::ofstream os(out.path, std::ios::binary);
        os << j.dump(2) << "\n";
    }
    return 0;
}

fdp::InitSensitivityModel make_model(const std::string& name, double a, double c, double sigma,
                                     double bound_m) {
    using M = fdp::InitSensitivityModel;
    if (name == "clip") return M::clipped(a, c, sigma);
    if (name == "noclip") return M::no_clip(a, sigma);
    if (name == "logistic") return M::logistic_loss(bound_m, sigma);
    throw std::invalid_argument("unknown dpgd model: " + name);
}

int run_dpgd_curve(const std::string& model_name, double a, double c, double sigma, double bound_m,
                   int points, double tol, double t_max, const Output& out) {
    using namespace fdp;
    const std::vector<double> ts = default_t_grid(points, t_max);
    ParametricCurve pc;
    std::string method;
    if (model_name == "noclip") {
        // the unclipped linear model has the exact Gaussian-sum closed form
        pc = noclip_closed_form(a, sigma, ts);
        method = "gaussian_sum_closed_form";
    } else {
        QuadratureSpec quad;
        quad.tolerance = tol;
        pc = dpgd_curve(make_model(model_name, a, c, sigma, bound_m), quad, ts);
        method = "adaptive_simpson";
    }
    std::ostringstream os;
    os << "# version: " << kVersion << "\n";
    os << "# command: dpgd curve\n";
    os << "# model: " << model_name << "\n";
    os << "# a: " << fmt(a) << "\n# c: " << fmt(c) << "\n# sigma: " << fmt(sigma) << "\n";
    os << "# points: " << points << "\n# tol: " << fmt(tol) << "\n";
    os << "# method: " << method << "\n";
    os << "# max_err: " << fmt(pc.samples.empty() ? 0.0 : pc.samples.front().err) << "\n";
    os << "t,alpha,beta,err\n";
    for (const auto& s : pc.samples)
        os << fmt(s.t) << "," << fmt(s.alpha) << "," << fmt(s.beta) << "," << fmt(s.err) << "\n";
    out.write(os.str());
    return 0;
}

int run_dpgd_compare(double a, double c, double sigma, int points, double tol, const Output& out) {
    using namespace fdp;
    QuadratureSpec quad;
    quad.tolerance = tol;
    std::vector<double> alphas;
    for (int i = 1; i < points; ++i) alphas.push_back(static_cast<double>(i) / points);
    const auto rows =
        amplification_report(InitSensitivityModel::clipped(a, c, sigma), quad, alphas);
    std::ostringstream os;
    os << "# version: " << kVersion << "\n";
    os << "# command: dpgd compare\n";
    os << "# a: " << fmt(a) << "\n# c: " << fmt(c) << "\n# sigma: " << fmt(sigma) << "\n";
    os << "# tol: " << fmt(tol) << "\n";
    os << "# margin: certified up to quadrature tolerance (tangent envelope)\n";
    os << "alpha,f_init,g_c,margin\n";
    for (const auto& r : rows)
        os << fmt(r.alpha) << "," << fmt(r.f_init) << "," << fmt(r.g_c) << "," << fmt(r.margin)
           << "\n";
    out.write(os.str());
    return 0;
}

int run_oracle(const fdp::ShuffleParams& params, bool exact_curve, double gamma, double delta,
               bool mc, std::int64_t samples, std::uint64_t seed, const Output& out) {
    using namespace fdp;
    const auto t0 = std::chrono::steady_clock::now();
    auto ms_since = [&t0] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };
    if (exact_curve) {
        const DiscretePair pair = build_shuffle_pair(params);
        const PiecewiseLinearTradeoff curve = exact_tradeoff(pair);
        std::map<std::string, std::string> meta{
            {"command", "oracle exact-tradeoff"},
            {"n", std::to_string(params.n)},
            {"eps0", fmt(params.eps0)},
            {"atoms", std::to_string(pair.size())},
            {"runtime_ms", std::to_string(ms_since())},
        };
        out.write(out.format == "json" ? curve_json(curve, meta) : curve_csv(curve, meta));
        return 0;
    }

    nlohmann::json j;
    j["version"] = kVersion;
    j["n"] = params.n;
    j["eps0"] = params.eps0;
    double value = 0.0;
    if (gamma > 0.0) {
        if (mc) {
            const McHockeyStick est = shuffle_mixture_hockey_stick_mc(params, gamma, samples, seed);
            value = est.estimate;
            j["mc_lower"] = est.lower;
            j["mc_upper"] = est.upper;
            j["samples"] = est.samples;
            j["seed"] = seed;
        } else {
            value = shuffle_mixture_hockey_stick(params, gamma);
        }
        j["gamma"] = gamma;
    } else {
        const EpsilonResult r = shuffle_mixture_exact_epsilon(params, delta);
        value = r.epsilon;
        j["delta"] = delta;
        j["already_satisfied"] = r.already_satisfied;
    }
    j["value"] = value;
    j["runtime_ms"] = ms_since();
    std::cout << fmt(value, 6) << "\n";
    if (!out.path.empty()) {
        std::ofstream os(out.path, std::ios::binary);
        os << j.dump(2) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// reference-value reproduction reports

struct Report {
    std::ostringstream os;
    bool ok = true;
    void line(const std::string& name, double reference, double computed, bool pass) {
        os << (pass ? "  [ok]   " : "  [FAIL] ") << name << ": reference=" << fmt(reference, 6)
           << " computed=" << fmt(computed, 6) << " ratio=" << fmt(computed / reference, 6)
           << "\n";
        ok = ok && pass;
    }
};

int reproduce(const std::string& target, const Output& out) {
    using namespace fdp;
    Report rep;
    if (target == "t1") {
        rep.os << "t1: reference deltas, shuffled randomized response, n=10000, eps0=4.444\n";
        const ShuffleParams p{10000, 4.444};
        const double refs[] = {3e-6, 1e-7, 4e-9, 9e-11, 2e-12, 2e-14};
        for (int i = 0; i < 6; ++i) {
            const double eps = 0.5 + 0.1 * i;
            const double d = shuffle_delta(p, eps).delta;
            rep.line("delta(eps=" + fmt(eps, 3) + ")", refs[i], d,
                     d > 0.5 * refs[i] && d < 2.0 * refs[i]);
        }
    } else if (target == "t2") {
        rep.os << "t2: reference epsilons at fixed delta, n=10000, eps0=4.444\n";
        const ShuffleParams p{10000, 4.444};
        const double deltas[] = {5e-5, 3e-6, 1e-7, 4e-9, 9e-11};
        const double refs[] = {0.4, 0.5, 0.6, 0.7, 0.8};
        for (int i = 0; i < 5; ++i) {
            const double e = shuffle_epsilon(p, deltas[i]).epsilon;
            rep.line("eps(delta=" + fmt(deltas[i], 3) + ")", refs[i], e,
                     std::abs(e - refs[i]) <= 0.01);
        }
    } else if (target == "fig1") {
        rep.os << "fig1: amplified curve vs the local pure-DP curve, n=10000\n";
        for (double eps0 : {3.444, 4.444, 5.444}) {
            const ShuffleParams p{10000, eps0};
            const double d = shuffle_delta(p, 0.5).delta;
            rep.line("delta(0.5) finite at eps0=" + fmt(eps0, 4), 1.0,
                     std::isfinite(d) && d >= 0.0 && d <= 1.0 ? 1.0 : 0.0,
                     std::isfinite(d) && d >= 0.0 && d <= 1.0);
        }
        const ShuffleParams p{10000, 4.444};
        const PiecewiseLinearTradeoff curve = shuffle_curve(p, ThresholdPolicy::grid, 300);
        const PiecewiseLinearTradeoff local = pure_dp_curve(4.444);
        rep.line("amplification at alpha=0.2 (curve above local)", local(0.2), curve(0.2),
                 curve(0.2) > local(0.2));
    } else if (target == "fig2") {
        rep.os << "fig2: shuffle-shaped mixture, w=1/3 (n=94, eps0=log 2), eps=0.5\n";
        const ShuffleParams p{94, std::log(2.0)};
        const double adv = shuffle_delta(p, 0.5).delta;
        rep.line("advanced joint concavity delta", 1.5e-6, adv,
                 adv >= 0.8 * 1.5e-6 && adv <= 1.2 * 1.5e-6);
        const PiecewiseLinearTradeoff f0 = shuffle_base_knots(p, ThresholdPolicy::all_knots);
        const double plain = to_epsilon_delta(f0, 0.5);
        rep.line("plain joint concavity delta", 0.0020, plain,
                 plain >= 0.8 * 0.0020 && plain <= 1.2 * 0.0020);
    } else if (target == "fig3") {
        rep.os << "fig3: one-step DP-GD with clipping, a=1, sigma=1\n";
        const QuadratureSpec quad;
        std::vector<double> alphas;
        for (int i = 1; i <= 9; ++i) alphas.push_back(i / 10.0);
        double prev_margin = -1.0;
        for (double c : {0.5, 2.0, 3.0}) {
            const auto rows =
                amplification_report(InitSensitivityModel::clipped(1.0, c, 1.0), quad, alphas);
            double worst = 1.0, at_half = 0.0;
            for (const auto& r : rows) {
                worst = std::min(worst, r.margin);
                if (std::abs(r.alpha - 0.5) < 1e-12) at_half = r.margin;
            }
            rep.line("positive margins at c=" + fmt(c, 3), 0.0, worst, worst > 0.0);
            rep.line("margin grows with c (alpha=0.5), c=" + fmt(c, 3), prev_margin, at_half,
                     at_half > prev_margin);
            prev_margin = at_half;
        }
    } else {
        throw std::invalid_argument("unknown reproduce target: " + target);
    }
    rep.os << (rep.ok ? "REPRODUCED\n" : "MISMATCH\n");
    out.write(rep.os.str());
    return rep.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical f-DP accountant for shuffled mechanisms and one-step DP-GD"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: FDP_THREADS or all cores)");

    Output out;
    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("-o,--out", out.path, "output file (default: stdout)");
        cmd->add_option("--format", out.format, "csv or json")->default_val("csv");
    };

    // shuffle
    fdp::ShuffleParams sp;
    double s_eps = 0.0, s_delta = 0.0;
    int s_grid = 200;
    bool s_all = false;
    std::int64_t s_cap = 2000;
    CLI::App* shuffle = app.add_subcommand("shuffle", "shuffled local randomizer accountant");
    shuffle->require_subcommand(1);
    for (const char* name : {"curve", "delta", "epsilon"}) {
        CLI::App* c = shuffle->add_subcommand(name);
        c->add_option("--n", sp.n, "number of users")->required();
        c->add_option("--eps0", sp.eps0, "local randomizer budget")->required();
        c->add_option("--tau", sp.truncation_tau, "weight-tail truncation mass");
        add_output(c);
        if (std::string(name) == "curve") {
            c->add_option("--grid", s_grid, "threshold count for the tangent-envelope policy");
            c->add_flag("--all", s_all, "force exact enumeration of every knot");
            c->add_option("--all-cap", s_cap, "largest n allowed for the exact policy");
        }
        if (std::string(name) == "delta")
            c->add_option("--eps", s_eps, "epsilon to convert")->required();
        if (std::string(name) == "epsilon")
            c->add_option("--delta", s_delta, "delta to invert")->required();
    }

    // dpgd
    std::string d_model = "clip";
    double d_a = 1.0, d_c = 1.0, d_sigma = 1.0, d_bound = 1.0, d_tol = 1e-9, d_tmax = 25.0;
    int d_points = 201;
    CLI::App* dpgd = app.add_subcommand("dpgd", "one-step noisy gradient descent curves");
    dpgd->require_subcommand(1);
    {
        CLI::App* c = dpgd->add_subcommand("curve");
        c->add_option("--model", d_model, "clip | noclip | logistic");
        c->add_option("--a", d_a, "data constant of the linear example");
        c->add_option("--c", d_c, "clipping norm");
        c->add_option("--sigma", d_sigma, "noise scale");
        c->add_option("--bound-m", d_bound, "|xy| bound of the logistic loss");
        c->add_option("--points", d_points, "threshold grid size");
        c->add_option("--tol", d_tol, "quadrature tolerance per expectation");
        c->add_option("--tmax", d_tmax, "log-threshold range half-width");
        add_output(c);
        CLI::App* m = dpgd->add_subcommand("compare");
        m->add_option("--a", d_a)->required();
        m->add_option("--c", d_c)->required();
        m->add_option("--sigma", d_sigma);
        m->add_option("--points", d_points, "alpha grid size");
        m->add_option("--tol", d_tol);
        add_output(m);
    }

    // oracle
    fdp::ShuffleParams op;
    bool o_exact = false, o_mc = false;
    double o_gamma = 0.0, o_delta = 0.0;
    std::int64_t o_samples = 1000000;
    std::uint64_t o_seed = 1;
    {
        CLI::App* c = app.add_subcommand("oracle", "exact brute-force ground truth");
        c->add_option("--n", op.n)->required();
        c->add_option("--eps0", op.eps0)->required();
        c->add_flag("--exact-tradeoff", o_exact, "emit the exact mixture trade-off curve");
        c->add_option("--gamma", o_gamma, "hockey-stick order e^eps");
        c->add_option("--delta", o_delta, "invert to the exact epsilon");
        c->add_flag("--mc", o_mc, "sampling attack estimate instead of exact sums");
        c->add_option("--samples", o_samples, "attack sample count");
        c->add_option("--seed", o_seed, "attack rng seed");
        add_output(c);
    }

    // reproduce
    std::string r_target;
    {
        CLI::App* c = app.add_subcommand("reproduce", "reference-value reproduction reports");
        c->add_option("target", r_target, "t1 | t2 | fig1 | fig2 | fig3")->required();
        add_output(c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (threads > 0) fdp::par::set_threads(threads);
        if (shuffle->parsed()) {
            const std::string sub = shuffle->get_subcommands().front()->get_name();
            return run_shuffle(sub, sp, s_eps, s_delta, s_grid, s_all, s_cap, out);
        }
        if (dpgd->parsed()) {
            const std::string sub = dpgd->get_subcommands().front()->get_name();
            if (sub == "curve")
                return run_dpgd_curve(d_model, d_a, d_c, d_sigma, d_bound, d_points, d_tol, d_tmax,
                                      out);
            return run_dpgd_compare(d_a, d_c, d_sigma, d_points, d_tol, out);
        }
        if (app.get_subcommand("oracle")->parsed()) {
            if (!o_exact && o_gamma <= 0.0 && o_delta <= 0.0)
                throw std::invalid_argument("oracle: pass --exact-tradeoff, --gamma or --delta");
            return run_oracle(op, o_exact, o_gamma, o_delta, o_mc, o_samples, o_seed, out);
        }
        if (app.get_subcommand("reproduce")->parsed()) return reproduce(r_target, out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
