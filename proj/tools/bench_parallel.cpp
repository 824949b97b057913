// Benchmark of the OpenMP kernels against the serial reference path.
// The blocked reduction keeps a fixed summation tree, so both paths must
// agree bit for bit; this binary verifies that while timing them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "fdp/dpgd.hpp"
#include "fdp/parallel.hpp"
#include "fdp/shuffle.hpp"
#include "fdp/special.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// shuffle accountant workload: per-index binomial tail sums
double shuffle_workload(bool parallel) {
    const fdp::ShuffleParams p{200000, 4.444};
    const fdp::WeightWindow win = fdp::shuffle_weight_window(p);
    const std::int64_t m = win.hi - win.lo + 1;
    double acc = 0.0;
    for (int rep = 0; rep < 6; ++rep) {
        const std::int64_t shift = rep * 37;
        acc += fdp::par::block_sum(
            m,
            [&](std::int64_t j) {
                const std::int64_t i = win.lo + j;
                return std::exp(win.log_w[static_cast<std::size_t>(j)] +
                                fdp::binom_log_cdf(i / 2 - shift, i, 0.5));
            },
            parallel);
    }
    return acc;
}

// dpgd workload: quadrature parallel over the threshold grid
double dpgd_workload(bool parallel) {
    const int saved = fdp::par::threads();
    if (!parallel) fdp::par::set_threads(1);
    const auto model = fdp::InitSensitivityModel::clipped(1.0, 2.0, 1.0);
    const fdp::QuadratureSpec quad;
    const std::vector<double> ts = fdp::default_t_grid(401, 25.0);
    const fdp::ParametricCurve pc = fdp::dpgd_curve(model, quad, ts);
    fdp::par::set_threads(saved);
    double acc = 0.0;
    for (const auto& s : pc.samples) acc += s.alpha + s.beta;
    return acc;
}

}  // namespace

int main() {
    std::printf("OpenMP enabled: %s, threads: %d\n", fdp::par::openmp_enabled() ? "yes" : "no",
                fdp::par::threads());

    auto t0 = Clock::now();
    const double serial = shuffle_workload(false);
    const double t_serial = ms_since(t0);
    t0 = Clock::now();
    const double parallel = shuffle_workload(true);
    const double t_parallel = ms_since(t0);
    std::printf("shuffle sums : serial %8.1f ms | openmp %8.1f ms | speedup %.2fx | %s\n",
                t_serial, t_parallel, t_serial / t_parallel,
                serial == parallel ? "bit-identical" : "MISMATCH");

    t0 = Clock::now();
    const double dserial = dpgd_workload(false);
    const double td_serial = ms_since(t0);
    t0 = Clock::now();
    const double dparallel = dpgd_workload(true);
    const double td_parallel = ms_since(t0);
    std::printf("dpgd quadrature: serial %6.1f ms | openmp %8.1f ms | speedup %.2fx | %s\n",
                td_serial, td_parallel, td_serial / td_parallel,
                std::abs(dserial - dparallel) == 0.0 ? "bit-identical" : "MISMATCH");

    return (serial == parallel && dserial == dparallel) ? 0 : 1;
}
