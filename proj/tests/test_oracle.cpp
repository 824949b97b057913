#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "fdp/oracle.hpp"
#include "fdp/shuffle.hpp"
#include "fdp/tradeoff.hpp"
#include "testutil.hpp"

using namespace fdp;

TEST_CASE("shuffle pair at n=1 is the randomized-response pair") {
    const double eps0 = 1.0;
    const DiscretePair pair = build_shuffle_pair({1, eps0});
    REQUIRE(pair.size() == 2);
    pair.validate();
    const double w = 1.0 / (std::exp(eps0) + 1.0);
    // atoms sorted by ratio: (0,1) then (1,0)
    CHECK(std::exp(pair.log_p[0]) == doctest::Approx(w).epsilon(1e-13));
    CHECK(std::exp(pair.log_q[0]) == doctest::Approx(1.0 - w).epsilon(1e-13));
    CHECK(std::exp(pair.log_p[1]) == doctest::Approx(1.0 - w).epsilon(1e-13));
    CHECK(std::exp(pair.log_q[1]) == doctest::Approx(w).epsilon(1e-13));
}

TEST_CASE("shuffle pair at n=2 has the five hand-checked atoms") {
    const DiscretePair pair = build_shuffle_pair({2, std::log(3.0)});
    REQUIRE(pair.size() == 5);
    pair.validate();
    // ratio order: (0,2), (0,1), (1,1), (1,0)... exact order sorts by a/b with
    // ties by a: (0,1) and (0,2) share ratio 0. Masses from the two-level
    // mixture with w = 1/4, count weights 1/2 each.
    double p_sum_zero_ratio = std::exp(pair.log_p[0]) + std::exp(pair.log_p[1]);
    double q_sum_zero_ratio = std::exp(pair.log_q[0]) + std::exp(pair.log_q[1]);
    CHECK(p_sum_zero_ratio == doctest::Approx(0.1875).epsilon(1e-13));
    CHECK(q_sum_zero_ratio == doctest::Approx(0.5625).epsilon(1e-13));
    CHECK(std::exp(pair.log_p[2]) == doctest::Approx(0.25).epsilon(1e-13));  // (1,1)
    CHECK(std::exp(pair.log_q[2]) == doctest::Approx(0.25).epsilon(1e-13));
    double p_sum_inf = std::exp(pair.log_p[3]) + std::exp(pair.log_p[4]);
    CHECK(p_sum_inf == doctest::Approx(0.5625).epsilon(1e-13));
}

TEST_CASE("mass normalization audit at a large instance") {
    const DiscretePair pair = build_shuffle_pair({2000, 4.444}, 2000);
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < pair.size(); ++i) {
        sp += std::exp(pair.log_p[i]);
        sq += std::exp(pair.log_q[i]);
    }
    CHECK(std::abs(sp - 1.0) < 1e-10);
    CHECK(std::abs(sq - 1.0) < 1e-10);
    CHECK_THROWS_AS(build_shuffle_pair({30000, 1.0}), std::invalid_argument);
}

TEST_CASE("exact_tradeoff: identical pair gives Id, disjoint supports give zero") {
    const DiscretePair same = pair_from_masses(std::vector<double>{0.3, 0.7},
                                               std::vector<double>{0.3, 0.7});
    const PiecewiseLinearTradeoff id = exact_tradeoff(same);
    CHECK(id(0.25) == doctest::Approx(0.75).epsilon(1e-14));

    const DiscretePair disj = pair_from_masses(std::vector<double>{0.5, 0.5, 0.0},
                                               std::vector<double>{0.0, 0.0, 1.0});
    const PiecewiseLinearTradeoff zero = exact_tradeoff(disj);
    CHECK(zero(0.0) == 0.0);
    CHECK(zero(0.5) == 0.0);
}

TEST_CASE("hockey stick: identical pair, pure-DP tightness, conjugate identity") {
    const DiscretePair same = pair_from_masses(std::vector<double>{0.4, 0.6},
                                               std::vector<double>{0.4, 0.6});
    CHECK(exact_hockey_stick(same, 1.0) == 0.0);
    CHECK(exact_hockey_stick(same, 2.5) == 0.0);

    const double eps0 = 1.3;
    const DiscretePair rr = build_shuffle_pair({1, eps0});
    CHECK(exact_hockey_stick(rr, std::exp(eps0)) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(exact_hockey_stick(rr, 1.0) ==
          doctest::Approx((std::exp(eps0) - 1.0) / (std::exp(eps0) + 1.0)).epsilon(1e-13));

    // two routes to the same divergence: the conjugate of T(P,Q) equals the
    // hockey stick of the swapped pair, the segment-sum functional equals the
    // hockey stick of the pair itself; for symmetric pairs all three coincide
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const DiscretePair pair = testutil::random_pair(rng, 6, trial % 2 == 0);
        DiscretePair swapped;
        swapped.log_p = pair.log_q;
        swapped.log_q = pair.log_p;
        const PiecewiseLinearTradeoff curve = exact_tradeoff(pair);
        for (double eps : {0.0, 0.3, 1.0}) {
            const double gamma = std::exp(eps);
            CHECK(to_epsilon_delta(curve, eps) ==
                  doctest::Approx(exact_hockey_stick(swapped, gamma)).epsilon(1e-12).scale(1.0));
            CHECK(f_divergence(curve, hockey_stick_fn(gamma)) ==
                  doctest::Approx(exact_hockey_stick(pair, gamma)).epsilon(1e-11).scale(1.0));
        }
    }

    // the shuffle mixture pair is mirror symmetric: direct equality
    const DiscretePair sh = build_shuffle_pair({60, 1.0});
    const PiecewiseLinearTradeoff shc = exact_tradeoff(sh);
    for (double eps : {0.0, 0.4}) {
        CHECK(to_epsilon_delta(shc, eps) ==
              doctest::Approx(exact_hockey_stick(sh, std::exp(eps))).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("exact_epsilon: randomized response approaches eps0 as delta -> 0") {
    const double eps0 = 0.9;
    const DiscretePair rr = build_shuffle_pair({1, eps0});
    const EpsilonResult r = exact_epsilon(rr, 1e-12);
    CHECK(r.epsilon == doctest::Approx(eps0).epsilon(1e-4));
    CHECK(exact_epsilon(rr, 0.9).already_satisfied);
}

TEST_CASE("structural mixture oracle equals full enumeration") {
    for (std::int64_t n : {2, 17, 100}) {
        for (double eps0 : {0.5, 1.0}) {
            ShuffleParams p{n, eps0};
            p.truncation_tau = 0.0;
            const DiscretePair pair = build_shuffle_pair(p);
            for (double gamma : {1.0, 1.2, std::exp(0.5), 2.4}) {
                const double enumerated = exact_hockey_stick(pair, gamma);
                const double structural = shuffle_mixture_hockey_stick(p, gamma);
                CHECK(structural == doctest::Approx(enumerated).epsilon(1e-12).scale(1.0));
            }
        }
    }
}

TEST_CASE("closed-form bound dominates the exact mixture hockey stick") {
    const ShuffleParams p{100, 1.0};
    const DiscretePair pair = build_shuffle_pair(p);
    for (double eps : {0.0, 0.1, 0.3, 0.5, 0.8}) {
        const double exact = exact_hockey_stick(pair, std::exp(eps));
        const double bound = shuffle_delta(p, eps).delta;
        CHECK(exact <= bound + 1e-12);
    }
    // and the exact epsilon stays below the f-DP epsilon at equal delta
    const double d = shuffle_delta(p, 0.4).delta;
    if (d > 1e-300 && d < 1.0) {
        const EpsilonResult ex = shuffle_mixture_exact_epsilon(p, d);
        CHECK(ex.epsilon <= shuffle_epsilon(p, d).epsilon + 1e-5);
    }
}

TEST_CASE("merging atoms is a post-processing: the curve never decreases") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 40; ++trial) {
        const DiscretePair pair = testutil::random_pair(rng, 6, true);
        const PiecewiseLinearTradeoff before = exact_tradeoff(pair);
        // merge two random atoms
        const std::size_t i = rng() % pair.size();
        std::size_t j = rng() % pair.size();
        if (j == i) j = (j + 1) % pair.size();
        std::vector<double> p, q;
        for (std::size_t k = 0; k < pair.size(); ++k) {
            if (k == j) continue;
            double pk = std::exp(pair.log_p[k]), qk = std::exp(pair.log_q[k]);
            if (k == i) {
                pk += std::exp(pair.log_p[j]);
                qk += std::exp(pair.log_q[j]);
            }
            p.push_back(pk);
            q.push_back(qk);
        }
        const PiecewiseLinearTradeoff after = exact_tradeoff(pair_from_masses(p, q));
        for (int g = 0; g <= 20; ++g) {
            const double a = g / 20.0;
            CHECK(after(a) >= before(a) - 1e-12);
        }
    }
}

TEST_CASE("sampling attack brackets the exact hockey stick") {
    const ShuffleParams p{100, 1.0};
    const double gamma = std::exp(0.3);
    const double exact = shuffle_mixture_hockey_stick(p, gamma);
    const McHockeyStick mc = shuffle_mixture_hockey_stick_mc(p, gamma, 200000, 1234);
    CHECK(mc.lower <= exact);
    CHECK(mc.upper >= exact);
    CHECK(std::abs(mc.estimate - exact) < 0.01);
    // deterministic given the seed
    const McHockeyStick again = shuffle_mixture_hockey_stick_mc(p, gamma, 200000, 1234);
    CHECK(again.estimate == mc.estimate);
}
