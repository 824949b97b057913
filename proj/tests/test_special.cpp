#include <cmath>
#include <vector>

#include "doctest.h"
#include "fdp/logspace.hpp"
#include "fdp/special.hpp"

using namespace fdp;

namespace {

// long-double pmf by the multiplicative recurrence, independent of lgamma
long double pmf_oracle(std::int64_t k, std::int64_t m, long double p) {
    long double v = powl(1.0L - p, static_cast<long double>(m));
    for (std::int64_t j = 1; j <= k; ++j)
        v *= static_cast<long double>(m - j + 1) / static_cast<long double>(j) * p / (1.0L - p);
    return v;
}

// Phi via the Taylor series Phi(x) = 1/2 + phi(x) (x + x^3/3 + x^5/(3*5) + ...)
long double phi_series_oracle(long double x) {
    long double term = x, sum = x;
    for (int k = 1; k < 500; ++k) {
        term *= x * x / (2.0L * k + 1.0L);
        sum += term;
        if (fabsl(term) < 1e-25L * fabsl(sum)) break;
    }
    const long double pdf = expl(-0.5L * x * x) * 0.398942280401432677939946L;
    return 0.5L + pdf * sum;
}

}  // namespace

TEST_CASE("binom_log_pmf boundary cases and argument checks") {
    CHECK(binom_log_pmf(0, 0, 0.5) == 0.0);                      // empty trial
    CHECK(binom_log_pmf(1, 2, 0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
    CHECK(binom_log_pmf(-1, 5, 0.3) == kNegInf);
    CHECK(binom_log_pmf(6, 5, 0.3) == kNegInf);
    CHECK(binom_log_pmf(0, 7, 0.0) == 0.0);
    CHECK(binom_log_pmf(3, 7, 0.0) == kNegInf);
    CHECK(binom_log_pmf(7, 7, 1.0) == 0.0);
    CHECK_THROWS_AS(binom_log_pmf(0, -1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(binom_log_pmf(0, 3, 1.5), std::invalid_argument);
}

TEST_CASE("binom_log_pmf matches the recurrence oracle at the shuffle scale") {
    const double p = 2.0 / (std::exp(4.444) + 1.0);
    const long double want = pmf_oracle(231, 9999, static_cast<long double>(p));
    const double got = std::exp(binom_log_pmf(231, 9999, p));
    CHECK(std::abs(got / static_cast<double>(want) - 1.0) < 1e-12);
    // a few more spots across the range
    for (std::int64_t k : {0, 17, 100, 500, 5000, 9999}) {
        const long double w = pmf_oracle(k, 9999, static_cast<long double>(p));
        const double g = std::exp(binom_log_pmf(k, 9999, p));
        if (w > 1e-300L)
            CHECK(std::abs(g / static_cast<double>(w) - 1.0) < 1e-11);
    }
}

TEST_CASE("binom_log_cdf clamp semantics and half cases") {
    CHECK(binom_log_cdf(-1, 5, 0.5) == kNegInf);
    CHECK(binom_log_cdf(5, 5, 0.5) == 0.0);
    CHECK(binom_log_cdf(2, 5, 0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("binomial cdf sums exactly to one and stays monotone") {
    for (std::int64_t m = 0; m <= 30; ++m) {
        for (double p : {0.1, 0.5, 0.9}) {
            CHECK(std::exp(binom_log_cdf(m, m, p)) == 1.0);
            long double mass = 0.0L;
            for (std::int64_t k = 0; k <= m; ++k) mass += expl(binom_log_pmf(k, m, p));
            CHECK(std::abs(static_cast<double>(mass) - 1.0) < 1e-14);
            double prev = -std::numeric_limits<double>::infinity();
            for (std::int64_t k = -1; k <= m; ++k) {
                const double c = binom_log_cdf(k, m, p);
                CHECK(c >= prev);
                prev = c;
            }
        }
    }
}

TEST_CASE("binom_log_cdf deep tails keep relative accuracy") {
    // long-double summation oracle of the small tail
    struct Case {
        std::int64_t k, m;
        double p;
    };
    for (auto [k, m, p] : {Case{40, 1000, 0.5}, Case{380, 1000, 0.5}, Case{10, 400, 0.1},
                           Case{120, 2000, 0.25}}) {
        long double tail = 0.0L;
        for (std::int64_t j = 0; j <= k; ++j) tail += pmf_oracle(j, m, static_cast<long double>(p));
        const double got = binom_log_cdf(k, m, p);
        CHECK(std::abs(got - static_cast<double>(logl(tail))) < 1e-13 * std::abs(got));
    }
    // complement identity for p = 1/2
    for (std::int64_t k : {520, 700, 999}) {
        const double a = binom_log_cdf(k, 1000, 0.5);
        const double b = binom_log_sf(999 - k, 1000, 0.5);
        CHECK(a == doctest::Approx(b).epsilon(1e-13));
    }
}

TEST_CASE("gaussian cdf and quantile") {
    CHECK(gaussian_cdf(0.0) == 0.5);
    CHECK(gaussian_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    const double want = static_cast<double>(phi_series_oracle(-1.96L));
    CHECK(std::abs(gaussian_cdf(-1.96) - want) < 1e-12);

    for (double x = -8.0; x <= 8.0; x += 0.25)
        CHECK(std::abs(gaussian_cdf(x) + gaussian_cdf(-x) - 1.0) <= 1e-15);

    for (double q : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
        const double x = gaussian_quantile(q);
        CHECK(std::abs(gaussian_cdf(x) - q) < 1e-12 * std::max(q, 1e-3));
    }
    CHECK_THROWS_AS(gaussian_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_quantile(1.0), std::invalid_argument);
}

TEST_CASE("gaussian_log_cdf deep tail against the pmf-free asymptotic") {
    for (double x : {-1.0, -5.0, -10.0, -20.0, -35.0}) {
        const double got = gaussian_log_cdf(x);
        // compare against erfc in long double where representable
        const long double z = -static_cast<long double>(x) * 0.70710678118654752440L;
        const long double want = logl(0.5L * erfcl(z));
        CHECK(std::abs(got - static_cast<double>(want)) < 1e-10 * std::abs(got));
    }
}
