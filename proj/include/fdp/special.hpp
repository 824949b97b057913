#pragma once

#include <cstdint>

namespace fdp {

// log P[X = k] for X ~ Binom(m, p). Returns -inf outside 0..m; throws on m < 0
// or p outside [0,1]. Exact at p in {0,1}.
double binom_log_pmf(std::int64_t k, std::int64_t m, double p);

// log P[X <= k], clamped semantics: k < 0 -> -inf, k >= m -> 0.
double binom_log_cdf(std::int64_t k, std::int64_t m, double p);

// log P[X > k] (exclusive upper tail), clamped: k < 0 -> 0, k >= m -> -inf.
double binom_log_sf(std::int64_t k, std::int64_t m, double p);

double gaussian_pdf(double x);

// Phi(x), erfc-based; absolute error <~1e-16 in the bulk, small relative error
// in the tails.
double gaussian_cdf(double x);

// log Phi(x), accurate in the deep lower tail.
double gaussian_log_cdf(double x);

// Inverse of gaussian_cdf on (0,1); rational approximation polished by one
// Halley step, inverse to ~1e-15.
double gaussian_quantile(double q);

}  // namespace fdp
