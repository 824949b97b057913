#include "fdp/special.hpp"

#include <cmath>
#include <stdexcept>

#include "fdp/logspace.hpp"

namespace fdp {

namespace {

void check_binom_args(std::int64_t m, double p) {
    if (m < 0) throw std::invalid_argument("binom: trial count m must be >= 0");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binom: p must lie in [0,1]");
}

double log_binom_coeff(std::int64_t m, std::int64_t k) {
    const std::int64_t s = std::min(k, m - k);
    if (s <= 512) {
        // exact compensated sum of log((m-s+j)/j); avoids the cancellation of
        // three large lgamma values
        NeumaierSum acc;
        for (std::int64_t j = 1; j <= s; ++j)
            acc.add(std::log(static_cast<double>(m - s + j)) - std::log(static_cast<double>(j)));
        return acc.value();
    }
    return std::lgamma(static_cast<double>(m) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(m - k) + 1.0);
}

// Sum of pmf(j) for j = k down to 0, relative to pmf(k). Converges fast when k
// is below the mode; all terms positive so the linear-space accumulation keeps
// full relative accuracy.
double descending_tail_factor(std::int64_t k, std::int64_t m, double p) {
    const double odds = (1.0 - p) / p;  // pmf(j-1)/pmf(j) = j/(m-j+1) * odds
    double acc = 1.0, term = 1.0;
    for (std::int64_t j = k; j >= 1; --j) {
        term *= static_cast<double>(j) / static_cast<double>(m - j + 1) * odds;
        acc += term;
        if (term < acc * 1e-19) break;
    }
    return acc;
}

// Sum of pmf(j) for j = k up to m, relative to pmf(k). Converges when k is
// above the mode.
double ascending_tail_factor(std::int64_t k, std::int64_t m, double p) {
    const double odds = p / (1.0 - p);  // pmf(j+1)/pmf(j) = (m-j)/(j+1) * odds
    double acc = 1.0, term = 1.0;
    for (std::int64_t j = k; j < m; ++j) {
        term *= static_cast<double>(m - j) / static_cast<double>(j + 1) * odds;
        acc += term;
        if (term < acc * 1e-19) break;
    }
    return acc;
}

}  // namespace

double binom_log_pmf(std::int64_t k, std::int64_t m, double p) {
    check_binom_args(m, p);
    if (k < 0 || k > m) return kNegInf;
    if (p == 0.0) return k == 0 ? 0.0 : kNegInf;
    if (p == 1.0) return k == m ? 0.0 : kNegInf;
    if (p == 0.5) return log_binom_coeff(m, k) - static_cast<double>(m) * 0.6931471805599453;
    return log_binom_coeff(m, k) + static_cast<double>(k) * std::log(p) +
           static_cast<double>(m - k) * std::log1p(-p);
}

double binom_log_cdf(std::int64_t k, std::int64_t m, double p) {
    check_binom_args(m, p);
    if (k < 0) return kNegInf;
    if (k >= m) return 0.0;
    if (p == 0.0) return 0.0;           // k >= 0 covers all mass
    if (p == 1.0) return kNegInf;       // k < m misses the point mass at m
    // Sum the smaller tail directly; the hot p = 1/2 path exploits the
    // symmetry P[X <= k] = 1 - P[X <= m-k-1].
    const double mode = static_cast<double>(m + 1) * p;
    if (static_cast<double>(k) < mode) {
        return binom_log_pmf(k, m, p) + std::log(descending_tail_factor(k, m, p));
    }
    const double log_sf = binom_log_pmf(k + 1, m, p) + std::log(ascending_tail_factor(k + 1, m, p));
    return log1m_exp(std::min(log_sf, 0.0));
}

double binom_log_sf(std::int64_t k, std::int64_t m, double p) {
    check_binom_args(m, p);
    if (k < 0) return 0.0;
    if (k >= m) return kNegInf;
    if (p == 0.0) return kNegInf;
    if (p == 1.0) return 0.0;
    const double mode = static_cast<double>(m + 1) * p;
    if (static_cast<double>(k + 1) > mode) {
        return binom_log_pmf(k + 1, m, p) + std::log(ascending_tail_factor(k + 1, m, p));
    }
    const double log_cdf = binom_log_pmf(k, m, p) + std::log(descending_tail_factor(k, m, p));
    return log1m_exp(std::min(log_cdf, 0.0));
}

double gaussian_pdf(double x) {
    return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

double gaussian_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double gaussian_log_cdf(double x) {
    if (x > -5.0) return std::log(gaussian_cdf(x));
    // erfc with log scaling avoids underflow until ~ -1e154
    const double z = -x * 0.7071067811865475244;
    if (z < 26.5) return std::log(0.5 * std::erfc(z));
    // asymptotic erfc(z) ~ exp(-z^2)/(z sqrt(pi)) (1 - 1/(2z^2) + 3/(4z^4))
    const double zz = z * z;
    return -zz - std::log(z) - 0.5723649429247001 + std::log1p(-0.5 / zz + 0.75 / (zz * zz)) -
           0.6931471805599453;
}

double gaussian_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("gaussian_quantile: q must be in (0,1)");

    // Acklam's rational approximation, then one Halley step against erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01, -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (q < plow) {
        const double u = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    } else if (q <= 1.0 - plow) {
        const double u = q - 0.5, r = u * u;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double u = std::sqrt(-2.0 * std::log1p(-q));
        x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    // Halley refinement: e = Phi(x) - q
    const double e = gaussian_cdf(x) - q;
    const double u = e / gaussian_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

}  // namespace fdp
