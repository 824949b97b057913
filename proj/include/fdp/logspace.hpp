#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace fdp {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Log of a probability mass. value <= 0, -inf encodes an exact zero.
struct LogProb {
    double value = kNegInf;

    LogProb() = default;
    explicit LogProb(double log_value) : value(log_value) {
        if (value > 1e-12) throw std::invalid_argument("LogProb: log mass must be <= 0");
        if (value > 0.0) value = 0.0;
    }
    static LogProb from_linear(double p) {
        if (p < 0.0 || p > 1.0 + 1e-12) throw std::invalid_argument("LogProb: mass outside [0,1]");
        return LogProb(p <= 0.0 ? kNegInf : std::log(std::min(p, 1.0)));
    }
    double linear() const { return std::exp(value); }
    bool is_zero() const { return value == kNegInf; }
};

// Neumaier-compensated running sum.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// log(exp(a) + exp(b))
inline double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// log(1 - exp(x)) for x <= 0
inline double log1m_exp(double x) {
    if (x > 0.0) throw std::domain_error("log1m_exp: argument must be <= 0");
    if (x == 0.0) return kNegInf;
    // switch point ln(1/2) keeps both branches well conditioned
    return x > -0.6931471805599453 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

// log(exp(a) - exp(b)), requires a >= b
inline double log_diff_exp(double a, double b) {
    if (b == kNegInf) return a;
    if (b > a) throw std::domain_error("log_diff_exp: needs a >= b");
    if (a == b) return kNegInf;
    return a + log1m_exp(b - a);
}

// Compensated log-sum-exp; extended-precision accumulation keeps the result
// within a few ulp even when hi and log(sum) nearly cancel.
inline double log_sum_exp(std::span<const double> xs) {
    double hi = kNegInf;
    for (double x : xs) hi = std::max(hi, x);
    if (hi == kNegInf) return kNegInf;
    if (std::isinf(hi)) return hi;
    long double acc = 0.0L;
    for (double x : xs) acc += expl(static_cast<long double>(x) - hi);
    return static_cast<double>(static_cast<long double>(hi) + logl(acc));
}

inline double log_sum_exp(const std::vector<double>& xs) {
    return log_sum_exp(std::span<const double>(xs.data(), xs.size()));
}

}  // namespace fdp
