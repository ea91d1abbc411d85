/**
 * @file stats.hpp
 * @brief Student-t quantiles and replication summaries.
 *
 * The t quantile goes through the regularized incomplete beta function:
 * P(T > t) = I_x(df/2, 1/2) / 2 with x = df / (df + t^2). I_x is evaluated
 * with the modified Lentz continued fraction and inverted by safeguarded
 * Newton iteration on x.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>

#include "crossdock/errors.hpp"

namespace crossdock {

namespace detail {

// Continued fraction for I_x(a, b); converges quickly for x < (a+1)/(a+b+2).
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 100000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
inline double regularized_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("regularized_beta requires a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("regularized_beta requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = a * std::log(x) + b * std::log1p(-x) - detail::log_beta(a, b);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// x such that I_x(a, b) = y.
inline double inverse_regularized_beta(double a, double b, double y) {
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("inverse_regularized_beta requires y in [0, 1]");
    if (y == 0.0) return 0.0;
    if (y == 1.0) return 1.0;
    const double lb = detail::log_beta(a, b);
    double lo = 0.0;
    double hi = 1.0;
    double x = 0.5;
    for (int iter = 0; iter < 400; ++iter) {
        const double f = regularized_beta(a, b, x) - y;
        if (f == 0.0) return x;
        if (f < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double log_pdf = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lb;
        double next = x - f / std::exp(log_pdf);
        // Fall back to bisection when Newton leaves the bracket.
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 1e-17 + 1e-15 * x) return next;
        x = next;
        if (hi - lo <= std::numeric_limits<double>::min()) break;
    }
    return x;
}

/// Student-t CDF.
inline double t_cdf(double t, double df) {
    if (!(df > 0.0)) throw DomainError("t_cdf requires df > 0");
    const double tail = 0.5 * regularized_beta(0.5 * df, 0.5, df / (df + t * t));
    return t >= 0.0 ? 1.0 - tail : tail;
}

/// Inverse Student-t CDF with `df` degrees of freedom.
inline double t_quantile(double df, double p) {
    if (!(df >= 1.0)) throw DomainError("t_quantile requires df >= 1");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("t_quantile requires p in (0, 1)");
    if (p == 0.5) return 0.0;
    const double upper = p > 0.5 ? 1.0 - p : p;
    const double x = inverse_regularized_beta(0.5 * df, 0.5, 2.0 * upper);
    const double t = std::sqrt(df * (1.0 - x) / x);
    return p > 0.5 ? t : -t;
}

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double confidence = 0.95;
    double half_width = 0.0;
};

inline double sample_mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Sample covariance, n - 1 divisor.
inline double sample_covariance(std::span<const double> a, std::span<const double> b) {
    const double ma = sample_mean(a);
    const double mb = sample_mean(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size() - 1);
}

inline double half_width(double sd, std::size_t n, double confidence) {
    if (sd == 0.0) return 0.0;
    const double t = t_quantile(static_cast<double>(n - 1), 1.0 - (1.0 - confidence) / 2.0);
    return t * sd / std::sqrt(static_cast<double>(n));
}

inline SummaryStats summarize(std::span<const double> values, double confidence = 0.95) {
    if (values.size() < 2)
        throw InsufficientDataError("summarize needs at least 2 values, got " +
                                    std::to_string(values.size()));
    if (!(confidence > 0.0 && confidence < 1.0))
        throw DomainError("confidence must lie in (0, 1)");
    SummaryStats s;
    s.n = values.size();
    s.confidence = confidence;
    s.mean = sample_mean(values);
    s.sd = std::sqrt(sample_covariance(values, values));
    s.half_width = half_width(s.sd, s.n, confidence);
    return s;
}

}  // namespace crossdock
