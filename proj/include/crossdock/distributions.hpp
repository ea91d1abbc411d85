#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "crossdock/errors.hpp"
#include "crossdock/rng.hpp"

namespace crossdock {

// Inverse-transform samplers only. Each sample consumes exactly one uniform,
// which keeps draws aligned across configurations that share a stream key.

enum class DistributionKind { exponential, triangular };

struct DistributionSpec {
    DistributionKind kind = DistributionKind::exponential;
    double mean = 1.0;  // exponential
    double min = 0.0;   // triangular
    double mode = 0.0;
    double max = 0.0;

    static DistributionSpec exponential(double mean) {
        DistributionSpec d;
        d.kind = DistributionKind::exponential;
        d.mean = mean;
        return d;
    }

    static DistributionSpec triangular(double min, double mode, double max) {
        DistributionSpec d;
        d.kind = DistributionKind::triangular;
        d.min = min;
        d.mode = mode;
        d.max = max;
        return d;
    }

    /// Field-level violations, prefixed with `name`. Empty when valid.
    std::vector<std::string> violations(const std::string& name) const {
        std::vector<std::string> out;
        if (kind == DistributionKind::exponential) {
            if (!(mean > 0.0) || !std::isfinite(mean)) out.push_back(name + ".mean must be > 0");
        } else {
            if (!std::isfinite(min) || !std::isfinite(mode) || !std::isfinite(max)) {
                out.push_back(name + " bounds must be finite");
            } else {
                if (!(min <= mode && mode <= max)) out.push_back(name + " requires min <= mode <= max");
                if (!(min < max)) out.push_back(name + " requires min < max");
            }
        }
        return out;
    }

    void validate(const std::string& name) const {
        if (auto v = violations(name); !v.empty()) throw ConfigError(std::move(v));
    }

    /// Mean of the distribution.
    double expected_value() const {
        return kind == DistributionKind::exponential ? mean : (min + mode + max) / 3.0;
    }

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

inline double exponential_inverse(double u, double mean) {
    if (!(mean > 0.0)) throw ConfigError("exponential mean must be > 0");
    return -mean * std::log1p(-u);
}

inline double triangular_inverse(double u, double min, double mode, double max) {
    if (!(min <= mode && mode <= max) || !(min < max))
        throw ConfigError("triangular requires min <= mode <= max and min < max");
    const double width = max - min;
    const double split = (mode - min) / width;
    double x = 0.0;
    if (u <= split) {
        x = min + std::sqrt(u * width * (mode - min));
    } else {
        x = max - std::sqrt((1.0 - u) * width * (max - mode));
    }
    // Rounding can push a hair past the support.
    return std::fmin(std::fmax(x, min), max);
}

inline double sample_exponential(RandomStream& stream, double mean) {
    if (!(mean > 0.0)) throw ConfigError("exponential mean must be > 0");
    return exponential_inverse(stream.next_uniform(), mean);
}

inline double sample_triangular(RandomStream& stream, double min, double mode, double max) {
    if (!(min <= mode && mode <= max) || !(min < max))
        throw ConfigError("triangular requires min <= mode <= max and min < max");
    return triangular_inverse(stream.next_uniform(), min, mode, max);
}

inline double inverse_cdf(const DistributionSpec& spec, double u) {
    return spec.kind == DistributionKind::exponential
               ? exponential_inverse(u, spec.mean)
               : triangular_inverse(u, spec.min, spec.mode, spec.max);
}

inline double sample(RandomStream& stream, const DistributionSpec& spec) {
    return inverse_cdf(spec, stream.next_uniform());
}

}  // namespace crossdock
