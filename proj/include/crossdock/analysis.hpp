/**
 * @file analysis.hpp
 * @brief Replication-level output analysis: specified-precision replication,
 *        paired comparisons with and without common random numbers, and the
 *        half-width-versus-replications table.
 *
 * Replication i always uses replication index i, and aggregation happens in
 * index order, so every result is independent of thread count.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "crossdock/errors.hpp"
#include "crossdock/model.hpp"
#include "crossdock/parallel.hpp"
#include "crossdock/rng.hpp"
#include "crossdock/stats.hpp"

namespace crossdock {

struct PrecisionResult {
    double target_half_width = 0.0;
    bool achieved = false;
    std::size_t n_used = 0;
    SummaryStats final;
    std::vector<std::size_t> steps;  // sample sizes checked, in order
};

struct PrecisionOptions {
    double confidence = 0.95;
    double target_half_width = 0.0;
    std::size_t n0 = 10;
    std::size_t n_max = 1000;
    unsigned threads = 1;
};

/// Grow the replication count until the half width meets the target or n_max
/// is reached. Each step projects n' = ceil(n * (h / target)^2).
inline PrecisionResult replicate_to_precision(const ModelConfig& config, std::uint64_t seed,
                                              const PrecisionOptions& opt) {
    if (opt.n0 < 2) throw UsageError("n0 must be >= 2");
    if (opt.n_max < opt.n0) throw UsageError("n_max must be >= n0");
    if (!(opt.target_half_width > 0.0)) throw UsageError("target half width must be > 0");
    if (opt.n_max > UINT32_MAX) throw UsageError("n_max too large");

    const CrossdockModel model(config);
    std::vector<double> costs;
    auto extend_to = [&](std::size_t n) {
        const auto first = static_cast<std::uint32_t>(costs.size());
        const auto batch = run_replications(model, seed, first,
                                            static_cast<std::uint32_t>(n - costs.size()), opt.threads);
        for (const auto& o : batch) costs.push_back(o.total_usage_cost);
    };

    PrecisionResult result;
    result.target_half_width = opt.target_half_width;
    std::size_t n = opt.n0;
    extend_to(n);
    for (;;) {
        result.steps.push_back(n);
        result.final = summarize(costs, opt.confidence);
        if (result.final.half_width <= opt.target_half_width) {
            result.achieved = true;
            break;
        }
        if (n >= opt.n_max) break;
        const double ratio = result.final.half_width / opt.target_half_width;
        const double projected = std::ceil(static_cast<double>(n) * ratio * ratio);
        std::size_t next = projected >= static_cast<double>(opt.n_max)
                               ? opt.n_max
                               : static_cast<std::size_t>(projected);
        next = std::max(next, n + 1);
        extend_to(next);
        n = next;
    }
    result.n_used = n;
    return result;
}

struct PairedResult {
    std::size_t n = 0;
    bool crn = true;
    double confidence = 0.95;
    double mean_A = 0.0;
    double mean_B = 0.0;
    double mean_diff = 0.0;
    double var_A = 0.0;
    double var_B = 0.0;
    double covariance = 0.0;
    double var_diff = 0.0;
    double half_width_diff = 0.0;
    std::vector<double> costs_A;
    std::vector<double> costs_B;
};

/// Salt that moves configuration B onto its own key space for independent sampling.
inline constexpr std::uint64_t kIndependentSalt = 0xB0B0B0B0ull;

/// Compare two configurations replication by replication. With `crn` both
/// use identical stream keys; without it B draws from a disjoint key space.
inline PairedResult paired_comparison(const ModelConfig& a, const ModelConfig& b, std::size_t n,
                                      bool crn, std::uint64_t seed, double confidence = 0.95,
                                      unsigned threads = 1) {
    if (n < 2) throw UsageError("paired comparison needs n >= 2");
    if (!differs_only_in_decisions(a, b))
        throw UsageError("configurations differ in fields other than resource counts");
    const CrossdockModel model_a(a);
    const CrossdockModel model_b(b);
    const std::uint64_t seed_b = crn ? seed : derive_seed(seed, kIndependentSalt);

    PairedResult r;
    r.n = n;
    r.crn = crn;
    r.confidence = confidence;
    r.costs_A = costs_of(run_replications(model_a, seed, 0, static_cast<std::uint32_t>(n), threads));
    r.costs_B = costs_of(run_replications(model_b, seed_b, 0, static_cast<std::uint32_t>(n), threads));

    std::vector<double> diffs(n);
    for (std::size_t i = 0; i < n; ++i) diffs[i] = r.costs_A[i] - r.costs_B[i];
    r.mean_A = sample_mean(r.costs_A);
    r.mean_B = sample_mean(r.costs_B);
    r.mean_diff = sample_mean(diffs);
    r.var_A = sample_covariance(r.costs_A, r.costs_A);
    r.var_B = sample_covariance(r.costs_B, r.costs_B);
    r.covariance = sample_covariance(r.costs_A, r.costs_B);
    r.var_diff = sample_covariance(diffs, diffs);
    r.half_width_diff = half_width(std::sqrt(r.var_diff), n, confidence);
    return r;
}

struct HalfwidthRow {
    std::size_t replications = 0;
    double halfwidth_default_stream = 0.0;
    double halfwidth_crn = 0.0;
    double difference = 0.0;  // default_stream - crn
};

struct HalfwidthTable {
    double confidence = 0.95;
    std::vector<HalfwidthRow> rows;
    /// First-level minus last-level half width, per model column.
    double first_minus_last_halfwidth_default_stream = 0.0;
    double first_minus_last_halfwidth_crn = 0.0;
    /// Sum of the per-level differences.
    double sum_of_level_differences = 0.0;
    double mean_default_stream = 0.0;
    double mean_crn = 0.0;
};

/// Fill the summary metrics from rows.
inline void finish_table(HalfwidthTable& t) {
    t.sum_of_level_differences = 0.0;
    for (const auto& r : t.rows) t.sum_of_level_differences += r.difference;
    t.first_minus_last_halfwidth_default_stream =
        t.rows.front().halfwidth_default_stream - t.rows.back().halfwidth_default_stream;
    t.first_minus_last_halfwidth_crn = t.rows.front().halfwidth_crn - t.rows.back().halfwidth_crn;
}

/// Half width of Total Usage Cost at each replication level for two model
/// variants. Level n uses replications 0..n-1, so levels are nested.
inline HalfwidthTable halfwidth_table(const ModelConfig& default_stream_config,
                                      const ModelConfig& dedicated_config,
                                      const std::vector<std::size_t>& levels,
                                      double confidence, std::uint64_t seed,
                                      unsigned threads = 1) {
    if (levels.empty()) throw UsageError("levels must not be empty");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 2) throw UsageError("every level must be >= 2");
        if (i > 0 && levels[i] <= levels[i - 1]) throw UsageError("levels must be strictly ascending");
    }
    if (levels.back() > UINT32_MAX) throw UsageError("level too large");
    const auto n_max = static_cast<std::uint32_t>(levels.back());
    const auto costs_default =
        costs_of(run_replications(CrossdockModel(default_stream_config), seed, 0, n_max, threads));
    const auto costs_crn =
        costs_of(run_replications(CrossdockModel(dedicated_config), seed, 0, n_max, threads));

    HalfwidthTable t;
    t.confidence = confidence;
    for (std::size_t n : levels) {
        HalfwidthRow row;
        row.replications = n;
        row.halfwidth_default_stream =
            summarize(std::span<const double>(costs_default).first(n), confidence).half_width;
        row.halfwidth_crn = summarize(std::span<const double>(costs_crn).first(n), confidence).half_width;
        row.difference = row.halfwidth_default_stream - row.halfwidth_crn;
        t.rows.push_back(row);
    }
    t.mean_default_stream = sample_mean(costs_default);
    t.mean_crn = sample_mean(costs_crn);
    finish_table(t);
    return t;
}

}  // namespace crossdock
