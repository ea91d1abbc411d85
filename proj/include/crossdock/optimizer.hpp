/**
 * @file optimizer.hpp
 * @brief Budgeted minimization of expected Total Usage Cost over
 *        (total dispensers, total manual operatives).
 *
 * Search is best-improvement descent with tabu memory and random restarts.
 * Evaluated points are cached and never re-simulated; a cache hit costs no
 * budget. With common random numbers every candidate is simulated on the same
 * stream keys, so the objective is a deterministic function of the point.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "crossdock/analysis.hpp"
#include "crossdock/errors.hpp"
#include "crossdock/model.hpp"
#include "crossdock/parallel.hpp"
#include "crossdock/rng.hpp"
#include "crossdock/stats.hpp"

namespace crossdock {

struct DecisionPoint {
    std::int64_t dispensers = 1;
    std::int64_t operatives = 1;

    friend auto operator<=>(const DecisionPoint&, const DecisionPoint&) = default;
};

struct Bounds {
    std::int64_t dispenser_max = 6;
    std::int64_t operative_max = 4;

    bool contains(const DecisionPoint& p) const {
        return p.dispensers >= 1 && p.operatives >= 1 && p.dispensers <= dispenser_max &&
               p.operatives <= operative_max;
    }
    std::int64_t size() const { return dispenser_max * operative_max; }
};

struct OptimizationProblem {
    ModelConfig base_config;
    Bounds bounds;
    std::size_t reps_per_eval = 5;
    std::size_t budget = 100;
    bool crn = true;
    std::uint64_t seed = 12345;
    double confidence = 0.95;
    unsigned threads = 1;

    void validate() const {
        std::vector<std::string> v;
        if (budget < 1) v.push_back("budget must be >= 1");
        if (reps_per_eval < 2) v.push_back("reps_per_eval must be >= 2");
        if (reps_per_eval > UINT32_MAX) v.push_back("reps_per_eval too large");
        if (bounds.dispenser_max < 1) v.push_back("dispenser_max must be >= 1");
        if (bounds.operative_max < 1) v.push_back("operative_max must be >= 1");
        if (!v.empty()) throw ConfigError(std::move(v));
    }
};

/// Total dispensers go round-robin over points starting at A. Operatives are
/// dealt A-skilled, B-skilled, A-unskilled, B-unskilled, then repeat.
inline ModelConfig apply_decision(const ModelConfig& base, const DecisionPoint& p) {
    ModelConfig cfg = base;
    auto& a = cfg.at(Point::A);
    auto& b = cfg.at(Point::B);
    a.dispensers = (p.dispensers + 1) / 2;
    b.dispensers = p.dispensers / 2;
    a.skilled = b.skilled = a.unskilled = b.unskilled = 0;
    for (std::int64_t k = 0; k < p.operatives; ++k) {
        switch (k % 4) {
            case 0: ++a.skilled; break;
            case 1: ++b.skilled; break;
            case 2: ++a.unskilled; break;
            default: ++b.unskilled; break;
        }
    }
    return cfg;
}

/// The up-to-four unit moves in the order +d, -d, +o, -o, clipped to bounds.
inline std::vector<DecisionPoint> neighbors(const DecisionPoint& p, const Bounds& bounds) {
    std::vector<DecisionPoint> out;
    for (DecisionPoint q : {DecisionPoint{p.dispensers + 1, p.operatives},
                            DecisionPoint{p.dispensers - 1, p.operatives},
                            DecisionPoint{p.dispensers, p.operatives + 1},
                            DecisionPoint{p.dispensers, p.operatives - 1}}) {
        if (bounds.contains(q)) out.push_back(q);
    }
    return out;
}

struct Evaluation {
    std::size_t index = 0;  // 1-based order of first evaluation
    DecisionPoint point;
    double mean_cost = 0.0;
    double half_width = 0.0;
    double incumbent_cost = 0.0;
    bool is_new_best = false;
    bool servable = true;
};

struct OptimizationTrace {
    std::vector<Evaluation> evaluations;
    DecisionPoint best_point;
    double best_value = std::numeric_limits<double>::infinity();
    std::size_t best_found_at = 0;
    std::size_t restarts = 0;
};

/// Cached, budgeted objective. Points whose resource layout leaves an order
/// class without a server score +infinity without simulation.
class Evaluator {
public:
    explicit Evaluator(const OptimizationProblem& problem) : problem_(problem) { problem_.validate(); }

    /// Mean cost and half width. Throws DomainError for out-of-bounds points.
    /// Returns nullopt if the point is new and the budget is exhausted.
    std::optional<Evaluation> evaluate(const DecisionPoint& p) {
        if (!problem_.bounds.contains(p)) throw DomainError("decision point out of bounds");
        if (auto it = cache_.find(p); it != cache_.end()) return trace_.evaluations[it->second];
        if (trace_.evaluations.size() >= problem_.budget) return std::nullopt;

        Evaluation e;
        e.index = trace_.evaluations.size() + 1;
        e.point = p;
        const ModelConfig cfg = apply_decision(problem_.base_config, p);
        if (!cfg.servability_violations().empty()) {
            e.servable = false;
            e.mean_cost = std::numeric_limits<double>::infinity();
            e.half_width = 0.0;
        } else {
            const auto costs = costs_of(run_replications(
                CrossdockModel(cfg), seed_for(p), 0,
                static_cast<std::uint32_t>(problem_.reps_per_eval), problem_.threads));
            const SummaryStats s = summarize(costs, problem_.confidence);
            e.mean_cost = s.mean;
            e.half_width = s.half_width;
        }
        if (trace_.evaluations.empty() || e.mean_cost < trace_.best_value) {
            e.is_new_best = true;
            trace_.best_value = e.mean_cost;
            trace_.best_point = p;
            trace_.best_found_at = e.index;
        }
        e.incumbent_cost = trace_.best_value;
        cache_.emplace(p, trace_.evaluations.size());
        trace_.evaluations.push_back(e);
        return e;
    }

    bool evaluated(const DecisionPoint& p) const { return cache_.count(p) != 0; }
    bool budget_left() const { return trace_.evaluations.size() < problem_.budget; }
    std::size_t used() const { return trace_.evaluations.size(); }

    /// Master seed for a point: shared under CRN, point-specific otherwise.
    std::uint64_t seed_for(const DecisionPoint& p) const {
        if (problem_.crn) return problem_.seed;
        const auto packed = (static_cast<std::uint64_t>(p.dispensers) << 32) ^
                            static_cast<std::uint64_t>(p.operatives);
        return derive_seed(problem_.seed, packed);
    }

    OptimizationTrace& trace() { return trace_; }

private:
    OptimizationProblem problem_;
    std::map<DecisionPoint, std::size_t> cache_;
    OptimizationTrace trace_;
};

inline std::vector<DecisionPoint> feasible_points(const Bounds& bounds) {
    std::vector<DecisionPoint> out;
    for (std::int64_t d = 1; d <= bounds.dispenser_max; ++d)
        for (std::int64_t o = 1; o <= bounds.operative_max; ++o) out.push_back({d, o});
    return out;
}

inline constexpr std::uint64_t kRestartSalt = 0x7AB00ull;

inline OptimizationTrace optimize(const OptimizationProblem& problem) {
    Evaluator eval(problem);
    const auto space = feasible_points(problem.bounds);
    RandomStream restart_stream(derive_seed(problem.seed, kRestartSalt), SourceId::shared, 0);
    OptimizationTrace trace_out;

    auto random_unvisited = [&]() -> std::optional<DecisionPoint> {
        std::vector<DecisionPoint> open;
        for (const auto& p : space)
            if (!eval.evaluated(p)) open.push_back(p);
        if (open.empty()) return std::nullopt;
        const auto k = static_cast<std::size_t>(restart_stream.next_uniform() *
                                                static_cast<double>(open.size()));
        return open[std::min(k, open.size() - 1)];
    };

    std::size_t restarts = 0;
    auto start = random_unvisited();
    std::optional<Evaluation> current = start ? eval.evaluate(*start) : std::nullopt;
    while (current && eval.budget_left()) {
        std::optional<Evaluation> best_move;
        for (const auto& q : neighbors(current->point, problem.bounds)) {
            if (eval.evaluated(q)) continue;  // tabu
            auto e = eval.evaluate(q);
            if (!e) break;
            if (e->mean_cost < current->mean_cost &&
                (!best_move || e->mean_cost < best_move->mean_cost))
                best_move = e;
        }
        if (best_move) {
            current = best_move;
            continue;
        }
        if (!eval.budget_left()) break;
        auto restart = random_unvisited();
        if (!restart) break;
        ++restarts;
        current = eval.evaluate(*restart);
    }
    trace_out = std::move(eval.trace());
    trace_out.restarts = restarts;
    return trace_out;
}

struct BruteForceResult {
    DecisionPoint point;
    double mean_cost = std::numeric_limits<double>::infinity();
    std::size_t evaluated = 0;
};

inline constexpr std::int64_t kBruteForceLimit = 10000;

/// Evaluate every point under common random numbers and return the argmin
/// (ties resolved lexicographically by (dispensers, operatives)).
inline BruteForceResult brute_force_optimum(OptimizationProblem problem) {
    if (problem.bounds.size() > kBruteForceLimit)
        throw UsageError("feasible space exceeds brute-force limit of " +
                         std::to_string(kBruteForceLimit));
    problem.crn = true;
    const auto space = feasible_points(problem.bounds);
    problem.budget = space.size();
    Evaluator eval(problem);
    BruteForceResult best;
    for (const auto& p : space) {
        const auto e = eval.evaluate(p);
        ++best.evaluated;
        if (best.evaluated == 1 || e->mean_cost < best.mean_cost) {
            best.point = p;
            best.mean_cost = e->mean_cost;
        }
    }
    return best;
}

}  // namespace crossdock
