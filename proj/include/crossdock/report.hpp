#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crossdock/analysis.hpp"
#include "crossdock/config_io.hpp"
#include "crossdock/format.hpp"
#include "crossdock/model.hpp"
#include "crossdock/optimizer.hpp"
#include "crossdock/stats.hpp"

namespace crossdock {

inline constexpr const char* kVersion = "0.1.0";

/// Everything needed to re-run a command. Embedded in every report.
struct RunManifest {
    std::string command;
    nlohmann::json configuration;  // resolved config(s) plus options
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const {
        return {{"command", command},
                {"version", kVersion},
                {"seed", seed},
                {"configuration", configuration},
                {"outputs", outputs}};
    }
};

/// One comment line carrying the manifest, for the top of CSV files.
inline void write_manifest_comment(std::ostream& out, const RunManifest& m) {
    out << "# manifest: " << m.to_json().dump() << '\n';
}

inline nlohmann::json to_json(const SummaryStats& s) {
    return {{"n", s.n},
            {"mean", s.mean},
            {"sd", s.sd},
            {"confidence", s.confidence},
            {"half_width", s.half_width}};
}

inline nlohmann::json to_json(const PrecisionResult& r) {
    return {{"target_half_width", r.target_half_width},
            {"achieved", r.achieved},
            {"n_used", r.n_used},
            {"steps", r.steps},
            {"final", to_json(r.final)}};
}

inline nlohmann::json to_json(const PairedResult& r) {
    return {{"n", r.n},
            {"crn", r.crn},
            {"confidence", r.confidence},
            {"mean_A", r.mean_A},
            {"mean_B", r.mean_B},
            {"mean_diff", r.mean_diff},
            {"var_A", r.var_A},
            {"var_B", r.var_B},
            {"covariance", r.covariance},
            {"var_diff", r.var_diff},
            {"half_width_diff", r.half_width_diff}};
}

inline nlohmann::json to_json(const HalfwidthTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        rows.push_back({{"replications", r.replications},
                        {"halfwidth_default_stream", r.halfwidth_default_stream},
                        {"halfwidth_crn", r.halfwidth_crn},
                        {"difference", r.difference}});
    }
    return {{"confidence", t.confidence},
            {"rows", rows},
            {"first_minus_last_halfwidth",
             {{"default_stream", t.first_minus_last_halfwidth_default_stream},
              {"crn", t.first_minus_last_halfwidth_crn}}},
            {"sum_of_level_differences", t.sum_of_level_differences}};
}

inline void write_table_csv(std::ostream& out, const HalfwidthTable& t) {
    out << "replications,halfwidth_default_stream,halfwidth_crn,difference\n";
    for (const auto& r : t.rows) {
        out << r.replications << ',' << format_double(r.halfwidth_default_stream) << ','
            << format_double(r.halfwidth_crn) << ',' << format_double(r.difference) << '\n';
    }
    out << "\nmetric,default_stream,crn\n";
    out << "first_minus_last_halfwidth," << format_double(t.first_minus_last_halfwidth_default_stream)
        << ',' << format_double(t.first_minus_last_halfwidth_crn) << '\n';
    out << "sum_of_level_differences," << format_double(t.sum_of_level_differences) << ",\n";
}

inline void write_replications_csv(std::ostream& out, const std::vector<ReplicationOutput>& reps) {
    out << "replication,total_usage_cost,arrivals,completions,in_system_at_end";
    if (!reps.empty())
        for (const auto& p : reps.front().pools)
            out << ',' << p.name << ".busy_time," << p.name << ".idle_time," << p.name << ".grants";
    out << '\n';
    for (const auto& r : reps) {
        out << r.replication << ',' << format_double(r.total_usage_cost) << ',' << r.arrivals << ','
            << r.completions << ',' << r.in_system_at_end;
        for (const auto& p : r.pools)
            out << ',' << format_double(p.stats.busy_time) << ',' << format_double(p.stats.idle_time)
                << ',' << p.stats.grants;
        out << '\n';
    }
}

inline void write_trace_csv(std::ostream& out, const OptimizationTrace& trace) {
    out << "eval_index,dispensers,operatives,mean_cost,half_width,incumbent_cost,is_new_best\n";
    for (const auto& e : trace.evaluations) {
        out << e.index << ',' << e.point.dispensers << ',' << e.point.operatives << ','
            << format_double(e.mean_cost) << ',' << format_double(e.half_width) << ','
            << format_double(e.incumbent_cost) << ',' << (e.is_new_best ? 1 : 0) << '\n';
    }
}

inline nlohmann::json point_json(const DecisionPoint& p) {
    return {{"dispensers", p.dispensers}, {"operatives", p.operatives}};
}

/// Non-finite costs (unservable layouts) serialize as null.
inline nlohmann::json cost_json(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline nlohmann::json trace_summary_json(const OptimizationTrace& trace,
                                         const OptimizationProblem& problem) {
    return {{"best_point", point_json(trace.best_point)},
            {"best_value", cost_json(trace.best_value)},
            {"best_found_at", trace.best_found_at},
            {"evaluations_used", trace.evaluations.size()},
            {"restarts", trace.restarts},
            {"crn_flag", problem.crn},
            {"reps_per_eval", problem.reps_per_eval},
            {"budget", problem.budget},
            {"bounds",
             {{"dispenser_max", problem.bounds.dispenser_max},
              {"operative_max", problem.bounds.operative_max}}},
            {"seed", problem.seed}};
}

}  // namespace crossdock
