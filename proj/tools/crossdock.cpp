// Command-line driver for the crossdock simulation toolkit.
//
//   crossdock simulate  CONFIG [--seed N] [--reps N] [--confidence C] [--out DIR]
//   crossdock table5    CONFIG [--levels 100,500,...] [--seed N] [--out DIR]
//   crossdock compare   CONFIG_A CONFIG_B [--reps N] [--crn|--no-crn] [--both] [--out DIR]
//   crossdock optimize  CONFIG [--budget N] [--reps N] [--crn|--no-crn] [--validate-reps N]
//   crossdock precision CONFIG --target H [--n0 N] [--n-max N] [--out DIR]
//
// Exit codes: 0 success, 2 usage or configuration error, 3 runtime failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crossdock/analysis.hpp"
#include "crossdock/config_io.hpp"
#include "crossdock/des.hpp"
#include "crossdock/optimizer.hpp"
#include "crossdock/parallel.hpp"
#include "crossdock/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
    std::uint64_t seed = 12345;
    double confidence = 0.95;
    std::string out = ".";
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& c) {
    cmd->add_option("--seed", c.seed, "Master seed for all randomness")->capture_default_str();
    cmd->add_option("--confidence", c.confidence, "Confidence level for half widths")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Replication-level worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_json(const fs::path& path, const json& doc) {
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
}

std::string rel(const CommonOptions& c, const std::string& name) {
    return (fs::path(c.out) / name).string();
}

// simulate -----------------------------------------------------------------

struct SimulateArgs {
    std::string config;
    std::size_t reps = 10;
    std::string event_log;
};

int run_simulate(const SimulateArgs& a, const CommonOptions& c) {
    if (a.reps < 2) throw crossdock::UsageError("--reps must be >= 2");
    const auto cfg = crossdock::load_config(a.config);
    const crossdock::CrossdockModel model(cfg);
    const auto reps = crossdock::run_replications(model, c.seed, 0,
                                                  static_cast<std::uint32_t>(a.reps), c.threads);
    const auto stats = crossdock::summarize(crossdock::costs_of(reps), c.confidence);

    crossdock::RunManifest m;
    m.command = "simulate";
    m.seed = c.seed;
    m.configuration = {{"model", crossdock::config_to_json(cfg)},
                       {"reps", a.reps},
                       {"confidence", c.confidence}};
    m.outputs = {rel(c, "summary.json"), rel(c, "replications.csv")};
    if (!a.event_log.empty()) m.outputs.push_back(a.event_log);

    write_json(m.outputs[0], {{"manifest", m.to_json()}, {"summary", crossdock::to_json(stats)}});
    {
        auto out = open_output(m.outputs[1]);
        crossdock::write_manifest_comment(out, m);
        crossdock::write_replications_csv(out, reps);
    }
    if (!a.event_log.empty()) {
        auto out = open_output(a.event_log);
        crossdock::write_manifest_comment(out, m);
        for (std::uint32_t i = 0; i < a.reps; ++i) {
            crossdock::des::EventLog log(i);
            model.run(c.seed, i, &log);
            crossdock::des::write_log_csv(out, log.records(), i == 0);
        }
    }
    std::cout << "mean " << crossdock::format_double(stats.mean) << " half_width "
              << crossdock::format_double(stats.half_width) << " (n=" << stats.n << ")\n";
    return 0;
}

// table5 -------------------------------------------------------------------

struct Table5Args {
    std::string config;
    std::vector<std::size_t> levels{100, 500, 1000, 2500, 5000};
};

int run_table5(const Table5Args& a, const CommonOptions& c) {
    const auto cfg = crossdock::load_config(a.config);
    auto default_cfg = cfg;
    default_cfg.crn_mode = crossdock::CrnMode::default_stream;
    auto crn_cfg = cfg;
    crn_cfg.crn_mode = crossdock::CrnMode::dedicated_streams;
    const auto table =
        crossdock::halfwidth_table(default_cfg, crn_cfg, a.levels, c.confidence, c.seed, c.threads);

    crossdock::RunManifest m;
    m.command = "table5";
    m.seed = c.seed;
    m.configuration = {{"model", crossdock::config_to_json(cfg)},
                       {"levels", a.levels},
                       {"confidence", c.confidence}};
    m.outputs = {rel(c, "table5.csv"), rel(c, "table5.json")};
    {
        auto out = open_output(m.outputs[0]);
        crossdock::write_manifest_comment(out, m);
        crossdock::write_table_csv(out, table);
    }
    write_json(m.outputs[1], {{"manifest", m.to_json()}, {"table", crossdock::to_json(table)}});
    crossdock::write_table_csv(std::cout, table);
    return 0;
}

// compare ------------------------------------------------------------------

struct CompareArgs {
    std::string config_a;
    std::string config_b;
    std::size_t reps = 200;
    bool crn = true;
    bool both = false;
};

int run_compare(const CompareArgs& a, const CommonOptions& c) {
    if (a.reps < 2) throw crossdock::UsageError("--reps must be >= 2");
    const auto cfg_a = crossdock::load_config(a.config_a);
    const auto cfg_b = crossdock::load_config(a.config_b);
    if (!crossdock::differs_only_in_decisions(cfg_a, cfg_b))
        throw crossdock::UsageError("configurations differ in fields other than resource counts");

    const auto primary =
        crossdock::paired_comparison(cfg_a, cfg_b, a.reps, a.crn, c.seed, c.confidence, c.threads);

    crossdock::RunManifest m;
    m.command = "compare";
    m.seed = c.seed;
    m.configuration = {{"model_A", crossdock::config_to_json(cfg_a)},
                       {"model_B", crossdock::config_to_json(cfg_b)},
                       {"reps", a.reps},
                       {"crn", a.crn},
                       {"both", a.both},
                       {"confidence", c.confidence}};
    m.outputs = {rel(c, "compare.json")};

    json doc = {{"manifest", m.to_json()}, {"result", crossdock::to_json(primary)}};
    if (a.both) {
        const auto other = crossdock::paired_comparison(cfg_a, cfg_b, a.reps, !a.crn, c.seed,
                                                        c.confidence, c.threads);
        const auto& with_crn = a.crn ? primary : other;
        const auto& independent = a.crn ? other : primary;
        doc["alternate"] = crossdock::to_json(other);
        doc["var_diff_crn"] = with_crn.var_diff;
        doc["var_diff_independent"] = independent.var_diff;
        doc["var_diff_ratio"] = independent.var_diff > 0.0
                                    ? json(with_crn.var_diff / independent.var_diff)
                                    : json(nullptr);
    }
    write_json(m.outputs[0], doc);
    std::cout << "mean_diff " << crossdock::format_double(primary.mean_diff) << " var_diff "
              << crossdock::format_double(primary.var_diff) << '\n';
    return 0;
}

// optimize -----------------------------------------------------------------

struct OptimizeArgs {
    std::string config;
    std::size_t budget = 100;
    std::size_t reps = 5;
    bool crn = true;
    std::size_t validate_reps = 0;
    std::int64_t dispenser_max = 6;
    std::int64_t operative_max = 4;
};

int run_optimize(const OptimizeArgs& a, const CommonOptions& c) {
    const auto cfg = crossdock::load_config(a.config);
    crossdock::OptimizationProblem problem;
    problem.base_config = cfg;
    problem.bounds = {a.dispenser_max, a.operative_max};
    problem.reps_per_eval = a.reps;
    problem.budget = a.budget;
    problem.crn = a.crn;
    problem.seed = c.seed;
    problem.confidence = c.confidence;
    problem.threads = c.threads;
    problem.validate();
    if (a.validate_reps == 1) throw crossdock::UsageError("--validate-reps must be 0 or >= 2");

    const auto trace = crossdock::optimize(problem);

    crossdock::RunManifest m;
    m.command = "optimize";
    m.seed = c.seed;
    m.configuration = {{"model", crossdock::config_to_json(cfg)},
                       {"budget", a.budget},
                       {"reps", a.reps},
                       {"crn", a.crn},
                       {"validate_reps", a.validate_reps},
                       {"dispenser_max", a.dispenser_max},
                       {"operative_max", a.operative_max},
                       {"confidence", c.confidence}};
    m.outputs = {rel(c, "trace.csv"), rel(c, "optimize_summary.json")};
    {
        auto out = open_output(m.outputs[0]);
        crossdock::write_manifest_comment(out, m);
        crossdock::write_trace_csv(out, trace);
    }
    json summary = crossdock::trace_summary_json(trace, problem);
    if (a.validate_reps >= 2 && std::isfinite(trace.best_value)) {
        const auto best_cfg = crossdock::apply_decision(cfg, trace.best_point);
        const auto reps = crossdock::run_replications(crossdock::CrossdockModel(best_cfg), c.seed, 0,
                                                      static_cast<std::uint32_t>(a.validate_reps),
                                                      c.threads);
        const auto s = crossdock::summarize(crossdock::costs_of(reps), c.confidence);
        summary["validation"] = {{"reps", a.validate_reps},
                                 {"mean", s.mean},
                                 {"half_width", s.half_width}};
    }
    write_json(m.outputs[1], {{"manifest", m.to_json()}, {"summary", summary}});
    std::cout << "best (" << trace.best_point.dispensers << ", " << trace.best_point.operatives
              << ") cost " << crossdock::format_double(trace.best_value) << " found at evaluation "
              << trace.best_found_at << " of " << trace.evaluations.size() << '\n';
    return 0;
}

// precision ----------------------------------------------------------------

struct PrecisionArgs {
    std::string config;
    double target = 0.0;
    std::size_t n0 = 10;
    std::size_t n_max = 1000;
};

int run_precision(const PrecisionArgs& a, const CommonOptions& c) {
    if (!(a.target > 0.0)) throw crossdock::UsageError("--target must be > 0");
    if (a.n0 < 2) throw crossdock::UsageError("--n0 must be >= 2");
    if (a.n_max < a.n0) throw crossdock::UsageError("--n-max must be >= --n0");
    const auto cfg = crossdock::load_config(a.config);
    crossdock::PrecisionOptions opt;
    opt.confidence = c.confidence;
    opt.target_half_width = a.target;
    opt.n0 = a.n0;
    opt.n_max = a.n_max;
    opt.threads = c.threads;
    const auto r = crossdock::replicate_to_precision(cfg, c.seed, opt);

    crossdock::RunManifest m;
    m.command = "precision";
    m.seed = c.seed;
    m.configuration = {{"model", crossdock::config_to_json(cfg)},
                       {"target", a.target},
                       {"n0", a.n0},
                       {"n_max", a.n_max},
                       {"confidence", c.confidence}};
    m.outputs = {rel(c, "precision.json")};
    write_json(m.outputs[0], {{"manifest", m.to_json()}, {"result", crossdock::to_json(r)}});
    std::cout << (r.achieved ? "achieved" : "not achieved") << " with n=" << r.n_used
              << " half_width " << crossdock::format_double(r.final.half_width) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crossdock order-picking simulation and simulation optimization"};
    app.require_subcommand(1);

    CommonOptions common;

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Run replications and summarize Total Usage Cost");
    sim_cmd->add_option("config", sim.config, "Model configuration JSON")->required();
    sim_cmd->add_option("--reps", sim.reps, "Number of replications")->capture_default_str();
    sim_cmd->add_option("--event-log", sim.event_log, "Also write the per-event log CSV");
    add_common(sim_cmd, common);

    Table5Args t5;
    auto* t5_cmd = app.add_subcommand("table5", "Half width versus replications, default vs dedicated streams");
    t5_cmd->add_option("config", t5.config, "Model configuration JSON")->required();
    t5_cmd->add_option("--levels", t5.levels, "Replication levels, ascending")
        ->delimiter(',')
        ->capture_default_str();
    add_common(t5_cmd, common);

    CompareArgs cmp;
    auto* cmp_cmd = app.add_subcommand("compare", "Paired comparison of two configurations");
    cmp_cmd->add_option("config_a", cmp.config_a, "First configuration")->required();
    cmp_cmd->add_option("config_b", cmp.config_b, "Second configuration")->required();
    cmp_cmd->add_option("--reps", cmp.reps, "Replications per configuration")->capture_default_str();
    cmp_cmd->add_flag("--crn,!--no-crn", cmp.crn, "Use common random numbers (default on)");
    cmp_cmd->add_flag("--both", cmp.both, "Also run the other sampling mode and report the ratio");
    add_common(cmp_cmd, common);

    OptimizeArgs opt;
    auto* opt_cmd = app.add_subcommand("optimize", "Minimize Total Usage Cost over resource counts");
    opt_cmd->add_option("config", opt.config, "Base model configuration")->required();
    opt_cmd->add_option("--budget", opt.budget, "Maximum objective evaluations")->capture_default_str();
    opt_cmd->add_option("--reps", opt.reps, "Replications per evaluation")->capture_default_str();
    opt_cmd->add_flag("--crn,!--no-crn", opt.crn, "Use common random numbers (default on)");
    opt_cmd->add_option("--validate-reps", opt.validate_reps,
                        "Re-evaluate the best point with this many replications")
        ->capture_default_str();
    opt_cmd->add_option("--dispenser-max", opt.dispenser_max, "Upper bound on total dispensers")
        ->capture_default_str();
    opt_cmd->add_option("--operative-max", opt.operative_max, "Upper bound on total operatives")
        ->capture_default_str();
    add_common(opt_cmd, common);

    PrecisionArgs prec;
    auto* prec_cmd = app.add_subcommand("precision", "Replicate until a target half width is met");
    prec_cmd->add_option("config", prec.config, "Model configuration JSON")->required();
    prec_cmd->add_option("--target", prec.target, "Target half width")->required();
    prec_cmd->add_option("--n0", prec.n0, "Initial replications")->capture_default_str();
    prec_cmd->add_option("--n-max", prec.n_max, "Replication cap")->capture_default_str();
    add_common(prec_cmd, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*sim_cmd) return run_simulate(sim, common);
        if (*t5_cmd) return run_table5(t5, common);
        if (*cmp_cmd) return run_compare(cmp, common);
        if (*opt_cmd) return run_optimize(opt, common);
        if (*prec_cmd) return run_precision(prec, common);
    } catch (const crossdock::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const crossdock::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
