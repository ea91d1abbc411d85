/**
 * @file model.hpp
 * @brief Crossdock order-picking model and its Total Usage Cost output.
 *
 * Orders arrive with exponential interarrival times and are routed to one of
 * two picking points (A, B) and one of two fulfillment modes. Manual orders
 * are served by skilled operatives when one is idle, otherwise by unskilled
 * operatives, otherwise they wait in a FIFO queue shared by both classes at
 * that point. Automated orders are served by the point's dispensers. Service
 * times are triangular; unskilled operatives scale the skilled time by a
 * constant factor.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "crossdock/des.hpp"
#include "crossdock/distributions.hpp"
#include "crossdock/errors.hpp"
#include "crossdock/rng.hpp"

namespace crossdock {

enum class CrnMode { default_stream, dedicated_streams };

enum class ServerClass { skilled = 0, unskilled = 1, dispenser = 2 };

enum class PickMode { manual, automated };

enum class Point { A = 0, B = 1 };

constexpr std::string_view to_string(CrnMode m) {
    return m == CrnMode::default_stream ? "default_stream" : "dedicated_streams";
}

constexpr std::string_view to_string(ServerClass c) {
    switch (c) {
        case ServerClass::skilled: return "skilled";
        case ServerClass::unskilled: return "unskilled";
        case ServerClass::dispenser: return "dispenser";
    }
    return "unknown";
}

struct ClassRates {
    double busy_rate = 0.0;  // currency per busy unit-hour
    double idle_rate = 0.0;  // currency per idle unit-hour
    double per_use = 0.0;    // currency per grant

    friend bool operator==(const ClassRates&, const ClassRates&) = default;
};

struct CostRates {
    ClassRates skilled;
    ClassRates unskilled;
    ClassRates dispenser;

    const ClassRates& of(ServerClass c) const {
        switch (c) {
            case ServerClass::skilled: return skilled;
            case ServerClass::unskilled: return unskilled;
            case ServerClass::dispenser: break;
        }
        return dispenser;
    }

    friend bool operator==(const CostRates&, const CostRates&) = default;
};

/// Resource counts at one picking point.
struct PointResources {
    std::int64_t skilled = 0;
    std::int64_t unskilled = 0;
    std::int64_t dispensers = 0;

    friend bool operator==(const PointResources&, const PointResources&) = default;
};

struct ModelConfig {
    DistributionSpec arrival = DistributionSpec::exponential(5.0);
    DistributionSpec manual_service = DistributionSpec::triangular(3.0, 7.0, 14.0);
    DistributionSpec auto_service = DistributionSpec::triangular(1.0, 2.0, 4.0);
    double unskilled_factor = 1.3;
    double p_auto = 0.5;
    double p_point_A = 0.5;
    /// Indexed by Point. Files carry one per-point count per class; the
    /// optimizer's decision mapping may make the two points differ.
    std::array<PointResources, 2> points{PointResources{2, 2, 1}, PointResources{2, 2, 1}};
    CostRates cost_rates{{20.0, 12.0, 0.0}, {12.0, 8.0, 0.0}, {30.0, 10.0, 0.0}};
    double horizon = 28800.0;  // minutes
    CrnMode crn_mode = CrnMode::dedicated_streams;

    const PointResources& at(Point p) const { return points[static_cast<std::size_t>(p)]; }
    PointResources& at(Point p) { return points[static_cast<std::size_t>(p)]; }

    bool symmetric_resources() const { return points[0] == points[1]; }

    /// Every violated field; empty when the configuration is usable.
    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        auto append = [&out](std::vector<std::string> more) {
            out.insert(out.end(), more.begin(), more.end());
        };
        if (arrival.kind != DistributionKind::exponential)
            out.push_back("arrival must be exponential");
        append(arrival.violations("arrival"));
        if (manual_service.kind != DistributionKind::triangular)
            out.push_back("manual_service must be triangular");
        append(manual_service.violations("manual_service"));
        if (auto_service.kind != DistributionKind::triangular)
            out.push_back("auto_service must be triangular");
        append(auto_service.violations("auto_service"));
        if (!(unskilled_factor >= 1.0) || !std::isfinite(unskilled_factor))
            out.push_back("unskilled_factor must be >= 1");
        if (!(p_auto >= 0.0 && p_auto <= 1.0)) out.push_back("p_auto must lie in [0, 1]");
        if (!(p_point_A >= 0.0 && p_point_A <= 1.0))
            out.push_back("p_point_A must lie in [0, 1]");
        if (!(horizon > 0.0) || !std::isfinite(horizon)) out.push_back("horizon must be > 0");

        for (std::size_t i = 0; i < 2; ++i) {
            const std::string name = i == 0 ? "A" : "B";
            const auto& r = points[i];
            if (r.skilled < 0) out.push_back("skilled_per_point (" + name + ") must be >= 0");
            if (r.unskilled < 0)
                out.push_back("unskilled_per_point (" + name + ") must be >= 0");
            if (r.dispensers < 0)
                out.push_back("dispensers_per_point (" + name + ") must be >= 0");
        }

        const auto check_rates = [&out](const ClassRates& r, const std::string& name) {
            for (auto [value, field] : {std::pair{r.busy_rate, "busy_rate"},
                                        std::pair{r.idle_rate, "idle_rate"},
                                        std::pair{r.per_use, "per_use"}}) {
                if (!(value >= 0.0) || !std::isfinite(value))
                    out.push_back("cost_rates." + name + "." + field + " must be >= 0");
            }
        };
        check_rates(cost_rates.skilled, "skilled");
        check_rates(cost_rates.unskilled, "unskilled");
        check_rates(cost_rates.dispenser, "dispenser");

        if (out.empty()) append(servability_violations());
        return out;
    }

    /// Order classes with positive probability but no server.
    std::vector<std::string> servability_violations() const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < 2; ++i) {
            const std::string name = i == 0 ? "A" : "B";
            const double p_point = i == 0 ? p_point_A : 1.0 - p_point_A;
            const auto& r = points[i];
            if (p_auto * p_point > 0.0 && r.dispensers == 0)
                out.push_back("dispensers_per_point: point " + name +
                              " receives automated orders but has no dispenser");
            if ((1.0 - p_auto) * p_point > 0.0 && r.skilled + r.unskilled == 0)
                out.push_back("skilled_per_point/unskilled_per_point: point " + name +
                              " receives manual orders but has no operative");
        }
        return out;
    }

    void validate() const {
        if (auto v = violations(); !v.empty()) throw ConfigError(std::move(v));
    }

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// True when two configurations differ at most in resource counts.
inline bool differs_only_in_decisions(ModelConfig a, const ModelConfig& b) {
    a.points = b.points;
    return a == b;
}

struct PoolReport {
    std::string name;
    Point point = Point::A;
    ServerClass server_class = ServerClass::skilled;
    std::int64_t capacity = 0;
    des::PoolStats stats;

    friend bool operator==(const PoolReport&, const PoolReport&) = default;
};

struct ReplicationOutput {
    std::uint32_t replication = 0;
    double total_usage_cost = 0.0;
    std::uint64_t arrivals = 0;
    std::uint64_t completions = 0;
    std::uint64_t in_system_at_end = 0;
    std::vector<PoolReport> pools;

    friend bool operator==(const ReplicationOutput&, const ReplicationOutput&) = default;
};

/// Sum over pools of busy, idle and per-use charges. Times are minutes,
/// rates are per hour.
inline double total_usage_cost(std::span<const PoolReport> pools, const CostRates& rates) {
    double cost = 0.0;
    for (const auto& p : pools) {
        const ClassRates& r = rates.of(p.server_class);
        cost += r.busy_rate * (p.stats.busy_time / 60.0) + r.idle_rate * (p.stats.idle_time / 60.0) +
                r.per_use * static_cast<double>(p.stats.grants);
    }
    return cost;
}

/// The seven (or one, in default_stream mode) uniform sources of one replication.
class ReplicationStreams {
public:
    ReplicationStreams(CrnMode mode, std::uint64_t master_seed, std::uint32_t replication)
        : mode_(mode) {
        if (mode == CrnMode::default_stream) {
            streams_.emplace_back(master_seed, SourceId::shared, replication);
        } else {
            for (SourceId id : kDedicatedSources) streams_.emplace_back(master_seed, id, replication);
        }
    }

    RandomStream& operator[](SourceId id) {
        if (mode_ == CrnMode::default_stream) return streams_.front();
        return streams_.at(static_cast<std::size_t>(id));
    }

    CrnMode mode() const noexcept { return mode_; }

private:
    CrnMode mode_;
    std::vector<RandomStream> streams_;
};

struct Route {
    Point point = Point::A;
    PickMode mode = PickMode::manual;

    friend bool operator==(const Route&, const Route&) = default;
};

/// One uniform from order_type, then one from point_choice.
inline Route route_order(const ModelConfig& config, ReplicationStreams& streams) {
    Route r;
    r.mode = streams[SourceId::order_type].next_uniform() < config.p_auto ? PickMode::automated
                                                                           : PickMode::manual;
    r.point = streams[SourceId::point_choice].next_uniform() < config.p_point_A ? Point::A : Point::B;
    return r;
}

constexpr SourceId service_source(Point point, ServerClass server) {
    if (server == ServerClass::dispenser)
        return point == Point::A ? SourceId::auto_service_point_A : SourceId::auto_service_point_B;
    return point == Point::A ? SourceId::manual_service_point_A : SourceId::manual_service_point_B;
}

/// Service duration for a server class given the uniform `u`.
inline double service_time_from_uniform(const ModelConfig& config, ServerClass server, double u) {
    switch (server) {
        case ServerClass::dispenser: return inverse_cdf(config.auto_service, u);
        case ServerClass::skilled: return inverse_cdf(config.manual_service, u);
        case ServerClass::unskilled: break;
    }
    return inverse_cdf(config.manual_service, u) * config.unskilled_factor;
}

/// Service duration for a server class at a point. Consumes one uniform
/// from that point's service stream whatever the class.
inline double pick_service_time(const ModelConfig& config, Point point, ServerClass server,
                                ReplicationStreams& streams) {
    const double u = streams[service_source(point, server)].next_uniform();
    return service_time_from_uniform(config, server, u);
}

struct PoolSpec {
    std::string name;
    Point point;
    ServerClass server_class;
    std::int64_t capacity;
};

/// Validated, executable crossdock model. Each run uses a fresh kernel.
class CrossdockModel {
public:
    explicit CrossdockModel(ModelConfig config) : config_(std::move(config)) {
        config_.validate();
        for (Point p : {Point::A, Point::B}) {
            const auto& r = config_.at(p);
            const std::string prefix = p == Point::A ? "A." : "B.";
            pools_.push_back({prefix + "skilled", p, ServerClass::skilled, r.skilled});
            pools_.push_back({prefix + "unskilled", p, ServerClass::unskilled, r.unskilled});
            pools_.push_back({prefix + "dispenser", p, ServerClass::dispenser, r.dispensers});
        }
    }

    const ModelConfig& config() const noexcept { return config_; }

    /// Pools in order A.skilled, A.unskilled, A.dispenser, B.skilled, B.unskilled, B.dispenser.
    const std::vector<PoolSpec>& pool_specs() const noexcept { return pools_; }

    ReplicationOutput run(std::uint64_t master_seed, std::uint32_t replication,
                          des::EventLog* log = nullptr) const {
        Run r(*this, master_seed, replication, log);
        return r.execute();
    }

private:
    struct Action {
        enum class Kind { arrival, service_end } kind = Kind::arrival;
        des::EntityId order = 0;
        std::size_t pool = 0;
    };

    class Run {
    public:
        Run(const CrossdockModel& model, std::uint64_t seed, std::uint32_t replication,
            des::EventLog* log)
            : model_(model),
              cfg_(model.config_),
              streams_(cfg_.crn_mode, seed, replication),
              log_(log),
              replication_(replication) {
            for (const auto& spec : model.pools_) pools_.emplace_back(spec.name, spec.capacity, log);
        }

        ReplicationOutput execute() {
            schedule_arrival();
            while (auto t = calendar_.peek_time()) {
                if (!(*t < cfg_.horizon)) break;
                auto ev = calendar_.next_event();
                if (ev->action.kind == Action::Kind::arrival) {
                    on_arrival();
                } else {
                    on_service_end(ev->action.order, ev->action.pool);
                }
            }
            calendar_.advance_to(cfg_.horizon);
            return collect();
        }

    private:
        static std::size_t pool_index(Point p, ServerClass c) {
            return static_cast<std::size_t>(p) * 3 + static_cast<std::size_t>(c);
        }

        double now() const { return calendar_.clock(); }

        void schedule_arrival() {
            const double gap = sample(streams_[SourceId::arrival], cfg_.arrival);
            calendar_.schedule(now() + gap, Action{Action::Kind::arrival, next_order_, 0});
        }

        void on_arrival() {
            const des::EntityId id = next_order_++;
            ++arrivals_;
            const Route route = route_order(cfg_, streams_);
            if (log_) {
                log_->record(now(), "arrival", id, "", 0, 0);
                std::string where = route.point == Point::A ? "A." : "B.";
                where += route.mode == PickMode::automated ? "auto" : "manual";
                log_->record(now(), "route", id, where, 0, 0);
            }
            schedule_arrival();

            if (route.mode == PickMode::automated) {
                const std::size_t idx = pool_index(route.point, ServerClass::dispenser);
                if (pools_[idx].seize(id, now()) == des::SeizeOutcome::granted) begin_service(id, idx);
                return;
            }
            const std::size_t skilled = pool_index(route.point, ServerClass::skilled);
            const std::size_t unskilled = pool_index(route.point, ServerClass::unskilled);
            if (pools_[skilled].has_idle_unit()) {
                pools_[skilled].seize(id, now());
                begin_service(id, skilled);
            } else if (pools_[unskilled].has_idle_unit()) {
                pools_[unskilled].seize(id, now());
                begin_service(id, unskilled);
            } else {
                auto& q = manual_queue_[static_cast<std::size_t>(route.point)];
                q.push_back(id);
                if (log_)
                    log_->record(now(), "enqueue", id, route.point == Point::A ? "A.manual" : "B.manual",
                                 q.size(), 0);
            }
        }

        void begin_service(des::EntityId id, std::size_t pool) {
            const PoolSpec& spec = model_.pools_[pool];
            const double d = pick_service_time(cfg_, spec.point, spec.server_class, streams_);
            calendar_.schedule(now() + d, Action{Action::Kind::service_end, id, pool});
        }

        void on_service_end(des::EntityId id, std::size_t pool) {
            ++completions_;
            if (log_) log_->record(now(), "depart", id, model_.pools_[pool].name, 0, 0);
            const PoolSpec& spec = model_.pools_[pool];
            if (auto next = pools_[pool].release(id, now())) {
                begin_service(*next, pool);
                return;
            }
            if (spec.server_class == ServerClass::dispenser) return;
            auto& q = manual_queue_[static_cast<std::size_t>(spec.point)];
            if (q.empty()) return;
            const des::EntityId head = q.front();
            q.pop_front();
            pools_[pool].seize(head, now());
            begin_service(head, pool);
        }

        ReplicationOutput collect() const {
            ReplicationOutput out;
            out.replication = replication_;
            out.arrivals = arrivals_;
            out.completions = completions_;
            std::uint64_t present = manual_queue_[0].size() + manual_queue_[1].size();
            for (std::size_t i = 0; i < pools_.size(); ++i) {
                const auto& spec = model_.pools_[i];
                present += pools_[i].queue_length() + static_cast<std::uint64_t>(pools_[i].busy_units());
                out.pools.push_back(PoolReport{spec.name, spec.point, spec.server_class, spec.capacity,
                                               pools_[i].finalize_stats(cfg_.horizon)});
            }
            out.in_system_at_end = present;
            out.total_usage_cost = total_usage_cost(out.pools, cfg_.cost_rates);
            return out;
        }

        const CrossdockModel& model_;
        const ModelConfig& cfg_;
        ReplicationStreams streams_;
        des::EventLog* log_;
        std::uint32_t replication_;
        des::EventCalendar<Action> calendar_;
        std::vector<des::ResourcePool> pools_;
        std::array<std::deque<des::EntityId>, 2> manual_queue_;
        des::EntityId next_order_ = 0;
        std::uint64_t arrivals_ = 0;
        std::uint64_t completions_ = 0;
    };

    ModelConfig config_;
    std::vector<PoolSpec> pools_;
};

inline CrossdockModel build_model(ModelConfig config) { return CrossdockModel(std::move(config)); }

inline ReplicationOutput run_replication(const ModelConfig& config, std::uint64_t master_seed,
                                         std::uint32_t replication, des::EventLog* log = nullptr) {
    return CrossdockModel(config).run(master_seed, replication, log);
}

}  // namespace crossdock
