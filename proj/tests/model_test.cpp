#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "crossdock/model.hpp"
#include "crossdock/parallel.hpp"

using namespace crossdock;

namespace {

ModelConfig small_config() {
    ModelConfig cfg;
    cfg.horizon = 2000.0;
    return cfg;
}

std::vector<double> logged_arrivals(const des::EventLog& log) {
    std::vector<double> t;
    for (const auto& r : log.records())
        if (r.event_kind == "arrival") t.push_back(r.time);
    return t;
}

std::vector<std::string> logged_routes(const des::EventLog& log) {
    std::vector<std::string> out;
    for (const auto& r : log.records())
        if (r.event_kind == "route") out.push_back(r.pool);
    return out;
}

TEST(BuildModel, PaperBaseLayout) {
    const auto model = build_model(ModelConfig{});
    const auto& pools = model.pool_specs();
    ASSERT_EQ(pools.size(), 6u);
    std::vector<std::int64_t> caps;
    for (const auto& p : pools) caps.push_back(p.capacity);
    EXPECT_EQ(caps, (std::vector<std::int64_t>{2, 2, 1, 2, 2, 1}));
    EXPECT_EQ(pools[0].name, "A.skilled");
    EXPECT_EQ(pools[5].name, "B.dispenser");
}

TEST(BuildModel, UnusedDispenserClassIsValid) {
    ModelConfig cfg = small_config();
    cfg.p_auto = 0.0;
    cfg.points[0].dispensers = cfg.points[1].dispensers = 0;
    const auto out = run_replication(cfg, 3, 0);
    for (const auto& p : out.pools) {
        if (p.server_class == ServerClass::dispenser) {
            EXPECT_EQ(p.stats.grants, 0u);
        }
    }
    EXPECT_GT(out.arrivals, 0u);
}

TEST(BuildModel, UnservableClassRejected) {
    ModelConfig cfg = small_config();
    cfg.points[0].dispensers = cfg.points[1].dispensers = 0;
    EXPECT_THROW(build_model(cfg), ConfigError);
}

TEST(BuildModel, ListsEveryViolation) {
    ModelConfig cfg;
    cfg.p_auto = 1.5;
    cfg.horizon = -1.0;
    cfg.unskilled_factor = 0.5;
    cfg.cost_rates.dispenser.idle_rate = -2.0;
    try {
        build_model(cfg);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.violations().size(), 4u);
        const std::string msg = e.what();
        EXPECT_NE(msg.find("p_auto"), std::string::npos);
        EXPECT_NE(msg.find("horizon"), std::string::npos);
        EXPECT_NE(msg.find("unskilled_factor"), std::string::npos);
        EXPECT_NE(msg.find("cost_rates.dispenser.idle_rate"), std::string::npos);
    }
}

TEST(RouteOrder, AllManualWhenNoAutomation) {
    ModelConfig cfg;
    cfg.p_auto = 0.0;
    ReplicationStreams streams(CrnMode::dedicated_streams, 1, 0);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(route_order(cfg, streams).mode, PickMode::manual);
    EXPECT_EQ(streams[SourceId::order_type].draws_taken(), 1000u);
    EXPECT_EQ(streams[SourceId::point_choice].draws_taken(), 1000u);
}

TEST(RouteOrder, DegenerateProbabilities) {
    ModelConfig cfg;
    cfg.p_auto = 1.0;
    cfg.p_point_A = 1.0;
    ReplicationStreams streams(CrnMode::dedicated_streams, 1, 0);
    for (int i = 0; i < 1000; ++i)
        EXPECT_EQ(route_order(cfg, streams), (Route{Point::A, PickMode::automated}));
}

TEST(RouteOrder, AutoFraction) {
    ModelConfig cfg;
    ReplicationStreams streams(CrnMode::dedicated_streams, 8, 0);
    int automated = 0;
    for (int i = 0; i < 100000; ++i) automated += route_order(cfg, streams).mode == PickMode::automated;
    EXPECT_NEAR(automated / 1e5, 0.5, 0.01);
}

TEST(PickServiceTime, UnskilledScalesSkilled) {
    ModelConfig cfg;
    // 1.3 * (3 + sqrt(11))
    EXPECT_NEAR(service_time_from_uniform(cfg, ServerClass::unskilled, 0.25), 8.2116, 1e-4);
    EXPECT_NEAR(service_time_from_uniform(cfg, ServerClass::unskilled, 0.25),
                1.3 * (3.0 + std::sqrt(11.0)), 1e-12);
    EXPECT_EQ(service_time_from_uniform(cfg, ServerClass::dispenser, 0.0), 1.0);
    cfg.unskilled_factor = 1.0;
    for (double u : {0.0, 0.1, 0.5, 0.77})
        EXPECT_EQ(service_time_from_uniform(cfg, ServerClass::unskilled, u),
                  service_time_from_uniform(cfg, ServerClass::skilled, u));
}

TEST(PickServiceTime, OneUniformRegardlessOfClass) {
    ModelConfig cfg;
    ReplicationStreams streams(CrnMode::dedicated_streams, 4, 2);
    RandomStream mirror(4, SourceId::manual_service_point_B, 2);
    for (auto cls : {ServerClass::skilled, ServerClass::unskilled, ServerClass::skilled}) {
        const double d = pick_service_time(cfg, Point::B, cls, streams);
        EXPECT_DOUBLE_EQ(d, service_time_from_uniform(cfg, cls, mirror.next_uniform()));
    }
    EXPECT_EQ(streams[SourceId::manual_service_point_B].draws_taken(), 3u);
    EXPECT_EQ(streams[SourceId::manual_service_point_A].draws_taken(), 0u);
}

TEST(ReplicationStreams, DefaultModeSharesOneStream) {
    ReplicationStreams streams(CrnMode::default_stream, 4, 2);
    streams[SourceId::arrival].next_uniform();
    streams[SourceId::auto_service_point_B].next_uniform();
    EXPECT_EQ(streams[SourceId::order_type].draws_taken(), 2u);
    EXPECT_EQ(streams[SourceId::order_type].key().source, SourceId::shared);
}

TEST(TotalUsageCost, ZeroRates) {
    ModelConfig cfg = small_config();
    cfg.cost_rates = CostRates{};
    EXPECT_EQ(run_replication(cfg, 1, 0).total_usage_cost, 0.0);
}

TEST(TotalUsageCost, IdleOnlyPool) {
    PoolReport p{"A.dispenser", Point::A, ServerClass::dispenser, 2, {0.0, 120.0, 0}};
    CostRates rates;
    rates.dispenser.idle_rate = 10.0;
    EXPECT_DOUBLE_EQ(total_usage_cost(std::span<const PoolReport>(&p, 1), rates), 20.0);
}

// Recompute each pool's busy time and grants from the log alone, then price them.
TEST(TotalUsageCost, MatchesLogReplay) {
    ModelConfig cfg = small_config();
    cfg.cost_rates.skilled.per_use = 0.5;
    cfg.cost_rates.dispenser.per_use = 1.25;
    des::EventLog log(0);
    const auto out = run_replication(cfg, 2024, 0, &log);

    std::map<std::string, std::map<des::EntityId, double>> open;
    std::map<std::string, double> busy;
    std::map<std::string, std::uint64_t> grants;
    for (const auto& r : log.records()) {
        if (r.event_kind == "grant") {
            open[r.pool][r.entity] = r.time;
            ++grants[r.pool];
        } else if (r.event_kind == "release") {
            busy[r.pool] += r.time - open[r.pool].at(r.entity);
            open[r.pool].erase(r.entity);
        }
    }
    for (const auto& [pool, m] : open)
        for (const auto& [id, t] : m) busy[pool] += cfg.horizon - t;

    std::vector<PoolReport> replay;
    for (const auto& p : out.pools) {
        PoolReport q = p;
        q.stats.busy_time = busy[p.name];
        q.stats.idle_time = static_cast<double>(p.capacity) * cfg.horizon - busy[p.name];
        q.stats.grants = grants[p.name];
        EXPECT_NEAR(q.stats.busy_time, p.stats.busy_time, 1e-9 * (1.0 + p.stats.busy_time));
        EXPECT_EQ(q.stats.grants, p.stats.grants);
        replay.push_back(q);
    }
    const double oracle = total_usage_cost(replay, cfg.cost_rates);
    EXPECT_NEAR(out.total_usage_cost, oracle, 1e-9 * oracle);
}

TEST(RunReplication, Deterministic) {
    const auto a = run_replication(small_config(), 11, 5);
    const auto b = run_replication(small_config(), 11, 5);
    EXPECT_EQ(a, b);
}

TEST(RunReplication, EmptyHorizon) {
    ModelConfig cfg;
    cfg.horizon = 1e-12;
    const auto out = run_replication(cfg, 1, 0);
    EXPECT_EQ(out.arrivals, 0u);
    EXPECT_EQ(out.completions, 0u);
    EXPECT_NEAR(out.total_usage_cost, 0.0, 1e-9);
}

TEST(RunReplication, ConservationAndCostIdentity) {
    const CrossdockModel model{ModelConfig{}};
    for (const auto& out : run_replications(model, 99, 0, 50)) {
        EXPECT_EQ(out.arrivals, out.completions + out.in_system_at_end);
        EXPECT_GE(out.total_usage_cost, 0.0);
        EXPECT_EQ(out.total_usage_cost, total_usage_cost(out.pools, model.config().cost_rates));
        for (const auto& p : out.pools) {
            const double total = static_cast<double>(p.capacity) * model.config().horizon;
            EXPECT_NEAR(p.stats.busy_time + p.stats.idle_time, total, 1e-9 * (1.0 + total));
        }
    }
}

TEST(RunReplication, CrnSynchronizationAcrossDispenserCounts) {
    ModelConfig a = small_config();
    ModelConfig b = a;
    b.points[0].dispensers = 3;
    des::EventLog la(0);
    des::EventLog lb(0);
    run_replication(a, 17, 0, &la);
    run_replication(b, 17, 0, &lb);
    EXPECT_EQ(logged_arrivals(la), logged_arrivals(lb));
    EXPECT_EQ(logged_routes(la), logged_routes(lb));
}

TEST(RunReplication, DefaultStreamLosesSynchronization) {
    ModelConfig a = small_config();
    a.crn_mode = CrnMode::default_stream;
    ModelConfig b = a;
    b.points[0].skilled = 1;
    des::EventLog la(0);
    des::EventLog lb(0);
    run_replication(a, 17, 0, &la);
    run_replication(b, 17, 0, &lb);
    EXPECT_NE(logged_arrivals(la), logged_arrivals(lb));
}

// An unskilled operative only starts work when every skilled operative at
// that point is busy. Busy counts are tracked from the log.
TEST(RunReplication, SkilledPreference) {
    ModelConfig cfg = small_config();
    cfg.arrival = DistributionSpec::exponential(2.0);  // enough load to use unskilled staff
    des::EventLog log(0);
    const auto out = run_replication(cfg, 5, 0, &log);
    std::map<std::string, std::int64_t> busy;
    int unskilled_grants = 0;
    for (const auto& r : log.records()) {
        if (r.event_kind == "grant" || r.event_kind == "release") busy[r.pool] = r.busy_units;
        if (r.event_kind == "grant" && r.pool.ends_with(".unskilled")) {
            ++unskilled_grants;
            const std::string skilled = r.pool.substr(0, 1) + ".skilled";
            EXPECT_EQ(busy[skilled], cfg.points[r.pool[0] == 'A' ? 0 : 1].skilled)
                << "at t=" << r.time;
        }
    }
    EXPECT_GT(unskilled_grants, 0);
    EXPECT_EQ(out.arrivals, out.completions + out.in_system_at_end);
}

TEST(RunReplication, SlowerArrivalsFewerOrders) {
    ModelConfig fast = small_config();
    ModelConfig slow = fast;
    slow.arrival = DistributionSpec::exponential(10.0);
    double n_fast = 0.0;
    double n_slow = 0.0;
    for (const auto& o : run_replications(CrossdockModel(fast), 3, 0, 100)) n_fast += o.arrivals;
    for (const auto& o : run_replications(CrossdockModel(slow), 3, 0, 100)) n_slow += o.arrivals;
    EXPECT_LT(n_slow, n_fast);
}

TEST(RunReplications, ThreadCountDoesNotChangeResults) {
    const CrossdockModel model{small_config()};
    EXPECT_EQ(run_replications(model, 1, 0, 24, 1), run_replications(model, 1, 0, 24, 4));
}

TEST(DiffersOnlyInDecisions, ResourceCountsOnly) {
    ModelConfig a;
    ModelConfig b = a;
    b.points[1].dispensers = 4;
    EXPECT_TRUE(differs_only_in_decisions(a, b));
    b.horizon = 10.0;
    EXPECT_FALSE(differs_only_in_decisions(a, b));
}

}  // namespace
