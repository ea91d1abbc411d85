/**
 * @file des.hpp
 * @brief Minimal terminating discrete-event kernel: calendar, capacitated
 *        FIFO resources, busy-time accumulators and an optional event log.
 *
 * One kernel instance is single-threaded. Run replications in parallel by
 * giving each its own calendar and pools.
 */
#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "crossdock/errors.hpp"
#include "crossdock/format.hpp"

namespace crossdock::des {

using EntityId = std::uint64_t;

template <typename Payload>
struct Event {
    double time = 0.0;
    std::uint64_t sequence = 0;
    Payload action{};
};

/// Future event list ordered by (time, insertion sequence).
template <typename Payload>
class EventCalendar {
public:
    /// Schedule `action` at absolute time `time`. Throws KernelError if
    /// `time` precedes the current clock.
    void schedule(double time, Payload action) {
        if (!(time >= clock_))
            throw KernelError("event scheduled at " + std::to_string(time) +
                              " before clock " + std::to_string(clock_));
        heap_.push(Event<Payload>{time, next_sequence_++, std::move(action)});
    }

    /// Pop the earliest event and advance the clock to it.
    std::optional<Event<Payload>> next_event() {
        if (heap_.empty()) return std::nullopt;
        Event<Payload> ev = heap_.top();
        heap_.pop();
        clock_ = ev.time;
        return ev;
    }

    /// Time of the earliest pending event, if any.
    std::optional<double> peek_time() const {
        if (heap_.empty()) return std::nullopt;
        return heap_.top().time;
    }

    /// Move the clock forward without processing events (end of horizon).
    void advance_to(double time) {
        if (time < clock_) throw KernelError("clock cannot move backwards");
        clock_ = time;
    }

    double clock() const noexcept { return clock_; }
    std::size_t size() const noexcept { return heap_.size(); }
    bool empty() const noexcept { return heap_.empty(); }

private:
    struct Later {
        bool operator()(const Event<Payload>& a, const Event<Payload>& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.sequence > b.sequence;
        }
    };

    std::priority_queue<Event<Payload>, std::vector<Event<Payload>>, Later> heap_;
    std::uint64_t next_sequence_ = 0;
    double clock_ = 0.0;
};

struct LogRecord {
    std::uint32_t replication = 0;
    double time = 0.0;
    std::string event_kind;
    EntityId entity = 0;
    std::string pool;
    std::size_t queue_len = 0;
    std::int64_t busy_units = 0;
};

/// Flag-enabled trace of state changes; oracle tests replay it.
class EventLog {
public:
    explicit EventLog(std::uint32_t replication = 0) : replication_(replication) {}

    void record(double time, std::string_view kind, EntityId entity, std::string_view pool,
                std::size_t queue_len, std::int64_t busy_units) {
        records_.push_back(LogRecord{replication_, time, std::string(kind), entity,
                                     std::string(pool), queue_len, busy_units});
    }

    const std::vector<LogRecord>& records() const noexcept { return records_; }
    std::uint32_t replication() const noexcept { return replication_; }

private:
    std::uint32_t replication_;
    std::vector<LogRecord> records_;
};

/// Time-weighted integral of busy units plus grant count.
class BusyStat {
public:
    void update(double now, std::int64_t busy_units) {
        integral_ += static_cast<double>(busy_units) * (now - last_change_);
        last_change_ = now;
    }
    void count_grant() { ++grants_; }

    double integral() const noexcept { return integral_; }
    double last_change() const noexcept { return last_change_; }
    std::uint64_t grants() const noexcept { return grants_; }

private:
    double integral_ = 0.0;
    double last_change_ = 0.0;
    std::uint64_t grants_ = 0;
};

struct PoolStats {
    double busy_time = 0.0;  // unit-minutes
    double idle_time = 0.0;  // unit-minutes
    std::uint64_t grants = 0;

    friend bool operator==(const PoolStats&, const PoolStats&) = default;
};

enum class SeizeOutcome { granted, enqueued };

/// Capacitated resource with a FIFO wait queue.
class ResourcePool {
public:
    ResourcePool(std::string name, std::int64_t capacity, EventLog* log = nullptr)
        : name_(std::move(name)), capacity_(capacity), log_(log) {
        if (capacity < 0) throw KernelError("pool " + name_ + " has negative capacity");
    }

    bool has_idle_unit() const noexcept { return busy_ < capacity_; }

    SeizeOutcome seize(EntityId entity, double now) {
        if (busy_ < capacity_) {
            grant(entity, now);
            return SeizeOutcome::granted;
        }
        queue_.push_back(entity);
        if (log_) log_->record(now, "enqueue", entity, name_, queue_.size(), busy_);
        return SeizeOutcome::enqueued;
    }

    /// Release one unit. If someone waits, the head takes the freed unit and
    /// is returned.
    std::optional<EntityId> release(EntityId entity, double now) {
        if (busy_ <= 0) throw KernelError("release on idle pool " + name_);
        stat_.update(now, busy_);
        --busy_;
        if (log_) log_->record(now, "release", entity, name_, queue_.size(), busy_);
        if (queue_.empty()) return std::nullopt;
        const EntityId head = queue_.front();
        queue_.pop_front();
        grant(head, now);
        return head;
    }

    /// Busy, idle and grants over [0, horizon]. Call once the clock reaches horizon.
    PoolStats finalize_stats(double horizon) const {
        if (horizon < stat_.last_change())
            throw KernelError("finalize before last state change of pool " + name_);
        BusyStat closed = stat_;
        closed.update(horizon, busy_);
        PoolStats out;
        out.busy_time = closed.integral();
        out.idle_time = static_cast<double>(capacity_) * horizon - out.busy_time;
        if (out.idle_time < 0.0) out.idle_time = 0.0;
        out.grants = closed.grants();
        return out;
    }

    const std::string& name() const noexcept { return name_; }
    std::int64_t capacity() const noexcept { return capacity_; }
    std::int64_t busy_units() const noexcept { return busy_; }
    std::size_t queue_length() const noexcept { return queue_.size(); }

private:
    void grant(EntityId entity, double now) {
        stat_.update(now, busy_);
        ++busy_;
        stat_.count_grant();
        if (log_) log_->record(now, "grant", entity, name_, queue_.size(), busy_);
    }

    std::string name_;
    std::int64_t capacity_;
    std::int64_t busy_ = 0;
    std::deque<EntityId> queue_;
    BusyStat stat_;
    EventLog* log_;
};

inline void write_log_csv(std::ostream& out, const std::vector<LogRecord>& records,
                          bool header = true) {
    if (header) out << "replication,time,event_kind,entity_id,pool,queue_len,busy_units\n";
    for (const auto& r : records) {
        out << r.replication << ',' << format_double(r.time) << ',' << r.event_kind << ',' << r.entity << ','
            << r.pool << ',' << r.queue_len << ',' << r.busy_units << '\n';
    }
}

}  // namespace crossdock::des
