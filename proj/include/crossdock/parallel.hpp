#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "crossdock/model.hpp"

namespace crossdock {

/// Run replications [first, first + count) of `model`. Output slot i holds
/// replication first + i regardless of how work was spread over threads.
inline std::vector<ReplicationOutput> run_replications(const CrossdockModel& model,
                                                       std::uint64_t master_seed,
                                                       std::uint32_t first, std::uint32_t count,
                                                       unsigned threads = 1) {
    std::vector<ReplicationOutput> out(count);
    threads = std::max(1u, std::min<unsigned>(threads, count));
    if (threads == 1) {
        for (std::uint32_t i = 0; i < count; ++i) out[i] = model.run(master_seed, first + i);
        return out;
    }

    std::atomic<std::uint32_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                for (std::uint32_t i = next++; i < count; i = next++) {
                    try {
                        out[i] = model.run(master_seed, first + i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

inline std::vector<double> costs_of(const std::vector<ReplicationOutput>& outputs) {
    std::vector<double> costs;
    costs.reserve(outputs.size());
    for (const auto& o : outputs) costs.push_back(o.total_usage_cost);
    return costs;
}

}  // namespace crossdock
