#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rngsim/types.hpp"

namespace rngsim {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
inline bool defined(double v) { return !std::isnan(v); }

struct CoreResult {
    std::uint64_t retired_instructions = 0;  // capped at the budget
    std::uint64_t cycles_to_budget = 0;      // core cycles
    std::uint64_t mem_stall_cycles = 0;
    std::uint64_t reads = 0, writes = 0, rng_requests = 0;
    bool is_rng_app = false;
    double mcpi = kUndefined;
    double ipc = kUndefined;
    // filled by the harness when alone runs are available
    double mem_slowdown = kUndefined;
};

struct RunResult {
    std::vector<CoreResult> cores;
    std::uint64_t bus_cycles = 0;

    std::uint64_t served_from_buffer = 0;
    std::uint64_t total_rng_requests = 0;
    double buffer_serve_rate = kUndefined;  // in [0,1] when defined

    std::uint64_t predictions = 0;
    double predictor_accuracy = kUndefined;
    double false_positive_rate = kUndefined;
    double false_negative_rate = kUndefined;
    std::uint64_t completed_idle_periods = 0;

    std::uint64_t busy_regular_cycles = 0;
    std::uint64_t rng_mode_cycles = 0;
    std::uint64_t rng_wait_cycles = 0;
    std::uint64_t idle_cycles = 0;
    std::uint64_t busy_memory_cycles = 0;  // energy proxy: regular + rng mode + rng wait

    std::uint64_t ondemand_ops = 0;
    std::uint64_t idle_batches = 0;
    std::uint64_t lowutil_batches = 0;
    std::uint64_t greedy_fills = 0;
    std::uint64_t bits_to_buffer = 0;
    std::uint64_t bits_to_ondemand = 0;
    std::uint64_t harvested_bits = 0;

    std::uint64_t max_read_wait = 0;
    std::uint64_t max_rng_wait = 0;

    // system metrics filled by the harness
    double unfairness = kUndefined;
    double weighted_speedup = kUndefined;
};

// MemSlowdown_i = MCPI_shared / MCPI_alone
double mem_slowdown(const RunResult& shared, const RunResult& alone, int core);

// max / min over defined slowdowns; undefined with fewer than 2 values
double unfairness(const std::vector<double>& slowdowns);

// sum of IPC_shared / IPC_alone over non-RNG cores; `alone[i]` pairs core i
double weighted_speedup(const RunResult& shared, const std::vector<RunResult>& alone);

// total cycles any channel was non-idle (regular busy + RNG mode + RNG wait)
inline std::uint64_t energy_proxy(const RunResult& r) { return r.busy_memory_cycles; }

// canonical numeric formatting shared by every CSV writer
std::string format_value(double v);
std::string run_result_csv(const RunResult& r);

}  // namespace rngsim
