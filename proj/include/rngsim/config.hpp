#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rngsim/ini.hpp"
#include "rngsim/types.hpp"

namespace rngsim {

// DDR3-1600 11-11-11-28 speed-bin values, all in bus cycles.
struct TimingSet {
    Cycle tRCD = 11;
    Cycle tRP = 11;
    Cycle tCL = 11;
    Cycle tRAS = 28;
    Cycle tRC = 39;
    Cycle tBL = 4;
    Cycle tCCD = 4;
    Cycle tRTP = 6;
    Cycle tWR = 12;
    Cycle tWTR = 6;
    Cycle tRRD = 5;
    Cycle tFAW = 24;
};

// Bit-field layout from the LSB: offset(6) | channel | column | bank | row.
struct AddressMap {
    int offset_bits = 6;
    int channel_bits = 2;
    int column_bits = 7;
    int bank_bits = 3;
    int row_bits = 16;

    int total_bits() const {
        return offset_bits + channel_bits + column_bits + bank_bits + row_bits;
    }
};

struct DramConfig {
    int channels = 4;
    int ranks_per_channel = 1;
    int banks_per_rank = 8;
    std::uint32_t rows_per_bank = 65536;
    std::uint32_t columns_per_row = 128;  // 64-byte lines
    std::uint64_t bus_frequency_hz = 800'000'000;
    TimingSet timing;
    AddressMap address_map;
    bool refresh_enable = false;
    Cycle refresh_interval = 6240;  // tREFI at 800 MHz (7.8us), used only if enabled
    Cycle refresh_cycles = 208;     // all-bank refresh occupancy

    int banks_per_channel() const { return ranks_per_channel * banks_per_rank; }
};

enum class SchedulerKind { FrFcfsCap, Bliss, RngAware };

struct SchedulerConfig {
    SchedulerKind kind = SchedulerKind::FrFcfsCap;
    std::uint32_t column_cap = 16;
    std::uint32_t bliss_blacklist_threshold = 4;
    Cycle bliss_clearing_interval = 10000;
    Cycle stall_limit = 100;
    std::uint32_t read_q_capacity = 32;
    std::uint32_t write_q_capacity = 32;
    std::uint32_t rng_q_capacity = 32;
    std::vector<int> priorities;  // core id -> priority level (higher outranks)
};

enum class TrngPreset { DRangeLike, QuacLike, Custom };

struct TrngConfig {
    TrngPreset preset = TrngPreset::DRangeLike;
    std::uint32_t batch_bits_per_channel = 8;
    Cycle batch_latency = 40;
    Cycle ondemand_word_latency = 198;  // 64-bit word, all channels in parallel
    std::uint32_t ondemand_bits = 64;   // bits yielded by one on-demand operation
    std::uint32_t reserved_rows_per_bank = 4;
    std::uint64_t bits_source_seed = 1;

    void apply_preset() {
        switch (preset) {
            case TrngPreset::DRangeLike:
                batch_bits_per_channel = 8;
                batch_latency = 40;
                ondemand_word_latency = 198;
                ondemand_bits = 64;
                break;
            case TrngPreset::QuacLike:
                // 1024 bits / (238 cycles * 1.25 ns) ~= 3.44 Gb/s; the 64-bit
                // word costs the full operation and excess bits feed the buffer.
                batch_bits_per_channel = 256;
                batch_latency = 238;
                ondemand_word_latency = 238;
                ondemand_bits = 1024;
                break;
            case TrngPreset::Custom:
                break;
        }
    }
};

enum class BufferPolicy { None, SimpleBuffering, SimplePredictor, RlAgent, GreedyOracle };

struct BufferConfig {
    BufferPolicy policy = BufferPolicy::None;
    std::uint32_t entries = 16;  // 64-bit words; capacity = entries * 64 bits
    Cycle period_threshold = 40;
    std::uint32_t low_util_threshold = 4;  // 0 disables the low-utilization path
    std::uint32_t table_entries = 256;     // 2-bit saturating counters per channel
    double rl_alpha = 0.05;
};

struct CoreConfig {
    std::uint64_t frequency_hz = 4'000'000'000;
    std::uint32_t issue_width = 3;
    std::uint32_t window_entries = 128;
    std::uint64_t clock_ratio(std::uint64_t bus_hz) const { return frequency_hz / bus_hz; }
};

// One core's workload binding. Either a trace file path or a synthetic spec:
//   synth:rng:<mbps>  synth:stream:<mpki>  synth:random:<mpki>  synth:rowlocal:<mpki>
struct CoreSlot {
    std::string trace;
    int priority = 1;
    std::uint64_t budget = 0;  // 0 -> sim.instruction_budget
};

struct SimConfig {
    std::uint64_t seed = 1;
    std::uint64_t instruction_budget = 5'000'000;
    std::uint64_t synth_trace_length = 1'000'000;  // instructions per generated trace
    std::uint64_t max_bus_cycles = 2'000'000'000;  // hard abort guard
    bool record_events = false;
    bool record_idle_periods = false;

    DramConfig dram;
    TimingSet& timing() { return dram.timing; }
    CoreConfig core;
    SchedulerConfig sched;
    TrngConfig trng;
    BufferConfig buffer;
    std::vector<CoreSlot> workload;

    std::uint32_t usable_rows_per_bank() const {
        return dram.rows_per_bank > trng.reserved_rows_per_bank
                   ? dram.rows_per_bank - trng.reserved_rows_per_bank
                   : 0;
    }

    // Throws ConfigError listing every problem; nothing runs on failure.
    void validate() const;

    // Canonical textual form; identical configs serialize identically.
    std::string canonical() const;
    std::uint64_t hash() const;
};

SchedulerKind scheduler_kind_from_string(const std::string& s);
const char* to_string(SchedulerKind k);
BufferPolicy buffer_policy_from_string(const std::string& s);
const char* to_string(BufferPolicy p);
TrngPreset trng_preset_from_string(const std::string& s);
const char* to_string(TrngPreset p);

// Builds a SimConfig from an INI file (plus optional key=value overrides).
SimConfig load_config(const IniFile& ini);
SimConfig load_config_file(const std::string& path,
                           const std::vector<std::string>& overrides = {});

}  // namespace rngsim
