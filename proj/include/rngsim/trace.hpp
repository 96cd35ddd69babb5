#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rngsim/config.hpp"
#include "rngsim/types.hpp"

namespace rngsim {

enum class TraceOp { Read, Write, Rng };

struct TraceRecord {
    std::uint64_t bubbles = 0;  // non-memory instructions before the op
    TraceOp op = TraceOp::Read;
    std::uint64_t addr = 0;  // unused for Rng
    bool operator==(const TraceRecord&) const = default;
};

struct TraceFile {
    std::string path;
    std::vector<TraceRecord> records;

    std::uint64_t total_instructions() const {
        std::uint64_t n = 0;
        for (const auto& r : records) n += r.bubbles + 1;
        return n;
    }
    std::uint64_t request_count() const {  // Read + Write records
        std::uint64_t n = 0;
        for (const auto& r : records)
            if (r.op != TraceOp::Rng) ++n;
        return n;
    }
    std::uint64_t rng_request_count() const {
        std::uint64_t n = 0;
        for (const auto& r : records)
            if (r.op == TraceOp::Rng) ++n;
        return n;
    }
    bool has_rng() const { return rng_request_count() > 0; }
};

struct WorkloadStats {
    double mpki = 0.0;
    char cls = 'L';  // L: mpki < 1, M: 1 <= mpki < 10, H: mpki >= 10
};

// Grammar (one record per line, '#' comments):
//   line := BUBBLES ' ' OP ;  OP := 'R 0x' HEX | 'W 0x' HEX | 'G'
TraceFile parse_trace(const std::string& path);
TraceFile parse_trace_string(const std::string& text, const std::string& origin = "<string>");
std::string serialize_trace(const TraceFile& t);
void write_trace(const TraceFile& t, const std::string& path);

// Throws ConfigError naming the first out-of-range address.
void validate_trace(const TraceFile& t, const SimConfig& cfg);

WorkloadStats classify(const TraceFile& t);

// Synthetic RNG benchmark: bubble count per 64-bit request is
// floor(64 * core_hz * issue_width / target_bits_per_s) - 1; one striding
// regular read is interleaved per `reads_per_rng` RNG requests.
std::uint64_t rng_bubbles_for_throughput(const SimConfig& cfg, double target_mbps);
TraceFile gen_rng_trace(const SimConfig& cfg, double target_mbps, std::uint64_t length_insts,
                        std::uint32_t reads_per_rng = 10);

enum class TracePattern { Stream, RandomUniform, RowLocal };
TracePattern trace_pattern_from_string(const std::string& s);

TraceFile gen_nonrng_trace(const SimConfig& cfg, TracePattern pattern, double target_mpki,
                           std::uint64_t length_insts, std::uint64_t seed,
                           double write_fraction = 0.0);

// Resolves a workload slot: "synth:rng:<mbps>", "synth:stream:<mpki>",
// "synth:random:<mpki>", "synth:rowlocal:<mpki>", or a trace file path.
bool is_synth_spec(const std::string& spec);
TraceFile resolve_trace(const SimConfig& cfg, const std::string& spec);

}  // namespace rngsim
