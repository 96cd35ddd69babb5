#pragma once

#include <cstdint>
#include <deque>

#include "rngsim/config.hpp"
#include "rngsim/trace.hpp"
#include "rngsim/types.hpp"

namespace rngsim {

// What a core needs from the memory side. MemorySystem implements it; tests
// can substitute an ideal zero-latency stub.
class MemoryPort {
  public:
    virtual ~MemoryPort() = default;
    virtual ReqPtr create(int core, ReqKind kind, std::uint64_t addr, std::uint64_t core_cycle) = 0;
    virtual void send(const ReqPtr& req) = 0;
};

// Trace-driven core: bounded instruction window, fixed issue width, in-order
// retirement. Memory ops are sent to the controller when they enter the
// window; reads and RNG requests block retirement at the window head.
class Core {
  public:
    Core(int id, const CoreConfig& cfg, const TraceFile* trace, MemoryPort& port,
         std::uint64_t clock_ratio, std::uint64_t budget);

    void tick(std::uint64_t core_cycle);

    bool budget_reached() const { return finished_; }
    int id() const { return id_; }

    // timing stats, frozen when the budget is hit
    std::uint64_t retired_at_budget() const { return retired_capped_; }
    std::uint64_t cycles_to_budget() const { return cycles_to_budget_; }
    std::uint64_t mem_stall_cycles() const { return mem_stall_cycles_; }
    std::uint64_t reads_issued() const { return reads_; }
    std::uint64_t writes_issued() const { return writes_; }
    std::uint64_t rng_issued() const { return rng_; }
    std::uint64_t retired_total() const { return retired_; }

    // memory stall cycles per instruction; undefined (throws) at zero retired
    double mcpi() const;

  private:
    struct WinEntry {
        ReqPtr req;  // null for a bubble
    };

    void refill(std::uint64_t core_cycle);

    int id_;
    CoreConfig cfg_;
    const TraceFile* trace_;
    MemoryPort& port_;
    std::uint64_t ratio_;
    std::uint64_t budget_;

    std::deque<WinEntry> window_;
    std::size_t rec_idx_ = 0;
    std::uint64_t bubbles_left_ = 0;

    bool finished_ = false;
    std::uint64_t retired_ = 0;
    std::uint64_t retired_capped_ = 0;
    std::uint64_t cycles_to_budget_ = 0;
    std::uint64_t mem_stall_cycles_ = 0;
    std::uint64_t reads_ = 0, writes_ = 0, rng_ = 0;
};

}  // namespace rngsim
