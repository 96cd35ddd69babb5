#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rngsim {

using Cycle = std::uint64_t;  // bus cycles unless a name says otherwise

constexpr Cycle kPending = std::numeric_limits<Cycle>::max();

enum class ReqKind { Read, Write, RngRead };

inline const char* to_string(ReqKind k) {
    switch (k) {
        case ReqKind::Read: return "read";
        case ReqKind::Write: return "write";
        case ReqKind::RngRead: return "rng_read";
    }
    return "?";
}

// A core-issued request. One object flows through staging, queues and the
// scheduler; RngReads are mirrored into every channel's RNG queue.
struct MemRequest {
    std::uint64_t id = 0;  // globally increasing in submission order
    int core = -1;
    ReqKind kind = ReqKind::Read;
    std::uint64_t addr = 0;  // byte address; unused for RngRead
    std::uint64_t arrival_core_cycle = 0;
    Cycle enqueue_cycle = kPending;   // bus cycle the controller accepted it
    Cycle schedule_cycle = kPending;  // column command issue / RNG op trigger / buffer serve
    Cycle completion = kPending;

    // decoded coordinates, filled at submission for reads/writes
    int channel = 0;
    int bank = 0;
    std::uint32_t row = 0;
    std::uint32_t col = 0;

    bool accepted = false;            // enqueued (write retire condition)
    bool served_from_buffer = false;
    bool rng_counted = false;         // counted toward total_rng_requests

    bool complete_at(Cycle bus_now) const {
        return completion != kPending && bus_now >= completion;
    }
};

using ReqPtr = std::shared_ptr<MemRequest>;

// Always-on simulator invariant check; a failure is a bug, never a runtime
// condition, so it throws regardless of NDEBUG.
class SimInvariantError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

#define RNGSIM_CHECK(cond, msg)                                        \
    do {                                                               \
        if (!(cond)) {                                                 \
            std::ostringstream rngsim_check_os_;                      \
            rngsim_check_os_ << "invariant violated: " << msg          \
                             << " (" << #cond << ") at " << __FILE__   \
                             << ":" << __LINE__;                       \
            throw ::rngsim::SimInvariantError(rngsim_check_os_.str()); \
        }                                                              \
    } while (0)

// Configuration / input errors are runtime conditions.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// splitmix64: the counter-keyed deterministic bit source used everywhere a
// seeded stream is needed (TRNG bit synthesis, synthetic trace generation).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stateful stream over splitmix64, keyed by a seed.
class SplitMix {
  public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return n ? next() % n : 0; }

  private:
    std::uint64_t state_;
};

}  // namespace rngsim
