#pragma once

#include <cstdint>
#include <vector>

#include "rngsim/config.hpp"
#include "rngsim/types.hpp"

namespace rngsim {

enum class RngOpKind { OnDemand, IdleBatch };

struct RngOperation {
    RngOpKind kind = RngOpKind::IdleBatch;
    std::uint64_t seq = 0;       // operation sequence number (harvest key)
    std::uint64_t channels = 0;  // bit i set -> channel i participates
    Cycle start = 0;
    Cycle finish = 0;
    std::uint32_t bits_yield = 0;  // filled at harvest time
};

// Parameterized DRAM-TRNG occupancy/yield model. Bits come from a
// deterministic counter-keyed generator; reproducibility over entropy.
class TrngEngine {
  public:
    TrngEngine() = default;
    explicit TrngEngine(const TrngConfig& cfg) : cfg_(cfg) {}

    const TrngConfig& config() const { return cfg_; }

    RngOperation make_ondemand(int num_channels, Cycle now) {
        RngOperation op;
        op.kind = RngOpKind::OnDemand;
        op.seq = next_seq_++;
        op.channels = (num_channels >= 64) ? ~0ULL : ((1ULL << num_channels) - 1);
        op.start = now;
        op.finish = now + cfg_.ondemand_word_latency;
        return op;
    }

    RngOperation make_idle_batch(int channel, Cycle now) {
        RngOperation op;
        op.kind = RngOpKind::IdleBatch;
        op.seq = next_seq_++;
        op.channels = 1ULL << channel;
        op.start = now;
        op.finish = now + cfg_.batch_latency;
        return op;
    }

    // pre: op finished. Returns `nbits` bits packed little-endian into words,
    // deterministically keyed by (bits_source_seed, op.seq). Every harvested
    // bit is produced exactly once and counted.
    std::vector<std::uint64_t> harvest_bits(RngOperation& op, std::uint32_t nbits) {
        op.bits_yield = nbits;
        harvested_bits_ += nbits;
        std::vector<std::uint64_t> words((nbits + 63) / 64);
        for (std::size_t w = 0; w < words.size(); ++w)
            words[w] = splitmix64(cfg_.bits_source_seed ^ splitmix64(op.seq * 0x10001ULL + w));
        if (nbits % 64 && !words.empty()) words.back() &= (1ULL << (nbits % 64)) - 1;
        return words;
    }

    std::uint64_t harvested_bits() const { return harvested_bits_; }
    std::uint64_t ops_issued() const { return next_seq_; }

  private:
    TrngConfig cfg_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t harvested_bits_ = 0;
};

}  // namespace rngsim
