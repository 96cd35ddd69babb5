#pragma once

#include <deque>
#include <vector>

#include "rngsim/config.hpp"
#include "rngsim/types.hpp"

namespace rngsim {

enum class DramCmd { ACT, RD, WR, PRE };

struct DramCoord {
    int channel = 0;
    int bank = 0;
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    bool operator==(const DramCoord&) const = default;
};

// Address <-> coordinate mapping over the configured bit layout.
class AddressMapper {
  public:
    AddressMapper() = default;
    explicit AddressMapper(const DramConfig& cfg);

    DramCoord decode(std::uint64_t addr) const;
    std::uint64_t encode(const DramCoord& c) const;
    bool in_range(std::uint64_t addr, std::uint32_t usable_rows) const;
    std::uint64_t address_space_bytes() const { return 1ULL << map_.total_bits(); }

  private:
    AddressMap map_;
    int ch_shift_ = 6, col_shift_ = 8, bank_shift_ = 15, row_shift_ = 18;
    std::uint64_t ch_mask_ = 0, col_mask_ = 0, bank_mask_ = 0, row_mask_ = 0;
};

struct BankState {
    static constexpr std::uint32_t kClosed = 0xFFFFFFFFu;
    std::uint32_t open_row = kClosed;
    // earliest legal issue cycle per command kind; only ever moves forward
    Cycle next_act = 0;
    Cycle next_rdwr = 0;
    Cycle next_pre = 0;
};

enum class ChannelMode { RegularExecution, RngMode };

struct ChannelState {
    std::vector<BankState> banks;
    ChannelMode mode = ChannelMode::RegularExecution;
    Cycle rng_busy_until = 0;
    Cycle data_bus_busy_until = 0;
    Cycle next_col = 0;           // tCCD across the channel
    Cycle next_rd_after_wr = 0;   // tWTR from write data end
    Cycle next_act_any = 0;       // tRRD across banks
    std::deque<Cycle> act_window;  // timestamps of recent ACTs for tFAW
    Cycle refresh_busy_until = 0;
};

// Per-channel/bank timing bookkeeping. Pure command legality plus state
// update on issue; knows nothing about queues or scheduling.
class DramModel {
  public:
    DramModel() = default;
    DramModel(const DramConfig& cfg);

    bool can_issue(DramCmd cmd, int channel, int bank, Cycle now) const;
    // pre: can_issue(...) held; returns data-transfer end for RD/WR, else 0
    Cycle issue(DramCmd cmd, int channel, int bank, std::uint32_t row, Cycle now);

    void set_mode(ChannelMode m, int channel, Cycle now);
    ChannelMode mode(int channel) const { return channels_[channel].mode; }

    // no in-flight regular data transfer (mode-switch precondition)
    bool regular_data_quiescent(int channel, Cycle now) const {
        return channels_[channel].data_bus_busy_until <= now;
    }

    // channel_idle per the spec: queue emptiness is the controller's to report
    bool channel_idle(int channel, Cycle now, bool queues_empty) const;

    void start_refresh(int channel, Cycle now, Cycle duration);
    bool refreshing(int channel, Cycle now) const {
        return channels_[channel].refresh_busy_until > now;
    }

    ChannelState& channel(int i) { return channels_[i]; }
    const ChannelState& channel(int i) const { return channels_[i]; }
    const BankState& bank(int ch, int b) const { return channels_[ch].banks[b]; }
    int num_channels() const { return static_cast<int>(channels_.size()); }
    const TimingSet& timing() const { return timing_; }

  private:
    TimingSet timing_;
    std::vector<ChannelState> channels_;
};

}  // namespace rngsim
