#include "rngsim/dram.hpp"

#include <algorithm>

namespace rngsim {

AddressMapper::AddressMapper(const DramConfig& cfg) : map_(cfg.address_map) {
    ch_shift_ = map_.offset_bits;
    col_shift_ = ch_shift_ + map_.channel_bits;
    bank_shift_ = col_shift_ + map_.column_bits;
    row_shift_ = bank_shift_ + map_.bank_bits;
    auto mask = [](int bits) { return bits >= 64 ? ~0ULL : (1ULL << bits) - 1; };
    ch_mask_ = mask(map_.channel_bits);
    col_mask_ = mask(map_.column_bits);
    bank_mask_ = mask(map_.bank_bits);
    row_mask_ = mask(map_.row_bits);
}

DramCoord AddressMapper::decode(std::uint64_t addr) const {
    DramCoord c;
    c.channel = static_cast<int>((addr >> ch_shift_) & ch_mask_);
    c.col = static_cast<std::uint32_t>((addr >> col_shift_) & col_mask_);
    c.bank = static_cast<int>((addr >> bank_shift_) & bank_mask_);
    c.row = static_cast<std::uint32_t>((addr >> row_shift_) & row_mask_);
    return c;
}

std::uint64_t AddressMapper::encode(const DramCoord& c) const {
    return (static_cast<std::uint64_t>(c.channel) << ch_shift_) |
           (static_cast<std::uint64_t>(c.col) << col_shift_) |
           (static_cast<std::uint64_t>(c.bank) << bank_shift_) |
           (static_cast<std::uint64_t>(c.row) << row_shift_);
}

bool AddressMapper::in_range(std::uint64_t addr, std::uint32_t usable_rows) const {
    if (addr >= address_space_bytes()) return false;
    return decode(addr).row < usable_rows;
}

DramModel::DramModel(const DramConfig& cfg) : timing_(cfg.timing) {
    channels_.resize(cfg.channels);
    for (auto& ch : channels_) ch.banks.resize(cfg.banks_per_channel());
}

bool DramModel::can_issue(DramCmd cmd, int channel, int bank, Cycle now) const {
    const ChannelState& ch = channels_[channel];
    // RngMode blocks every regular command on the channel
    if (ch.mode == ChannelMode::RngMode) return false;
    if (ch.refresh_busy_until > now) return false;
    const BankState& b = ch.banks[bank];
    switch (cmd) {
        case DramCmd::ACT: {
            if (b.open_row != BankState::kClosed) return false;
            if (now < b.next_act || now < ch.next_act_any) return false;
            if (ch.act_window.size() >= 4 && now < ch.act_window.front() + timing_.tFAW)
                return false;
            return true;
        }
        case DramCmd::RD:
            return b.open_row != BankState::kClosed && now >= b.next_rdwr &&
                   now >= ch.next_col && now >= ch.next_rd_after_wr &&
                   now + timing_.tCL >= ch.data_bus_busy_until;
        case DramCmd::WR:
            return b.open_row != BankState::kClosed && now >= b.next_rdwr &&
                   now >= ch.next_col && now + timing_.tCL >= ch.data_bus_busy_until;
        case DramCmd::PRE:
            return b.open_row != BankState::kClosed && now >= b.next_pre;
    }
    return false;
}

Cycle DramModel::issue(DramCmd cmd, int channel, int bank, std::uint32_t row, Cycle now) {
    RNGSIM_CHECK(can_issue(cmd, channel, bank, now),
                 "illegal command issue on channel " << channel << " bank " << bank
                                                     << " at cycle " << now);
    ChannelState& ch = channels_[channel];
    BankState& b = ch.banks[bank];
    switch (cmd) {
        case DramCmd::ACT:
            b.open_row = row;
            b.next_rdwr = std::max(b.next_rdwr, now + timing_.tRCD);
            b.next_pre = std::max(b.next_pre, now + timing_.tRAS);
            b.next_act = std::max(b.next_act, now + timing_.tRC);
            ch.next_act_any = std::max(ch.next_act_any, now + timing_.tRRD);
            ch.act_window.push_back(now);
            while (ch.act_window.size() > 4) ch.act_window.pop_front();
            return 0;
        case DramCmd::RD: {
            Cycle done = now + timing_.tCL + timing_.tBL;
            b.next_pre = std::max(b.next_pre, now + timing_.tRTP);
            ch.next_col = std::max(ch.next_col, now + timing_.tCCD);
            ch.data_bus_busy_until = std::max(ch.data_bus_busy_until, done);
            return done;
        }
        case DramCmd::WR: {
            Cycle data_end = now + timing_.tCL + timing_.tBL;
            b.next_pre = std::max(b.next_pre, data_end + timing_.tWR);
            ch.next_rd_after_wr = std::max(ch.next_rd_after_wr, data_end + timing_.tWTR);
            ch.next_col = std::max(ch.next_col, now + timing_.tCCD);
            ch.data_bus_busy_until = std::max(ch.data_bus_busy_until, data_end);
            return data_end;
        }
        case DramCmd::PRE:
            b.open_row = BankState::kClosed;
            b.next_act = std::max(b.next_act, now + timing_.tRP);
            return 0;
    }
    return 0;
}

void DramModel::set_mode(ChannelMode m, int channel, Cycle now) {
    ChannelState& ch = channels_[channel];
    if (m == ChannelMode::RngMode) {
        RNGSIM_CHECK(ch.data_bus_busy_until <= now,
                     "RngMode entered with regular data in flight on channel " << channel);
    }
    ch.mode = m;
}

bool DramModel::channel_idle(int channel, Cycle now, bool queues_empty) const {
    const ChannelState& ch = channels_[channel];
    if (!queues_empty) return false;
    if (ch.mode == ChannelMode::RngMode && ch.rng_busy_until > now) return false;
    if (ch.data_bus_busy_until > now) return false;
    if (ch.refresh_busy_until > now) return false;
    return true;
}

void DramModel::start_refresh(int channel, Cycle now, Cycle duration) {
    ChannelState& ch = channels_[channel];
    ch.refresh_busy_until = now + duration;
    for (auto& b : ch.banks) {
        b.open_row = BankState::kClosed;
        b.next_act = std::max(b.next_act, now + duration);
    }
}

}  // namespace rngsim
