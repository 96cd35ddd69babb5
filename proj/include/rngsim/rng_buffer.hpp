#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <vector>

#include "rngsim/config.hpp"
#include "rngsim/types.hpp"

namespace rngsim {

// Bit FIFO backing the random number buffer. Bits are enqueued in harvest
// order and dequeued at most once.
class BitFifo {
  public:
    void set_capacity(std::uint64_t bits) { capacity_ = bits; }
    std::uint64_t capacity() const { return capacity_; }
    std::uint64_t occupancy() const { return size_; }
    std::uint64_t space() const { return capacity_ - size_; }
    bool full() const { return size_ >= capacity_; }

    // appends up to `nbits` from `words`; returns bits actually stored
    std::uint64_t push_bits(const std::vector<std::uint64_t>& words, std::uint64_t nbits);
    // pre: occupancy() >= 64
    std::uint64_t pop_word();

  private:
    std::uint64_t capacity_ = 0;
    std::uint64_t size_ = 0;
    std::deque<std::uint64_t> words_;
    std::uint32_t head_bit_ = 0;   // consumed bits of words_.front()
    std::uint32_t tail_bits_ = 0;  // valid bits in words_.back() (0 => full/none)
};

// The memory-controller random number buffer with serve accounting.
class RandomNumberBuffer {
  public:
    RandomNumberBuffer() = default;
    explicit RandomNumberBuffer(std::uint32_t entries) { fifo_.set_capacity(entries * 64ULL); }

    std::uint64_t occupancy() const { return fifo_.occupancy(); }
    std::uint64_t capacity() const { return fifo_.capacity(); }
    std::uint64_t space() const { return fifo_.space(); }
    bool full() const { return fifo_.full(); }
    bool has_space() const { return fifo_.space() > 0; }
    bool can_serve() const { return fifo_.occupancy() >= 64; }

    std::uint64_t deposit(const std::vector<std::uint64_t>& words, std::uint64_t nbits) {
        std::uint64_t stored = fifo_.push_bits(words, nbits);
        bits_deposited_ += stored;
        return stored;
    }

    // pre: can_serve(); dequeues one 64-bit word
    std::uint64_t serve_word() {
        RNGSIM_CHECK(can_serve(), "buffer serve with fewer than 64 bits");
        ++served_from_buffer_;
        bits_served_ += 64;
        return fifo_.pop_word();
    }

    void count_request() { ++total_rng_requests_; }

    std::uint64_t served_from_buffer() const { return served_from_buffer_; }
    std::uint64_t total_rng_requests() const { return total_rng_requests_; }
    std::uint64_t bits_deposited() const { return bits_deposited_; }
    std::uint64_t bits_served() const { return bits_served_; }

  private:
    BitFifo fifo_;
    std::uint64_t served_from_buffer_ = 0;
    std::uint64_t total_rng_requests_ = 0;
    std::uint64_t bits_deposited_ = 0;
    std::uint64_t bits_served_ = 0;
};

// 2-bit saturating counter.
struct SatCounter2 {
    std::uint8_t v = 0;
    void up() { if (v < 3) ++v; }
    void down() { if (v > 0) --v; }
};

// Per-channel table of 2-bit saturating counters indexed by the last
// accessed line address; >= 2 predicts a long idle period.
class SimpleIdlePredictor {
  public:
    SimpleIdlePredictor() = default;
    SimpleIdlePredictor(std::uint32_t table_entries, Cycle period_threshold)
        : counters_(table_entries), threshold_(period_threshold) {}

    std::uint32_t index_of(std::uint64_t addr) const {
        return static_cast<std::uint32_t>((addr >> 6) % counters_.size());
    }

    bool predict_long(std::uint64_t last_addr) const {
        return counters_[index_of(last_addr)].v >= 2;
    }

    void update(std::uint64_t last_addr, Cycle observed_idle_len) {
        auto& c = counters_[index_of(last_addr)];
        if (observed_idle_len >= threshold_) c.up(); else c.down();
    }

    std::uint8_t counter(std::uint32_t idx) const { return counters_[idx].v; }
    void set_counter(std::uint32_t idx, std::uint8_t v) { counters_[idx].v = v; }
    Cycle threshold() const { return threshold_; }

  private:
    std::vector<SatCounter2> counters_;
    Cycle threshold_ = 40;
};

enum class RlAction : int { Generate = 0, Wait = 1 };

// Q-learning idleness predictor: 1024 states x {Generate, Wait}; the state is
// the last accessed line address's low 10 bits XORed with a 10-bit history of
// idle-period classes (1 = long).
class QAgentPredictor {
  public:
    QAgentPredictor() = default;
    QAgentPredictor(double alpha, Cycle period_threshold)
        : alpha_(alpha), threshold_(period_threshold) {}

    std::uint32_t state_of(std::uint64_t last_addr) const {
        std::uint64_t line_bits = ((last_addr & ~63ULL) >> 6) & 0x3FFULL;  // addr bits [15:6]
        return static_cast<std::uint32_t>(line_bits ^ history_);
    }

    // argmax over actions; ties break toward Generate
    RlAction choose(std::uint32_t state) const {
        const auto& qs = q_[state];
        return qs[0] >= qs[1] ? RlAction::Generate : RlAction::Wait;
    }

    void update(std::uint32_t state, RlAction action, Cycle observed_idle_len) {
        bool long_period = observed_idle_len >= threshold_;
        bool correct = (action == RlAction::Generate) == long_period;
        double r = correct ? 1.0 : -1.0;
        double& q = q_[state][static_cast<int>(action)];
        q = (1.0 - alpha_) * q + alpha_ * r;
        history_ = ((history_ << 1) | (long_period ? 1 : 0)) & 0x3FF;
    }

    double q(std::uint32_t state, RlAction a) const { return q_[state][static_cast<int>(a)]; }
    void set_q(std::uint32_t state, RlAction a, double v) { q_[state][static_cast<int>(a)] = v; }
    std::uint32_t history() const { return history_; }
    void set_history(std::uint32_t h) { history_ = h & 0x3FF; }
    void scale_all(double k) {
        for (auto& row : q_) { row[0] *= k; row[1] *= k; }
    }

  private:
    double alpha_ = 0.05;
    Cycle threshold_ = 40;
    std::uint32_t history_ = 0;
    std::array<std::array<double, 2>, 1024> q_{};
};

}  // namespace rngsim
