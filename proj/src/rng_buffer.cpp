#include "rngsim/rng_buffer.hpp"

#include <algorithm>

namespace rngsim {

// tail_bits_ == 0 means the back word is full (or the deque is empty).
std::uint64_t BitFifo::push_bits(const std::vector<std::uint64_t>& words, std::uint64_t nbits) {
    std::uint64_t to_store = std::min<std::uint64_t>(nbits, space());
    for (std::uint64_t i = 0; i < to_store; ++i) {
        std::uint64_t b = (words[i / 64] >> (i % 64)) & 1ULL;
        if (tail_bits_ == 0) words_.push_back(0);
        words_.back() |= b << tail_bits_;
        tail_bits_ = (tail_bits_ + 1) % 64;
    }
    size_ += to_store;
    return to_store;
}

std::uint64_t BitFifo::pop_word() {
    RNGSIM_CHECK(size_ >= 64, "bit fifo underflow");
    std::uint64_t out = 0;
    for (int i = 0; i < 64; ++i) {
        std::uint64_t b = (words_.front() >> head_bit_) & 1ULL;
        out |= b << i;
        if (++head_bit_ == 64) {
            head_bit_ = 0;
            words_.pop_front();
        }
    }
    size_ -= 64;
    if (size_ == 0) {
        words_.clear();
        head_bit_ = 0;
        tail_bits_ = 0;
    }
    return out;
}

}  // namespace rngsim
