#include "rngsim/core.hpp"

namespace rngsim {

Core::Core(int id, const CoreConfig& cfg, const TraceFile* trace, MemoryPort& port,
           std::uint64_t clock_ratio, std::uint64_t budget)
    : id_(id), cfg_(cfg), trace_(trace), port_(port), ratio_(clock_ratio), budget_(budget) {
    RNGSIM_CHECK(trace_ && !trace_->records.empty(), "core " << id << " bound to an empty trace");
    bubbles_left_ = trace_->records[0].bubbles;
}

double Core::mcpi() const {
    if (retired_capped_ == 0)
        throw ConfigError("MCPI undefined: core " + std::to_string(id_) + " retired 0 instructions");
    return static_cast<double>(mem_stall_cycles_) / static_cast<double>(retired_capped_);
}

void Core::refill(std::uint64_t core_cycle) {
    std::uint32_t inserted = 0;
    while (inserted < cfg_.issue_width && window_.size() < cfg_.window_entries) {
        if (bubbles_left_ > 0) {
            --bubbles_left_;
            window_.push_back({nullptr});
        } else {
            const TraceRecord& rec = trace_->records[rec_idx_];
            ReqKind kind = rec.op == TraceOp::Read    ? ReqKind::Read
                           : rec.op == TraceOp::Write ? ReqKind::Write
                                                      : ReqKind::RngRead;
            ReqPtr req = port_.create(id_, kind, rec.addr, core_cycle);
            port_.send(req);  // memory ops issue when they enter the window
            window_.push_back({req});
            if (!finished_) {
                switch (kind) {
                    case ReqKind::Read: ++reads_; break;
                    case ReqKind::Write: ++writes_; break;
                    case ReqKind::RngRead: ++rng_; break;
                }
            }
            // advance to the next record, looping the trace
            rec_idx_ = (rec_idx_ + 1) % trace_->records.size();
            bubbles_left_ = trace_->records[rec_idx_].bubbles;
        }
        ++inserted;
    }
}

void Core::tick(std::uint64_t core_cycle) {
    Cycle bus_now = core_cycle / ratio_;
    std::uint32_t retired_now = 0;
    while (retired_now < cfg_.issue_width && !window_.empty()) {
        WinEntry& head = window_.front();
        if (!head.req) {  // bubble
            window_.pop_front();
            ++retired_now;
            continue;
        }
        if (head.req->kind == ReqKind::Write) {
            if (!head.req->accepted) break;  // writes retire on enqueue acceptance
            window_.pop_front();
            ++retired_now;
            continue;
        }
        if (!head.req->complete_at(bus_now)) break;  // read / RNG blocks at the head
        window_.pop_front();
        ++retired_now;
    }
    if (!finished_) {
        retired_ += retired_now;
        if (retired_now == 0 && !window_.empty() && window_.front().req &&
            window_.front().req->kind != ReqKind::Write &&
            !window_.front().req->complete_at(bus_now)) {
            ++mem_stall_cycles_;
        }
        if (retired_ >= budget_) {
            finished_ = true;
            retired_capped_ = budget_;
            cycles_to_budget_ = core_cycle + 1;
        }
    } else {
        retired_ += retired_now;
    }
    refill(core_cycle);
}

}  // namespace rngsim
