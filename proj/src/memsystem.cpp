#include "rngsim/memsystem.hpp"

#include <algorithm>
#include <climits>

namespace rngsim {

namespace {

void erase_req(std::deque<ReqPtr>& q, const ReqPtr& req) {
    for (auto it = q.begin(); it != q.end(); ++it) {
        if ((*it)->id == req->id) {
            q.erase(it);
            return;
        }
    }
}

bool contains(const std::deque<ReqPtr>& q, const ReqPtr& req) {
    for (const auto& r : q)
        if (r->id == req->id) return true;
    return false;
}

}  // namespace

MemorySystem::MemorySystem(const SimConfig& cfg)
    : cfg_(cfg),
      amap_(cfg.dram),
      dram_(cfg.dram),
      trng_(cfg.trng),
      buffer_(cfg.buffer.policy == BufferPolicy::None ? 0 : cfg.buffer.entries) {
    buffer_enabled_ = cfg_.buffer.policy != BufferPolicy::None && cfg_.buffer.entries > 0;
    int cores = static_cast<int>(std::max<size_t>(cfg_.workload.size(), 16));
    ctls_.resize(cfg_.dram.channels);
    for (int i = 0; i < cfg_.dram.channels; ++i) {
        ctls_[i].id = i;
        ctls_[i].blacklist.assign(cores, 0);
        ctls_[i].rng_app.assign(cores, 0);
        simple_pred_.emplace_back(cfg_.buffer.table_entries, cfg_.buffer.period_threshold);
        qagents_.emplace_back(cfg_.buffer.rl_alpha, cfg_.buffer.period_threshold);
    }
}

ReqPtr MemorySystem::make_request(int core, ReqKind kind, std::uint64_t addr,
                                  std::uint64_t core_cycle) {
    auto req = std::make_shared<MemRequest>();
    req->id = next_id_++;
    req->core = core;
    req->kind = kind;
    req->addr = addr;
    req->arrival_core_cycle = core_cycle;
    if (kind != ReqKind::RngRead) {
        RNGSIM_CHECK(amap_.in_range(addr, cfg_.usable_rows_per_bank()),
                     "request address out of configured range: 0x" << std::hex << addr);
        DramCoord c = amap_.decode(addr);
        req->channel = c.channel;
        req->bank = c.bank;
        req->row = c.row;
        req->col = c.col;
    }
    return req;
}

int MemorySystem::priority_of(int core) const {
    const auto& p = cfg_.sched.priorities;
    if (core >= 0 && static_cast<size_t>(core) < p.size()) return p[core];
    return 1;
}

bool MemorySystem::regular_quiescent(int ch, Cycle now) const {
    const ChannelCtl& c = ctls_[ch];
    size_t regular_reads = c.read_q.size() - static_cast<size_t>(c.rng_reads_in_read_q);
    return regular_reads == 0 && c.write_q.empty() &&
           dram_.regular_data_quiescent(ch, now) && !dram_.refreshing(ch, now);
}

DramCmd MemorySystem::next_cmd(const MemRequest& r) const {
    const BankState& b = dram_.bank(r.channel, r.bank);
    if (b.open_row == BankState::kClosed) return DramCmd::ACT;
    if (b.open_row == r.row) return r.kind == ReqKind::Write ? DramCmd::WR : DramCmd::RD;
    return DramCmd::PRE;
}

bool MemorySystem::read_issuable(const MemRequest& r, Cycle now) const {
    return dram_.can_issue(next_cmd(r), r.channel, r.bank, now);
}

bool MemorySystem::rng_pickable(int ch) const {
    return !ondemand_ && dram_.mode(ch) == ChannelMode::RegularExecution &&
           !ctls_[ch].low_util_stall;
}

void MemorySystem::record_event(const ReqPtr& req) {
    if (!cfg_.record_events) return;
    events_.push_back({req->id, req->core, req->kind, req->enqueue_cycle, req->schedule_cycle,
                       req->completion, req->served_from_buffer});
}

void MemorySystem::remove_from_queues(const ReqPtr& req) {
    for (auto& c : ctls_) {
        if (req->kind == ReqKind::RngRead) {
            erase_req(c.rng_q, req);
            if (contains(c.read_q, req)) {
                erase_req(c.read_q, req);
                --c.rng_reads_in_read_q;
            }
        } else {
            erase_req(c.read_q, req);
            erase_req(c.write_q, req);
        }
    }
}

// ---------------------------------------------------------------- arrivals

void MemorySystem::end_idle_period(int ch, Cycle now) {
    (void)now;
    ChannelCtl& c = ctls_[ch];
    if (!c.idle_active) return;
    Cycle observed = c.idle_len;
    BufferPolicy p = cfg_.buffer.policy;
    if (p == BufferPolicy::SimplePredictor) {
        simple_pred_[ch].update(c.last_addr, observed);
    } else if (p == BufferPolicy::RlAgent) {
        qagents_[ch].update(c.rl_state, c.rl_action, observed);
    }
    if (c.predicted >= 0) {
        ++stats_.predictions;
        bool long_p = observed >= cfg_.buffer.period_threshold;
        bool pred_long = c.predicted == 1;
        if (pred_long == long_p)
            ++stats_.predictions_correct;
        else if (pred_long)
            ++stats_.false_positives;
        else
            ++stats_.false_negatives;
    }
    ++stats_.completed_idle_periods;
    if (cfg_.record_idle_periods)
        idle_log_.push_back({ch, c.idle_start, observed, c.predicted, c.last_addr});
    c.idle_active = false;
    c.idle_len = 0;
    c.fill_enabled = false;
    c.predicted = -1;
}

void MemorySystem::process_arrivals(Cycle now) {
    std::vector<ReqPtr> retry;
    for (auto& req : staging_) {
        if (req->kind == ReqKind::RngRead) {
            if (!req->rng_counted) {
                req->rng_counted = true;
                buffer_.count_request();
                for (auto& c : ctls_)
                    if (req->core >= 0 && static_cast<size_t>(req->core) < c.rng_app.size())
                        c.rng_app[req->core] = 1;
            }
            if (buffer_enabled_ && buffer_.can_serve()) {
                req->enqueue_cycle = now;
                req->accepted = true;
                serve_from_buffer(req, now);
                continue;
            }
            bool to_rng_q = cfg_.sched.kind == SchedulerKind::RngAware;
            std::uint32_t cap = to_rng_q ? cfg_.sched.rng_q_capacity : cfg_.sched.read_q_capacity;
            bool room = true;
            for (auto& c : ctls_)
                if ((to_rng_q ? c.rng_q.size() : c.read_q.size()) >= cap) room = false;
            if (!room) {
                retry.push_back(req);
                continue;
            }
            req->enqueue_cycle = now;
            req->accepted = true;
            for (auto& c : ctls_) {
                if (to_rng_q) {
                    c.rng_q.push_back(req);
                } else {
                    c.read_q.push_back(req);
                    ++c.rng_reads_in_read_q;
                }
            }
        } else {
            ChannelCtl& c = ctls_[req->channel];
            auto& q = req->kind == ReqKind::Write ? c.write_q : c.read_q;
            std::uint32_t cap = req->kind == ReqKind::Write ? cfg_.sched.write_q_capacity
                                                            : cfg_.sched.read_q_capacity;
            if (q.size() >= cap) {
                retry.push_back(req);
                continue;
            }
            req->enqueue_cycle = now;
            req->accepted = true;
            end_idle_period(req->channel, now);
            c.last_addr = req->addr;
            q.push_back(req);
        }
    }
    staging_ = std::move(retry);
}

// ------------------------------------------------------------- completions

void MemorySystem::finish_batch(int ch, Cycle now) {
    ChannelCtl& c = ctls_[ch];
    std::uint64_t store = std::min<std::uint64_t>(cfg_.trng.batch_bits_per_channel, buffer_.space());
    auto words = trng_.harvest_bits(c.batch_op, static_cast<std::uint32_t>(store));
    buffer_.deposit(words, store);
    bool was_low_util = c.batch_low_util;
    c.batch_active = false;
    c.batch_low_util = false;
    if (was_low_util) {
        c.low_util_stall = false;
        c.low_util_armed = false;  // re-armed when a read from this channel is serviced
        dram_.set_mode(ChannelMode::RegularExecution, ch, now);
        return;
    }
    bool chain = c.fill_enabled && c.idle_active && regular_quiescent(ch, now) &&
                 buffer_.has_space() && !ondemand_;
    if (chain) {
        c.batch_op = trng_.make_idle_batch(ch, now);
        c.batch_active = true;
        c.batch_finish = c.batch_op.finish;
        dram_.channel(ch).rng_busy_until = c.batch_op.finish;
        ++stats_.idle_batches;
    } else {
        dram_.set_mode(ChannelMode::RegularExecution, ch, now);
    }
}

void MemorySystem::process_completions(Cycle now) {
    if (ondemand_ && ondemand_->started && ondemand_->finish == now) {
        std::uint32_t excess = cfg_.trng.ondemand_bits - 64;
        std::uint64_t excess_stored =
            buffer_enabled_ ? std::min<std::uint64_t>(excess, buffer_.space()) : 0;
        auto words =
            trng_.harvest_bits(ondemand_->op, static_cast<std::uint32_t>(64 + excess_stored));
        if (excess_stored) {
            std::vector<std::uint64_t> tail(words.begin() + 1, words.end());
            buffer_.deposit(tail, excess_stored);
        }
        ondemand_->req->completion = now;
        stats_.bits_to_ondemand += 64;
        record_event(ondemand_->req);
        for (int i = 0; i < num_channels(); ++i)
            dram_.set_mode(ChannelMode::RegularExecution, i, now);
        ondemand_.reset();
    }
    for (int ch = 0; ch < num_channels(); ++ch) {
        if (ctls_[ch].batch_active && ctls_[ch].batch_finish == now) finish_batch(ch, now);
    }
}

void MemorySystem::serve_from_buffer(const ReqPtr& req, Cycle now) {
    buffer_.serve_word();
    req->served_from_buffer = true;
    if (req->schedule_cycle == kPending) req->schedule_cycle = now;
    req->completion = now + 1;  // buffer-hit latency
    record_event(req);
}

void MemorySystem::pend_serve(Cycle now) {
    if (!buffer_enabled_) return;
    while (buffer_.can_serve()) {
        ReqPtr target;
        if (ondemand_ && !ondemand_->started) target = ondemand_->req;
        for (auto& c : ctls_) {
            if (!c.rng_q.empty() && (!target || c.rng_q.front()->id < target->id))
                target = c.rng_q.front();
            for (auto& r : c.read_q)
                if (r->kind == ReqKind::RngRead && (!target || r->id < target->id)) target = r;
        }
        if (!target) break;
        if (ondemand_ && !ondemand_->started && target->id == ondemand_->req->id) {
            ondemand_.reset();
        }
        remove_from_queues(target);
        serve_from_buffer(target, now);
        for (auto& c : ctls_) {
            c.rng_served = true;
            if (c.depr == 2) {
                c.stall_counter = 0;
                c.force_pending = false;
            }
        }
    }
}

void MemorySystem::try_start_ondemand(Cycle now) {
    if (!ondemand_ || ondemand_->started) return;
    for (int i = 0; i < num_channels(); ++i) {
        if (dram_.mode(i) != ChannelMode::RegularExecution) return;
        if (ctls_[i].batch_active) return;
        if (!dram_.regular_data_quiescent(i, now)) return;
        if (dram_.refreshing(i, now)) return;
    }
    ondemand_->op = trng_.make_ondemand(num_channels(), now);
    ondemand_->started = true;
    ondemand_->finish = ondemand_->op.finish;
    for (int i = 0; i < num_channels(); ++i) {
        dram_.set_mode(ChannelMode::RngMode, i, now);
        dram_.channel(i).rng_busy_until = ondemand_->finish;
    }
    ++stats_.ondemand_ops;
}

void MemorySystem::trigger_ondemand(const ReqPtr& req, Cycle now) {
    RNGSIM_CHECK(!ondemand_, "overlapping on-demand generation");
    req->schedule_cycle = now;
    remove_from_queues(req);
    OnDemand od;
    od.req = req;
    od.trigger = now;
    ondemand_ = od;
    for (auto& c : ctls_) {
        c.rng_served = true;
        if (c.depr == 2) {
            c.stall_counter = 0;
            c.force_pending = false;
        }
    }
    try_start_ondemand(now);
}

// --------------------------------------------------------------- scheduling

ReqPtr MemorySystem::choose_frfcfs_cap(int ch, std::deque<ReqPtr>& q, Cycle now, bool rng_ok) {
    ChannelCtl& c = ctls_[ch];
    ReqPtr best_hit, oldest;
    for (auto& r : q) {
        bool ok;
        bool hit = false;
        if (r->kind == ReqKind::RngRead) {
            ok = rng_ok;
        } else {
            ok = read_issuable(*r, now);
            hit = ok && dram_.bank(ch, r->bank).open_row == r->row;
        }
        if (!ok) continue;
        if (hit) {
            bool capped = c.streak_bank == r->bank && c.streak_row == r->row &&
                          c.streak >= cfg_.sched.column_cap;
            if (!capped && (!best_hit || r->id < best_hit->id)) best_hit = r;
        }
        if (!oldest || r->id < oldest->id) oldest = r;
    }
    return best_hit ? best_hit : oldest;
}

ReqPtr MemorySystem::choose_bliss(int ch, Cycle now, bool rng_ok) {
    ChannelCtl& c = ctls_[ch];
    ReqPtr best;
    int b_black = 0;
    bool b_hit = false;
    for (auto& r : c.read_q) {
        bool ok;
        bool hit = false;
        if (r->kind == ReqKind::RngRead) {
            ok = rng_ok;
        } else {
            ok = read_issuable(*r, now);
            hit = ok && dram_.bank(ch, r->bank).open_row == r->row;
        }
        if (!ok) continue;
        int black = (r->core >= 0 && static_cast<size_t>(r->core) < c.blacklist.size() &&
                     c.blacklist[r->core])
                        ? 1
                        : 0;
        bool better;
        if (!best)
            better = true;
        else if (black != b_black)
            better = black < b_black;  // non-blacklisted first
        else if (hit != b_hit)
            better = hit;  // then row hits
        else
            better = r->id < best->id;  // then oldest
        if (better) {
            best = r;
            b_black = black;
            b_hit = hit;
        }
    }
    return best;
}

void MemorySystem::issue_for(int ch, const ReqPtr& req, Cycle now) {
    if (req->kind == ReqKind::RngRead) {
        trigger_ondemand(req, now);
        return;
    }
    ChannelCtl& c = ctls_[ch];
    DramCmd cmd = next_cmd(*req);
    Cycle done = dram_.issue(cmd, ch, req->bank, req->row, now);
    if (cmd != DramCmd::RD && cmd != DramCmd::WR) return;  // request stays queued
    req->schedule_cycle = now;
    req->completion = done;
    if (c.streak_bank == req->bank && c.streak_row == req->row) {
        ++c.streak;
    } else {
        c.streak_bank = req->bank;
        c.streak_row = req->row;
        c.streak = 1;
    }
    if (cfg_.sched.kind == SchedulerKind::Bliss) {
        if (c.bliss_last_core == req->core) {
            ++c.bliss_streak;
        } else {
            c.bliss_last_core = req->core;
            c.bliss_streak = 1;
        }
        if (c.bliss_streak >= cfg_.sched.bliss_blacklist_threshold &&
            static_cast<size_t>(req->core) < c.blacklist.size())
            c.blacklist[req->core] = 1;
    }
    if (req->kind == ReqKind::Write) {
        erase_req(c.write_q, req);
    } else {
        erase_req(c.read_q, req);
        c.read_served = true;
        c.low_util_armed = true;
        if (c.depr == 1) {
            c.stall_counter = 0;
            c.force_pending = false;
        }
    }
    record_event(req);
}

MemorySystem::RngCase MemorySystem::evaluate_case(int ch) const {
    const ChannelCtl& c = ctls_[ch];
    bool has_rng = !c.rng_q.empty();
    size_t regular_reads = c.read_q.size() - static_cast<size_t>(c.rng_reads_in_read_q);
    if (!has_rng && regular_reads == 0) return RngCase::None;
    if (!has_rng) return RngCase::RegularOnly;
    if (regular_reads == 0) return RngCase::RngOnly;
    int m_rng = INT_MIN, m_nonrng = INT_MIN;
    for (const auto& r : c.rng_q) m_rng = std::max(m_rng, priority_of(r->core));
    for (const auto& r : c.read_q) {
        if (r->kind == ReqKind::RngRead) continue;
        if (r->core >= 0 && static_cast<size_t>(r->core) < c.rng_app.size() && c.rng_app[r->core])
            continue;
        m_nonrng = std::max(m_nonrng, priority_of(r->core));
    }
    if (m_nonrng == INT_MIN) return RngCase::A;  // only RNG apps' regular reads wait
    if (m_rng > m_nonrng) return RngCase::A;
    if (m_nonrng > m_rng) return RngCase::B;
    return RngCase::C;
}

void MemorySystem::schedule_channel(int ch, Cycle now) {
    ChannelCtl& c = ctls_[ch];
    if (cfg_.sched.kind == SchedulerKind::Bliss &&
        now % cfg_.sched.bliss_clearing_interval == 0) {
        std::fill(c.blacklist.begin(), c.blacklist.end(), 0);
        c.bliss_streak = 0;
        c.bliss_last_core = -1;
    }
    if (cfg_.dram.refresh_enable) {
        if (now > 0 && now % cfg_.dram.refresh_interval == 0) c.pending_refresh = true;
        if (c.pending_refresh && dram_.mode(ch) == ChannelMode::RegularExecution &&
            !c.batch_active && dram_.regular_data_quiescent(ch, now) && !ondemand_ &&
            !dram_.refreshing(ch, now)) {
            dram_.start_refresh(ch, now, cfg_.dram.refresh_cycles);
            c.pending_refresh = false;
        }
    }
    size_t wq = c.write_q.size();
    size_t hi = (cfg_.sched.write_q_capacity * 8 + 9) / 10;  // >= 80% full
    size_t lo = cfg_.sched.write_q_capacity * 2 / 10;        // <= 20% full
    if (c.write_drain && wq <= lo) c.write_drain = false;
    if (!c.write_drain && wq >= hi) c.write_drain = true;

    if (dram_.mode(ch) != ChannelMode::RegularExecution || ondemand_ || c.low_util_stall ||
        dram_.refreshing(ch, now))
        return;

    bool drain_now = c.write_drain || (c.read_q.empty() && !c.write_q.empty());

    if (cfg_.sched.kind == SchedulerKind::RngAware) {
        RngCase rc = evaluate_case(ch);
        bool force_regular = c.force_pending && c.depr == 1;
        bool force_rng = c.force_pending && c.depr == 2;
        bool choose_rng = false;
        switch (rc) {
            case RngCase::RngOnly:
                choose_rng = true;
                break;
            case RngCase::A:
                choose_rng = !force_regular;
                break;
            case RngCase::B: {
                if (force_rng) {
                    choose_rng = true;
                    break;
                }
                // switch only to drain RNG requests older than the oldest
                // regular read when that read belongs to an RNG application
                ReqPtr oldest_rd;
                for (auto& r : c.read_q)
                    if (r->kind != ReqKind::RngRead && (!oldest_rd || r->id < oldest_rd->id))
                        oldest_rd = r;
                const ReqPtr& oldest_rng = c.rng_q.front();
                choose_rng = oldest_rd && static_cast<size_t>(oldest_rd->core) < c.rng_app.size() &&
                             c.rng_app[oldest_rd->core] && oldest_rd->id > oldest_rng->id;
                break;
            }
            case RngCase::C:
                choose_rng = !c.rng_q.empty();
                break;
            default:
                break;
        }
        if (choose_rng && !c.rng_q.empty()) {
            trigger_ondemand(c.rng_q.front(), now);
            return;
        }
        if (force_regular) {
            ReqPtr pick = choose_frfcfs_cap(ch, c.read_q, now, false);
            if (pick) issue_for(ch, pick, now);
            return;  // only the deprioritized queue may be serviced while forced
        }
        if (!drain_now) {
            ReqPtr pick = choose_frfcfs_cap(ch, c.read_q, now, false);
            if (pick) issue_for(ch, pick, now);
            return;
        }
        ReqPtr pick = choose_frfcfs_cap(ch, c.write_q, now, false);
        if (pick) issue_for(ch, pick, now);
        return;
    }

    // RNG-oblivious baselines: RngReads live in the read queue
    if (!drain_now) {
        ReqPtr pick = cfg_.sched.kind == SchedulerKind::Bliss
                          ? choose_bliss(ch, now, rng_pickable(ch))
                          : choose_frfcfs_cap(ch, c.read_q, now, rng_pickable(ch));
        if (!pick) return;
        if (pick->kind == ReqKind::RngRead) {
            // scheduling an RNG generation counts as a service of its core
            if (cfg_.sched.kind == SchedulerKind::Bliss) {
                if (c.bliss_last_core == pick->core) {
                    ++c.bliss_streak;
                } else {
                    c.bliss_last_core = pick->core;
                    c.bliss_streak = 1;
                }
                if (c.bliss_streak >= cfg_.sched.bliss_blacklist_threshold &&
                    static_cast<size_t>(pick->core) < c.blacklist.size())
                    c.blacklist[pick->core] = 1;
            }
            c.streak_bank = -1;
            c.streak_row = BankState::kClosed;
            c.streak = 0;
            trigger_ondemand(pick, now);
            return;
        }
        issue_for(ch, pick, now);
        return;
    }
    ReqPtr pick = choose_frfcfs_cap(ch, c.write_q, now, false);
    if (pick) issue_for(ch, pick, now);
}

// -------------------------------------------------------------- fill policy

void MemorySystem::start_batch(int ch, Cycle now, bool low_util) {
    ChannelCtl& c = ctls_[ch];
    RNGSIM_CHECK(!c.batch_active && dram_.mode(ch) == ChannelMode::RegularExecution,
                 "batch start while channel busy");
    dram_.set_mode(ChannelMode::RngMode, ch, now);
    c.batch_op = trng_.make_idle_batch(ch, now);
    c.batch_active = true;
    c.batch_low_util = low_util;
    c.batch_finish = c.batch_op.finish;
    dram_.channel(ch).rng_busy_until = c.batch_op.finish;
    if (low_util)
        ++stats_.lowutil_batches;
    else
        ++stats_.idle_batches;
}

void MemorySystem::fill_policy_phase(int ch, Cycle now) {
    ChannelCtl& c = ctls_[ch];
    BufferPolicy p = cfg_.buffer.policy;
    bool quiet = regular_quiescent(ch, now);
    if (!c.idle_active && quiet) {
        c.idle_active = true;
        c.idle_start = now;
        c.idle_len = 0;
        c.predicted = -1;
        c.fill_enabled = false;
        switch (p) {
            case BufferPolicy::SimpleBuffering:
                c.fill_enabled = true;
                break;
            case BufferPolicy::SimplePredictor: {
                bool lng = simple_pred_[ch].predict_long(c.last_addr);
                c.predicted = lng ? 1 : 0;
                c.fill_enabled = lng;
                break;
            }
            case BufferPolicy::RlAgent: {
                c.rl_state = qagents_[ch].state_of(c.last_addr);
                c.rl_action = qagents_[ch].choose(c.rl_state);
                bool lng = c.rl_action == RlAction::Generate;
                c.predicted = lng ? 1 : 0;
                c.fill_enabled = lng;
                break;
            }
            default:
                break;  // None / GreedyOracle: no RngMode fill batches
        }
    }
    if (c.idle_active) {
        ++c.idle_len;
        if (p == BufferPolicy::GreedyOracle && c.idle_len % cfg_.buffer.period_threshold == 0 &&
            buffer_.space() > 0) {
            // oracle fill: 8 bits at zero cost, no RngMode occupancy
            RngOperation op = trng_.make_idle_batch(ch, now);
            op.finish = now;
            std::uint64_t store = std::min<std::uint64_t>(8, buffer_.space());
            auto words = trng_.harvest_bits(op, static_cast<std::uint32_t>(store));
            buffer_.deposit(words, store);
            ++stats_.greedy_fills;
        }
    }
    if (ondemand_) return;  // channels must quiesce for the global operation
    if (dram_.mode(ch) != ChannelMode::RegularExecution || c.batch_active) return;
    if (dram_.refreshing(ch, now)) return;

    if (c.idle_active && c.fill_enabled && quiet && buffer_.has_space()) {
        start_batch(ch, now, false);
        return;
    }
    if (p == BufferPolicy::SimplePredictor && cfg_.buffer.low_util_threshold > 0) {
        size_t occ = c.read_q.size() - static_cast<size_t>(c.rng_reads_in_read_q);
        if (c.low_util_stall) {
            if (occ == 0 || occ >= cfg_.buffer.low_util_threshold) {
                c.low_util_stall = false;  // condition lapsed before the batch began
            } else if (dram_.regular_data_quiescent(ch, now)) {
                start_batch(ch, now, true);
            }
        } else if (c.low_util_armed && occ > 0 && occ < cfg_.buffer.low_util_threshold &&
                   buffer_.has_space() && simple_pred_[ch].predict_long(c.last_addr)) {
            c.low_util_stall = true;
            if (dram_.regular_data_quiescent(ch, now)) start_batch(ch, now, true);
        }
    }
}

// ------------------------------------------------- starvation & accounting

void MemorySystem::starvation_phase(int ch, Cycle now) {
    (void)now;
    if (cfg_.sched.kind != SchedulerKind::RngAware) return;
    ChannelCtl& c = ctls_[ch];
    RngCase rc = evaluate_case(ch);
    int depr = rc == RngCase::A ? 1 : rc == RngCase::B ? 2 : 0;
    if (depr != c.depr) {
        c.depr = depr;
        c.stall_counter = 0;
        c.force_pending = false;
    }
    bool depr_nonempty = (c.depr == 1 && c.read_q.size() > static_cast<size_t>(c.rng_reads_in_read_q)) ||
                         (c.depr == 2 && !c.rng_q.empty());
    if (c.depr != 0 && depr_nonempty) {
        if (c.stall_counter < cfg_.sched.stall_limit) ++c.stall_counter;
        if (c.stall_counter >= cfg_.sched.stall_limit) c.force_pending = true;
    }
}

void MemorySystem::accounting_phase(int ch, Cycle now) {
    ChannelCtl& c = ctls_[ch];
    // liveness trackers: a queue holding an issuable request must be served
    // within stall_limit consecutive such cycles
    bool read_issuable_any = false;
    if (dram_.mode(ch) == ChannelMode::RegularExecution && !dram_.refreshing(ch, now)) {
        for (auto& r : c.read_q) {
            if (r->kind == ReqKind::RngRead) continue;
            if (read_issuable(*r, now)) {
                read_issuable_any = true;
                break;
            }
        }
    }
    if (read_issuable_any && !c.read_served) {
        ++c.read_wait;
        c.max_read_wait = std::max(c.max_read_wait, c.read_wait);
    } else {
        c.read_wait = 0;
    }
    bool rng_waiting = !c.rng_q.empty() || c.rng_reads_in_read_q > 0;
    bool rng_issuable_any = rng_waiting && rng_pickable(ch);
    if (rng_issuable_any && !c.rng_served) {
        ++c.rng_wait;
        c.max_rng_wait = std::max(c.max_rng_wait, c.rng_wait);
    } else {
        c.rng_wait = 0;
    }

    // exact partition of elapsed cycles per channel
    if (dram_.mode(ch) == ChannelMode::RngMode) {
        ++c.rng_mode_cycles;
    } else if (c.read_q.size() > static_cast<size_t>(c.rng_reads_in_read_q) ||
               !c.write_q.empty() || !dram_.regular_data_quiescent(ch, now) ||
               dram_.refreshing(ch, now)) {
        ++c.busy_regular_cycles;
    } else if (rng_waiting || ondemand_) {
        ++c.rng_wait_cycles;
    } else {
        ++c.idle_cycles;
    }
}

std::uint64_t MemorySystem::max_read_wait() const {
    std::uint64_t m = 0;
    for (const auto& c : ctls_) m = std::max<std::uint64_t>(m, c.max_read_wait);
    return m;
}

std::uint64_t MemorySystem::max_rng_wait() const {
    std::uint64_t m = 0;
    for (const auto& c : ctls_) m = std::max<std::uint64_t>(m, c.max_rng_wait);
    return m;
}

void MemorySystem::tick(Cycle now) {
    RNGSIM_CHECK(last_tick_ == kPending ? now == 0 : now == last_tick_ + 1,
                 "bus cycles must advance by exactly 1");
    last_tick_ = now;
    for (auto& c : ctls_) {
        c.read_served = false;
        c.rng_served = false;
    }
    process_arrivals(now);
    process_completions(now);
    pend_serve(now);
    try_start_ondemand(now);
    for (int ch = 0; ch < num_channels(); ++ch) schedule_channel(ch, now);
    for (int ch = 0; ch < num_channels(); ++ch) fill_policy_phase(ch, now);
    for (int ch = 0; ch < num_channels(); ++ch) starvation_phase(ch, now);
    for (int ch = 0; ch < num_channels(); ++ch) accounting_phase(ch, now);
    for (const auto& c : ctls_) {
        RNGSIM_CHECK(c.read_q.size() <= cfg_.sched.read_q_capacity &&
                         c.write_q.size() <= cfg_.sched.write_q_capacity &&
                         c.rng_q.size() <= cfg_.sched.rng_q_capacity,
                     "queue capacity exceeded on channel " << c.id);
        RNGSIM_CHECK(c.stall_counter <= cfg_.sched.stall_limit, "stall counter out of range");
    }
}

}  // namespace rngsim
