#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "rngsim/config.hpp"
#include "rngsim/dram.hpp"
#include "rngsim/rng_buffer.hpp"
#include "rngsim/trng.hpp"
#include "rngsim/types.hpp"

namespace rngsim {

struct RequestEvent {
    std::uint64_t id;
    int core;
    ReqKind kind;
    Cycle enqueue;
    Cycle schedule;
    Cycle completion;
    bool from_buffer;
};

struct IdlePeriodEvent {
    int channel;
    Cycle start;
    Cycle length;
    int predicted;  // -1 none, 0 short, 1 long
    std::uint64_t context_addr;  // last accessed address the prediction keyed on
};

// Per-channel controller state: queues, scheduler bookkeeping, fill policy
// and idle-period tracking.
struct ChannelCtl {
    int id = 0;
    std::deque<ReqPtr> read_q, write_q, rng_q;

    bool write_drain = false;

    // FR-FCFS column cap: consecutive column commands to one (bank, row)
    int streak_bank = -1;
    std::uint32_t streak_row = BankState::kClosed;
    std::uint32_t streak = 0;

    // BLISS
    int bliss_last_core = -1;
    std::uint32_t bliss_streak = 0;
    std::vector<char> blacklist;

    std::vector<char> rng_app;  // marked on first RngRead
    int rng_reads_in_read_q = 0;  // queued RngReads under the single-queue baseline

    // RNG-aware starvation prevention
    int depr = 0;  // 0 none, 1 regular deprioritized, 2 rng deprioritized
    Cycle stall_counter = 0;
    bool force_pending = false;

    // low-utilization extension
    bool low_util_armed = true;
    bool low_util_stall = false;

    // idle-period tracking / fill policy
    bool idle_active = false;
    Cycle idle_start = 0;
    Cycle idle_len = 0;
    bool fill_enabled = false;
    int predicted = -1;
    std::uint32_t rl_state = 0;
    RlAction rl_action = RlAction::Generate;
    std::uint64_t last_addr = 0;

    bool batch_active = false;
    bool batch_low_util = false;
    Cycle batch_finish = 0;
    RngOperation batch_op;

    // per-cycle service flags
    bool read_served = false;
    bool rng_served = false;

    // liveness trackers: consecutive cycles a queue held an issuable request
    // without any of its requests being serviced
    Cycle read_wait = 0, rng_wait = 0;
    Cycle max_read_wait = 0, max_rng_wait = 0;

    // cycle accounting (exact partition of elapsed cycles)
    std::uint64_t busy_regular_cycles = 0;
    std::uint64_t rng_mode_cycles = 0;
    std::uint64_t rng_wait_cycles = 0;
    std::uint64_t idle_cycles = 0;

    bool pending_refresh = false;
};

struct MemStats {
    std::uint64_t ondemand_ops = 0;
    std::uint64_t idle_batches = 0;
    std::uint64_t lowutil_batches = 0;
    std::uint64_t greedy_fills = 0;
    std::uint64_t bits_to_ondemand = 0;
    std::uint64_t predictions = 0;
    std::uint64_t predictions_correct = 0;
    std::uint64_t false_positives = 0;
    std::uint64_t false_negatives = 0;
    std::uint64_t completed_idle_periods = 0;
};

// The memory subsystem: one controller per channel, the TRNG engine, the
// random number buffer and the fill policies. Drivable either by cores (via
// submit) or directly by tests (inject + tick).
class MemorySystem {
  public:
    explicit MemorySystem(const SimConfig& cfg);

    // Stage a request; it is processed (buffer check / enqueue / backpressure
    // retry) at the next tick. Requests must be created via make_request so
    // ids are globally ordered.
    ReqPtr make_request(int core, ReqKind kind, std::uint64_t addr, std::uint64_t core_cycle);
    void submit(const ReqPtr& req) { staging_.push_back(req); }

    // Advance one bus cycle. `now` must increase by exactly 1 per call.
    void tick(Cycle now);

    bool queues_empty(int ch) const {
        const ChannelCtl& c = ctls_[ch];
        return c.read_q.empty() && c.write_q.empty() && c.rng_q.empty();
    }
    bool channel_idle(int ch, Cycle now) const {
        return dram_.channel_idle(ch, now, queues_empty(ch)) && !ondemand_;
    }

    const SimConfig& config() const { return cfg_; }
    const AddressMapper& mapper() const { return amap_; }
    DramModel& dram() { return dram_; }
    const DramModel& dram() const { return dram_; }
    RandomNumberBuffer& buffer() { return buffer_; }
    const RandomNumberBuffer& buffer() const { return buffer_; }
    TrngEngine& trng() { return trng_; }
    ChannelCtl& ctl(int ch) { return ctls_[ch]; }
    const ChannelCtl& ctl(int ch) const { return ctls_[ch]; }
    int num_channels() const { return static_cast<int>(ctls_.size()); }
    SimpleIdlePredictor& simple_predictor(int ch) { return simple_pred_[ch]; }
    QAgentPredictor& qagent(int ch) { return qagents_[ch]; }
    const MemStats& stats() const { return stats_; }
    const std::vector<RequestEvent>& events() const { return events_; }
    const std::vector<IdlePeriodEvent>& idle_periods() const { return idle_log_; }
    bool ondemand_in_flight() const { return ondemand_.has_value(); }

    std::uint64_t max_read_wait() const;
    std::uint64_t max_rng_wait() const;

  private:
    struct OnDemand {
        ReqPtr req;
        Cycle trigger = 0;
        bool started = false;
        Cycle finish = kPending;
        RngOperation op;
    };

    // tick phases
    void process_arrivals(Cycle now);
    void process_completions(Cycle now);
    void pend_serve(Cycle now);
    void try_start_ondemand(Cycle now);
    void schedule_channel(int ch, Cycle now);
    void fill_policy_phase(int ch, Cycle now);
    void starvation_phase(int ch, Cycle now);
    void accounting_phase(int ch, Cycle now);

    // helpers
    DramCmd next_cmd(const MemRequest& r) const;
    bool read_issuable(const MemRequest& r, Cycle now) const;
    bool rng_pickable(int ch) const;  // an RNG request could be scheduled now
    ReqPtr choose_frfcfs_cap(int ch, std::deque<ReqPtr>& q, Cycle now, bool rng_ok);
    ReqPtr choose_bliss(int ch, Cycle now, bool rng_ok);
    void issue_for(int ch, const ReqPtr& req, Cycle now);
    void trigger_ondemand(const ReqPtr& req, Cycle now);
    void serve_from_buffer(const ReqPtr& req, Cycle now);
    void remove_from_queues(const ReqPtr& req);
    void end_idle_period(int ch, Cycle now);
    void start_batch(int ch, Cycle now, bool low_util);
    void finish_batch(int ch, Cycle now);
    void record_event(const ReqPtr& req);
    int priority_of(int core) const;
    bool regular_quiescent(int ch, Cycle now) const;

    // queue choice for the RNG-aware scheduler
    enum class RngCase { None, RegularOnly, RngOnly, A, B, C };
    RngCase evaluate_case(int ch) const;

    SimConfig cfg_;
    AddressMapper amap_;
    DramModel dram_;
    TrngEngine trng_;
    RandomNumberBuffer buffer_;
    std::vector<ChannelCtl> ctls_;
    std::vector<SimpleIdlePredictor> simple_pred_;
    std::vector<QAgentPredictor> qagents_;
    std::vector<ReqPtr> staging_;
    std::optional<OnDemand> ondemand_;
    MemStats stats_;
    std::vector<RequestEvent> events_;
    std::vector<IdlePeriodEvent> idle_log_;
    std::uint64_t next_id_ = 1;
    Cycle last_tick_ = kPending;
    bool buffer_enabled_ = false;
};

}  // namespace rngsim
