#include "rngsim/sim.hpp"

#include <sstream>

#include "rngsim/core.hpp"

namespace rngsim {

namespace {

class MemSystemPort : public MemoryPort {
  public:
    explicit MemSystemPort(MemorySystem& ms) : ms_(ms) {}
    ReqPtr create(int core, ReqKind kind, std::uint64_t addr, std::uint64_t core_cycle) override {
        return ms_.make_request(core, kind, addr, core_cycle);
    }
    void send(const ReqPtr& req) override { ms_.submit(req); }

  private:
    MemorySystem& ms_;
};

}  // namespace

RunResult run_simulation(const SimConfig& cfg) {
    cfg.validate();

    std::vector<TraceFile> traces;
    traces.reserve(cfg.workload.size());
    for (const auto& slot : cfg.workload) traces.push_back(resolve_trace(cfg, slot.trace));

    MemorySystem mem(cfg);
    MemSystemPort port(mem);
    std::uint64_t ratio = cfg.core.clock_ratio(cfg.dram.bus_frequency_hz);

    std::vector<Core> cores;
    cores.reserve(cfg.workload.size());
    for (size_t i = 0; i < cfg.workload.size(); ++i) {
        std::uint64_t budget =
            cfg.workload[i].budget ? cfg.workload[i].budget : cfg.instruction_budget;
        cores.emplace_back(static_cast<int>(i), cfg.core, &traces[i], port, ratio, budget);
    }

    Cycle t = 0;
    for (;; ++t) {
        if (t >= cfg.max_bus_cycles)
            throw ConfigError("simulation exceeded sim.max_bus_cycles (" +
                              std::to_string(cfg.max_bus_cycles) + ")");
        mem.tick(t);
        for (std::uint64_t sub = 0; sub < ratio; ++sub) {
            std::uint64_t cc = t * ratio + sub;
            for (auto& core : cores) core.tick(cc);
        }
        bool all_done = true;
        for (const auto& core : cores)
            if (!core.budget_reached()) all_done = false;
        if (all_done) break;
    }

    RunResult r;
    r.bus_cycles = t + 1;
    for (size_t i = 0; i < cores.size(); ++i) {
        CoreResult c;
        c.retired_instructions = cores[i].retired_at_budget();
        c.cycles_to_budget = cores[i].cycles_to_budget();
        c.mem_stall_cycles = cores[i].mem_stall_cycles();
        c.reads = cores[i].reads_issued();
        c.writes = cores[i].writes_issued();
        c.rng_requests = cores[i].rng_issued();
        c.is_rng_app = traces[i].has_rng();
        if (c.retired_instructions > 0) {
            c.mcpi = static_cast<double>(c.mem_stall_cycles) /
                     static_cast<double>(c.retired_instructions);
            c.ipc = static_cast<double>(c.retired_instructions) /
                    static_cast<double>(c.cycles_to_budget);
        }
        r.cores.push_back(c);
    }

    r.served_from_buffer = mem.buffer().served_from_buffer();
    r.total_rng_requests = mem.buffer().total_rng_requests();
    if (r.total_rng_requests > 0)
        r.buffer_serve_rate =
            static_cast<double>(r.served_from_buffer) / static_cast<double>(r.total_rng_requests);

    const MemStats& ms = mem.stats();
    r.predictions = ms.predictions;
    if (ms.predictions > 0) {
        r.predictor_accuracy =
            static_cast<double>(ms.predictions_correct) / static_cast<double>(ms.predictions);
        r.false_positive_rate =
            static_cast<double>(ms.false_positives) / static_cast<double>(ms.predictions);
        r.false_negative_rate =
            static_cast<double>(ms.false_negatives) / static_cast<double>(ms.predictions);
    }
    r.completed_idle_periods = ms.completed_idle_periods;

    for (int ch = 0; ch < mem.num_channels(); ++ch) {
        const ChannelCtl& c = mem.ctl(ch);
        r.busy_regular_cycles += c.busy_regular_cycles;
        r.rng_mode_cycles += c.rng_mode_cycles;
        r.rng_wait_cycles += c.rng_wait_cycles;
        r.idle_cycles += c.idle_cycles;
    }
    r.busy_memory_cycles = r.busy_regular_cycles + r.rng_mode_cycles + r.rng_wait_cycles;

    r.ondemand_ops = ms.ondemand_ops;
    r.idle_batches = ms.idle_batches;
    r.lowutil_batches = ms.lowutil_batches;
    r.greedy_fills = ms.greedy_fills;
    r.bits_to_buffer = mem.buffer().bits_deposited();
    r.bits_to_ondemand = ms.bits_to_ondemand;
    r.harvested_bits = mem.trng().harvested_bits();
    r.max_read_wait = mem.max_read_wait();
    r.max_rng_wait = mem.max_rng_wait();
    return r;
}

SimConfig alone_reference_config(const SimConfig& cfg, size_t core_index) {
    SimConfig alone = cfg;
    alone.sched.kind = SchedulerKind::FrFcfsCap;
    alone.buffer.policy = BufferPolicy::None;
    alone.workload = {cfg.workload.at(core_index)};
    alone.sched.priorities = {1};
    alone.record_events = false;
    alone.record_idle_periods = false;
    return alone;
}

const RunResult& AloneRunCache::get(const SimConfig& alone_cfg) {
    std::uint64_t key = alone_cfg.hash();
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, run_simulation(alone_cfg)).first->second;
}

RunResult evaluate_workload(const SimConfig& cfg, AloneRunCache& cache) {
    RunResult shared = run_simulation(cfg);
    std::vector<RunResult> alones;
    alones.reserve(cfg.workload.size());
    for (size_t i = 0; i < cfg.workload.size(); ++i)
        alones.push_back(cache.get(alone_reference_config(cfg, i)));

    std::vector<double> slowdowns;
    for (size_t i = 0; i < shared.cores.size(); ++i) {
        double s = mem_slowdown(shared, alones[i], static_cast<int>(i));
        shared.cores[i].mem_slowdown = s;
        slowdowns.push_back(s);
    }
    shared.unfairness = unfairness(slowdowns);
    bool any_nonrng = false;
    for (const auto& c : shared.cores)
        if (!c.is_rng_app) any_nonrng = true;
    if (any_nonrng) shared.weighted_speedup = weighted_speedup(shared, alones);
    return shared;
}

SweepAxes load_axes(const IniFile& ini) {
    SweepAxes a;
    for (const auto& s : ini.get_list("experiment.schedulers"))
        a.schedulers.push_back(scheduler_kind_from_string(s));
    for (const auto& s : ini.get_list("experiment.policies"))
        a.policies.push_back(buffer_policy_from_string(s));
    for (const auto& s : ini.get_list("experiment.buffer_entries"))
        a.buffer_entries.push_back(static_cast<std::uint32_t>(std::stoul(s)));
    for (const auto& s : ini.get_list("experiment.presets"))
        a.presets.push_back(trng_preset_from_string(s));
    for (const auto& s : ini.get_list("experiment.throughputs_mbps"))
        a.throughputs_mbps.push_back(std::stod(s));
    return a;
}

std::vector<SweepRow> sweep(const SimConfig& base, const SweepAxes& axes) {
    auto scheds = axes.schedulers.empty() ? std::vector<SchedulerKind>{base.sched.kind}
                                          : axes.schedulers;
    auto pols = axes.policies.empty() ? std::vector<BufferPolicy>{base.buffer.policy}
                                      : axes.policies;
    auto bufs = axes.buffer_entries.empty() ? std::vector<std::uint32_t>{base.buffer.entries}
                                            : axes.buffer_entries;
    auto presets =
        axes.presets.empty() ? std::vector<TrngPreset>{base.trng.preset} : axes.presets;
    auto tps = axes.throughputs_mbps.empty() ? std::vector<double>{0.0} : axes.throughputs_mbps;

    AloneRunCache cache;
    std::vector<SweepRow> rows;
    for (SchedulerKind sk : scheds)
        for (BufferPolicy bp : pols)
            for (std::uint32_t be : bufs)
                for (TrngPreset pr : presets)
                    for (double tp : tps) {
                        SweepRow row;
                        row.scheduler = sk;
                        row.policy = bp;
                        row.buffer_entries = be;
                        row.preset = pr;
                        row.throughput_mbps = tp;
                        std::ostringstream pt;
                        pt << "sched=" << to_string(sk) << " policy=" << to_string(bp)
                           << " buf=" << be << " preset=" << to_string(pr);
                        if (tp > 0) pt << " tp=" << tp;
                        row.point = pt.str();
                        SimConfig cfg = base;
                        cfg.sched.kind = sk;
                        cfg.buffer.policy = bp;
                        cfg.buffer.entries = be;
                        cfg.trng.preset = pr;
                        cfg.trng.apply_preset();
                        if (tp > 0) {
                            std::ostringstream spec;
                            spec << "synth:rng:" << tp;
                            for (auto& slot : cfg.workload)
                                if (slot.trace.rfind("synth:rng:", 0) == 0) slot.trace = spec.str();
                        }
                        try {
                            row.result = evaluate_workload(cfg, cache);
                        } catch (const std::exception& e) {
                            row.ok = false;
                            row.error = e.what();
                        }
                        rows.push_back(std::move(row));
                    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "point,scheduler,policy,buffer_entries,preset,throughput_mbps,status,metric,core,value\n";
    for (const auto& row : rows) {
        std::ostringstream prefix;
        prefix << "\"" << row.point << "\"," << to_string(row.scheduler) << ","
               << to_string(row.policy) << "," << row.buffer_entries << ","
               << to_string(row.preset) << "," << format_value(row.throughput_mbps) << ",";
        if (!row.ok) {
            std::string msg = row.error;
            for (auto& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            os << prefix.str() << "error,error,," << msg << "\n";
            continue;
        }
        std::istringstream body(run_result_csv(row.result));
        std::string line;
        std::getline(body, line);  // drop the inner header
        while (std::getline(body, line)) os << prefix.str() << "ok," << line << "\n";
    }
    return os.str();
}

}  // namespace rngsim
