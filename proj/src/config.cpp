#include "rngsim/config.hpp"

#include <cmath>
#include <sstream>

namespace rngsim {

namespace {

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

int log2u(std::uint64_t v) {
    int n = 0;
    while ((1ULL << n) < v) ++n;
    return n;
}

}  // namespace

SchedulerKind scheduler_kind_from_string(const std::string& s) {
    if (s == "frfcfs_cap" || s == "frfcfs") return SchedulerKind::FrFcfsCap;
    if (s == "bliss") return SchedulerKind::Bliss;
    if (s == "rng_aware") return SchedulerKind::RngAware;
    throw ConfigError("unknown scheduler kind: '" + s + "' (frfcfs_cap|bliss|rng_aware)");
}

const char* to_string(SchedulerKind k) {
    switch (k) {
        case SchedulerKind::FrFcfsCap: return "frfcfs_cap";
        case SchedulerKind::Bliss: return "bliss";
        case SchedulerKind::RngAware: return "rng_aware";
    }
    return "?";
}

BufferPolicy buffer_policy_from_string(const std::string& s) {
    if (s == "none") return BufferPolicy::None;
    if (s == "simple_buffering") return BufferPolicy::SimpleBuffering;
    if (s == "simple_predictor") return BufferPolicy::SimplePredictor;
    if (s == "rl_agent") return BufferPolicy::RlAgent;
    if (s == "greedy_oracle") return BufferPolicy::GreedyOracle;
    throw ConfigError("unknown buffer policy: '" + s +
                      "' (none|simple_buffering|simple_predictor|rl_agent|greedy_oracle)");
}

const char* to_string(BufferPolicy p) {
    switch (p) {
        case BufferPolicy::None: return "none";
        case BufferPolicy::SimpleBuffering: return "simple_buffering";
        case BufferPolicy::SimplePredictor: return "simple_predictor";
        case BufferPolicy::RlAgent: return "rl_agent";
        case BufferPolicy::GreedyOracle: return "greedy_oracle";
    }
    return "?";
}

TrngPreset trng_preset_from_string(const std::string& s) {
    if (s == "drange") return TrngPreset::DRangeLike;
    if (s == "quac") return TrngPreset::QuacLike;
    if (s == "custom") return TrngPreset::Custom;
    throw ConfigError("unknown trng preset: '" + s + "' (drange|quac|custom)");
}

const char* to_string(TrngPreset p) {
    switch (p) {
        case TrngPreset::DRangeLike: return "drange";
        case TrngPreset::QuacLike: return "quac";
        case TrngPreset::Custom: return "custom";
    }
    return "?";
}

void SimConfig::validate() const {
    std::vector<std::string> errs;
    auto err = [&](const std::string& m) { errs.push_back(m); };

    if (!is_pow2(dram.channels)) err("dram.channels must be a power of two");
    if (!is_pow2(dram.ranks_per_channel)) err("dram.ranks_per_channel must be a power of two");
    if (!is_pow2(dram.banks_per_rank)) err("dram.banks_per_rank must be a power of two");
    if (!is_pow2(dram.rows_per_bank)) err("dram.rows_per_bank must be a power of two");
    if (!is_pow2(dram.columns_per_row)) err("dram.columns_per_row must be a power of two");
    if (dram.bus_frequency_hz == 0) err("dram.bus_frequency_hz must be > 0");

    const TimingSet& t = dram.timing;
    const Cycle* all[] = {&t.tRCD, &t.tRP, &t.tCL, &t.tRAS, &t.tRC, &t.tBL,
                          &t.tCCD, &t.tRTP, &t.tWR, &t.tWTR, &t.tRRD, &t.tFAW};
    for (const Cycle* c : all)
        if (*c < 1) err("all timing parameters must be >= 1");
    if (t.tRC < t.tRAS + t.tRP) err("timing: tRC must be >= tRAS + tRP");

    const AddressMap& m = dram.address_map;
    if (m.offset_bits != 6) err("address_map: offset field must be 6 bits (64-byte lines)");
    if (m.channel_bits != log2u(dram.channels)) err("address_map: channel field width mismatch");
    if (m.column_bits != log2u(dram.columns_per_row)) err("address_map: column field width mismatch");
    if (m.bank_bits != log2u(static_cast<std::uint64_t>(dram.banks_per_channel())))
        err("address_map: bank field width mismatch");
    if (m.row_bits != log2u(dram.rows_per_bank)) err("address_map: row field width mismatch");

    if (core.issue_width < 1) err("core.issue_width must be >= 1");
    if (core.window_entries < 1) err("core.window_entries must be >= 1");
    if (core.frequency_hz == 0 || dram.bus_frequency_hz == 0 ||
        core.frequency_hz % dram.bus_frequency_hz != 0)
        err("core.frequency_hz must be an integral multiple of dram.bus_frequency_hz");

    if (sched.column_cap < 1) err("sched.column_cap must be >= 1");
    if (sched.stall_limit < 1) err("sched.stall_limit must be >= 1");
    if (sched.bliss_clearing_interval < 1) err("sched.bliss_clearing_interval must be >= 1");
    if (sched.read_q_capacity < 1 || sched.write_q_capacity < 1 || sched.rng_q_capacity < 1)
        err("queue capacities must be >= 1");

    if (trng.batch_bits_per_channel < 1) err("trng.batch_bits_per_channel must be >= 1");
    if (trng.batch_latency < 1 || trng.ondemand_word_latency < 1)
        err("trng latencies must be >= 1");
    if (trng.ondemand_word_latency < trng.batch_latency)
        err("trng.ondemand_word_latency must be >= trng.batch_latency");
    if (trng.ondemand_bits < 64) err("trng.ondemand_bits must be >= 64");
    if (usable_rows_per_bank() == 0) err("trng.reserved_rows_per_bank leaves no usable rows");

    if (buffer.entries > 256) err("buffer.entries must be in [0, 256]");
    if (buffer.period_threshold < 1) err("buffer.period_threshold must be >= 1");
    if (buffer.table_entries < 1) err("buffer.table_entries must be >= 1");
    if (!(buffer.rl_alpha > 0.0 && buffer.rl_alpha <= 1.0)) err("buffer.rl_alpha must be in (0, 1]");

    if (workload.empty()) err("workload: at least one core required");
    for (size_t i = 0; i < workload.size(); ++i)
        if (workload[i].trace.empty())
            err("workload: core" + std::to_string(i) + " has no trace");
    if (!sched.priorities.empty() && sched.priorities.size() != workload.size())
        err("sched.priorities size must match the number of cores");
    if (instruction_budget < 1) err("sim.instruction_budget must be >= 1");

    if (!errs.empty()) {
        std::ostringstream os;
        os << "invalid configuration (" << errs.size() << " error(s)):";
        for (const auto& e : errs) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
}

std::string SimConfig::canonical() const {
    std::ostringstream os;
    os << "seed=" << seed << ";budget=" << instruction_budget
       << ";synthlen=" << synth_trace_length;
    os << ";dram=" << dram.channels << "," << dram.ranks_per_channel << ","
       << dram.banks_per_rank << "," << dram.rows_per_bank << "," << dram.columns_per_row
       << "," << dram.bus_frequency_hz << "," << dram.refresh_enable << ","
       << dram.refresh_interval << "," << dram.refresh_cycles;
    const TimingSet& t = dram.timing;
    os << ";timing=" << t.tRCD << "," << t.tRP << "," << t.tCL << "," << t.tRAS << ","
       << t.tRC << "," << t.tBL << "," << t.tCCD << "," << t.tRTP << "," << t.tWR << ","
       << t.tWTR << "," << t.tRRD << "," << t.tFAW;
    os << ";core=" << core.frequency_hz << "," << core.issue_width << "," << core.window_entries;
    os << ";sched=" << to_string(sched.kind) << "," << sched.column_cap << ","
       << sched.bliss_blacklist_threshold << "," << sched.bliss_clearing_interval << ","
       << sched.stall_limit << "," << sched.read_q_capacity << "," << sched.write_q_capacity
       << "," << sched.rng_q_capacity;
    os << ";trng=" << to_string(trng.preset) << "," << trng.batch_bits_per_channel << ","
       << trng.batch_latency << "," << trng.ondemand_word_latency << "," << trng.ondemand_bits
       << "," << trng.reserved_rows_per_bank << "," << trng.bits_source_seed;
    os << ";buffer=" << to_string(buffer.policy) << "," << buffer.entries << ","
       << buffer.period_threshold << "," << buffer.low_util_threshold << ","
       << buffer.table_entries << "," << buffer.rl_alpha;
    os << ";workload=";
    for (size_t i = 0; i < workload.size(); ++i) {
        int pri = i < sched.priorities.size() ? sched.priorities[i] : 1;
        os << (i ? "|" : "") << workload[i].trace << "@" << pri << "@" << workload[i].budget;
    }
    return os.str();
}

std::uint64_t SimConfig::hash() const {
    // FNV-1a
    std::uint64_t h = 14695981039346656037ULL;
    for (char c : canonical()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

SimConfig load_config(const IniFile& ini) {
    SimConfig cfg;
    cfg.seed = ini.get_u64("sim.seed", cfg.seed);
    cfg.instruction_budget = ini.get_u64("sim.instruction_budget", cfg.instruction_budget);
    cfg.synth_trace_length = ini.get_u64("sim.synth_trace_length", cfg.synth_trace_length);
    cfg.max_bus_cycles = ini.get_u64("sim.max_bus_cycles", cfg.max_bus_cycles);
    cfg.record_events = ini.get_bool("sim.record_events", cfg.record_events);
    cfg.record_idle_periods = ini.get_bool("sim.record_idle_periods", cfg.record_idle_periods);

    DramConfig& d = cfg.dram;
    d.channels = static_cast<int>(ini.get_int("dram.channels", d.channels));
    d.ranks_per_channel = static_cast<int>(ini.get_int("dram.ranks_per_channel", d.ranks_per_channel));
    d.banks_per_rank = static_cast<int>(ini.get_int("dram.banks_per_rank", d.banks_per_rank));
    d.rows_per_bank = static_cast<std::uint32_t>(ini.get_u64("dram.rows_per_bank", d.rows_per_bank));
    d.columns_per_row = static_cast<std::uint32_t>(ini.get_u64("dram.columns_per_row", d.columns_per_row));
    d.bus_frequency_hz = ini.get_u64("dram.bus_frequency_hz", d.bus_frequency_hz);
    d.refresh_enable = ini.get_bool("dram.refresh_enable", d.refresh_enable);
    d.refresh_interval = ini.get_u64("dram.refresh_interval", d.refresh_interval);
    d.refresh_cycles = ini.get_u64("dram.refresh_cycles", d.refresh_cycles);

    TimingSet& t = d.timing;
    t.tRCD = ini.get_u64("timing.tRCD", t.tRCD);
    t.tRP = ini.get_u64("timing.tRP", t.tRP);
    t.tCL = ini.get_u64("timing.tCL", t.tCL);
    t.tRAS = ini.get_u64("timing.tRAS", t.tRAS);
    t.tRC = ini.get_u64("timing.tRC", t.tRC);
    t.tBL = ini.get_u64("timing.tBL", t.tBL);
    t.tCCD = ini.get_u64("timing.tCCD", t.tCCD);
    t.tRTP = ini.get_u64("timing.tRTP", t.tRTP);
    t.tWR = ini.get_u64("timing.tWR", t.tWR);
    t.tWTR = ini.get_u64("timing.tWTR", t.tWTR);
    t.tRRD = ini.get_u64("timing.tRRD", t.tRRD);
    t.tFAW = ini.get_u64("timing.tFAW", t.tFAW);

    // derive the address map from the geometry
    auto lg = [](std::uint64_t v) {
        int n = 0;
        while ((1ULL << n) < v) ++n;
        return n;
    };
    d.address_map.channel_bits = lg(d.channels);
    d.address_map.column_bits = lg(d.columns_per_row);
    d.address_map.bank_bits = lg(static_cast<std::uint64_t>(d.banks_per_channel()));
    d.address_map.row_bits = lg(d.rows_per_bank);

    CoreConfig& c = cfg.core;
    c.frequency_hz = ini.get_u64("core.frequency_hz", c.frequency_hz);
    c.issue_width = static_cast<std::uint32_t>(ini.get_u64("core.issue_width", c.issue_width));
    c.window_entries = static_cast<std::uint32_t>(ini.get_u64("core.window_entries", c.window_entries));

    SchedulerConfig& s = cfg.sched;
    s.kind = scheduler_kind_from_string(ini.get("sched.kind", to_string(s.kind)));
    s.column_cap = static_cast<std::uint32_t>(ini.get_u64("sched.column_cap", s.column_cap));
    s.bliss_blacklist_threshold = static_cast<std::uint32_t>(
        ini.get_u64("sched.bliss_blacklist_threshold", s.bliss_blacklist_threshold));
    s.bliss_clearing_interval = ini.get_u64("sched.bliss_clearing_interval", s.bliss_clearing_interval);
    s.stall_limit = ini.get_u64("sched.stall_limit", s.stall_limit);
    s.read_q_capacity = static_cast<std::uint32_t>(ini.get_u64("sched.read_q_capacity", s.read_q_capacity));
    s.write_q_capacity = static_cast<std::uint32_t>(ini.get_u64("sched.write_q_capacity", s.write_q_capacity));
    s.rng_q_capacity = static_cast<std::uint32_t>(ini.get_u64("sched.rng_q_capacity", s.rng_q_capacity));

    TrngConfig& r = cfg.trng;
    r.preset = trng_preset_from_string(ini.get("trng.preset", to_string(r.preset)));
    r.apply_preset();
    r.batch_bits_per_channel = static_cast<std::uint32_t>(
        ini.get_u64("trng.batch_bits_per_channel", r.batch_bits_per_channel));
    r.batch_latency = ini.get_u64("trng.batch_latency", r.batch_latency);
    r.ondemand_word_latency = ini.get_u64("trng.ondemand_word_latency", r.ondemand_word_latency);
    r.ondemand_bits = static_cast<std::uint32_t>(ini.get_u64("trng.ondemand_bits", r.ondemand_bits));
    r.reserved_rows_per_bank = static_cast<std::uint32_t>(
        ini.get_u64("trng.reserved_rows_per_bank", r.reserved_rows_per_bank));
    r.bits_source_seed = ini.get_u64("trng.bits_source_seed", cfg.seed);

    BufferConfig& b = cfg.buffer;
    b.policy = buffer_policy_from_string(ini.get("buffer.policy", to_string(b.policy)));
    b.entries = static_cast<std::uint32_t>(ini.get_u64("buffer.entries", b.entries));
    b.period_threshold = ini.get_u64("buffer.period_threshold", b.period_threshold);
    b.low_util_threshold = static_cast<std::uint32_t>(
        ini.get_u64("buffer.low_util_threshold", b.low_util_threshold));
    b.table_entries = static_cast<std::uint32_t>(ini.get_u64("buffer.table_entries", b.table_entries));
    b.rl_alpha = ini.get_double("buffer.rl_alpha", b.rl_alpha);

    int cores = static_cast<int>(ini.get_int("workload.cores", 0));
    if (cores < 0) throw ConfigError("workload.cores must be >= 0");
    cfg.sched.priorities.clear();
    for (int i = 0; i < cores; ++i) {
        std::string base = "workload.core" + std::to_string(i);
        CoreSlot slot;
        slot.trace = ini.get(base + ".trace", "");
        slot.priority = static_cast<int>(ini.get_int(base + ".priority", 1));
        slot.budget = ini.get_u64(base + ".budget", 0);
        cfg.workload.push_back(slot);
        cfg.sched.priorities.push_back(slot.priority);
    }
    return cfg;
}

SimConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides) {
    IniFile ini = IniFile::parse_file(path);
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override must look like section.key=value: '" + ov + "'");
        ini.set(ov.substr(0, eq), ov.substr(eq + 1));
    }
    SimConfig cfg = load_config(ini);
    cfg.validate();
    return cfg;
}

}  // namespace rngsim
