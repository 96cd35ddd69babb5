#include "rngsim/metrics.hpp"

#include <cstdio>
#include <sstream>

namespace rngsim {

double mem_slowdown(const RunResult& shared, const RunResult& alone, int core) {
    const CoreResult& s = shared.cores.at(core);
    const CoreResult& a = alone.cores.at(0);
    if (!defined(s.mcpi) || !defined(a.mcpi)) return kUndefined;
    if (a.mcpi == 0.0) return kUndefined;  // core has no memory behavior alone
    return s.mcpi / a.mcpi;
}

double unfairness(const std::vector<double>& slowdowns) {
    double mx = 0, mn = 0;
    int n = 0;
    for (double v : slowdowns) {
        if (!defined(v)) continue;
        if (n == 0) {
            mx = mn = v;
        } else {
            if (v > mx) mx = v;
            if (v < mn) mn = v;
        }
        ++n;
    }
    if (n < 2 || mn <= 0) return kUndefined;
    return mx / mn;
}

double weighted_speedup(const RunResult& shared, const std::vector<RunResult>& alone) {
    double sum = 0;
    for (size_t i = 0; i < shared.cores.size(); ++i) {
        const CoreResult& s = shared.cores[i];
        if (s.is_rng_app) continue;
        if (i >= alone.size() || alone[i].cores.empty())
            throw ConfigError("weighted speedup: missing alone run for core " + std::to_string(i));
        const CoreResult& a = alone[i].cores[0];
        if (!defined(s.ipc) || !defined(a.ipc) || a.ipc == 0.0)
            throw ConfigError("weighted speedup: undefined IPC for core " + std::to_string(i));
        sum += s.ipc / a.ipc;
    }
    return sum;
}

std::string format_value(double v) {
    if (!defined(v)) return "undefined";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string run_result_csv(const RunResult& r) {
    std::ostringstream os;
    os << "metric,core,value\n";
    auto sys = [&](const char* name, double v) { os << name << ",," << format_value(v) << "\n"; };
    auto sysu = [&](const char* name, std::uint64_t v) { os << name << ",," << v << "\n"; };
    for (size_t i = 0; i < r.cores.size(); ++i) {
        const CoreResult& c = r.cores[i];
        os << "retired_instructions," << i << "," << c.retired_instructions << "\n";
        os << "cycles_to_budget," << i << "," << c.cycles_to_budget << "\n";
        os << "mem_stall_cycles," << i << "," << c.mem_stall_cycles << "\n";
        os << "reads," << i << "," << c.reads << "\n";
        os << "writes," << i << "," << c.writes << "\n";
        os << "rng_requests," << i << "," << c.rng_requests << "\n";
        os << "is_rng_app," << i << "," << (c.is_rng_app ? 1 : 0) << "\n";
        os << "mcpi," << i << "," << format_value(c.mcpi) << "\n";
        os << "ipc," << i << "," << format_value(c.ipc) << "\n";
        os << "mem_slowdown," << i << "," << format_value(c.mem_slowdown) << "\n";
    }
    sysu("bus_cycles", r.bus_cycles);
    sysu("served_from_buffer", r.served_from_buffer);
    sysu("total_rng_requests", r.total_rng_requests);
    sys("buffer_serve_rate", r.buffer_serve_rate);
    sysu("predictions", r.predictions);
    sys("predictor_accuracy", r.predictor_accuracy);
    sys("false_positive_rate", r.false_positive_rate);
    sys("false_negative_rate", r.false_negative_rate);
    sysu("completed_idle_periods", r.completed_idle_periods);
    sysu("busy_regular_cycles", r.busy_regular_cycles);
    sysu("rng_mode_cycles", r.rng_mode_cycles);
    sysu("rng_wait_cycles", r.rng_wait_cycles);
    sysu("idle_cycles", r.idle_cycles);
    sysu("busy_memory_cycles", r.busy_memory_cycles);
    sysu("ondemand_ops", r.ondemand_ops);
    sysu("idle_batches", r.idle_batches);
    sysu("lowutil_batches", r.lowutil_batches);
    sysu("greedy_fills", r.greedy_fills);
    sysu("bits_to_buffer", r.bits_to_buffer);
    sysu("bits_to_ondemand", r.bits_to_ondemand);
    sysu("harvested_bits", r.harvested_bits);
    sysu("max_read_wait", r.max_read_wait);
    sysu("max_rng_wait", r.max_rng_wait);
    sys("unfairness", r.unfairness);
    sys("weighted_speedup", r.weighted_speedup);
    return os.str();
}

}  // namespace rngsim
