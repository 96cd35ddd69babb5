#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rngsim/sim.hpp"

namespace py = pybind11;
using namespace rngsim;

namespace {

py::dict core_dict(const CoreResult& c) {
    py::dict d;
    d["retired_instructions"] = c.retired_instructions;
    d["cycles_to_budget"] = c.cycles_to_budget;
    d["mem_stall_cycles"] = c.mem_stall_cycles;
    d["reads"] = c.reads;
    d["writes"] = c.writes;
    d["rng_requests"] = c.rng_requests;
    d["is_rng_app"] = c.is_rng_app;
    d["mcpi"] = c.mcpi;
    d["ipc"] = c.ipc;
    d["mem_slowdown"] = c.mem_slowdown;
    return d;
}

py::dict result_dict(const RunResult& r) {
    py::dict d;
    py::list cores;
    for (const auto& c : r.cores) cores.append(core_dict(c));
    d["cores"] = cores;
    d["bus_cycles"] = r.bus_cycles;
    d["served_from_buffer"] = r.served_from_buffer;
    d["total_rng_requests"] = r.total_rng_requests;
    d["buffer_serve_rate"] = r.buffer_serve_rate;
    d["predictions"] = r.predictions;
    d["predictor_accuracy"] = r.predictor_accuracy;
    d["false_positive_rate"] = r.false_positive_rate;
    d["false_negative_rate"] = r.false_negative_rate;
    d["completed_idle_periods"] = r.completed_idle_periods;
    d["busy_regular_cycles"] = r.busy_regular_cycles;
    d["rng_mode_cycles"] = r.rng_mode_cycles;
    d["rng_wait_cycles"] = r.rng_wait_cycles;
    d["idle_cycles"] = r.idle_cycles;
    d["busy_memory_cycles"] = r.busy_memory_cycles;
    d["ondemand_ops"] = r.ondemand_ops;
    d["idle_batches"] = r.idle_batches;
    d["lowutil_batches"] = r.lowutil_batches;
    d["greedy_fills"] = r.greedy_fills;
    d["bits_to_buffer"] = r.bits_to_buffer;
    d["bits_to_ondemand"] = r.bits_to_ondemand;
    d["harvested_bits"] = r.harvested_bits;
    d["max_read_wait"] = r.max_read_wait;
    d["max_rng_wait"] = r.max_rng_wait;
    d["unfairness"] = r.unfairness;
    d["weighted_speedup"] = r.weighted_speedup;
    return d;
}

SimConfig config_from(const std::string& text_or_path, bool is_path,
                      const std::vector<std::string>& overrides) {
    IniFile ini = is_path ? IniFile::parse_file(text_or_path)
                          : IniFile::parse_string(text_or_path);
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos) throw ConfigError("override must be section.key=value: " + ov);
        ini.set(ov.substr(0, eq), ov.substr(eq + 1));
    }
    SimConfig cfg = load_config(ini);
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_rngsim, m) {
    m.doc() = "cycle-level DRAM TRNG memory-subsystem simulator";

    m.def(
        "run_file",
        [](const std::string& path, const std::vector<std::string>& overrides) {
            SimConfig cfg = config_from(path, true, overrides);
            AloneRunCache cache;
            return result_dict(evaluate_workload(cfg, cache));
        },
        py::arg("config_path"), py::arg("overrides") = std::vector<std::string>{});

    m.def(
        "run_string",
        [](const std::string& text, const std::vector<std::string>& overrides) {
            SimConfig cfg = config_from(text, false, overrides);
            AloneRunCache cache;
            return result_dict(evaluate_workload(cfg, cache));
        },
        py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{});

    m.def(
        "run_csv",
        [](const std::string& text, const std::vector<std::string>& overrides) {
            SimConfig cfg = config_from(text, false, overrides);
            AloneRunCache cache;
            return run_result_csv(evaluate_workload(cfg, cache));
        },
        py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{});

    m.def(
        "experiment_csv",
        [](const std::string& text, const std::vector<std::string>& overrides) {
            IniFile ini = IniFile::parse_string(text);
            for (const auto& ov : overrides) {
                auto eq = ov.find('=');
                if (eq == std::string::npos)
                    throw ConfigError("override must be section.key=value: " + ov);
                ini.set(ov.substr(0, eq), ov.substr(eq + 1));
            }
            SimConfig cfg = load_config(ini);
            cfg.validate();
            SweepAxes axes = load_axes(ini);
            return sweep_csv(sweep(cfg, axes));
        },
        py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{});

    m.def(
        "gen_rng_trace",
        [](double throughput_mbps, std::uint64_t length) {
            SimConfig cfg;
            cfg.workload.push_back({"synth:stream:1", 1, 0});
            return serialize_trace(gen_rng_trace(cfg, throughput_mbps, length));
        },
        py::arg("throughput_mbps"), py::arg("length") = 1'000'000);

    m.def(
        "gen_nonrng_trace",
        [](const std::string& pattern, double mpki, std::uint64_t length, std::uint64_t seed) {
            SimConfig cfg;
            cfg.workload.push_back({"synth:stream:1", 1, 0});
            return serialize_trace(gen_nonrng_trace(cfg, trace_pattern_from_string(pattern), mpki,
                                                    length, seed));
        },
        py::arg("pattern"), py::arg("mpki"), py::arg("length") = 1'000'000, py::arg("seed") = 1);

    m.def("classify_text", [](const std::string& text) {
        TraceFile t = parse_trace_string(text);
        WorkloadStats s = classify(t);
        py::dict d;
        d["mpki"] = s.mpki;
        d["class"] = std::string(1, s.cls);
        return d;
    });

    m.def("classify_file", [](const std::string& path) {
        TraceFile t = parse_trace(path);
        WorkloadStats s = classify(t);
        py::dict d;
        d["mpki"] = s.mpki;
        d["class"] = std::string(1, s.cls);
        return d;
    });

    m.def("unfairness", [](const std::vector<double>& slowdowns) { return unfairness(slowdowns); });
}
