#pragma once

#include <map>
#include <string>
#include <vector>

#include "rngsim/config.hpp"
#include "rngsim/memsystem.hpp"
#include "rngsim/metrics.hpp"
#include "rngsim/trace.hpp"

namespace rngsim {

// One deterministic full simulation of the configured workload. Slowdown,
// unfairness and weighted speedup stay undefined here; evaluate_workload
// fills them from alone runs.
RunResult run_simulation(const SimConfig& cfg);

// The single-core RNG-oblivious reference system used for alone runs.
SimConfig alone_reference_config(const SimConfig& cfg, size_t core_index);

// Memoizes alone runs keyed by the reference config hash.
class AloneRunCache {
  public:
    const RunResult& get(const SimConfig& alone_cfg);
    size_t size() const { return cache_.size(); }

  private:
    std::map<std::uint64_t, RunResult> cache_;
};

// Shared run plus per-core slowdowns, unfairness and weighted speedup.
RunResult evaluate_workload(const SimConfig& cfg, AloneRunCache& cache);

// Experiment sweep: Cartesian product over the configured axes. Empty axes
// use the base config's value.
struct SweepAxes {
    std::vector<SchedulerKind> schedulers;
    std::vector<BufferPolicy> policies;
    std::vector<std::uint32_t> buffer_entries;
    std::vector<TrngPreset> presets;
    std::vector<double> throughputs_mbps;  // rewrites synth:rng slots
};

SweepAxes load_axes(const IniFile& ini);

struct SweepRow {
    std::string point;
    SchedulerKind scheduler;
    BufferPolicy policy;
    std::uint32_t buffer_entries;
    TrngPreset preset;
    double throughput_mbps;  // 0 if no rng axis applies
    bool ok = true;
    std::string error;
    RunResult result;
};

std::vector<SweepRow> sweep(const SimConfig& base, const SweepAxes& axes);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace rngsim
