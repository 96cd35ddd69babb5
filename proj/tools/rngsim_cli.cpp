#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "rngsim/sim.hpp"

namespace {

void write_or_print(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw rngsim::ConfigError("cannot write output file: " + path);
    out << text;
}

// summary statistics over a run or sweep CSV: count/mean/min/max per metric
int report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open csv: " << path << "\n";
        return 1;
    }
    std::string header;
    if (!std::getline(in, header)) {
        std::cerr << "error: empty csv\n";
        return 1;
    }
    std::vector<std::string> cols;
    {
        std::istringstream hs(header);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    int metric_idx = -1, value_idx = -1;
    for (size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == "metric") metric_idx = static_cast<int>(i);
        if (cols[i] == "value") value_idx = static_cast<int>(i);
    }
    if (metric_idx < 0 || value_idx < 0) {
        std::cerr << "error: csv lacks metric/value columns\n";
        return 1;
    }
    struct Agg {
        std::uint64_t n = 0;
        double sum = 0, mn = 0, mx = 0;
        std::uint64_t undefined = 0;
    };
    std::map<std::string, Agg> aggs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string f;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"') { quoted = !quoted; continue; }
            if (ch == ',' && !quoted) { fields.push_back(f); f.clear(); continue; }
            f += ch;
        }
        fields.push_back(f);
        if (static_cast<int>(fields.size()) <= std::max(metric_idx, value_idx)) continue;
        Agg& a = aggs[fields[metric_idx]];
        try {
            double v = std::stod(fields[value_idx]);
            if (a.n == 0) { a.mn = a.mx = v; }
            else { a.mn = std::min(a.mn, v); a.mx = std::max(a.mx, v); }
            a.sum += v;
            ++a.n;
        } catch (const std::exception&) {
            ++a.undefined;
        }
    }
    std::cout << "metric,count,mean,min,max,undefined\n";
    for (const auto& [name, a] : aggs) {
        std::cout << name << "," << a.n << ",";
        if (a.n) {
            std::cout << rngsim::format_value(a.sum / static_cast<double>(a.n)) << ","
                      << rngsim::format_value(a.mn) << "," << rngsim::format_value(a.mx);
        } else {
            std::cout << "undefined,undefined,undefined";
        }
        std::cout << "," << a.undefined << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DRAM TRNG memory-subsystem simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, trace_path, csv_path;
    std::vector<std::string> overrides;

    auto* run = app.add_subcommand("run", "run one simulation from a config file");
    run->add_option("config", config_path, "INI config file")->required();
    run->add_option("--set", overrides, "override config keys (section.key=value)");
    run->add_option("-o,--out", out_path, "write the run CSV here (default: stdout)");

    auto* exp = app.add_subcommand("experiment", "run the configured sweep");
    exp->add_option("config", config_path, "INI config file with an [experiment] section")
        ->required();
    exp->add_option("--set", overrides, "override config keys (section.key=value)");
    exp->add_option("-o,--out", out_path, "write the sweep CSV here (default: stdout)");

    auto* gen = app.add_subcommand("gen-trace", "generate a synthetic trace file");
    std::string kind = "stream";
    double throughput = 5120, mpki = 10, write_fraction = 0;
    std::uint64_t length = 1'000'000, seed = 1;
    gen->add_option("--kind", kind, "rng|stream|random|rowlocal")->required();
    gen->add_option("--throughput-mbps", throughput, "RNG trace target throughput (Mb/s)");
    gen->add_option("--mpki", mpki, "non-RNG trace target MPKI");
    gen->add_option("--length", length, "trace length in instructions");
    gen->add_option("--seed", seed, "generation seed");
    gen->add_option("--write-fraction", write_fraction, "fraction of requests that are writes");
    gen->add_option("--config", config_path, "optional config for geometry defaults");
    gen->add_option("-o,--out", out_path, "output trace path (default: stdout)");

    auto* cls = app.add_subcommand("classify", "print MPKI and intensity class of a trace");
    cls->add_option("trace", trace_path, "trace file")->required();

    auto* rep = app.add_subcommand("report", "summary statistics over a CSV produced by run/experiment");
    rep->add_option("csv", csv_path, "CSV file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            rngsim::SimConfig cfg = rngsim::load_config_file(config_path, overrides);
            rngsim::AloneRunCache cache;
            rngsim::RunResult r = rngsim::evaluate_workload(cfg, cache);
            write_or_print(rngsim::run_result_csv(r), out_path);
            return 0;
        }
        if (exp->parsed()) {
            rngsim::IniFile ini = rngsim::IniFile::parse_file(config_path);
            for (const auto& ov : overrides) {
                auto eq = ov.find('=');
                if (eq == std::string::npos)
                    throw rngsim::ConfigError("override must look like section.key=value: " + ov);
                ini.set(ov.substr(0, eq), ov.substr(eq + 1));
            }
            rngsim::SimConfig cfg = rngsim::load_config(ini);
            cfg.validate();
            rngsim::SweepAxes axes = rngsim::load_axes(ini);
            auto rows = rngsim::sweep(cfg, axes);
            write_or_print(rngsim::sweep_csv(rows), out_path);
            return 0;
        }
        if (gen->parsed()) {
            rngsim::SimConfig cfg;
            if (!config_path.empty()) cfg = rngsim::load_config_file(config_path);
            if (cfg.workload.empty()) cfg.workload.push_back({"synth:stream:1", 1, 0});
            cfg.validate();
            rngsim::TraceFile t;
            if (kind == "rng") {
                t = rngsim::gen_rng_trace(cfg, throughput, length);
            } else {
                t = rngsim::gen_nonrng_trace(cfg, rngsim::trace_pattern_from_string(kind), mpki,
                                             length, seed, write_fraction);
            }
            write_or_print(rngsim::serialize_trace(t), out_path);
            return 0;
        }
        if (cls->parsed()) {
            rngsim::TraceFile t = rngsim::parse_trace(trace_path);
            rngsim::WorkloadStats s = rngsim::classify(t);
            std::cout << "trace," << trace_path << "\n";
            std::cout << "instructions," << t.total_instructions() << "\n";
            std::cout << "requests," << t.request_count() << "\n";
            std::cout << "rng_requests," << t.rng_request_count() << "\n";
            std::cout << "mpki," << rngsim::format_value(s.mpki) << "\n";
            std::cout << "class," << s.cls << "\n";
            return 0;
        }
        if (rep->parsed()) return report_csv(csv_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
