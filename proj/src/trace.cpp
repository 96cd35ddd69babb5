#include "rngsim/trace.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rngsim/dram.hpp"

namespace rngsim {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, int lineno, const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace

TraceFile parse_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    TraceFile t = parse_trace_string(ss.str(), path);
    t.path = path;
    return t;
}

TraceFile parse_trace_string(const std::string& text, const std::string& origin) {
    TraceFile t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank
        TraceRecord rec;
        try {
            size_t pos = 0;
            long long b = std::stoll(tok, &pos, 10);
            if (pos != tok.size() || b < 0) throw std::invalid_argument("bubbles");
            rec.bubbles = static_cast<std::uint64_t>(b);
        } catch (const std::exception&) {
            parse_fail(origin, lineno, "expected non-negative bubble count, got '" + tok + "'");
        }
        std::string op;
        if (!(ls >> op)) parse_fail(origin, lineno, "missing op (R/W/G)");
        if (op == "G") {
            rec.op = TraceOp::Rng;
        } else if (op == "R" || op == "W") {
            rec.op = op == "R" ? TraceOp::Read : TraceOp::Write;
            std::string addr;
            if (!(ls >> addr)) parse_fail(origin, lineno, "missing address after '" + op + "'");
            if (addr.rfind("0x", 0) != 0 && addr.rfind("0X", 0) != 0)
                parse_fail(origin, lineno, "address must start with 0x, got '" + addr + "'");
            try {
                size_t pos = 0;
                rec.addr = std::stoull(addr.substr(2), &pos, 16);
                if (pos != addr.size() - 2) throw std::invalid_argument("addr");
            } catch (const std::exception&) {
                parse_fail(origin, lineno, "malformed hex address '" + addr + "'");
            }
        } else {
            parse_fail(origin, lineno, "unknown op '" + op + "' (expected R, W or G)");
        }
        std::string extra;
        if (ls >> extra) parse_fail(origin, lineno, "trailing token '" + extra + "'");
        t.records.push_back(rec);
    }
    return t;
}

std::string serialize_trace(const TraceFile& t) {
    std::ostringstream os;
    for (const auto& r : t.records) {
        os << r.bubbles << ' ';
        switch (r.op) {
            case TraceOp::Read: os << "R 0x" << std::hex << r.addr << std::dec; break;
            case TraceOp::Write: os << "W 0x" << std::hex << r.addr << std::dec; break;
            case TraceOp::Rng: os << 'G'; break;
        }
        os << '\n';
    }
    return os.str();
}

void write_trace(const TraceFile& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write trace file: " + path);
    out << serialize_trace(t);
}

void validate_trace(const TraceFile& t, const SimConfig& cfg) {
    if (t.records.empty())
        throw ConfigError("trace '" + t.path + "' is empty");
    AddressMapper amap(cfg.dram);
    for (size_t i = 0; i < t.records.size(); ++i) {
        const auto& r = t.records[i];
        if (r.op == TraceOp::Rng) continue;
        if (!amap.in_range(r.addr, cfg.usable_rows_per_bank())) {
            std::ostringstream os;
            os << "trace '" << t.path << "' record " << i + 1 << ": address 0x" << std::hex
               << r.addr << " out of configured range";
            throw ConfigError(os.str());
        }
    }
}

WorkloadStats classify(const TraceFile& t) {
    if (t.records.empty()) throw ConfigError("cannot classify an empty trace");
    WorkloadStats s;
    double insts = static_cast<double>(t.total_instructions());
    s.mpki = static_cast<double>(t.request_count()) / (insts / 1000.0);
    s.cls = s.mpki < 1.0 ? 'L' : (s.mpki < 10.0 ? 'M' : 'H');
    return s;
}

std::uint64_t rng_bubbles_for_throughput(const SimConfig& cfg, double target_mbps) {
    if (!(target_mbps > 0)) throw ConfigError("rng trace throughput must be > 0");
    double target_bits = target_mbps * 1e6;
    double slots = 64.0 * static_cast<double>(cfg.core.frequency_hz) *
                   static_cast<double>(cfg.core.issue_width) / target_bits;
    std::uint64_t per_request = static_cast<std::uint64_t>(std::floor(slots));
    if (per_request < 1) per_request = 1;
    return per_request - 1;
}

TraceFile gen_rng_trace(const SimConfig& cfg, double target_mbps, std::uint64_t length_insts,
                        std::uint32_t reads_per_rng) {
    TraceFile t;
    t.path = "synth:rng:" + std::to_string(target_mbps);
    std::uint64_t bubbles = rng_bubbles_for_throughput(cfg, target_mbps);
    AddressMapper amap(cfg.dram);
    std::uint64_t insts = 0;
    std::uint64_t g = 0, reads = 0;
    int channels = cfg.dram.channels;
    int banks = cfg.dram.banks_per_channel();
    std::uint32_t rows = cfg.usable_rows_per_bank();
    while (insts < length_insts) {
        TraceRecord rec;
        rec.bubbles = bubbles;
        rec.op = TraceOp::Rng;
        t.records.push_back(rec);
        insts += bubbles + 1;
        ++g;
        if (reads_per_rng && g % reads_per_rng == 0) {
            // one regular read striding across channels and banks
            DramCoord c;
            c.channel = static_cast<int>(reads % channels);
            c.bank = static_cast<int>((reads / channels) % banks);
            c.row = static_cast<std::uint32_t>((reads / (channels * banks)) % rows);
            c.col = static_cast<std::uint32_t>(reads % cfg.dram.columns_per_row);
            TraceRecord rd;
            rd.bubbles = 0;
            rd.op = TraceOp::Read;
            rd.addr = amap.encode(c);
            t.records.push_back(rd);
            insts += 1;
            ++reads;
        }
    }
    return t;
}

TracePattern trace_pattern_from_string(const std::string& s) {
    if (s == "stream") return TracePattern::Stream;
    if (s == "random") return TracePattern::RandomUniform;
    if (s == "rowlocal") return TracePattern::RowLocal;
    throw ConfigError("unknown trace pattern: '" + s + "' (stream|random|rowlocal)");
}

TraceFile gen_nonrng_trace(const SimConfig& cfg, TracePattern pattern, double target_mpki,
                           std::uint64_t length_insts, std::uint64_t seed,
                           double write_fraction) {
    if (!(target_mpki > 0)) throw ConfigError("target mpki must be > 0");
    if (length_insts < 1000) throw ConfigError("trace length must be >= 1000 instructions");
    TraceFile t;
    std::uint64_t n_req = static_cast<std::uint64_t>(std::llround(
        static_cast<double>(length_insts) * target_mpki / 1000.0));
    if (n_req < 1) n_req = 1;
    if (n_req > length_insts) n_req = length_insts;

    AddressMapper amap(cfg.dram);
    SplitMix rng(seed);
    int channels = cfg.dram.channels;
    int banks = cfg.dram.banks_per_channel();
    std::uint32_t rows = cfg.usable_rows_per_bank();
    std::uint32_t cols = cfg.dram.columns_per_row;
    // the row field is the topmost, so addresses below rows << row_shift
    // decode to rows inside the usable range
    const AddressMap& am = cfg.dram.address_map;
    int row_shift = am.offset_bits + am.channel_bits + am.column_bits + am.bank_bits;
    std::uint64_t usable_bytes = static_cast<std::uint64_t>(rows) << row_shift;
    std::uint64_t usable_lines = usable_bytes / 64;

    std::uint64_t stream_line = 0;
    DramCoord burst_at;
    std::uint32_t burst_left = 0;

    std::uint64_t prev_pos = 0;
    std::uint64_t written = 0;
    for (std::uint64_t k = 0; k < n_req; ++k) {
        std::uint64_t pos = (k + 1) * length_insts / n_req;  // slot of the k-th request
        TraceRecord rec;
        rec.bubbles = pos - prev_pos - 1;
        prev_pos = pos;
        switch (pattern) {
            case TracePattern::Stream:
                rec.addr = (stream_line++ % usable_lines) * 64;
                break;
            case TracePattern::RandomUniform:
                rec.addr = rng.next_below(usable_lines) * 64;
                break;
            case TracePattern::RowLocal: {
                if (burst_left == 0) {
                    burst_at.channel = static_cast<int>(rng.next_below(channels));
                    burst_at.bank = static_cast<int>(rng.next_below(banks));
                    burst_at.row = static_cast<std::uint32_t>(rng.next_below(rows));
                    burst_at.col = 0;
                    burst_left = 8 + static_cast<std::uint32_t>(rng.next_below(9));  // 8..16
                }
                rec.addr = amap.encode(burst_at);
                burst_at.col = (burst_at.col + 1) % cols;
                --burst_left;
                break;
            }
        }
        bool is_write = write_fraction > 0 &&
                        static_cast<std::uint64_t>(static_cast<double>(k + 1) * write_fraction) >
                            written;
        if (is_write) {
            rec.op = TraceOp::Write;
            ++written;
        } else {
            rec.op = TraceOp::Read;
        }
        t.records.push_back(rec);
    }
    return t;
}

bool is_synth_spec(const std::string& spec) { return spec.rfind("synth:", 0) == 0; }

TraceFile resolve_trace(const SimConfig& cfg, const std::string& spec) {
    if (!is_synth_spec(spec)) {
        TraceFile t = parse_trace(spec);
        validate_trace(t, cfg);
        return t;
    }
    std::string rest = spec.substr(6);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
        throw ConfigError("malformed synth spec '" + spec + "' (synth:<kind>:<param>)");
    std::string kind = rest.substr(0, colon);
    std::string param = rest.substr(colon + 1);
    double value = 0;
    try {
        size_t pos = 0;
        value = std::stod(param, &pos);
        if (pos != param.size()) throw std::invalid_argument("param");
    } catch (const std::exception&) {
        throw ConfigError("malformed synth parameter in '" + spec + "'");
    }
    // trace content must not depend on which core slot it is bound to, so the
    // generation seed is keyed on the spec text
    std::uint64_t seed = cfg.seed;
    for (char ch : spec) seed = splitmix64(seed ^ static_cast<unsigned char>(ch));
    TraceFile t;
    if (kind == "rng") {
        t = gen_rng_trace(cfg, value, cfg.synth_trace_length);
    } else if (kind == "stream" || kind == "random" || kind == "rowlocal") {
        t = gen_nonrng_trace(cfg, trace_pattern_from_string(kind), value, cfg.synth_trace_length,
                             seed);
    } else {
        throw ConfigError("unknown synth trace kind '" + kind + "' in '" + spec + "'");
    }
    t.path = spec;
    validate_trace(t, cfg);
    return t;
}

}  // namespace rngsim
