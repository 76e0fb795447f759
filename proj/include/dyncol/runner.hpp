#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "baseline.hpp"
#include "engine.hpp"
#include "report.hpp"
#include "stream.hpp"

namespace dyncol {

struct AuditPolicy {
    enum class Kind : std::uint8_t { off, at_end, every };
    Kind kind = Kind::off;
    std::uint64_t period = 0;

    static AuditPolicy off() { return {}; }
    static AuditPolicy at_end() { return {Kind::at_end, 0}; }
    static AuditPolicy every(std::uint64_t k) { return {Kind::every, k}; }

    static AuditPolicy parse(const std::string& text) {
        if (text == "off") return off();
        if (text == "end") return at_end();
        if (text.rfind("every:", 0) == 0) {
            const std::uint64_t k = std::stoull(text.substr(6));
            if (k == 0) throw invalid_config("audit period must be positive");
            return every(k);
        }
        throw invalid_config("audit policy must be off, end, or every:<k>");
    }

    bool due_after_event(std::uint64_t index1) const {
        return kind == Kind::every && period > 0 && index1 % period == 0;
    }
    bool due_at_end() const { return kind != Kind::off; }
};

struct RunOptions {
    std::uint64_t seed = 0;
    AuditPolicy audit;
    bool baseline = false;
    bool skip_invalid = false;
    std::string model_tag = "file";
};

// An event the engine rejected (and --skip-invalid was not set).
struct stream_apply_error : std::runtime_error {
    std::size_t event_index;  // 0-based position in the stream
    UpdateStatus status;
    stream_apply_error(std::size_t idx, UpdateStatus st)
        : std::runtime_error("event " + std::to_string(idx) + ": " + to_string(st)),
          event_index(idx),
          status(st) {}
};

// Feeds a stream to the engine (and optionally the naive baseline), performing
// consistency audits per policy, and assembles the deterministic report.
inline RunReport run(const Stream& stream, const RunOptions& opt) {
    EngineConfig cfg{stream.header.n, stream.header.delta, opt.seed};
    Engine engine(cfg);
    NaiveState naive(stream.header.n, stream.header.delta);

    RunReport r;
    r.seed = opt.seed;
    r.model = opt.model_tag;
    r.n = stream.header.n;
    r.delta = stream.header.delta;
    r.top_level = engine.top_level();
    r.baseline_enabled = opt.baseline;

    auto audit_now = [&] {
        const AuditResult a = engine.audit_structures();
        r.viol_audit += a.issues.size();
        r.audit_units += a.units;
        r.audits_run += 1;
        const auto bad = check_proper(engine.coloring(), engine.edges());
        r.viol_proper += bad.size();
        r.proper_checks_run += 1;
        if (opt.baseline) r.viol_baseline_proper += naive.proper_violations().size();
    };

    for (std::size_t i = 0; i < stream.events.size(); ++i) {
        const UpdateStatus st = engine.apply_update(stream.events[i]);
        if (st != UpdateStatus::ok) {
            if (!opt.skip_invalid) throw stream_apply_error(i, st);
        } else if (opt.baseline) {
            naive.apply_update(stream.events[i]);
        }
        if (opt.audit.due_after_event(i + 1)) audit_now();
    }
    if (opt.audit.due_at_end()) audit_now();

    r.updates = engine.updates();
    r.inserts = engine.inserts();
    r.deletes = engine.deletes();
    r.conflicts = engine.conflicts();
    r.recolor_calls = engine.epochs_.recolor_count();
    r.det_calls = engine.meter_.calls(CallKind::det_color);
    r.rand_calls = engine.meter_.calls(CallKind::rand_color);
    for (int c = 0; c < kWorkCatCount; ++c)
        r.work_by_cat[static_cast<std::size_t>(c)] = engine.meter_.category(static_cast<WorkCat>(c));
    r.work_total = engine.meter_.total();
    const std::uint64_t pre = engine.meter_.category(WorkCat::preprocess);
    r.amortized_units =
        r.updates == 0 ? 0.0
                       : static_cast<double>(r.work_total - pre) / static_cast<double>(r.updates);
    r.levels = engine.epochs_.finalize_epochs();
    r.max_level = engine.epochs_.max_level_seen();
    r.viol_invariant2 = engine.epochs_.invariant2_violations().size();
    r.viol_palette = engine.palette_violations().size();
    r.viol_call_bound = engine.meter_.assert_call_bounds().size();
    r.baseline_scan_units = naive.scan_units();
    return r;
}

// ---- bench sweep -----------------------------------------------------------

struct BenchOptions {
    std::vector<std::uint32_t> ns;
    std::uint32_t delta = 10;
    std::uint64_t updates_per_n = 200;  // t = updates_per_n * n
    GenModel model;
    std::uint32_t seeds = 5;
    std::uint64_t seed_base = 1;
    AuditPolicy audit;
    unsigned jobs = 1;
};

struct BenchAggregate {
    std::uint32_t n = 0;
    double mean_amortized = 0.0;
    double min_amortized = 0.0;
    double max_amortized = 0.0;
};

struct BenchResult {
    std::vector<RunReport> rows;  // ordered by (n index, seed)
    std::vector<BenchAggregate> aggregates;
    double amortized_ratio = 0.0;  // max over n of mean amortized / min over n
};

// Cells are independent engines, so they may run on worker threads; rows are
// merged back in configuration order and the output is byte-identical for any
// job count.
inline BenchResult bench(const BenchOptions& opt) {
    struct Cell {
        std::uint32_t n;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::uint32_t n : opt.ns)
        for (std::uint32_t s = 0; s < opt.seeds; ++s) cells.push_back({n, opt.seed_base + s});

    BenchResult out;
    out.rows.resize(cells.size());
    auto run_cell = [&](std::size_t idx) {
        const Cell& c = cells[idx];
        const std::uint64_t t = opt.updates_per_n * c.n;
        const Stream s = generate(opt.model, c.n, opt.delta, t, c.seed);
        RunOptions ro;
        ro.seed = c.seed;
        ro.audit = opt.audit;
        ro.model_tag = opt.model.to_string();
        out.rows[idx] = run(s, ro);
    };

    const unsigned jobs = opt.jobs == 0 ? 1 : opt.jobs;
    if (jobs <= 1 || cells.size() <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const unsigned workers = std::min<std::size_t>(jobs, cells.size());
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_cell(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t ni = 0; ni < opt.ns.size(); ++ni) {
        BenchAggregate a;
        a.n = opt.ns[ni];
        double sum = 0.0, lo = 0.0, hi = 0.0;
        for (std::uint32_t s = 0; s < opt.seeds; ++s) {
            const double x = out.rows[ni * opt.seeds + s].amortized_units;
            sum += x;
            if (s == 0) lo = hi = x;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        a.mean_amortized = opt.seeds == 0 ? 0.0 : sum / opt.seeds;
        a.min_amortized = lo;
        a.max_amortized = hi;
        out.aggregates.push_back(a);
    }
    if (!out.aggregates.empty()) {
        double lo = out.aggregates[0].mean_amortized, hi = lo;
        for (const auto& a : out.aggregates) {
            lo = std::min(lo, a.mean_amortized);
            hi = std::max(hi, a.mean_amortized);
        }
        out.amortized_ratio = lo > 0.0 ? hi / lo : 0.0;
    }
    return out;
}

inline std::string emit_bench_json(const BenchResult& b) {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const RunReport& r : b.rows) j["rows"].push_back(to_json(r));
    j["aggregates"] = nlohmann::ordered_json::array();
    for (const BenchAggregate& a : b.aggregates)
        j["aggregates"].push_back({{"n", a.n},
                                   {"mean_amortized", round6(a.mean_amortized)},
                                   {"min_amortized", round6(a.min_amortized)},
                                   {"max_amortized", round6(a.max_amortized)}});
    j["amortized_ratio"] = round6(b.amortized_ratio);
    return j.dump(2) + "\n";
}

inline std::string emit_bench_csv(const BenchResult& b) {
    Level max_top = -1;
    for (const RunReport& r : b.rows) max_top = std::max(max_top, r.top_level);
    std::ostringstream os;
    os << csv_header(max_top) << "\n";
    for (const RunReport& r : b.rows) os << csv_row(r, max_top) << "\n";
    for (const BenchAggregate& a : b.aggregates)
        os << "# aggregate n=" << a.n << " mean_amortized=" << fmt6(a.mean_amortized)
           << " min=" << fmt6(a.min_amortized) << " max=" << fmt6(a.max_amortized) << "\n";
    os << "# amortized_ratio=" << fmt6(b.amortized_ratio) << "\n";
    return os.str();
}

}  // namespace dyncol
