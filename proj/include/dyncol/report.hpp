#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "epochs.hpp"
#include "types.hpp"
#include "work_meter.hpp"

namespace dyncol {

// Floats are rounded to 6 significant digits before they enter a report, so
// emitted bytes depend only on the (stream, seed) pair, not on formatting
// quirks of the serializer.
inline double round6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::strtod(buf, nullptr);
}

inline std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct RunReport {
    // identity
    std::uint64_t seed = 0;
    std::string model;  // generator spec, or "file" when replaying
    std::uint32_t n = 0;
    std::uint32_t delta = 0;
    Level top_level = -1;

    // totals
    std::uint64_t updates = 0;
    std::uint64_t inserts = 0;
    std::uint64_t deletes = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t recolor_calls = 0;
    std::uint64_t det_calls = 0;
    std::uint64_t rand_calls = 0;
    std::array<std::uint64_t, kWorkCatCount> work_by_cat{};
    std::uint64_t work_total = 0;
    double amortized_units = 0.0;  // (work_total - preprocess) / updates
    std::uint64_t audit_units = 0;
    std::uint64_t audits_run = 0;
    std::uint64_t proper_checks_run = 0;

    // per-level
    std::vector<LevelStat> levels;
    Level max_level = -1;

    // violations
    std::uint64_t viol_invariant2 = 0;
    std::uint64_t viol_palette = 0;
    std::uint64_t viol_call_bound = 0;
    std::uint64_t viol_audit = 0;
    std::uint64_t viol_proper = 0;

    // baseline cross-check
    bool baseline_enabled = false;
    std::uint64_t baseline_scan_units = 0;
    std::uint64_t viol_baseline_proper = 0;

    std::uint64_t violation_total() const {
        return viol_invariant2 + viol_palette + viol_call_bound + viol_audit + viol_proper +
               viol_baseline_proper;
    }
};

inline nlohmann::ordered_json to_json(const RunReport& r) {
    nlohmann::ordered_json j;
    j["seed"] = r.seed;
    j["model"] = r.model;
    j["config"] = {{"n", r.n}, {"delta", r.delta}, {"top_level", r.top_level}};
    nlohmann::ordered_json totals;
    totals["updates"] = r.updates;
    totals["inserts"] = r.inserts;
    totals["deletes"] = r.deletes;
    totals["conflicts"] = r.conflicts;
    totals["recolor_calls"] = r.recolor_calls;
    totals["det_color_calls"] = r.det_calls;
    totals["rand_color_calls"] = r.rand_calls;
    nlohmann::ordered_json work;
    for (int c = 0; c < kWorkCatCount; ++c)
        work[to_string(static_cast<WorkCat>(c))] = r.work_by_cat[static_cast<std::size_t>(c)];
    work["total"] = r.work_total;
    totals["work_units"] = work;
    totals["amortized_units"] = round6(r.amortized_units);
    totals["audit_units"] = r.audit_units;
    totals["audits_run"] = r.audits_run;
    totals["proper_checks_run"] = r.proper_checks_run;
    j["totals"] = totals;

    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (const LevelStat& s : r.levels) {
        nlohmann::ordered_json l;
        l["level"] = s.level;
        l["epochs"] = s.epochs;
        l["original"] = s.original;
        l["induced"] = s.induced;
        l["final"] = s.final_;
        l["dur_short"] = s.dur_short;
        l["dur_short_fraction"] = round6(s.short_fraction());
        l["incident_insertions"] = s.incident_insertions;
        levels.push_back(l);
    }
    j["levels"] = levels;
    j["max_level"] = r.max_level;

    j["violations"] = {{"invariant2", r.viol_invariant2},   {"palette_bound", r.viol_palette},
                       {"call_bound", r.viol_call_bound},   {"audit", r.viol_audit},
                       {"proper", r.viol_proper},           {"baseline_proper", r.viol_baseline_proper}};
    j["baseline"] = {{"enabled", r.baseline_enabled}, {"scan_units", r.baseline_scan_units}};
    j["status"] = r.violation_total() == 0 ? "ok" : "violations";
    return j;
}

inline std::string emit_json(const RunReport& r) { return to_json(r).dump(2) + "\n"; }

inline std::string level_tag(Level l) {
    return l < 0 ? "lm" + std::to_string(-l) : "l" + std::to_string(l);
}

// One row per run; per-level stats flattened into level-indexed columns up to
// `max_top` (pad with zeros when a run's own level range is narrower).
inline std::string csv_header(Level max_top) {
    std::ostringstream os;
    os << "seed,model,n,delta,top_level,updates,inserts,deletes,conflicts,recolor_calls,"
          "det_color_calls,rand_color_calls,amortized_units,work_total";
    for (int c = 0; c < kWorkCatCount; ++c) os << ",work_" << to_string(static_cast<WorkCat>(c));
    os << ",audit_units,audits_run,proper_checks_run,max_level,viol_invariant2,viol_palette,"
          "viol_call_bound,viol_audit,viol_proper,viol_baseline_proper,baseline_enabled,"
          "baseline_scan_units";
    for (Level l = -1; l <= max_top; ++l) {
        const std::string t = level_tag(l);
        os << "," << t << "_epochs," << t << "_original," << t << "_induced," << t << "_final," << t
           << "_dur_short," << t << "_incident_insertions";
    }
    return os.str();
}

inline std::string csv_row(const RunReport& r, Level max_top) {
    std::ostringstream os;
    os << r.seed << "," << r.model << "," << r.n << "," << r.delta << "," << r.top_level << ","
       << r.updates << "," << r.inserts << "," << r.deletes << "," << r.conflicts << ","
       << r.recolor_calls << "," << r.det_calls << "," << r.rand_calls << ","
       << fmt6(r.amortized_units) << "," << r.work_total;
    for (int c = 0; c < kWorkCatCount; ++c) os << "," << r.work_by_cat[static_cast<std::size_t>(c)];
    os << "," << r.audit_units << "," << r.audits_run << "," << r.proper_checks_run << ","
       << r.max_level << "," << r.viol_invariant2 << "," << r.viol_palette << ","
       << r.viol_call_bound << "," << r.viol_audit << "," << r.viol_proper << ","
       << r.viol_baseline_proper << "," << (r.baseline_enabled ? 1 : 0) << ","
       << r.baseline_scan_units;
    for (Level l = -1; l <= max_top; ++l) {
        LevelStat s;
        const std::size_t idx = static_cast<std::size_t>(l + 1);
        if (idx < r.levels.size()) s = r.levels[idx];
        os << "," << s.epochs << "," << s.original << "," << s.induced << "," << s.final_ << ","
           << s.dur_short << "," << s.incident_insertions;
    }
    return os.str();
}

inline std::string emit_csv(const RunReport& r) {
    return csv_header(r.top_level) + "\n" + csv_row(r, r.top_level) + "\n";
}

}  // namespace dyncol
