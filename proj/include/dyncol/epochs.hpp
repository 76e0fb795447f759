#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "types.hpp"

namespace dyncol {

enum class RecolorCause : std::uint8_t { conflicting_insertion, induced };

enum class EpochEnd : std::uint8_t { open, original, induced, final_ };

inline const char* to_string(EpochEnd e) {
    switch (e) {
    case EpochEnd::open: return "open";
    case EpochEnd::original: return "original";
    case EpochEnd::induced: return "induced";
    case EpochEnd::final_: return "final";
    }
    return "?";
}

// One maximal same-color interval of one vertex. dur counts the insertions
// incident to the vertex while the epoch was open; for an original epoch that
// includes the terminating insertion. cost is the unit tally of the recolor
// call that opened the epoch (0 for the initial epochs).
struct EpochRecord {
    VertexId vertex = kNoVertex;
    Level level = -1;
    Color color = kNoColor;
    std::uint32_t palette_size = 1;  // 1 for deterministic and initial colorings
    std::uint64_t start_stamp = 0;
    std::uint64_t end_stamp = 0;  // 0 while open
    std::uint64_t dur = 0;
    std::uint64_t cost = 0;
    EpochEnd end = EpochEnd::open;
};

struct LevelStat {
    Level level = -1;
    std::uint64_t epochs = 0;
    std::uint64_t original = 0;
    std::uint64_t induced = 0;
    std::uint64_t final_ = 0;
    std::uint64_t dur_short = 0;
    std::uint64_t incident_insertions = 0;

    double short_fraction() const {
        return epochs == 0 ? 0.0 : static_cast<double>(dur_short) / static_cast<double>(epochs);
    }
};

struct Invariant2Violation {
    VertexId vertex;
    Level level;
    std::uint32_t palette_size;
    std::uint64_t down_count;
};

// An epoch is dur-short when dur < 3^level / (32e). Integer durations never sit
// on the irrational threshold, so the double comparison is exact in effect.
inline bool dur_short(Level level, std::uint64_t dur) {
    const double threshold =
        (level >= 0 ? static_cast<double>(pow3(level)) : 1.0 / 3.0) / (32.0 * std::exp(1.0));
    return static_cast<double>(dur) < threshold;
}

class EpochTracker {
public:
    EpochTracker(std::uint32_t n, Level top_level, Color initial_color)
        : n_(n), top_level_(top_level) {
        open_.resize(n);
        records_.reserve(n * 2);
        for (VertexId v = 0; v < n; ++v) {
            EpochRecord e;
            e.vertex = v;
            e.level = -1;
            e.color = initial_color;
            e.palette_size = 1;
            records_.push_back(e);
            open_[v] = static_cast<std::uint32_t>(records_.size() - 1);
        }
        incident_by_level_.assign(static_cast<std::size_t>(top_level) + 3, 0);
    }

    // Called for every accepted insertion before any recolor runs, so a
    // terminating insertion is already counted in the epoch it ends.
    void on_incident_insertion(VertexId u, Level level_u, VertexId v, Level level_v) {
        records_[open_[u]].dur += 1;
        records_[open_[v]].dur += 1;
        incident_by_level_[static_cast<std::size_t>(level_u) + 1] += 1;
        incident_by_level_[static_cast<std::size_t>(level_v) + 1] += 1;
    }

    // Closes v's open epoch and opens the next one. For landings on level >= 0
    // the randomized-coloring guarantees are asserted here; failures are
    // recorded and the run continues.
    void on_recolor(VertexId v, Color new_color, Level new_level, std::uint32_t palette_size,
                    std::uint64_t down_count, std::uint64_t cost_units, RecolorCause cause,
                    std::uint64_t stamp) {
        EpochRecord& old_e = records_[open_[v]];
        old_e.end_stamp = stamp;
        old_e.end = cause == RecolorCause::conflicting_insertion ? EpochEnd::original : EpochEnd::induced;

        if (new_level >= 0) {
            const std::int64_t p3 = pow3(new_level + 1);
            const bool palette_ok = 2 * static_cast<std::int64_t>(palette_size) >= p3 + 2;
            const bool down_ok = static_cast<std::int64_t>(down_count) >= p3;
            if (!palette_ok || !down_ok)
                invariant2_violations_.push_back({v, new_level, palette_size, down_count});
        }
        if (new_level > max_level_seen_) max_level_seen_ = new_level;

        EpochRecord e;
        e.vertex = v;
        e.level = new_level;
        e.color = new_color;
        e.palette_size = palette_size;
        e.start_stamp = stamp;
        e.cost = cost_units;
        records_.push_back(e);
        open_[v] = static_cast<std::uint32_t>(records_.size() - 1);
        ++recolor_count_;
    }

    // Marks still-open epochs final and aggregates per-level statistics.
    std::vector<LevelStat> finalize_epochs() {
        for (VertexId v = 0; v < n_; ++v) {
            EpochRecord& e = records_[open_[v]];
            if (e.end == EpochEnd::open) e.end = EpochEnd::final_;
        }
        std::vector<LevelStat> stats(static_cast<std::size_t>(top_level_) + 2);
        for (std::size_t i = 0; i < stats.size(); ++i)
            stats[i].level = static_cast<Level>(i) - 1;
        for (const EpochRecord& e : records_) {
            LevelStat& s = stats[static_cast<std::size_t>(e.level) + 1];
            s.epochs += 1;
            switch (e.end) {
            case EpochEnd::original: s.original += 1; break;
            case EpochEnd::induced: s.induced += 1; break;
            case EpochEnd::final_: s.final_ += 1; break;
            case EpochEnd::open: break;
            }
            if (dur_short(e.level, e.dur)) s.dur_short += 1;
        }
        for (std::size_t i = 0; i < stats.size(); ++i)
            stats[i].incident_insertions = incident_by_level_[i];
        return stats;
    }

    const std::vector<EpochRecord>& records() const { return records_; }
    const EpochRecord& open_epoch(VertexId v) const { return records_[open_[v]]; }
    const std::vector<Invariant2Violation>& invariant2_violations() const { return invariant2_violations_; }
    std::uint64_t recolor_count() const { return recolor_count_; }
    Level max_level_seen() const { return max_level_seen_; }

private:
    std::uint32_t n_;
    Level top_level_;
    std::vector<EpochRecord> records_;
    std::vector<std::uint32_t> open_;
    std::vector<std::uint64_t> incident_by_level_;  // index = level + 1
    std::vector<Invariant2Violation> invariant2_violations_;
    std::uint64_t recolor_count_ = 0;
    Level max_level_seen_ = -1;
};

}  // namespace dyncol
