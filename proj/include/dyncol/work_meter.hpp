#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "types.hpp"

namespace dyncol {

// Unit scheme: one unit per neighbor reclassified, per availability entry
// scanned, per down-neighbor updated, per level tested, plus one per procedure
// call. Preprocessing is charged to its own category and excluded from
// amortized figures.
enum class WorkCat : std::uint8_t {
    preprocess,
    deletion,
    conflictless_insert,
    det_color,
    rand_color,
    set_level,
    palette_scan,
};
constexpr int kWorkCatCount = 7;

inline const char* to_string(WorkCat c) {
    switch (c) {
    case WorkCat::preprocess: return "preprocess";
    case WorkCat::deletion: return "deletion";
    case WorkCat::conflictless_insert: return "conflictless_insert";
    case WorkCat::det_color: return "det_color";
    case WorkCat::rand_color: return "rand_color";
    case WorkCat::set_level: return "set_level";
    case WorkCat::palette_scan: return "palette_scan";
    }
    return "?";
}

enum class CallKind : std::uint8_t { deletion, conflictless_insert, det_color, rand_color };

inline const char* to_string(CallKind k) {
    switch (k) {
    case CallKind::deletion: return "deletion";
    case CallKind::conflictless_insert: return "conflictless_insert";
    case CallKind::det_color: return "det_color";
    case CallKind::rand_color: return "rand_color";
    }
    return "?";
}

struct CallBoundViolation {
    CallKind kind;
    Level bound_level;  // entry level for det_color, target level for rand_color
    std::uint64_t units;
    std::uint64_t bound;
};

// Frozen constants for the per-call ceilings: deletions and conflict-less
// insertions must stay within kCallSlack units; a det_color call entered at
// level l within kCallFactor*3^(l+2) + kCallSlack; a rand_color call landing on
// level l' within kCallFactor*3^(l'+2) + kCallSlack.
constexpr std::uint64_t kCallFactor = 20;
constexpr std::uint64_t kCallSlack = 50;

inline std::uint64_t call_bound(CallKind kind, Level bound_level) {
    switch (kind) {
    case CallKind::deletion:
    case CallKind::conflictless_insert:
        return kCallSlack;
    case CallKind::det_color:
    case CallKind::rand_color:
        return kCallFactor * static_cast<std::uint64_t>(pow3(bound_level + 2)) + kCallSlack;
    }
    return 0;
}

// Counters stay monotone and total() always equals the category sum while no
// conflicting-insertion units are parked in the pending buffer.
class WorkMeter {
public:
    void charge(WorkCat cat, std::int64_t units) {
        if (units < 0) throw std::invalid_argument("WorkMeter::charge: negative units");
        cat_[static_cast<int>(cat)] += static_cast<std::uint64_t>(units);
        total_ += static_cast<std::uint64_t>(units);
        if (frame_open_) frame_units_ += static_cast<std::uint64_t>(units);
    }

    // Structural units from attach/detach route here: under a plain update they
    // land in that update's category; under a conflicting insertion they are
    // buffered uncategorized and folded into the first recolor call.
    void set_context(WorkCat cat) { context_ = cat; }
    void charge_structure(std::int64_t units) {
        if (units < 0) throw std::invalid_argument("WorkMeter::charge_structure: negative units");
        if (pending_open_) {
            pending_units_ += static_cast<std::uint64_t>(units);
        } else {
            charge(context_, units);
        }
    }

    void begin_pending() {
        pending_open_ = true;
        pending_units_ = 0;
    }
    bool pending_open() const { return pending_open_; }

    void begin_frame() {
        if (frame_open_) throw std::logic_error("WorkMeter::begin_frame: frame already open");
        frame_open_ = true;
        frame_units_ = pending_open_ ? pending_units_ : 0;
    }

    // Categorizes any absorbed pending units as `cat`, closes the frame, and
    // returns its unit total.
    std::uint64_t end_frame(WorkCat cat) {
        if (!frame_open_) throw std::logic_error("WorkMeter::end_frame: no open frame");
        if (pending_open_) {
            cat_[static_cast<int>(cat)] += pending_units_;
            total_ += pending_units_;
            pending_open_ = false;
            pending_units_ = 0;
        }
        frame_open_ = false;
        return frame_units_;
    }

    // Checks a completed call against its frozen ceiling; violations are
    // recorded and the run continues.
    void record_call(CallKind kind, Level bound_level, std::uint64_t units) {
        const std::uint64_t bound = call_bound(kind, bound_level);
        calls_[static_cast<int>(kind)] += 1;
        if (units > bound) violations_.push_back({kind, bound_level, units, bound});
    }

    std::uint64_t category(WorkCat cat) const { return cat_[static_cast<int>(cat)]; }
    std::uint64_t total() const { return total_; }
    std::uint64_t calls(CallKind kind) const { return calls_[static_cast<int>(kind)]; }
    const std::vector<CallBoundViolation>& assert_call_bounds() const { return violations_; }

    std::uint64_t category_sum() const {
        std::uint64_t s = 0;
        for (auto u : cat_) s += u;
        return s;
    }

private:
    std::array<std::uint64_t, kWorkCatCount> cat_{};
    std::array<std::uint64_t, 4> calls_{};
    std::uint64_t total_ = 0;
    WorkCat context_ = WorkCat::conflictless_insert;
    bool frame_open_ = false;
    std::uint64_t frame_units_ = 0;
    bool pending_open_ = false;
    std::uint64_t pending_units_ = 0;
    std::vector<CallBoundViolation> violations_;
};

}  // namespace dyncol
