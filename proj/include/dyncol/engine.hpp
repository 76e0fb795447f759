#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epochs.hpp"
#include "graph_core.hpp"
#include "rng.hpp"
#include "types.hpp"
#include "work_meter.hpp"

namespace dyncol {

struct EngineConfig {
    std::uint32_t n = 0;
    std::uint32_t delta = 0;  // hard per-vertex degree cap; palette is [1, delta+1]
    std::uint64_t seed = 0;

    void validate() const {
        if (n == 0) throw invalid_config("EngineConfig: n must be at least 1");
    }
};

// Candidate color for a randomized recolor: either blank among the vertex's
// down-neighbors or held by exactly one of them.
struct PaletteEntry {
    Color color = kNoColor;
    VertexId unique_occupant = kNoVertex;  // kNoVertex = blank

    bool blank() const { return unique_occupant == kNoVertex; }
};

struct RecolorOutcome {
    bool done = true;
    VertexId continue_at = kNoVertex;
};

struct PaletteBoundViolation {
    VertexId vertex;
    std::uint64_t down_count;
    std::uint32_t palette_size;
};

struct RandColorResult {
    Color color = kNoColor;
    Level target_level = -1;
    std::uint32_t palette_size = 0;
    std::uint64_t down_count = 0;
    VertexId conflict_with = kNoVertex;  // kNoVertex when the sampled color was blank
};

// Fully dynamic (delta+1)-coloring engine. Maintains a proper coloring under
// edge insertions and deletions in constant amortized time: deletions and
// conflict-free insertions are O(1), and a conflicting insertion triggers a
// recolor chain whose cost is covered by the level machinery in graph_core.
class Engine {
public:
    explicit Engine(const EngineConfig& cfg)
        : cfg_(cfg),
          meter_(),
          graph_((cfg.validate(), cfg.n), cfg.delta, meter_),
          rng_(cfg.seed),
          epochs_(cfg.n, graph_.top_level, 1) {
        // Every vertex starts with color 1 at level -1; the first conflicting
        // insertion of each pair repairs locally.
        meter_.charge(WorkCat::preprocess, cfg_.n);
    }

    // ---- update entry point ------------------------------------------------

    UpdateStatus apply_update(const UpdateEvent& e) {
        const VertexId u = e.u, v = e.v;
        if (u == v || u >= cfg_.n || v >= cfg_.n) return UpdateStatus::invalid_edge;
        if (e.kind == UpdateEvent::Kind::insert) return handle_insertion(u, v);
        return handle_deletion(u, v);
    }

    UpdateStatus handle_insertion(VertexId u, VertexId v) {
        if (graph_.has_edge(u, v)) return UpdateStatus::duplicate_edge;
        if (graph_.degree(u) >= cfg_.delta || graph_.degree(v) >= cfg_.delta)
            return UpdateStatus::degree_cap_exceeded;

        const bool conflict = graph_.color(u) == graph_.color(v);
        if (!conflict) {
            meter_.set_context(WorkCat::conflictless_insert);
            meter_.begin_frame();
            graph_.attach_edge_views(u, v);
            epochs_.on_incident_insertion(u, graph_.level(u), v, graph_.level(v));
            const std::uint64_t units = meter_.end_frame(WorkCat::conflictless_insert);
            meter_.record_call(CallKind::conflictless_insert, 0, units);
        } else {
            ++conflicts_;
            meter_.begin_pending();
            graph_.attach_edge_views(u, v);
            epochs_.on_incident_insertion(u, graph_.level(u), v, graph_.level(v));
            VertexId x = select_conflict_endpoint(u, v);
            RecolorCause cause = RecolorCause::conflicting_insertion;
            for (;;) {
                const RecolorOutcome out = recolor(x, cause);
                if (out.done) break;
                x = out.continue_at;
                cause = RecolorCause::induced;
            }
        }
        ++updates_;
        ++inserts_;
        return UpdateStatus::ok;
    }

    UpdateStatus handle_deletion(VertexId u, VertexId v) {
        if (!graph_.has_edge(u, v)) return UpdateStatus::missing_edge;
        meter_.set_context(WorkCat::deletion);
        meter_.begin_frame();
        graph_.detach_edge_views(u, v);
        const std::uint64_t units = meter_.end_frame(WorkCat::deletion);
        meter_.record_call(CallKind::deletion, 0, units);
        ++updates_;
        ++deletes_;
        return UpdateStatus::ok;
    }

    // The endpoint recolored more recently owns the repair; a fresh pair (both
    // stamps zero) falls to the first-listed endpoint.
    VertexId select_conflict_endpoint(VertexId u, VertexId v) const {
        return graph_.verts[u].last_recolor_stamp >= graph_.verts[v].last_recolor_stamp ? u : v;
    }

    // ---- recolor chain -----------------------------------------------------

    // Repairs x's color. Chooses the cheap deterministic scan while few
    // neighbors sit below the next level, otherwise buys a long random epoch at
    // a higher level. The returned outcome carries the single possible
    // downstream conflict.
    RecolorOutcome recolor(VertexId x, RecolorCause cause) {
        meter_.begin_frame();
        graph_.verts[x].last_recolor_stamp = ++stamp_counter_;
        const Level entry_level = graph_.level(x);
        const std::uint64_t phi_next = graph_.down_count(x) + graph_.bucket_size(x, entry_level);

        if (phi_next < static_cast<std::uint64_t>(pow3(entry_level + 2))) {
            meter_.charge(WorkCat::det_color, 2);  // dispatch test + call
            const Color c = det_color(x);
            const std::uint64_t units = meter_.end_frame(WorkCat::det_color);
            meter_.record_call(CallKind::det_color, entry_level, units);
            epochs_.on_recolor(x, c, -1, 1, graph_.down_count(x), units, cause, stamp_counter_);
            return {true, kNoVertex};
        }

        meter_.charge(WorkCat::rand_color, 2);
        const RandColorResult rr = rand_color(x);
        const std::uint64_t units = meter_.end_frame(WorkCat::rand_color);
        meter_.record_call(CallKind::rand_color, rr.target_level, units);
        epochs_.on_recolor(x, rr.color, rr.target_level, rr.palette_size, rr.down_count, units, cause,
                           stamp_counter_);
        if (rr.conflict_with == kNoVertex) return {true, kNoVertex};
        return {false, rr.conflict_with};
    }

    // Scans the availability list for the first color blank among the
    // down-neighbors, takes it, and drops to level -1. The degree cap
    // guarantees such a color within the first down_count+1 entries.
    Color det_color(VertexId x) {
        const ScratchOccupancy& occ = graph_.down_occupancy_scan(x);
        const VertexRecord& xr = graph_.verts[x];
        Color chosen = kNoColor;
        std::int64_t scanned = 0;
        for (Color c = xr.avail.head; c != 0; c = xr.avail.next[c]) {
            ++scanned;
            if (occ.occupancy(c) == 0) {
                chosen = c;
                break;
            }
        }
        meter_.charge(WorkCat::palette_scan, scanned);
        if (chosen == kNoColor)
            throw structural_corruption("det_color: no blank color for vertex " + std::to_string(x));
        const Color old = xr.color;
        if (chosen != old) {
            graph_.verts[x].color = chosen;
            propagate_color_change(x, old, chosen, WorkCat::det_color);
        }
        graph_.move_vertex_level(x, -1);
        return chosen;
    }

    // Smallest level above x whose next boundary the neighborhood does not
    // saturate. Exists because phi(x, L+1) <= n-1 < 3^(L+2).
    Level find_target_level(VertexId x) {
        const Level lv = graph_.level(x);
        std::uint64_t acc = graph_.down_count(x) + graph_.bucket_size(x, lv);
        for (Level cand = lv + 1;; ++cand) {
            if (cand > graph_.top_level)
                throw structural_corruption("find_target_level: ran past top level at vertex " +
                                            std::to_string(x));
            meter_.charge(WorkCat::rand_color, 1);  // level tested
            acc += graph_.bucket_size(x, cand);     // acc = phi(x, cand + 1)
            if (acc < static_cast<std::uint64_t>(pow3(cand + 2))) return cand;
        }
    }

    // Blank-or-unique colors among the first down_count+1 availability
    // entries. At most half those entries can be multiply occupied, which is
    // what keeps the palette at least down_count/2 + 1 wide; shortfalls are
    // recorded rather than fatal.
    std::vector<PaletteEntry> compute_palette(VertexId x) {
        const ScratchOccupancy& occ = graph_.down_occupancy_scan(x);
        const VertexRecord& xr = graph_.verts[x];
        const std::uint64_t phi = graph_.down_count(x);
        std::uint64_t limit = phi + 1;
        if (xr.avail.size < limit) limit = xr.avail.size;

        std::vector<PaletteEntry> palette;
        palette.reserve(limit);
        std::int64_t scanned = 0;
        Color c = xr.avail.head;
        for (std::uint64_t i = 0; i < limit && c != 0; ++i, c = xr.avail.next[c]) {
            ++scanned;
            const std::uint32_t k = occ.occupancy(c);
            if (k == 0) palette.push_back({c, kNoVertex});
            else if (k == 1) palette.push_back({c, occ.occupant(c)});
        }
        meter_.charge(WorkCat::palette_scan, scanned + 1);
        if (2 * static_cast<std::uint64_t>(palette.size()) < phi + 2)
            palette_violations_.push_back({x, phi, static_cast<std::uint32_t>(palette.size())});
        return palette;
    }

    // Raise to the target level, then sample uniformly from the palette. A
    // blank draw ends the chain; a uniquely-held draw hands the conflict to
    // the occupant, which now sits strictly below x.
    RandColorResult rand_color(VertexId x) {
        RandColorResult rr;
        rr.target_level = find_target_level(x);
        graph_.move_vertex_level(x, rr.target_level);
        const std::vector<PaletteEntry> palette = compute_palette(x);
        if (palette.empty())
            throw structural_corruption("rand_color: empty palette at vertex " + std::to_string(x));
        const PaletteEntry pick = palette[rng_.uniform_below(palette.size())];
        meter_.charge(WorkCat::rand_color, 1);  // sample

        const Color old = graph_.verts[x].color;
        if (pick.color != old) {
            graph_.verts[x].color = pick.color;
            propagate_color_change(x, old, pick.color, WorkCat::rand_color);
        }
        rr.color = pick.color;
        rr.palette_size = static_cast<std::uint32_t>(palette.size());
        rr.down_count = graph_.down_count(x);
        rr.conflict_with = pick.unique_occupant;
        if (rr.conflict_with != kNoVertex) {
            if (graph_.color(rr.conflict_with) != pick.color ||
                graph_.level(rr.conflict_with) >= rr.target_level)
                throw structural_corruption("rand_color: bad continuation from vertex " + std::to_string(x));
        }
        return rr;
    }

    // Re-books c_old -> c_new in the counters of every neighbor that tracks
    // v's color: the down-neighbors and the same-level (mutual up) neighbors.
    // Strictly-above neighbors keep no record of v's color. Both lists
    // together hold phi(v, level(v)+1) vertices, which every caller's budget
    // already covers.
    void propagate_color_change(VertexId v, Color c_old, Color c_new, WorkCat attribution) {
        if (c_old == c_new)
            throw structural_corruption("propagate_color_change: colors equal");
        const VertexRecord& vr = graph_.verts[v];
        std::int64_t units = 1;
        for (SlotIdx si = vr.down_head; si != kNilSlot; si = graph_.slots[si].next) {
            const VertexId w = graph_.slots[si].peer;
            graph_.adjust_up_color(w, c_old, -1);
            graph_.adjust_up_color(w, c_new, +1);
            ++units;
        }
        auto bit = vr.up.find(vr.level);
        if (bit != vr.up.end()) {
            for (SlotIdx si = bit->second.head; si != kNilSlot; si = graph_.slots[si].next) {
                const VertexId w = graph_.slots[si].peer;
                graph_.adjust_up_color(w, c_old, -1);
                graph_.adjust_up_color(w, c_new, +1);
                ++units;
            }
        }
        meter_.charge(attribution, units);
    }

    // ---- queries -----------------------------------------------------------

    Color color(VertexId v) const { return graph_.color(v); }
    Level level(VertexId v) const { return graph_.level(v); }
    std::uint64_t phi(VertexId v, Level l) const { return graph_.phi(v, l); }

    std::vector<Color> coloring() const {
        std::vector<Color> out(cfg_.n);
        for (VertexId v = 0; v < cfg_.n; ++v) out[v] = graph_.color(v);
        return out;
    }

    std::vector<std::pair<VertexId, VertexId>> edges() const { return graph_.edges(); }
    AuditResult audit_structures() const { return graph_.audit_structures(); }

    const EngineConfig& config() const { return cfg_; }
    Level top_level() const { return graph_.top_level; }
    std::uint64_t updates() const { return updates_; }
    std::uint64_t inserts() const { return inserts_; }
    std::uint64_t deletes() const { return deletes_; }
    std::uint64_t conflicts() const { return conflicts_; }
    const std::vector<PaletteBoundViolation>& palette_violations() const { return palette_violations_; }

    EngineConfig cfg_;
    WorkMeter meter_;
    LevelGraph graph_;
    RandomSource rng_;
    EpochTracker epochs_;
    std::uint64_t stamp_counter_ = 0;
    std::uint64_t updates_ = 0;
    std::uint64_t inserts_ = 0;
    std::uint64_t deletes_ = 0;
    std::uint64_t conflicts_ = 0;
    std::vector<PaletteBoundViolation> palette_violations_;
};

}  // namespace dyncol
