#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "scratch.hpp"
#include "types.hpp"
#include "work_meter.hpp"

namespace dyncol {

using SlotIdx = std::uint32_t;
constexpr SlotIdx kNilSlot = std::numeric_limits<std::uint32_t>::max();

// One directed half of an undirected edge: the entry for `peer` inside the
// owning vertex's structure. A slot sits in exactly one container at a time,
// recorded in `where`, which is what makes constant-time re-filing possible
// when an endpoint changes level.
struct AdjSlot {
    VertexId peer = kNoVertex;
    SlotIdx twin = kNilSlot;
    SlotIdx prev = kNilSlot;
    SlotIdx next = kNilSlot;
    std::int16_t where = -5;  // kSlotFree

    static constexpr std::int16_t kSlotDown = -3;
    static constexpr std::int16_t kSlotFree = -5;
};

// Ordered free-color list; the color value itself is the handle. Membership
// must equal {c : mu_plus[c] == 0}. Removal is O(1); re-added colors go to the
// tail, so the order is the initial ascending run permuted by usage history.
struct AvailList {
    std::vector<Color> prev, next;  // indexed by color; 0 unused, -1 = detached
    Color head = 0, tail = 0;       // 0 = empty
    std::uint32_t size = 0;

    void init(Color max_color) {
        prev.assign(static_cast<std::size_t>(max_color) + 1, -1);
        next.assign(static_cast<std::size_t>(max_color) + 1, -1);
        head = tail = 0;
        size = 0;
        for (Color c = 1; c <= max_color; ++c) append(c);
    }

    bool contains(Color c) const { return prev[c] != -1 || head == c; }

    void append(Color c) {
        prev[c] = tail;
        next[c] = 0;
        if (tail != 0) next[tail] = c;
        tail = c;
        if (head == 0) head = c;
        ++size;
    }

    void remove(Color c) {
        const Color p = prev[c], nx = next[c];
        if (p != 0) next[p] = nx; else head = nx;
        if (nx != 0) prev[nx] = p; else tail = p;
        prev[c] = next[c] = -1;
        --size;
    }

    std::vector<Color> to_vector() const {
        std::vector<Color> out;
        out.reserve(size);
        for (Color c = head; c != 0; c = next[c]) out.push_back(c);
        return out;
    }
};

struct UpBucket {
    SlotIdx head = kNilSlot;
    std::uint32_t size = 0;
};

struct VertexRecord {
    Level level = -1;
    Color color = 1;
    std::uint64_t last_recolor_stamp = 0;

    SlotIdx down_head = kNilSlot;
    std::uint32_t down_count = 0;

    // Only non-empty buckets are present; key is the member's level.
    std::unordered_map<Level, UpBucket> up;
    std::uint32_t up_count = 0;

    // mu_plus[c] = number of up-neighbors currently colored c.
    std::vector<std::uint32_t> mu_plus;
    AvailList avail;
};

struct AuditResult {
    std::vector<std::string> issues;
    std::uint64_t units = 0;

    bool clean() const { return issues.empty(); }
};

// Level-partitioned adjacency with per-vertex color books. Holds no coloring
// policy of its own; the engine drives it and every mutation is charged to the
// supplied meter.
struct LevelGraph {
    std::uint32_t n = 0;
    std::uint32_t delta = 0;
    Level top_level = -1;
    std::vector<VertexRecord> verts;
    std::vector<AdjSlot> slots;
    SlotIdx free_head = kNilSlot;
    // key -> slot owned by min(u,v) whose peer is max(u,v)
    std::unordered_map<std::uint64_t, SlotIdx> edge_map;
    ScratchOccupancy scratch;
    WorkMeter* meter = nullptr;

    LevelGraph(std::uint32_t n_, std::uint32_t delta_, WorkMeter& m)
        : n(n_), delta(delta_), top_level(level_cap(n_)), scratch(static_cast<Color>(delta_) + 1), meter(&m) {
        verts.resize(n);
        for (auto& vr : verts) {
            vr.mu_plus.assign(static_cast<std::size_t>(delta) + 2, 0);
            vr.avail.init(static_cast<Color>(delta) + 1);
        }
        meter->charge(WorkCat::preprocess, static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(delta) + 2));
    }

    Level level(VertexId v) const { return verts[v].level; }
    Color color(VertexId v) const { return verts[v].color; }
    std::uint32_t down_count(VertexId v) const { return verts[v].down_count; }
    std::uint32_t degree(VertexId v) const { return verts[v].down_count + verts[v].up_count; }
    bool has_edge(VertexId u, VertexId v) const { return edge_map.count(edge_key(u, v)) != 0; }
    std::uint64_t edge_count() const { return edge_map.size(); }

    std::uint32_t bucket_size(VertexId v, Level l) const {
        auto it = verts[v].up.find(l);
        return it == verts[v].up.end() ? 0 : it->second.size;
    }

    // ---- intrusive list plumbing -------------------------------------------

    SlotIdx alloc_slot(VertexId peer) {
        SlotIdx si;
        if (free_head != kNilSlot) {
            si = free_head;
            free_head = slots[si].next;
        } else {
            si = static_cast<SlotIdx>(slots.size());
            slots.emplace_back();
        }
        slots[si] = AdjSlot{};
        slots[si].peer = peer;
        return si;
    }

    void free_slot(SlotIdx si) {
        slots[si] = AdjSlot{};
        slots[si].next = free_head;
        free_head = si;
    }

    void link_down(VertexId owner, SlotIdx si) {
        AdjSlot& s = slots[si];
        VertexRecord& vr = verts[owner];
        s.prev = kNilSlot;
        s.next = vr.down_head;
        if (vr.down_head != kNilSlot) slots[vr.down_head].prev = si;
        vr.down_head = si;
        s.where = AdjSlot::kSlotDown;
        ++vr.down_count;
    }

    void unlink_down(VertexId owner, SlotIdx si) {
        AdjSlot& s = slots[si];
        if (s.where != AdjSlot::kSlotDown)
            throw structural_corruption("unlink_down: slot not filed as down");
        VertexRecord& vr = verts[owner];
        if (s.prev != kNilSlot) slots[s.prev].next = s.next; else vr.down_head = s.next;
        if (s.next != kNilSlot) slots[s.next].prev = s.prev;
        if (vr.down_count == 0) throw structural_corruption("unlink_down: count underflow");
        --vr.down_count;
        s.prev = s.next = kNilSlot;
    }

    void link_up(VertexId owner, SlotIdx si, Level member_level) {
        AdjSlot& s = slots[si];
        VertexRecord& vr = verts[owner];
        UpBucket& b = vr.up[member_level];
        s.prev = kNilSlot;
        s.next = b.head;
        if (b.head != kNilSlot) slots[b.head].prev = si;
        b.head = si;
        ++b.size;
        s.where = static_cast<std::int16_t>(member_level);
        ++vr.up_count;
    }

    void unlink_up(VertexId owner, SlotIdx si) {
        AdjSlot& s = slots[si];
        if (s.where < -1) throw structural_corruption("unlink_up: slot not filed as up");
        VertexRecord& vr = verts[owner];
        auto it = vr.up.find(static_cast<Level>(s.where));
        if (it == vr.up.end()) throw structural_corruption("unlink_up: missing bucket");
        UpBucket& b = it->second;
        if (s.prev != kNilSlot) slots[s.prev].next = s.next; else b.head = s.next;
        if (s.next != kNilSlot) slots[s.next].prev = s.prev;
        if (b.size == 0 || vr.up_count == 0) throw structural_corruption("unlink_up: count underflow");
        --b.size;
        --vr.up_count;
        if (b.size == 0) vr.up.erase(it);
        s.prev = s.next = kNilSlot;
    }

    // ---- color book --------------------------------------------------------

    // Keeps availability the exact complement of the up-color multiset's
    // support. 0 -> 1 removes the color from availability; 1 -> 0 appends it at
    // the tail. Underflow means the books and the adjacency disagree: abort.
    void adjust_up_color(VertexId v, Color c, int d) {
        if (c < 1 || c > static_cast<Color>(delta) + 1)
            throw structural_corruption("adjust_up_color: color out of range");
        VertexRecord& vr = verts[v];
        std::uint32_t& m = vr.mu_plus[c];
        if (d > 0) {
            if (m == 0) vr.avail.remove(c);
            m += static_cast<std::uint32_t>(d);
        } else if (d < 0) {
            const std::uint32_t dec = static_cast<std::uint32_t>(-d);
            if (m < dec) throw structural_corruption("adjust_up_color: mu_plus underflow at vertex " +
                                                     std::to_string(v) + " color " + std::to_string(c));
            m -= dec;
            if (m == 0) vr.avail.append(c);
        }
    }

    // ---- edge views --------------------------------------------------------

    // Caller validates (distinct, absent, within degree caps). Files each
    // endpoint's view by the level order and updates the up-color books.
    void attach_edge_views(VertexId u, VertexId v) {
        const Level lu = verts[u].level, lv = verts[v].level;
        const SlotIdx suv = alloc_slot(v);  // v's entry in u's structure
        const SlotIdx svu = alloc_slot(u);  // u's entry in v's structure
        slots[suv].twin = svu;
        slots[svu].twin = suv;

        if (lu > lv) {
            link_down(u, suv);
            link_up(v, svu, lu);
            adjust_up_color(v, verts[u].color, +1);
        } else if (lu < lv) {
            link_up(u, suv, lv);
            adjust_up_color(u, verts[v].color, +1);
            link_down(v, svu);
        } else {
            link_up(u, suv, lv);
            adjust_up_color(u, verts[v].color, +1);
            link_up(v, svu, lu);
            adjust_up_color(v, verts[u].color, +1);
        }
        edge_map.emplace(edge_key(u, v), u < v ? suv : svu);
        meter->charge_structure(3);  // one per endpoint view, one for the call
    }

    void detach_edge_views(VertexId u, VertexId v) {
        auto it = edge_map.find(edge_key(u, v));
        if (it == edge_map.end()) throw structural_corruption("detach_edge_views: missing handle");
        const SlotIdx sa = it->second;            // owned by min(u,v)
        const SlotIdx sb = slots[sa].twin;        // owned by max(u,v)
        const VertexId a = std::min(u, v), b = std::max(u, v);
        drop_view(a, sa);
        drop_view(b, sb);
        free_slot(sa);
        free_slot(sb);
        edge_map.erase(it);
        meter->charge_structure(3);
    }

    void drop_view(VertexId owner, SlotIdx si) {
        const VertexId peer = slots[si].peer;
        if (slots[si].where == AdjSlot::kSlotDown) {
            unlink_down(owner, si);
        } else {
            unlink_up(owner, si);
            adjust_up_color(owner, verts[peer].color, -1);
        }
    }

    // ---- queries -----------------------------------------------------------

    // Number of neighbors of v strictly below level l. For l >= level(v) this
    // is down_count plus the bucket sizes in [level(v), l); below the vertex's
    // own level it falls back to scanning the down list (audit/test path; the
    // recolor procedures only ask about levels above their vertex).
    std::uint64_t phi(VertexId v, Level l) const {
        const VertexRecord& vr = verts[v];
        if (l >= vr.level) {
            std::uint64_t r = vr.down_count;
            for (Level i = vr.level; i < l; ++i) r += bucket_size(v, i);
            return r;
        }
        std::uint64_t r = 0;
        for (SlotIdx si = vr.down_head; si != kNilSlot; si = slots[si].next)
            if (verts[slots[si].peer].level < l) ++r;
        return r;
    }

    // Tallies the colors of v's down-neighbors into the shared scratch.
    const ScratchOccupancy& down_occupancy_scan(VertexId v) {
        scratch.reset();
        const VertexRecord& vr = verts[v];
        std::int64_t units = 1;
        for (SlotIdx si = vr.down_head; si != kNilSlot; si = slots[si].next) {
            const VertexId w = slots[si].peer;
            scratch.note(verts[w].color, w);
            ++units;
        }
        meter->charge(WorkCat::palette_scan, units);
        return scratch;
    }

    // ---- level moves -------------------------------------------------------

    // Re-files every neighbor view affected by moving v to l_new and keeps both
    // endpoints' color books exact. Touches only down(v), the buckets between
    // the old and new levels, and (when raising) the bucket at l_new, so the
    // cost is O(phi(v, max(l_old, l_new) + 1)) plus the levels traversed.
    void move_vertex_level(VertexId v, Level l_new) {
        const Level l_old = verts[v].level;
        if (l_new < -1 || l_new > top_level)
            throw structural_corruption("move_vertex_level: level out of range");
        if (l_new == l_old) return;
        std::int64_t units = 1;
        if (l_new < l_old) {
            // Former down-neighbors at or above l_new become up-neighbors; v's
            // own view flips in every neighbor whose relative order changed.
            SlotIdx si = verts[v].down_head;
            while (si != kNilSlot) {
                const SlotIdx nx = slots[si].next;
                const VertexId w = slots[si].peer;
                const Level lw = verts[w].level;
                const SlotIdx tw = slots[si].twin;
                if (lw < l_new) {
                    unlink_up(w, tw);
                    link_up(w, tw, l_new);
                } else if (lw == l_new) {
                    unlink_down(v, si);
                    link_up(v, si, lw);
                    adjust_up_color(v, verts[w].color, +1);
                    unlink_up(w, tw);
                    link_up(w, tw, l_new);
                } else {  // l_new < lw < l_old: the pair swaps orientation
                    unlink_down(v, si);
                    link_up(v, si, lw);
                    adjust_up_color(v, verts[w].color, +1);
                    unlink_up(w, tw);
                    link_down(w, tw);
                    adjust_up_color(w, verts[v].color, -1);
                }
                ++units;
                si = nx;
            }
            // Same-level neighbors keep their up(v) slot; v drops below them.
            auto bit = verts[v].up.find(l_old);
            if (bit != verts[v].up.end()) {
                for (SlotIdx s2 = bit->second.head; s2 != kNilSlot; s2 = slots[s2].next) {
                    const VertexId w = slots[s2].peer;
                    const SlotIdx tw = slots[s2].twin;
                    unlink_up(w, tw);
                    link_down(w, tw);
                    adjust_up_color(w, verts[v].color, -1);
                    ++units;
                }
            }
        } else {
            // Raising. v's slot in every original down-neighbor's up list moves
            // to the new bucket.
            for (SlotIdx si = verts[v].down_head; si != kNilSlot; si = slots[si].next) {
                const SlotIdx tw = slots[si].twin;
                const VertexId w = slots[si].peer;
                unlink_up(w, tw);
                link_up(w, tw, l_new);
                ++units;
            }
            // Up-neighbors strictly below l_new drop into down(v). At the old
            // level the pair was mutual-up, so only v's side of the books moves;
            // strictly between, the orientation swaps on both sides.
            for (Level i = l_old; i < l_new; ++i) {
                ++units;
                auto bit = verts[v].up.find(i);
                if (bit == verts[v].up.end()) continue;
                while (bit->second.head != kNilSlot) {
                    const SlotIdx si = bit->second.head;
                    const VertexId w = slots[si].peer;
                    const SlotIdx tw = slots[si].twin;
                    unlink_up(v, si);
                    link_down(v, si);
                    adjust_up_color(v, verts[w].color, -1);
                    if (i == l_old) {
                        unlink_up(w, tw);
                        link_up(w, tw, l_new);
                    } else {
                        unlink_down(w, tw);
                        link_up(w, tw, l_new);
                        adjust_up_color(w, verts[v].color, +1);
                    }
                    ++units;
                    bit = verts[v].up.find(i);
                    if (bit == verts[v].up.end()) break;
                }
            }
            // Neighbors exactly at l_new stay up-neighbors of v, but v now
            // enters their up lists as a same-level member.
            auto bit = verts[v].up.find(l_new);
            if (bit != verts[v].up.end()) {
                for (SlotIdx s2 = bit->second.head; s2 != kNilSlot; s2 = slots[s2].next) {
                    const VertexId w = slots[s2].peer;
                    const SlotIdx tw = slots[s2].twin;
                    unlink_down(w, tw);
                    link_up(w, tw, l_new);
                    adjust_up_color(w, verts[v].color, +1);
                    ++units;
                }
            }
        }
        verts[v].level = l_new;
        meter->charge(WorkCat::set_level, units);
    }

    // ---- introspection helpers (tests, audits) -----------------------------

    std::vector<VertexId> down_members(VertexId v) const {
        std::vector<VertexId> out;
        for (SlotIdx si = verts[v].down_head; si != kNilSlot; si = slots[si].next)
            out.push_back(slots[si].peer);
        return out;
    }

    std::vector<VertexId> up_members(VertexId v, Level l) const {
        std::vector<VertexId> out;
        auto it = verts[v].up.find(l);
        if (it == verts[v].up.end()) return out;
        for (SlotIdx si = it->second.head; si != kNilSlot; si = slots[si].next)
            out.push_back(slots[si].peer);
        return out;
    }

    std::vector<Color> availability_of(VertexId v) const { return verts[v].avail.to_vector(); }

    std::vector<std::pair<VertexId, VertexId>> edges() const {
        std::vector<std::pair<VertexId, VertexId>> out;
        out.reserve(edge_map.size());
        for (const auto& [key, si] : edge_map)
            out.emplace_back(static_cast<VertexId>(key >> 32), static_cast<VertexId>(key & 0xFFFFFFFFu));
        std::sort(out.begin(), out.end());
        return out;
    }

    // From-scratch recomputation of every derived structure against the raw
    // edge map. Returns one line per discrepancy, sorted; empty means the
    // instance is internally consistent.
    AuditResult audit_structures() const {
        AuditResult r;
        std::vector<std::vector<VertexId>> nb(n);
        for (const auto& [key, si] : edge_map) {
            const VertexId a = static_cast<VertexId>(key >> 32);
            const VertexId b = static_cast<VertexId>(key & 0xFFFFFFFFu);
            nb[a].push_back(b);
            nb[b].push_back(a);
            r.units += 1;
        }
        for (VertexId v = 0; v < n; ++v) {
            const VertexRecord& vr = verts[v];
            if (vr.level < -1 || vr.level > top_level)
                r.issues.push_back("vertex " + std::to_string(v) + ": level " + std::to_string(vr.level) +
                                   " outside [-1," + std::to_string(top_level) + "]");
            if (vr.color < 1 || vr.color > static_cast<Color>(delta) + 1)
                r.issues.push_back("vertex " + std::to_string(v) + ": color " + std::to_string(vr.color) +
                                   " outside palette");

            std::vector<VertexId> members;
            std::uint32_t walked = 0;
            for (SlotIdx si = vr.down_head; si != kNilSlot; si = slots[si].next) {
                const VertexId w = slots[si].peer;
                ++walked;
                r.units += 1;
                members.push_back(w);
                if (slots[si].where != AdjSlot::kSlotDown)
                    r.issues.push_back("vertex " + std::to_string(v) + ": down slot for " + std::to_string(w) +
                                       " mis-tagged");
                if (verts[w].level >= vr.level)
                    r.issues.push_back("vertex " + std::to_string(v) + ": down member " + std::to_string(w) +
                                       " at level " + std::to_string(verts[w].level) + " not below " +
                                       std::to_string(vr.level));
            }
            if (walked != vr.down_count)
                r.issues.push_back("vertex " + std::to_string(v) + ": down_count " + std::to_string(vr.down_count) +
                                   " != walked " + std::to_string(walked));

            std::uint32_t up_total = 0;
            std::vector<std::uint32_t> mu_ref(static_cast<std::size_t>(delta) + 2, 0);
            for (const auto& [lvl, bucket] : vr.up) {
                if (bucket.size == 0)
                    r.issues.push_back("vertex " + std::to_string(v) + ": empty bucket at level " +
                                       std::to_string(lvl));
                if (lvl < vr.level)
                    r.issues.push_back("vertex " + std::to_string(v) + ": bucket level " + std::to_string(lvl) +
                                       " below vertex level " + std::to_string(vr.level));
                std::uint32_t bw = 0;
                for (SlotIdx si = bucket.head; si != kNilSlot; si = slots[si].next) {
                    const VertexId w = slots[si].peer;
                    ++bw;
                    r.units += 1;
                    members.push_back(w);
                    if (verts[w].level != lvl)
                        r.issues.push_back("vertex " + std::to_string(v) + ": bucket " + std::to_string(lvl) +
                                           " member " + std::to_string(w) + " has level " +
                                           std::to_string(verts[w].level));
                    if (slots[si].where != static_cast<std::int16_t>(lvl))
                        r.issues.push_back("vertex " + std::to_string(v) + ": up slot for " + std::to_string(w) +
                                           " mis-tagged");
                    if (verts[w].color >= 1 && verts[w].color <= static_cast<Color>(delta) + 1)
                        ++mu_ref[verts[w].color];
                }
                if (bw != bucket.size)
                    r.issues.push_back("vertex " + std::to_string(v) + ": bucket " + std::to_string(lvl) +
                                       " size " + std::to_string(bucket.size) + " != walked " + std::to_string(bw));
                up_total += bw;
            }
            if (up_total != vr.up_count)
                r.issues.push_back("vertex " + std::to_string(v) + ": up_count " + std::to_string(vr.up_count) +
                                   " != walked " + std::to_string(up_total));

            std::sort(members.begin(), members.end());
            std::sort(nb[v].begin(), nb[v].end());
            if (members != nb[v])
                r.issues.push_back("vertex " + std::to_string(v) + ": filed neighbors disagree with edge set");

            for (Color c = 1; c <= static_cast<Color>(delta) + 1; ++c) {
                r.units += 1;
                if (vr.mu_plus[c] != mu_ref[c])
                    r.issues.push_back("vertex " + std::to_string(v) + " color " + std::to_string(c) +
                                       ": mu_plus " + std::to_string(vr.mu_plus[c]) + " != recomputed " +
                                       std::to_string(mu_ref[c]));
            }

            // Availability must be the exact zero-set of the stored counters.
            std::vector<bool> in_avail(static_cast<std::size_t>(delta) + 2, false);
            std::uint32_t avail_walked = 0;
            for (Color c = vr.avail.head; c != 0 && avail_walked <= delta + 2; c = vr.avail.next[c]) {
                ++avail_walked;
                r.units += 1;
                if (c < 1 || c > static_cast<Color>(delta) + 1 || in_avail[c]) {
                    r.issues.push_back("vertex " + std::to_string(v) + ": availability list malformed");
                    break;
                }
                in_avail[c] = true;
            }
            if (avail_walked != vr.avail.size)
                r.issues.push_back("vertex " + std::to_string(v) + ": availability size " +
                                   std::to_string(vr.avail.size) + " != walked " + std::to_string(avail_walked));
            for (Color c = 1; c <= static_cast<Color>(delta) + 1; ++c) {
                const bool want = vr.mu_plus[c] == 0;
                if (in_avail[c] != want) {
                    r.issues.push_back("vertex " + std::to_string(v) + " color " + std::to_string(c) +
                                       ": availability membership " + (in_avail[c] ? "present" : "absent") +
                                       " but mu_plus " + std::to_string(vr.mu_plus[c]));
                }
            }
        }
        std::sort(r.issues.begin(), r.issues.end());
        return r;
    }
};

}  // namespace dyncol
