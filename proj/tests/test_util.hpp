// Shared helpers for the test suites: an independent adjacency mirror, a
// from-first-principles phi computation, and small fixture utilities.
#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "dyncol/dyncol.hpp"

namespace testutil {

// Adjacency mirror maintained by the test itself, never fed from engine
// queries, so engine bookkeeping bugs cannot leak into the oracle.
struct RefGraph {
    std::uint32_t n;
    std::vector<std::set<dyncol::VertexId>> adj;

    explicit RefGraph(std::uint32_t n_) : n(n_), adj(n_) {}

    void insert(dyncol::VertexId u, dyncol::VertexId v) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    void erase(dyncol::VertexId u, dyncol::VertexId v) {
        adj[u].erase(v);
        adj[v].erase(u);
    }
    bool has(dyncol::VertexId u, dyncol::VertexId v) const { return adj[u].count(v) != 0; }
    std::size_t degree(dyncol::VertexId v) const { return adj[v].size(); }

    std::vector<std::pair<dyncol::VertexId, dyncol::VertexId>> edges() const {
        std::vector<std::pair<dyncol::VertexId, dyncol::VertexId>> out;
        for (dyncol::VertexId u = 0; u < n; ++u)
            for (dyncol::VertexId v : adj[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    // Mirrors one stream event; returns false when the event would be invalid
    // (callers that generate streams themselves should never see false).
    bool apply(const dyncol::UpdateEvent& e) {
        if (e.u == e.v || e.u >= n || e.v >= n) return false;
        if (e.kind == dyncol::UpdateEvent::Kind::insert) {
            if (has(e.u, e.v)) return false;
            insert(e.u, e.v);
        } else {
            if (!has(e.u, e.v)) return false;
            erase(e.u, e.v);
        }
        return true;
    }
};

// Count of v's neighbors sitting strictly below level l, straight from the
// definition.
inline std::uint64_t ref_phi(const RefGraph& g, const std::vector<dyncol::Level>& levels,
                             dyncol::VertexId v, dyncol::Level l) {
    std::uint64_t r = 0;
    for (dyncol::VertexId w : g.adj[v])
        if (levels[w] < l) ++r;
    return r;
}

inline std::vector<dyncol::Level> levels_of(const dyncol::Engine& e) {
    std::vector<dyncol::Level> out(e.config().n);
    for (dyncol::VertexId v = 0; v < e.config().n; ++v) out[v] = e.level(v);
    return out;
}

// Recolors an isolated vertex directly. Only safe while nothing is attached:
// no neighbor keeps a record of the old color yet.
inline void paint_isolated(dyncol::Engine& e, dyncol::VertexId v, dyncol::Color c) {
    if (e.graph_.degree(v) != 0) throw std::logic_error("paint_isolated: vertex has edges");
    e.graph_.verts[v].color = c;
}

inline dyncol::UpdateStatus ins(dyncol::Engine& e, dyncol::VertexId u, dyncol::VertexId v) {
    return e.apply_update(dyncol::UpdateEvent::ins(u, v));
}
inline dyncol::UpdateStatus del(dyncol::Engine& e, dyncol::VertexId u, dyncol::VertexId v) {
    return e.apply_update(dyncol::UpdateEvent::del(u, v));
}

// Smallest seed whose first uniform_below(k) draw lands on `want`; used to pin
// sampled branches in fixtures.
inline std::uint64_t seed_for_first_pick(std::uint64_t k, std::uint64_t want) {
    for (std::uint64_t s = 1;; ++s) {
        dyncol::RandomSource r(s);
        if (r.uniform_below(k) == want) return s;
    }
}

}  // namespace testutil
