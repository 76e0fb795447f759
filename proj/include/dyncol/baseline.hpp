#pragma once

#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "types.hpp"

namespace dyncol {

// Exhaustive properness check: returns every edge whose endpoints share a
// color. Works on plain arrays so it can audit any implementation.
inline std::vector<std::pair<VertexId, VertexId>> check_proper(
    const std::vector<Color>& colors, const std::vector<std::pair<VertexId, VertexId>>& edges) {
    std::vector<std::pair<VertexId, VertexId>> bad;
    for (const auto& [u, v] : edges)
        if (colors[u] == colors[v]) bad.emplace_back(u, v);
    return bad;
}

// Reference dynamic colorer with no cleverness: deletions keep the coloring,
// and a conflicting insertion recolors the first-listed endpoint with the
// smallest color absent from its neighborhood. One neighborhood scan per
// conflict, counted in scan_units.
class NaiveState {
public:
    NaiveState(std::uint32_t n, std::uint32_t delta) : n_(n), delta_(delta) {
        adj_.resize(n);
        colors_.assign(n, 1);
        used_.assign(static_cast<std::size_t>(delta) + 2, 0);
    }

    UpdateStatus apply_update(const UpdateEvent& e) {
        const VertexId u = e.u, v = e.v;
        if (u == v || u >= n_ || v >= n_) return UpdateStatus::invalid_edge;
        if (e.kind == UpdateEvent::Kind::insert) {
            if (adj_[u].count(v)) return UpdateStatus::duplicate_edge;
            if (adj_[u].size() >= delta_ || adj_[v].size() >= delta_)
                return UpdateStatus::degree_cap_exceeded;
            adj_[u].insert(v);
            adj_[v].insert(u);
            if (colors_[u] == colors_[v]) recolor_first_fit(u);
            return UpdateStatus::ok;
        }
        if (!adj_[u].count(v)) return UpdateStatus::missing_edge;
        adj_[u].erase(v);
        adj_[v].erase(u);
        return UpdateStatus::ok;
    }

    Color color(VertexId v) const { return colors_[v]; }
    const std::vector<Color>& coloring() const { return colors_; }
    std::uint32_t degree(VertexId v) const { return static_cast<std::uint32_t>(adj_[v].size()); }
    std::uint64_t scan_units() const { return scan_units_; }

    std::vector<std::pair<VertexId, VertexId>> edges() const {
        std::vector<std::pair<VertexId, VertexId>> out;
        for (VertexId u = 0; u < n_; ++u)
            for (VertexId v : adj_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    std::vector<std::pair<VertexId, VertexId>> proper_violations() const {
        return check_proper(colors_, edges());
    }

private:
    void recolor_first_fit(VertexId x) {
        ++scan_stamp_;
        for (VertexId w : adj_[x]) {
            used_[colors_[w]] = scan_stamp_;
            ++scan_units_;
        }
        for (Color c = 1; c <= static_cast<Color>(delta_) + 1; ++c) {
            if (used_[c] != scan_stamp_) {
                colors_[x] = c;
                return;
            }
        }
        // Degree <= delta leaves at least one of the delta+1 colors free.
        throw structural_corruption("NaiveState: no free color at vertex " + std::to_string(x));
    }

    std::uint32_t n_;
    std::uint32_t delta_;
    std::vector<std::unordered_set<VertexId>> adj_;
    std::vector<Color> colors_;
    std::vector<std::uint64_t> used_;
    std::uint64_t scan_stamp_ = 0;
    std::uint64_t scan_units_ = 0;
};

}  // namespace dyncol
