#pragma once

#include <cstdint>
#include <vector>

#include "types.hpp"

namespace dyncol {

// Color-occupancy scratch shared by the scan-based recolor procedures. Entries
// are versioned by a generation tag so reset() is O(1); a counter is valid only
// if its tag matches the current generation. One representative vertex is kept
// per color so a unique occupant can be recovered without a second pass.
class ScratchOccupancy {
public:
    explicit ScratchOccupancy(Color max_color = 0) { resize(max_color); }

    void resize(Color max_color) {
        count_.assign(static_cast<std::size_t>(max_color) + 1, 0);
        rep_.assign(static_cast<std::size_t>(max_color) + 1, kNoVertex);
        gen_.assign(static_cast<std::size_t>(max_color) + 1, 0);
        current_ = 0;
    }

    void reset() { ++current_; }

    void note(Color c, VertexId holder) {
        if (gen_[c] != current_) {
            gen_[c] = current_;
            count_[c] = 1;
            rep_[c] = holder;
        } else {
            ++count_[c];
        }
    }

    std::uint32_t occupancy(Color c) const { return gen_[c] == current_ ? count_[c] : 0; }
    VertexId occupant(Color c) const { return gen_[c] == current_ ? rep_[c] : kNoVertex; }

private:
    std::vector<std::uint32_t> count_;
    std::vector<VertexId> rep_;
    std::vector<std::uint64_t> gen_;
    std::uint64_t current_ = 0;
};

}  // namespace dyncol
