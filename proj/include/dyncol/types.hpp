#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace dyncol {

// Vertices are dense ids in [0, n). Colors live in [1, delta+1]; 0 means "none".
using VertexId = std::uint32_t;
using Color = std::int32_t;

constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
constexpr Color kNoColor = 0;

// Levels of the hierarchical partition, in [-1, L].
using Level = int;

inline std::int64_t pow3(int k) {
    // 3^39 still fits in int64; levels stay far below that.
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) r *= 3;
    return r;
}

// Top level L: smallest k with 3^k >= n-1, minus one. Degenerates to -1 for n <= 2.
inline Level level_cap(std::uint32_t n) {
    if (n <= 2) return -1;
    int k = 0;
    while (pow3(k) < static_cast<std::int64_t>(n) - 1) ++k;
    return k - 1;
}

inline std::uint64_t edge_key(VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

struct UpdateEvent {
    enum class Kind : std::uint8_t { insert, remove };
    Kind kind = Kind::insert;
    VertexId u = 0;
    VertexId v = 0;

    static UpdateEvent ins(VertexId a, VertexId b) { return {Kind::insert, a, b}; }
    static UpdateEvent del(VertexId a, VertexId b) { return {Kind::remove, a, b}; }

    bool operator==(const UpdateEvent&) const = default;
};

enum class UpdateStatus : std::uint8_t {
    ok,
    duplicate_edge,
    missing_edge,
    invalid_edge,
    degree_cap_exceeded,
};

inline const char* to_string(UpdateStatus s) {
    switch (s) {
    case UpdateStatus::ok: return "ok";
    case UpdateStatus::duplicate_edge: return "duplicate-edge";
    case UpdateStatus::missing_edge: return "missing-edge";
    case UpdateStatus::invalid_edge: return "invalid-edge";
    case UpdateStatus::degree_cap_exceeded: return "degree-cap-exceeded";
    }
    return "?";
}

// Engine bugs (counter underflow, missing handle) abort the run; these are not
// input errors and no repair is attempted.
struct structural_corruption : std::logic_error {
    explicit structural_corruption(const std::string& what) : std::logic_error(what) {}
};

struct invalid_config : std::invalid_argument {
    explicit invalid_config(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace dyncol
