#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rng.hpp"
#include "types.hpp"

namespace dyncol {

struct StreamHeader {
    std::uint32_t n = 0;
    std::uint32_t delta = 0;
};

struct Stream {
    StreamHeader header;
    std::vector<UpdateEvent> events;
};

struct stream_parse_error : std::runtime_error {
    int line;
    stream_parse_error(int line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

// Text format: first significant line "n=<int> delta=<int>", then one event
// per line, "+ <u> <v>" or "- <u> <v>" with 0-based ids below n. Lines whose
// first character is '#' are comments.
inline Stream parse_stream(std::istream& in) {
    Stream s;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (!have_header) {
            std::string ntok, dtok, extra;
            ls >> ntok >> dtok;
            if (ls >> extra) throw stream_parse_error(lineno, "trailing tokens in header");
            if (ntok.rfind("n=", 0) != 0 || dtok.rfind("delta=", 0) != 0)
                throw stream_parse_error(lineno, "expected header 'n=<int> delta=<int>'");
            try {
                s.header.n = static_cast<std::uint32_t>(std::stoul(ntok.substr(2)));
                s.header.delta = static_cast<std::uint32_t>(std::stoul(dtok.substr(6)));
            } catch (const std::exception&) {
                throw stream_parse_error(lineno, "bad integer in header");
            }
            if (s.header.n == 0) throw stream_parse_error(lineno, "n must be at least 1");
            if (s.header.delta == 0) throw stream_parse_error(lineno, "delta must be at least 1");
            have_header = true;
            continue;
        }
        std::string op;
        long long a = -1, b = -1;
        ls >> op >> a >> b;
        if (ls.fail()) throw stream_parse_error(lineno, "malformed event line");
        std::string extra;
        if (ls >> extra) throw stream_parse_error(lineno, "trailing tokens in event line");
        if (op != "+" && op != "-") throw stream_parse_error(lineno, "unknown op '" + op + "'");
        if (a < 0 || b < 0 || a >= s.header.n || b >= s.header.n)
            throw stream_parse_error(lineno, "vertex id out of range");
        if (a == b) throw stream_parse_error(lineno, "self-loop");
        const auto u = static_cast<VertexId>(a), v = static_cast<VertexId>(b);
        s.events.push_back(op == "+" ? UpdateEvent::ins(u, v) : UpdateEvent::del(u, v));
    }
    if (!have_header) throw stream_parse_error(lineno == 0 ? 1 : lineno, "missing header");
    return s;
}

inline Stream parse_stream_text(const std::string& text) {
    std::istringstream in(text);
    return parse_stream(in);
}

inline void write_stream(const Stream& s, std::ostream& out) {
    out << "n=" << s.header.n << " delta=" << s.header.delta << "\n";
    for (const UpdateEvent& e : s.events)
        out << (e.kind == UpdateEvent::Kind::insert ? "+ " : "- ") << e.u << " " << e.v << "\n";
}

inline std::string write_stream_text(const Stream& s) {
    std::ostringstream out;
    write_stream(s, out);
    return out.str();
}

// ---- workload generators ---------------------------------------------------

struct GenModel {
    enum class Kind : std::uint8_t { churn, sliding_window, star_stress };
    Kind kind = Kind::churn;
    double churn_p = 0.6;     // insert probability per event
    std::uint32_t window = 0; // live-edge target for sliding_window

    static GenModel parse(const std::string& text) {
        GenModel m;
        const auto colon = text.find(':');
        const std::string name = text.substr(0, colon);
        const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
        if (name == "churn") {
            m.kind = Kind::churn;
            if (!arg.empty()) m.churn_p = std::stod(arg);
            if (!(m.churn_p >= 0.0 && m.churn_p <= 1.0))
                throw invalid_config("churn probability outside [0,1]");
        } else if (name == "sliding") {
            m.kind = Kind::sliding_window;
            if (arg.empty()) throw invalid_config("sliding requires a window size, e.g. sliding:500");
            m.window = static_cast<std::uint32_t>(std::stoul(arg));
        } else if (name == "star") {
            m.kind = Kind::star_stress;
        } else {
            throw invalid_config("unknown model '" + name + "'");
        }
        return m;
    }

    std::string to_string() const {
        switch (kind) {
        case Kind::churn: {
            std::ostringstream os;
            os << "churn:" << churn_p;
            return os.str();
        }
        case Kind::sliding_window: return "sliding:" + std::to_string(window);
        case Kind::star_stress: return "star";
        }
        return "?";
    }
};

// Edge bookkeeping mirror used by the generators. Tracks exactly the validity
// rules the engine enforces, so generated streams are always accepted, and it
// never consults engine state: streams are fixed by (model, params, seed).
class ShadowGraph {
public:
    ShadowGraph(std::uint32_t n, std::uint32_t delta)
        : n_(n), eff_cap_(std::min<std::uint64_t>(delta, n > 0 ? n - 1 : 0)), deg_(n, 0) {
        unsat_pos_.assign(n, kNone);
        for (VertexId v = 0; v < n; ++v)
            if (eff_cap_ > 0) push_unsat(v);
    }

    std::uint64_t eff_cap() const { return eff_cap_; }
    std::uint64_t live_count() const { return live_.size(); }
    std::uint32_t degree(VertexId v) const { return deg_[v]; }
    bool has(VertexId u, VertexId v) const { return present_.count(edge_key(u, v)) != 0; }

    void insert(VertexId u, VertexId v) {
        present_.insert(edge_key(u, v));
        live_pos_[edge_key(u, v)] = live_.size();
        live_.push_back(edge_key(u, v));
        bump(u, +1);
        bump(v, +1);
    }

    void erase(VertexId u, VertexId v) {
        const std::uint64_t key = edge_key(u, v);
        present_.erase(key);
        const std::size_t pos = live_pos_.at(key);
        const std::uint64_t back = live_.back();
        live_[pos] = back;
        live_pos_[back] = pos;
        live_.pop_back();
        live_pos_.erase(key);
        bump(u, -1);
        bump(v, -1);
    }

    // Uniform over absent pairs whose endpoints are both under the cap
    // (sampled by rejection over the unsaturated set). Returns false when no
    // such pair turned up within the try budget.
    bool sample_absent_pair(RandomSource& rng, VertexId& u, VertexId& v, int tries = 64) const {
        if (unsat_.size() < 2) return false;
        for (int i = 0; i < tries; ++i) {
            const VertexId a = unsat_[rng.uniform_below(unsat_.size())];
            const VertexId b = unsat_[rng.uniform_below(unsat_.size())];
            if (a == b || has(a, b)) continue;
            u = a;
            v = b;
            return true;
        }
        return false;
    }

    std::pair<VertexId, VertexId> sample_present(RandomSource& rng) const {
        const std::uint64_t key = live_[rng.uniform_below(live_.size())];
        return {static_cast<VertexId>(key >> 32), static_cast<VertexId>(key & 0xFFFFFFFFu)};
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    void bump(VertexId v, int d) {
        const bool was_sat = deg_[v] >= eff_cap_;
        deg_[v] = static_cast<std::uint32_t>(static_cast<std::int64_t>(deg_[v]) + d);
        const bool now_sat = deg_[v] >= eff_cap_;
        if (!was_sat && now_sat) drop_unsat(v);
        if (was_sat && !now_sat) push_unsat(v);
    }

    void push_unsat(VertexId v) {
        unsat_pos_[v] = unsat_.size();
        unsat_.push_back(v);
    }

    void drop_unsat(VertexId v) {
        const std::size_t pos = unsat_pos_[v];
        const VertexId back = unsat_.back();
        unsat_[pos] = back;
        unsat_pos_[back] = pos;
        unsat_.pop_back();
        unsat_pos_[v] = kNone;
    }

    std::uint32_t n_;
    std::uint64_t eff_cap_;
    std::vector<std::uint32_t> deg_;
    std::unordered_set<std::uint64_t> present_;
    std::vector<std::uint64_t> live_;
    std::unordered_map<std::uint64_t, std::size_t> live_pos_;
    std::vector<VertexId> unsat_;
    std::vector<std::size_t> unsat_pos_;
};

namespace detail {

inline void churn_step(ShadowGraph& g, RandomSource& rng, double p, std::vector<UpdateEvent>& out) {
    const bool want_insert = rng.uniform01() < p;
    VertexId u, v;
    if (want_insert) {
        if (g.sample_absent_pair(rng, u, v)) {
            g.insert(u, v);
            out.push_back(UpdateEvent::ins(u, v));
            return;
        }
        // No feasible insertion: fall through to a deletion.
    }
    if (g.live_count() > 0) {
        auto [a, b] = g.sample_present(rng);
        g.erase(a, b);
        out.push_back(UpdateEvent::del(a, b));
        return;
    }
    // Empty graph and the coin said delete: insert instead.
    if (!g.sample_absent_pair(rng, u, v))
        throw invalid_config("churn: no feasible update (n or delta too small)");
    g.insert(u, v);
    out.push_back(UpdateEvent::ins(u, v));
}

}  // namespace detail

// Deterministic stream generation. Each model maintains only its shadow state;
// infeasible random picks are resampled within a bounded budget and then fall
// back to the opposite action, so every emitted event is valid.
inline Stream generate(const GenModel& model, std::uint32_t n, std::uint32_t delta, std::uint64_t t,
                       std::uint64_t seed) {
    Stream s;
    s.header = {n, delta};
    if (n == 0) throw invalid_config("generate: n must be at least 1");
    if (t == 0) return s;
    ShadowGraph g(n, delta);
    if (n < 2 || g.eff_cap() < 1)
        throw invalid_config("generate: no edge can ever be inserted with this n/delta");
    RandomSource rng(seed);
    s.events.reserve(t);

    switch (model.kind) {
    case GenModel::Kind::churn: {
        for (std::uint64_t i = 0; i < t; ++i) detail::churn_step(g, rng, model.churn_p, s.events);
        break;
    }
    case GenModel::Kind::sliding_window: {
        const std::uint64_t max_edges = static_cast<std::uint64_t>(n) * g.eff_cap() / 2;
        if (model.window < 1 || model.window > max_edges)
            throw invalid_config("sliding window outside [1, " + std::to_string(max_edges) + "]");
        std::deque<std::pair<VertexId, VertexId>> fifo;
        for (std::uint64_t i = 0; i < t; ++i) {
            VertexId u, v;
            if (g.live_count() < model.window && g.sample_absent_pair(rng, u, v)) {
                g.insert(u, v);
                fifo.emplace_back(u, v);
                s.events.push_back(UpdateEvent::ins(u, v));
            } else if (!fifo.empty()) {
                auto [a, b] = fifo.front();
                fifo.pop_front();
                g.erase(a, b);
                s.events.push_back(UpdateEvent::del(a, b));
            } else {
                throw invalid_config("sliding: wedged with an empty window");
            }
        }
        break;
    }
    case GenModel::Kind::star_stress: {
        const VertexId hubs = static_cast<VertexId>(std::max<std::uint32_t>(1, std::min<std::uint32_t>(8, n / 250)));
        if (n < hubs + 2) throw invalid_config("star: n too small");
        for (std::uint64_t i = 0; i < t; ++i) {
            const bool leaf_action = rng.uniform01() < 0.25;
            bool emitted = false;
            if (leaf_action) {
                // Background churn restricted to leaf-leaf pairs.
                const bool want_insert = rng.uniform01() < 0.5;
                VertexId u, v;
                if (want_insert) {
                    for (int tr = 0; tr < 64 && !emitted; ++tr) {
                        if (!g.sample_absent_pair(rng, u, v)) break;
                        if (u < hubs || v < hubs) continue;
                        g.insert(u, v);
                        s.events.push_back(UpdateEvent::ins(u, v));
                        emitted = true;
                    }
                } else if (g.live_count() > 0) {
                    for (int tr = 0; tr < 64 && !emitted; ++tr) {
                        auto [a, b] = g.sample_present(rng);
                        if (a < hubs || b < hubs) continue;
                        g.erase(a, b);
                        s.events.push_back(UpdateEvent::del(a, b));
                        emitted = true;
                    }
                }
            }
            if (!emitted) {
                // Hub action: fill towards the cap, shed an edge when full.
                const VertexId h = static_cast<VertexId>(i % hubs);
                if (g.degree(h) < g.eff_cap()) {
                    VertexId leaf = kNoVertex;
                    for (int tr = 0; tr < 128; ++tr) {
                        const VertexId cand =
                            static_cast<VertexId>(hubs + rng.uniform_below(n - hubs));
                        if (g.has(h, cand) || g.degree(cand) >= g.eff_cap()) continue;
                        leaf = cand;
                        break;
                    }
                    if (leaf != kNoVertex) {
                        g.insert(h, leaf);
                        s.events.push_back(UpdateEvent::ins(h, leaf));
                        emitted = true;
                    }
                }
                if (!emitted && g.degree(h) > 0) {
                    for (int tr = 0; tr < 128 && !emitted; ++tr) {
                        auto [a, b] = g.sample_present(rng);
                        if (a != h && b != h) continue;
                        g.erase(a, b);
                        s.events.push_back(UpdateEvent::del(a, b));
                        emitted = true;
                    }
                }
                if (!emitted) detail::churn_step(g, rng, 0.5, s.events);
            }
        }
        break;
    }
    }
    return s;
}

}  // namespace dyncol
