#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "perc/ball.hpp"
#include "perc/errors.hpp"
#include "perc/graph_model.hpp"
#include "perc/radius_law.hpp"
#include "perc/vertex.hpp"

namespace perc {

// SplitMix64 finalizer. Bijective on 64-bit words, so distinct inputs keep
// distinct states all the way through the chain below.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Stable 64-bit key of a vertex, independent of any container layout.
inline std::uint64_t vertex_key(const Vertex& v) {
    std::uint64_t h = 0x243f6a8885a308d3ULL + v.n;
    for (int i = 0; i < v.n; ++i) {
        h ^= mix64(static_cast<std::uint64_t>(static_cast<std::int64_t>(v.c[i])) + 0x9e3779b97f4a7c15ULL);
        h *= 0x100000001b3ULL;
    }
    return mix64(h);
}

// Uniform double in [0,1) with 53 random bits.
inline double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

namespace detail {
// One salt per independent decision attached to a vertex: lane 0 drives
// occupation, lane 1 drives the radius quantile. Keeping the lanes separate
// makes the radii invariant under changes of p, which the monotone-coupling
// tests rely on.
inline constexpr std::uint64_t lane_salt[2] = {0x9e3779b97f4a7c15ULL, 0xd1b54a32d192ed03ULL};
} // namespace detail

inline double vertex_uniform(std::uint64_t seed, const Vertex& v, int lane) {
    return to_unit(mix64(mix64(seed ^ detail::lane_salt[lane]) ^ vertex_key(v)));
}

// Seed for the k-th independent replica of a base seed.
inline std::uint64_t replica_seed(std::uint64_t seed, std::int64_t k) {
    return mix64(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(k + 1));
}

// Per-vertex state of the occupation/radius process.
struct Mark {
    bool occupied = false;
    std::int64_t radius = 0;
};

// The full model triple: ambient graph, occupation density, radius law.
struct ProcessSpec {
    ModelPtr model;
    double p = 0;
    RadiusLaw law = RadiusLaw::constant(0);

    void validate() const {
        if (!model) throw config_error("process has no graph model");
        if (!(p >= 0.0 && p <= 1.0)) throw config_error("occupation density must be in [0,1]");
    }
};

// Marks of one vertex under one seed. Pure function of (seed, vertex), so any
// two windows agree wherever they overlap.
inline Mark marks_at(const ProcessSpec& spec, std::uint64_t seed, const Vertex& v) {
    Mark m;
    m.occupied = vertex_uniform(seed, v, 0) < spec.p;
    m.radius = spec.law.quantile(vertex_uniform(seed, v, 1));
    return m;
}

// A sampled window: the ball B(center, L) together with the mark of every
// vertex in it, indexed parallel to window->members.
struct Configuration {
    ProcessSpec spec;
    std::uint64_t seed = 0;
    std::shared_ptr<const BallView> window;
    std::vector<Mark> marks;

    const Mark& mark_of(const Vertex& v) const {
        std::int64_t i = window->index_of(v);
        if (i < 0) throw window_error("vertex outside the sampled window");
        return marks[static_cast<std::size_t>(i)];
    }
};

inline Configuration sample_window(const ProcessSpec& spec, const Vertex& center,
                                   std::int64_t L, std::uint64_t seed,
                                   std::int64_t budget = default_vertex_budget) {
    spec.validate();
    Configuration cfg;
    cfg.spec = spec;
    cfg.seed = seed;
    cfg.window = ball(*spec.model, center, L, budget);
    cfg.marks.reserve(cfg.window->members.size());
    for (const Vertex& v : cfg.window->members) cfg.marks.push_back(marks_at(spec, seed, v));
    return cfg;
}

} // namespace perc
