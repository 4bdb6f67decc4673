#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>

#include "perc/errors.hpp"

namespace perc {

// A graph vertex as a short tuple of integer coordinates. The meaning of the
// coordinates is model-specific: lattice points for Z^d, group elements
// (a, b, c) for the Heisenberg model, (level, position) for trees, (id) for
// loaded graphs. Unused slots stay zero, so tuple equality and lexicographic
// order double as the canonical key equality and key order.
struct Vertex {
    static constexpr int max_arity = 8;

    std::array<std::int32_t, max_arity> c{};
    std::uint8_t n = 1;

    friend bool operator==(const Vertex& a, const Vertex& b) {
        return a.n == b.n && a.c == b.c;
    }
    friend bool operator!=(const Vertex& a, const Vertex& b) { return !(a == b); }
    // Canonical key order: coordinate tuple, lexicographic.
    friend bool operator<(const Vertex& a, const Vertex& b) {
        return a.c < b.c;
    }
};

inline Vertex make_vertex(std::initializer_list<std::int64_t> coords) {
    if (coords.size() == 0 || coords.size() > Vertex::max_arity)
        throw config_error("vertex arity must be 1.." + std::to_string(Vertex::max_arity));
    Vertex v;
    v.n = static_cast<std::uint8_t>(coords.size());
    int i = 0;
    for (std::int64_t x : coords) {
        if (x < INT32_MIN || x > INT32_MAX)
            throw budget_error("vertex coordinate overflows 32-bit range");
        v.c[i++] = static_cast<std::int32_t>(x);
    }
    return v;
}

struct VertexHash {
    std::size_t operator()(const Vertex& v) const noexcept {
        std::uint64_t h = 0x243f6a8885a308d3ull ^ v.n;
        for (int i = 0; i < v.n; ++i) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.c[i])) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
            h ^= h >> 33;
        }
        return static_cast<std::size_t>(h);
    }
};

// "3:-2" style rendering, used in CSV columns and error messages.
inline std::string to_string(const Vertex& v) {
    std::string s;
    for (int i = 0; i < v.n; ++i) {
        if (i) s += ':';
        s += std::to_string(v.c[i]);
    }
    return s;
}

} // namespace perc
