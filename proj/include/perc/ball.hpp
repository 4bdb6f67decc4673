#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "perc/graph_model.hpp"

namespace perc {

// Per-ball vertex budget. Enumeration throws budget_error beyond this.
inline constexpr std::int64_t default_vertex_budget = 5'000'000;

// The closed ball B(center, radius) with exact distances from the center.
// Members are sorted by (distance, key), so each sphere is a contiguous run;
// sphere_offset[k] .. sphere_offset[k+1] indexes the members at distance k.
struct BallView {
    Vertex center;
    std::int64_t radius = 0;
    std::vector<Vertex> members;
    std::vector<std::int64_t> dist;           // parallel to members
    std::vector<std::size_t> sphere_offset;   // size radius+2
    std::unordered_map<Vertex, std::uint32_t, VertexHash> index;

    std::int64_t size() const { return static_cast<std::int64_t>(members.size()); }

    bool contains(const Vertex& v) const { return index.count(v) != 0; }

    // -1 when v is not a member.
    std::int64_t dist_of(const Vertex& v) const {
        auto it = index.find(v);
        return it == index.end() ? -1 : dist[it->second];
    }

    // Position of v in members, or -1 when absent.
    std::int64_t index_of(const Vertex& v) const {
        auto it = index.find(v);
        return it == index.end() ? -1 : static_cast<std::int64_t>(it->second);
    }

    std::int64_t sphere_count(std::int64_t k) const {
        if (k < 0 || k > radius) return 0;
        return static_cast<std::int64_t>(sphere_offset[k + 1] - sphere_offset[k]);
    }
};

namespace detail {

// Bucket-queue single-source distances, exact for positive integer weights:
// every shortest path to a vertex within `radius` stays within `radius` of
// the source, so expansion over the implicit graph is self-contained.
template <typename Visit>
void dial_expand(const GraphModel& model, const Vertex& source, std::int64_t radius,
                 std::int64_t budget, Visit&& visit) {
    if (radius < 0) throw config_error("ball radius must be >= 0");
    std::unordered_map<Vertex, std::int64_t, VertexHash> dist;
    std::vector<std::vector<Vertex>> bucket(static_cast<std::size_t>(radius) + 1);
    dist.emplace(source, 0);
    bucket[0].push_back(source);
    std::vector<Neighbor> nbr;
    for (std::int64_t d = 0; d <= radius; ++d) {
        auto& bd = bucket[d];
        for (std::size_t i = 0; i < bd.size(); ++i) {
            Vertex v = bd[i];
            auto it = dist.find(v);
            if (it->second != d) continue; // stale entry, improved later
            if (!visit(v, d)) continue;    // caller may prune expansion at v
            if (d == radius) continue;
            nbr.clear();
            model.neighbors(v, nbr);
            for (const Neighbor& e : nbr) {
                if (e.weight < 1) throw config_error("edge weights must be positive");
                std::int64_t nd = d + e.weight;
                if (nd > radius) continue;
                auto [jt, fresh] = dist.emplace(e.to, nd);
                if (!fresh) {
                    if (jt->second <= nd) continue;
                    jt->second = nd;
                } else if (static_cast<std::int64_t>(dist.size()) > budget) {
                    throw budget_error("ball(" + to_string(source) + ", " + std::to_string(radius) +
                                       ") exceeded the vertex budget of " + std::to_string(budget));
                }
                bucket[nd].push_back(e.to);
            }
        }
        bd.clear();
        bd.shrink_to_fit();
    }
}

} // namespace detail

inline std::shared_ptr<const BallView> ball(const GraphModel& model, const Vertex& center,
                                            std::int64_t radius,
                                            std::int64_t budget = default_vertex_budget) {
    auto view = std::make_shared<BallView>();
    view->center = center;
    view->radius = radius;

    std::vector<std::pair<std::int64_t, Vertex>> got;
    detail::dial_expand(model, center, radius, budget, [&](const Vertex& v, std::int64_t d) {
        got.push_back({d, v});
        return true;
    });
    std::sort(got.begin(), got.end());

    view->members.reserve(got.size());
    view->dist.reserve(got.size());
    view->index.reserve(got.size());
    view->sphere_offset.assign(static_cast<std::size_t>(radius) + 2, 0);
    for (const auto& [d, v] : got) {
        view->index.emplace(v, static_cast<std::uint32_t>(view->members.size()));
        view->members.push_back(v);
        view->dist.push_back(d);
        view->sphere_offset[d + 1]++;
    }
    std::partial_sum(view->sphere_offset.begin(), view->sphere_offset.end(), view->sphere_offset.begin());
    return view;
}

// gamma(v, r) = |B(v, r)|.
inline std::int64_t growth(const GraphModel& model, const Vertex& center, std::int64_t radius,
                           std::int64_t budget = default_vertex_budget) {
    std::int64_t count = 0;
    detail::dial_expand(model, center, radius, budget, [&](const Vertex&, std::int64_t) {
        ++count;
        return true;
    });
    return count;
}

} // namespace perc
