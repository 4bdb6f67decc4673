#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "perc/ball.hpp"
#include "perc/errors.hpp"
#include "perc/sampler.hpp"

namespace perc {

// Edge test of the occupied-ball graph: u and w are linked when either one is
// occupied with a radius reaching the other. Both marks must lie in the window.
inline bool edge_present(const Configuration& cfg, const Vertex& u, const Vertex& w) {
    if (u == w) throw config_error("edge is defined for distinct vertices");
    const Mark& mu = cfg.mark_of(u);
    const Mark& mw = cfg.mark_of(w);
    std::int64_t d = cfg.spec.model->distance(u, w);
    return (mu.occupied && d <= mu.radius) || (mw.occupied && d <= mw.radius);
}

namespace detail {

// Adjacency of the occupied-ball graph restricted to the window, as lists of
// member indices. Every edge has an occupied endpoint, so the union of stars
// B(w, R_w) over occupied w is exactly the edge set. Lists may hold duplicates
// when two stars share an edge; traversals tolerate that.
inline std::vector<std::vector<std::uint32_t>> window_links(const Configuration& cfg,
                                                            std::int64_t budget) {
    const BallView& win = *cfg.window;
    std::vector<std::vector<std::uint32_t>> adj(win.members.size());
    std::int64_t cap = 2 * win.radius; // no window vertex is farther than this from a member
    for (std::size_t i = 0; i < win.members.size(); ++i) {
        const Mark& m = cfg.marks[i];
        if (!m.occupied || m.radius < 1) continue;
        std::int64_t reach = std::min(m.radius, cap);
        dial_expand(*cfg.spec.model, win.members[i], reach, budget,
                    [&](const Vertex& u, std::int64_t) {
                        std::int64_t j = win.index_of(u);
                        if (j >= 0 && static_cast<std::size_t>(j) != i) {
                            adj[i].push_back(static_cast<std::uint32_t>(j));
                            adj[static_cast<std::size_t>(j)].push_back(static_cast<std::uint32_t>(i));
                        }
                        return true;
                    });
    }
    return adj;
}

} // namespace detail

// Connected component of the occupied-ball graph inside the window.
// censored warns that the true (whole-graph) cluster may extend past the
// window: some member sits within the largest sampled radius of the boundary,
// where an unseen outside center could attach.
struct ClusterResult {
    Vertex root;
    std::vector<Vertex> members; // sorted by key
    std::int64_t D = 0;          // max graph distance from root over members
    bool censored = false;
};

inline ClusterResult cluster(const Configuration& cfg, const Vertex& v,
                             std::int64_t budget = default_vertex_budget) {
    const BallView& win = *cfg.window;
    std::int64_t root = win.index_of(v);
    if (root < 0) throw window_error("cluster root lies outside the sampled window");

    auto adj = detail::window_links(cfg, budget);
    std::vector<char> seen(win.members.size(), 0);
    std::vector<std::uint32_t> order;
    order.push_back(static_cast<std::uint32_t>(root));
    seen[static_cast<std::size_t>(root)] = 1;
    for (std::size_t head = 0; head < order.size(); ++head)
        for (std::uint32_t j : adj[order[head]])
            if (!seen[j]) {
                seen[j] = 1;
                order.push_back(j);
            }

    std::int64_t rmax = 0;
    for (const Mark& m : cfg.marks) rmax = std::max(rmax, m.radius);

    ClusterResult out;
    out.root = v;
    out.members.reserve(order.size());
    for (std::uint32_t i : order) {
        const Vertex& u = win.members[i];
        out.members.push_back(u);
        out.D = std::max(out.D, cfg.spec.model->distance(v, u));
        if (win.dist[i] + rmax > win.radius) out.censored = true;
    }
    std::sort(out.members.begin(), out.members.end());
    return out;
}

// Escape event at scale r: the component of v in the subgraph induced on
// B(v,10r) reaches outside B(v,8r). Reads marks only inside B(v,10r), so the
// result is independent of everything farther out.
inline bool event_G(const Configuration& cfg, const Vertex& v, std::int64_t r,
                    std::int64_t budget = default_vertex_budget) {
    if (r < 1) throw config_error("event scale r must be >= 1");
    const BallView& win = *cfg.window;
    std::int64_t dv = win.dist_of(v);
    if (dv < 0) throw window_error("event vertex lies outside the sampled window");
    if (dv + 10 * r > win.radius)
        throw window_error("window too small: the escape event at scale r needs B(v,10r)");

    auto sub = ball(*cfg.spec.model, v, 10 * r, budget);
    std::size_t n = sub->members.size();
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Mark& m = cfg.mark_of(sub->members[i]);
        if (!m.occupied || m.radius < 1) continue;
        std::int64_t reach = std::min(m.radius, 20 * r); // beyond 20r the star misses B(v,10r)
        detail::dial_expand(*cfg.spec.model, sub->members[i], reach, budget,
                            [&](const Vertex& u, std::int64_t) {
                                std::int64_t j = sub->index_of(u);
                                if (j >= 0 && static_cast<std::size_t>(j) != i) {
                                    adj[i].push_back(static_cast<std::uint32_t>(j));
                                    adj[static_cast<std::size_t>(j)].push_back(
                                        static_cast<std::uint32_t>(i));
                                }
                                return true;
                            });
    }

    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> stack;
    std::int64_t start = sub->index_of(v);
    stack.push_back(static_cast<std::uint32_t>(start));
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
        std::uint32_t i = stack.back();
        stack.pop_back();
        if (sub->dist[i] > 8 * r) return true;
        for (std::uint32_t j : adj[i])
            if (!seen[j]) {
                seen[j] = 1;
                stack.push_back(j);
            }
    }
    return false;
}

// Near interference event: some occupied vertex of B(v,100r) carries a radius
// of at least r.
inline bool event_Htilde(const Configuration& cfg, const Vertex& v, std::int64_t r,
                         std::int64_t budget = default_vertex_budget) {
    if (r < 1) throw config_error("event scale r must be >= 1");
    const BallView& win = *cfg.window;
    std::int64_t dv = win.dist_of(v);
    if (dv < 0) throw window_error("event vertex lies outside the sampled window");
    if (dv + 100 * r > win.radius)
        throw window_error("window too small: the interference event at scale r needs B(v,100r)");

    if (v == win.center) {
        std::size_t end = win.sphere_offset[static_cast<std::size_t>(
            std::min<std::int64_t>(100 * r, win.radius) + 1)];
        for (std::size_t i = 0; i < end; ++i)
            if (cfg.marks[i].occupied && cfg.marks[i].radius >= r) return true;
        return false;
    }
    auto sub = ball(*cfg.spec.model, v, 100 * r, budget);
    for (const Vertex& w : sub->members) {
        const Mark& m = cfg.mark_of(w);
        if (m.occupied && m.radius >= r) return true;
    }
    return false;
}

// Far interference event, truncated to the window: some occupied w beyond
// B(v,10r) has R_w > d(w,v)/10. The comparison is exact integer arithmetic.
inline bool event_H_window(const Configuration& cfg, const Vertex& v, std::int64_t r) {
    if (r < 1) throw config_error("event scale r must be >= 1");
    const BallView& win = *cfg.window;
    std::int64_t dv = win.dist_of(v);
    if (dv < 0) throw window_error("event vertex lies outside the sampled window");
    if (win.radius <= 10 * r)
        throw window_error("window too small: the far interference event needs radius > 10r");

    bool centered = (v == win.center);
    for (std::size_t i = 0; i < win.members.size(); ++i) {
        const Mark& m = cfg.marks[i];
        if (!m.occupied) continue;
        std::int64_t d = centered ? win.dist[i] : cfg.spec.model->distance(v, win.members[i]);
        if (d > 10 * r && static_cast<__int128>(10) * m.radius > d) return true;
    }
    return false;
}

// True when some occupied window vertex covers u with its ball.
inline bool vertex_covered(const Configuration& cfg, const Vertex& u) {
    const BallView& win = *cfg.window;
    if (win.index_of(u) < 0) throw window_error("coverage query outside the sampled window");
    bool centered = (u == win.center);
    for (std::size_t i = 0; i < win.members.size(); ++i) {
        const Mark& m = cfg.marks[i];
        if (!m.occupied) continue;
        std::int64_t d = centered ? win.dist[i] : cfg.spec.model->distance(u, win.members[i]);
        if (d <= m.radius) return true;
    }
    return false;
}

} // namespace perc
