#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "perc/ball.hpp"
#include "perc/bounds.hpp"
#include "perc/errors.hpp"
#include "perc/percolation.hpp"
#include "perc/radius_law.hpp"
#include "perc/sampler.hpp"

namespace perc {

// Partial sums of the union-type series p * sum_k s_k P(R > k+r) that controls
// whether far centers keep covering a fixed vertex. Convergence is decided
// analytically from the dim-th moment of the law, never from the numerics.
struct CoverageSeries {
    std::vector<double> partial;
    bool diverges = false;
};

inline CoverageSeries coverage_series(const GraphModel& model, const Vertex& v, std::int64_t r,
                                      const RadiusLaw& law, double p, std::int64_t k_terms,
                                      const Constants& c, std::int64_t exact_radius = 32,
                                      std::int64_t budget = default_vertex_budget) {
    if (k_terms < 1) throw config_error("series needs at least one term");
    if (r < 0) throw config_error("series offset must be >= 0");
    if (!(p >= 0.0 && p <= 1.0)) throw config_error("occupation density must be in [0,1]");

    CoverageSeries out;
    out.diverges = !law.moment_finite(c.dim);

    std::shared_ptr<const BallView> win;
    bool closed_form = model.transitive() && model.sphere_size(1).has_value();
    if (!closed_form) win = ball(model, v, std::min(k_terms - 1, exact_radius), budget);
    auto sphere = [&](std::int64_t k) -> double {
        if (closed_form)
            if (auto s = model.sphere_size(k)) return static_cast<double>(*s);
        if (win && k <= win->radius) return static_cast<double>(win->sphere_count(k));
        return c.c1 * std::pow(static_cast<double>(k), c.dim);
    };

    double acc = 0;
    out.partial.reserve(static_cast<std::size_t>(k_terms));
    for (std::int64_t k = 0; k < k_terms; ++k) {
        acc += p * sphere(k) * law.tail(k + r, true);
        out.partial.push_back(acc);
    }
    return out;
}

// Fraction of the window's inner half (distance <= L/2 from the center) lying
// in some occupied ball. The inner half keeps boundary truncation out of the
// statistic.
inline double coverage_fraction(const Configuration& cfg,
                                std::int64_t budget = default_vertex_budget) {
    const BallView& win = *cfg.window;
    std::int64_t inner = win.radius / 2;
    // members are sorted by distance, so the inner half is a prefix
    std::size_t inner_end = win.sphere_offset[static_cast<std::size_t>(inner + 1)];
    std::vector<char> covered(inner_end, 0);
    std::int64_t cap = win.radius + inner; // farthest an inner vertex can be from a member
    for (std::size_t i = 0; i < win.members.size(); ++i) {
        const Mark& m = cfg.marks[i];
        if (!m.occupied) continue;
        detail::dial_expand(*cfg.spec.model, win.members[i], std::min(m.radius, cap), budget,
                            [&](const Vertex& u, std::int64_t) {
                                std::int64_t j = win.index_of(u);
                                if (j >= 0 && static_cast<std::size_t>(j) < inner_end)
                                    covered[static_cast<std::size_t>(j)] = 1;
                                return true;
                            });
    }
    std::int64_t hit = 0;
    for (char x : covered) hit += x;
    return static_cast<double>(hit) / static_cast<double>(inner_end);
}

// Component statistics of the whole window under the occupied-ball graph.
// A component is spanning when it holds two boundary-shell vertices at least
// one window radius apart.
struct Census {
    std::vector<std::pair<std::int64_t, std::int64_t>> histogram; // (size, count), ascending
    std::int64_t components = 0;
    std::int64_t largest = 0;
    std::int64_t spanning = 0;
};

inline Census cluster_census(const Configuration& cfg,
                             std::int64_t budget = default_vertex_budget) {
    const BallView& win = *cfg.window;
    std::size_t n = win.members.size();

    std::vector<std::uint32_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };

    std::int64_t cap = 2 * win.radius;
    for (std::size_t i = 0; i < n; ++i) {
        const Mark& m = cfg.marks[i];
        if (!m.occupied || m.radius < 1) continue;
        detail::dial_expand(*cfg.spec.model, win.members[i], std::min(m.radius, cap), budget,
                            [&](const Vertex& u, std::int64_t) {
                                std::int64_t j = win.index_of(u);
                                if (j >= 0) unite(static_cast<std::uint32_t>(i),
                                                  static_cast<std::uint32_t>(j));
                                return true;
                            });
    }

    std::map<std::uint32_t, std::int64_t> size_of;
    for (std::size_t i = 0; i < n; ++i) ++size_of[find(static_cast<std::uint32_t>(i))];

    Census out;
    std::map<std::int64_t, std::int64_t> hist;
    for (auto& [root, size] : size_of) {
        ++hist[size];
        out.largest = std::max(out.largest, size);
    }
    out.components = static_cast<std::int64_t>(size_of.size());
    out.histogram.assign(hist.begin(), hist.end());

    // boundary shell, grouped by component
    std::map<std::uint32_t, std::vector<std::uint32_t>> shell;
    for (std::size_t i = 0; i < n; ++i)
        if (win.dist[i] == win.radius)
            shell[find(static_cast<std::uint32_t>(i))].push_back(static_cast<std::uint32_t>(i));
    const GraphModel& model = *cfg.spec.model;
    for (auto& [root, idx] : shell) {
        if (idx.size() < 2) continue;
        std::size_t limit = std::min<std::size_t>(idx.size(), 2000); // desk-scale guard
        bool spans = false;
        for (std::size_t a = 0; a < limit && !spans; ++a)
            for (std::size_t b = a + 1; b < limit && !spans; ++b)
                if (model.distance(win.members[idx[a]], win.members[idx[b]]) >= win.radius)
                    spans = true;
        if (spans) ++out.spanning;
    }
    return out;
}

} // namespace perc
