#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "perc/ball.hpp"

namespace perc {

// Exact rational in lowest terms, used for covering scales so that
// ceil(eps * r) is computed without floating point.
struct Ratio {
    std::int64_t num = 1;
    std::int64_t den = 1;

    static Ratio parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash != std::string::npos) {
                std::int64_t n = std::stoll(s.substr(0, slash));
                std::int64_t d = std::stoll(s.substr(slash + 1));
                if (n <= 0 || d <= 0) throw parse_error("scale must be positive: " + s);
                return {n, d};
            }
            auto dot = s.find('.');
            if (dot == std::string::npos) {
                std::int64_t n = std::stoll(s);
                if (n <= 0) throw parse_error("scale must be positive: " + s);
                return {n, 1};
            }
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::int64_t den = 1;
            for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
            std::int64_t n = std::stoll(digits);
            if (n <= 0) throw parse_error("scale must be positive: " + s);
            return {n, den};
        } catch (const std::invalid_argument&) {
            throw parse_error("bad scale '" + s + "'");
        } catch (const std::out_of_range&) {
            throw parse_error("scale out of range '" + s + "'");
        }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::int64_t ceil_times(std::int64_t r) const { return (num * r + den - 1) / den; }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

// Greedy maximal sep-separated subset of `base`, scanned in canonical key
// order. A candidate is accepted unless it lies within distance sep-1 of an
// already accepted point; accepted points block their (sep-1)-ball, so no
// pairwise distance queries are needed. Maximality gives the covering
// property: every base point is within distance < sep of the net.
inline std::vector<Vertex> separated_net(const GraphModel& model, std::vector<Vertex> base,
                                         std::int64_t sep,
                                         std::int64_t budget = default_vertex_budget) {
    if (sep < 1) throw config_error("net separation must be >= 1");
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());

    std::vector<Vertex> net;
    std::unordered_set<Vertex, VertexHash> blocked;
    const std::uint64_t blocked_cap = static_cast<std::uint64_t>(budget) * 4;
    for (const Vertex& v : base) {
        if (blocked.count(v)) continue;
        net.push_back(v);
        detail::dial_expand(model, v, sep - 1, budget, [&](const Vertex& u, std::int64_t) {
            blocked.insert(u);
            return true;
        });
        if (blocked.size() > blocked_cap)
            throw budget_error("separated_net blocked-set exceeded " + std::to_string(blocked_cap) + " vertices");
    }
    return net;
}

// One measured covering number: N̂ = size of a greedy maximal sep-separated
// subset of B(center, r), with sep = ceil(eps * r).
struct CoverRow {
    Vertex center;
    std::int64_t r = 0;
    Ratio eps;
    std::int64_t sep = 0;
    std::int64_t n_hat = 0;
    std::int64_t ball_size = 0;
};

// Profile over a grid of radii and scales. Transitive models are measured at
// the origin; finite loaded graphs at `samples` seeded random vertices.
inline std::vector<CoverRow> covering_profile(const GraphModel& model,
                                              const std::vector<std::int64_t>& radii,
                                              const std::vector<Ratio>& scales, int samples = 3,
                                              std::uint64_t seed = 1,
                                              std::int64_t budget = default_vertex_budget) {
    std::vector<Vertex> centers;
    if (model.transitive()) {
        centers.push_back(model.origin());
    } else {
        std::vector<Vertex> all = model.all_vertices();
        if (all.empty()) throw config_error("covering_profile needs a transitive or finite model");
        std::mt19937_64 rng(seed);
        for (int i = 0; i < samples && !all.empty(); ++i) {
            std::size_t j = rng() % all.size();
            centers.push_back(all[j]);
            all.erase(all.begin() + j);
        }
    }

    std::vector<CoverRow> rows;
    for (const Vertex& c : centers) {
        for (std::int64_t r : radii) {
            if (r < 1) throw config_error("covering radius must be >= 1");
            auto view = ball(model, c, r, budget);
            std::vector<Vertex> base = view->members;
            for (const Ratio& eps : scales) {
                if (eps.num > eps.den)
                    throw config_error("covering scale must be <= 1, got " + eps.str());
                CoverRow row;
                row.center = c;
                row.r = r;
                row.eps = eps;
                row.sep = eps.ceil_times(r);
                row.ball_size = view->size();
                row.n_hat = static_cast<std::int64_t>(separated_net(model, base, row.sep, budget).size());
                rows.push_back(row);
            }
        }
    }
    return rows;
}

// Least-squares dimension estimate from a covering profile:
//   log N̂ = const + beta * log(1/eps)   pooled over all rows with eps < 1,
// plus the smallest C with ball_size <= C * r^beta over the observed balls,
// and the crude doubling bound log2(max N̂ at eps = 1/2) when available.
struct AssouadFit {
    double beta_hat = 0;
    double c1_hat = 0;
    double beta_log2c = std::nan("");
};

inline AssouadFit assouad_fit(const std::vector<CoverRow>& rows) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::int64_t n = 0;
    std::unordered_set<double> distinct;
    for (const CoverRow& row : rows) {
        if (row.eps.num >= row.eps.den) continue; // eps = 1 rows carry no scale information
        double x = std::log(static_cast<double>(row.eps.den) / static_cast<double>(row.eps.num));
        double y = std::log(static_cast<double>(row.n_hat));
        distinct.insert(x);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (distinct.size() < 2)
        throw degenerate_fit_error("dimension fit needs at least two distinct scales below 1");

    AssouadFit fit;
    fit.beta_hat = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    for (const CoverRow& row : rows) {
        double c = static_cast<double>(row.ball_size) / std::pow(static_cast<double>(row.r), fit.beta_hat);
        fit.c1_hat = std::max(fit.c1_hat, c);
    }

    double max_half = 0;
    for (const CoverRow& row : rows)
        if (row.eps.num * 2 == row.eps.den) max_half = std::max(max_half, static_cast<double>(row.n_hat));
    if (max_half > 0) fit.beta_log2c = std::log2(max_half);
    return fit;
}

} // namespace perc
