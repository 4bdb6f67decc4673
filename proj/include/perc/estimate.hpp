#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "perc/bounds.hpp"
#include "perc/errors.hpp"
#include "perc/percolation.hpp"
#include "perc/sampler.hpp"

namespace perc {

struct WilsonInterval {
    double lo = 0;
    double hi = 1;
};

// Wilson score interval for a binomial proportion, 95% by default.
inline WilsonInterval wilson_interval(std::int64_t successes, std::int64_t replicas,
                                      double z = 1.959963984540054) {
    if (replicas < 1) throw config_error("interval needs at least one replica");
    if (successes < 0 || successes > replicas) throw config_error("success count out of range");
    double n = static_cast<double>(replicas);
    double ph = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (ph + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
    WilsonInterval w{std::max(0.0, center - half), std::min(1.0, center + half)};
    // At the extremes the endpoint is exactly 0 or 1; the closed form only
    // reaches that up to rounding, so pin it.
    if (successes == 0) w.lo = 0.0;
    if (successes == replicas) w.hi = 1.0;
    return w;
}

enum class EventKind { G, Htilde, Hwindow, DExceeds, Covered };

inline const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::G: return "G";
        case EventKind::Htilde: return "Htilde";
        case EventKind::Hwindow: return "Hwindow";
        case EventKind::DExceeds: return "D_exceeds";
        case EventKind::Covered: return "covered";
    }
    return "?";
}

// One event to estimate: evaluated at v, at scale r (threshold for DExceeds),
// in a window of radius L. Negative L asks for the minimal window on which
// the event is exact (10r for G, 100r for Htilde).
struct EventQuery {
    EventKind kind = EventKind::G;
    Vertex v{};
    std::int64_t r = 1;
    std::int64_t L = -1;

    std::int64_t window_radius() const {
        switch (kind) {
            case EventKind::G: return L >= 0 ? L : 10 * r;
            case EventKind::Htilde: return L >= 0 ? L : 100 * r;
            case EventKind::Hwindow:
            case EventKind::DExceeds:
            case EventKind::Covered:
                if (L < 0) throw config_error("this event kind needs an explicit window radius");
                return L;
        }
        throw unreachable_error("unhandled event kind");
    }
};

inline bool evaluate_event(const Configuration& cfg, const EventQuery& q,
                           std::int64_t budget = default_vertex_budget) {
    switch (q.kind) {
        case EventKind::G: return event_G(cfg, q.v, q.r, budget);
        case EventKind::Htilde: return event_Htilde(cfg, q.v, q.r, budget);
        case EventKind::Hwindow: return event_H_window(cfg, q.v, q.r);
        case EventKind::DExceeds: return cluster(cfg, q.v, budget).D > q.r;
        case EventKind::Covered: return vertex_covered(cfg, q.v);
    }
    throw unreachable_error("unhandled event kind");
}

struct EventEstimate {
    EventQuery query;
    std::int64_t replicas = 0;
    std::int64_t successes = 0;
    double p_hat = 0;
    double lo = 0;
    double hi = 0;
    std::uint64_t seed = 0;
};

struct McOptions {
    std::int64_t replicas = 1000;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::int64_t budget = default_vertex_budget;
};

// Frequency of the event over independent replicas. Replica k draws its marks
// from replica_seed(seed, k), so results are identical for any job count and
// merge across machines.
inline EventEstimate mc_estimate(const ProcessSpec& spec, const EventQuery& q,
                                 const McOptions& opt) {
    spec.validate();
    if (opt.replicas < 1) throw config_error("replica count must be >= 1");
    auto win = ball(*spec.model, q.v, q.window_radius(), opt.budget);

    auto run = [&](std::int64_t k0, std::int64_t k1) {
        std::int64_t hits = 0;
        Configuration cfg;
        cfg.spec = spec;
        cfg.window = win;
        for (std::int64_t k = k0; k < k1; ++k) {
            cfg.seed = replica_seed(opt.seed, k);
            cfg.marks.clear();
            cfg.marks.reserve(win->members.size());
            for (const Vertex& u : win->members) cfg.marks.push_back(marks_at(spec, cfg.seed, u));
            if (evaluate_event(cfg, q, opt.budget)) ++hits;
        }
        return hits;
    };

    std::int64_t hits = 0;
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        hits = run(0, opt.replicas);
    } else {
        std::int64_t chunk = (opt.replicas + jobs - 1) / jobs;
        std::vector<std::int64_t> part(static_cast<std::size_t>(jobs), 0);
        std::vector<std::thread> pool;
        std::exception_ptr first_error;
        std::mutex error_mu;
        for (int t = 0; t < jobs; ++t) {
            std::int64_t k0 = std::min<std::int64_t>(opt.replicas, t * chunk);
            std::int64_t k1 = std::min<std::int64_t>(opt.replicas, k0 + chunk);
            pool.emplace_back([&, t, k0, k1] {
                try {
                    part[static_cast<std::size_t>(t)] = run(k0, k1);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (std::thread& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
        for (std::int64_t h : part) hits += h;
    }

    EventEstimate est;
    est.query = q;
    est.replicas = opt.replicas;
    est.successes = hits;
    est.p_hat = static_cast<double>(hits) / static_cast<double>(opt.replicas);
    WilsonInterval w = wilson_interval(hits, opt.replicas);
    est.lo = w.lo;
    est.hi = w.hi;
    est.seed = opt.seed;
    return est;
}

// Exact P(G(0,1)) on the line lattice with a point-mass radius law, by
// enumerating all 2^21 occupation patterns of B(0,10). The per-pattern counts
// depend only on c, so they are cached and reused across densities.
inline double oracle_G_exact(const GraphModel& model, std::int64_t r, double p,
                             const RadiusLaw& law) {
    if (model.name() != "z:1") throw config_error("exact escape oracle supports z:1 only");
    if (r != 1) throw config_error("exact escape oracle supports r = 1 only");
    if (law.kind() != RadiusLaw::Kind::constant || law.constant_value() > 3)
        throw config_error("exact escape oracle supports const:c with c <= 3 only");
    if (!(p >= 0.0 && p <= 1.0)) throw config_error("occupation density must be in [0,1]");

    int c = static_cast<int>(law.constant_value());
    static std::mutex mu;
    static std::map<int, std::array<double, 22>> cache;
    std::array<double, 22> by_count{};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(c);
        if (it != cache.end()) {
            by_count = it->second;
        } else {
            // vertex i is position i-10; escape means reaching |position| >= 9
            for (std::uint32_t occ = 0; occ < (1u << 21); ++occ) {
                std::array<std::uint8_t, 21> stack;
                int sp = 0;
                std::uint32_t seen = 1u << 10;
                stack[sp++] = 10;
                bool escaped = false;
                while (sp > 0 && !escaped) {
                    int i = stack[--sp];
                    if (i <= 1 || i >= 19) {
                        escaped = true;
                        break;
                    }
                    int j0 = std::max(0, i - c), j1 = std::min(20, i + c);
                    for (int j = j0; j <= j1; ++j) {
                        if (j == i || (seen >> j & 1)) continue;
                        if (((occ >> i) & 1) || ((occ >> j) & 1)) {
                            seen |= 1u << j;
                            stack[sp++] = static_cast<std::uint8_t>(j);
                        }
                    }
                }
                if (escaped) by_count[static_cast<std::size_t>(std::popcount(occ))] += 1.0;
            }
            cache[c] = by_count;
        }
    }

    double value = 0;
    for (int k = 0; k <= 21; ++k) {
        if (by_count[static_cast<std::size_t>(k)] == 0) continue;
        value += by_count[static_cast<std::size_t>(k)] * std::pow(p, k) * std::pow(1.0 - p, 21 - k);
    }
    return value;
}

// One-sided statistical check of the scale-jump inequality
//   P(G(v,10r)) <= k * P(G(v,r))^2 + P(Htilde(v,r)),
// comparing upper confidence limits. Evidence, not proof.
struct ScalingReport {
    EventEstimate g_big;
    EventEstimate g_small;
    EventEstimate h_small;
    double k = 0;
    double rhs_hi = 0;
    bool holds = false;
};

inline ScalingReport scaling_inequality_check(const ProcessSpec& spec, const Constants& c,
                                              std::int64_t r, std::int64_t replicas,
                                              std::uint64_t seed, int jobs = 1,
                                              std::int64_t budget = default_vertex_budget) {
    if (!spec.model->transitive())
        throw config_error("scaling check needs a vertex-transitive model");
    Vertex v = spec.model->origin();
    McOptions opt{replicas, 0, jobs, budget};
    ScalingReport rep;
    opt.seed = mix64(seed + 1);
    rep.g_big = mc_estimate(spec, EventQuery{EventKind::G, v, 10 * r, -1}, opt);
    opt.seed = mix64(seed + 2);
    rep.g_small = mc_estimate(spec, EventQuery{EventKind::G, v, r, -1}, opt);
    opt.seed = mix64(seed + 3);
    rep.h_small = mc_estimate(spec, EventQuery{EventKind::Htilde, v, r, -1}, opt);
    rep.k = c.k();
    rep.rhs_hi = rep.k * rep.g_small.hi * rep.g_small.hi + rep.h_small.hi;
    rep.holds = rep.g_big.hi <= rep.rhs_hi;
    return rep;
}

} // namespace perc
