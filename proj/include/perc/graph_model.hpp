#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "perc/errors.hpp"
#include "perc/vertex.hpp"

namespace perc {

// Weighted half-edge: target vertex plus positive integer edge weight.
struct Neighbor {
    Vertex to;
    std::int64_t weight;
};

// A connected graph with integer edge weights, presented implicitly through
// neighbor enumeration. Implementations are immutable after construction and
// safe to share across threads; the Heisenberg distance cache is the one
// internally synchronized exception.
class GraphModel {
  public:
    virtual ~GraphModel() = default;

    virtual const std::string& name() const = 0;
    virtual int arity() const = 0;
    virtual Vertex origin() const = 0;
    // Vertex-transitive models may evaluate geometry at the origin only.
    virtual bool transitive() const = 0;
    virtual void neighbors(const Vertex& v, std::vector<Neighbor>& out) const = 0;
    // Exact graph distance. May cost a search on models without a closed form.
    virtual std::int64_t distance(const Vertex& u, const Vertex& w) const = 0;

    // Exact |S(v,k)| when the model has a closed form and is transitive.
    virtual std::optional<std::int64_t> sphere_size(std::int64_t /*k*/) const { return std::nullopt; }

    // Enumerable vertex ids for finite models; empty for infinite ones.
    virtual std::vector<Vertex> all_vertices() const { return {}; }

    std::optional<double> declared_dim;
    std::optional<double> declared_c1;

  protected:
    GraphModel() = default;
};

using ModelPtr = std::shared_ptr<const GraphModel>;

// ---------------------------------------------------------------------------
// Z^d with unit edge weights and the L1 path metric.
class ZLattice final : public GraphModel {
  public:
    explicit ZLattice(int d) : d_(d), name_("z:" + std::to_string(d)) {
        if (d < 1 || d > Vertex::max_arity)
            throw config_error("lattice dimension must be 1.." + std::to_string(Vertex::max_arity));
        declared_dim = static_cast<double>(d);
        if (d == 1) declared_c1 = 3.0; // |B(r)| = 2r+1 <= 3r for every r >= 1
    }

    const std::string& name() const override { return name_; }
    int arity() const override { return d_; }
    Vertex origin() const override {
        Vertex v;
        v.n = static_cast<std::uint8_t>(d_);
        return v;
    }
    bool transitive() const override { return true; }

    void neighbors(const Vertex& v, std::vector<Neighbor>& out) const override {
        for (int i = 0; i < d_; ++i) {
            for (int s : {-1, +1}) {
                std::int64_t x = static_cast<std::int64_t>(v.c[i]) + s;
                if (x < INT32_MIN || x > INT32_MAX)
                    throw budget_error("lattice coordinate overflow");
                Vertex w = v;
                w.c[i] = static_cast<std::int32_t>(x);
                out.push_back({w, 1});
            }
        }
    }

    std::int64_t distance(const Vertex& u, const Vertex& w) const override {
        std::int64_t s = 0;
        for (int i = 0; i < d_; ++i)
            s += std::llabs(static_cast<std::int64_t>(u.c[i]) - w.c[i]);
        return s;
    }

    // |S(k)| = sum_i 2^i C(d,i) C(k-1,i-1): choose the nonzero axes, their
    // signs, and a composition of k over them.
    std::optional<std::int64_t> sphere_size(std::int64_t k) const override {
        if (k < 0) return 0;
        if (k == 0) return 1;
        long double total = 0;
        for (int i = 1; i <= d_ && i <= k; ++i)
            total += std::pow(2.0L, i) * binom(d_, i) * binom(k - 1, i - 1);
        if (total > 4e18L) return std::nullopt;
        return static_cast<std::int64_t>(total + 0.5L);
    }

    static long double binom(std::int64_t n, std::int64_t k) {
        if (k < 0 || k > n) return 0;
        long double r = 1;
        for (std::int64_t j = 1; j <= k; ++j) r = r * (n - k + j) / j;
        return r;
    }

  private:
    int d_;
    std::string name_;
};

// ---------------------------------------------------------------------------
// Discrete Heisenberg group: triples (a, b, c) standing for the unitriangular
// matrix with a, b above the diagonal and c in the corner, multiplied by
// (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b'). Generators are x = (1,0,0),
// y = (0,1,0) and their inverses; the metric is the word metric, evaluated by
// breadth-first search from the identity (the metric is left-invariant).
class Heisenberg final : public GraphModel {
  public:
    Heisenberg() : name_("heis") { declared_dim = 4.0; } // growth degree of this group

    const std::string& name() const override { return name_; }
    int arity() const override { return 3; }
    Vertex origin() const override { return make_vertex({0, 0, 0}); }
    bool transitive() const override { return true; }

    static Vertex mul(const Vertex& g, const Vertex& h) {
        std::int64_t a = static_cast<std::int64_t>(g.c[0]) + h.c[0];
        std::int64_t b = static_cast<std::int64_t>(g.c[1]) + h.c[1];
        std::int64_t c = static_cast<std::int64_t>(g.c[2]) + h.c[2] +
                         static_cast<std::int64_t>(g.c[0]) * h.c[1];
        return make_vertex({a, b, c});
    }

    static Vertex inverse(const Vertex& g) {
        std::int64_t a = g.c[0], b = g.c[1], c = g.c[2];
        return make_vertex({-a, -b, a * b - c});
    }

    void neighbors(const Vertex& v, std::vector<Neighbor>& out) const override {
        static const Vertex gens[4] = {
            make_vertex({1, 0, 0}), make_vertex({-1, 0, 0}),
            make_vertex({0, 1, 0}), make_vertex({0, -1, 0})};
        for (const Vertex& g : gens) out.push_back({mul(v, g), 1});
    }

    std::int64_t distance(const Vertex& u, const Vertex& w) const override {
        return word_length(mul(inverse(u), w));
    }

  private:
    // Grows a breadth-first distance table from the identity on demand.
    // Guarded by a mutex so the model stays shareable across workers.
    std::int64_t word_length(const Vertex& g) const {
        std::lock_guard<std::mutex> lock(mu_);
        if (dist_.empty()) {
            dist_.emplace(origin(), 0);
            frontier_.push_back(origin());
            radius_ = 0;
        }
        auto it = dist_.find(g);
        while (it == dist_.end()) {
            if (frontier_.empty())
                throw unreachable_error("word length search exhausted"); // cannot happen: the group is connected
            if (dist_.size() > word_cache_cap_)
                throw budget_error("Heisenberg distance cache exceeded " + std::to_string(word_cache_cap_) +
                                   " entries while resolving d(" + to_string(g) + ", e)");
            std::vector<Vertex> next;
            std::vector<Neighbor> nbr;
            for (const Vertex& v : frontier_) {
                nbr.clear();
                neighbors(v, nbr);
                for (const Neighbor& e : nbr) {
                    if (dist_.emplace(e.to, radius_ + 1).second) next.push_back(e.to);
                }
            }
            frontier_ = std::move(next);
            ++radius_;
            it = dist_.find(g);
        }
        return it->second;
    }

    std::string name_;
    mutable std::mutex mu_;
    mutable std::unordered_map<Vertex, std::int32_t, VertexHash> dist_;
    mutable std::vector<Vertex> frontier_;
    mutable std::int32_t radius_ = 0;
    static constexpr std::size_t word_cache_cap_ = 40'000'000;
};

// ---------------------------------------------------------------------------
// The infinite b-regular tree (every vertex has degree b). Vertices are
// (level, position-in-level): the root is (0,0) with children (1,0)..(1,b-1),
// and a vertex (k,j) with k >= 1 has children (k+1, (b-1)j + t).
class RegularTree final : public GraphModel {
  public:
    explicit RegularTree(int b) : b_(b), name_("tree:" + std::to_string(b)) {
        if (b < 3) throw config_error("regular tree branching must be >= 3");
    }

    const std::string& name() const override { return name_; }
    int arity() const override { return 2; }
    Vertex origin() const override { return make_vertex({0, 0}); }
    bool transitive() const override { return true; }

    void neighbors(const Vertex& v, std::vector<Neighbor>& out) const override {
        std::int64_t k = v.c[0], j = v.c[1];
        if (k == 0) {
            for (int t = 0; t < b_; ++t) out.push_back({make_vertex({1, t}), 1});
            return;
        }
        out.push_back({parent(v), 1});
        for (int t = 0; t < b_ - 1; ++t) {
            std::int64_t child = (static_cast<std::int64_t>(b_) - 1) * j + t;
            out.push_back({make_vertex({k + 1, child}), 1});
        }
    }

    std::int64_t distance(const Vertex& u, const Vertex& w) const override {
        Vertex a = u, b = w;
        std::int64_t d = 0;
        while (a.c[0] > b.c[0]) { a = parent(a); ++d; }
        while (b.c[0] > a.c[0]) { b = parent(b); ++d; }
        while (!(a == b)) { a = parent(a); b = parent(b); d += 2; }
        return d;
    }

    std::optional<std::int64_t> sphere_size(std::int64_t k) const override {
        if (k < 0) return 0;
        if (k == 0) return 1;
        // b shells of (b-1)-ary growth hanging off the root
        long double s = b_;
        for (std::int64_t i = 1; i < k; ++i) {
            s *= (b_ - 1);
            if (s > 4e18L) return std::nullopt; // would overflow, let callers fall back
        }
        return static_cast<std::int64_t>(s);
    }

  private:
    Vertex parent(const Vertex& v) const {
        std::int64_t k = v.c[0], j = v.c[1];
        if (k <= 1) return make_vertex({0, 0});
        return make_vertex({k - 1, j / (b_ - 1)});
    }

    int b_;
    std::string name_;
};

// ---------------------------------------------------------------------------
// A finite graph read from an edge-list file. Kept as adjacency lists over
// dense 0-based slots; vertex ids from the file may be sparse.
class LoadedGraph final : public GraphModel {
  public:
    LoadedGraph(std::string source, std::vector<std::int64_t> ids,
                std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> adj)
        : ids_(std::move(ids)), adj_(std::move(adj)), name_("file:" + source) {
        for (std::size_t slot = 0; slot < ids_.size(); ++slot)
            slot_of_.emplace(ids_[slot], static_cast<std::int32_t>(slot));
        connected_ = check_connected();
    }

    const std::string& name() const override { return name_; }
    int arity() const override { return 1; }
    Vertex origin() const override { return make_vertex({ids_.empty() ? 0 : ids_.front()}); }
    bool transitive() const override { return false; }
    bool connected() const { return connected_; }
    std::size_t vertex_count() const { return ids_.size(); }

    std::vector<Vertex> all_vertices() const override {
        std::vector<Vertex> out;
        out.reserve(ids_.size());
        for (std::int64_t id : ids_) out.push_back(make_vertex({id}));
        return out;
    }

    void neighbors(const Vertex& v, std::vector<Neighbor>& out) const override {
        std::int32_t slot = slot_of(v);
        for (auto [t, w] : adj_[slot]) out.push_back({make_vertex({ids_[t]}), w});
    }

    // Distances come from a per-source bucket-queue search over the whole
    // graph (weights are small positive integers, so buckets beat a heap).
    std::int64_t distance(const Vertex& u, const Vertex& w) const override {
        std::int32_t s = slot_of(u), t = slot_of(w);
        if (s == t) return 0;
        std::vector<std::int64_t> dist(ids_.size(), -1);
        std::int64_t maxw = 1;
        for (const auto& a : adj_)
            for (auto [tt, ww] : a) maxw = std::max<std::int64_t>(maxw, ww);
        std::vector<std::vector<std::int32_t>> bucket(1);
        dist[s] = 0;
        bucket[0].push_back(s);
        for (std::size_t d = 0; d < bucket.size(); ++d) {
            for (std::size_t bi = 0; bi < bucket[d].size(); ++bi) {
                std::int32_t v = bucket[d][bi];
                if (dist[v] != static_cast<std::int64_t>(d)) continue;
                if (v == t) return dist[v];
                for (auto [to, wt] : adj_[v]) {
                    std::int64_t nd = d + wt;
                    if (dist[to] == -1 || nd < dist[to]) {
                        dist[to] = nd;
                        if (bucket.size() <= static_cast<std::size_t>(nd)) bucket.resize(nd + 1);
                        bucket[nd].push_back(to);
                    }
                }
            }
        }
        throw unreachable_error("no path between " + to_string(u) + " and " + to_string(w));
    }

  private:
    std::int32_t slot_of(const Vertex& v) const {
        auto it = slot_of_.find(v.c[0]);
        if (it == slot_of_.end())
            throw config_error("vertex " + to_string(v) + " is not in the loaded graph");
        return it->second;
    }

    bool check_connected() const {
        if (ids_.empty()) return true;
        std::vector<char> seen(ids_.size(), 0);
        std::deque<std::int32_t> q{0};
        seen[0] = 1;
        std::size_t found = 1;
        while (!q.empty()) {
            std::int32_t v = q.front();
            q.pop_front();
            for (auto [t, w] : adj_[v])
                if (!seen[t]) { seen[t] = 1; ++found; q.push_back(t); }
        }
        return found == ids_.size();
    }

    std::vector<std::int64_t> ids_;
    std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> adj_;
    std::unordered_map<std::int64_t, std::int32_t> slot_of_;
    std::string name_;
    bool connected_ = true;
};

// Reads "u v [w]" edge lines, '#' comments, blank lines allowed. Vertices are
// non-negative integers, weights positive integers (default 1). A warning
// string is returned through *warning when the graph is disconnected.
inline std::shared_ptr<LoadedGraph> load_graph(const std::string& path, std::string* warning = nullptr) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open graph file: " + path);

    std::map<std::int64_t, std::vector<std::pair<std::int64_t, std::int64_t>>> edges;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = line.substr(0, line.find('#'));
        std::istringstream ss(stripped);
        std::int64_t u, v;
        if (!(ss >> u)) continue; // blank or comment-only line
        std::int64_t w = 1;
        if (!(ss >> v)) throw parse_error(path + ":" + std::to_string(lineno) + ": edge needs two vertex ids");
        if (!(ss >> w)) w = 1;
        std::string rest;
        if (ss >> rest) throw parse_error(path + ":" + std::to_string(lineno) + ": trailing tokens");
        if (u < 0 || v < 0) throw parse_error(path + ":" + std::to_string(lineno) + ": vertex ids must be non-negative");
        if (u > INT32_MAX || v > INT32_MAX) throw parse_error(path + ":" + std::to_string(lineno) + ": vertex id too large");
        if (w < 1) throw parse_error(path + ":" + std::to_string(lineno) + ": edge weight must be a positive integer");
        if (w > INT32_MAX) throw parse_error(path + ":" + std::to_string(lineno) + ": edge weight too large");
        if (u == v) throw parse_error(path + ":" + std::to_string(lineno) + ": self-loops are not allowed");
        edges[u].push_back({v, w});
        edges[v].push_back({u, w});
    }
    if (edges.empty()) throw parse_error(path + ": no edges found");

    std::vector<std::int64_t> ids;
    ids.reserve(edges.size());
    for (const auto& [id, _] : edges) ids.push_back(id);
    std::unordered_map<std::int64_t, std::int32_t> slot;
    for (std::size_t i = 0; i < ids.size(); ++i) slot[ids[i]] = static_cast<std::int32_t>(i);

    std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> adj(ids.size());
    for (const auto& [id, lst] : edges) {
        auto& a = adj[slot[id]];
        for (auto [to, w] : lst) a.push_back({slot[to], static_cast<std::int32_t>(w)});
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }

    auto g = std::make_shared<LoadedGraph>(path, std::move(ids), std::move(adj));
    if (!g->connected() && warning)
        *warning = "graph in " + path + " is disconnected; distance queries across components will fail";
    return g;
}

// "z:2", "heis", "tree:3", "file:PATH" -> model instance.
inline ModelPtr parse_model(const std::string& spec, std::string* warning = nullptr) {
    if (spec == "heis") return std::make_shared<Heisenberg>();
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (kind == "z" && !arg.empty()) return std::make_shared<ZLattice>(std::stoi(arg));
        if (kind == "tree" && !arg.empty()) return std::make_shared<RegularTree>(std::stoi(arg));
    } catch (const std::invalid_argument&) {
        throw parse_error("bad model argument in '" + spec + "'");
    } catch (const std::out_of_range&) {
        throw parse_error("model argument out of range in '" + spec + "'");
    }
    if (kind == "file" && !arg.empty()) return load_graph(arg, warning);
    throw parse_error("unknown model spec '" + spec + "' (expected z:D, heis, tree:B, file:PATH)");
}

} // namespace perc
