#include <catch2/catch_amalgamated.hpp>

#include <perc/sampler.hpp>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

using namespace perc;

namespace {

ProcessSpec mkspec(const std::string& model, double p, const std::string& law) {
    ProcessSpec spec;
    spec.model = parse_model(model);
    spec.p = p;
    spec.law = RadiusLaw::parse(law);
    return spec;
}

std::set<std::uint64_t> occupied_keys(const Configuration& cfg) {
    std::set<std::uint64_t> out;
    for (std::size_t i = 0; i < cfg.marks.size(); ++i)
        if (cfg.marks[i].occupied) out.insert(vertex_key(cfg.window->members[i]));
    return out;
}

} // namespace

TEST_CASE("hash primitives behave as fixed pure functions", "[sampler]") {
    REQUIRE(mix64(0x123456789abcdefULL) == mix64(0x123456789abcdefULL));
    REQUIRE(mix64(1) != mix64(2));

    REQUIRE(to_unit(0) == 0.0);
    REQUIRE(to_unit(~0ULL) < 1.0);
    REQUIRE(to_unit(~0ULL) > 0.999999999);

    Vertex a = make_vertex({3, -2});
    Vertex b = make_vertex({3, -2});
    REQUIRE(vertex_key(a) == vertex_key(b));
    REQUIRE(vertex_key(a) != vertex_key(make_vertex({-2, 3})));
    REQUIRE(vertex_key(make_vertex({5})) != vertex_key(make_vertex({5, 0})));

    double u0 = vertex_uniform(42, a, 0);
    double u1 = vertex_uniform(42, a, 1);
    REQUIRE(u0 == vertex_uniform(42, a, 0));
    REQUIRE(u0 >= 0.0);
    REQUIRE(u0 < 1.0);
    REQUIRE(u0 != u1);
    REQUIRE(u0 != vertex_uniform(43, a, 0));
}

TEST_CASE("replica seeds are distinct and produce distinct configurations", "[sampler]") {
    std::set<std::uint64_t> seen;
    for (std::int64_t k = 0; k < 1000; ++k) seen.insert(replica_seed(42, k));
    REQUIRE(seen.size() == 1000);

    auto spec = mkspec("z:1", 0.5, "geom:0.5");
    auto c0 = sample_window(spec, spec.model->origin(), 50, replica_seed(7, 0));
    auto c1 = sample_window(spec, spec.model->origin(), 50, replica_seed(7, 1));
    bool differ = false;
    for (std::size_t i = 0; i < c0.marks.size() && !differ; ++i)
        differ = c0.marks[i].occupied != c1.marks[i].occupied ||
                 c0.marks[i].radius != c1.marks[i].radius;
    REQUIRE(differ);
}

TEST_CASE("marks are a pure function of seed and vertex, so windows agree on overlap",
          "[sampler]") {
    auto spec = mkspec("z:1", 0.3, "geom:0.5");
    const std::uint64_t seed = 99;

    auto small = sample_window(spec, spec.model->origin(), 10, seed);
    auto big = sample_window(spec, spec.model->origin(), 25, seed);
    auto shifted = sample_window(spec, make_vertex({5}), 12, seed);

    for (const Vertex& v : small.window->members) {
        const Mark& a = small.mark_of(v);
        const Mark& b = big.mark_of(v);
        REQUIRE(a.occupied == b.occupied);
        REQUIRE(a.radius == b.radius);
        const Mark& direct = marks_at(spec, seed, v);
        REQUIRE(a.occupied == direct.occupied);
        REQUIRE(a.radius == direct.radius);
    }
    for (const Vertex& v : shifted.window->members) {
        if (big.window->index_of(v) < 0) continue;
        REQUIRE(shifted.mark_of(v).occupied == big.mark_of(v).occupied);
        REQUIRE(shifted.mark_of(v).radius == big.mark_of(v).radius);
    }
}

TEST_CASE("occupation endpoints p=0 and p=1 are exact", "[sampler]") {
    auto empty = sample_window(mkspec("z:2", 0.0, "const:1"), make_vertex({0, 0}), 20, 5);
    for (const Mark& m : empty.marks) REQUIRE_FALSE(m.occupied);

    auto full = sample_window(mkspec("z:2", 1.0, "const:1"), make_vertex({0, 0}), 20, 5);
    for (const Mark& m : full.marks) REQUIRE(m.occupied);
}

TEST_CASE("occupation frequency matches p within four sigma", "[sampler]") {
    const double p = 0.3;
    auto cfg = sample_window(mkspec("z:2", p, "const:0"), make_vertex({0, 0}), 60, 2024);
    double n = static_cast<double>(cfg.marks.size());
    REQUIRE(n == 7321.0);
    double occ = 0;
    for (const Mark& m : cfg.marks) occ += m.occupied ? 1 : 0;
    double tol = 4.0 * std::sqrt(p * (1 - p) / n);
    REQUIRE(std::abs(occ / n - p) < tol);
}

TEST_CASE("neighbouring vertices carry uncorrelated occupation", "[sampler]") {
    auto cfg = sample_window(mkspec("z:1", 0.5, "const:0"), make_vertex({0}), 2000, 11);
    auto occ_at = [&](std::int64_t k) {
        return cfg.mark_of(make_vertex({static_cast<int>(k)})).occupied;
    };
    double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
    for (std::int64_t k = -2000; k < 2000; ++k) {
        bool a = occ_at(k), b = occ_at(k + 1);
        if (a && b) ++n11;
        else if (a) ++n10;
        else if (b) ++n01;
        else ++n00;
    }
    double num = n11 * n00 - n10 * n01;
    double den = std::sqrt((n11 + n10) * (n01 + n00) * (n11 + n01) * (n10 + n00));
    REQUIRE(den > 0);
    REQUIRE(std::abs(num / den) < 0.07);
}

TEST_CASE("radius lane ignores p, giving one coupled radius field per seed", "[sampler]") {
    auto lo = sample_window(mkspec("z:1", 0.1, "geom:0.5"), make_vertex({0}), 300, 17);
    auto hi = sample_window(mkspec("z:1", 0.9, "geom:0.5"), make_vertex({0}), 300, 17);
    REQUIRE(lo.marks.size() == hi.marks.size());
    for (std::size_t i = 0; i < lo.marks.size(); ++i)
        REQUIRE(lo.marks[i].radius == hi.marks[i].radius);
}

TEST_CASE("occupied sets are nested along p at a shared seed", "[sampler]") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 44ULL, 1234ULL}) {
        auto a = occupied_keys(sample_window(mkspec("z:1", 0.2, "const:1"), make_vertex({0}), 200, seed));
        auto b = occupied_keys(sample_window(mkspec("z:1", 0.5, "const:1"), make_vertex({0}), 200, seed));
        auto c = occupied_keys(sample_window(mkspec("z:1", 0.9, "const:1"), make_vertex({0}), 200, seed));
        REQUIRE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
        REQUIRE(std::includes(c.begin(), c.end(), b.begin(), b.end()));
        REQUIRE(a.size() < b.size());
        REQUIRE(b.size() < c.size());
    }
}

TEST_CASE("sampled radii reproduce the law's tail frequencies", "[sampler]") {
    auto cfg = sample_window(mkspec("z:1", 0.5, "geom:0.5"), make_vertex({0}), 2000, 31);
    double n = static_cast<double>(cfg.marks.size());
    double ge1 = 0, ge3 = 0;
    for (const Mark& m : cfg.marks) {
        if (m.radius >= 1) ++ge1;
        if (m.radius >= 3) ++ge3;
    }
    REQUIRE(std::abs(ge1 / n - 0.5) < 4.0 * std::sqrt(0.5 * 0.5 / n));
    REQUIRE(std::abs(ge3 / n - 0.125) < 4.0 * std::sqrt(0.125 * 0.875 / n));
}

TEST_CASE("window lookups reject vertices outside the sample", "[sampler]") {
    auto cfg = sample_window(mkspec("z:1", 0.5, "const:1"), make_vertex({0}), 10, 1);
    REQUIRE_THROWS_AS(cfg.mark_of(make_vertex({11})), window_error);
    REQUIRE_THROWS_AS(cfg.mark_of(make_vertex({0, 0})), window_error);
    REQUIRE_NOTHROW(cfg.mark_of(make_vertex({-10})));
}

TEST_CASE("process validation rejects malformed triples", "[sampler]") {
    ProcessSpec no_model;
    no_model.p = 0.5;
    REQUIRE_THROWS_AS(no_model.validate(), config_error);

    auto bad_p = mkspec("z:1", 1.5, "const:1");
    REQUIRE_THROWS_AS(bad_p.validate(), config_error);
    auto neg_p = mkspec("z:1", -0.1, "const:1");
    REQUIRE_THROWS_AS(neg_p.validate(), config_error);
    REQUIRE_THROWS_AS(sample_window(bad_p, make_vertex({0}), 5, 1), config_error);
}
