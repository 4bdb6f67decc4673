// Metric machinery: vertices, models, balls, nets, covering profiles.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

#include "perc/perc.hpp"

using namespace perc;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path);
    f << content;
    return path.string();
}

// Independent Heisenberg multiplication for the growth oracle below. Kept
// separate from the library type on purpose.
struct Triple {
    long a, b, c;
    bool operator<(const Triple& o) const {
        return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
    }
};
Triple hmul(const Triple& g, const Triple& h) {
    return {g.a + h.a, g.b + h.b, g.c + h.c + g.a * h.b};
}

} // namespace

TEST_CASE("vertex keys order and render", "[metric]") {
    Vertex v = make_vertex({3, -2});
    REQUIRE(v.n == 2);
    REQUIRE(to_string(v) == "3:-2");
    REQUIRE(make_vertex({1}) == make_vertex({1}));
    REQUIRE(make_vertex({1}) != make_vertex({2}));
    REQUIRE(make_vertex({-1, 5}) < make_vertex({0, 0}));
    REQUIRE_THROWS_AS(make_vertex({}), config_error);
    REQUIRE_THROWS_AS(make_vertex({1, 2, 3, 4, 5, 6, 7, 8, 9}), config_error);
}

TEST_CASE("line lattice balls have exact members and spheres", "[metric]") {
    ZLattice z1(1);
    auto b = ball(z1, z1.origin(), 3);
    REQUIRE(b->size() == 7);
    REQUIRE(b->radius == 3);
    std::vector<std::int64_t> want_dist{0, 1, 1, 2, 2, 3, 3};
    REQUIRE(b->dist == want_dist);
    // members sorted by (distance, key): each sphere runs in key order
    REQUIRE(b->members[0] == make_vertex({0}));
    REQUIRE(b->members[1] == make_vertex({-1}));
    REQUIRE(b->members[2] == make_vertex({1}));
    REQUIRE(b->members[5] == make_vertex({-3}));
    REQUIRE(b->sphere_count(0) == 1);
    REQUIRE(b->sphere_count(1) == 2);
    REQUIRE(b->sphere_count(3) == 2);
    REQUIRE(b->sphere_count(4) == 0);
    REQUIRE(b->contains(make_vertex({-3})));
    REQUIRE_FALSE(b->contains(make_vertex({4})));
    REQUIRE(b->dist_of(make_vertex({2})) == 2);
    REQUIRE(b->dist_of(make_vertex({9})) == -1);
    REQUIRE(b->index_of(make_vertex({0})) == 0);
    REQUIRE(b->index_of(make_vertex({9})) == -1);
}

TEST_CASE("plane lattice balls match the closed forms", "[metric]") {
    ZLattice z2(2);
    for (std::int64_t r : {0, 1, 2, 5, 9}) {
        auto b = ball(z2, z2.origin(), r);
        REQUIRE(b->size() == 2 * r * r + 2 * r + 1);
        REQUIRE(growth(z2, z2.origin(), r) == b->size());
        for (std::int64_t k = 0; k <= r; ++k)
            REQUIRE(b->sphere_count(k) == z2.sphere_size(k).value());
    }
    REQUIRE(z2.sphere_size(0).value() == 1);
    REQUIRE(z2.sphere_size(7).value() == 28);
}

TEST_CASE("sphere sizes add up to ball sizes across models", "[metric]") {
    std::vector<ModelPtr> models{std::make_shared<ZLattice>(1), std::make_shared<ZLattice>(2),
                                 std::make_shared<ZLattice>(3), std::make_shared<RegularTree>(3)};
    for (const ModelPtr& m : models) {
        std::int64_t total = 0;
        for (std::int64_t k = 0; k <= 5; ++k) total += m->sphere_size(k).value();
        REQUIRE(total == growth(*m, m->origin(), 5));
    }
}

TEST_CASE("Heisenberg growth matches an independent word enumeration", "[metric]") {
    std::set<Triple> covered{{0, 0, 0}};
    std::set<Triple> frontier{{0, 0, 0}};
    const Triple gens[4] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
    std::vector<long> sizes{1};
    for (int r = 1; r <= 5; ++r) {
        std::set<Triple> next;
        for (const Triple& t : frontier)
            for (const Triple& g : gens) {
                Triple u = hmul(t, g);
                if (covered.insert(u).second) next.insert(u);
            }
        frontier = std::move(next);
        sizes.push_back(static_cast<long>(covered.size()));
    }
    REQUIRE(sizes[2] == 17);

    Heisenberg model;
    for (int r = 0; r <= 5; ++r)
        REQUIRE(growth(model, model.origin(), r) == sizes[static_cast<std::size_t>(r)]);
    // the commutator (0,0,1) needs four generator steps
    REQUIRE(model.distance(model.origin(), make_vertex({0, 0, 1})) == 4);
    REQUIRE(model.distance(make_vertex({1, 0, 0}), make_vertex({1, 1, 1})) == 1);
}

TEST_CASE("tree distances and growth are exact", "[metric]") {
    RegularTree t(3);
    REQUIRE(t.sphere_size(1).value() == 3);
    REQUIRE(t.sphere_size(2).value() == 6);
    REQUIRE(t.sphere_size(4).value() == 24);
    REQUIRE(t.distance(make_vertex({0, 0}), make_vertex({2, 3})) == 2);
    // two depth-2 vertices under different root children meet at the root
    REQUIRE(t.distance(make_vertex({2, 0}), make_vertex({2, 5})) == 4);
    REQUIRE(t.distance(make_vertex({2, 0}), make_vertex({2, 1})) == 2);
    REQUIRE(t.distance(make_vertex({3, 0}), make_vertex({1, 0})) == 2);
}

TEST_CASE("distances agree with ball enumeration", "[metric]") {
    // dial distances must equal the closed-form metric on every member
    for (ModelPtr m : {ModelPtr(std::make_shared<ZLattice>(2)),
                       ModelPtr(std::make_shared<RegularTree>(3))}) {
        auto b = ball(*m, m->origin(), 4);
        for (std::size_t i = 0; i < b->members.size(); ++i)
            REQUIRE(b->dist[i] == m->distance(m->origin(), b->members[i]));
    }
}

TEST_CASE("ball radius off origin still nests", "[metric]") {
    ZLattice z2(2);
    Vertex c = make_vertex({3, -1});
    auto small = ball(z2, c, 5);
    auto big = ball(z2, c, 6);
    for (const Vertex& v : small->members) {
        REQUIRE(big->contains(v));
        REQUIRE(big->dist_of(v) == small->dist_of(v));
    }
    REQUIRE(big->size() > small->size());
}

TEST_CASE("ball enumeration respects the vertex budget", "[metric]") {
    ZLattice z2(2);
    REQUIRE_THROWS_AS(ball(z2, z2.origin(), 50, 100), budget_error);
    REQUIRE_THROWS_AS(growth(z2, z2.origin(), 50, 100), budget_error);
    REQUIRE_THROWS_MATCHES(ball(z2, z2.origin(), 50, 100), budget_error,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("budget of 100")));
    REQUIRE_THROWS_AS(ball(z2, z2.origin(), -1), config_error);
}

TEST_CASE("loaded graphs parse weights and comments", "[metric]") {
    std::string path = write_temp("perc_path3.txt",
                                  "# three-vertex path\n"
                                  "0 1\n"
                                  "1 2  # second edge\n"
                                  "\n");
    std::string warning;
    auto g = load_graph(path, &warning);
    REQUIRE(warning.empty());
    REQUIRE(g->connected());
    REQUIRE(g->vertex_count() == 3);
    REQUIRE(g->distance(make_vertex({0}), make_vertex({2})) == 2);
    REQUIRE(g->all_vertices().size() == 3);

    std::string cyc = write_temp("perc_cycle6.txt", "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
    auto c6 = load_graph(cyc);
    REQUIRE(c6->distance(make_vertex({0}), make_vertex({3})) == 3);
    REQUIRE(c6->distance(make_vertex({1}), make_vertex({5})) == 2);
    auto b = ball(*c6, make_vertex({0}), 2);
    REQUIRE(b->size() == 5);
}

TEST_CASE("weighted shortest paths take the lighter route", "[metric]") {
    std::string path = write_temp("perc_tri.txt", "0 1 5\n0 2 1\n1 2 1\n");
    auto g = load_graph(path);
    REQUIRE(g->distance(make_vertex({0}), make_vertex({1})) == 2);
    auto b = ball(*g, make_vertex({0}), 5);
    REQUIRE(b->size() == 3);
    REQUIRE(b->dist_of(make_vertex({1})) == 2);
    REQUIRE(b->sphere_count(2) == 1);
    REQUIRE(b->sphere_count(5) == 0);
    auto b1 = ball(*g, make_vertex({0}), 1);
    REQUIRE(b1->size() == 2);
}

TEST_CASE("malformed graph files are rejected with line numbers", "[metric]") {
    auto expect_reject = [](const char* name, const std::string& body, const std::string& needle) {
        std::string path = write_temp(name, body);
        REQUIRE_THROWS_MATCHES(load_graph(path), parse_error,
                               Catch::Matchers::MessageMatches(
                                   Catch::Matchers::ContainsSubstring(needle)));
    };
    expect_reject("perc_bad_w0.txt", "0 1\n1 2 0\n", ":2:");
    expect_reject("perc_bad_loop.txt", "3 3\n", "self-loop");
    expect_reject("perc_bad_trail.txt", "0 1 1 9\n", "trailing");
    expect_reject("perc_bad_neg.txt", "0 -1\n", "non-negative");
    expect_reject("perc_bad_one.txt", "7\n", "two vertex ids");
    expect_reject("perc_bad_empty.txt", "# nothing\n", "no edges");
    REQUIRE_THROWS_AS(load_graph("/nonexistent/graph.txt"), parse_error);
}

TEST_CASE("disconnected graph files come back with a warning", "[metric]") {
    std::string path = write_temp("perc_disc.txt", "0 1\n2 3\n");
    std::string warning;
    auto g = load_graph(path, &warning);
    REQUIRE_FALSE(warning.empty());
    REQUIRE_FALSE(g->connected());
    REQUIRE_THROWS_AS(g->distance(make_vertex({0}), make_vertex({3})), unreachable_error);
    REQUIRE_THROWS_AS(g->distance(make_vertex({0}), make_vertex({9})), config_error);
}

TEST_CASE("model specs parse or reject cleanly", "[metric]") {
    REQUIRE(parse_model("z:2")->name() == "z:2");
    REQUIRE(parse_model("heis")->name() == "heis");
    REQUIRE(parse_model("tree:4")->name() == "tree:4");
    REQUIRE_THROWS_AS(parse_model("z:"), parse_error);
    REQUIRE_THROWS_AS(parse_model("z:x"), parse_error);
    REQUIRE_THROWS_AS(parse_model("frob:1"), parse_error);
    REQUIRE_THROWS_AS(parse_model(""), parse_error);
    REQUIRE_THROWS_AS(ZLattice(0), config_error);
    REQUIRE_THROWS_AS(ZLattice(9), config_error);
    REQUIRE_THROWS_AS(RegularTree(2), config_error);
}

TEST_CASE("ratios parse fractions decimals and integers", "[metric]") {
    Ratio half = Ratio::parse("1/2");
    REQUIRE(half.num == 1);
    REQUIRE(half.den == 2);
    REQUIRE(half.value() == 0.5);
    REQUIRE(half.ceil_times(5) == 3);
    REQUIRE(half.ceil_times(4) == 2);
    REQUIRE(half.str() == "1/2");

    Ratio quarter = Ratio::parse("0.25");
    REQUIRE(quarter.value() == 0.25);
    REQUIRE(quarter.ceil_times(8) == 2);
    REQUIRE(quarter.ceil_times(9) == 3);

    REQUIRE(Ratio::parse("3").ceil_times(4) == 12);
    REQUIRE(Ratio::parse("3").str() == "3");
    REQUIRE_THROWS_AS(Ratio::parse("0"), parse_error);
    REQUIRE_THROWS_AS(Ratio::parse("-1/2"), parse_error);
    REQUIRE_THROWS_AS(Ratio::parse("abc"), parse_error);
    REQUIRE_THROWS_AS(Ratio::parse("1/0"), parse_error);
}

TEST_CASE("separated nets separate and cover", "[metric]") {
    ZLattice z1(1);
    auto base_ball = ball(z1, z1.origin(), 4);
    auto net = separated_net(z1, base_ball->members, 2);
    std::vector<Vertex> want{make_vertex({-4}), make_vertex({-2}), make_vertex({0}),
                             make_vertex({2}), make_vertex({4})};
    REQUIRE(net == want);

    ZLattice z2(2);
    auto b = ball(z2, z2.origin(), 6);
    for (std::int64_t sep : {2, 3, 5}) {
        auto n = separated_net(z2, b->members, sep);
        for (std::size_t i = 0; i < n.size(); ++i)
            for (std::size_t j = i + 1; j < n.size(); ++j)
                REQUIRE(z2.distance(n[i], n[j]) >= sep);
        for (const Vertex& v : b->members) {
            std::int64_t best = sep;
            for (const Vertex& u : n) best = std::min(best, z2.distance(v, u));
            REQUIRE(best < sep);
        }
    }
    REQUIRE_THROWS_AS(separated_net(z1, base_ball->members, 0), config_error);
}

TEST_CASE("covering numbers of the plane ball stay bounded", "[metric]") {
    ZLattice z2(2);
    auto b = ball(z2, z2.origin(), 10);
    auto net = separated_net(z2, b->members, 5);
    REQUIRE(net.size() >= 4);
    REQUIRE(net.size() <= 40);
}

TEST_CASE("covering profile fits the plane dimension", "[metric]") {
    ZLattice z2(2);
    auto rows = covering_profile(z2, {8, 16}, {Ratio{1, 2}, Ratio{1, 4}});
    REQUIRE(rows.size() == 4);
    for (const CoverRow& row : rows) {
        REQUIRE(row.sep == row.eps.ceil_times(row.r));
        REQUIRE(row.n_hat >= 1);
        REQUIRE(row.n_hat <= row.ball_size);
    }
    AssouadFit fit = assouad_fit(rows);
    REQUIRE(fit.beta_hat > 1.2);
    REQUIRE(fit.beta_hat < 2.8);
    REQUIRE(fit.c1_hat > 0);
    REQUIRE(std::isfinite(fit.beta_log2c));

    auto flat = covering_profile(z2, {4, 8}, {Ratio{1, 1}});
    REQUIRE_THROWS_AS(assouad_fit(flat), degenerate_fit_error);
    REQUIRE_THROWS_AS(covering_profile(z2, {4}, {Ratio{3, 2}}), config_error);
    REQUIRE_THROWS_AS(covering_profile(z2, {0}, {Ratio{1, 2}}), config_error);
}

TEST_CASE("covering profile samples centers on finite graphs", "[metric]") {
    std::string path = write_temp("perc_grid.txt", [] {
        // 7x7 grid graph with ids y*7+x
        std::string s;
        for (int y = 0; y < 7; ++y)
            for (int x = 0; x < 7; ++x) {
                int id = y * 7 + x;
                if (x + 1 < 7) s += std::to_string(id) + " " + std::to_string(id + 1) + "\n";
                if (y + 1 < 7) s += std::to_string(id) + " " + std::to_string(id + 7) + "\n";
            }
        return s;
    }());
    auto g = load_graph(path);
    auto rows = covering_profile(*g, {2, 4}, {Ratio{1, 2}}, 2, 7);
    REQUIRE(rows.size() == 4); // 2 centers x 2 radii x 1 scale
    for (const CoverRow& row : rows) REQUIRE(row.n_hat >= 1);
}
