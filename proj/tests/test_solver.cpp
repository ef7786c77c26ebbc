#include <set>
#include <string>

#include "cemb/pipeline.hpp"
#include "doctest.h"

using namespace cemb;

namespace {

MultiGraph complete_graph(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex("u" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.add_edge(i, j, "e" + std::to_string(i) + "_" + std::to_string(j));
    return g;
}

/// First edge of complete_graph(n) embedded alone on a sphere.
CombMap seed_edge_sphere() {
    MultiGraph h;
    h.add_vertex("u0");
    h.add_vertex("u1");
    h.add_edge(0, 1, "e0_1");
    return cellular_map(h, {{0}, {1}}, {+1});
}

/// A marker vertex floating on a bare sphere.
ConInstance lone_float(const MultiGraph& g) {
    CombMap pi;
    pi.faces.push_back(FaceRec{0, true, {}, {}});
    pi = add_float_vertex(pi, 0, g.vertex_names[0]);
    return ConInstance{g, pi};
}

Answer solve(const ConInstance& inst, CombMap* out) {
    BudgetMeter b;
    return solve_cellular(inst, b, out);
}

}  // namespace

TEST_CASE("growing a planar graph out of one embedded edge") {
    ConInstance inst{complete_graph(4), seed_edge_sphere()};
    CombMap fm;
    REQUIRE(solve(inst, &fm) == Answer::YES);
    fm.check();
    CHECK(fm.g.num_edges() == 6);
    for (const auto& f : fm.faces) CHECK(f.is_disk());
    auto comps = surface_components(fm);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].cls == SurfaceClass{0, true});
}

TEST_CASE("a sphere refuses a non-planar graph at every turn") {
    ConInstance inst{complete_graph(5), seed_edge_sphere()};
    CombMap fm;
    CHECK(solve(inst, &fm) == Answer::NO);
}

TEST_CASE("loops grow from a lone floating vertex") {
    MultiGraph g;
    g.add_vertex("u");
    g.add_edge(0, 0, "l0");
    g.add_edge(0, 0, "l1");
    CombMap fm;
    REQUIRE(solve(lone_float(g), &fm) == Answer::YES);
    fm.check();
    CHECK(fm.g.num_edges() == 2);
    for (const auto& f : fm.faces) CHECK(f.is_disk());
    auto comps = surface_components(fm);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].cls == SurfaceClass{0, true});
}

TEST_CASE("pendant growth reaches whole trees") {
    MultiGraph g;
    g.add_vertex("r");
    for (int i = 1; i <= 5; ++i) {
        g.add_vertex("t" + std::to_string(i));
        g.add_edge((i - 1) / 2, i, "b" + std::to_string(i));
    }
    CombMap fm;
    REQUIRE(solve(lone_float(g), &fm) == Answer::YES);
    fm.check();
    CHECK(fm.g.num_vertices() == 6);
}

TEST_CASE("the solver respects its step budget") {
    ConInstance inst{complete_graph(4), seed_edge_sphere()};
    BudgetMeter b;
    b.max_steps = 2;
    CombMap fm;
    CHECK_THROWS_AS(solve_cellular(inst, b, &fm), BudgetExceeded);
}
