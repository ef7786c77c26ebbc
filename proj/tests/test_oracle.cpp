#include "doctest.h"

#include "cemb/oracle.hpp"

using namespace cemb;

namespace {

MultiGraph complete_graph(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.add_edge(i, j, "e" + std::to_string(i) + "_" + std::to_string(j));
    return g;
}

MultiGraph complete_bipartite(int a, int b) {
    MultiGraph g;
    for (int i = 0; i < a + b; ++i) g.add_vertex("v" + std::to_string(i));
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j)
            g.add_edge(i, a + j, "e" + std::to_string(i) + "_" + std::to_string(j));
    return g;
}

const SurfaceClass SPHERE{0, true};
const SurfaceClass TORUS{2, true};
const SurfaceClass PROJECTIVE{1, false};
const SurfaceClass KLEIN{2, false};

}  // namespace

TEST_CASE("minimum genus of small complete graphs") {
    CHECK(min_orientable_euler_genus(complete_graph(3)) == 0);
    CHECK(min_orientable_euler_genus(complete_graph(4)) == 0);
    CHECK(min_orientable_euler_genus(complete_graph(5)) == 2);
    CHECK(min_nonorientable_euler_genus(complete_graph(5)) == 1);
    CHECK(min_orientable_euler_genus(complete_bipartite(3, 3)) == 2);
    CHECK(min_nonorientable_euler_genus(complete_bipartite(3, 3)) == 1);
}

TEST_CASE("trees have no non-orientable embedding at all") {
    MultiGraph path;
    path.add_vertex("a");
    path.add_vertex("b");
    path.add_vertex("c");
    path.add_edge(0, 1, "e1");
    path.add_edge(1, 2, "e2");
    CHECK(min_orientable_euler_genus(path) == 0);
    CHECK(min_nonorientable_euler_genus(path) == -1);
}

TEST_CASE("one loop embeds one-sidedly in the projective plane") {
    MultiGraph g;
    g.add_vertex("u");
    g.add_edge(0, 0, "l");
    CHECK(min_orientable_euler_genus(g) == 0);
    CHECK(min_nonorientable_euler_genus(g) == 1);
}

TEST_CASE("K5 and K3,3 against the four smallest surfaces") {
    for (auto* g : {new MultiGraph(complete_graph(5)),
                    new MultiGraph(complete_bipartite(3, 3))}) {
        CHECK_FALSE(brute_force_surface_embed(*g, SPHERE));
        CHECK(brute_force_surface_embed(*g, TORUS));
        CHECK(brute_force_surface_embed(*g, PROJECTIVE));
        CHECK(brute_force_surface_embed(*g, KLEIN));
        delete g;
    }
}

TEST_CASE("planar graphs embed everywhere") {
    auto k4 = complete_graph(4);
    for (const auto& s : {SPHERE, TORUS, PROJECTIVE, KLEIN})
        CHECK(brute_force_surface_embed(k4, s));
}

TEST_CASE("multigraph with loops and parallels is planar") {
    MultiGraph g;
    g.add_vertex("a");
    g.add_vertex("b");
    g.add_edge(0, 0, "l");
    g.add_edge(0, 1, "p1");
    g.add_edge(0, 1, "p2");
    g.add_edge(0, 1, "p3");
    CHECK(brute_force_surface_embed(g, SPHERE));
}

TEST_CASE("disjoint unions route through connector edges") {
    // Two triangles: planar.
    MultiGraph g;
    for (int c = 0; c < 2; ++c) {
        int b = g.num_vertices();
        for (int i = 0; i < 3; ++i)
            g.add_vertex("c" + std::to_string(c) + "v" + std::to_string(i));
        for (int i = 0; i < 3; ++i)
            g.add_edge(b + i, b + (i + 1) % 3,
                       "c" + std::to_string(c) + "e" + std::to_string(i));
    }
    CHECK(brute_force_surface_embed(g, SPHERE));

    // Triangle plus K3,3: no sphere, but the torus works.
    MultiGraph h = complete_bipartite(3, 3);
    int b = h.num_vertices();
    for (int i = 0; i < 3; ++i) h.add_vertex("t" + std::to_string(i));
    for (int i = 0; i < 3; ++i)
        h.add_edge(b + i, b + (i + 1) % 3, "t" + std::to_string(i));
    CHECK_FALSE(brute_force_surface_embed(h, SPHERE));
    CHECK(brute_force_surface_embed(h, TORUS));
    CHECK(brute_force_surface_embed(h, PROJECTIVE));
}

TEST_CASE("isolated vertices never matter") {
    MultiGraph g = complete_graph(5);
    g.add_vertex("lonely");
    CHECK_FALSE(brute_force_surface_embed(g, SPHERE));
    CHECK(brute_force_surface_embed(g, TORUS));
    MultiGraph empty;
    empty.add_vertex("a");
    CHECK(brute_force_surface_embed(empty, SPHERE));
}

TEST_CASE("Euler-count filter rejects dense graphs fast") {
    CHECK_FALSE(brute_force_surface_embed(complete_graph(8), TORUS));
    CHECK_FALSE(brute_force_surface_embed(complete_graph(8),
                                          SurfaceClass{3, false}));
}
