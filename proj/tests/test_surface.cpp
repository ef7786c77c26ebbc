#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "cemb/combmap.hpp"
#include "cemb/complex.hpp"
#include "cemb/graph.hpp"
#include "cemb/surface.hpp"
#include "doctest.h"

using namespace cemb;

namespace {

SimplicialComplex2 tetrahedron() {
    SimplicialComplex2 c;
    for (int i = 0; i < 4; ++i) c.add_node("t" + std::to_string(i));
    c.add_triangle(0, 1, 2);
    c.add_triangle(0, 1, 3);
    c.add_triangle(0, 2, 3);
    c.add_triangle(1, 2, 3);
    return c;
}

/// 7-vertex triangulated torus: triangles {i, i+1, i+3} and {i, i+2, i+3}
/// mod 7; every one of the 21 pairs is a segment.
SimplicialComplex2 torus7() {
    SimplicialComplex2 c;
    for (int i = 0; i < 7; ++i) c.add_node("v" + std::to_string(i));
    for (int i = 0; i < 7; ++i) {
        c.add_triangle(i, (i + 1) % 7, (i + 3) % 7);
        c.add_triangle(i, (i + 2) % 7, (i + 3) % 7);
    }
    return c;
}

/// 6-vertex triangulated projective plane (antipodal icosahedron).
SimplicialComplex2 rp2() {
    SimplicialComplex2 c;
    for (int i = 1; i <= 6; ++i) c.add_node("p" + std::to_string(i));
    const int f[10][3] = {{1, 2, 3}, {1, 2, 4}, {1, 3, 5}, {1, 4, 6}, {1, 5, 6},
                          {2, 3, 6}, {2, 4, 5}, {2, 5, 6}, {3, 4, 5}, {3, 4, 6}};
    for (const auto& t : f) c.add_triangle(t[0] - 1, t[1] - 1, t[2] - 1);
    return c;
}

}  // namespace

TEST_CASE("map_from_polygons rebuilds closed surfaces from their schemas") {
    SUBCASE("tetrahedron boundary is a sphere") {
        SimplicialComplex2 c = tetrahedron();
        auto reps = classify_surface(c);
        REQUIRE(reps.size() == 1);
        CHECK(reps[0].cls == SurfaceClass{0, true});
        CHECK(reps[0].boundaries == 0);
        CHECK(reps[0].nodes == std::vector<int>{0, 1, 2, 3});
    }
    SUBCASE("square with both loop pairs identified is a torus") {
        MultiGraph g;
        g.add_vertex("v");
        int a = g.add_edge(0, 0, "a");
        int b = g.add_edge(0, 0, "b");
        CombMap m = map_from_polygons(g, {{2 * a, 2 * b, 2 * a + 1, 2 * b + 1}});
        m.check();
        auto comps = surface_components(m);
        REQUIRE(comps.size() == 1);
        CHECK(comps[0].cls == SurfaceClass{2, true});
        REQUIRE(m.faces.size() == 1);
        CHECK(m.faces[0].is_disk());
    }
    SUBCASE("digon with both sides identified head-to-tail is the projective plane") {
        MultiGraph g;
        g.add_vertex("v");
        int a = g.add_edge(0, 0, "a");
        CombMap m = map_from_polygons(g, {{2 * a, 2 * a}});
        m.check();
        auto comps = surface_components(m);
        REQUIRE(comps.size() == 1);
        CHECK(comps[0].cls == SurfaceClass{1, false});
    }
    SUBCASE("square with one reversed identification is a Klein bottle") {
        MultiGraph g;
        g.add_vertex("v");
        int a = g.add_edge(0, 0, "a");
        int b = g.add_edge(0, 0, "b");
        CombMap m = map_from_polygons(g, {{2 * a, 2 * b, 2 * a, 2 * b + 1}});
        m.check();
        auto comps = surface_components(m);
        REQUIRE(comps.size() == 1);
        CHECK(comps[0].cls == SurfaceClass{2, false});
    }
    SUBCASE("rejects a walk set that is not closed") {
        MultiGraph g;
        g.add_vertex("x");
        g.add_vertex("y");
        g.add_edge(0, 1, "e");
        CHECK_THROWS(map_from_polygons(g, {{0, 0}}));
    }
}

TEST_CASE("classify_surface recognizes the standard closed surfaces") {
    CHECK(classify_surface(torus7())[0].cls == SurfaceClass{2, true});
    CHECK(classify_surface(torus7())[0].boundaries == 0);
    CHECK(classify_surface(rp2())[0].cls == SurfaceClass{1, false});

    SUBCASE("a single triangle is a disk: sphere with one boundary circle") {
        SimplicialComplex2 c;
        c.add_node("a");
        c.add_node("b");
        c.add_node("c");
        c.add_triangle(0, 1, 2);
        auto reps = classify_surface(c);
        REQUIRE(reps.size() == 1);
        CHECK(reps[0].cls == SurfaceClass{0, true});
        CHECK(reps[0].boundaries == 1);
    }
    SUBCASE("disjoint pieces are reported separately") {
        SimplicialComplex2 c = tetrahedron();
        int a = c.add_node("x");
        int b = c.add_node("y");
        int d = c.add_node("z");
        c.add_triangle(a, b, d);
        auto reps = classify_surface(c);
        REQUIRE(reps.size() == 2);
        CHECK(reps[0].boundaries + reps[1].boundaries == 1);
    }
    SUBCASE("invariant under barycentric subdivision") {
        auto before = classify_surface(torus7());
        auto after = classify_surface(barycentric_subdivision(torus7()));
        REQUIRE(after.size() == 1);
        CHECK(after[0].cls == before[0].cls);
        CHECK(after[0].boundaries == before[0].boundaries);
        auto r2 = classify_surface(barycentric_subdivision(rp2()));
        CHECK(r2[0].cls == SurfaceClass{1, false});
    }
    SUBCASE("rejects books and pinch points") {
        SimplicialComplex2 book;
        book.add_node("a");
        book.add_node("b");
        for (int i = 0; i < 3; ++i) book.add_node("c" + std::to_string(i));
        for (int i = 0; i < 3; ++i) book.add_triangle(0, 1, 2 + i);
        CHECK_THROWS(classify_surface(book));

        SimplicialComplex2 pinch;  // two triangles sharing only one node
        for (int i = 0; i < 5; ++i) pinch.add_node("n" + std::to_string(i));
        pinch.add_triangle(0, 1, 2);
        pinch.add_triangle(0, 3, 4);
        CHECK_THROWS(classify_surface(pinch));

        SimplicialComplex2 bare_seg;
        bare_seg.add_node("a");
        bare_seg.add_node("b");
        bare_seg.add_segment(0, 1);
        CHECK_THROWS(classify_surface(bare_seg));
    }
}

TEST_CASE("barycentric_subdivision keeps the simplex counts consistent") {
    SimplicialComplex2 c = torus7();
    SimplicialComplex2 d = barycentric_subdivision(c);
    CHECK(d.num_nodes() == 7 + 21 + 14);
    CHECK(static_cast<int>(d.triangles.size()) == 6 * 14);
    d.validate();
    // An isolated segment subdivides into a path of two.
    SimplicialComplex2 s;
    s.add_node("a");
    s.add_node("b");
    s.add_segment(0, 1);
    SimplicialComplex2 sd = barycentric_subdivision(s);
    CHECK(sd.num_nodes() == 3);
    CHECK(sd.segments.size() == 2);
    CHECK(sd.triangles.empty());
}

TEST_CASE("withdraw_nodes splits a node into one copy per link part") {
    SUBCASE("pinch point becomes two disjoint triangles") {
        SimplicialComplex2 c;
        for (int i = 0; i < 5; ++i) c.add_node("n" + std::to_string(i));
        c.add_triangle(0, 1, 2);
        c.add_triangle(0, 3, 4);
        auto wr = withdraw_nodes(c, {"n0"});
        CHECK(wr.copies.at("n0").size() == 2);
        CHECK(wr.complex.num_nodes() == 6);
        CHECK(wr.complex.triangles.size() == 2);
        auto reps = classify_surface(wr.complex);
        CHECK(reps.size() == 2);
    }
    SUBCASE("isolated segments get their own copies") {
        SimplicialComplex2 c;
        for (int i = 0; i < 4; ++i) c.add_node("n" + std::to_string(i));
        c.add_triangle(0, 1, 2);
        c.add_segment(0, 3);
        auto wr = withdraw_nodes(c, {"n0"});
        CHECK(wr.copies.at("n0").size() == 2);  // one corner, one segment
        CHECK(wr.complex.num_nodes() == 5);
        wr.complex.validate();
    }
}

TEST_CASE("thicken_and_cap on surface complexes without pins") {
    MultiGraph g0;
    g0.add_vertex("u");
    SUBCASE("a closed surface with no pins is entirely graph-free") {
        auto r = thicken_and_cap(torus7(), {}, g0);
        CHECK(r.pi.g.num_vertices() == 0);
        CHECK(r.pi.faces.empty());
        REQUIRE(r.bare.size() == 1);
        CHECK(r.bare[0] == SurfaceClass{2, true});
        CHECK(r.g.num_vertices() == 1);
        CHECK(r.h_vertices.empty());
        CHECK(r.h_edges.empty());
    }
    SUBCASE("a pinned interior vertex floats in a sphere") {
        auto r = thicken_and_cap(tetrahedron(), {{"t2", "u"}}, g0);
        CHECK(r.bare.empty());
        REQUIRE(r.pi.g.num_vertices() == 1);
        CHECK(r.pi.g.vertex_names[0] == "u");
        REQUIRE(r.pi.faces.size() == 1);
        CHECK(r.pi.faces[0].euler_genus == 0);
        CHECK(r.pi.faces[0].floats == std::vector<int>{1 - 1});
        auto comps = surface_components(r.pi);
        REQUIRE(comps.size() == 1);
        CHECK(comps[0].cls == SurfaceClass{0, true});
        CHECK(r.h_vertices == std::vector<std::string>{"u"});
    }
    SUBCASE("a pinned vertex on a capped boundary gets a hub and spoke") {
        SimplicialComplex2 c;
        c.add_node("a");
        c.add_node("b");
        c.add_node("c");
        c.add_triangle(0, 1, 2);
        auto r = thicken_and_cap(c, {{"a", "u"}}, g0);
        CHECK(r.bare.empty());
        CHECK(r.pi.g.num_vertices() == 2);  // u and the hub
        CHECK(r.pi.g.num_edges() == 1);     // the spoke
        CHECK(r.h_edges.size() == 1);
        auto comps = surface_components(r.pi);
        REQUIRE(comps.size() == 1);
        CHECK(comps[0].cls == SurfaceClass{0, true});
        for (const auto& f : r.pi.faces) CHECK(f.cellularity_defect() == 0);
        CHECK(r.g.num_vertices() == 2);
        CHECK(r.g.num_edges() == 1);
    }
    SUBCASE("a pinned vertex floats in a torus face") {
        auto r = thicken_and_cap(torus7(), {{"v3", "u"}}, g0);
        CHECK(r.bare.empty());
        REQUIRE(r.pi.faces.size() == 1);
        CHECK(r.pi.faces[0].euler_genus == 2);
        CHECK(r.pi.faces[0].orientable);
        CHECK(r.pi.faces[0].num_boundaries() == 1);
        auto comps = surface_components(r.pi);
        CHECK(comps[0].cls == SurfaceClass{2, true});
    }
}

TEST_CASE("thicken_and_cap replaces singular nodes by loop spheres") {
    MultiGraph g0;
    g0.add_vertex("u");
    SUBCASE("two tetrahedra sharing a node: cone-cone singularity") {
        SimplicialComplex2 c = tetrahedron();
        int p = 0;  // shared node t0
        int a = c.add_node("s1");
        int b = c.add_node("s2");
        int d = c.add_node("s3");
        c.add_triangle(p, a, b);
        c.add_triangle(p, a, d);
        c.add_triangle(p, b, d);
        c.add_triangle(a, b, d);
        REQUIRE(singular_nodes(c) == std::vector<int>{p});
        auto r = thicken_and_cap(c, {{"t0", "u"}}, g0);
        CHECK(r.bare.empty());
        // Two loops at u, no tips, no hubs.
        CHECK(r.h_vertices == std::vector<std::string>{"u"});
        REQUIRE(r.h_edges.size() == 2);
        CHECK(r.pi.g.num_edges() == 2);
        auto comps = surface_components(r.pi);
        REQUIRE(comps.size() == 1);
        CHECK(comps[0].cls == SurfaceClass{0, true});
        CHECK(r.pi.faces.size() == 3);
        for (const auto& f : r.pi.faces) CHECK(f.is_disk());
        // The two loops were also added to the graph.
        CHECK(r.g.num_edges() == 2);
        CHECK(r.g.edges[0].u == r.g.edges[0].v);
    }
    SUBCASE("two triangles sharing a node: corner-corner singularity") {
        SimplicialComplex2 c;
        for (int i = 0; i < 5; ++i) c.add_node("n" + std::to_string(i));
        c.add_triangle(0, 1, 2);
        c.add_triangle(0, 3, 4);
        auto r = thicken_and_cap(c, {{"n0", "u"}}, g0);
        CHECK(r.bare.empty());
        auto comps = surface_components(r.pi);
        REQUIRE(comps.size() == 1);
        CHECK(comps[0].cls == SurfaceClass{0, true});
        // u carries two loops and two pendant stems to tips.
        int loops = 0, stems = 0, spokes = 0;
        for (const auto& e : r.pi.g.edges) {
            if (e.u == e.v)
                ++loops;
            else if (e.name.rfind("stem:", 0) == 0)
                ++stems;
            else
                ++spokes;
        }
        CHECK(loops == 2);
        CHECK(stems == 2);
        CHECK(spokes == 2);
        // All faces of the final map are reasonable and the map validates.
        r.pi.check();
        for (const auto& f : r.pi.faces) CHECK(f.cellularity_defect() >= 0);
    }
    SUBCASE("every added vertex and edge also appears in the output graph") {
        SimplicialComplex2 c;
        for (int i = 0; i < 5; ++i) c.add_node("n" + std::to_string(i));
        c.add_triangle(0, 1, 2);
        c.add_triangle(0, 3, 4);
        auto r = thicken_and_cap(c, {{"n0", "u"}}, g0);
        for (const auto& name : r.h_vertices) CHECK(r.g.find_vertex(name));
        std::set<std::string> gedges;
        for (const auto& e : r.g.edges) gedges.insert(e.name);
        for (const auto& name : r.h_edges) CHECK(gedges.count(name) == 1);
        // Names in the embedding match names in the graph.
        for (const auto& name : r.pi.g.vertex_names)
            CHECK(r.g.find_vertex(name));
    }
    SUBCASE("pins are mandatory on singular nodes and must be injective") {
        SimplicialComplex2 c;
        for (int i = 0; i < 5; ++i) c.add_node("n" + std::to_string(i));
        c.add_triangle(0, 1, 2);
        c.add_triangle(0, 3, 4);
        CHECK_THROWS(thicken_and_cap(c, {}, g0));
        CHECK_THROWS(thicken_and_cap(c, {{"n0", "u"}, {"n1", "u"}}, g0));
        CHECK_THROWS(thicken_and_cap(c, {{"n0", "w"}}, g0));
    }
}
