// End-to-end properties cutting across pipeline stages: agreement with the
// brute-force rotation-system oracle, and stage-specific fixture families
// whose answers are known independently.

#include <functional>
#include <string>
#include <vector>

#include "doctest.h"

#include "cemb/gadget.hpp"
#include "cemb/oracle.hpp"
#include "cemb/pipeline.hpp"

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

MultiGraph cycle_graph(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex("c" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        g.add_edge(i, (i + 1) % n, "e" + std::to_string(i));
    return g;
}

MultiGraph path_graph(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex("p" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge(i, i + 1, "e" + std::to_string(i));
    return g;
}

Answer decide(const MultiGraph& g, const SimplicialComplex2& c) {
    return run_pipeline(g, c).answer;
}

/// All multigraphs (loops and parallel edges allowed, no isolated
/// vertices) with up to `max_edges` edges over at most four labels; small
/// enough that labeled duplicates of one isomorphism class are cheap to
/// just re-test.
std::vector<MultiGraph> labeled_graphs(int max_edges) {
    const int n = 4;
    std::vector<std::pair<int, int>> slots;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) slots.emplace_back(a, b);
    std::vector<MultiGraph> out;
    std::vector<int> cur;
    auto flush = [&] {
        if (cur.empty()) return;
        std::vector<int> vid(n, -1);
        MultiGraph g;
        for (int s : cur)
            for (int v : {slots[s].first, slots[s].second})
                if (vid[v] < 0) vid[v] = g.add_vertex("v" + std::to_string(v));
        for (size_t i = 0; i < cur.size(); ++i)
            g.add_edge(vid[slots[cur[i]].first], vid[slots[cur[i]].second],
                       "e" + std::to_string(i));
        out.push_back(std::move(g));
    };
    std::function<void(size_t)> rec = [&](size_t from) {
        flush();
        if (static_cast<int>(cur.size()) == max_edges) return;
        for (size_t s = from; s < slots.size(); ++s) {
            cur.push_back(static_cast<int>(s));
            rec(s);  // allow repeats: parallel edges
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace

TEST_CASE("pipeline agrees with the rotation-system oracle on tiny graphs") {
    struct Host {
        SimplicialComplex2 c;
        SurfaceClass cls;
    };
    std::vector<Host> hosts = {
        {surface_gadget(0, true), {0, true}},
        {surface_gadget(1, true), {2, true}},
        {surface_gadget(1, false), {1, false}},
    };
    for (const auto& g : labeled_graphs(4))
        for (const auto& h : hosts) {
            bool want = brute_force_surface_embed(g, h.cls);
            CAPTURE(g.num_vertices());
            CAPTURE(g.num_edges());
            CHECK(decide(g, h.c) == (want ? Answer::YES : Answer::NO));
        }
}

TEST_CASE("1-dimensional complexes accept exactly disjoint unions of paths") {
    SimplicialComplex2 seg;
    seg.add_node("a");
    seg.add_node("b");
    seg.add_segment(0, 1);
    for (int n = 1; n <= 6; ++n) CHECK(decide(path_graph(n), seg) == Answer::YES);
    for (int n = 3; n <= 6; ++n) CHECK(decide(cycle_graph(n), seg) == Answer::NO);
    MultiGraph loop;
    loop.add_vertex("x");
    loop.add_edge(0, 0, "l");
    CHECK(decide(loop, seg) == Answer::NO);
}

TEST_CASE("a bordered surface answers like its capped closed surface") {
    // torus with one triangle punched out
    SimplicialComplex2 c = surface_gadget(1, true);
    SimplicialComplex2 holed;
    for (const auto& n : c.node_names) holed.add_node(n);
    for (size_t t = 1; t < c.triangles.size(); ++t)
        holed.add_triangle(c.triangles[t][0], c.triangles[t][1],
                           c.triangles[t][2]);
    for (const auto& s : c.segments) holed.add_segment(s[0], s[1]);
    CHECK(decide(complete_graph(5), holed) == Answer::YES);
    CHECK(decide(complete_graph(8), holed) == Answer::NO);
}

TEST_CASE("disconnected surfaces require a component-wise assignment") {
    auto two = [](const SimplicialComplex2& a, const SimplicialComplex2& b) {
        SimplicialComplex2 out;
        for (int half = 0; half < 2; ++half) {
            const SimplicialComplex2& src = half ? b : a;
            std::vector<int> nid;
            for (const auto& n : src.node_names)
                nid.push_back(out.add_node(std::to_string(half) + "_" + n));
            for (const auto& s : src.segments)
                out.add_segment(nid[s[0]], nid[s[1]]);
            for (const auto& t : src.triangles)
                out.add_triangle(nid[t[0]], nid[t[1]], nid[t[2]]);
        }
        return out;
    };
    auto sph = surface_gadget(0, true);
    auto tor = surface_gadget(1, true);
    MultiGraph k5 = complete_graph(5);
    CHECK(decide(k5, two(sph, sph)) == Answer::NO);
    CHECK(decide(k5, two(sph, tor)) == Answer::YES);
    // K5 plus a triangle: the triangle may share the torus or take the
    // sphere, but two K5 components would need two tori
    MultiGraph mixed = k5;
    {
        int a = mixed.add_vertex("t0"), b = mixed.add_vertex("t1"),
            c2 = mixed.add_vertex("t2");
        mixed.add_edge(a, b, "f0");
        mixed.add_edge(b, c2, "f1");
        mixed.add_edge(c2, a, "f2");
    }
    CHECK(decide(mixed, two(sph, tor)) == Answer::YES);
    CHECK(decide(mixed, two(sph, sph)) == Answer::NO);
}
