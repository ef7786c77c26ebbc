#include "cemb/gadget.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "cemb/surface.hpp"

namespace cemb {

namespace {

SimplicialComplex2 sphere4() {
    SimplicialComplex2 c;
    for (int i = 0; i < 4; ++i) c.add_node("s" + std::to_string(i));
    c.add_triangle(0, 1, 2);
    c.add_triangle(0, 1, 3);
    c.add_triangle(0, 2, 3);
    c.add_triangle(1, 2, 3);
    return c;
}

/// 7-vertex triangulated torus: triangles {i, i+1, i+3} and {i, i+2, i+3}
/// mod 7.
SimplicialComplex2 torus_block(const std::string& prefix) {
    SimplicialComplex2 c;
    for (int i = 0; i < 7; ++i) c.add_node(prefix + std::to_string(i));
    for (int i = 0; i < 7; ++i) {
        c.add_triangle(i, (i + 1) % 7, (i + 3) % 7);
        c.add_triangle(i, (i + 2) % 7, (i + 3) % 7);
    }
    return c;
}

/// 6-vertex triangulated projective plane (antipodal icosahedron).
SimplicialComplex2 rp2_block(const std::string& prefix) {
    SimplicialComplex2 c;
    for (int i = 1; i <= 6; ++i) c.add_node(prefix + std::to_string(i));
    const int f[10][3] = {{1, 2, 3}, {1, 2, 4}, {1, 3, 5}, {1, 4, 6},
                          {1, 5, 6}, {2, 3, 6}, {2, 4, 5}, {2, 5, 6},
                          {3, 4, 5}, {3, 4, 6}};
    for (const auto& t : f) c.add_triangle(t[0] - 1, t[1] - 1, t[2] - 1);
    return c;
}

/// Connected sum: one triangle from each side is dropped and their
/// corners are identified pairwise.  Node names of `b` must be disjoint
/// from those of `a`.
SimplicialComplex2 connected_sum(const SimplicialComplex2& a,
                                 const SimplicialComplex2& b) {
    SimplicialComplex2 out;
    for (const auto& n : a.node_names) out.add_node(n);
    for (size_t t = 1; t < a.triangles.size(); ++t)
        out.add_triangle(a.triangles[t][0], a.triangles[t][1],
                         a.triangles[t][2]);
    for (const auto& s : a.segments) out.add_segment(s[0], s[1]);
    std::vector<int> nid(b.num_nodes(), -1);
    for (int i = 0; i < 3; ++i) nid[b.triangles[0][i]] = a.triangles[0][i];
    for (int p = 0; p < b.num_nodes(); ++p)
        if (nid[p] < 0) nid[p] = out.add_node(b.node_names[p]);
    for (size_t t = 1; t < b.triangles.size(); ++t)
        out.add_triangle(nid[b.triangles[t][0]], nid[b.triangles[t][1]],
                         nid[b.triangles[t][2]]);
    return out;
}

}  // namespace

SimplicialComplex2 surface_gadget(int genus, bool orientable) {
    if (genus < 0 || (!orientable && genus < 1))
        throw std::runtime_error("surface_gadget: no such surface");
    if (orientable && genus == 0) return sphere4();
    SimplicialComplex2 acc = orientable ? torus_block("h0_") : rp2_block("h0_");
    for (int j = 1; j < genus; ++j) {
        std::string p = "h" + std::to_string(j) + "_";
        acc = connected_sum(acc, orientable ? torus_block(p) : rp2_block(p));
    }
    return acc;
}

SimplicialComplex2 book_gadget(int pages) {
    if (pages < 0) throw std::runtime_error("book_gadget: negative pages");
    SimplicialComplex2 c;
    c.add_node("a");
    c.add_node("b");
    c.add_segment(0, 1);
    for (int i = 0; i < pages; ++i) {
        int w = c.add_node("w" + std::to_string(i));
        c.add_triangle(0, 1, w);
    }
    return c;
}

SimplicialComplex2 crossing_gadget(int k, int genus) {
    if (k < 0) throw std::runtime_error("crossing_gadget: negative k");
    SimplicialComplex2 base = surface_gadget(genus, true);
    if (k == 0) return base;
    // k pairwise node-disjoint triangles to punch out; refine until the
    // triangulation is big enough to host them.
    std::vector<int> picked;
    while (true) {
        picked.clear();
        std::vector<char> used(base.num_nodes(), 0);
        for (size_t t = 0; t < base.triangles.size(); ++t) {
            const auto& tr = base.triangles[t];
            if (used[tr[0]] || used[tr[1]] || used[tr[2]]) continue;
            used[tr[0]] = used[tr[1]] = used[tr[2]] = 1;
            picked.push_back(static_cast<int>(t));
            if (static_cast<int>(picked.size()) == k) break;
        }
        if (static_cast<int>(picked.size()) == k) break;
        base = barycentric_subdivision(base);
    }
    std::vector<char> gone(base.triangles.size(), 0);
    for (int t : picked) gone[t] = 1;
    SimplicialComplex2 out;
    for (const auto& n : base.node_names) out.add_node(n);
    for (size_t t = 0; t < base.triangles.size(); ++t)
        if (!gone[t])
            out.add_triangle(base.triangles[t][0], base.triangles[t][1],
                             base.triangles[t][2]);
    for (const auto& s : base.segments) out.add_segment(s[0], s[1]);
    // Over each hole: an octagonal collar hanging into it, then two bands
    // joining interlaced pairs of octagon arcs.  An edge routed through
    // one band passes an edge routed through the other without meeting it.
    for (int i = 0; i < k; ++i) {
        const auto& tr = base.triangles[picked[i]];
        int x = tr[0], y = tr[1], z = tr[2];
        int c[8];
        for (int j = 0; j < 8; ++j)
            c[j] = out.add_node("q" + std::to_string(i) + "_" +
                                std::to_string(j));
        out.add_triangle(x, c[0], c[1]);
        out.add_triangle(x, c[1], c[2]);
        out.add_triangle(x, c[2], c[3]);
        out.add_triangle(x, y, c[3]);
        out.add_triangle(y, c[3], c[4]);
        out.add_triangle(y, c[4], c[5]);
        out.add_triangle(y, c[5], c[6]);
        out.add_triangle(y, z, c[6]);
        out.add_triangle(z, c[6], c[7]);
        out.add_triangle(z, c[7], c[0]);
        out.add_triangle(z, x, c[0]);
        out.add_triangle(c[0], c[1], c[4]);
        out.add_triangle(c[1], c[4], c[5]);
        out.add_triangle(c[2], c[3], c[6]);
        out.add_triangle(c[3], c[6], c[7]);
    }
    return out;
}

}  // namespace cemb
