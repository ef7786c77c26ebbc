#include "cemb/oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace cemb {

namespace {

/// Rotation/sign enumerator over one connected graph.  Calls `visit` with
/// the Euler genus of every traced map; `visit` returns true to stop early.
class MapEnumerator {
  public:
    explicit MapEnumerator(const MultiGraph& g) : g_(g) {
        int n = g.num_vertices();
        rot_.resize(n);
        for (int e = 0; e < g.num_edges(); ++e) {
            rot_[g.edges[e].u].push_back(2 * e);
            rot_[g.edges[e].v].push_back(2 * e + 1);
        }
        sign_.assign(g.num_edges(), +1);
        // Spanning-tree signs can be normalized to +1 by vertex flips, so
        // only co-tree edges get enumerated signs.
        auto forest = rooted_spanning_forest(g, {0});
        std::vector<char> in_tree(g.num_edges(), 0);
        for (int v = 0; v < n; ++v)
            if (forest.parent_edge[v] >= 0) in_tree[forest.parent_edge[v]] = 1;
        for (int e = 0; e < g.num_edges(); ++e)
            if (!in_tree[e]) cotree_.push_back(e);
    }

    int num_cotree() const { return static_cast<int>(cotree_.size()); }

    /// Enumerates all rotation systems with the given co-tree sign mask.
    bool enumerate(unsigned long mask, const std::function<bool(int)>& visit) {
        for (int i = 0; i < num_cotree(); ++i)
            sign_[cotree_[i]] = (mask >> i) & 1 ? -1 : +1;
        return recurse(0, visit);
    }

  private:
    bool recurse(int v, const std::function<bool(int)>& visit) {
        while (v < g_.num_vertices() && rot_[v].size() <= 2) ++v;
        if (v == g_.num_vertices()) return visit(euler_genus());
        auto& r = rot_[v];
        std::sort(r.begin() + 1, r.end());
        do {
            if (recurse(v + 1, visit)) return true;
        } while (std::next_permutation(r.begin() + 1, r.end()));
        return false;
    }

    int euler_genus() {
        int nd = 2 * g_.num_edges();
        visited_.assign(2 * nd, 0);
        pos_.assign(nd, 0);
        for (const auto& r : rot_)
            for (int i = 0; i < static_cast<int>(r.size()); ++i) pos_[r[i]] = i;
        int orbits = 0;
        for (int d = 0; d < nd; ++d)
            for (int s : {0, 1})
                if (!visited_[2 * d + s]) {
                    ++orbits;
                    int cd = d, cs = s;
                    do {
                        visited_[2 * cd + cs] = 1;
                        int e = cd / 2;
                        int ns = cs ^ (sign_[e] < 0 ? 1 : 0);
                        int md = cd ^ 1;
                        int hv = (md & 1) ? g_.edges[e].v : g_.edges[e].u;
                        const auto& r = rot_[hv];
                        int n = static_cast<int>(r.size());
                        int idx = pos_[md];
                        cd = r[(idx + (ns == 0 ? 1 : n - 1)) % n];
                        cs = ns;
                    } while (cd != d || cs != s);
                }
        int walls = orbits / 2;
        int chi = g_.num_vertices() - g_.num_edges() + walls;
        return 2 - chi;
    }

    const MultiGraph& g_;
    std::vector<std::vector<int>> rot_;
    std::vector<int> sign_;
    std::vector<int> cotree_;
    std::vector<char> visited_;
    std::vector<int> pos_;
};

MultiGraph without_isolated(const MultiGraph& g) {
    MultiGraph out;
    std::vector<int> id(g.num_vertices(), -1);
    for (int v = 0; v < g.num_vertices(); ++v)
        if (g.degree(v) > 0) id[v] = out.add_vertex(g.vertex_names[v]);
    for (const auto& e : g.edges) out.add_edge(id[e.u], id[e.v], e.name);
    return out;
}

bool embed_connected(const MultiGraph& g, const SurfaceClass& s) {
    MapEnumerator en(g);
    // Orientable maps: signs trivial.
    int bound_or = s.orientable ? s.euler_genus : s.euler_genus - 1;
    if (bound_or >= 0 &&
        en.enumerate(0, [&](int eg) { return eg <= bound_or; }))
        return true;
    if (s.orientable) return false;
    for (unsigned long mask = 1; mask < (1ul << en.num_cotree()); ++mask)
        if (en.enumerate(mask, [&](int eg) { return eg <= s.euler_genus; }))
            return true;
    return false;
}

}  // namespace

bool brute_force_surface_embed(const MultiGraph& g0, const SurfaceClass& s) {
    MultiGraph g = without_isolated(g0);
    if (g.num_edges() == 0) return true;
    if (euler_genus_lower_bound(g) > s.euler_genus) return false;

    auto comp = g.components();
    int k = g.num_components();
    if (k == 1) return embed_connected(g, s);

    // The surface is connected, so some face of any embedding touches two
    // graph components; a connector edge can then be drawn inside it.
    for (int u = 0; u < g.num_vertices(); ++u) {
        if (comp[u] != 0) continue;
        for (int v = 0; v < g.num_vertices(); ++v) {
            if (comp[v] == 0) continue;
            MultiGraph g2 = g;
            g2.add_edge(u, v, "_conn");
            if (brute_force_surface_embed(g2, s)) return true;
        }
    }
    return false;
}

int min_orientable_euler_genus(const MultiGraph& g0) {
    MultiGraph g = without_isolated(g0);
    if (g.num_edges() == 0) return 0;
    if (g.num_components() != 1)
        throw std::runtime_error("oracle: graph must be connected");
    MapEnumerator en(g);
    int best = 1 << 20;
    en.enumerate(0, [&](int eg) {
        best = std::min(best, eg);
        return best == 0;
    });
    return best;
}

int min_nonorientable_euler_genus(const MultiGraph& g0) {
    MultiGraph g = without_isolated(g0);
    if (g.num_edges() == 0) return -1;
    if (g.num_components() != 1)
        throw std::runtime_error("oracle: graph must be connected");
    MapEnumerator en(g);
    if (en.num_cotree() == 0) return -1;
    int best = 1 << 20;
    for (unsigned long mask = 1; mask < (1ul << en.num_cotree()); ++mask) {
        en.enumerate(mask, [&](int eg) {
            best = std::min(best, eg);
            return best == 1;
        });
        if (best == 1) break;
    }
    return best >= (1 << 20) ? -1 : best;
}

}  // namespace cemb
