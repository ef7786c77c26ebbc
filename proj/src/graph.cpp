#include "cemb/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

namespace cemb {

int MultiGraph::add_vertex(const std::string& name) {
    vertex_names.push_back(name);
    return num_vertices() - 1;
}

int MultiGraph::add_edge(int u, int v, const std::string& name) {
    edges.push_back({u, v, name});
    return num_edges() - 1;
}

std::optional<int> MultiGraph::find_vertex(const std::string& name) const {
    for (int i = 0; i < num_vertices(); ++i)
        if (vertex_names[i] == name) return i;
    return std::nullopt;
}

std::optional<int> MultiGraph::find_edge(const std::string& name) const {
    for (int i = 0; i < num_edges(); ++i)
        if (edges[i].name == name) return i;
    return std::nullopt;
}

int MultiGraph::degree(int v) const {
    int d = 0;
    for (const auto& e : edges) {
        if (e.u == v) ++d;
        if (e.v == v) ++d;
    }
    return d;
}

std::vector<int> MultiGraph::incident_edges(int v) const {
    std::vector<int> out;
    for (int i = 0; i < num_edges(); ++i)
        if (edges[i].u == v || edges[i].v == v) out.push_back(i);
    return out;
}

std::vector<int> MultiGraph::components() const {
    std::vector<int> comp(num_vertices(), -1);
    std::vector<std::vector<int>> adj(num_vertices());
    for (const auto& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    int k = 0;
    for (int s = 0; s < num_vertices(); ++s) {
        if (comp[s] != -1) continue;
        comp[s] = k;
        std::deque<int> q{s};
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int y : adj[x])
                if (comp[y] == -1) {
                    comp[y] = k;
                    q.push_back(y);
                }
        }
        ++k;
    }
    return comp;
}

int MultiGraph::num_components() const {
    auto c = components();
    return c.empty() ? 0 : 1 + *std::max_element(c.begin(), c.end());
}

void MultiGraph::validate() const {
    std::set<std::string> names(vertex_names.begin(), vertex_names.end());
    if (static_cast<int>(names.size()) != num_vertices())
        throw std::runtime_error("graph: duplicate vertex names");
    std::set<std::string> enames;
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= num_vertices() || e.v < 0 || e.v >= num_vertices())
            throw std::runtime_error("graph: edge endpoint out of range");
        if (!e.name.empty() && !enames.insert(e.name).second)
            throw std::runtime_error("graph: duplicate edge name " + e.name);
    }
}

std::string MultiGraph::to_text() const {
    std::ostringstream os;
    for (const auto& n : vertex_names) os << "vertex " << n << "\n";
    for (const auto& e : edges)
        os << "edge " << e.name << " " << vertex_names[e.u] << " "
           << vertex_names[e.v] << "\n";
    return os.str();
}

GraphParseResult parse_graph(std::istream& in) {
    GraphParseResult res;
    auto& g = res.graph;
    std::map<std::string, int> id_of;
    auto vertex_id = [&](const std::string& name, bool implied) {
        auto it = id_of.find(name);
        if (it != id_of.end()) return it->second;
        if (implied)
            res.warnings.push_back("vertex " + name + " implied by an edge");
        int id = g.add_vertex(name);
        id_of[name] = id;
        return id;
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        std::vector<std::string> ids;
        std::string tok;
        while (ls >> tok) ids.push_back(tok);
        if (kind == "vertex" && ids.size() == 1) {
            if (id_of.count(ids[0]))
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": duplicate vertex " + ids[0]);
            vertex_id(ids[0], false);
        } else if (kind == "edge" && ids.size() == 3) {
            int u = vertex_id(ids[1], true), v = vertex_id(ids[2], true);
            g.add_edge(u, v, ids[0]);
        } else {
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": cannot parse '" + line + "'");
        }
    }
    g.validate();
    return res;
}

GraphParseResult parse_graph_text(const std::string& text) {
    std::istringstream is(text);
    return parse_graph(is);
}

MultiGraph subdivide_all(const MultiGraph& g, int times) {
    MultiGraph cur = g;
    for (int round = 0; round < times; ++round) {
        MultiGraph next;
        next.vertex_names = cur.vertex_names;
        for (int i = 0; i < cur.num_edges(); ++i) {
            const auto& e = cur.edges[i];
            int m = next.add_vertex("_s" + std::to_string(round) + "_" +
                                    std::to_string(i) + "_" + e.name);
            next.add_edge(e.u, m, e.name + ".a");
            next.add_edge(m, e.v, e.name + ".b");
        }
        cur = std::move(next);
    }
    return cur;
}

namespace {

// (edge id, which end) pairs incident to v, loops contributing both ends.
std::vector<std::pair<int, int>> edge_ends_at(const MultiGraph& g, int v) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < g.num_edges(); ++i) {
        if (g.edges[i].u == v) out.push_back({i, 0});
        if (g.edges[i].v == v) out.push_back({i, 1});
    }
    return out;
}

}  // namespace

MultiGraph dissolve_degree2(const MultiGraph& g, const std::set<int>& keep,
                            std::vector<int>* origin) {
    int n = g.num_vertices();
    std::vector<char> dissolvable(n, 0);
    for (int v = 0; v < n; ++v) {
        if (keep.count(v)) continue;
        auto ends = edge_ends_at(g, v);
        if (ends.size() != 2) continue;
        if (ends[0].first == ends[1].first) continue;  // a loop: keep
        dissolvable[v] = 1;
    }
    // Components consisting entirely of dissolvable vertices are cycles;
    // pin their lowest-id vertex so the cycle survives as a loop there.
    {
        auto comp = g.components();
        int k = g.num_components();
        std::vector<int> low(k, -1);
        std::vector<char> all_diss(k, 1);
        for (int v = 0; v < n; ++v) {
            if (!dissolvable[v]) all_diss[comp[v]] = 0;
            if (low[comp[v]] == -1) low[comp[v]] = v;
        }
        for (int c = 0; c < k; ++c)
            if (all_diss[c] && low[c] != -1 && g.degree(low[c]) > 0)
                dissolvable[low[c]] = 0;
    }

    MultiGraph out;
    std::vector<int> new_id(n, -1);
    if (origin) origin->clear();
    for (int v = 0; v < n; ++v)
        if (!dissolvable[v]) {
            new_id[v] = out.add_vertex(g.vertex_names[v]);
            if (origin) origin->push_back(v);
        }

    std::vector<char> used(g.num_edges(), 0);
    for (int x = 0; x < n; ++x) {
        if (dissolvable[x]) continue;
        for (auto [e0, end0] : edge_ends_at(g, x)) {
            if (used[e0]) continue;
            used[e0] = 1;
            int chain_min = e0;
            int cur = end0 == 0 ? g.edges[e0].v : g.edges[e0].u;
            int in_edge = e0;
            int in_end = 1 - end0;
            while (dissolvable[cur]) {
                auto ends = edge_ends_at(g, cur);
                std::pair<int, int> nxt = ends[0];
                if (nxt.first == in_edge && nxt.second == in_end) nxt = ends[1];
                used[nxt.first] = 1;
                chain_min = std::min(chain_min, nxt.first);
                in_edge = nxt.first;
                in_end = 1 - nxt.second;
                cur = nxt.second == 0 ? g.edges[nxt.first].v : g.edges[nxt.first].u;
            }
            out.add_edge(new_id[x], new_id[cur], g.edges[chain_min].name);
        }
    }
    return out;
}

MultiGraph core_simple_graph(const MultiGraph& g) {
    MultiGraph cur = g;
    for (;;) {
        MultiGraph d = dissolve_degree2(cur, {});
        MultiGraph next;
        next.vertex_names = d.vertex_names;
        std::set<std::array<int, 2>> seen;
        for (const auto& e : d.edges) {
            if (e.u == e.v) continue;
            std::array<int, 2> key{std::min(e.u, e.v), std::max(e.u, e.v)};
            if (!seen.insert(key).second) continue;
            next.add_edge(e.u, e.v, e.name);
        }
        if (next.num_edges() == cur.num_edges() &&
            next.num_vertices() == cur.num_vertices())
            return next;
        cur = std::move(next);
    }
}

int euler_genus_lower_bound(const MultiGraph& g) {
    MultiGraph core = core_simple_graph(g);
    auto comp = core.components();
    int k = core.num_components();
    std::vector<int> nv(k, 0), ne(k, 0);
    for (int v = 0; v < core.num_vertices(); ++v) ++nv[comp[v]];
    for (const auto& e : core.edges) ++ne[comp[e.u]];
    int total = 0;
    for (int c = 0; c < k; ++c) {
        if (nv[c] < 3) continue;
        int excess = ne[c] - 3 * nv[c] + 6;
        if (excess > 0) total += (excess + 2) / 3;
    }
    return total;
}

std::vector<int> SpanningForest::path_to_root(int v) const {
    std::vector<int> path;
    while (parent_edge.at(v) != -1) {
        path.push_back(parent_edge[v]);
        v = parent_vertex[v];
    }
    return path;
}

SpanningForest rooted_spanning_forest(const MultiGraph& g,
                                      const std::vector<int>& roots) {
    SpanningForest f;
    int n = g.num_vertices();
    f.parent_vertex.assign(n, -1);
    f.parent_edge.assign(n, -1);
    f.root_of.assign(n, -1);
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge)
    for (int i = 0; i < g.num_edges(); ++i) {
        const auto& e = g.edges[i];
        if (e.u == e.v) continue;
        adj[e.u].push_back({e.v, i});
        adj[e.v].push_back({e.u, i});
    }
    std::deque<int> q;
    for (int r : roots)
        if (f.root_of[r] == -1) {
            f.root_of[r] = r;
            q.push_back(r);
        }
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (auto [y, e] : adj[x])
            if (f.root_of[y] == -1) {
                f.root_of[y] = f.root_of[x];
                f.parent_vertex[y] = x;
                f.parent_edge[y] = e;
                q.push_back(y);
            }
    }
    return f;
}

namespace {

using BoostGraph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
    boost::property<boost::edge_index_t, int>>;

// Simple graph obtained by subdividing every edge twice; stub_of[boost edge
// index] = (original edge, stub position 0/1/2).  Stub 0 touches the u end
// of the original edge, stub 2 the v end.
BoostGraph subdivided_simple(const MultiGraph& g,
                             std::vector<std::pair<int, int>>* stub_of) {
    BoostGraph bg(g.num_vertices() + 2 * g.num_edges());
    int next = 0;
    if (stub_of) stub_of->clear();
    auto add = [&](int a, int b, int orig, int stub) {
        boost::add_edge(a, b, next++, bg);
        if (stub_of) stub_of->push_back({orig, stub});
    };
    for (int i = 0; i < g.num_edges(); ++i) {
        int m1 = g.num_vertices() + 2 * i;
        int m2 = m1 + 1;
        add(g.edges[i].u, m1, i, 0);
        add(m1, m2, i, 1);
        add(m2, g.edges[i].v, i, 2);
    }
    return bg;
}

}  // namespace

bool is_planar(const MultiGraph& g) {
    BoostGraph bg = subdivided_simple(g, nullptr);
    return boost::boyer_myrvold_planarity_test(bg);
}

std::optional<std::vector<std::vector<EdgeOcc>>> planar_rotations(
    const MultiGraph& g) {
    std::vector<std::pair<int, int>> stub_of;
    BoostGraph bg = subdivided_simple(g, &stub_of);
    using Edge = boost::graph_traits<BoostGraph>::edge_descriptor;
    std::vector<std::vector<Edge>> embedding(boost::num_vertices(bg));
    bool ok = boost::boyer_myrvold_planarity_test(
        boost::boyer_myrvold_params::graph = bg,
        boost::boyer_myrvold_params::embedding =
            boost::make_iterator_property_map(
                embedding.begin(), boost::get(boost::vertex_index, bg)));
    if (!ok) return std::nullopt;
    auto eidx = boost::get(boost::edge_index, bg);
    std::vector<std::vector<EdgeOcc>> rot(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v)
        for (const Edge& e : embedding[v]) {
            auto [orig, stub] = stub_of[eidx[e]];
            rot[v].push_back({orig, stub == 2});
        }
    return rot;
}

}  // namespace cemb
