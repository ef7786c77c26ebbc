#include "cemb/complex.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cemb {

namespace {

std::array<int, 2> sorted2(int a, int b) {
    if (a > b) std::swap(a, b);
    return {a, b};
}

std::array<int, 3> sorted3(int a, int b, int c) {
    std::array<int, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    return t;
}

}  // namespace

int SimplicialComplex2::add_node(const std::string& name) {
    node_names.push_back(name);
    return num_nodes() - 1;
}

int SimplicialComplex2::add_segment(int a, int b) {
    auto s = sorted2(a, b);
    for (int i = 0; i < static_cast<int>(segments.size()); ++i)
        if (segments[i] == s) return i;
    segments.push_back(s);
    return static_cast<int>(segments.size()) - 1;
}

int SimplicialComplex2::add_triangle(int a, int b, int c) {
    auto t = sorted3(a, b, c);
    for (int i = 0; i < static_cast<int>(triangles.size()); ++i)
        if (triangles[i] == t) return i;
    add_segment(t[0], t[1]);
    add_segment(t[0], t[2]);
    add_segment(t[1], t[2]);
    triangles.push_back(t);
    return static_cast<int>(triangles.size()) - 1;
}

std::optional<int> SimplicialComplex2::find_node(const std::string& name) const {
    for (int i = 0; i < num_nodes(); ++i)
        if (node_names[i] == name) return i;
    return std::nullopt;
}

std::optional<int> SimplicialComplex2::find_segment(int a, int b) const {
    auto s = sorted2(a, b);
    for (int i = 0; i < static_cast<int>(segments.size()); ++i)
        if (segments[i] == s) return i;
    return std::nullopt;
}

void SimplicialComplex2::validate() const {
    std::set<std::string> names(node_names.begin(), node_names.end());
    if (static_cast<int>(names.size()) != num_nodes())
        throw std::runtime_error("complex: duplicate node names");
    std::set<std::array<int, 2>> segs;
    for (const auto& s : segments) {
        if (s[0] == s[1]) throw std::runtime_error("complex: degenerate segment");
        if (s[0] < 0 || s[1] >= num_nodes() || s[0] > s[1])
            throw std::runtime_error("complex: segment endpoints out of range");
        if (!segs.insert(s).second)
            throw std::runtime_error("complex: duplicate segment");
    }
    std::set<std::array<int, 3>> tris;
    for (const auto& t : triangles) {
        if (t[0] == t[1] || t[1] == t[2])
            throw std::runtime_error("complex: degenerate triangle");
        if (t[0] < 0 || t[2] >= num_nodes() || t[0] > t[1] || t[1] > t[2])
            throw std::runtime_error("complex: triangle nodes out of range");
        if (!tris.insert(t).second)
            throw std::runtime_error("complex: duplicate triangle");
        if (!segs.count(sorted2(t[0], t[1])) || !segs.count(sorted2(t[0], t[2])) ||
            !segs.count(sorted2(t[1], t[2])))
            throw std::runtime_error("complex: triangle side missing from segments");
    }
}

SimplicialComplex2 SimplicialComplex2::renumbered(const std::vector<int>& new_id_of) const {
    SimplicialComplex2 out;
    out.node_names.resize(node_names.size());
    for (int i = 0; i < num_nodes(); ++i) out.node_names[new_id_of[i]] = node_names[i];
    for (const auto& s : segments)
        out.segments.push_back(sorted2(new_id_of[s[0]], new_id_of[s[1]]));
    for (const auto& t : triangles)
        out.triangles.push_back(sorted3(new_id_of[t[0]], new_id_of[t[1]], new_id_of[t[2]]));
    std::sort(out.segments.begin(), out.segments.end());
    std::sort(out.triangles.begin(), out.triangles.end());
    return out;
}

std::string SimplicialComplex2::to_text() const {
    std::ostringstream os;
    for (const auto& n : node_names) os << "node " << n << "\n";
    for (const auto& s : segments)
        os << "segment " << node_names[s[0]] << " " << node_names[s[1]] << "\n";
    for (const auto& t : triangles)
        os << "triangle " << node_names[t[0]] << " " << node_names[t[1]] << " "
           << node_names[t[2]] << "\n";
    return os.str();
}

bool contains_3book(const SimplicialComplex2& c) {
    return find_3book_segment(c).has_value();
}

std::optional<std::array<int, 2>> find_3book_segment(const SimplicialComplex2& c) {
    std::map<std::array<int, 2>, int> count;
    for (const auto& t : c.triangles) {
        ++count[sorted2(t[0], t[1])];
        ++count[sorted2(t[0], t[2])];
        ++count[sorted2(t[1], t[2])];
    }
    for (const auto& [seg, n] : count)
        if (n >= 3) return seg;
    return std::nullopt;
}

NodeLink node_link(const SimplicialComplex2& c, int p) {
    NodeLink link;
    link.node = p;

    std::vector<int> tris;  // incident triangle indices
    for (int i = 0; i < static_cast<int>(c.triangles.size()); ++i) {
        const auto& t = c.triangles[i];
        if (t[0] == p || t[1] == p || t[2] == p) tris.push_back(i);
    }
    // Segments through p, mapped to the incident triangles containing them.
    std::map<std::array<int, 2>, std::vector<int>> seg_tris;
    for (int i = 0; i < static_cast<int>(c.segments.size()); ++i) {
        const auto& s = c.segments[i];
        if (s[0] == p || s[1] == p) seg_tris[s];  // ensure presence
    }
    for (int ti : tris) {
        const auto& t = c.triangles[ti];
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                if (t[a] == p || t[b] == p) {
                    auto it = seg_tris.find(sorted2(t[a], t[b]));
                    if (it != seg_tris.end()) it->second.push_back(ti);
                }
            }
    }
    for (const auto& [seg, owners] : seg_tris) {
        if (owners.size() >= 3)
            throw std::runtime_error("node_link: a 3-book touches node " +
                                     c.node_names[p]);
        if (owners.empty()) {
            auto idx = c.find_segment(seg[0], seg[1]);
            link.isolated_segments.push_back(*idx);
        }
    }

    // Graph on incident triangles; adjacency = shared segment through p.
    // Without 3-books every such segment has at most two owners, so the
    // graph has maximum degree two: components are paths and cycles.
    std::map<int, std::vector<int>> adj;
    for (int ti : tris) adj[ti];
    for (const auto& [seg, owners] : seg_tris)
        if (owners.size() == 2) {
            adj[owners[0]].push_back(owners[1]);
            adj[owners[1]].push_back(owners[0]);
        }
    std::set<int> seen;
    for (int start : tris) {
        if (seen.count(start)) continue;
        // Find an endpoint of the chain if there is one.
        int head = start;
        {
            std::set<int> vis;
            int cur = start, prev = -1;
            while (true) {
                vis.insert(cur);
                int nxt = -1;
                for (int nb : adj[cur])
                    if (nb != prev && !vis.count(nb)) { nxt = nb; break; }
                if (adj[cur].size() <= 1) { head = cur; break; }
                if (nxt == -1) { head = cur; break; }  // cycle or exhausted
                prev = cur;
                cur = nxt;
            }
            if (adj[head].size() > 1) head = start;  // cycle: start anywhere
        }
        std::vector<int> chain;
        int cur = head, prev = -1;
        while (cur != -1 && !seen.count(cur)) {
            seen.insert(cur);
            chain.push_back(cur);
            int nxt = -1;
            for (int nb : adj[cur])
                if (nb != prev) { nxt = nb; break; }
            prev = cur;
            cur = nxt;
        }
        bool cyclic = chain.size() >= 3 && adj[chain.back()].size() == 2 &&
                      std::find(adj[chain.back()].begin(), adj[chain.back()].end(),
                                chain.front()) != adj[chain.back()].end();
        if (cyclic)
            link.cones.push_back(chain);
        else
            link.corners.push_back(chain);
    }
    return link;
}

bool is_singular(const NodeLink& link) {
    if (!link.isolated_segments.empty()) return true;
    int parts = static_cast<int>(link.cones.size() + link.corners.size());
    return parts != 1;
}

std::vector<int> singular_nodes(const SimplicialComplex2& c) {
    std::vector<int> out;
    for (int p = 0; p < c.num_nodes(); ++p)
        if (is_singular(node_link(c, p))) out.push_back(p);
    return out;
}

bool is_pure(const SimplicialComplex2& c) {
    std::set<std::array<int, 2>> in_triangle;
    for (const auto& t : c.triangles) {
        in_triangle.insert(sorted2(t[0], t[1]));
        in_triangle.insert(sorted2(t[0], t[2]));
        in_triangle.insert(sorted2(t[1], t[2]));
    }
    for (const auto& s : c.segments)
        if (!in_triangle.count(s)) return false;  // isolated segment
    std::vector<char> touched(c.num_nodes(), 0);
    for (const auto& s : c.segments) touched[s[0]] = touched[s[1]] = 1;
    for (int p = 0; p < c.num_nodes(); ++p)
        if (!touched[p]) return false;
    return true;
}

ComplexParseResult parse_complex(std::istream& in) {
    ComplexParseResult res;
    auto& c = res.complex;
    std::map<std::string, int> id_of;
    auto node_id = [&](const std::string& name, bool implied) {
        auto it = id_of.find(name);
        if (it != id_of.end()) return it->second;
        if (implied)
            res.warnings.push_back("node " + name + " implied by a higher simplex");
        int id = c.add_node(name);
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
        if (kind == "node" && ids.size() == 1) {
            if (id_of.count(ids[0]))
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": duplicate node " + ids[0]);
            node_id(ids[0], false);
        } else if (kind == "segment" && ids.size() == 2) {
            int a = node_id(ids[0], true), b = node_id(ids[1], true);
            if (a == b)
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": degenerate segment");
            c.add_segment(a, b);
        } else if (kind == "triangle" && ids.size() == 3) {
            int a = node_id(ids[0], true), b = node_id(ids[1], true),
                d = node_id(ids[2], true);
            if (a == b || b == d || a == d)
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": degenerate triangle");
            size_t before = c.segments.size();
            c.add_triangle(a, b, d);
            if (c.segments.size() > before)
                res.warnings.push_back("triangle at line " + std::to_string(lineno) +
                                       " implied " +
                                       std::to_string(c.segments.size() - before) +
                                       " missing segment(s)");
        } else {
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": cannot parse '" + line + "'");
        }
    }
    c.validate();
    return res;
}

ComplexParseResult parse_complex_text(const std::string& text) {
    std::istringstream is(text);
    return parse_complex(is);
}

}  // namespace cemb
