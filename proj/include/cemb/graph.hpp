#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cemb {

/// Undirected multigraph: loops and parallel edges allowed.  Vertices and
/// edges have dense integer ids; names are kept only for I/O.
struct MultiGraph {
    struct Edge {
        int u = -1;
        int v = -1;
        std::string name;
    };

    std::vector<std::string> vertex_names;
    std::vector<Edge> edges;

    int num_vertices() const { return static_cast<int>(vertex_names.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    int add_vertex(const std::string& name);
    int add_edge(int u, int v, const std::string& name);

    std::optional<int> find_vertex(const std::string& name) const;
    std::optional<int> find_edge(const std::string& name) const;

    /// Degree with loops counted twice.
    int degree(int v) const;

    /// Component id per vertex (ids are 0..k-1 in order of first vertex).
    std::vector<int> components() const;
    int num_components() const;

    /// Incident edge ids of v, loops listed once.
    std::vector<int> incident_edges(int v) const;

    void validate() const;
    std::string to_text() const;
};

struct GraphParseResult {
    MultiGraph graph;
    std::vector<std::string> warnings;
};

/// Text format, one declaration per line:
///   vertex <id> | edge <id> <u> <v>
/// '#' starts a comment.  Unknown endpoint names are created on first use
/// with a warning.
GraphParseResult parse_graph(std::istream& in);
GraphParseResult parse_graph_text(const std::string& text);

/// Subdivides every edge once: edge uv named e becomes u-m-v where m is a
/// fresh vertex; repeated `times` times.
MultiGraph subdivide_all(const MultiGraph& g, int times = 1);

/// Suppresses degree-2 vertices not in `keep` by merging their two incident
/// edge ends, including chains.  A cycle all of whose vertices are
/// dissolvable collapses to a single loop at its lowest-id vertex.  Loops
/// (degree 2 at their own vertex) are never dissolved through.
/// `origin[i]`, if requested, maps each output vertex to its input id.
MultiGraph dissolve_degree2(const MultiGraph& g, const std::set<int>& keep,
                            std::vector<int>* origin = nullptr);

/// Simplification used only for Euler-count lower bounds: dissolve every
/// degree-2 vertex, drop loops, collapse parallel edges.
MultiGraph core_simple_graph(const MultiGraph& g);

/// Smallest h with e <= 3v - 6 + 3h per component (h >= 0), summed; a lower
/// bound on the Euler genus of any surface the graph embeds into.  Components
/// with fewer than three vertices contribute zero.
int euler_genus_lower_bound(const MultiGraph& g);

/// Spanning forest rooted at `roots` (one tree per component touching a
/// root; vertices in root-free components get parent -1 and root -1).
struct SpanningForest {
    std::vector<int> parent_vertex;  // -1 at roots / uncovered
    std::vector<int> parent_edge;    // edge to parent, -1 at roots / uncovered
    std::vector<int> root_of;        // root vertex id, -1 if uncovered

    /// Edge ids of the tree path from v to its root (v first).
    std::vector<int> path_to_root(int v) const;
};

SpanningForest rooted_spanning_forest(const MultiGraph& g,
                                      const std::vector<int>& roots);

/// Planarity of the multigraph (loops and parallels handled internally).
bool is_planar(const MultiGraph& g);

/// A planar rotation system: per vertex, a cyclic order of incident edge
/// occurrences.  A loop at v occurs twice in the list of v.  Empty optional
/// iff the graph is not planar.
struct EdgeOcc {
    int edge = -1;
    bool second_end = false;  // for loops: which of the two occurrences
};
std::optional<std::vector<std::vector<EdgeOcc>>> planar_rotations(
    const MultiGraph& g);

}  // namespace cemb
