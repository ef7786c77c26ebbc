#pragma once

#include <map>
#include <string>
#include <vector>

#include "cemb/combmap.hpp"
#include "cemb/complex.hpp"
#include "cemb/graph.hpp"

namespace cemb {

/// Topology of one connected component of a surface complex.  `cls` is the
/// class of the closed surface obtained by capping every boundary circle
/// with a disk; `boundaries` counts those circles.
struct SurfaceReport {
    SurfaceClass cls;
    int boundaries = 0;
    std::vector<int> nodes;  // node ids of the component, sorted
};

/// Classifies a complex each of whose components is a (possibly bordered)
/// surface: every segment lies in one or two triangles, every node link is
/// a single cone or a single corner.  Throws std::runtime_error otherwise.
std::vector<SurfaceReport> classify_surface(const SimplicialComplex2& c);

/// Barycentric subdivision: one fresh node per segment and per triangle,
/// six triangles per triangle.  Original node names are preserved.
SimplicialComplex2 barycentric_subdivision(const SimplicialComplex2& c);

/// Splits each listed node into one copy per cone, corner, and isolated
/// segment of its link; incident simplices are reassigned to the copies.
struct WithdrawResult {
    SimplicialComplex2 complex;
    /// copies[p] lists the copy names, cones first, then corners, then one
    /// per isolated segment, in link order.
    std::map<std::string, std::vector<std::string>> copies;
};
WithdrawResult withdraw_nodes(const SimplicialComplex2& c,
                              const std::vector<std::string>& nodes);

/// Builds the signed rotation system whose faces are exactly the given
/// closed dart walks (every face a disk).  Rotations are recovered by
/// chaining face corners around each vertex, edge signs by propagating the
/// walk orientations.  Throws std::runtime_error if the walks do not form
/// a valid polygonal surface over g.
CombMap map_from_polygons(const MultiGraph& g,
                          const std::vector<std::vector<int>>& polygons);

/// Output of the singular-node thickening and boundary capping of a pure
/// 3-book-free complex: a closed (possibly disconnected) surface carrying
/// an embedded anchor graph.
struct ThickenResult {
    /// The input graph extended by the new vertices and edges added to it.
    MultiGraph g;
    /// Names of the embedded-subgraph vertices: pinned input vertices plus
    /// the added tip and hub vertices.
    std::vector<std::string> h_vertices;
    /// Names of the embedded-subgraph edges: loops, pendant edges, spokes.
    std::vector<std::string> h_edges;
    /// Embedding of exactly the subgraph above on the capped surface;
    /// vertex and edge names match those in `g`.
    CombMap pi;
    /// Classes of surface components that carry no part of the subgraph.
    std::vector<SurfaceClass> bare;
};

/// Replaces the neighborhood of every singular node p (pinned to vertex
/// pins[p] of g0) by a sphere with one boundary circle per cone or corner,
/// adds one loop at the pin per circle plus a pendant edge per corner, caps
/// every boundary circle of the resulting surface with a disk, and joins a
/// hub vertex inside each cap to the pinned or pendant vertices on its
/// circle.  pins must cover all singular nodes, may pin regular nodes
/// (those vertices float in their face), and must be injective into g0.
ThickenResult thicken_and_cap(const SimplicialComplex2& c,
                              const std::map<std::string, std::string>& pins,
                              const MultiGraph& g0);

}  // namespace cemb
