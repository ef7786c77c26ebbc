#pragma once

#include "cemb/combmap.hpp"
#include "cemb/graph.hpp"

namespace cemb {

/// Exhaustive test whether g embeds (not necessarily cellularly) into the
/// closed surface of the given type, by enumerating signed rotation
/// systems.  Spanning-tree edge signs are normalized to +1.  Disconnected
/// graphs are handled by trying every connector edge between components.
/// Intended as an independent ground-truth for small inputs (roughly up to
/// nine edges per component).
bool brute_force_surface_embed(const MultiGraph& g, const SurfaceClass& s);

/// Smallest Euler genus over all orientable cellular embeddings of a
/// connected graph (twice its orientable genus).  Isolated vertices are
/// ignored; the empty graph reports 0.
int min_orientable_euler_genus(const MultiGraph& g);

/// Smallest Euler genus over all cellular embeddings of a connected graph
/// whose signed rotation system is genuinely non-orientable.  Returns -1
/// if the graph is a forest (it has no non-orientable embedding... every
/// embedding of a tree is planar); otherwise at least 1.
int min_nonorientable_euler_genus(const MultiGraph& g);

}  // namespace cemb
