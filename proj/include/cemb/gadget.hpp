#pragma once

#include "cemb/complex.hpp"

namespace cemb {

/// Triangulated closed surface: `genus` handles when orientable, `genus`
/// cross-caps otherwise (genus >= 1 in the non-orientable case).  Built by
/// repeated connected sum of fixed small triangulations, so the output is
/// byte-for-byte reproducible.
SimplicialComplex2 surface_gadget(int genus, bool orientable);

/// `pages` triangles sharing one common segment.  Three or more pages
/// swallow every graph.
SimplicialComplex2 book_gadget(int pages);

/// Closed orientable genus-`genus` surface with k disks removed and, over
/// each resulting hole, two bands attached at interlaced arcs of the
/// boundary circle.  An embedding may route one graph edge through each
/// band, letting two edges pass over the hole as if they crossed; graphs
/// of crossing number at most k embed, and for k = 0 the gadget is just
/// the surface.
SimplicialComplex2 crossing_gadget(int k, int genus);

}  // namespace cemb
