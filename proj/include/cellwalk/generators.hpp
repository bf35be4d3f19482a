#pragma once

#include <string>
#include <vector>

#include "cellwalk/complex.hpp"

namespace cellwalk {

/// The plane as a Z^2-CW complex: one vertex orbit, vertical/horizontal edge
/// orbits and one square orbit, with the square boundary (1-x) up + (y-1) right.
GCWComplex make_grid2d();

/// Cubical Z^d complex: one r-orbit per r-subset of the d directions, with
/// tensor-product boundary signs.
GCWComplex make_grid(int d);

/// Finite simplicial complex (trivial group) from a facet list. Simplices are
/// oriented by sorted vertex order; the i-th face carries sign (-1)^i.
GCWComplex make_simplicial(const std::vector<std::vector<int>>& facets);

/// Cayley-suspension complex over Z^rank: a k-cell glued at every group
/// element and one (k+1)-cell orbit per generator joining neighbouring
/// k-cells with opposite unit incidences. Requires k >= 2.
GCWComplex make_cayley_suspension(int rank, int k);

/// Parse a generator spec string: "grid2d", "grid(d)",
/// "cayley_suspension(rank,k)", or "simplicial(v v v; v v v; ...)".
GCWComplex generate_from_spec(const std::string& spec);

}  // namespace cellwalk
