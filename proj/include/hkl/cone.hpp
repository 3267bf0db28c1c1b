#pragma once

// Polyhedral cones {x : x.n_i >= 0} in a lattice of rank 2 or 3, where "."
// is the lattice pairing.

#include <vector>

#include "hkl/qlattice.hpp"

namespace hkl {

struct ConeRays {
  bool pointed = false;      // the normals span the dual space
  std::vector<IntVec> rays;  // primitive extreme rays, sorted
};

ConeRays cone_rays(const IntLattice& L, const std::vector<IntVec>& normals);

// Subset of normals that support a facet (contain rank-1 independent rays),
// deduplicated and sorted.
std::vector<IntVec> facet_normals(const IntLattice& L, const std::vector<IntVec>& normals,
                                  const std::vector<IntVec>& rays);

bool strictly_inside(const IntLattice& L, const std::vector<IntVec>& normals, const IntVec& x);

// Sum of the rays, made primitive; interior when the cone has full dimension.
IntVec interior_point(const std::vector<IntVec>& rays);

}  // namespace hkl
