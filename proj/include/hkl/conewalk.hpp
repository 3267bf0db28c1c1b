#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hkl/qlattice.hpp"

namespace hkl {

enum class WallKind { pex, flop };
std::string_view to_string(WallKind k);

struct WallSpec {
  Int square;                   // negative
  std::optional<Int> ambient_div;  // nullopt: any divisibility
  WallKind kind = WallKind::pex;
};

struct WallProfile {
  std::vector<WallSpec> specs;
  WallProfile only(WallKind k) const;
};

// K3^[2]: (-2, any, pex) and (-10, 2, flop)
WallProfile default_profile();

enum class ChamberKind { nef_like, movable_boundary };

struct Chamber {
  std::vector<IntVec> walls;     // inward, primitive, sorted
  std::vector<WallKind> kinds;   // parallel to walls
  std::vector<IntVec> rays;      // primitive extreme rays; empty when walls is empty
  IntVec witness;                // sum of the rays (or the input point when there are no walls)
  ChamberKind kind = ChamberKind::nef_like;
  bool complete = true;          // false: walls are certified supporting walls, not all of them
};

struct ConeSpec {
  std::vector<std::pair<IntVec, bool>> inequalities;  // (n, strict): x.n > 0 or x.n >= 0
  bool positive_cone = true;                          // also require x in the positive cone
  bool complete = true;  // false: a superset cone (some walls of an infinite-sided chamber)
  bool contains(const IntLattice& L, const IntVec& x) const;
};

ConeSpec cone_of(const Chamber& c, bool strict = false);

// gcd of x.w over L and over lifts of the gluing generators. Without gluing
// this is divisibility_ns.
Int divisibility_ambient(const IntLattice& L, const std::optional<GluingSubgroup>& H, const IntVec& x);

// Profile entry matched by v, if any. Entries needing an ambient divisibility
// throw `unavailable` when H is absent and v has the entry's square.
std::optional<WallKind> wall_kind(const IntLattice& L, const WallProfile& P,
                                  const std::optional<GluingSubgroup>& H, const IntVec& v);

// Walls rho with rho.a > 0 > rho.b; b may be isotropic.
std::vector<IntVec> walls_separating(const IntLattice& L, const WallProfile& P,
                                     const std::optional<GluingSubgroup>& H, const IntVec& a,
                                     const IntVec& b);

std::vector<IntVec> walls_orthogonal_to(const IntLattice& L, const WallProfile& P,
                                        const std::optional<GluingSubgroup>& H, const IntVec& nu);

Chamber chamber_of(const IntLattice& L, const WallProfile& P, const std::optional<GluingSubgroup>& H,
                   const IntVec& x);

// Pex chamber containing the ample class. In rank 3 the chamber can have
// infinitely many walls; then the result is marked incomplete and lists the
// walls met by perpendiculars from the ample class.
ConeSpec movable_cone(const IntLattice& L, const std::optional<GluingSubgroup>& H, const IntVec& ample,
                      const WallProfile& P = default_profile());
Chamber movable_chamber(const IntLattice& L, const std::optional<GluingSubgroup>& H, const IntVec& ample,
                        const WallProfile& P = default_profile());

// Chamber on the other side of wall rho of c.
Chamber neighbor(const IntLattice& L, const WallProfile& P, const std::optional<GluingSubgroup>& H,
                 const Chamber& c, const IntVec& rho);

std::vector<IntVec> classes_in_cone(const IntLattice& L, const ConeSpec& cone, const Int& square,
                                    const std::optional<GluingSubgroup>& H,
                                    std::optional<Int> ambient_div = std::nullopt);

}  // namespace hkl
