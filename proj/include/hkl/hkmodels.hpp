#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hkl/conewalk.hpp"
#include "hkl/isogroup.hpp"

namespace hkl {

struct FamilyConfig {
  std::string label;
  IntLattice ns;
  std::optional<GluingSubgroup> gluing;
  IntVec plucker;
  WallProfile profile = default_profile();

  void validate() const;  // plucker^2 = 6, div 2 when gluing is known, hyperbolic
};

struct OrbitReport {
  std::vector<IntVec> representatives;  // chamber witnesses or classes
  std::size_t orbit_count = 0;
  GeneratorSet group_used;
  bool group_known = true;  // false when the answer did not need the group (no gluing)
  bool certified = true;
};

// Preserves the positive cone and Mov, and acts by +-Id on the gluing subgroup.
bool is_birational(const FamilyConfig& F, const IntMat& phi);

// Isometries between chambers compatible with is_birational.
std::vector<Isometry> chamber_equivalences(const FamilyConfig& F, const Chamber& a, const Chamber& b);

GeneratorSet bir_subgroup(const FamilyConfig& F);
OrbitReport chamber_orbits(const FamilyConfig& F);
OrbitReport polarization_orbits(const FamilyConfig& F);

// No v in h^perp with v^2 in {-2, -6} and ambient divisibility 2.
bool heegner_avoidance(const FamilyConfig& F, const IntVec& h);

struct DiscriminantVerdict {
  long d = 0;
  bool star = false;
  bool two_star = false;
  bool three_star = false;
  std::optional<std::pair<Int, Int>> witness;  // (a, n) with the smallest a
};
DiscriminantVerdict discriminant_conditions(long d);

struct Labeling {
  IntVec delta;
  Int disc;
};
// delta over a box in the coordinates other than eta (eta must be a basis
// vector), primitive, first non-zero coordinate positive.
std::vector<Labeling> cubic_labelings(const IntLattice& A, const IntVec& eta, long bound);

}  // namespace hkl
