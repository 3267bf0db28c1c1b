#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "hkl/qlattice.hpp"

namespace hkl {

// Integer matrix M with M^T G M = G for the Gram matrix G of the lattice it
// was built against. Columns are images of basis vectors.
class Isometry {
 public:
  Isometry() = default;
  Isometry(const IntLattice& L, IntMat m);  // validates

  const IntMat& matrix() const { return m_; }
  const IntMat& gram() const { return gram_; }
  Int det() const { return determinant(m_); }
  IntVec operator()(const IntVec& x) const { return m_ * x; }
  Isometry inverse() const;
  bool is_identity() const { return m_ == IntMat::identity(m_.rows()); }

  friend Isometry operator*(const Isometry& a, const Isometry& b);
  friend bool operator==(const Isometry& a, const Isometry& b) { return a.m_ == b.m_; }
  friend bool operator<(const Isometry& a, const Isometry& b) { return a.m_ < b.m_; }

 private:
  struct Trusted {};
  Isometry(IntMat m, IntMat gram, Trusted) : m_(std::move(m)), gram_(std::move(gram)) {}
  IntMat m_, gram_;
};

struct GroupWord {
  std::vector<std::pair<std::size_t, int>> letters;  // (generator index, +-1), leftmost applied last
  bool empty() const { return letters.empty(); }
};

enum class GroupKind {
  reflective,   // W(P) x| Sym(P) for a Coxeter chamber P
  translation,  // rank 2, <T> with T hyperbolic
  finite,
  generic,
};
std::string_view to_string(GroupKind k);

// A finitely generated subgroup of O(L). The generators always generate the
// cone-preserving part; -Id is tracked by contains_minus_id.
struct GeneratorSet {
  std::vector<Isometry> generators;
  bool contains_minus_id = false;
  std::vector<IntVec> fundamental_domain;  // inward wall normals (reflective kind)
  IntVec base_point;                       // positive square, interior
  GroupKind kind = GroupKind::generic;

  // reflective: generators [0, walls) are the wall reflections, the rest are
  // the non-identity elements of Sym(P); domain_symmetries lists all of Sym(P).
  std::size_t wall_count = 0;
  std::vector<Isometry> domain_symmetries;
  // translation: generator 0 is T; finite: all elements (cone preserving)
  std::vector<Isometry> elements;
  // generic: extra descent moves as words in the generators
  std::vector<std::pair<Isometry, GroupWord>> moves;
  // element swapping the two cone components when the group has one but not -Id
  std::optional<Isometry> cone_flip;
  // exact membership override, used for subgroups defined by a predicate
  std::function<bool(const Isometry&)> member_predicate;

  IntMat evaluate(const GroupWord& w) const;
};

Isometry reflection(const IntLattice& L, const IntVec& v);
bool is_root(const IntLattice& L, const IntVec& v);
// Orientation of the positive cone: x with x^2 > 0 lies in the component of
// the lattice's reference class (first basis vector of positive square).
IntVec reference_class(const IntLattice& L);
bool in_positive_cone(const IntLattice& L, const IntVec& x);  // x^2 > 0 and same component
bool in_closed_positive_cone(const IntLattice& L, const IntVec& x);
bool preserves_cone(const IntLattice& L, const IntMat& m);

// Fundamental proper automorph of an anisotropic binary form of signature
// (1,1): generator of the cone-preserving part of SO(L).
IntMat fundamental_automorph(const IntLattice& L);
// Smallest solution (x, y), y > 0, of x^2 - D y^2 = 1 for non-square D > 0.
std::pair<Int, Int> pell_fundamental(const Int& D);

GeneratorSet isometry_group(const IntLattice& L);
// Subgroup generated by the given isometries (and -Id if requested).
GeneratorSet generated_by(const IntLattice& L, const std::vector<IntMat>& gens, bool with_minus_id,
                          const IntVec& base_point = {});

// canonical = sign * evaluate(word) * x. When -Id is not in the group the
// sign is not a group element and the reduction is only up to sign.
struct Reduction {
  IntVec canonical;
  GroupWord word;
  int sign = 1;
  bool certified = true;  // false only for generic groups (local minimum)
};
// Canonical representative of the orbit of x. Vectors of negative square are
// accepted in rank 2; they are normalised to pair positively with the base
// point, the applied sign recorded in `sign`.
Reduction reduce_to_domain(const IntLattice& L, const GeneratorSet& G, const IntVec& x);

enum class Membership { member, non_member, inconclusive };
Membership membership(const IntLattice& L, const GeneratorSet& G, const IntMat& phi);
bool group_equal(const IntLattice& L, const GeneratorSet& a, const GeneratorSet& b);

// Complete finite sets; exact enumeration of images of basis vectors.
std::vector<Isometry> stabilizer(const IntLattice& L, const IntVec& v);
std::vector<Isometry> transporter(const IntLattice& L, const IntVec& v, const IntVec& w);

}  // namespace hkl
