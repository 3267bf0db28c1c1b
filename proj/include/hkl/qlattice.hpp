#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hkl/arith.hpp"

namespace hkl {

enum class LatticeRole { ns, cubic };

// Integral lattice given by a Gram matrix in a named basis. Vectors are
// integer coordinate columns in that basis.
class IntLattice {
 public:
  IntLattice() = default;
  IntLattice(IntMat gram, std::vector<std::string> basis_names, LatticeRole role = LatticeRole::ns);

  std::size_t rank() const { return gram_.rows(); }
  const IntMat& gram() const { return gram_; }
  const std::vector<std::string>& basis_names() const { return names_; }
  LatticeRole role() const { return role_; }
  std::pair<int, int> signature() const { return signature_; }
  const Int& determinant() const { return det_; }
  bool is_even() const;
  bool is_hyperbolic() const { return signature_.first == 1; }

  IntVec basis_vector(std::size_t i) const;
  std::size_t index_of(const std::string& name) const;

  Int pair(const IntVec& x, const IntVec& y) const { return bilinear(gram_, x, y); }
  Int square(const IntVec& x) const { return bilinear(gram_, x, x); }
  Rat pair(const RatVec& x, const RatVec& y) const { return bilinear(gram_, x, y); }
  IntVec dual_coords(const IntVec& x) const { return gram_ * x; }  // (x.e_i)_i

 private:
  IntMat gram_;
  std::vector<std::string> names_;
  LatticeRole role_ = LatticeRole::ns;
  std::pair<int, int> signature_{0, 0};
  Int det_ = 0;
};

// Signature (n_plus, n_minus) of a symmetric matrix; zero eigenvalues are not
// counted.
std::pair<int, int> signature_of(const IntMat& gram);

Int pairing(const IntLattice& L, const IntVec& x, const IntVec& y);
Int divisibility_ns(const IntLattice& L, const IntVec& x);

// Class in L^v/L, stored with every coordinate reduced into [0, 1).
struct DiscElement {
  RatVec coords;

  DiscElement() = default;
  explicit DiscElement(RatVec c);
  bool is_zero() const;
  friend bool operator==(const DiscElement& a, const DiscElement& b) { return a.coords == b.coords; }
  friend bool operator<(const DiscElement& a, const DiscElement& b) { return a.coords < b.coords; }
};

DiscElement disc_add(const DiscElement& a, const DiscElement& b);
DiscElement disc_scale(const Int& k, const DiscElement& a);
DiscElement disc_neg(const DiscElement& a);
std::string to_string(const DiscElement& e);

bool in_dual(const IntLattice& L, const RatVec& x);
// q(x) mod 2 and b(x, y) mod 1.
Rat disc_q(const IntLattice& L, const DiscElement& x);
Rat disc_b(const IntLattice& L, const DiscElement& x, const DiscElement& y);
Int disc_order(const DiscElement& x);

struct DiscriminantGroup {
  std::vector<Int> invariant_factors;       // d_1 | d_2 | ..., all > 1
  std::vector<DiscElement> generator_lifts;  // order of lift i is factor i
  std::vector<Rat> q_values;                 // mod 2; empty for odd lattices
  std::vector<std::vector<Rat>> b_values;    // mod 1
  Int order() const;
  Int exponent() const;
};

DiscriminantGroup smith_decompose(const IntLattice& L);

struct GluingSubgroup {
  std::vector<DiscElement> generators;
  Int order = 1;
};

// Validates the generators (each must lie in L^v) and computes the order.
GluingSubgroup make_gluing(const IntLattice& L, const std::vector<RatVec>& gens);

Int subgroup_order(const IntLattice& L, const std::vector<DiscElement>& gens);
bool in_subgroup(const IntLattice& L, const DiscElement& x, const std::vector<DiscElement>& gens);
bool is_generating_set(const IntLattice& L, const std::vector<RatVec>& gens);

// Induced automorphism of L^v/L. In basis coordinates an isometry M maps L^v
// to itself, so the action is x -> M x reduced modulo L.
struct DiscAction {
  IntMat matrix;
  DiscElement apply(const DiscElement& x) const;
};

bool is_isometry(const IntLattice& L, const IntMat& m);
DiscAction disc_action(const IntLattice& L, const IntMat& phi);

enum class PmId { plus, minus, neither };
std::string_view to_string(PmId v);
PmId subgroup_pm_id(const IntLattice& L, const IntMat& phi, const GluingSubgroup& H);

Int sublattice_disc(const IntLattice& L, const std::vector<IntVec>& vectors);

// Fincke-Pohst: calls visit(v, v^T Q v) for every non-zero integer v with
// v^T Q v <= bound, for positive definite Q. With jobs > 1 the outermost
// coordinate is split across threads and visit may run concurrently; callers
// that need order must sort.
void enumerate_ellipsoid(const IntMat& q, const Int& bound,
                         const std::function<void(const IntVec&, const Int&)>& visit,
                         unsigned jobs = 1);
std::vector<IntVec> short_vectors(const IntMat& q, const Int& bound, unsigned jobs = 1);

// All v in L with v^2 in [min_square, max_square] and |v.x| <= max_pair, for
// x of positive square in a lattice of signature (1, n). Sorted.
std::vector<IntVec> vectors_near(const IntLattice& L, const IntVec& x, const Int& max_pair,
                                 const Int& min_square, const Int& max_square, unsigned jobs = 1);

// Process-wide enumeration knobs; the CLI sets them from its flags.
struct SearchLimits {
  unsigned jobs = 1;
  long max_vinberg_distance = 4096;  // in units of (v.x0)^2 / |v^2|
  long max_chambers = 10000;
  long max_descent_steps = 100000;
  long max_refinements = 24;
};
SearchLimits& search_limits();

}  // namespace hkl
