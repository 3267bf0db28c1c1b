#include "hkl/conewalk.hpp"

#include <algorithm>
#include <set>

#include "hkl/cone.hpp"
#include "hkl/isogroup.hpp"

namespace hkl {

std::string_view to_string(WallKind k) { return k == WallKind::pex ? "pex" : "flop"; }

WallProfile WallProfile::only(WallKind k) const {
  WallProfile p;
  for (auto& s : specs)
    if (s.kind == k) p.specs.push_back(s);
  return p;
}

WallProfile default_profile() {
  return WallProfile{{WallSpec{Int(-2), std::nullopt, WallKind::pex}, WallSpec{Int(-10), Int(2), WallKind::flop}}};
}

bool ConeSpec::contains(const IntLattice& L, const IntVec& x) const {
  if (positive_cone && !in_closed_positive_cone(L, x)) return false;
  for (auto& [n, strict] : inequalities) {
    Int p = L.pair(n, x);
    if (p < 0 || (strict && p == 0)) return false;
  }
  return true;
}

ConeSpec cone_of(const Chamber& c, bool strict) {
  ConeSpec s;
  for (auto& w : c.walls) s.inequalities.push_back({w, strict});
  return s;
}

Int divisibility_ambient(const IntLattice& L, const std::optional<GluingSubgroup>& H, const IntVec& x) {
  Int d = divisibility_ns(L, x);
  if (!H) return d;
  for (auto& h : H->generators) {
    require(in_dual(L, h.coords), ErrorCode::input, "gluing generator not in the dual lattice");
    Rat p = L.pair(to_rat(x), h.coords);
    require(p.get_den() == 1, ErrorCode::input, "gluing generator pairs non-integrally");
    d = gcd(d, p.get_num());
  }
  return d;
}

std::optional<WallKind> wall_kind(const IntLattice& L, const WallProfile& P,
                                  const std::optional<GluingSubgroup>& H, const IntVec& v) {
  if (is_zero(v) || content(v) != 1) return std::nullopt;
  const Int s = L.square(v);
  for (auto& spec : P.specs) {
    if (s != spec.square) continue;
    if (!spec.ambient_div) return spec.kind;
    if (!H)
      fail(ErrorCode::unavailable,
           "gluing subgroup unavailable: cannot decide ambient divisibility of " + to_string(v));
    if (divisibility_ambient(L, H, v) == *spec.ambient_div) return spec.kind;
  }
  return std::nullopt;
}

namespace {

using WallSet = std::set<IntVec>;

void check_profile(const WallProfile& P) {
  for (auto& s : P.specs) {
    require(s.square < 0, ErrorCode::input, "wall profile squares must be negative");
    require(!s.ambient_div || *s.ambient_div > 0, ErrorCode::input, "wall divisibility must be positive");
  }
}

// Profile walls rho (sign-normalised to rho.x > 0) with (rho.x)^2 <= k * R.
WallSet walls_within(const IntLattice& L, const WallProfile& P, const std::optional<GluingSubgroup>& H,
                     const IntVec& x, const Int& R) {
  WallSet out;
  for (auto& spec : P.specs) {
    Int k = -spec.square;
    Int max_pair = isqrt(k * R);
    for (auto& v : vectors_near(L, x, max_pair, spec.square, spec.square, search_limits().jobs)) {
      Int p = L.pair(v, x);
      if (p <= 0 || p * p > k * R) continue;
      auto kind = wall_kind(L, P, H, v);
      if (kind && *kind == spec.kind) out.insert(v);
    }
  }
  return out;
}

void require_off_walls(const IntLattice& L, const WallProfile& P, const std::optional<GluingSubgroup>& H,
                       const IntVec& x) {
  auto on = walls_orthogonal_to(L, P, H, x);
  if (!on.empty())
    fail(ErrorCode::input, "point " + to_string(x) + " lies on the wall " + to_string(on.back()));
}

// Smallest m > 0 with T^m acting trivially on L^v/L.
long trivial_order(const IntLattice& L, const IntMat& T) {
  auto D = smith_decompose(L);
  IntMat P = T;
  for (long m = 1; m <= 100000; ++m) {
    bool trivial = true;
    for (auto& lift : D.generator_lifts) {
      RatVec img = to_rat(P) * lift.coords;
      for (std::size_t i = 0; i < img.size() && trivial; ++i)
        if (Rat(img[i] - lift.coords[i]).get_den() != 1) trivial = false;
    }
    if (trivial) return m;
    P = T * P;
  }
  fail(ErrorCode::inconclusive, "inconclusive: automorph order on the discriminant too large");
}

// Rank 2, anisotropic: every vector of a given square is T^j s for s meeting
// the segment [x, Tx), and the wall condition is periodic in j with the order
// of T on the discriminant. The nearest wall on each side comes from the
// first valid j in each direction.
std::set<IntVec> nearest_walls2(const IntLattice& L, const WallProfile& P, const std::optional<GluingSubgroup>& H,
                                const IntVec& x) {
  const IntMat T = fundamental_automorph(L);
  const IntMat Ti = to_int(inverse(T));
  const long m = trivial_order(L, T);
  const IntVec tx = T * x;
  const Int xx = L.square(x), xt = L.pair(x, tx);
  std::set<IntVec> out;
  for (auto& spec : P.specs) {
    const Int k = -spec.square;
    const Int max_pair = isqrt(floor(Rat(k * xt * xt, xx) - Rat(k * xx)));
    std::set<IntVec> seeds;
    for (auto& v : vectors_near(L, x, max_pair, spec.square, spec.square, search_limits().jobs)) {
      if (content(v) != 1) continue;
      Int a = L.pair(v, x), b = L.pair(v, tx);
      if (a == 0 || (a > 0 && b < 0)) seeds.insert(v);  // one sign per mirror
    }
    for (auto& s : seeds) {
      IntVec up = s;
      for (long j = 0; j < m; ++j, up = T * up) {
        if (L.pair(up, x) == 0) continue;
        if (auto kind = wall_kind(L, P, H, up); kind && *kind == spec.kind) {
          out.insert(L.pair(up, x) > 0 ? up : neg(up));
          break;
        }
      }
      IntVec dn = Ti * s;
      for (long j = 0; j < m; ++j, dn = Ti * dn) {
        if (auto kind = wall_kind(L, P, H, dn); kind && *kind == spec.kind) {
          out.insert(L.pair(dn, x) > 0 ? dn : neg(dn));
          break;
        }
      }
    }
  }
  return out;
}

Chamber finish(const IntLattice& L, const WallProfile& P, const std::optional<GluingSubgroup>& H,
               const WallSet& cand, const IntVec& x) {
  Chamber c;
  if (cand.empty()) {
    c.witness = x;
    return c;
  }
  std::vector<IntVec> cv(cand.begin(), cand.end());
  ConeRays cr = cone_rays(L, cv);
  require(cr.pointed, ErrorCode::contract, "chamber cone is not pointed");
  c.walls = facet_normals(L, cv, cr.rays);
  c.rays = cr.rays;
  c.witness = interior_point(cr.rays);
  for (auto& w : c.walls) c.kinds.push_back(*wall_kind(L, P, H, w));
  return c;
}

}  // namespace

namespace {

// b may lie on walls (e.g. a ray of a candidate cone); only walls with rho.b < 0 count.
std::vector<IntVec> separating(const IntLattice& L, const WallProfile& P,
                               const std::optional<GluingSubgroup>& H, const IntVec& a, const IntVec& b) {
  const Int aa = L.square(a), bb = L.square(b), ab = L.pair(a, b);
  require(aa > 0, ErrorCode::input, "walls_separating: a must have positive square");
  require(bb >= 0 && !is_zero(b) && ab > 0, ErrorCode::input,
          "walls_separating: b must lie in the closed cone component of a");
  if (a == b) return {};
  std::set<IntVec> out;
  for (auto& spec : P.specs) {
    Int k = -spec.square;
    // (rho.a)^2 <= k((a.b)^2/b^2 - a^2); rho.a <= k (a.b) for isotropic b
    Int max_pair = bb > 0 ? isqrt(floor(Rat(k * ab * ab, bb) - Rat(k * aa))) : k * ab;
    for (auto& v : vectors_near(L, a, max_pair, spec.square, spec.square, search_limits().jobs)) {
      if (L.pair(v, a) <= 0 || L.pair(v, b) >= 0) continue;
      auto kind = wall_kind(L, P, H, v);
      if (kind && *kind == spec.kind) out.insert(v);
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace

std::vector<IntVec> walls_separating(const IntLattice& L, const WallProfile& P,
                                     const std::optional<GluingSubgroup>& H, const IntVec& a,
                                     const IntVec& b) {
  check_profile(P);
  require(a.size() == L.rank() && b.size() == L.rank(), ErrorCode::input, "walls_separating: bad vector");
  require(L.square(a) > 0, ErrorCode::input, "walls_separating: a must have positive square");
  require_off_walls(L, P, H, a);
  if (L.square(b) > 0) require_off_walls(L, P, H, b);
  return separating(L, P, H, a, b);
}

std::vector<IntVec> walls_orthogonal_to(const IntLattice& L, const WallProfile& P,
                                        const std::optional<GluingSubgroup>& H, const IntVec& nu) {
  check_profile(P);
  require(nu.size() == L.rank() && L.square(nu) > 0, ErrorCode::input,
          "walls_orthogonal_to: nu must have positive square");
  std::set<IntVec> out;
  for (auto& spec : P.specs)
    for (auto& v : vectors_near(L, nu, Int(0), spec.square, spec.square, search_limits().jobs)) {
      auto kind = wall_kind(L, P, H, v);
      if (kind && *kind == spec.kind) out.insert(v);
    }
  return {out.begin(), out.end()};
}

Chamber chamber_of(const IntLattice& L, const WallProfile& P, const std::optional<GluingSubgroup>& H,
                   const IntVec& x) {
  check_profile(P);
  require(x.size() == L.rank(), ErrorCode::input, "chamber_of: bad vector");
  require(L.square(x) > 0, ErrorCode::input, "chamber_of: point must have positive square");
  require(L.rank() == 2 || L.rank() == 3, ErrorCode::input, "chamber_of: rank must be 2 or 3");
  require_off_walls(L, P, H, x);
  WallSet cand;
  if (L.rank() == 2) {
    std::vector<IntVec> probes;
    if (!is_square(-L.determinant())) {
      return finish(L, P, H, nearest_walls2(L, P, H, x), x);
    } else {
      // isotropic rays of the component of x
      const Int a = L.gram()(0, 0), b = L.gram()(0, 1), c = L.gram()(1, 1);
      std::vector<IntVec> iso;
      if (a == 0) {
        iso = {IntVec{1, 0}, primitive(IntVec{c, -2 * b})};
      } else {
        Int s = isqrt(b * b - a * c);
        iso = {primitive(IntVec{-b + s, a}), primitive(IntVec{-b - s, a})};
      }
      for (auto& e : iso) probes.push_back(L.pair(e, x) > 0 ? e : neg(e));
    }
    for (auto& p : probes)
      for (auto& w : separating(L, P, H, x, p)) cand.insert(w);
    return finish(L, P, H, cand, x);
  }
  Int R = 1;
  long refinements = 0;
  while (true) {
    for (auto& w : walls_within(L, P, H, x, R)) cand.insert(w);
    std::vector<IntVec> cv(cand.begin(), cand.end());
    ConeRays cr = cone_rays(L, cv);
    bool closed = cr.pointed && !cr.rays.empty();
    for (auto& r : cr.rays) closed = closed && L.square(r) >= 0;
    if (!closed) {
      R *= 2;
      if (R > search_limits().max_vinberg_distance)
        fail(ErrorCode::inconclusive, "inconclusive: chamber of " + to_string(x) + " not closed within the bound");
      continue;
    }
    WallSet fresh;
    for (auto& r : cr.rays)
      for (auto& w : separating(L, P, H, x, r))
        if (!cand.count(w)) fresh.insert(w);
    if (fresh.empty()) return finish(L, P, H, cand, x);
    if (++refinements > search_limits().max_refinements)
      fail(ErrorCode::inconclusive, "inconclusive: chamber of " + to_string(x) + " needs too many refinements");
    cand.insert(fresh.begin(), fresh.end());
  }
}

Chamber movable_chamber(const IntLattice& L, const std::optional<GluingSubgroup>& H, const IntVec& ample,
                        const WallProfile& P) {
  const WallProfile pex = P.only(WallKind::pex);
  try {
    Chamber c = chamber_of(L, pex, H, ample);
    c.kind = ChamberKind::movable_boundary;
    return c;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::inconclusive || L.rank() != 3) throw;
  }
  // Infinitely many walls: keep the walls whose foot point seen from the
  // ample class is not cut off by any other wall.
  Chamber c;
  c.kind = ChamberKind::movable_boundary;
  c.complete = false;
  c.witness = ample;
  std::set<IntVec> found;
  for (auto& rho : walls_within(L, pex, H, ample, Int(search_limits().max_refinements) * 16)) {
    IntVec foot = add(scale(-L.square(rho), ample), scale(L.pair(rho, ample), rho));
    foot = primitive(foot);
    if (separating(L, pex, H, ample, foot).empty()) found.insert(rho);
  }
  c.walls.assign(found.begin(), found.end());
  c.kinds.assign(c.walls.size(), WallKind::pex);
  return c;
}

ConeSpec movable_cone(const IntLattice& L, const std::optional<GluingSubgroup>& H, const IntVec& ample,
                      const WallProfile& P) {
  Chamber c = movable_chamber(L, H, ample, P);
  ConeSpec s = cone_of(c);
  s.complete = c.complete;
  return s;
}

Chamber neighbor(const IntLattice& L, const WallProfile& P, const std::optional<GluingSubgroup>& H,
                 const Chamber& c, const IntVec& rho) {
  require(std::find(c.walls.begin(), c.walls.end(), rho) != c.walls.end(), ErrorCode::input,
          "neighbor: " + to_string(rho) + " is not a wall of the chamber");
  IntVec m(L.rank(), 0);
  for (auto& r : c.rays)
    if (L.pair(r, rho) == 0) m = add(m, r);
  require(!is_zero(m) && L.square(m) > 0, ErrorCode::contract, "neighbor: wall face misses the positive cone");
  m = primitive(m);
  Int t = 1;
  for (int it = 0; it < 64; ++it, t *= 2) {
    IntVec a = sub(scale(t, m), rho), b = add(scale(t, m), rho);
    if (L.square(a) <= 0 || L.square(b) <= 0) continue;
    bool inside = true;
    for (auto& w : c.walls) inside = inside && L.pair(w, a) > 0;
    if (!inside) continue;
    if (!walls_orthogonal_to(L, P, H, a).empty() || !walls_orthogonal_to(L, P, H, b).empty()) continue;
    auto sep = walls_separating(L, P, H, a, b);
    if (sep.size() == 1 && sep[0] == rho) return chamber_of(L, P, H, b);
  }
  fail(ErrorCode::inconclusive, "inconclusive: could not cross the wall " + to_string(rho));
}

std::vector<IntVec> classes_in_cone(const IntLattice& L, const ConeSpec& cone, const Int& square,
                                    const std::optional<GluingSubgroup>& H, std::optional<Int> ambient_div) {
  require(square > 0, ErrorCode::input, "classes_in_cone: square must be positive");
  require(!ambient_div || H, ErrorCode::unavailable,
          "gluing subgroup unavailable: ambient divisibility cannot be imposed");
  std::vector<IntVec> normals;
  for (auto& [n, s] : cone.inequalities) normals.push_back(n);
  ConeRays cr = cone_rays(L, normals);
  if (!cr.pointed || cr.rays.empty())
    fail(ErrorCode::unbounded_enumeration, "unbounded enumeration: cone is not pointed");
  Int min_sq;
  bool first = true;
  for (auto& r : cr.rays) {
    Int s = L.square(r);
    if (s <= 0)
      fail(ErrorCode::unbounded_enumeration,
           "unbounded enumeration: cone ray " + to_string(r) + " does not have positive square");
    if (first || s < min_sq) min_sq = s;
    first = false;
  }
  IntVec x0 = interior_point(cr.rays);
  Int max_p = 0;
  for (auto& r : cr.rays) max_p = std::max(max_p, Int(abs(L.pair(r, x0))));
  // x = sum c_i r_i: x^2 >= (sum c_i)^2 min r_i^2, x.x0 <= (sum c_i) max r_i.x0
  Int bound = isqrt(floor(Rat(square * max_p * max_p, min_sq))) + 1;
  std::vector<IntVec> out;
  for (auto& v : vectors_near(L, x0, bound, square, square, search_limits().jobs)) {
    if (!cone.contains(L, v)) continue;
    if (ambient_div && divisibility_ambient(L, H, v) != *ambient_div) continue;
    out.push_back(v);
  }
  return out;
}

}  // namespace hkl
