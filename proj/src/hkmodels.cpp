#include "hkl/hkmodels.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace hkl {

void FamilyConfig::validate() const {
  require(ns.is_hyperbolic() && ns.signature().second == static_cast<int>(ns.rank()) - 1, ErrorCode::validation,
          label + ": NS signature must be (1, rank-1)");
  require(plucker.size() == ns.rank(), ErrorCode::validation, label + ": plucker class has wrong length");
  require(ns.square(plucker) == 6, ErrorCode::validation, label + ": plucker class must have square 6");
  if (gluing)
    require(divisibility_ambient(ns, gluing, plucker) == 2, ErrorCode::validation,
            label + ": plucker class must have ambient divisibility 2");
}

namespace {

const GluingSubgroup& need_gluing(const FamilyConfig& F) {
  if (!F.gluing) fail(ErrorCode::input, F.label + ": gluing subgroup unavailable");
  return *F.gluing;
}

std::set<IntVec> wall_set(const Chamber& c) { return {c.walls.begin(), c.walls.end()}; }

}  // namespace

bool is_birational(const FamilyConfig& F, const IntMat& phi) {
  const auto& H = need_gluing(F);
  if (!is_isometry(F.ns, phi) || !preserves_cone(F.ns, phi)) return false;
  if (subgroup_pm_id(F.ns, phi, H) == PmId::neither) return false;
  return walls_separating(F.ns, F.profile.only(WallKind::pex), F.gluing, F.plucker, phi * F.plucker).empty();
}

std::vector<Isometry> chamber_equivalences(const FamilyConfig& F, const Chamber& a, const Chamber& b) {
  const IntLattice& L = F.ns;
  std::vector<Isometry> out;
  if (a.walls.size() != b.walls.size() || L.square(a.witness) != L.square(b.witness) ||
      divisibility_ns(L, a.witness) != divisibility_ns(L, b.witness))
    return out;
  const auto target = wall_set(b);
  for (auto& phi : transporter(L, a.witness, b.witness)) {
    bool ok = true;
    for (auto& w : a.walls) ok = ok && target.count(phi(w));
    if (ok && is_birational(F, phi.matrix())) out.push_back(phi);
  }
  return out;
}

namespace {

struct ChamberWalk {
  std::vector<Chamber> reps;
  std::vector<IntMat> generators;
  bool needed_group = false;
};

ChamberWalk walk(const FamilyConfig& F) {
  F.validate();
  ChamberWalk w;
  w.reps.push_back(chamber_of(F.ns, F.profile, F.gluing, F.plucker));
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    const Chamber c = w.reps[i];
    for (std::size_t k = 0; k < c.walls.size(); ++k) {
      if (c.kinds[k] != WallKind::flop) continue;
      Chamber next = neighbor(F.ns, F.profile, F.gluing, c, c.walls[k]);
      bool known = false;
      for (auto& r : w.reps) {
        if (r.walls == next.walls) {
          known = true;
          break;
        }
        w.needed_group = true;
        auto eq = chamber_equivalences(F, r, next);
        if (!eq.empty()) {
          w.generators.push_back(eq.front().matrix());
          known = true;
          break;
        }
      }
      if (!known) {
        if (static_cast<long>(w.reps.size()) >= search_limits().max_chambers)
          fail(ErrorCode::inconclusive, "inconclusive: chamber walk exceeded the cap with " +
                                            std::to_string(w.reps.size()) + " orbits so far");
        w.reps.push_back(next);
        queue.push_back(w.reps.size() - 1);
      }
    }
  }
  if (F.gluing) {
    for (auto& r : w.reps)
      for (auto& s : chamber_equivalences(F, r, r))
        if (!s.is_identity()) w.generators.push_back(s.matrix());
    w.needed_group = true;
  }
  return w;
}

}  // namespace

GeneratorSet bir_subgroup(const FamilyConfig& F) {
  need_gluing(F);
  auto w = walk(F);
  GeneratorSet G = generated_by(F.ns, w.generators, false, F.plucker);
  G.member_predicate = [F](const Isometry& phi) { return is_birational(F, phi.matrix()); };
  return G;
}

OrbitReport chamber_orbits(const FamilyConfig& F) {
  auto w = walk(F);
  OrbitReport r;
  for (auto& c : w.reps) r.representatives.push_back(c.witness);
  r.orbit_count = w.reps.size();
  if (F.gluing) {
    r.group_used = generated_by(F.ns, w.generators, false, F.plucker);
  } else {
    r.group_known = false;
  }
  return r;
}

OrbitReport polarization_orbits(const FamilyConfig& F) {
  auto w = walk(F);
  const IntLattice& L = F.ns;
  std::set<IntVec> cand;
  for (auto& c : w.reps) {
    ConeSpec cone = cone_of(c);
    std::vector<IntVec> xs;
    if (c.walls.empty())
      fail(ErrorCode::unbounded_enumeration, F.label + ": chamber without walls has no compact slice");
    if (F.gluing)
      xs = classes_in_cone(L, cone, Int(6), F.gluing, Int(2));
    else
      xs = classes_in_cone(L, cone, Int(6), std::nullopt);
    cand.insert(xs.begin(), xs.end());
  }
  OrbitReport r;
  if (!F.gluing) {
    // without gluing the candidates are a superset; one candidate decides it
    require(cand.size() <= 1, ErrorCode::unavailable,
            F.label + ": gluing subgroup needed to separate polarization classes");
    r.representatives.assign(cand.begin(), cand.end());
    r.orbit_count = cand.size();
    r.group_known = false;
    return r;
  }
  for (auto& h : cand) {
    bool seen = false;
    for (auto& rep : r.representatives) {
      if (divisibility_ns(L, h) != divisibility_ns(L, rep)) continue;
      for (auto& phi : transporter(L, h, rep))
        if (is_birational(F, phi.matrix())) {
          seen = true;
          break;
        }
      if (seen) break;
    }
    if (!seen) r.representatives.push_back(h);
  }
  r.orbit_count = r.representatives.size();
  r.group_used = generated_by(L, w.generators, false, F.plucker);
  return r;
}

bool heegner_avoidance(const FamilyConfig& F, const IntVec& h) {
  const auto& H = need_gluing(F);
  const IntLattice& L = F.ns;
  require(h.size() == L.rank() && L.square(h) == 6, ErrorCode::input, "heegner_avoidance: h must have square 6");
  require(divisibility_ambient(L, H, h) == 2, ErrorCode::input,
          "heegner_avoidance: h must have ambient divisibility 2");
  for (auto& v : vectors_near(L, h, Int(0), Int(-6), Int(-2), search_limits().jobs)) {
    Int s = L.square(v);
    if ((s == -2 || s == -6) && L.pair(v, h) == 0 && divisibility_ambient(L, H, v) == 2) return false;
  }
  return true;
}

// ---- discriminants ----

namespace {

bool star(long d) { return d > 6 && (d % 6 == 0 || d % 6 == 2); }

bool two_star(long d) {
  if (!star(d) || d % 4 == 0 || d % 9 == 0) return false;
  long m = d;
  while (m % 2 == 0) m /= 2;
  for (long p = 3; p * p <= m; p += 2) {
    if (m % p) continue;
    if (p % 3 == 2) return false;
    while (m % p == 0) m /= p;
  }
  return !(m > 1 && m % 3 == 2);
}

// Smallest a > 0 with s^2 - D a^2 = -3. Every solution is coprime and, as 3 <
// sqrt(D), appears among the convergents of sqrt(D); two periods suffice.
std::optional<std::pair<Int, Int>> minus_three(const Int& D) {
  if (is_square(D)) {
    for (Int a = 1; a <= 4; ++a) {
      Int t = D * a * a - 3;
      if (t >= 0 && is_square(t)) return std::make_pair(a, isqrt(t));
    }
    return std::nullopt;
  }
  if (D <= 9) {
    for (Int a = 1; a <= 1000; ++a) {
      Int t = D * a * a - 3;
      if (t >= 0 && is_square(t)) return std::make_pair(a, isqrt(t));
    }
    return std::nullopt;
  }
  const Int a0 = isqrt(D);
  Int m = 0, d = 1, a = a0;
  Int p_prev = 1, p = a0, q_prev = 0, q = 1;
  int periods = 0;
  while (periods < 2) {
    if (p * p - D * q * q == -3) return std::make_pair(q, p);
    m = d * a - m;
    d = (D - m * m) / d;
    a = (a0 + m) / d;
    if (a == 2 * a0) ++periods;
    Int pn = a * p + p_prev, qn = a * q + q_prev;
    p_prev = p;
    p = pn;
    q_prev = q;
    q = qn;
  }
  if (p * p - D * q * q == -3) return std::make_pair(q, p);
  return std::nullopt;
}

}  // namespace

DiscriminantVerdict discriminant_conditions(long d) {
  require(d > 0, ErrorCode::input, "discriminant must be positive");
  DiscriminantVerdict v;
  v.d = d;
  v.star = star(d);
  v.two_star = two_star(d);
  if (v.star) {
    // 2n^2 + 2n + 2 = d a^2  <=>  (2n+1)^2 + 3 = 2 d a^2
    if (auto sol = minus_three(Int(2 * d))) {
      v.three_star = true;
      v.witness = std::make_pair(sol->first, Int((sol->second - 1) / 2));
    }
  }
  return v;
}

std::vector<Labeling> cubic_labelings(const IntLattice& A, const IntVec& eta, long bound) {
  require(A.role() == LatticeRole::cubic, ErrorCode::input, "cubic_labelings: lattice must have the cubic role");
  require(eta.size() == A.rank() && A.square(eta) == 3, ErrorCode::input, "cubic_labelings: eta^2 must be 3");
  require(bound > 0, ErrorCode::input, "cubic_labelings: bound must be positive");
  std::size_t k = A.rank();
  for (std::size_t i = 0; i < A.rank(); ++i)
    if (eta == A.basis_vector(i)) k = i;
  require(k < A.rank(), ErrorCode::input, "cubic_labelings: eta must be a basis vector");
  const std::size_t n = A.rank();
  std::vector<long> c(n, -bound);
  std::vector<Labeling> out;
  while (true) {
    IntVec delta(n);
    for (std::size_t i = 0; i < n; ++i) delta[i] = i == k ? 0 : c[i];
    bool skip = c[k] != -bound || is_zero(delta) || content(delta) != 1;
    if (!skip) {
      auto nz = std::find_if(delta.begin(), delta.end(), [](const Int& x) { return x != 0; });
      skip = *nz < 0;
    }
    if (!skip) {
      Int disc = sublattice_disc(A, {eta, delta});
      Int direct = A.square(eta) * A.square(delta) - A.pair(eta, delta) * A.pair(eta, delta);
      require(disc == direct, ErrorCode::contract, "cubic_labelings: discriminant cross-check failed");
      out.push_back({delta, disc});
    }
    std::size_t j = 0;
    while (j < n && c[j] == bound) c[j++] = -bound;
    if (j == n) break;
    ++c[j];
  }
  std::sort(out.begin(), out.end(), [](const Labeling& a, const Labeling& b) { return a.delta < b.delta; });
  return out;
}

}  // namespace hkl
