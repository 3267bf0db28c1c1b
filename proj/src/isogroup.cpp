#include "hkl/isogroup.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "hkl/cone.hpp"

namespace hkl {

// ---- Isometry ----

Isometry::Isometry(const IntLattice& L, IntMat m) : m_(std::move(m)), gram_(L.gram()) {
  require(m_.rows() == L.rank() && m_.cols() == L.rank(), ErrorCode::input,
          "isometry: matrix has wrong shape");
  require(is_isometry(L, m_), ErrorCode::contract, "matrix " + to_string(m_) + " is not an isometry");
}

Isometry Isometry::inverse() const {
  // M^-1 = G^-1 M^T G
  IntMat inv = to_int(hkl::inverse(gram_) * to_rat(m_.transpose() * gram_));
  return Isometry(std::move(inv), gram_, Trusted{});
}

Isometry operator*(const Isometry& a, const Isometry& b) {
  return Isometry(a.m_ * b.m_, a.gram_, Isometry::Trusted{});
}

std::string_view to_string(GroupKind k) {
  switch (k) {
    case GroupKind::reflective: return "reflective";
    case GroupKind::translation: return "translation";
    case GroupKind::finite: return "finite";
    case GroupKind::generic: return "generic";
  }
  return "?";
}

IntMat GeneratorSet::evaluate(const GroupWord& w) const {
  std::size_t n = generators.empty() ? base_point.size() : generators.front().matrix().rows();
  IntMat out = IntMat::identity(n);
  for (const auto& [i, e] : w.letters) {
    require(i < generators.size(), ErrorCode::input, "word letter out of range");
    out = out * (e > 0 ? generators[i].matrix() : generators[i].inverse().matrix());
  }
  return out;
}

// ---- reflections and cone ----

Isometry reflection(const IntLattice& L, const IntVec& v) {
  require(v.size() == L.rank(), ErrorCode::input, "reflection: vector length does not match rank");
  const Int vv = L.square(v);
  require(vv < 0, ErrorCode::input, "reflection: vector " + to_string(v) + " must have negative square");
  const IntVec gv = L.dual_coords(v);
  const std::size_t n = L.rank();
  IntMat m = IntMat::identity(n);
  for (std::size_t j = 0; j < n; ++j) {
    Int num = 2 * gv[j];
    if (num % vv != 0)
      fail(ErrorCode::non_reflective, "non-reflective vector " + to_string(v) + ": reflection is not integral");
    Int c = num / vv;
    for (std::size_t i = 0; i < n; ++i) m(i, j) -= c * v[i];
  }
  return Isometry(L, std::move(m));
}

bool is_root(const IntLattice& L, const IntVec& v) {
  if (v.size() != L.rank() || is_zero(v) || content(v) != 1) return false;
  const Int vv = L.square(v);
  if (vv >= 0) return false;
  for (const auto& c : L.dual_coords(v))
    if ((2 * c) % vv != 0) return false;
  return true;
}

IntVec reference_class(const IntLattice& L) {
  require(L.is_hyperbolic(), ErrorCode::input, "positive cone needs a hyperbolic lattice");
  for (std::size_t i = 0; i < L.rank(); ++i)
    if (L.gram()(i, i) > 0) return L.basis_vector(i);
  // small search; first non-zero coordinate positive
  const std::size_t n = L.rank();
  std::vector<long> c(n, -2);
  while (true) {
    IntVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = c[i];
    auto nz = std::find_if(v.begin(), v.end(), [](const Int& a) { return a != 0; });
    if (nz != v.end() && *nz > 0 && L.square(v) > 0) return v;
    std::size_t k = 0;
    while (k < n && c[k] == 2) c[k++] = -2;
    if (k == n) break;
    ++c[k];
  }
  fail(ErrorCode::input, "no reference class found");
}

bool in_positive_cone(const IntLattice& L, const IntVec& x) {
  return L.square(x) > 0 && L.pair(x, reference_class(L)) > 0;
}

bool in_closed_positive_cone(const IntLattice& L, const IntVec& x) {
  return !is_zero(x) && L.square(x) >= 0 && L.pair(x, reference_class(L)) > 0;
}

bool preserves_cone(const IntLattice& L, const IntMat& m) {
  IntVec x0 = reference_class(L);
  return L.pair(m * x0, x0) > 0;
}

// ---- rank 2: Pell and the automorph ----

std::pair<Int, Int> pell_fundamental(const Int& D) {
  require(D > 0 && !is_square(D), ErrorCode::input, "pell: D must be a positive non-square");
  const Int a0 = isqrt(D);
  Int m = 0, d = 1, a = a0;
  Int p_prev = 1, p = a0, q_prev = 0, q = 1;
  while (p * p - D * q * q != 1) {
    m = d * a - m;
    d = (D - m * m) / d;
    a = (a0 + m) / d;
    Int pn = a * p + p_prev, qn = a * q + q_prev;
    p_prev = p;
    p = pn;
    q_prev = q;
    q = qn;
  }
  return {p, q};
}

namespace {

bool anisotropic2(const IntLattice& L) { return L.rank() == 2 && !is_square(-L.determinant()); }

Int icbrt(const Int& n) {
  Int r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), 3);
  return r;
}

}  // namespace

IntMat fundamental_automorph(const IntLattice& L) {
  require(L.rank() == 2 && L.signature() == std::make_pair(1, 1), ErrorCode::input,
          "fundamental_automorph: need signature (1,1)");
  require(anisotropic2(L), ErrorCode::input, "fundamental_automorph: form is isotropic");
  const Int a = L.gram()(0, 0), b = L.gram()(0, 1), c = L.gram()(1, 1);
  Int k = gcd(gcd(a, 2 * b), c);
  const Int A = a / k, B = 2 * b / k, C = c / k;
  const Int disc = B * B - 4 * A * C;
  Int t, u;
  if (disc % 4 == 0) {
    auto [x, y] = pell_fundamental(disc / 4);
    t = 2 * x;
    u = y;
  } else {
    auto [x1, y1] = pell_fundamental(disc);
    t = 2 * x1;
    u = 2 * y1;
    // t^2 - disc u^2 = 4 may have a smaller solution whose cube is (x1, y1)
    Int guess = icbrt(2 * y1 / disc);
    for (Int uu = Int(std::max(Int(1), Int(guess - 1))); uu <= guess + 2; ++uu) {
      if (uu % 2 == 0 || disc * uu * uu * uu + 3 * uu != 2 * y1) continue;
      Int tt2 = disc * uu * uu + 4;
      if (is_square(tt2)) {
        t = isqrt(tt2);
        u = uu;
      }
    }
  }
  IntMat m(2, 2);
  m(0, 0) = (t - B * u) / 2;
  m(0, 1) = -C * u;
  m(1, 0) = A * u;
  m(1, 1) = (t + B * u) / 2;
  if (!is_isometry(L, m)) m = m.transpose();
  require(is_isometry(L, m), ErrorCode::contract, "fundamental_automorph: automorph check failed");
  if (!preserves_cone(L, m)) m = -m;
  return m;
}

// ---- Vinberg accretion ----

namespace {

Int root_bound(const IntLattice& L) {
  auto D = smith_decompose(L);
  return 2 * D.exponent();
}

bool coxeter_pair(const IntLattice& L, const IntVec& a, const IntVec& b) {
  Int c = L.pair(a, b);
  if (c < 0) return false;
  Int prod = L.square(a) * L.square(b);  // positive
  if (c * c >= prod) return true;         // parallel or ultraparallel
  Int r = 4 * c * c;
  return r == 0 || r == prod || r == 2 * prod || r == 3 * prod;
}

// Walls cut a finite-volume region of the positive cone.
bool finite_volume(const IntLattice& L, const std::vector<IntVec>& walls) {
  if (walls.size() < L.rank()) return false;
  ConeRays cr = cone_rays(L, walls);
  if (!cr.pointed || cr.rays.size() < L.rank()) return false;
  for (const auto& r : cr.rays)
    if (L.square(r) < 0) return false;
  IntVec x = interior_point(cr.rays);
  return L.square(x) > 0 && strictly_inside(L, walls, x);
}

std::vector<IntVec> roots_near(const IntLattice& L, const IntVec& x0, const Int& max_pair,
                               const Int& kmax) {
  auto vs = vectors_near(L, x0, max_pair, -kmax, Int(-1), search_limits().jobs);
  std::vector<IntVec> out;
  for (auto& v : vs)
    if (is_root(L, v)) out.push_back(std::move(v));
  return out;
}

// Walls of a Coxeter chamber around x0 for the full reflection group. Returns
// nullopt when no chamber closes before distance cap (cap < 0: use the global
// limit and throw inconclusive instead).
std::optional<std::vector<IntVec>> vinberg(const IntLattice& L, const IntVec& x0, const Rat& cap,
                                           bool* any_root) {
  const Int kmax = root_bound(L);
  std::vector<IntVec> walls;
  // step 0: roots orthogonal to x0, simple with respect to a generic y
  auto zero = roots_near(L, x0, Int(0), kmax);
  std::vector<IntVec> sys;
  for (auto& v : zero)
    if (L.pair(v, x0) == 0) sys.push_back(v);
  if (any_root && !sys.empty()) *any_root = true;
  if (!sys.empty()) {
    IntVec y;
    for (long m = 2;; ++m) {
      IntVec cand(L.rank());
      Int pw = 1;
      for (auto& c : cand) {
        c = pw;
        pw *= m;
      }
      y = add(scale(Int(1000) * m * m, x0), cand);
      bool ok = true;
      for (auto& v : sys) ok = ok && L.pair(v, y) != 0;
      if (ok) break;
    }
    std::vector<std::pair<Rat, IntVec>> pos;
    for (auto& v : sys)
      if (L.pair(v, y) > 0) {
        Int p = L.pair(v, y);
        pos.emplace_back(Rat(p * p, -L.square(v)), v);
      }
    std::sort(pos.begin(), pos.end());
    for (auto& [d, v] : pos) {
      bool ok = true;
      for (auto& w : walls) ok = ok && L.pair(v, w) >= 0;
      if (ok) walls.push_back(v);
    }
  }
  const bool capped = cap >= 0;
  const Rat limit = capped ? cap : Rat(search_limits().max_vinberg_distance);
  Rat lo = 0, hi = 1;
  while (!finite_volume(L, walls)) {
    if (lo >= limit) {
      if (capped) return std::nullopt;
      fail(ErrorCode::inconclusive, "inconclusive: bound exhausted before the Vinberg polygon closed");
    }
    if (hi > limit) hi = limit;
    Int max_pair = isqrt(floor(hi * Rat(kmax)));
    std::vector<std::tuple<Rat, Int, IntVec>> cand;
    for (auto& v : roots_near(L, x0, max_pair, kmax)) {
      Int p = L.pair(v, x0);
      if (p <= 0) continue;
      Int k = -L.square(v);
      Rat d(p * p, k);
      if (d > lo && d <= hi) cand.emplace_back(d, k, v);
    }
    if (any_root && !cand.empty()) *any_root = true;
    std::sort(cand.begin(), cand.end());
    std::size_t i = 0;
    while (i < cand.size()) {
      std::size_t j = i;
      const std::vector<IntVec> before = walls;
      while (j < cand.size() && std::get<0>(cand[j]) == std::get<0>(cand[i])) {
        const IntVec& v = std::get<2>(cand[j]);
        bool ok = true;
        for (auto& w : before) ok = ok && L.pair(v, w) >= 0;
        if (ok) walls.push_back(v);
        ++j;
      }
      i = j;
      if (finite_volume(L, walls)) break;
    }
    lo = hi;
    hi = hi * 2;
  }
  for (std::size_t a = 0; a < walls.size(); ++a)
    for (std::size_t b = a + 1; b < walls.size(); ++b)
      require(coxeter_pair(L, walls[a], walls[b]), ErrorCode::contract,
              "Vinberg walls " + to_string(walls[a]) + ", " + to_string(walls[b]) + " are not Coxeter");
  std::sort(walls.begin(), walls.end());
  return walls;
}

// Isometries of L mapping the wall set to itself.
std::vector<Isometry> chamber_symmetries(const IntLattice& L, const std::vector<IntVec>& walls) {
  const std::size_t n = L.rank();
  std::vector<std::size_t> base;
  // independent n-tuple of walls
  if (n == 2) {
    base = {0, 1};
  } else {
    for (std::size_t a = 0; a < walls.size() && base.empty(); ++a)
      for (std::size_t b = a + 1; b < walls.size() && base.empty(); ++b)
        for (std::size_t c = b + 1; c < walls.size() && base.empty(); ++c)
          if (determinant(IntMat::from_columns({walls[a], walls[b], walls[c]})) != 0) base = {a, b, c};
  }
  require(base.size() == n, ErrorCode::contract, "chamber walls do not span");
  std::vector<IntVec> src;
  for (auto i : base) src.push_back(walls[i]);
  const RatMat src_inv = inverse(IntMat::from_columns(src));
  const std::set<IntVec> wall_set(walls.begin(), walls.end());
  std::set<Isometry> out;
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (depth == n) {
      std::vector<IntVec> dst;
      for (auto i : pick) dst.push_back(walls[i]);
      RatMat m = to_rat(IntMat::from_columns(dst)) * src_inv;
      if (!is_integral(m)) return;
      IntMat mi = to_int(m);
      if (!is_isometry(L, mi)) return;
      for (auto& w : walls)
        if (!wall_set.count(mi * w)) return;
      out.insert(Isometry(L, mi));
      return;
    }
    for (std::size_t i = 0; i < walls.size(); ++i) {
      if (std::find(pick.begin(), pick.begin() + depth, i) != pick.begin() + depth) continue;
      bool ok = L.square(walls[i]) == L.square(src[depth]);
      for (std::size_t e = 0; ok && e < depth; ++e) ok = L.pair(walls[i], walls[pick[e]]) == L.pair(src[depth], src[e]);
      if (!ok) continue;
      pick[depth] = i;
      rec(depth + 1);
    }
  };
  rec(0);
  return {out.begin(), out.end()};
}

GeneratorSet reflective_set(const IntLattice& L, std::vector<IntVec> walls, std::vector<Isometry> sym,
                            bool minus_id) {
  GeneratorSet G;
  G.kind = GroupKind::reflective;
  std::sort(walls.begin(), walls.end());
  G.fundamental_domain = walls;
  G.wall_count = walls.size();
  for (auto& w : walls) G.generators.push_back(reflection(L, w));
  std::sort(sym.begin(), sym.end());
  for (auto& s : sym)
    if (!s.is_identity()) G.generators.push_back(s);
  G.domain_symmetries = sym;
  G.contains_minus_id = minus_id;
  ConeRays cr = cone_rays(L, walls);
  G.base_point = interior_point(cr.rays);
  return G;
}

std::vector<IntVec> isotropic_rays2(const IntLattice& L) {
  const Int a = L.gram()(0, 0), b = L.gram()(0, 1), c = L.gram()(1, 1);
  std::vector<IntVec> out;
  if (a == 0) {
    out.push_back({1, 0});
    out.push_back(primitive(IntVec{c, -2 * b}));
  } else {
    Int s = isqrt(b * b - a * c);
    out.push_back(primitive(IntVec{-b + s, a}));
    out.push_back(primitive(IntVec{-b - s, a}));
  }
  IntVec x0 = reference_class(L);
  for (auto& e : out)
    if (L.pair(e, x0) < 0) e = neg(e);
  return out;
}

}  // namespace

GeneratorSet isometry_group(const IntLattice& L) {
  const auto sig = L.signature();
  require(sig == std::make_pair(1, 1) || sig == std::make_pair(1, 2), ErrorCode::input,
          "isometry_group: signature must be (1,1) or (1,2)");
  const IntVec x0 = reference_class(L);
  if (L.rank() == 2 && !anisotropic2(L)) {
    auto rays = isotropic_rays2(L);
    GeneratorSet G;
    G.kind = GroupKind::finite;
    G.contains_minus_id = true;
    G.base_point = primitive(add(rays[0], rays[1]));
    const RatMat src_inv = inverse(IntMat::from_columns(rays));
    for (auto& dst : {rays, std::vector<IntVec>{rays[1], rays[0]}}) {
      RatMat m = to_rat(IntMat::from_columns(dst)) * src_inv;
      if (!is_integral(m) || !is_isometry(L, to_int(m))) continue;
      Isometry phi(L, to_int(m));
      G.elements.push_back(phi);
      if (!phi.is_identity()) G.generators.push_back(phi);
    }
    return G;
  }
  if (L.rank() == 2) {
    IntMat T = fundamental_automorph(L);
    IntVec tx = T * x0;
    Int p = L.pair(x0, tx), xx = L.square(x0);
    Rat cap = Rat(p * p, xx) - Rat(xx);
    bool any = false;
    auto walls = vinberg(L, x0, cap, &any);
    if (walls) {
      auto sym = chamber_symmetries(L, *walls);
      return reflective_set(L, *walls, sym, true);
    }
    require(!any, ErrorCode::inconclusive, "inconclusive: roots found but no chamber closed");
    GeneratorSet G;
    G.kind = GroupKind::translation;
    G.contains_minus_id = true;
    G.generators.push_back(Isometry(L, T));
    G.base_point = x0;
    return G;
  }
  auto walls = vinberg(L, x0, Rat(-1), nullptr);
  auto sym = chamber_symmetries(L, *walls);
  return reflective_set(L, *walls, sym, true);
}

// ---- descent ----

namespace {

std::optional<IntVec> reflection_normal(const IntLattice& L, const IntMat& m) {
  const std::size_t n = m.rows();
  const IntMat I = IntMat::identity(n);
  if (m == I || !(m * m == I) || determinant(m) != -1) return std::nullopt;
  IntMat d = m;
  for (std::size_t i = 0; i < n; ++i) d(i, i) -= 1;
  if (rank(d) != 1) return std::nullopt;
  IntVec v;
  for (std::size_t j = 0; j < n && v.empty(); ++j) {
    IntVec c = d.column(j);
    if (!is_zero(c)) v = primitive(c);
  }
  if (L.square(v) >= 0) return std::nullopt;
  try {
    if (reflection(L, v).matrix() == m) return v;
  } catch (const Error&) {
  }
  return std::nullopt;
}

void check_steps(long& steps) {
  if (++steps > search_limits().max_descent_steps)
    fail(ErrorCode::inconclusive, "inconclusive: descent exceeded the iteration cap");
}

// Reflect x into the chamber; returns the word (reflection indices) applied.
// x must lie in the closed positive cone.
GroupWord descend_walls(const IntLattice& L, const std::vector<IntVec>& walls, IntVec& x) {
  GroupWord w;
  long steps = 0;
  while (true) {
    bool moved = false;
    for (std::size_t i = 0; i < walls.size(); ++i) {
      Int c = L.pair(x, walls[i]);
      if (c < 0) {
        x = sub(x, scale(2 * c / L.square(walls[i]), walls[i]));
        w.letters.insert(w.letters.begin(), {i, 1});
        moved = true;
        check_steps(steps);
        break;
      }
    }
    if (!moved) return w;
  }
}

// Move x down by T^{+-1} to minimal height against h.
GroupWord descend_translation(const IntLattice& L, const Isometry& T, const IntVec& h, IntVec& x,
                              bool use_abs) {
  const Isometry Ti = T.inverse();
  auto height = [&](const IntVec& v) {
    Int p = L.pair(v, h);
    return use_abs ? Int(abs(p)) : p;
  };
  GroupWord w;
  long steps = 0;
  while (true) {
    IntVec up = T(x), dn = Ti(x);
    Int hx = height(x), hu = height(up), hd = height(dn);
    if (hu < hx && hu <= hd) {
      x = up;
      w.letters.insert(w.letters.begin(), {0, 1});
    } else if (hd < hx) {
      x = dn;
      w.letters.insert(w.letters.begin(), {0, -1});
    } else {
      // equal-height neighbour: keep the lexicographically smaller one
      if (hu == hx && lex_less(up, x)) {
        x = up;
        w.letters.insert(w.letters.begin(), {0, 1});
      } else if (hd == hx && lex_less(dn, x)) {
        x = dn;
        w.letters.insert(w.letters.begin(), {0, -1});
      }
      return w;
    }
    check_steps(steps);
  }
}

GroupWord cat(const GroupWord& left, const GroupWord& right) {
  GroupWord w = left;
  w.letters.insert(w.letters.end(), right.letters.begin(), right.letters.end());
  return w;
}

Isometry minus_id(const IntLattice& L) { return Isometry(L, -IntMat::identity(L.rank())); }

// Word of a finite-kind element (generators are the non-identity elements).
GroupWord finite_word(const GeneratorSet& G, const Isometry& e) {
  GroupWord w;
  for (std::size_t i = 0; i < G.generators.size(); ++i)
    if (G.generators[i] == e) w.letters.push_back({i, 1});
  return w;
}

// Greedy descent of y against height y.h over generators, inverses and moves.
std::pair<IntVec, GroupWord> descend_generic(const IntLattice& L, const GeneratorSet& G, IntVec y) {
  std::vector<std::pair<Isometry, GroupWord>> moves;
  for (std::size_t i = 0; i < G.generators.size(); ++i) {
    moves.push_back({G.generators[i], GroupWord{{{i, 1}}}});
    moves.push_back({G.generators[i].inverse(), GroupWord{{{i, -1}}}});
  }
  for (auto& m : G.moves) moves.push_back(m);
  GroupWord w;
  long steps = 0;
  const IntVec& h = G.base_point;
  while (true) {
    Int best = L.pair(y, h);
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < moves.size(); ++i) {
      Int v = L.pair(moves[i].first(y), h);
      if (v < best) {
        best = v;
        pick = i;
      }
    }
    if (!pick) return {y, w};
    y = moves[*pick].first(y);
    w = cat(moves[*pick].second, w);
    check_steps(steps);
  }
}

}  // namespace

Reduction reduce_to_domain(const IntLattice& L, const GeneratorSet& G, const IntVec& x) {
  require(x.size() == L.rank() && !is_zero(x), ErrorCode::input, "reduce_to_domain: bad vector");
  const IntVec x0 = reference_class(L);
  Reduction r;
  const Int xx = L.square(x);
  IntVec y = x;

  if (xx < 0) {
    require(L.rank() == 2, ErrorCode::input,
            "reduce_to_domain: negative vectors are supported only in rank 2");
    // reduce the positive vector orthogonal to x and carry x along
    IntVec gx = L.dual_coords(x);
    IntVec u = primitive(IntVec{-gx[1], gx[0]});
    if (L.pair(u, x0) < 0) u = neg(u);
    Reduction ru = reduce_to_domain(L, G, u);
    IntMat w = G.evaluate(ru.word);
    y = w * x;
    r.word = ru.word;
    const IntVec& h = G.base_point;
    Int s = L.pair(y, h);
    if (s < 0 && G.kind == GroupKind::reflective) {
      // u on a wall: the wall reflection negates y
      for (std::size_t i = 0; i < G.wall_count; ++i)
        if (L.pair(ru.canonical, G.fundamental_domain[i]) == 0) {
          y = neg(y);
          r.word.letters.insert(r.word.letters.begin(), {i, 1});
          s = -s;
          break;
        }
    }
    if (s < 0 || (s == 0 && lex_less(neg(y), y))) {
      y = neg(y);
      r.sign = -1;
    }
    if (G.kind == GroupKind::finite) {
      // stabilizer of u may move y; pick the lex-min image with the same sign
      for (auto& e : G.elements) {
        if (!(e(ru.canonical) == ru.canonical)) continue;
        IntVec z = e(y);
        if (lex_less(z, y)) {
          y = z;
          r.word = cat(finite_word(G, e), r.word);
        }
      }
    }
    r.canonical = y;
    return r;
  }

  if (L.pair(y, x0) < 0) {
    y = neg(y);
    r.sign = -1;
  }

  switch (G.kind) {
    case GroupKind::reflective: {
      r.word = descend_walls(L, G.fundamental_domain, y);
      IntVec best = y;
      const Isometry* pick = nullptr;
      for (auto& s : G.domain_symmetries) {
        IntVec z = s(y);
        if (lex_less(z, best)) {
          best = z;
          pick = &s;
        }
      }
      if (pick) {
        for (std::size_t i = G.wall_count; i < G.generators.size(); ++i)
          if (G.generators[i] == *pick) r.word.letters.insert(r.word.letters.begin(), {i, 1});
        y = best;
      }
      break;
    }
    case GroupKind::translation:
      r.word = descend_translation(L, G.generators[0], G.base_point, y, false);
      break;
    case GroupKind::finite: {
      IntVec best = y;
      const Isometry* pick = nullptr;
      for (auto& e : G.elements) {
        IntVec z = e(y);
        if (lex_less(z, best)) {
          best = z;
          pick = &e;
        }
      }
      if (pick) r.word = finite_word(G, *pick);
      y = best;
      break;
    }
    case GroupKind::generic: {
      auto [z, w] = descend_generic(L, G, y);
      y = z;
      r.word = w;
      r.certified = false;
      break;
    }
  }
  r.canonical = y;
  return r;
}

// ---- membership ----

Membership membership(const IntLattice& L, const GeneratorSet& G, const IntMat& phi_in) {
  if (phi_in.rows() != L.rank() || phi_in.cols() != L.rank() || !is_isometry(L, phi_in))
    return Membership::non_member;
  if (G.member_predicate) return G.member_predicate(Isometry(L, phi_in)) ? Membership::member : Membership::non_member;
  Isometry phi(L, phi_in);
  if (!preserves_cone(L, phi.matrix())) {
    if (G.contains_minus_id)
      phi = minus_id(L) * phi;
    else if (G.cone_flip)
      phi = G.cone_flip->inverse() * phi;
    else
      return Membership::non_member;
  }
  const IntVec& xb = G.base_point;
  switch (G.kind) {
    case GroupKind::reflective: {
      IntVec y = phi(xb);
      GroupWord w = descend_walls(L, G.fundamental_domain, y);
      Isometry psi = Isometry(L, G.evaluate(w)) * phi;
      for (auto& s : G.domain_symmetries)
        if (s == psi) return Membership::member;
      return Membership::non_member;
    }
    case GroupKind::translation: {
      IntVec y = phi(xb);
      GroupWord w = descend_translation(L, G.generators[0], xb, y, false);
      Isometry psi = Isometry(L, G.evaluate(w)) * phi;
      return psi.is_identity() ? Membership::member : Membership::non_member;
    }
    case GroupKind::finite:
      for (auto& e : G.elements)
        if (e == phi) return Membership::member;
      return Membership::non_member;
    case GroupKind::generic: {
      auto [y, w] = descend_generic(L, G, phi(xb));
      Isometry psi = Isometry(L, G.evaluate(w)) * phi;
      if (psi.is_identity()) return Membership::member;
      // short words over the generators
      std::vector<Isometry> letters;
      for (auto& g : G.generators) {
        letters.push_back(g);
        letters.push_back(g.inverse());
      }
      std::set<Isometry> seen{psi};
      std::vector<Isometry> frontier{psi};
      for (int depth = 0; depth < 6 && !frontier.empty(); ++depth) {
        std::vector<Isometry> next;
        for (auto& f : frontier)
          for (auto& l : letters) {
            Isometry z = l * f;
            if (z.is_identity()) return Membership::member;
            if (seen.insert(z).second && seen.size() < 20000) next.push_back(z);
          }
        frontier = std::move(next);
      }
      return Membership::inconclusive;
    }
  }
  return Membership::inconclusive;
}

bool group_equal(const IntLattice& L, const GeneratorSet& a, const GeneratorSet& b) {
  auto contained = [&](const GeneratorSet& x, const GeneratorSet& y) {
    std::vector<IntMat> test;
    for (auto& g : x.generators) test.push_back(g.matrix());
    if (x.contains_minus_id) test.push_back(-IntMat::identity(L.rank()));
    if (x.cone_flip) test.push_back(x.cone_flip->matrix());
    for (auto& m : test) {
      Membership r = membership(L, y, m);
      if (r == Membership::inconclusive)
        fail(ErrorCode::inconclusive, "inconclusive: membership of " + to_string(m) + " undecided");
      if (r == Membership::non_member) return false;
    }
    return true;
  };
  return contained(a, b) && contained(b, a);
}

// ---- generated subgroups ----

namespace {

std::optional<std::vector<Isometry>> finite_closure(const std::vector<Isometry>& gens, const Isometry& id,
                                                    std::size_t cap) {
  std::set<Isometry> seen{id};
  std::deque<Isometry> queue{id};
  while (!queue.empty()) {
    Isometry x = queue.front();
    queue.pop_front();
    for (auto& g : gens) {
      Isometry y = g * x;
      if (seen.insert(y).second) {
        if (seen.size() > cap) return std::nullopt;
        queue.push_back(y);
      }
    }
  }
  return std::vector<Isometry>(seen.begin(), seen.end());
}

// Exponent k with g = T^k, for cone-preserving proper g in rank 2.
std::optional<long> translation_exponent(const IntLattice& L, const Isometry& T, const Isometry& g,
                                         const IntVec& x0) {
  IntVec y = g(x0);
  GroupWord w = descend_translation(L, T, x0, y, false);
  Isometry psi = g;
  long k = 0;
  for (auto& [i, e] : w.letters) {
    (void)i;
    psi = (e > 0 ? T : T.inverse()) * psi;
    k -= e;
  }
  if (!psi.is_identity()) return std::nullopt;
  return k;
}

Isometry power(const Isometry& T, long k, const IntLattice& L) {
  Isometry out(L, IntMat::identity(L.rank()));
  Isometry b = k >= 0 ? T : T.inverse();
  for (long i = 0; i < std::labs(k); ++i) out = b * out;
  return out;
}

IntVec generic_point(const IntLattice& L, const IntVec& x0, const std::vector<IntVec>& avoid, long salt) {
  const std::size_t n = L.rank();
  for (long m = 2 + salt;; ++m) {
    IntVec e(n);
    Int pw = 1;
    for (auto& c : e) {
      c = pw;
      pw *= m;
    }
    IntVec x = add(scale(Int(64) * m * m * m, x0), e);
    x = primitive(x);
    if (L.square(x) <= 0 || L.pair(x, x0) <= 0) continue;
    bool ok = true;
    for (auto& v : avoid) ok = ok && L.pair(v, x) != 0;
    if (ok) return x;
  }
}

// Attempt the W(P) x| Sym(P) description of the group generated by gens.
std::optional<GeneratorSet> try_reflective(const IntLattice& L, const std::vector<Isometry>& gens,
                                           const IntVec& hint) {
  std::vector<Isometry> pool = gens;
  for (auto& g : gens) pool.push_back(g.inverse());
  std::set<IntVec> normals;
  auto add_normal = [&](const IntMat& m) {
    if (auto v = reflection_normal(L, m)) normals.insert(*v);
  };
  for (auto& a : pool) {
    add_normal(a.matrix());
    for (auto& b : pool) add_normal((a * b).matrix());
  }
  if (normals.empty()) return std::nullopt;
  // conjugates of known reflections
  for (int round = 0; round < 2 && normals.size() < 400; ++round) {
    std::set<IntVec> more = normals;
    for (auto& g : pool)
      for (auto& v : normals) more.insert(primitive(g(v)));
    normals = std::move(more);
  }
  // one representative per mirror
  std::set<IntVec> mirrors;
  for (auto v : normals) {
    if (mirrors.count(neg(v))) continue;
    mirrors.insert(v);
  }
  std::vector<IntVec> mv(mirrors.begin(), mirrors.end());
  const IntVec x0 = reference_class(L);
  IntVec xb = hint;
  for (auto& v : mv)
    if (!xb.empty() && L.pair(v, xb) == 0) xb.clear();
  if (xb.empty()) xb = generic_point(L, x0, mv, 0);

  std::vector<std::pair<Rat, IntVec>> order;
  for (auto v : mv) {
    Int p = L.pair(v, xb);
    if (p < 0) {
      v = neg(v);
      p = -p;
    }
    order.emplace_back(Rat(p * p, -L.square(v)), v);
  }
  std::sort(order.begin(), order.end());
  std::vector<IntVec> walls;
  for (auto& [d, v] : order) {
    bool ok = true;
    for (auto& w : walls) ok = ok && L.pair(v, w) >= 0;
    if (ok) walls.push_back(v);
    if (finite_volume(L, walls)) break;
  }
  if (!finite_volume(L, walls)) return std::nullopt;
  {
    ConeRays cr = cone_rays(L, walls);
    walls = facet_normals(L, walls, cr.rays);
  }
  for (std::size_t a = 0; a < walls.size(); ++a)
    for (std::size_t b = a + 1; b < walls.size(); ++b)
      if (!coxeter_pair(L, walls[a], walls[b])) return std::nullopt;
  const std::set<IntVec> wall_set(walls.begin(), walls.end());
  std::vector<Isometry> wall_refl;
  for (auto& w : walls) wall_refl.push_back(reflection(L, w));
  const Isometry id(L, IntMat::identity(L.rank()));
  std::vector<Isometry> residues;
  for (auto& g : gens) {
    IntVec y = g(xb);
    GroupWord w = descend_walls(L, walls, y);
    Isometry psi = g;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) psi = wall_refl[it->first] * psi;
    for (auto& v : walls)
      if (!wall_set.count(psi(v))) return std::nullopt;
    if (!psi.is_identity()) residues.push_back(psi);
  }
  auto sym = finite_closure(residues, id, 1000);
  if (!sym) return std::nullopt;
  GeneratorSet G = reflective_set(L, walls, *sym, false);
  G.base_point = xb;
  return G;
}

GeneratorSet classify(const IntLattice& L, std::vector<Isometry> gens, const IntVec& hint) {
  const Isometry id(L, IntMat::identity(L.rank()));
  const IntVec x0 = reference_class(L);
  // drop identities, duplicates and inverses
  std::vector<Isometry> uniq;
  for (auto& g : gens) {
    if (g.is_identity()) continue;
    bool dup = false;
    for (auto& h : uniq) dup = dup || h == g || h == g.inverse();
    if (!dup) uniq.push_back(g);
  }
  gens = uniq;

  if (auto fin = finite_closure(gens, id, 512)) {
    GeneratorSet G;
    G.kind = GroupKind::finite;
    G.elements = *fin;
    for (auto& e : *fin)
      if (!e.is_identity()) G.generators.push_back(e);
    G.base_point = x0;
    return G;
  }
  if (L.rank() == 2 && anisotropic2(L)) {
    bool proper = std::all_of(gens.begin(), gens.end(), [](const Isometry& g) { return g.det() == 1; });
    if (proper) {
      Isometry T(L, fundamental_automorph(L));
      long k = 0;
      bool ok = true;
      for (auto& g : gens) {
        auto e = translation_exponent(L, T, g, x0);
        if (!e) {
          ok = false;
          break;
        }
        k = std::gcd(k, std::labs(*e));
      }
      if (ok && k > 0) {
        GeneratorSet G;
        G.kind = GroupKind::translation;
        G.generators.push_back(power(T, k, L));
        G.base_point = x0;
        return G;
      }
    }
  }
  if (auto G = try_reflective(L, gens, hint)) return *G;

  GeneratorSet G;
  G.kind = GroupKind::generic;
  G.generators = gens;
  // base point with trivial stabilizer so that descent identifies elements
  for (long salt = 0;; ++salt) {
    IntVec xb = generic_point(L, x0, {}, salt);
    if (stabilizer(L, xb).size() == 1) {
      G.base_point = xb;
      break;
    }
    require(salt < 64, ErrorCode::inconclusive, "inconclusive: no base point with trivial stabilizer");
  }
  return G;
}

}  // namespace

GeneratorSet generated_by(const IntLattice& L, const std::vector<IntMat>& gens_in, bool with_minus_id,
                          const IntVec& base_point) {
  require(L.is_hyperbolic(), ErrorCode::input, "generated_by: lattice must be hyperbolic");
  const IntMat I = IntMat::identity(L.rank());
  std::vector<Isometry> gens;
  bool minus = with_minus_id;
  for (auto& m : gens_in) {
    Isometry g(L, m);
    if (m == -I)
      minus = true;
    else
      gens.push_back(g);
  }
  std::vector<Isometry> pres;
  std::optional<Isometry> flip;
  for (auto& g : gens) {
    if (preserves_cone(L, g.matrix()))
      pres.push_back(g);
    else if (minus)
      pres.push_back(minus_id(L) * g);
    else if (!flip)
      flip = g;
  }
  if (flip && !minus) {
    // Schreier generators for the cone-preserving part, transversal {1, s}
    pres.clear();
    const Isometry id(L, I);
    const Isometry s_inv = flip->inverse();
    for (const Isometry* t : std::vector<const Isometry*>{&id, &*flip})
      for (auto& g : gens) {
        Isometry tg = *t * g;
        pres.push_back(preserves_cone(L, tg.matrix()) ? tg : tg * s_inv);
      }
  }
  GeneratorSet G = classify(L, pres, base_point);
  G.contains_minus_id = minus;
  if (flip && !minus) {
    // -Id in the group iff -s^-1 is in the cone-preserving part
    Isometry t = minus_id(L) * flip->inverse();
    Membership m = membership(L, G, t.matrix());
    if (m == Membership::member)
      G.contains_minus_id = true;
    else
      G.cone_flip = *flip;
  }
  return G;
}

// ---- stabilizers and transporters ----

std::vector<Isometry> transporter(const IntLattice& L, const IntVec& v, const IntVec& w) {
  require(v.size() == L.rank() && w.size() == L.rank(), ErrorCode::input, "transporter: bad vector");
  const Int vv = L.square(v);
  require(vv > 0, ErrorCode::input, "transporter: vectors must have positive square");
  require(L.square(w) == vv, ErrorCode::input, "transporter: squares differ, set is empty");
  require(divisibility_ns(L, v) == divisibility_ns(L, w), ErrorCode::input,
          "transporter: divisibilities differ, set is empty");
  const std::size_t n = L.rank();
  const IntMat& G = L.gram();
  const IntVec gv = L.dual_coords(v);
  // column i of phi is u_i with u_i.w = e_i.v and u_i^2 = G_ii
  std::vector<std::vector<IntVec>> cand(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& u : vectors_near(L, w, abs(gv[i]), G(i, i), G(i, i), search_limits().jobs))
      if (L.pair(u, w) == gv[i]) cand[i].push_back(u);
  }
  std::vector<Isometry> out;
  std::vector<IntVec> cols(n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      IntMat m = IntMat::from_columns(cols);
      if (is_isometry(L, m) && m * v == w) out.push_back(Isometry(L, m));
      return;
    }
    for (auto& u : cand[i]) {
      bool ok = true;
      for (std::size_t j = 0; ok && j < i; ++j) ok = L.pair(u, cols[j]) == G(i, j);
      if (!ok) continue;
      cols[i] = u;
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Isometry> stabilizer(const IntLattice& L, const IntVec& v) {
  require(v.size() == L.rank(), ErrorCode::input, "stabilizer: bad vector");
  require(L.square(v) > 0, ErrorCode::input, "stabilizer: vector must have positive square");
  return transporter(L, v, v);
}

}  // namespace hkl
