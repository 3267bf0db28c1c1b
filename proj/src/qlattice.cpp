#include "hkl/qlattice.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace hkl {

std::pair<int, int> signature_of(const IntMat& gram) {
  RatMat a = to_rat(gram);
  const std::size_t n = a.rows();
  int pos = 0, negc = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      // bring a non-zero diagonal entry to k, or create one from an off-diagonal
      std::size_t p = k + 1;
      while (p < n && a(p, p) == 0) ++p;
      if (p < n) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
        for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, p));
      } else {
        std::size_t q = k + 1;
        while (q < n && a(k, q) == 0) ++q;
        if (q == n) continue;  // row k vanishes on the remaining block
        for (std::size_t j = 0; j < n; ++j) a(k, j) += a(q, j);
        for (std::size_t i = 0; i < n; ++i) a(i, k) += a(i, q);
      }
    }
    const Rat piv = a(k, k);
    if (piv > 0) ++pos; else ++negc;
    RatMat b = a;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) b(i, j) = a(i, j) - a(i, k) * a(k, j) / piv;
      b(i, k) = 0;
      b(k, i) = 0;
    }
    a = b;
  }
  return {pos, negc};
}

IntLattice::IntLattice(IntMat gram, std::vector<std::string> basis_names, LatticeRole role)
    : gram_(std::move(gram)), names_(std::move(basis_names)), role_(role) {
  require(gram_.rows() > 0 && gram_.square(), ErrorCode::input, "gram must be a non-empty square matrix");
  require(gram_ == gram_.transpose(), ErrorCode::input, "gram must be symmetric");
  det_ = hkl::determinant(gram_);
  require(det_ != 0, ErrorCode::input, "gram must be nondegenerate");
  if (names_.empty())
    for (std::size_t i = 0; i < rank(); ++i) names_.push_back("e" + std::to_string(i + 1));
  require(names_.size() == rank(), ErrorCode::input, "basis name count must equal the rank");
  std::set<std::string> seen(names_.begin(), names_.end());
  require(seen.size() == names_.size(), ErrorCode::input, "basis names must be distinct");
  if (role_ == LatticeRole::ns)
    require(is_even(), ErrorCode::input, "an NS lattice must be even");
  signature_ = signature_of(gram_);
}

bool IntLattice::is_even() const {
  for (std::size_t i = 0; i < rank(); ++i)
    if (gram_(i, i) % 2 != 0) return false;
  return true;
}

IntVec IntLattice::basis_vector(std::size_t i) const {
  require(i < rank(), ErrorCode::input, "basis index out of range");
  IntVec v(rank(), 0);
  v[i] = 1;
  return v;
}

std::size_t IntLattice::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  require(it != names_.end(), ErrorCode::input, "unknown basis name '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

Int pairing(const IntLattice& L, const IntVec& x, const IntVec& y) { return L.pair(x, y); }

Int divisibility_ns(const IntLattice& L, const IntVec& x) {
  require(x.size() == L.rank(), ErrorCode::input, "divisibility: vector length does not match rank");
  require(!is_zero(x), ErrorCode::input, "divisibility of the zero vector");
  return content(L.dual_coords(x));
}

// ---- discriminant group ----

DiscElement::DiscElement(RatVec c) : coords(std::move(c)) {
  for (auto& x : coords) x = mod(x, Rat(1));
}

bool DiscElement::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const Rat& x) { return x == 0; });
}

DiscElement disc_add(const DiscElement& a, const DiscElement& b) {
  require(a.coords.size() == b.coords.size(), ErrorCode::input, "disc_add: dimension mismatch");
  RatVec r(a.coords.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coords[i] + b.coords[i];
  return DiscElement(r);
}

DiscElement disc_scale(const Int& k, const DiscElement& a) {
  RatVec r(a.coords.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = Rat(k) * a.coords[i];
  return DiscElement(r);
}

DiscElement disc_neg(const DiscElement& a) { return disc_scale(Int(-1), a); }

std::string to_string(const DiscElement& e) { return to_string(e.coords); }

bool in_dual(const IntLattice& L, const RatVec& x) {
  if (x.size() != L.rank()) return false;
  RatVec gx = to_rat(L.gram()) * x;
  return is_integral(gx);
}

Rat disc_q(const IntLattice& L, const DiscElement& x) { return mod(L.pair(x.coords, x.coords), Rat(2)); }

Rat disc_b(const IntLattice& L, const DiscElement& x, const DiscElement& y) {
  return mod(L.pair(x.coords, y.coords), Rat(1));
}

Int disc_order(const DiscElement& x) {
  Int l = 1;
  for (const auto& c : x.coords) l = lcm(l, Int(c.get_den()));
  return l;
}

Int DiscriminantGroup::order() const {
  Int o = 1;
  for (const auto& d : invariant_factors) o *= d;
  return o;
}

Int DiscriminantGroup::exponent() const {
  return invariant_factors.empty() ? Int(1) : invariant_factors.back();
}

DiscriminantGroup smith_decompose(const IntLattice& L) {
  const std::size_t n = L.rank();
  SmithForm s = smith_normal_form(L.gram());
  DiscriminantGroup dg;
  for (std::size_t i = 0; i < n; ++i) {
    const Int d = s.d(i, i);
    require(d != 0, ErrorCode::input, "smith_decompose: degenerate gram");
    if (d == 1) continue;
    RatVec lift(n);
    for (std::size_t k = 0; k < n; ++k) lift[k] = Rat(s.v(k, i), d);
    dg.invariant_factors.push_back(d);
    dg.generator_lifts.emplace_back(lift);
  }
  const std::size_t m = dg.generator_lifts.size();
  dg.b_values.assign(m, std::vector<Rat>(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (L.is_even()) dg.q_values.push_back(disc_q(L, dg.generator_lifts[i]));
    for (std::size_t j = 0; j < m; ++j)
      dg.b_values[i][j] = disc_b(L, dg.generator_lifts[i], dg.generator_lifts[j]);
  }
  return dg;
}

namespace {

// Index [M : Z^n] of the lattice M = Z^n + sum Z x_j.
Int overlattice_index(std::size_t n, const std::vector<RatVec>& xs) {
  Int den = 1;
  for (const auto& x : xs)
    for (const auto& c : x) den = lcm(den, Int(c.get_den()));
  std::vector<IntVec> gens;
  for (std::size_t i = 0; i < n; ++i) {
    IntVec e(n, 0);
    e[i] = den;
    gens.push_back(e);
  }
  for (const auto& x : xs) {
    IntVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Rat(x[i] * Rat(den)).get_num();
    gens.push_back(v);
  }
  IntMat h = hermite_basis(gens, n);
  Int dn = 1;
  for (std::size_t i = 0; i < n; ++i) dn *= den;
  return dn / abs(determinant(h));
}

}  // namespace

Int subgroup_order(const IntLattice& L, const std::vector<DiscElement>& gens) {
  std::vector<RatVec> xs;
  for (const auto& g : gens) {
    require(in_dual(L, g.coords), ErrorCode::input, "element " + to_string(g) + " is not in the dual lattice");
    xs.push_back(g.coords);
  }
  return overlattice_index(L.rank(), xs);
}

bool in_subgroup(const IntLattice& L, const DiscElement& x, const std::vector<DiscElement>& gens) {
  std::vector<DiscElement> more = gens;
  more.push_back(x);
  return subgroup_order(L, more) == subgroup_order(L, gens);
}

bool is_generating_set(const IntLattice& L, const std::vector<RatVec>& gens) {
  std::vector<DiscElement> es;
  for (const auto& g : gens) {
    if (!in_dual(L, g)) return false;
    es.emplace_back(g);
  }
  return subgroup_order(L, es) == abs(L.determinant());
}

GluingSubgroup make_gluing(const IntLattice& L, const std::vector<RatVec>& gens) {
  GluingSubgroup h;
  for (const auto& g : gens) {
    require(in_dual(L, g), ErrorCode::input, "gluing generator " + to_string(g) + " is not in the dual lattice");
    h.generators.emplace_back(g);
  }
  h.order = subgroup_order(L, h.generators);
  return h;
}

DiscElement DiscAction::apply(const DiscElement& x) const { return DiscElement(to_rat(matrix) * x.coords); }

bool is_isometry(const IntLattice& L, const IntMat& m) {
  if (m.rows() != L.rank() || m.cols() != L.rank()) return false;
  return m.transpose() * L.gram() * m == L.gram();
}

DiscAction disc_action(const IntLattice& L, const IntMat& phi) {
  require(is_isometry(L, phi), ErrorCode::contract, "disc_action: matrix is not an isometry");
  return DiscAction{phi};
}

std::string_view to_string(PmId v) {
  switch (v) {
    case PmId::plus: return "+Id";
    case PmId::minus: return "-Id";
    case PmId::neither: return "neither";
  }
  return "?";
}

PmId subgroup_pm_id(const IntLattice& L, const IntMat& phi, const GluingSubgroup& H) {
  DiscAction act = disc_action(L, phi);
  bool plus = true, minus = true;
  for (const auto& h : H.generators) {
    require(in_dual(L, h.coords), ErrorCode::input, "gluing generator is not in the dual lattice");
    DiscElement img = act.apply(h);
    if (!(img == h)) plus = false;
    if (!(img == disc_neg(h))) minus = false;
  }
  if (plus) return PmId::plus;
  if (minus) return PmId::minus;
  return PmId::neither;
}

Int sublattice_disc(const IntLattice& L, const std::vector<IntVec>& vectors) {
  const std::size_t k = vectors.size();
  require(k > 0, ErrorCode::input, "sublattice_disc: empty vector list");
  IntMat g(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) g(i, j) = L.pair(vectors[i], vectors[j]);
  IntMat span(k, L.rank());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < L.rank(); ++j) span(i, j) = vectors[i][j];
  require(rank(span) == k, ErrorCode::input, "sublattice_disc: vectors are linearly dependent");
  return determinant(g);
}

// ---- enumeration ----

namespace {

struct FpForm {
  std::size_t n;
  RatMat q;  // q(i,i) diagonal coefficients, q(i,j) j > i the shifts
};

FpForm fincke_pohst_form(const IntMat& qi) {
  const std::size_t n = qi.rows();
  RatMat q = to_rat(qi);
  for (std::size_t i = 0; i < n; ++i) {
    require(q(i, i) > 0, ErrorCode::input, "enumerate_ellipsoid: form is not positive definite");
    for (std::size_t j = i + 1; j < n; ++j) {
      q(j, i) = q(i, j);
      q(i, j) = q(i, j) / q(i, i);
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) q(k, l) -= q(k, i) * q(i, l);
  }
  return {n, q};
}

// Integer candidates x with q*(x + c)^2 <= t, t >= 0.
std::vector<Int> coordinate_range(const Rat& qd, const Rat& c, const Rat& t) {
  std::vector<Int> xs;
  if (t < 0) return xs;
  Rat s2 = t / qd;
  Int s = isqrt(ceil(s2)) + 1;
  Int lo = floor(-c) - s, hi = ceil(-c) + s;
  for (Int x = lo; x <= hi; ++x) {
    Rat d = Rat(x) + c;
    if (d * d <= s2) xs.push_back(x);
  }
  return xs;
}

void descend(const FpForm& f, std::size_t level, IntVec& x, const Rat& remaining, std::vector<IntVec>& out) {
  Rat c = 0;
  for (std::size_t j = level + 1; j < f.n; ++j) c += f.q(level, j) * Rat(x[j]);
  for (const Int& xi : coordinate_range(f.q(level, level), c, remaining)) {
    x[level] = xi;
    Rat d = Rat(xi) + c;
    Rat rest = remaining - f.q(level, level) * d * d;
    if (level == 0) {
      if (!is_zero(x)) out.push_back(x);
    } else {
      descend(f, level - 1, x, rest, out);
    }
  }
  x[level] = 0;
}

}  // namespace

void enumerate_ellipsoid(const IntMat& q, const Int& bound,
                         const std::function<void(const IntVec&, const Int&)>& visit, unsigned jobs) {
  require(q.square() && q.rows() > 0, ErrorCode::input, "enumerate_ellipsoid: bad form");
  if (bound < 0) return;
  const FpForm f = fincke_pohst_form(q);
  const std::size_t top = f.n - 1;
  const std::vector<Int> outer = coordinate_range(f.q(top, top), Rat(0), Rat(bound));

  std::vector<std::vector<IntVec>> found(outer.size());
  auto work = [&](std::size_t k) {
    IntVec x(f.n, 0);
    x[top] = outer[k];
    Rat rest = Rat(bound) - f.q(top, top) * Rat(outer[k]) * Rat(outer[k]);
    if (top == 0) {
      if (!is_zero(x)) found[k].push_back(x);
    } else {
      descend(f, top - 1, x, rest, found[k]);
    }
  };
  if (jobs <= 1 || outer.size() < 2) {
    for (std::size_t k = 0; k < outer.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, outer.size()); ++t)
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < outer.size();) work(k);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& bucket : found)
    for (const auto& v : bucket) visit(v, bilinear(q, v, v));
}

std::vector<IntVec> short_vectors(const IntMat& q, const Int& bound, unsigned jobs) {
  std::vector<IntVec> out;
  enumerate_ellipsoid(q, bound, [&](const IntVec& v, const Int&) { out.push_back(v); }, jobs);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IntVec> vectors_near(const IntLattice& L, const IntVec& x, const Int& max_pair,
                                 const Int& min_square, const Int& max_square, unsigned jobs) {
  const Int xx = L.square(x);
  require(xx > 0, ErrorCode::input, "vectors_near: centre must have positive square");
  require(L.signature().first == 1, ErrorCode::input, "vectors_near: lattice must be hyperbolic");
  const std::size_t n = L.rank();
  const IntVec gx = L.dual_coords(x);
  IntMat q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = 2 * gx[i] * gx[j] - xx * L.gram()(i, j);
  // 2 (v.x)^2 - x^2 v^2 <= 2 B^2 - x^2 min_square
  const Int bound = 2 * max_pair * max_pair - xx * min_square;
  std::vector<IntVec> out;
  std::mutex mu;
  enumerate_ellipsoid(q, bound, [&](const IntVec& v, const Int&) {
    Int s = L.square(v);
    if (s < min_square || s > max_square) return;
    if (abs(dot(gx, v)) > max_pair) return;
    std::lock_guard<std::mutex> lock(mu);
    out.push_back(v);
  }, jobs);
  std::sort(out.begin(), out.end());
  return out;
}

SearchLimits& search_limits() {
  static SearchLimits limits;
  return limits;
}

}  // namespace hkl
