#include "hkl/cone.hpp"

#include <algorithm>
#include <set>

namespace hkl {

namespace {

IntVec cross(const IntVec& a, const IntVec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

bool satisfies(const std::vector<IntVec>& covectors, const IntVec& r) {
  for (const auto& u : covectors)
    if (dot(u, r) < 0) return false;
  return true;
}

}  // namespace

ConeRays cone_rays(const IntLattice& L, const std::vector<IntVec>& normals) {
  const std::size_t n = L.rank();
  require(n == 2 || n == 3, ErrorCode::input, "cone_rays: rank must be 2 or 3");
  std::vector<IntVec> cov;
  for (const auto& v : normals) {
    require(v.size() == n, ErrorCode::input, "cone_rays: normal has wrong length");
    if (!is_zero(v)) cov.push_back(L.dual_coords(v));
  }
  ConeRays out;
  if (cov.empty()) return out;
  IntMat span(cov.size(), n);
  for (std::size_t i = 0; i < cov.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) span(i, j) = cov[i][j];
  out.pointed = rank(span) == n;
  if (!out.pointed) return out;

  std::set<IntVec> found;
  auto consider = [&](const IntVec& r) {
    if (is_zero(r)) return;
    IntVec p = primitive(r);
    if (satisfies(cov, p)) found.insert(p);
    IntVec q = neg(p);
    if (satisfies(cov, q)) found.insert(q);
  };
  if (n == 2) {
    for (const auto& u : cov) consider({-u[1], u[0]});
  } else {
    for (std::size_t i = 0; i < cov.size(); ++i)
      for (std::size_t j = i + 1; j < cov.size(); ++j) consider(cross(cov[i], cov[j]));
  }
  // a ray and its negative both feasible means the cone is not pointed
  for (const auto& r : found)
    if (found.count(neg(r))) {
      out.pointed = false;
      return out;
    }
  out.rays.assign(found.begin(), found.end());
  return out;
}

std::vector<IntVec> facet_normals(const IntLattice& L, const std::vector<IntVec>& normals,
                                  const std::vector<IntVec>& rays) {
  const std::size_t need = L.rank() - 1;
  std::set<IntVec> out;
  for (const auto& v : normals) {
    if (is_zero(v)) continue;
    std::size_t on = 0;
    for (const auto& r : rays)
      if (L.pair(v, r) == 0) ++on;
    if (on >= need) out.insert(primitive(v));
  }
  return {out.begin(), out.end()};
}

bool strictly_inside(const IntLattice& L, const std::vector<IntVec>& normals, const IntVec& x) {
  for (const auto& v : normals)
    if (L.pair(v, x) <= 0) return false;
  return true;
}

IntVec interior_point(const std::vector<IntVec>& rays) {
  require(!rays.empty(), ErrorCode::input, "interior_point: no rays");
  IntVec s(rays.front().size(), 0);
  for (const auto& r : rays) s = add(s, r);
  return primitive(s);
}

}  // namespace hkl
