#pragma once

// Brute-force box search in machine integers, independent of the library's
// enumeration code.

#include <map>
#include <set>
#include <vector>

#include "hkl/qlattice.hpp"

namespace oracle {

using V = std::vector<long>;

struct Box {
  std::vector<std::vector<long>> g;
  std::map<long, std::vector<V>> by_square;  // only the requested squares

  Box(const hkl::IntLattice& L, long B, const std::set<long>& squares) {
    const std::size_t n = L.rank();
    g.assign(n, std::vector<long>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g[i][j] = L.gram()(i, j).get_si();
    V c(n, -B);
    while (true) {
      long s = pair(c, c);
      if (squares.count(s)) by_square[s].push_back(c);
      std::size_t k = 0;
      while (k < n && c[k] == B) c[k++] = -B;
      if (k == n) break;
      ++c[k];
    }
  }

  long pair(const V& x, const V& y) const {
    long s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * g[i][j] * y[j];
    return s;
  }
  const std::vector<V>& with_square(long s) const {
    static const std::vector<V> none;
    auto it = by_square.find(s);
    return it == by_square.end() ? none : it->second;
  }
};

inline long gcd_l(long a, long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline bool primitive(const V& v) {
  long d = 0;
  for (long x : v) d = gcd_l(d, x);
  return d == 1;
}

// gcd of v.e_i and of v.h for gluing lifts h = num / den (integral numerators)
inline long ambient_div(const Box& b, const V& v, const std::vector<std::pair<V, long>>& lifts) {
  long d = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    V e(v.size(), 0);
    e[i] = 1;
    d = gcd_l(d, b.pair(v, e));
  }
  for (auto& [num, den] : lifts) d = gcd_l(d, b.pair(v, num) / den);
  return d;
}

inline hkl::IntVec to_int(const V& v) {
  hkl::IntVec r;
  for (long x : v) r.emplace_back(x);
  return r;
}

inline std::vector<hkl::IntVec> sorted(std::vector<hkl::IntVec> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace oracle
