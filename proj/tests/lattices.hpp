#pragma once

#include "hkl/qlattice.hpp"

namespace fx {

using hkl::IntLattice;
using hkl::IntMat;
using hkl::IntVec;
using hkl::make_vec;

inline IntLattice d20() { return IntLattice(IntMat{{6, 2}, {2, -6}}, {"g", "lambda"}); }
inline IntLattice m1() { return IntLattice(IntMat{{6, 2, 0}, {2, -2, 0}, {0, 0, -4}}, {"g", "p", "lambda"}); }
inline IntLattice d546() { return IntLattice(IntMat{{6, 0}, {0, -182}}, {"g", "lambda"}); }
inline IntLattice m1_cubic() {
  return IntLattice(IntMat{{3, 1, 3}, {1, 3, 1}, {3, 1, 7}}, {"eta", "P", "T"}, hkl::LatticeRole::cubic);
}

inline IntMat A() { return IntMat{{3, -2}, {4, -3}}; }
inline IntMat B() { return IntMat{{3, 4}, {-2, -3}}; }
inline IntMat G1() { return IntMat{{5, 2, -4}, {0, -1, 0}, {6, 2, -5}}; }
inline IntMat G2() { return IntMat{{3, 2, -2}, {-2, -1, 2}, {2, 2, -1}}; }
inline IntMat G3() { return IntMat{{1, 0, 0}, {0, 1, 0}, {0, 0, -1}}; }
inline IntMat G4() { return IntMat{{1, 0, 0}, {2, -1, 0}, {0, 0, 1}}; }

inline hkl::RatVec rv(std::initializer_list<long> num, long den) {
  hkl::RatVec r;
  for (long x : num) r.emplace_back(x, den);
  for (auto& x : r) x.canonicalize();
  return r;
}

inline hkl::GluingSubgroup h20() { return hkl::make_gluing(d20(), {rv({1, 2}, 5), rv({1, 1}, 4)}); }
inline hkl::GluingSubgroup hm1() { return hkl::make_gluing(m1(), {rv({3, -1, 0}, 8), rv({0, 0, 1}, 4)}); }

}  // namespace fx
