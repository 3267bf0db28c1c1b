#include <random>

#include "doctest.h"
#include "lattices.hpp"

using namespace hkl;

namespace {

// int64 reference for small Gram forms
long gram_ll(const IntMat& g, std::size_t i, std::size_t j) { return g(i, j).get_si(); }

long pair_ll(const IntMat& g, const std::vector<long>& x, const std::vector<long>& y) {
  long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * gram_ll(g, i, j) * y[j];
  return s;
}

IntVec to_vec(const std::vector<long>& v) {
  IntVec r;
  for (auto x : v) r.emplace_back(static_cast<long>(x));
  return r;
}

}  // namespace

TEST_CASE("pairing on the fixture lattices") {
  auto L = fx::d20();
  CHECK(pairing(L, make_vec({1, 0}), make_vec({1, 0})) == 6);
  auto M = fx::d546();
  CHECK(M.square(make_vec({11, -2})) == -2);
  CHECK(M.square(make_vec({11, 2})) == -2);
  CHECK(pairing(L, make_vec({3, 7}), make_vec({0, 0})) == 0);
  CHECK_THROWS_AS(pairing(L, make_vec({1, 0, 0}), make_vec({1, 0})), Error);
}

TEST_CASE("signature and determinant") {
  CHECK(fx::d20().signature() == std::pair<int, int>{1, 1});
  CHECK(fx::m1().signature() == std::pair<int, int>{1, 2});
  CHECK(fx::d546().determinant() == -1092);
  CHECK(fx::m1().determinant() == 64);
  CHECK(signature_of(IntMat{{0, 1}, {1, 0}}) == std::pair<int, int>{1, 1});
  CHECK(signature_of(IntMat{{0, 1, 0}, {1, 0, 0}, {0, 0, -2}}) == std::pair<int, int>{1, 2});
  CHECK_THROWS_AS(IntLattice(IntMat{{1, 2}, {2, 4}}, {"a", "b"}, LatticeRole::cubic), Error);
  CHECK_THROWS_AS(IntLattice(IntMat{{2, 1}, {0, 2}}, {"a", "b"}), Error);
  CHECK_THROWS_AS(IntLattice(IntMat{{3, 1}, {1, 3}}, {"a", "b"}), Error);  // odd NS lattice
}

TEST_CASE("divisibility_ns") {
  CHECK(divisibility_ns(fx::d20(), make_vec({1, 0})) == 2);
  CHECK(divisibility_ns(fx::d20(), make_vec({1, 2})) == 10);
  CHECK(divisibility_ns(fx::m1(), make_vec({0, 0, 1})) == 4);
  CHECK_THROWS_AS(divisibility_ns(fx::d20(), make_vec({0, 0})), Error);

  std::mt19937 rng(7);
  std::uniform_int_distribution<long> d(-30, 30);
  for (const auto& L : {fx::d20(), fx::m1(), fx::d546()}) {
    for (int t = 0; t < 200; ++t) {
      IntVec x(L.rank()), y(L.rank());
      for (auto& c : x) c = d(rng);
      for (auto& c : y) c = d(rng);
      if (is_zero(x)) continue;
      CHECK(L.pair(x, y) % divisibility_ns(L, x) == 0);
      CHECK(L.pair(x, y) == L.pair(y, x));
      IntVec z = add(x, scale(Int(3), y));
      CHECK(L.pair(z, y) == L.pair(x, y) + 3 * L.pair(y, y));
    }
  }
}

TEST_CASE("smith_decompose d20") {
  auto L = fx::d20();
  auto D = smith_decompose(L);
  CHECK(D.invariant_factors == std::vector<Int>{2, 20});
  CHECK(D.order() == 40);
  // Z/10 + Z/4 has the same invariant factors as Z/2 + Z/20
  CHECK(is_generating_set(L, {fx::rv({1, 2}, 10), fx::rv({1, 1}, 4)}));
  CHECK(disc_order(DiscElement(fx::rv({1, 2}, 10))) == 10);
  CHECK(disc_order(DiscElement(fx::rv({1, 1}, 4))) == 4);
  CHECK_FALSE(is_generating_set(L, {fx::rv({1, 2}, 10)}));
  for (std::size_t i = 0; i < D.generator_lifts.size(); ++i) {
    CHECK(disc_order(D.generator_lifts[i]) == D.invariant_factors[i]);
    CHECK(in_dual(L, D.generator_lifts[i].coords));
  }
}

TEST_CASE("smith_decompose m1 and d546") {
  auto L = fx::m1();
  auto D = smith_decompose(L);
  CHECK(D.invariant_factors == std::vector<Int>{2, 4, 8});
  CHECK(is_generating_set(L, {fx::rv({1, 0, 0}, 2), fx::rv({3, -1, 0}, 8), fx::rv({0, 0, 1}, 4)}));
  CHECK(smith_decompose(fx::d546()).order() == 1092);
}

TEST_CASE("finite quadratic form is consistent with the bilinear form") {
  for (const auto& L : {fx::d20(), fx::m1(), fx::d546()}) {
    auto D = smith_decompose(L);
    for (std::size_t i = 0; i < D.generator_lifts.size(); ++i)
      for (std::size_t j = 0; j < D.generator_lifts.size(); ++j) {
        auto x = D.generator_lifts[i], y = D.generator_lifts[j];
        Rat lhs = mod(disc_q(L, disc_add(x, y)) - disc_q(L, x) - disc_q(L, y), Rat(2));
        CHECK(lhs == mod(2 * disc_b(L, x, y), Rat(2)));
      }
  }
}

TEST_CASE("smith_decompose order equals |det| on random forms") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> d(-9, 9);
  int tested = 0;
  while (tested < 60) {
    IntMat g(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j) g(i, j) = g(j, i) = (i == j ? 2 * d(rng) : d(rng));
    if (determinant(g) == 0) continue;
    IntLattice L(g, {"a", "b", "c"});
    auto D = smith_decompose(L);
    CHECK(D.order() == abs(L.determinant()));
    for (std::size_t i = 0; i + 1 < D.invariant_factors.size(); ++i)
      CHECK(D.invariant_factors[i + 1] % D.invariant_factors[i] == 0);
    ++tested;
  }
}

TEST_CASE("smith normal form certificate") {
  IntMat a{{6, 2, 0}, {2, -2, 0}, {0, 0, -4}};
  auto s = smith_normal_form(a);
  CHECK(s.u * a * s.v == s.d);
  CHECK(abs(determinant(s.u)) == 1);
  CHECK(abs(determinant(s.v)) == 1);
}

TEST_CASE("disc_action on H for d20") {
  auto L = fx::d20();
  auto H = make_gluing(L, {fx::rv({1, 2}, 5), fx::rv({1, 1}, 4)});
  CHECK(H.order == 20);
  CHECK(subgroup_pm_id(L, fx::A() * fx::B(), H) == PmId::minus);
  CHECK(subgroup_pm_id(L, fx::A(), H) == PmId::neither);
  CHECK(subgroup_pm_id(L, fx::B(), H) == PmId::neither);
  CHECK(subgroup_pm_id(L, IntMat::identity(2), H) == PmId::plus);
  CHECK(subgroup_pm_id(L, -IntMat::identity(2), H) == PmId::minus);
  CHECK(subgroup_pm_id(L, fx::A(), GluingSubgroup{}) == PmId::plus);
  CHECK_THROWS_AS(make_gluing(L, {fx::rv({1, 2}, 7)}), Error);
  CHECK_THROWS_AS(disc_action(L, IntMat{{1, 1}, {0, 1}}), Error);
}

TEST_CASE("disc_action on H for m1") {
  auto L = fx::m1();
  auto H = make_gluing(L, {fx::rv({3, -1, 0}, 8), fx::rv({0, 0, 1}, 4)});
  CHECK(subgroup_pm_id(L, fx::G1(), H) != PmId::neither);
  CHECK(subgroup_pm_id(L, fx::G2(), H) == PmId::neither);
  CHECK(subgroup_pm_id(L, fx::G2() * fx::G3(), H) == PmId::neither);
}

TEST_CASE("disc_action is a homomorphism") {
  auto check = [](const IntLattice& L, const std::vector<IntMat>& gens) {
    auto D = smith_decompose(L);
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    for (int t = 0; t < 30; ++t) {
      IntMat phi = IntMat::identity(L.rank()), psi = phi;
      for (int k = 0; k < 4; ++k) phi = phi * gens[pick(rng)];
      for (int k = 0; k < 4; ++k) psi = psi * gens[pick(rng)];
      auto a = disc_action(L, phi), b = disc_action(L, psi), ab = disc_action(L, phi * psi);
      for (const auto& x : D.generator_lifts) CHECK(ab.apply(x) == a.apply(b.apply(x)));
    }
  };
  check(fx::d20(), {fx::A(), fx::B(), -fx::A()});
  check(fx::m1(), {fx::G1(), fx::G2(), fx::G3(), fx::G4()});
}

TEST_CASE("sublattice_disc on the cubic lattice") {
  auto L = fx::m1_cubic();
  auto eta = make_vec({1, 0, 0});
  CHECK(sublattice_disc(L, {eta, make_vec({0, 1, 0})}) == 8);
  CHECK(sublattice_disc(L, {eta, make_vec({0, 0, 1})}) == 12);
  CHECK(sublattice_disc(L, {eta, make_vec({0, 1, 1})}) == 20);
  CHECK_THROWS_AS(sublattice_disc(L, {eta, make_vec({2, 0, 0})}), Error);
  for (long m = -10; m <= 10; ++m)
    for (long n = -10; n <= 10; ++n) {
      if (m == 0 && n == 0) continue;
      // 2x2 minor oracle: det [[3, d.eta], [d.eta, d^2]]
      long de = m * 1 + n * 3, dd = 3 * m * m + 2 * m * n + 7 * n * n;
      CHECK(sublattice_disc(L, {eta, make_vec({0, m, n})}) == 3 * dd - de * de);
      CHECK(sublattice_disc(L, {eta, make_vec({0, m, n})}) == 4 * (2 * m * m + 3 * n * n));
    }
}

TEST_CASE("ellipsoid enumeration matches a box search") {
  IntMat q{{4, 1, 0}, {1, 3, -1}, {0, -1, 5}};
  for (long bound : {0L, 3L, 12L, 40L}) {
    std::vector<IntVec> expect;
    for (long a = -8; a <= 8; ++a)
      for (long b = -8; b <= 8; ++b)
        for (long c = -8; c <= 8; ++c) {
          std::vector<long> v{a, b, c};
          if (a == 0 && b == 0 && c == 0) continue;
          if (pair_ll(q, v, v) <= bound) expect.push_back(to_vec(v));
        }
    std::sort(expect.begin(), expect.end());
    CHECK(short_vectors(q, Int(bound)) == expect);
    CHECK(short_vectors(q, Int(bound), 4) == expect);
  }
}

TEST_CASE("vectors_near matches a box search") {
  auto L = fx::m1();
  IntVec x = make_vec({1, 0, 0});
  auto got = vectors_near(L, x, Int(20), Int(-10), Int(-2));
  std::vector<IntVec> expect;
  for (long a = -30; a <= 30; ++a)
    for (long b = -30; b <= 30; ++b)
      for (long c = -30; c <= 30; ++c) {
        std::vector<long> v{a, b, c};
        long s = pair_ll(L.gram(), v, v);
        long px = 6 * a + 2 * b;
        if (s >= -10 && s <= -2 && std::labs(px) <= 20) expect.push_back(to_vec(v));
      }
  std::sort(expect.begin(), expect.end());
  CHECK(got == expect);
}
