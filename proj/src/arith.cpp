#include "hkl/arith.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace hkl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::input: return "input";
    case ErrorCode::contract: return "contract";
    case ErrorCode::non_reflective: return "non-reflective vector";
    case ErrorCode::inconclusive: return "inconclusive";
    case ErrorCode::unbounded_enumeration: return "unbounded enumeration";
    case ErrorCode::unavailable: return "unavailable";
    case ErrorCode::parse: return "parse";
    case ErrorCode::validation: return "validation";
  }
  return "unknown";
}

IntVec make_vec(std::initializer_list<long> xs) {
  IntVec v;
  v.reserve(xs.size());
  for (long x : xs) v.emplace_back(x);
  return v;
}

Int bilinear(const IntMat& gram, const IntVec& x, const IntVec& y) {
  const std::size_t n = gram.rows();
  require(x.size() == n && y.size() == n, ErrorCode::input,
          "pairing: vector length does not match lattice rank");
  Int s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    Int row = 0;
    for (std::size_t j = 0; j < n; ++j) row += gram(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}

Rat bilinear(const IntMat& gram, const RatVec& x, const RatVec& y) {
  const std::size_t n = gram.rows();
  require(x.size() == n && y.size() == n, ErrorCode::input,
          "pairing: vector length does not match lattice rank");
  Rat s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += x[i] * Rat(gram(i, j)) * y[j];
  return s;
}

Int dot(const IntVec& a, const IntVec& b) {
  require(a.size() == b.size(), ErrorCode::input, "dot: dimension mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IntVec add(const IntVec& a, const IntVec& b) {
  require(a.size() == b.size(), ErrorCode::input, "add: dimension mismatch");
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IntVec sub(const IntVec& a, const IntVec& b) {
  require(a.size() == b.size(), ErrorCode::input, "sub: dimension mismatch");
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

IntVec scale(const Int& s, const IntVec& a) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

IntVec neg(const IntVec& a) { return scale(Int(-1), a); }

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

Int content(const IntVec& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

IntVec primitive(const IntVec& v) {
  Int g = content(v);
  require(g != 0, ErrorCode::input, "primitive: zero vector");
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
  return r;
}

IntVec primitive(const RatVec& v) {
  Int l = 1;
  for (const auto& x : v) l = lcm(l, Int(x.get_den()));
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat s = v[i] * Rat(l);
    r[i] = s.get_num();
  }
  return primitive(r);
}

RatVec to_rat(const IntVec& v) { return RatVec(v.begin(), v.end()); }

RatMat to_rat(const IntMat& m) {
  RatMat r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

bool is_integral(const RatMat& m) {
  for (const auto& x : m.data())
    if (x.get_den() != 1) return false;
  return true;
}

bool is_integral(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x.get_den() == 1; });
}

IntMat to_int(const RatMat& m) {
  require(is_integral(m), ErrorCode::contract, "to_int: matrix is not integral");
  IntMat r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).get_num();
  return r;
}

IntVec to_int(const RatVec& v) {
  require(is_integral(v), ErrorCode::contract, "to_int: vector is not integral");
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].get_num();
  return r;
}

Int determinant(const IntMat& m0) {
  require(m0.square(), ErrorCode::input, "determinant of a non-square matrix");
  const std::size_t n = m0.rows();
  if (n == 0) return 1;
  IntMat m = m0;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

RatMat inverse(const RatMat& m0) {
  require(m0.square(), ErrorCode::input, "inverse of a non-square matrix");
  const std::size_t n = m0.rows();
  RatMat a = m0;
  RatMat inv = RatMat::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    require(p < n, ErrorCode::input, "inverse: singular matrix");
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    Rat piv = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      Rat f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

RatMat inverse(const IntMat& m) { return inverse(to_rat(m)); }

std::size_t rank(const IntMat& m0) {
  RatMat a = to_rat(m0);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      Rat f = a(i, c) / a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

namespace {

void swap_rows(IntMat& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IntMat& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row_dst += f * row_src
void axpy_row(IntMat& m, std::size_t dst, std::size_t src, const Int& f) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) += f * m(src, j);
}
void axpy_col(IntMat& m, std::size_t dst, std::size_t src, const Int& f) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) += f * m(i, src);
}

}  // namespace

SmithForm smith_normal_form(const IntMat& a0) {
  IntMat a = a0;
  IntMat u = IntMat::identity(a.rows());
  IntMat v = IntMat::identity(a.cols());
  const std::size_t steps = std::min(a.rows(), a.cols());
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // smallest non-zero entry of the trailing block becomes the pivot
      std::size_t pi = a.rows(), pj = a.cols();
      for (std::size_t i = t; i < a.rows(); ++i)
        for (std::size_t j = t; j < a.cols(); ++j)
          if (a(i, j) != 0 && (pi == a.rows() || abs(a(i, j)) < abs(a(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == a.rows()) return {u, a, v};
      swap_rows(a, t, pi);
      swap_rows(u, t, pi);
      swap_cols(a, t, pj);
      swap_cols(v, t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < a.rows(); ++i) {
        if (a(i, t) == 0) continue;
        Int q = a(i, t) / a(t, t);
        axpy_row(a, i, t, -q);
        axpy_row(u, i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < a.cols(); ++j) {
        if (a(t, j) == 0) continue;
        Int q = a(t, j) / a(t, t);
        axpy_col(a, j, t, -q);
        axpy_col(v, j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      bool divides = true;
      for (std::size_t i = t + 1; i < a.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < a.cols(); ++j)
          if (a(i, j) % a(t, t) != 0) {
            axpy_row(a, t, i, Int(1));
            axpy_row(u, t, i, Int(1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a(t, t) < 0) {
      axpy_row(a, t, t, Int(-2));
      axpy_row(u, t, t, Int(-2));
    }
  }
  return {u, a, v};
}

IntMat hermite_basis(const std::vector<IntVec>& gens, std::size_t n) {
  std::vector<IntVec> rows;
  for (const auto& g : gens) {
    require(g.size() == n, ErrorCode::input, "hermite_basis: generator length mismatch");
    if (!is_zero(g)) rows.push_back(g);
  }
  IntMat h(n, n);
  std::size_t r = 0;
  for (std::size_t c = 0; c < n; ++c) {
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c])))
          best = i;
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        Int q = rows[i][c] / rows[r][c];
        for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[r][j];
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    require(r < rows.size() && rows[r][c] != 0, ErrorCode::input,
            "hermite_basis: generators do not span a full-rank lattice");
    if (rows[r][c] < 0) rows[r] = neg(rows[r]);
    for (std::size_t i = 0; i < r; ++i) {
      Int q = floor_div(rows[i][c], rows[r][c]);
      for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[r][j];
    }
    ++r;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = rows[i][j];
  return h;
}

Int isqrt(const Int& n) {
  require(n >= 0, ErrorCode::input, "isqrt of a negative number");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int floor(const Rat& q) { return floor_div(q.get_num(), q.get_den()); }

Int ceil(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rat mod(const Rat& q, const Rat& m) {
  Rat k = q / m;
  Rat r = q - Rat(floor(k)) * m;
  r.canonicalize();
  return r;
}

bool lex_less(const IntVec& a, const IntVec& b) { return a < b; }

std::string to_string(const IntVec& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ']';
  return os.str();
}

std::string to_string(const Rat& q) { return q.get_str(); }

std::string to_string(const RatVec& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ']';
  return os.str();
}

std::string to_string(const IntMat& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) os << (i ? "," : "") << to_string(m.row(i));
  os << ']';
  return os.str();
}

}  // namespace hkl
