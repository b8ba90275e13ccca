#pragma once
// Prime-field arithmetic, dense linear algebra over F_p, and the scalar field Q(sqrt q).

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sdh/errors.hpp"

namespace sdh {

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

struct FieldSpec {
  int p = 2;

  FieldSpec() = default;
  explicit FieldSpec(int prime) : p(prime) {
    if (!is_prime(prime) || prime > 97)
      throw FieldError("field order must be a prime in [2,97], got " + std::to_string(prime));
  }

  int norm(long long x) const {
    long long r = x % p;
    return static_cast<int>(r < 0 ? r + p : r);
  }
  int add(int x, int y) const { return (x + y) % p; }
  int sub(int x, int y) const { return (x - y + p) % p; }
  int mul(int x, int y) const { return (x * y) % p; }
  int neg(int x) const { return x == 0 ? 0 : p - x; }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) { return a.p == b.p; }
  friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return a.p != b.p; }
};

/// Multiplicative inverse mod p via the extended Euclidean algorithm.
inline int field_inverse(int x, const FieldSpec& f) {
  int a = f.norm(x);
  if (a == 0) throw DivisionByZero("inverse of zero in F_" + std::to_string(f.p));
  int t = 0, nt = 1, r = f.p, nr = a;
  while (nr != 0) {
    int qq = r / nr;
    int tmp = t - qq * nt;
    t = nt;
    nt = tmp;
    tmp = r - qq * nr;
    r = nr;
    nr = tmp;
  }
  return f.norm(t);
}

using Vec = std::vector<int>;

struct FpMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> e;  // row-major

  FpMatrix() = default;
  FpMatrix(int r, int c) : rows(r), cols(c), e(static_cast<size_t>(r) * c, 0) {
    if (r < 0 || c < 0) throw ShapeError("negative matrix shape");
  }
  FpMatrix(int r, int c, std::vector<int> entries) : rows(r), cols(c), e(std::move(entries)) {
    if (static_cast<int>(e.size()) != r * c) throw ShapeError("entry count does not match shape");
  }

  static FpMatrix zero(int r, int c) { return FpMatrix(r, c); }
  static FpMatrix identity(int n) {
    FpMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static FpMatrix from_rows(const std::vector<std::vector<int>>& rs, const FieldSpec& f) {
    int r = static_cast<int>(rs.size());
    int c = r ? static_cast<int>(rs[0].size()) : 0;
    FpMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rs[i].size()) != c) throw ShapeError("ragged rows");
      for (int j = 0; j < c; ++j) m(i, j) = f.norm(rs[i][j]);
    }
    return m;
  }
  static FpMatrix from_columns(const std::vector<Vec>& cs, int nrows) {
    FpMatrix m(nrows, static_cast<int>(cs.size()));
    for (int j = 0; j < m.cols; ++j) {
      if (static_cast<int>(cs[j].size()) != nrows) throw ShapeError("column length mismatch");
      for (int i = 0; i < nrows; ++i) m(i, j) = cs[j][i];
    }
    return m;
  }

  int& operator()(int r, int c) { return e[static_cast<size_t>(r) * cols + c]; }
  int operator()(int r, int c) const { return e[static_cast<size_t>(r) * cols + c]; }

  Vec column(int j) const {
    Vec v(rows);
    for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
    return v;
  }
  bool is_zero() const {
    return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
  }

  friend bool operator==(const FpMatrix& a, const FpMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.e == b.e;
  }
  friend bool operator!=(const FpMatrix& a, const FpMatrix& b) { return !(a == b); }
  friend bool operator<(const FpMatrix& a, const FpMatrix& b) {
    if (a.rows != b.rows) return a.rows < b.rows;
    if (a.cols != b.cols) return a.cols < b.cols;
    return a.e < b.e;
  }
};

inline std::ostream& operator<<(std::ostream& os, const FpMatrix& m) {
  os << "[";
  for (int i = 0; i < m.rows; ++i) {
    os << (i ? ";" : "");
    for (int j = 0; j < m.cols; ++j) os << (j ? "," : "") << m(i, j);
  }
  return os << "]";
}

inline FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b, const FieldSpec& f) {
  if (a.cols != b.rows) throw ShapeError("matrix product shape mismatch");
  FpMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      int x = a(i, k);
      if (!x) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) = (c(i, j) + x * b(k, j)) % f.p;
    }
  return c;
}

inline Vec mat_vec(const FpMatrix& a, const Vec& v, const FieldSpec& f) {
  if (a.cols != static_cast<int>(v.size())) throw ShapeError("matrix-vector shape mismatch");
  Vec r(a.rows, 0);
  for (int i = 0; i < a.rows; ++i) {
    int s = 0;
    for (int j = 0; j < a.cols; ++j) s = (s + a(i, j) * v[j]) % f.p;
    r[i] = s;
  }
  return r;
}

inline FpMatrix mat_add(const FpMatrix& a, const FpMatrix& b, const FieldSpec& f) {
  if (a.rows != b.rows || a.cols != b.cols) throw ShapeError("matrix sum shape mismatch");
  FpMatrix c(a.rows, a.cols);
  for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = f.add(a.e[i], b.e[i]);
  return c;
}

inline FpMatrix mat_sub(const FpMatrix& a, const FpMatrix& b, const FieldSpec& f) {
  if (a.rows != b.rows || a.cols != b.cols) throw ShapeError("matrix difference shape mismatch");
  FpMatrix c(a.rows, a.cols);
  for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = f.sub(a.e[i], b.e[i]);
  return c;
}

inline FpMatrix mat_scale(const FpMatrix& a, int s, const FieldSpec& f) {
  FpMatrix c(a.rows, a.cols);
  int k = f.norm(s);
  for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = f.mul(a.e[i], k);
  return c;
}

inline FpMatrix mat_neg(const FpMatrix& a, const FieldSpec& f) { return mat_scale(a, -1, f); }

inline FpMatrix transpose(const FpMatrix& a) {
  FpMatrix t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

inline FpMatrix hstack(const FpMatrix& a, const FpMatrix& b) {
  if (a.rows != b.rows) throw ShapeError("hstack row mismatch");
  FpMatrix c(a.rows, a.cols + b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) c(i, j) = a(i, j);
    for (int j = 0; j < b.cols; ++j) c(i, a.cols + j) = b(i, j);
  }
  return c;
}

inline FpMatrix vstack(const FpMatrix& a, const FpMatrix& b) {
  if (a.cols != b.cols) throw ShapeError("vstack column mismatch");
  FpMatrix c(a.rows + b.rows, a.cols);
  std::copy(a.e.begin(), a.e.end(), c.e.begin());
  std::copy(b.e.begin(), b.e.end(), c.e.begin() + a.e.size());
  return c;
}

/// [[a, b], [c, d]] with the obvious shape checks.
inline FpMatrix block2(const FpMatrix& a, const FpMatrix& b, const FpMatrix& c, const FpMatrix& d) {
  return vstack(hstack(a, b), hstack(c, d));
}

inline FpMatrix block_diag(const FpMatrix& a, const FpMatrix& b) {
  return block2(a, FpMatrix(a.rows, b.cols), FpMatrix(b.rows, a.cols), b);
}

inline FpMatrix submatrix(const FpMatrix& a, int r0, int c0, int nr, int nc) {
  FpMatrix s(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) s(i, j) = a(r0 + i, c0 + j);
  return s;
}

struct Echelon {
  FpMatrix r;               // reduced row echelon form
  std::vector<int> pivots;  // pivot column per nonzero row
};

inline Echelon rref(FpMatrix m, const FieldSpec& f) {
  std::vector<int> piv;
  int row = 0;
  for (int c = 0; c < m.cols && row < m.rows; ++c) {
    int sel = -1;
    for (int i = row; i < m.rows; ++i)
      if (m(i, c)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int j = 0; j < m.cols; ++j) std::swap(m(sel, j), m(row, j));
    int inv = field_inverse(m(row, c), f);
    for (int j = 0; j < m.cols; ++j) m(row, j) = f.mul(m(row, j), inv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == row || !m(i, c)) continue;
      int k = m(i, c);
      for (int j = 0; j < m.cols; ++j) m(i, j) = f.sub(m(i, j), f.mul(k, m(row, j)));
    }
    piv.push_back(c);
    ++row;
  }
  return {std::move(m), std::move(piv)};
}

inline int rank(const FpMatrix& m, const FieldSpec& f) {
  return static_cast<int>(rref(m, f).pivots.size());
}

/// Basis of {v : Mv = 0}: one vector per free column (that column set to 1, other free columns 0).
inline std::vector<Vec> kernel_basis(const FpMatrix& m, const FieldSpec& f) {
  Echelon ech = rref(m, f);
  std::vector<char> is_piv(m.cols, 0);
  for (int c : ech.pivots) is_piv[c] = 1;
  std::vector<Vec> out;
  for (int fc = 0; fc < m.cols; ++fc) {
    if (is_piv[fc]) continue;
    Vec v(m.cols, 0);
    v[fc] = 1;
    for (size_t r = 0; r < ech.pivots.size(); ++r) v[ech.pivots[r]] = f.neg(ech.r(static_cast<int>(r), fc));
    out.push_back(std::move(v));
  }
  return out;
}

/// Some x with Mx = rhs (free variables zero), or nullopt when inconsistent.
inline std::optional<Vec> solve_linear(const FpMatrix& m, const Vec& rhs, const FieldSpec& f) {
  if (static_cast<int>(rhs.size()) != m.rows) throw ShapeError("rhs length does not match row count");
  FpMatrix aug(m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
    aug(i, m.cols) = f.norm(rhs[i]);
  }
  Echelon ech = rref(aug, f);
  if (!ech.pivots.empty() && ech.pivots.back() == m.cols) return std::nullopt;
  Vec x(m.cols, 0);
  for (size_t r = 0; r < ech.pivots.size(); ++r) x[ech.pivots[r]] = ech.r(static_cast<int>(r), m.cols);
  return x;
}

/// Columns of m at its pivot positions: a basis of the column space.
inline FpMatrix column_space(const FpMatrix& m, const FieldSpec& f) {
  Echelon ech = rref(m, f);
  FpMatrix out(m.rows, static_cast<int>(ech.pivots.size()));
  for (int j = 0; j < out.cols; ++j)
    for (int i = 0; i < m.rows; ++i) out(i, j) = m(i, ech.pivots[j]);
  return out;
}

/// Canonical basis (columns) of the span of the columns of m: transpose of the rref of m^T.
inline FpMatrix canonical_span(const FpMatrix& m, const FieldSpec& f) {
  Echelon ech = rref(transpose(m), f);
  int k = static_cast<int>(ech.pivots.size());
  return transpose(submatrix(ech.r, 0, 0, k, m.rows));
}

inline std::optional<FpMatrix> inverse(const FpMatrix& m, const FieldSpec& f) {
  if (m.rows != m.cols) throw ShapeError("inverse of non-square matrix");
  int n = m.rows;
  Echelon ech = rref(hstack(m, FpMatrix::identity(n)), f);
  if (static_cast<int>(ech.pivots.size()) < n || (n > 0 && ech.pivots[n - 1] >= n)) return std::nullopt;
  return submatrix(ech.r, 0, n, n, n);
}

inline bool is_invertible(const FpMatrix& m, const FieldSpec& f) {
  return m.rows == m.cols && rank(m, f) == m.rows;
}

/// Coordinates of the columns of y in the basis given by the columns of b (b has full column rank).
inline std::optional<FpMatrix> coordinates(const FpMatrix& b, const FpMatrix& y, const FieldSpec& f) {
  if (b.rows != y.rows) throw ShapeError("coordinate shape mismatch");
  FpMatrix out(b.cols, y.cols);
  for (int j = 0; j < y.cols; ++j) {
    auto x = solve_linear(b, y.column(j), f);
    if (!x) return std::nullopt;
    for (int i = 0; i < b.cols; ++i) out(i, j) = (*x)[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Q(sqrt q)

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// a + b*sqrt(q) with rational a, b. A scalar with b == 0 carries q == 0 and mixes with any q.
class CoeffScalar {
 public:
  CoeffScalar() = default;
  CoeffScalar(long long x) : a_(x) {}  // NOLINT(google-explicit-constructor)
  CoeffScalar(const Rational& x) : a_(x) {}  // NOLINT(google-explicit-constructor)
  CoeffScalar(const Rational& a, const Rational& b, int q) : a_(a), b_(b), q_(q) {
    if (b_ != 0 && !is_prime(q)) throw FieldError("sqrt(q) requires prime q");
    canon();
  }

  static CoeffScalar sqrt_q(int q) { return CoeffScalar(0, 1, q); }

  /// v^k with v = sqrt(q).
  static CoeffScalar v_power(int q, long long k) {
    long long h = k >= 0 ? k / 2 : -((-k + 1) / 2);  // floor(k/2)
    Rational base = 1;
    Rational qq = q;
    for (long long i = 0; i < (h >= 0 ? h : -h); ++i) base *= qq;
    if (h < 0) base = 1 / base;
    if (k - 2 * h == 1) return CoeffScalar(0, base, q);
    return CoeffScalar(base);
  }

  /// q^(num/den) for den in {1, 2}; equals v^(2m).
  static CoeffScalar q_power(int q, long long num, long long den = 1) {
    if (den == 1) return v_power(q, 2 * num);
    if (den == 2) return v_power(q, num);
    if (den == -1) return v_power(q, -2 * num);
    if (den == -2) return v_power(q, -num);
    throw ShapeError("q_power accepts only integer or half-integer exponents");
  }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  int q() const { return q_; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }

  CoeffScalar conjugate() const { return CoeffScalar(a_, -b_, q_ ? q_ : 2); }

  CoeffScalar& operator+=(const CoeffScalar& o) {
    int q = merge_q(o);
    a_ += o.a_;
    b_ += o.b_;
    q_ = q;
    canon();
    return *this;
  }
  CoeffScalar& operator-=(const CoeffScalar& o) {
    int q = merge_q(o);
    a_ -= o.a_;
    b_ -= o.b_;
    q_ = q;
    canon();
    return *this;
  }
  CoeffScalar& operator*=(const CoeffScalar& o) {
    int q = merge_q(o);
    Rational na = a_ * o.a_;
    if (b_ != 0 && o.b_ != 0) na += b_ * o.b_ * q;
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
    q_ = q;
    canon();
    return *this;
  }
  CoeffScalar& operator/=(const CoeffScalar& o) { return *this *= o.inverse(); }

  CoeffScalar inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero scalar");
    if (b_ == 0) return CoeffScalar(Rational(1) / a_);
    Rational n = a_ * a_ - b_ * b_ * q_;
    return CoeffScalar(a_ / n, -b_ / n, q_);
  }

  CoeffScalar pow(long long k) const {
    CoeffScalar base = k >= 0 ? *this : inverse();
    unsigned long long n = k >= 0 ? k : -k;
    CoeffScalar r(1);
    while (n) {
      if (n & 1) r *= base;
      base *= base;
      n >>= 1;
    }
    return r;
  }

  friend CoeffScalar operator+(CoeffScalar x, const CoeffScalar& y) { return x += y; }
  friend CoeffScalar operator-(CoeffScalar x, const CoeffScalar& y) { return x -= y; }
  friend CoeffScalar operator*(CoeffScalar x, const CoeffScalar& y) { return x *= y; }
  friend CoeffScalar operator/(CoeffScalar x, const CoeffScalar& y) { return x /= y; }
  friend CoeffScalar operator-(const CoeffScalar& x) { return CoeffScalar(-x.a_, -x.b_, x.q_ ? x.q_ : 2); }

  friend bool operator==(const CoeffScalar& x, const CoeffScalar& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.q_ == y.q_;
  }
  friend bool operator!=(const CoeffScalar& x, const CoeffScalar& y) { return !(x == y); }

  std::string str() const {
    std::ostringstream os;
    if (b_ == 0) {
      os << a_;
      return os.str();
    }
    if (a_ != 0) os << a_ << (b_ > 0 ? "+" : "");
    if (b_ == -1)
      os << "-";
    else if (b_ != 1)
      os << b_ << "*";
    os << "sqrt(" << q_ << ")";
    return os.str();
  }

 private:
  int merge_q(const CoeffScalar& o) const {
    if (q_ && o.q_ && q_ != o.q_) throw FieldError("mixing scalars over different sqrt(q)");
    return q_ ? q_ : o.q_;
  }
  void canon() {
    if (b_ == 0) q_ = 0;
  }

  Rational a_ = 0;
  Rational b_ = 0;
  int q_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const CoeffScalar& s) { return os << s.str(); }

}  // namespace sdh
