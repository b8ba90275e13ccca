#pragma once
// Quivers, representations over F_p, and the linear algebra of morphism spaces.
// Cycles are allowed here; complexes live on extended quivers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sdh/ffmod.hpp"

namespace sdh {

inline constexpr long long kScanBudget = 1LL << 20;

using DimVector = std::vector<int>;

struct Quiver {
  int n = 0;
  std::vector<std::pair<int, int>> arrows;  // 0-indexed (source, target)

  Quiver() = default;
  Quiver(int vertices, std::vector<std::pair<int, int>> arr) : n(vertices), arrows(std::move(arr)) {
    if (n < 0) throw ShapeError("negative vertex count");
    for (auto [s, t] : arrows)
      if (s < 0 || t < 0 || s >= n || t >= n) throw IndexError("arrow endpoint out of range");
  }

  /// Build from 1-indexed arrows; rejects cycles.
  static Quiver from_one_indexed(int vertices, const std::vector<std::pair<int, int>>& arr) {
    std::vector<std::pair<int, int>> z;
    for (auto [s, t] : arr) z.emplace_back(s - 1, t - 1);
    Quiver q(vertices, z);
    if (!q.is_acyclic()) throw InputError("quiver has an oriented cycle");
    return q;
  }

  static Quiver linear_a(int n) {
    std::vector<std::pair<int, int>> arr;
    for (int i = 0; i + 1 < n; ++i) arr.emplace_back(i, i + 1);
    return Quiver(n, arr);
  }

  int num_arrows() const { return static_cast<int>(arrows.size()); }

  bool is_acyclic() const { return topo_order().size() == static_cast<size_t>(n); }

  std::vector<int> topo_order() const {
    std::vector<int> indeg(n, 0), order;
    for (auto [s, t] : arrows) ++indeg[t];
    std::vector<int> stack;
    for (int i = n - 1; i >= 0; --i)
      if (!indeg[i]) stack.push_back(i);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (auto [s, t] : arrows)
        if (s == v && --indeg[t] == 0) stack.push_back(t);
    }
    return order;
  }

  bool is_sink(int i) const {
    for (auto [s, t] : arrows)
      if (s == i) return false;
    return true;
  }

  friend bool operator==(const Quiver& a, const Quiver& b) { return a.n == b.n && a.arrows == b.arrows; }
  friend bool operator!=(const Quiver& a, const Quiver& b) { return !(a == b); }
};

struct Rep;

/// A quiver together with a prime field; owns the iso-class registry.
class Category {
 public:
  struct Registry {
    std::mutex mu;
    std::map<DimVector, std::vector<std::shared_ptr<const Rep>>> classes;
    std::map<std::string, std::shared_ptr<const Rep>> memo;
  };

  Category() = default;
  Category(Quiver q, FieldSpec f) : impl_(std::make_shared<Impl>(std::move(q), f)) {}

  const Quiver& quiver() const { return impl_->quiver; }
  const FieldSpec& field() const { return impl_->field; }
  int q() const { return impl_->field.p; }
  int n() const { return impl_->quiver.n; }
  bool valid() const { return static_cast<bool>(impl_); }
  Registry& registry() const { return impl_->registry; }

  /// Categories derived from this one (extended quivers for complexes), built once.
  Category derived(const std::string& tag, const std::function<Quiver()>& make) const {
    std::lock_guard<std::mutex> lock(impl_->derived_mu);
    auto it = impl_->derived.find(tag);
    if (it != impl_->derived.end()) return it->second;
    Category c(make(), impl_->field);
    impl_->derived.emplace(tag, c);
    return c;
  }

  /// Memoised values keyed by strings; used for projectives and resolutions.
  template <class T>
  std::shared_ptr<const T> cached(const std::string& tag, const std::function<T()>& make) const {
    {
      std::lock_guard<std::mutex> lock(impl_->cache_mu);
      auto it = impl_->cache.find(tag);
      if (it != impl_->cache.end()) return std::static_pointer_cast<const T>(it->second);
    }
    auto v = std::make_shared<const T>(make());
    std::lock_guard<std::mutex> lock(impl_->cache_mu);
    impl_->cache.emplace(tag, v);
    return v;
  }

  friend bool operator==(const Category& a, const Category& b) {
    if (a.impl_ == b.impl_) return true;
    if (!a.impl_ || !b.impl_) return false;
    return a.quiver() == b.quiver() && a.field() == b.field();
  }
  friend bool operator!=(const Category& a, const Category& b) { return !(a == b); }

 private:
  struct Impl {
    Impl(Quiver q, FieldSpec f) : quiver(std::move(q)), field(f) {}
    Quiver quiver;
    FieldSpec field;
    mutable Registry registry;
    std::mutex derived_mu;
    std::map<std::string, Category> derived;
    std::mutex cache_mu;
    std::map<std::string, std::shared_ptr<const void>> cache;
  };
  std::shared_ptr<Impl> impl_;
};

struct Rep {
  Category cat;
  DimVector dim;
  std::vector<FpMatrix> maps;  // maps[a] has shape dim[t(a)] x dim[s(a)]

  Rep() = default;
  Rep(Category c, DimVector d, std::vector<FpMatrix> m) : cat(std::move(c)), dim(std::move(d)), maps(std::move(m)) {
    check();
  }

  static Rep zero(const Category& c) { return Rep(c, DimVector(c.n(), 0), zero_maps(c, DimVector(c.n(), 0))); }

  static std::vector<FpMatrix> zero_maps(const Category& c, const DimVector& d) {
    std::vector<FpMatrix> m;
    for (auto [s, t] : c.quiver().arrows) m.emplace_back(d[t], d[s]);
    return m;
  }

  void check() const {
    const Quiver& q = cat.quiver();
    if (static_cast<int>(dim.size()) != q.n) throw ShapeError("dimension vector length mismatch");
    if (static_cast<int>(maps.size()) != q.num_arrows()) throw ShapeError("one matrix per arrow required");
    for (int a = 0; a < q.num_arrows(); ++a) {
      auto [s, t] = q.arrows[a];
      if (maps[a].rows != dim[t] || maps[a].cols != dim[s]) throw ShapeError("arrow matrix shape mismatch");
      for (int x : maps[a].e)
        if (x < 0 || x >= cat.q()) throw ShapeError("matrix entry outside [0,p)");
    }
  }

  int total_dim() const {
    int s = 0;
    for (int d : dim) s += d;
    return s;
  }

  /// Serialisation used for exact-content memoisation and lexicographic comparison.
  std::string content() const {
    std::string s;
    for (int d : dim) s += std::to_string(d) + ",";
    s += "|";
    for (const auto& m : maps)
      for (int x : m.e) s += static_cast<char>('0' + x);
    return s;
  }

  /// dim vector lex, then concatenated matrix entries lex.
  friend bool rep_lex_less(const Rep& a, const Rep& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    for (size_t i = 0; i < a.maps.size(); ++i)
      if (a.maps[i].e != b.maps[i].e) return a.maps[i].e < b.maps[i].e;
    return false;
  }
  friend bool operator==(const Rep& a, const Rep& b) { return a.dim == b.dim && a.maps == b.maps; }
};

struct RepMorphism {
  std::vector<FpMatrix> f;  // f[i]: source_i -> target_i

  friend bool operator==(const RepMorphism& a, const RepMorphism& b) { return a.f == b.f; }
};

inline void require_same(const Category& a, const Category& b) {
  if (a != b) throw CategoryMismatch("representations live over different quivers or fields");
}

inline RepMorphism zero_morphism(const Rep& m, const Rep& n) {
  RepMorphism z;
  for (size_t i = 0; i < m.dim.size(); ++i) z.f.emplace_back(n.dim[i], m.dim[i]);
  return z;
}

inline RepMorphism identity_morphism(const Rep& m) {
  RepMorphism z;
  for (int d : m.dim) z.f.push_back(FpMatrix::identity(d));
  return z;
}

inline RepMorphism compose(const RepMorphism& g, const RepMorphism& f, const FieldSpec& fs) {
  RepMorphism h;
  for (size_t i = 0; i < f.f.size(); ++i) h.f.push_back(mat_mul(g.f[i], f.f[i], fs));
  return h;
}

inline RepMorphism add(const RepMorphism& a, const RepMorphism& b, const FieldSpec& fs) {
  RepMorphism h;
  for (size_t i = 0; i < a.f.size(); ++i) h.f.push_back(mat_add(a.f[i], b.f[i], fs));
  return h;
}

inline RepMorphism scale(const RepMorphism& a, int s, const FieldSpec& fs) {
  RepMorphism h;
  for (const auto& m : a.f) h.f.push_back(mat_scale(m, s, fs));
  return h;
}

inline RepMorphism negate(const RepMorphism& a, const FieldSpec& fs) { return scale(a, -1, fs); }

inline bool is_zero(const RepMorphism& a) {
  for (const auto& m : a.f)
    if (!m.is_zero()) return false;
  return true;
}

inline bool is_morphism(const Rep& m, const Rep& n, const RepMorphism& f) {
  const auto& fs = m.cat.field();
  const Quiver& q = m.cat.quiver();
  for (int a = 0; a < q.num_arrows(); ++a) {
    auto [s, t] = q.arrows[a];
    if (mat_mul(f.f[t], m.maps[a], fs) != mat_mul(n.maps[a], f.f[s], fs)) return false;
  }
  return true;
}

inline bool is_iso_morphism(const RepMorphism& f, const FieldSpec& fs) {
  for (const auto& m : f.f)
    if (!is_invertible(m, fs)) return false;
  return true;
}

/// Variable layout for unknown morphisms M -> N: vertex blocks of row-major entries.
struct HomLayout {
  std::vector<int> offset;
  int total = 0;
  HomLayout(const DimVector& dm, const DimVector& dn) {
    for (size_t i = 0; i < dm.size(); ++i) {
      offset.push_back(total);
      total += dm[i] * dn[i];
    }
  }
};

inline RepMorphism morphism_from_vector(const DimVector& dm, const DimVector& dn, const Vec& v) {
  RepMorphism f;
  size_t k = 0;
  for (size_t i = 0; i < dm.size(); ++i) {
    FpMatrix m(dn[i], dm[i]);
    for (auto& x : m.e) x = v[k++];
    f.f.push_back(std::move(m));
  }
  return f;
}

inline Vec morphism_to_vector(const RepMorphism& f) {
  Vec v;
  for (const auto& m : f.f) v.insert(v.end(), m.e.begin(), m.e.end());
  return v;
}

/// Coefficient matrix of the intertwining system f_t X_a = Y_a f_s.
inline FpMatrix intertwining_system(const Rep& m, const Rep& n) {
  const auto& fs = m.cat.field();
  const Quiver& q = m.cat.quiver();
  HomLayout lay(m.dim, n.dim);
  int eqs = 0;
  for (auto [s, t] : q.arrows) eqs += n.dim[t] * m.dim[s];
  FpMatrix sys(eqs, lay.total);
  int row = 0;
  for (int a = 0; a < q.num_arrows(); ++a) {
    auto [s, t] = q.arrows[a];
    const FpMatrix& x = m.maps[a];  // dim_m[t] x dim_m[s]
    const FpMatrix& y = n.maps[a];  // dim_n[t] x dim_n[s]
    for (int r = 0; r < n.dim[t]; ++r)
      for (int c = 0; c < m.dim[s]; ++c, ++row) {
        // (f_t x)(r,c) = sum_k f_t(r,k) x(k,c)
        for (int k = 0; k < m.dim[t]; ++k)
          if (x(k, c)) {
            int var = lay.offset[t] + r * m.dim[t] + k;
            sys(row, var) = fs.add(sys(row, var), x(k, c));
          }
        // -(y f_s)(r,c) = -sum_k y(r,k) f_s(k,c)
        for (int k = 0; k < n.dim[s]; ++k)
          if (y(r, k)) {
            int var = lay.offset[s] + k * m.dim[s] + c;
            sys(row, var) = fs.sub(sys(row, var), y(r, k));
          }
      }
  }
  return sys;
}

/// Basis of Hom(M, N), echelon-deterministic.
inline std::vector<RepMorphism> hom_basis(const Rep& m, const Rep& n) {
  require_same(m.cat, n.cat);
  std::vector<RepMorphism> out;
  for (const auto& v : kernel_basis(intertwining_system(m, n), m.cat.field()))
    out.push_back(morphism_from_vector(m.dim, n.dim, v));
  return out;
}

inline int hom_dim(const Rep& m, const Rep& n) {
  require_same(m.cat, n.cat);
  HomLayout lay(m.dim, n.dim);
  return lay.total - rank(intertwining_system(m, n), m.cat.field());
}

inline RepMorphism combine(const std::vector<RepMorphism>& basis, const Vec& coeffs, const Rep& m, const Rep& n) {
  const auto& fs = m.cat.field();
  RepMorphism acc = zero_morphism(m, n);
  for (size_t j = 0; j < basis.size(); ++j)
    if (coeffs[j]) acc = add(acc, scale(basis[j], coeffs[j], fs), fs);
  return acc;
}

/// Odometer over F_p^k, most significant coordinate first; stops when fn returns true.
inline bool for_each_vector(int k, int p, const std::function<bool(const Vec&)>& fn) {
  Vec v(k, 0);
  while (true) {
    if (fn(v)) return true;
    int i = k - 1;
    while (i >= 0 && v[i] == p - 1) v[i--] = 0;
    if (i < 0) return false;
    ++v[i];
  }
}

inline long long ipow(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    if (r > (1LL << 40)) return 1LL << 41;
  }
  return r;
}

inline void check_budget(int p, int k, const char* what) {
  if (ipow(p, k) > kScanBudget)
    throw BudgetExceeded(std::string(what) + ": scan of " + std::to_string(p) + "^" + std::to_string(k) +
                         " elements exceeds 2^20");
}

// --- sub and quotient representations ------------------------------------------

struct Embedded {
  Rep rep;
  RepMorphism incl;  // rep -> ambient
};

struct Quotient {
  Rep rep;
  RepMorphism proj;  // ambient -> rep
};

/// Subrepresentation spanned at each vertex by the columns of basis[i] (full column rank).
inline Embedded subrep(const Rep& c, const std::vector<FpMatrix>& basis) {
  const auto& fs = c.cat.field();
  const Quiver& q = c.cat.quiver();
  DimVector d;
  for (const auto& b : basis) d.push_back(b.cols);
  std::vector<FpMatrix> maps;
  for (int a = 0; a < q.num_arrows(); ++a) {
    auto [s, t] = q.arrows[a];
    auto img = mat_mul(c.maps[a], basis[s], fs);
    auto co = coordinates(basis[t], img, fs);
    if (!co) throw NotASubmodule("subspace is not stable under arrow " + std::to_string(a + 1));
    maps.push_back(*co);
  }
  RepMorphism incl;
  incl.f = basis;
  return {Rep(c.cat, d, maps), incl};
}

inline bool is_stable(const Rep& c, const std::vector<FpMatrix>& basis) {
  const auto& fs = c.cat.field();
  const Quiver& q = c.cat.quiver();
  for (int a = 0; a < q.num_arrows(); ++a) {
    auto [s, t] = q.arrows[a];
    if (rank(hstack(basis[t], mat_mul(c.maps[a], basis[s], fs)), fs) != basis[t].cols) return false;
  }
  return true;
}

/// Complement basis: standard vectors outside the pivot columns of the row form of u.
inline FpMatrix complement_basis(const FpMatrix& u, const FieldSpec& fs) {
  int n = u.rows;
  Echelon e = rref(transpose(u), fs);
  std::vector<char> piv(n, 0);
  for (int c : e.pivots) piv[c] = 1;
  std::vector<Vec> cols;
  for (int j = 0; j < n; ++j)
    if (!piv[j]) {
      Vec v(n, 0);
      v[j] = 1;
      cols.push_back(v);
    }
  return FpMatrix::from_columns(cols, n);
}

/// C / U where U is given by column bases per vertex.
inline Quotient quotient(const Rep& c, const std::vector<FpMatrix>& u) {
  const auto& fs = c.cat.field();
  const Quiver& q = c.cat.quiver();
  if (!is_stable(c, u)) throw NotASubmodule("subspace family is not arrow-stable");
  std::vector<FpMatrix> w, proj;
  DimVector d;
  for (int i = 0; i < q.n; ++i) {
    FpMatrix comp = complement_basis(u[i], fs);
    FpMatrix full = hstack(u[i], comp);
    auto inv = inverse(full, fs);
    if (!inv) throw NotASubmodule("subspace basis is rank deficient");
    proj.push_back(submatrix(*inv, u[i].cols, 0, comp.cols, c.dim[i]));
    w.push_back(comp);
    d.push_back(comp.cols);
  }
  std::vector<FpMatrix> maps;
  for (int a = 0; a < q.num_arrows(); ++a) {
    auto [s, t] = q.arrows[a];
    maps.push_back(mat_mul(proj[t], mat_mul(c.maps[a], w[s], fs), fs));
  }
  RepMorphism pr;
  pr.f = proj;
  return {Rep(c.cat, d, maps), pr};
}

inline Embedded kernel(const Rep& m, const RepMorphism& f) {
  const auto& fs = m.cat.field();
  std::vector<FpMatrix> basis;
  for (size_t i = 0; i < f.f.size(); ++i)
    basis.push_back(FpMatrix::from_columns(kernel_basis(f.f[i], fs), m.dim[i]));
  return subrep(m, basis);
}

inline Embedded image(const Rep& n, const RepMorphism& f) {
  const auto& fs = n.cat.field();
  std::vector<FpMatrix> basis;
  for (const auto& m : f.f) basis.push_back(column_space(m, fs));
  return subrep(n, basis);
}

inline Quotient cokernel(const Rep& n, const RepMorphism& f) {
  const auto& fs = n.cat.field();
  std::vector<FpMatrix> basis;
  for (const auto& m : f.f) basis.push_back(column_space(m, fs));
  return quotient(n, basis);
}

inline Rep direct_sum(const Rep& a, const Rep& b) {
  require_same(a.cat, b.cat);
  DimVector d;
  for (size_t i = 0; i < a.dim.size(); ++i) d.push_back(a.dim[i] + b.dim[i]);
  std::vector<FpMatrix> maps;
  for (size_t k = 0; k < a.maps.size(); ++k) maps.push_back(block_diag(a.maps[k], b.maps[k]));
  return Rep(a.cat, d, maps);
}

inline Rep direct_sum(const std::vector<Rep>& parts, const Category& cat) {
  Rep acc = Rep::zero(cat);
  for (const auto& p : parts) acc = direct_sum(acc, p);
  return acc;
}

/// Conjugate by a change of basis g (g_i invertible): maps become g_t X g_s^{-1}.
inline Rep base_change(const Rep& m, const std::vector<FpMatrix>& g) {
  const auto& fs = m.cat.field();
  const Quiver& q = m.cat.quiver();
  std::vector<FpMatrix> maps;
  for (int a = 0; a < q.num_arrows(); ++a) {
    auto [s, t] = q.arrows[a];
    auto gi = inverse(g[s], fs);
    if (!gi) throw ShapeError("base change is not invertible");
    maps.push_back(mat_mul(g[t], mat_mul(m.maps[a], *gi, fs), fs));
  }
  return Rep(m.cat, m.dim, maps);
}

// --- isomorphism and Krull-Schmidt --------------------------------------------------

inline std::vector<int> rank_profile(const Rep& m) {
  std::vector<int> r;
  for (const auto& x : m.maps) r.push_back(rank(x, m.cat.field()));
  return r;
}

inline FpMatrix mat_pow(const FpMatrix& a, int k, const FieldSpec& fs) {
  FpMatrix r = FpMatrix::identity(a.rows), b = a;
  while (k) {
    if (k & 1) r = mat_mul(r, b, fs);
    b = mat_mul(b, b, fs);
    k >>= 1;
  }
  return r;
}

/// Fitting splitting M = im f^N (+) ker f^N; nullopt when f is nilpotent or invertible.
inline std::optional<std::pair<Embedded, Embedded>> fitting_split(const Rep& m, const RepMorphism& f) {
  const auto& fs = m.cat.field();
  int nmax = 0;
  for (int d : m.dim) nmax = std::max(nmax, d);
  RepMorphism g;
  for (const auto& x : f.f) g.f.push_back(mat_pow(x, std::max(nmax, 1), fs));
  int im = 0, ker = 0;
  for (size_t i = 0; i < g.f.size(); ++i) {
    int r = rank(g.f[i], fs);
    im += r;
    ker += m.dim[i] - r;
  }
  if (im == 0 || ker == 0) return std::nullopt;
  return std::make_pair(image(m, g), kernel(m, g));
}

/// Indecomposable summands with inclusions, by idempotent search in End(M).
inline std::vector<Embedded> decompose_embedded(const Rep& m) {
  if (m.total_dim() == 0) return {};
  auto basis = hom_basis(m, m);
  const auto& fs = m.cat.field();
  std::optional<std::pair<Embedded, Embedded>> split;
  for (const auto& b : basis)
    if ((split = fitting_split(m, b))) break;
  if (!split) {
    for (size_t i = 0; i < basis.size() && !split; ++i)
      for (size_t j = i + 1; j < basis.size() && !split; ++j)
        split = fitting_split(m, add(basis[i], basis[j], fs));
  }
  if (!split) {
    int h = static_cast<int>(basis.size());
    check_budget(fs.p, h, "decompose");
    for_each_vector(h, fs.p, [&](const Vec& c) {
      split = fitting_split(m, combine(basis, c, m, m));
      return split.has_value();
    });
  }
  if (!split) return {Embedded{m, identity_morphism(m)}};
  std::vector<Embedded> out;
  for (const Embedded* part : {&split->first, &split->second})
    for (auto& e : decompose_embedded(part->rep)) out.push_back({e.rep, compose(part->incl, e.incl, fs)});
  return out;
}

inline std::vector<Rep> decompose_rep(const Rep& m) {
  std::vector<Rep> out;
  for (auto& e : decompose_embedded(m)) out.push_back(std::move(e.rep));
  return out;
}

inline std::optional<RepMorphism> find_isomorphism(const Rep& m, const Rep& n);

/// Pairs up indecomposable summands and glues their isomorphisms; valid by Krull-Schmidt.
inline std::optional<RepMorphism> iso_from_summands(const Rep& m, const Rep& n) {
  auto a = decompose_embedded(m), b = decompose_embedded(n);
  if (a.size() != b.size()) return std::nullopt;
  if (a.size() == 1) throw BudgetExceeded("is_isomorphic: hom space between indecomposables exceeds 2^20");
  const auto& fs = m.cat.field();
  std::vector<int> match(a.size(), -1);
  std::vector<char> used(b.size(), 0);
  std::vector<RepMorphism> phi(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size() && match[i] < 0; ++j) {
      if (used[j]) continue;
      if (auto f = find_isomorphism(a[i].rep, b[j].rep)) {
        match[i] = static_cast<int>(j);
        used[j] = 1;
        phi[i] = *f;
      }
    }
    if (match[i] < 0) return std::nullopt;
  }
  RepMorphism iso;
  for (size_t v = 0; v < m.dim.size(); ++v) {
    FpMatrix src(m.dim[v], 0), dst(n.dim[v], 0);
    for (size_t i = 0; i < a.size(); ++i) {
      src = hstack(src, a[i].incl.f[v]);
      dst = hstack(dst, mat_mul(b[match[i]].incl.f[v], phi[i].f[v], fs));
    }
    auto inv = inverse(src, fs);
    if (!inv) throw ShapeError("summands do not span");
    iso.f.push_back(mat_mul(dst, *inv, fs));
  }
  return iso;
}

/// Search Hom(M,N) for an element invertible at every vertex: basis elements, seeded
/// random combinations, then the exhaustive scan or a summand-wise comparison.
inline std::optional<RepMorphism> find_isomorphism(const Rep& m, const Rep& n) {
  require_same(m.cat, n.cat);
  if (m.dim != n.dim) return std::nullopt;
  if (m.total_dim() == 0) return zero_morphism(m, n);
  if (rank_profile(m) != rank_profile(n)) return std::nullopt;
  auto basis = hom_basis(m, n);
  int h = static_cast<int>(basis.size());
  if (h != hom_dim(m, m) || h != hom_dim(n, n) || h != hom_dim(n, m)) return std::nullopt;
  const auto& fs = m.cat.field();
  for (const auto& b : basis)
    if (is_iso_morphism(b, fs)) return b;
  std::mt19937 rng(0x5eed);
  Vec c(h);
  for (int t = 0; t < 256; ++t) {
    for (auto& x : c) x = static_cast<int>(rng() % fs.p);
    RepMorphism f = combine(basis, c, m, n);
    if (is_iso_morphism(f, fs)) return f;
  }
  if (ipow(fs.p, h) > kScanBudget) return iso_from_summands(m, n);
  std::optional<RepMorphism> found;
  for_each_vector(h, fs.p, [&](const Vec& v) {
    RepMorphism f = combine(basis, v, m, n);
    if (is_iso_morphism(f, fs)) {
      found = f;
      return true;
    }
    return false;
  });
  return found;
}

inline bool is_isomorphic(const Rep& m, const Rep& n) { return find_isomorphism(m, n).has_value(); }

// --- subspace enumeration -------------------------------------------------------------

/// All k-dimensional subspaces of F_p^n as column bases (transpose of rref row bases).
inline std::vector<FpMatrix> subspaces(int n, int k, const FieldSpec& fs) {
  std::vector<FpMatrix> out;
  if (k < 0 || k > n) return out;
  std::vector<int> piv(k);
  std::function<void(int, int)> choose = [&](int idx, int start) {
    if (idx == k) {
      std::vector<std::pair<int, int>> free;
      for (int r = 0; r < k; ++r)
        for (int c = piv[r] + 1; c < n; ++c)
          if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(r, c);
      int nf = static_cast<int>(free.size());
      for_each_vector(nf, fs.p, [&](const Vec& v) {
        FpMatrix rows(k, n);
        for (int r = 0; r < k; ++r) rows(r, piv[r]) = 1;
        for (int j = 0; j < nf; ++j) rows(free[j].first, free[j].second) = v[j];
        out.push_back(transpose(rows));
        return false;
      });
      return;
    }
    for (int c = start; c < n; ++c) {
      piv[idx] = c;
      choose(idx + 1, c + 1);
    }
  };
  choose(0, 0);
  return out;
}

inline long long gaussian_binomial(int n, int k, int p) {
  if (k < 0 || k > n) return 0;
  long double num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= (std::pow(static_cast<long double>(p), n - i) - 1);
    den *= (std::pow(static_cast<long double>(p), i + 1) - 1);
  }
  return static_cast<long long>(num / den + 0.5);
}

/// Every arrow-stable family (U_i) with dim U_i = d_i, by backtracking over vertices.
inline std::vector<std::vector<FpMatrix>> stable_subspace_families(const Rep& c, const DimVector& d) {
  const auto& fs = c.cat.field();
  const Quiver& q = c.cat.quiver();
  int n = q.n;
  long double est = 1;
  for (int i = 0; i < n; ++i) {
    if (d[i] < 0 || d[i] > c.dim[i]) return {};
    est *= gaussian_binomial(c.dim[i], d[i], fs.p);
  }
  if (est > static_cast<long double>(kScanBudget) * 4)
    throw BudgetExceeded("submodule enumeration exceeds budget");
  std::vector<std::vector<FpMatrix>> cand(n);
  for (int i = 0; i < n; ++i) cand[i] = subspaces(c.dim[i], d[i], fs);
  std::vector<std::vector<FpMatrix>> out;
  std::vector<FpMatrix> cur(n);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (const auto& u : cand[i]) {
      cur[i] = u;
      bool ok = true;
      for (int a = 0; a < q.num_arrows() && ok; ++a) {
        auto [s, t] = q.arrows[a];
        if (std::max(s, t) != i) continue;
        if (rank(hstack(cur[t], mat_mul(c.maps[a], cur[s], fs)), fs) != cur[t].cols) ok = false;
      }
      if (ok) rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace sdh
