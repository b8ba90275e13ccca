#pragma once
// Z-graded semi-derived Hall algebra of rep_k(Q).
//
// Complexes live in a degree window inside [-8, 8]. A basis element is T_x <> [C_key], where x assigns a
// dimension vector to each torus slot s (the class of the contractible complex A -> A in degrees s, s+1)
// and C_key is the sum over m of the minimal resolution of H^m, placed in degrees m-1, m.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sdh/hallring.hpp"
#include "sdh/lincomb.hpp"
#include "sdh/report.hpp"
#include "sdh/sdh2.hpp"

namespace sdh {

inline constexpr int kWindowLo = -8;
inline constexpr int kWindowHi = 8;

inline void check_window(int lo, int hi) {
  if (lo > hi) throw ShapeError("empty degree window");
  if (lo < kWindowLo || hi > kWindowHi)
    throw WindowExceeded("degrees [" + std::to_string(lo) + "," + std::to_string(hi) + "] leave [-8,8]");
}

struct CxB {
  int lo = 0, hi = 0;
  std::vector<Rep> comp;          // comp[k] sits in degree lo + k
  std::vector<RepMorphism> diff;  // diff[k]: comp[k] -> comp[k + 1]

  const Category& cat() const { return comp.front().cat; }
  int width() const { return hi - lo + 1; }
  bool has(int m) const { return m >= lo && m <= hi; }
  Rep at(int m) const { return has(m) ? comp[m - lo] : Rep::zero(cat()); }
  /// d^m: X^m -> X^{m+1}
  RepMorphism d(int m) const {
    if (m >= lo && m < hi) return diff[m - lo];
    return zero_morphism(at(m), at(m + 1));
  }
  int total_dim() const {
    int s = 0;
    for (const auto& r : comp) s += r.total_dim();
    return s;
  }
};

/// Chain map data, one module map per degree starting at lo.
struct CxBMorphism {
  int lo = 0;
  std::vector<RepMorphism> s;
};

inline void check_cxb(const CxB& x) {
  if (static_cast<int>(x.comp.size()) != x.width() || static_cast<int>(x.diff.size()) != x.width() - 1)
    throw ShapeError("component count does not match the window");
  const auto& fs = x.cat().field();
  for (const auto& r : x.comp) require_same(r.cat, x.cat());
  for (int m = x.lo; m < x.hi; ++m)
    if (!is_morphism(x.at(m), x.at(m + 1), x.d(m))) throw ShapeError("differential is not a morphism");
  for (int m = x.lo; m + 1 < x.hi; ++m)
    if (!is_zero(compose(x.d(m + 1), x.d(m), fs))) throw SignConventionBroken("differential does not square to zero");
}

inline CxB make_cxb(int lo, std::vector<Rep> comp, std::vector<RepMorphism> diff) {
  CxB x{lo, lo + static_cast<int>(comp.size()) - 1, std::move(comp), std::move(diff)};
  check_window(x.lo, x.hi);
  check_cxb(x);
  return x;
}

inline CxB zero_cxb(const Category& c) { return CxB{0, 0, {Rep::zero(c)}, {}}; }

/// Same complex viewed in a larger window.
inline CxB pad(const CxB& x, int lo, int hi) {
  lo = std::min(lo, x.lo);
  hi = std::max(hi, x.hi);
  CxB y{lo, hi, {}, {}};
  for (int m = lo; m <= hi; ++m) y.comp.push_back(x.at(m));
  for (int m = lo; m < hi; ++m) y.diff.push_back(x.d(m));
  return y;
}

inline CxB stalk_b(const Rep& a, int m) { return CxB{m, m, {a}, {}}; }

/// A in degrees m and m+1 with the identity differential.
inline CxB v_complex(const Rep& a, int m) { return CxB{m, m + 1, {a, a}, {identity_morphism(a)}}; }

/// P1 -> P0 in degrees m-1, m: homology A in degree m.
inline CxB resolution_b(const Rep& a, int m) {
  auto r = min_proj_resolution(a);
  return CxB{m - 1, m, {r.p1, r.p0}, {r.incl}};
}

inline CxB direct_sum(const CxB& x, const CxB& y) {
  int lo = std::min(x.lo, y.lo), hi = std::max(x.hi, y.hi);
  CxB s{lo, hi, {}, {}};
  for (int m = lo; m <= hi; ++m) s.comp.push_back(direct_sum(x.at(m), y.at(m)));
  for (int m = lo; m < hi; ++m) s.diff.push_back(block_morphism(x.d(m), y.d(m)));
  return s;
}

inline CxB direct_sum(const std::vector<CxB>& parts, const Category& c) {
  CxB acc = zero_cxb(c);
  bool first = true;
  for (const auto& x : parts) {
    acc = first ? x : direct_sum(acc, x);
    first = false;
  }
  return acc;
}

/// Sigma^p: (Sigma^p X)^i = X^{i+p}, differential multiplied by (-1)^p.
inline CxB shift_b(const CxB& x, int p) {
  const auto& fs = x.cat().field();
  CxB y{x.lo - p, x.hi - p, x.comp, {}};
  for (const auto& d : x.diff) y.diff.push_back(p % 2 ? negate(d, fs) : d);
  return y;
}

/// Components per degree, zero entries dropped.
inline std::map<int, DimVector> grade_b(const CxB& x) {
  std::map<int, DimVector> g;
  for (int m = x.lo; m <= x.hi; ++m)
    if (!dim_is_zero(x.at(m).dim)) g[m] = x.at(m).dim;
  return g;
}

inline bool has_projective_components(const CxB& x) {
  for (const auto& r : x.comp)
    if (!is_projective(r)) return false;
  return true;
}

inline std::string cxb_dims(const CxB& x) {
  std::string s;
  for (int m = x.lo; m <= x.hi; ++m) s += (s.empty() ? "" : " ") + std::to_string(m) + ":" + dim_str(x.at(m).dim);
  return "{" + s + "}";
}

// --- representation encoding -----------------------------------------------------------------

/// Vertex (i, lo+k) is i + k*n; arrows are the Q-arrows degree by degree, then d^{lo+k}_i.
inline Category cxb_category(const Category& base, int width) {
  return base.derived("zb" + std::to_string(width), [&] {
    const Quiver& q = base.quiver();
    int n = q.n;
    std::vector<std::pair<int, int>> arr;
    for (int k = 0; k < width; ++k)
      for (auto [s, t] : q.arrows) arr.emplace_back(s + k * n, t + k * n);
    for (int k = 0; k + 1 < width; ++k)
      for (int i = 0; i < n; ++i) arr.emplace_back(i + k * n, i + (k + 1) * n);
    return Quiver(n * width, arr);
  });
}

inline Rep to_rep(const CxB& x) {
  DimVector d;
  std::vector<FpMatrix> maps;
  for (const auto& r : x.comp) {
    d.insert(d.end(), r.dim.begin(), r.dim.end());
    maps.insert(maps.end(), r.maps.begin(), r.maps.end());
  }
  for (const auto& f : x.diff) maps.insert(maps.end(), f.f.begin(), f.f.end());
  return Rep(cxb_category(x.cat(), x.width()), d, maps);
}

inline CxB cxb_from_rep(const Rep& r, const Category& base, int lo) {
  int n = base.n(), a = base.quiver().num_arrows();
  int w = static_cast<int>(r.dim.size()) / n;
  CxB x{lo, lo + w - 1, {}, {}};
  for (int k = 0; k < w; ++k) {
    DimVector d(r.dim.begin() + k * n, r.dim.begin() + (k + 1) * n);
    std::vector<FpMatrix> m(r.maps.begin() + k * a, r.maps.begin() + (k + 1) * a);
    x.comp.emplace_back(base, d, m);
  }
  for (int k = 0; k + 1 < w; ++k) {
    RepMorphism f;
    f.f.assign(r.maps.begin() + w * a + k * n, r.maps.begin() + w * a + (k + 1) * n);
    x.diff.push_back(f);
  }
  return x;
}

inline RepMorphism to_ext(const CxBMorphism& f) {
  RepMorphism g;
  for (const auto& s : f.s) g.f.insert(g.f.end(), s.f.begin(), s.f.end());
  return g;
}

inline CxBMorphism from_ext(const RepMorphism& g, int n, int lo) {
  CxBMorphism f{lo, {}};
  for (size_t k = 0; k * n < g.f.size(); ++k) {
    RepMorphism s;
    s.f.assign(g.f.begin() + k * n, g.f.begin() + (k + 1) * n);
    f.s.push_back(s);
  }
  return f;
}

inline RepMorphism morphism_at(const CxBMorphism& f, int i, const Rep& src, const Rep& dst) {
  int k = i - f.lo;
  if (k >= 0 && k < static_cast<int>(f.s.size())) return f.s[k];
  return zero_morphism(src, dst);
}

inline CxB random_base_change(std::mt19937& rng, const CxB& x) {
  Rep r = to_rep(x);
  const auto& fs = r.cat.field();
  std::vector<FpMatrix> g;
  for (int d : r.dim)
    while (true) {
      FpMatrix m(d, d);
      for (auto& e : m.e) e = static_cast<int>(rng() % fs.p);
      if (is_invertible(m, fs)) {
        g.push_back(m);
        break;
      }
    }
  return cxb_from_rep(base_change(r, g), x.cat(), x.lo);
}

inline bool is_isomorphic(const CxB& x, const CxB& y) {
  int lo = std::min(x.lo, y.lo), hi = std::max(x.hi, y.hi);
  return is_isomorphic(to_rep(pad(x, lo, hi)), to_rep(pad(y, lo, hi)));
}

// --- chain maps and homotopy ----------------------------------------------------------------

inline bool is_chain_map(const CxB& l, const CxB& m, const CxBMorphism& f) {
  int lo = std::min(l.lo, m.lo), hi = std::max(l.hi, m.hi);
  const auto& fs = l.cat().field();
  for (int i = lo; i <= hi; ++i) {
    auto fi = morphism_at(f, i, l.at(i), m.at(i));
    if (!is_morphism(l.at(i), m.at(i), fi)) return false;
    auto fj = morphism_at(f, i + 1, l.at(i + 1), m.at(i + 1));
    if (compose(m.d(i), fi, fs) != compose(fj, l.d(i), fs)) return false;
  }
  return true;
}

inline std::vector<CxBMorphism> chain_maps_basis(const CxB& l, const CxB& m) {
  require_same(l.cat(), m.cat());
  int lo = std::min(l.lo, m.lo), hi = std::max(l.hi, m.hi);
  std::vector<CxBMorphism> out;
  for (const auto& g : hom_basis(to_rep(pad(l, lo, hi)), to_rep(pad(m, lo, hi))))
    out.push_back(from_ext(g, l.cat().n(), lo));
  return out;
}

inline int chain_maps_dim(const CxB& l, const CxB& m) {
  require_same(l.cat(), m.cat());
  int lo = std::min(l.lo, m.lo), hi = std::max(l.hi, m.hi);
  return hom_dim(to_rep(pad(l, lo, hi)), to_rep(pad(m, lo, hi)));
}

/// Coordinate vectors (in the padded hom space) spanning the null-homotopic chain maps L -> N.
inline std::vector<Vec> homotopy_vectors(const CxB& l, const CxB& n, int lo, int hi) {
  const auto& fs = l.cat().field();
  std::vector<Vec> out;
  for (int i = lo; i <= hi; ++i)
    for (const auto& h : hom_basis(l.at(i), n.at(i - 1))) {
      CxBMorphism f{lo, {}};
      for (int j = lo; j <= hi; ++j) {
        RepMorphism s = zero_morphism(l.at(j), n.at(j));
        if (j == i) s = compose(n.d(i - 1), h, fs);
        if (j == i - 1) s = compose(h, l.d(i - 1), fs);
        f.s.push_back(s);
      }
      out.push_back(morphism_to_vector(to_ext(f)));
    }
  return out;
}

/// Chain maps L -> N spanning a complement of the null-homotopic ones.
inline std::vector<CxBMorphism> homotopy_class_generators(const CxB& l, const CxB& n) {
  require_same(l.cat(), n.cat());
  const auto& fs = l.cat().field();
  int lo = std::min(l.lo, n.lo), hi = std::max(l.hi, n.hi);
  Rep rl = to_rep(pad(l, lo, hi)), rn = to_rep(pad(n, lo, hi));
  int amb = ambient_dim(rl, rn);
  FpMatrix span = FpMatrix::from_columns(homotopy_vectors(l, n, lo, hi), amb);
  int rk = rank(span, fs);
  std::vector<CxBMorphism> out;
  for (const auto& g : hom_basis(rl, rn)) {
    FpMatrix trial = hstack(span, FpMatrix::from_columns({morphism_to_vector(g)}, amb));
    int r2 = rank(trial, fs);
    if (r2 > rk) {
      span = trial;
      rk = r2;
      out.push_back(from_ext(g, l.cat().n(), lo));
    }
  }
  return out;
}

/// dim Hom_K(L, N).
inline int homotopy_hom_dim(const CxB& l, const CxB& n) {
  const auto& fs = l.cat().field();
  int lo = std::min(l.lo, n.lo), hi = std::max(l.hi, n.hi);
  Rep rl = to_rep(pad(l, lo, hi)), rn = to_rep(pad(n, lo, hi));
  int null = rank(FpMatrix::from_columns(homotopy_vectors(l, n, lo, hi), ambient_dim(rl, rn)), fs);
  return hom_dim(rl, rn) - null;
}

/// E(f) for f: L -> Sigma M: degree i is M^i (+) L^i; contains M with quotient L.
inline CxB middle_term(const CxB& l, const CxB& m, const CxBMorphism& f) {
  const auto& fs = l.cat().field();
  int lo = std::min(l.lo, m.lo), hi = std::max(l.hi, m.hi);
  CxB e{lo, hi, {}, {}};
  for (int i = lo; i <= hi; ++i) e.comp.push_back(direct_sum(m.at(i), l.at(i)));
  for (int i = lo; i < hi; ++i) {
    auto dm = m.d(i), dl = l.d(i);
    auto fi = morphism_at(f, i, l.at(i), m.at(i + 1));
    RepMorphism r;
    for (size_t v = 0; v < dm.f.size(); ++v)
      r.f.push_back(block2(dm.f[v], fi.f[v], FpMatrix(dl.f[v].rows, dm.f[v].cols), dl.f[v]));
    e.diff.push_back(r);
  }
  for (int i = lo; i + 1 < hi; ++i)
    if (!is_zero(compose(e.d(i + 1), e.d(i), fs)))
      throw SignConventionBroken("middle term differential does not square to zero");
  return e;
}

struct ExtClassB {
  CxBMorphism f;
  CxB middle;
};

/// Every conflation M >-> E ->> L splits degreewise: L has projective components, or each
/// degree has Ext^1(L^i, M^i) = 0.
inline bool degreewise_split(const CxB& l, const CxB& m) {
  if (has_projective_components(l)) return true;
  for (int i = std::max(l.lo, m.lo); i <= std::min(l.hi, m.hi); ++i)
    if (ext1_dim_resolution(l.at(i), m.at(i)) != 0) return false;
  return true;
}

/// One chain map per homotopy class L -> Sigma M, with its middle term.
inline std::vector<ExtClassB> ext1_classes(const CxB& l, const CxB& m) {
  require_same(l.cat(), m.cat());
  if (!degreewise_split(l, m)) throw PreconditionError("extensions need not split degreewise");
  CxB sm = shift_b(m, 1);
  auto gens = homotopy_class_generators(l, sm);
  int k = static_cast<int>(gens.size());
  const auto& fs = l.cat().field();
  check_budget(fs.p, k, "ext1_classes");
  int lo = std::min(l.lo, sm.lo), hi = std::max(l.hi, sm.hi);
  Rep rl = to_rep(pad(l, lo, hi)), rs = to_rep(pad(sm, lo, hi));
  std::vector<RepMorphism> ext_gens;
  for (const auto& g : gens) ext_gens.push_back(to_ext(g));
  std::vector<ExtClassB> out;
  for_each_vector(k, fs.p, [&](const Vec& c) {
    auto f = from_ext(combine(ext_gens, c, rl, rs), l.cat().n(), lo);
    out.push_back({f, middle_term(l, m, f)});
    return false;
  });
  return out;
}

// --- homology and truncations -------------------------------------------------------------------

struct HomologyB {
  int lo = 0;
  std::vector<Rep> h;
  std::vector<Embedded> z;
  std::vector<Quotient> q;
};

inline HomologyB homology_data(const CxB& x) {
  const auto& fs = x.cat().field();
  HomologyB out;
  out.lo = x.lo;
  for (int m = x.lo; m <= x.hi; ++m) {
    Embedded z = kernel(x.at(m), x.d(m));
    auto din = x.d(m - 1);
    std::vector<FpMatrix> b;
    for (size_t v = 0; v < din.f.size(); ++v) {
      auto co = coordinates(z.incl.f[v], column_space(din.f[v], fs), fs);
      if (!co) throw SignConventionBroken("boundaries are not cycles");
      b.push_back(*co);
    }
    Quotient q = quotient(z.rep, b);
    out.h.push_back(q.rep);
    out.z.push_back(z);
    out.q.push_back(q);
  }
  return out;
}

inline bool is_acyclic(const CxB& x) {
  for (const auto& h : homology_data(x).h)
    if (h.total_dim() != 0) return false;
  return true;
}

/// Brutal truncation: components in degrees >= m.
inline CxB sigma_geq(const CxB& x, int m) {
  int lo = std::max(x.lo, m);
  if (lo > x.hi) return zero_cxb(x.cat());
  CxB y{lo, x.hi, {}, {}};
  for (int i = lo; i <= x.hi; ++i) y.comp.push_back(x.at(i));
  for (int i = lo; i < x.hi; ++i) y.diff.push_back(x.d(i));
  return y;
}

/// Brutal truncation: components in degrees < m.
inline CxB sigma_lt(const CxB& x, int m) {
  int hi = std::min(x.hi, m - 1);
  if (hi < x.lo) return zero_cxb(x.cat());
  CxB y{x.lo, hi, {}, {}};
  for (int i = x.lo; i <= hi; ++i) y.comp.push_back(x.at(i));
  for (int i = x.lo; i < hi; ++i) y.diff.push_back(x.d(i));
  return y;
}

/// Intelligent truncation ... -> X^{m-1} -> Z^m: homology in degrees <= m.
inline CxB tau_leq(const CxB& x, int m) {
  if (m >= x.hi) return x;
  if (m < x.lo) return zero_cxb(x.cat());
  const auto& fs = x.cat().field();
  CxB y = sigma_lt(x, m);
  Embedded z = kernel(x.at(m), x.d(m));
  if (m == x.lo) return CxB{m, m, {z.rep}, {}};
  RepMorphism into;
  auto dm1 = x.d(m - 1);
  for (size_t v = 0; v < dm1.f.size(); ++v) {
    auto co = coordinates(z.incl.f[v], dm1.f[v], fs);
    if (!co) throw SignConventionBroken("boundaries are not cycles");
    into.f.push_back(*co);
  }
  y.hi = m;
  y.comp.push_back(z.rep);
  y.diff.push_back(into);
  return y;
}

/// Intelligent truncation X^m / B^m -> X^{m+1} -> ...: homology in degrees >= m.
inline CxB tau_geq(const CxB& x, int m) {
  if (m <= x.lo) return x;
  if (m > x.hi) return zero_cxb(x.cat());
  const auto& fs = x.cat().field();
  auto din = x.d(m - 1);
  std::vector<FpMatrix> b;
  for (const auto& f : din.f) b.push_back(column_space(f, fs));
  Quotient q = quotient(x.at(m), b);
  CxB y{m, x.hi, {q.rep}, {}};
  for (int i = m + 1; i <= x.hi; ++i) y.comp.push_back(x.at(i));
  if (m < x.hi) {
    // d^m factors through the quotient: solve g q = d^m
    RepMorphism g;
    auto dm = x.d(m);
    for (size_t v = 0; v < dm.f.size(); ++v) {
      auto sol = coordinates(transpose(q.proj.f[v]), transpose(dm.f[v]), fs);
      if (!sol) throw SignConventionBroken("differential does not vanish on boundaries");
      g.f.push_back(transpose(*sol));
    }
    y.diff.push_back(g);
    for (int i = m + 1; i < x.hi; ++i) y.diff.push_back(x.d(i));
  }
  return y;
}

// --- keys ------------------------------------------------------------------------------------

/// Homology per degree; zero entries are dropped.
struct QisKeyZ {
  Category cat;
  std::map<int, IsoClassKey> h;

  friend bool operator==(const QisKeyZ& a, const QisKeyZ& b) { return a.h == b.h; }
  friend bool operator!=(const QisKeyZ& a, const QisKeyZ& b) { return !(a == b); }
  friend bool operator<(const QisKeyZ& a, const QisKeyZ& b) { return a.h < b.h; }
};

using TorusEltZ = std::map<int, DimVector>;

inline TorusEltZ tz_normalize(TorusEltZ t) {
  for (auto it = t.begin(); it != t.end();) it = dim_is_zero(it->second) ? t.erase(it) : std::next(it);
  return t;
}

inline TorusEltZ tz_add(const TorusEltZ& a, const TorusEltZ& b) {
  TorusEltZ s = a;
  for (const auto& [m, d] : b) s[m] = s.count(m) ? dim_add(s[m], d) : d;
  return tz_normalize(s);
}

inline TorusEltZ tz_neg(const TorusEltZ& a) {
  TorusEltZ s;
  for (const auto& [m, d] : a) s[m] = dim_neg(d);
  return s;
}

inline TorusEltZ tz_single(int m, const DimVector& d) { return tz_normalize({{m, d}}); }

struct SdhzKey {
  TorusEltZ torus;
  QisKeyZ key;

  friend bool operator==(const SdhzKey& a, const SdhzKey& b) { return a.torus == b.torus && a.key == b.key; }
  friend bool operator<(const SdhzKey& a, const SdhzKey& b) {
    if (a.torus != b.torus) return a.torus < b.torus;
    return a.key < b.key;
  }
};

inline std::string torusz_label(const TorusEltZ& t) {
  std::string s;
  for (const auto& [m, d] : t) s += "v" + std::to_string(m) + dim_str(d);
  return s;
}

inline std::string keyz_label(const QisKeyZ& k) {
  std::string s;
  for (const auto& [m, h] : k.h) s += (s.empty() ? "" : ",") + std::to_string(m) + ":" + key_label(h);
  return "[" + s + "]";
}

inline std::string keyz_content(const QisKeyZ& k) {
  std::string s;
  for (const auto& [m, h] : k.h) s += std::to_string(m) + ":" + h.content() + ";";
  return s;
}

inline std::string sdhz_label(const SdhzKey& k) { return torusz_label(k.torus) + keyz_label(k.key); }

inline std::ostream& operator<<(std::ostream& os, const SdhzKey& k) { return os << sdhz_label(k); }

using SDHZElement = LinComb<SdhzKey>;

inline std::string sdhz_str(const SDHZElement& x) { return x.str(sdhz_label); }

inline QisKeyZ zero_keyz(const Category& c) { return {c, {}}; }

inline SDHZElement unitZ(const Category& c) { return SDHZElement(SdhzKey{{}, zero_keyz(c)}, 1); }

struct NormalFormZ {
  CoeffScalar coeff;
  TorusEltZ torus;
  QisKeyZ key;

  SDHZElement element() const { return SDHZElement(SdhzKey{torus, key}, coeff); }
  friend bool operator==(const NormalFormZ& a, const NormalFormZ& b) {
    return a.coeff == b.coeff && a.torus == b.torus && a.key == b.key;
  }
};

/// Torus slots in [-8, 7] and homology degrees in [-7, 8], so that every representative fits.
inline void check_key_window(const SdhzKey& k) {
  for (const auto& [s, d] : k.torus) check_window(s, s + 1);
  for (const auto& [m, h] : k.key.h) check_window(m - 1, m);
}

inline const CxB& key_complex(const QisKeyZ& k) {
  return *k.cat.cached<CxB>("mcz:" + keyz_content(k), [&] {
    std::vector<CxB> parts;
    for (const auto& [m, h] : k.h) {
      check_window(m - 1, m);
      parts.push_back(resolution_b(h.canon(), m));
    }
    return direct_sum(parts, k.cat);
  });
}

inline QisKeyZ homology_key(const CxB& x) {
  QisKeyZ k{x.cat(), {}};
  auto hd = homology_data(x);
  for (int m = x.lo; m <= x.hi; ++m)
    if (hd.h[m - x.lo].total_dim() > 0) k.h.emplace(m, intern(hd.h[m - x.lo]));
  return k;
}

// --- Euler pairings ------------------------------------------------------------------------------

/// dim Hom(v_{P_a, 0}, v_{P_b, o}) for o = -1, 0, 1, computed from chain maps.
inline const std::vector<std::vector<std::vector<int>>>& torusz_generator_table(const Category& c) {
  return *c.cached<std::vector<std::vector<std::vector<int>>>>("torusgenz", [&] {
    int n = c.n();
    std::vector<std::vector<std::vector<int>>> t(3, std::vector<std::vector<int>>(n, std::vector<int>(n)));
    for (int o = -1; o <= 1; ++o)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          t[o + 1][a][b] = chain_maps_dim(v_complex(projective(c, a), 0), v_complex(projective(c, b), o));
    return t;
  });
}

/// Exponent of q in <T_x, T_y>.
inline int torusz_euler_int(const Category& c, const TorusEltZ& x, const TorusEltZ& y) {
  const auto& g = torusz_generator_table(c);
  int e = 0;
  for (const auto& [s, dx] : x) {
    auto cx = projective_coords(c, dx);
    for (int o = -1; o <= 1; ++o) {
      auto it = y.find(s + o);
      if (it == y.end()) continue;
      auto cy = projective_coords(c, it->second);
      for (int a = 0; a < c.n(); ++a)
        for (int b = 0; b < c.n(); ++b) e += cx[a] * cy[b] * g[o + 1][a][b];
    }
  }
  return e;
}

/// Closed form: sum_s <x_s, y_s + y_{s-1}>.
inline int torusz_euler_closed(const Quiver& q, const TorusEltZ& x, const TorusEltZ& y) {
  int e = 0;
  for (const auto& [s, dx] : x)
    for (int t : {s, s - 1})
      if (y.count(t)) e += euler_form_int(q, dx, y.at(t));
  return e;
}

/// Exponent of q in <T_x, M>: sum_s <x_s, M^s>.
inline int euler_torus_cxz(const Quiver& q, const TorusEltZ& x, const std::map<int, DimVector>& g) {
  int e = 0;
  for (const auto& [s, d] : x)
    if (g.count(s)) e += euler_form_int(q, d, g.at(s));
  return e;
}

/// Exponent of q in <M, T_x>: sum_s <M^{s+1}, x_s>.
inline int euler_cx_torusz(const Quiver& q, const std::map<int, DimVector>& g, const TorusEltZ& x) {
  int e = 0;
  for (const auto& [s, d] : x)
    if (g.count(s + 1)) e += euler_form_int(q, g.at(s + 1), d);
  return e;
}

/// Component grading of T_x <> [C_key].
inline std::map<int, DimVector> gradeZ(const SdhzKey& k) {
  auto g = grade_b(key_complex(k.key));
  for (const auto& [s, d] : k.torus)
    for (int t : {s, s + 1}) g[t] = g.count(t) ? dim_add(g[t], d) : d;
  for (auto it = g.begin(); it != g.end();) it = dim_is_zero(it->second) ? g.erase(it) : std::next(it);
  return g;
}

/// Euler form on K_0(C^b) from components: sum_{i<=j} (-1)^{j-i} <X^i, Y^j>.
inline int euler_components(const Quiver& q, const std::map<int, DimVector>& x, const std::map<int, DimVector>& y) {
  int e = 0;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y)
      if (i <= j) e += ((j - i) % 2 ? -1 : 1) * euler_form_int(q, a, b);
  return e;
}

// --- normal forms ------------------------------------------------------------------------------

inline TorusEltZ torus_of_acyclic_projective(const CxB& a) {
  const auto& fs = a.cat().field();
  TorusEltZ t;
  for (int s = a.lo; s < a.hi; ++s) t[s] = image_dims(a.d(s), fs);
  return tz_normalize(t);
}

/// Components of the part left after removing the contractible summands of class t.
inline std::map<int, DimVector> strip_torus(std::map<int, DimVector> g, const TorusEltZ& t) {
  for (const auto& [s, d] : t)
    for (int u : {s, s + 1}) g[u] = dim_sub(g.count(u) ? g[u] : DimVector(d.size(), 0), d);
  for (auto it = g.begin(); it != g.end();) it = dim_is_zero(it->second) ? g.erase(it) : std::next(it);
  return g;
}

/// Projective components: torus part from ranks of the differentials.
inline NormalFormZ normal_form_by_ranks(const CxB& x) {
  if (!has_projective_components(x)) throw PreconditionError("rank normal form needs projective components");
  const Category& c = x.cat();
  const auto& fs = c.field();
  QisKeyZ key = homology_key(x);
  TorusEltZ t;
  for (int s = x.lo; s < x.hi; ++s) {
    DimVector r = image_dims(x.d(s), fs);
    if (key.h.count(s + 1)) r = dim_sub(r, min_proj_resolution(key.h.at(s + 1).canon()).p1.dim);
    for (int v : r)
      if (v < 0) throw ConversionMismatch("negative torus part in rank normal form");
    t[s] = r;
  }
  t = tz_normalize(t);
  int e = euler_torus_cxz(c.quiver(), t, strip_torus(grade_b(x), t));
  return {CoeffScalar::q_power(c.q(), e), t, key};
}

/// Projective components: torus part from a Krull-Schmidt decomposition.
inline NormalFormZ normal_form_by_decomposition(const CxB& x) {
  if (!has_projective_components(x)) throw PreconditionError("normal form needs projective components");
  if (x.total_dim() > 12) throw BudgetExceeded("decomposition route is limited to total dimension 12");
  const Category& c = x.cat();
  const auto& fs = c.field();
  TorusEltZ t;
  std::vector<CxB> rest;
  for (const auto& r : decompose_rep(to_rep(x))) {
    CxB s = cxb_from_rep(r, c, x.lo);
    std::vector<int> support;
    for (int m = s.lo; m <= s.hi; ++m)
      if (s.at(m).total_dim() > 0) support.push_back(m);
    if (support.size() == 2 && support[1] == support[0] + 1 && is_iso_morphism(s.d(support[0]), fs)) {
      int m = support[0];
      t = tz_add(t, tz_single(m, s.at(m).dim));
    } else {
      rest.push_back(s);
    }
  }
  CxB m = direct_sum(rest, c);
  int e = euler_torus_cxz(c.quiver(), t, grade_b(m));
  return {CoeffScalar::q_power(c.q(), e), t, homology_key(x)};
}

struct DeflationZ {
  CxB px;          // sum of resolutions of the homology and of contractible covers
  CxBMorphism pi;  // px -> x, onto in each degree, quasi-isomorphism
  CxB kernel;      // acyclic, projective components
  TorusEltZ p;     // class of the contractible covers
};

/// Sum of pieces with maps into x, over the common window.
inline std::pair<CxB, CxBMorphism> glue_pieces(const CxB& x, const std::vector<std::pair<CxB, CxBMorphism>>& pieces,
                                               int lo, int hi) {
  CxB px = zero_cxb(x.cat());
  bool first = true;
  for (const auto& [pc, f] : pieces) {
    px = first ? pad(pc, lo, hi) : direct_sum(px, pad(pc, lo, hi));
    first = false;
  }
  px = pad(px, lo, hi);
  CxBMorphism pi{lo, {}};
  for (int i = lo; i <= hi; ++i) {
    std::vector<RepMorphism> parts;
    for (const auto& [pc, f] : pieces) parts.push_back(morphism_at(f, i, pc.at(i), x.at(i)));
    if (parts.empty()) parts.push_back(zero_morphism(Rep::zero(x.cat()), x.at(i)));
    pi.s.push_back(hcat(parts));
  }
  return {px, pi};
}

/// Contractible covers v_{Q_s, s} -> x with Q_s -> X^s a projective cover.
inline std::vector<std::pair<CxB, CxBMorphism>> contractible_cover_pieces(const CxB& x, TorusEltZ& p) {
  const Category& c = x.cat();
  const auto& fs = c.field();
  std::vector<std::pair<CxB, CxBMorphism>> pieces;
  for (int s = x.lo; s <= x.hi; ++s) {
    auto pc = projective_cover(x.at(s));
    if (pc.p.total_dim() == 0) continue;
    pieces.push_back({v_complex(pc.p, s), CxBMorphism{s, {pc.cover, compose(x.d(s), pc.cover, fs)}}});
    p = tz_add(p, tz_single(s, pc.p.dim));
  }
  return pieces;
}

/// A quasi-isomorphic deflation from a projective-component complex onto x.
inline DeflationZ deflationZ(const CxB& x) {
  const Category& c = x.cat();
  const auto& fs = c.field();
  auto hd = homology_data(x);
  std::vector<std::pair<CxB, CxBMorphism>> pieces;
  for (int m = x.lo; m <= x.hi; ++m) {
    const auto& h = hd.h[m - x.lo];
    if (h.total_dim() == 0) continue;
    const auto& z = hd.z[m - x.lo];
    const auto& q = hd.q[m - x.lo];
    auto r = min_proj_resolution(h);
    auto g0 = compose(z.incl, lift_projective(c, r.top0, z.rep, q.proj, r.cover), fs);
    auto g1 = lift_projective(c, r.top1, x.at(m - 1), x.d(m - 1), compose(g0, r.incl, fs));
    pieces.push_back({CxB{m - 1, m, {r.p1, r.p0}, {r.incl}}, CxBMorphism{m - 1, {g1, g0}}});
  }
  DeflationZ d;
  auto covers = contractible_cover_pieces(x, d.p);
  pieces.insert(pieces.end(), covers.begin(), covers.end());
  auto [px, pi] = glue_pieces(x, pieces, x.lo - 1, x.hi + 1);
  d.px = px;
  d.pi = pi;
  CxB xp = pad(x, x.lo - 1, x.hi + 1);
  if (!is_chain_map(d.px, xp, d.pi)) throw SignConventionBroken("deflation is not a chain map");
  d.kernel = cxb_from_rep(kernel(to_rep(d.px), to_ext(d.pi)).rep, c, d.px.lo);
  return d;
}

/// Any complex: [X] = <A_X, X>^{-1} [A_X]^{-1} <> [P_X] for the deflation A_X >-> P_X ->> X.
inline NormalFormZ normal_form_by_deflation(const CxB& x) {
  const Category& c = x.cat();
  const Quiver& q = c.quiver();
  auto d = deflationZ(x);
  if (!is_acyclic(d.kernel)) throw ConversionMismatch("deflation kernel is not acyclic");
  TorusEltZ a = torus_of_acyclic_projective(d.kernel);
  auto cdims = strip_torus(grade_b(d.px), d.p);
  int e = -euler_torus_cxz(q, a, grade_b(x)) - torusz_euler_int(c, a, a) + torusz_euler_int(c, a, d.p) +
          euler_torus_cxz(q, d.p, cdims);
  return {CoeffScalar::q_power(c.q(), e), tz_add(d.p, tz_neg(a)), homology_key(x)};
}

inline NormalFormZ normal_formZ(const CxB& x) {
  NormalFormZ nf;
  if (!has_projective_components(x)) {
    nf = normal_form_by_deflation(x);
  } else {
    nf = normal_form_by_ranks(x);
    if (kAlwaysCrossCheck && x.total_dim() <= 12 && !(normal_form_by_decomposition(x) == nf))
      throw ConversionMismatch("normal form routes disagree");
  }
  check_key_window({nf.torus, nf.key});
  return nf;
}

// --- products ------------------------------------------------------------------------------------

/// T_u <> z.
inline SDHZElement torus_leftZ(const Category& c, const TorusEltZ& u, const SDHZElement& z) {
  SDHZElement out;
  for (const auto& [k, coeff] : z.terms) {
    SdhzKey nk{tz_add(u, k.torus), k.key};
    check_key_window(nk);
    out.add(nk, coeff * CoeffScalar::q_power(c.q(), -torusz_euler_int(c, u, k.torus)));
  }
  return out;
}

inline SDHZElement torus_elementZ(const Category& c, const TorusEltZ& t) {
  SdhzKey k{tz_normalize(t), zero_keyz(c)};
  check_key_window(k);
  return SDHZElement(k, 1);
}

/// T_t^{-1} = q^{-<t,t>} T_{-t}.
inline SDHZElement torus_inverseZ(const Category& c, const TorusEltZ& t) {
  return torus_elementZ(c, tz_neg(t)) * CoeffScalar::q_power(c.q(), -torusz_euler_int(c, t, t));
}

/// [C_l] <> [C_m]: sum over homotopy classes of maps C_l -> Sigma C_m of [middle term] / |Hom(C_l, C_m)|.
inline const SDHZElement& module_productZ(const QisKeyZ& l, const QisKeyZ& m) {
  require_same(l.cat, m.cat);
  std::string tag = "pz:" + keyz_content(l) + "/" + keyz_content(m);
  return *l.cat.cached<SDHZElement>(tag, [&] {
    const CxB& cl = key_complex(l);
    const CxB& cm = key_complex(m);
    CoeffScalar inv = CoeffScalar::q_power(l.cat.q(), -chain_maps_dim(cl, cm));
    SDHZElement out;
    for (const auto& e : ext1_classes(cl, cm)) out += normal_formZ(e.middle).element() * inv;
    return out;
  });
}

inline SDHZElement productZ_basis(const SdhzKey& x, const SdhzKey& y) {
  const Category& c = x.key.cat;
  require_same(c, y.key.cat);
  const Quiver& q = c.quiver();
  auto gl = grade_b(key_complex(x.key));
  // [C_l] <> T_y = q^{e(y,C_l) - e(C_l,y)} T_y <> [C_l]
  int pre = euler_torus_cxz(q, y.torus, gl) - euler_cx_torusz(q, gl, y.torus) - torusz_euler_int(c, x.torus, y.torus);
  auto out = torus_leftZ(c, tz_add(x.torus, y.torus), module_productZ(x.key, y.key));
  return out * CoeffScalar::q_power(c.q(), pre);
}

inline SDHZElement productZ(const SDHZElement& x, const SDHZElement& y) {
  return bilinear<SdhzKey>(x, y, productZ_basis);
}

/// [L] <> [M] straight from the Hall-type sum, for pairs whose extensions split degreewise.
inline SDHZElement hall_productZ_direct(const CxB& l, const CxB& m) {
  CoeffScalar inv = CoeffScalar::q_power(l.cat().q(), -chain_maps_dim(l, m));
  SDHZElement out;
  for (const auto& e : ext1_classes(l, m)) out += normal_formZ(e.middle).element() * inv;
  return out;
}

// --- generators ------------------------------------------------------------------------------------

/// [u_{A,m}], the stalk complex: q^{-<P1,P1>} T_{-(P1 at slot m-1)} <> [C_{A at m}].
inline SDHZElement u_gen(const Rep& a, int m) {
  const Category& c = a.cat;
  check_window(m - 1, m);
  if (a.total_dim() == 0) return unitZ(c);
  auto r = min_proj_resolution(a);
  SdhzKey k{tz_single(m - 1, dim_neg(r.p1.dim)), QisKeyZ{c, {{m, intern(a)}}}};
  return SDHZElement(k, CoeffScalar::q_power(c.q(), -euler_form_int(c.quiver(), r.p1.dim, r.p1.dim)));
}

inline std::pair<DimVector, DimVector> split_signs(const DimVector& a) {
  DimVector p(a.size(), 0), n(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) (a[i] > 0 ? p : n)[i] = std::abs(a[i]);
  return {p, n};
}

/// v_{alpha,m} = [v_{A,m}] <> [v_{B,m}]^{-1} with A, B semisimple of classes alpha^+, alpha^-.
inline SDHZElement v_gen(const Category& c, const DimVector& alpha, int m) {
  check_window(m, m + 1);
  auto [pos, neg] = split_signs(alpha);
  int e = euler_form_int(c.quiver(), alpha, neg);
  SdhzKey k{tz_single(m, alpha), zero_keyz(c)};
  return SDHZElement(k, CoeffScalar::q_power(c.q(), e));
}

inline Rep semisimple(const Category& c, const DimVector& d) {
  Rep r = Rep::zero(c);
  for (int i = 0; i < c.n(); ++i)
    for (int k = 0; k < d[i]; ++k) r = direct_sum(r, simple(c, i));
  return r;
}

/// I_m: [A] -> [u_{A,m}], extended linearly.
inline SDHZElement embed_Im(const HallElement& x, int m) {
  SDHZElement out;
  for (const auto& [k, coeff] : x.terms) out += u_gen(k.canon(), m) * coeff;
  return out;
}

// --- twists ------------------------------------------------------------------------------------

/// Exponent of v for the twist of the given mode between component gradings.
inline int twist_exponent(int mode, const Quiver& q, const std::map<int, DimVector>& x,
                          const std::map<int, DimVector>& y) {
  switch (mode) {
    case 1:
      return 2 * euler_components(q, x, y);
    case 2:
      return euler_components(q, x, y);
    case 3: {
      int e = 0;
      for (const auto& [i, a] : x)
        if (y.count(i)) e += euler_form_int(q, a, y.at(i));
      return e;
    }
    case 4: {
      int e = 0;
      for (const auto& [i, a] : x)
        for (const auto& [j, b] : y) e += ((j - i) % 2 ? -1 : 1) * euler_form_int(q, a, b);
      return e;
    }
    default:
      throw PreconditionError("twist mode must be 1, 2, 3 or 4");
  }
}

inline SDHZElement twist_mode(int mode, const SDHZElement& x, const SDHZElement& y) {
  if (mode < 1 || mode > 4) throw PreconditionError("twist mode must be 1, 2, 3 or 4");
  return bilinear<SdhzKey>(x, y, [mode](const SdhzKey& a, const SdhzKey& b) {
    const Category& c = a.key.cat;
    int e = twist_exponent(mode, c.quiver(), gradeZ(a), gradeZ(b));
    return productZ_basis(a, b) * CoeffScalar::v_power(c.q(), e);
  });
}

// --- Euler form by linear algebra --------------------------------------------------------------------

/// sum_p (-1)^p dim Ext^p_{C^b}(X, Y), from a resolution 0 -> Omega -> V -> X -> 0 by contractible
/// projective complexes and Ext^p(Omega, Y) = Hom_K(Omega, Sigma^p Y) for p >= 1.
inline int euler_cx_int(const CxB& x, const CxB& y) {
  require_same(x.cat(), y.cat());
  const Category& c = x.cat();
  TorusEltZ p;
  auto pieces = contractible_cover_pieces(x, p);
  if (pieces.empty()) return 0;
  auto [v, pi] = glue_pieces(x, pieces, x.lo, x.hi + 1);
  CxB xp = pad(x, x.lo, x.hi + 1);
  if (!is_chain_map(v, xp, pi)) throw SignConventionBroken("cover is not a chain map");
  CxB omega = cxb_from_rep(kernel(to_rep(v), to_ext(pi)).rep, c, v.lo);
  int chi_v = chain_maps_dim(v, y);
  int chi_o = chain_maps_dim(omega, y);
  for (int p2 = 1; omega.lo + p2 <= y.hi + 1; ++p2) {
    int h = homotopy_hom_dim(omega, shift_b(y, p2));
    chi_o += (p2 % 2 ? -h : h);
  }
  return chi_v - chi_o;
}

struct GenZ {
  bool is_u = true;
  Rep a;           // u_{A,m}
  DimVector alpha;  // v_{alpha,m}
  int m = 0;
  std::string name;
};

inline GenZ u_symbol(const Rep& a, int m) {
  return {true, a, {}, m, "u(" + key_label(intern(a)) + "," + std::to_string(m) + ")"};
}

inline GenZ v_symbol(const Category& c, const DimVector& alpha, int m) {
  return {false, Rep::zero(c), alpha, m, "v(" + dim_str(alpha) + "," + std::to_string(m) + ")"};
}

/// Signed complexes whose classes sum to the generator.
inline std::vector<std::pair<int, CxB>> generator_complexes(const GenZ& g) {
  if (g.is_u) return {{1, stalk_b(g.a, g.m)}};
  const Category& c = g.a.cat;
  auto [pos, neg] = split_signs(g.alpha);
  return {{1, v_complex(semisimple(c, pos), g.m)}, {-1, v_complex(semisimple(c, neg), g.m)}};
}

/// <g1, g2> from Ext dimensions in C^b.
inline CoeffScalar euler_pairZ(const GenZ& g1, const GenZ& g2) {
  int e = 0;
  for (const auto& [s1, x] : generator_complexes(g1))
    for (const auto& [s2, y] : generator_complexes(g2)) e += s1 * s2 * euler_cx_int(x, y);
  return CoeffScalar::q_power(g1.a.cat.q(), e);
}

/// Closed forms of the generator pairings.
inline CoeffScalar euler_pair_closed(const GenZ& g1, const GenZ& g2) {
  const Category& c = g1.a.cat;
  const Quiver& q = c.quiver();
  int m = g1.m, n = g2.m, e = 0;
  if (!g1.is_u && g2.is_u) e = (m == n) ? euler_form_int(q, g1.alpha, g2.a.dim) : 0;
  if (!g1.is_u && !g2.is_u) e = (m == n || m == n + 1) ? euler_form_int(q, g1.alpha, g2.alpha) : 0;
  if (g1.is_u && !g2.is_u) e = (n == m - 1) ? euler_form_int(q, g1.a.dim, g2.alpha) : 0;
  if (g1.is_u && g2.is_u) {
    int ab = euler_form_int(q, g1.a.dim, g2.a.dim);
    if (n >= m) e = ((n - m) % 2 ? -ab : ab);
  }
  return CoeffScalar::q_power(c.q(), e);
}

inline std::vector<IsoClassKey> indecomposables_up_to(const Category& c, int bound) {
  std::vector<IsoClassKey> out;
  for (const auto& k : iso_classes_up_to(c, bound))
    if (!k.is_zero() && decompose(k.canon()).size() == 1) out.push_back(k);
  return out;
}

inline Report verify_euler_lemmas(const Category& c, const std::vector<int>& degrees = {0, 1, 2}) {
  Report rep;
  rep.suite = "euler-lemmas";
  int n = c.n();
  std::vector<GenZ> gens;
  for (int m : degrees) {
    for (const auto& k : indecomposables_up_to(c, 2)) gens.push_back(u_symbol(k.canon(), m));
    for (int i = 0; i < n; ++i) {
      gens.push_back(v_symbol(c, unit_vector(n, i), m));
      gens.push_back(v_symbol(c, dim_neg(unit_vector(n, i)), m));
    }
  }
  for (const auto& g1 : gens)
    for (const auto& g2 : gens) {
      auto lhs = euler_pairZ(g1, g2), rhs = euler_pair_closed(g1, g2);
      rep.add("<" + g1.name + "," + g2.name + ">", lhs == rhs, lhs.str(), rhs.str());
    }
  return rep;
}

// --- presentation --------------------------------------------------------------------------------------

/// I_m([A] <> [B]) = I_m([A]) <> I_m([B]) for dim A + dim B <= bound.
inline Report verify_embed_Im(const Category& c, int m, int bound) {
  Report rep;
  rep.suite = "embed-Im";
  auto classes = iso_classes_up_to(c, bound);
  for (const auto& a : classes)
    for (const auto& b : classes) {
      if (a.canon().total_dim() + b.canon().total_dim() > bound) continue;
      auto lhs = embed_Im(hall_product(basis_element(a), basis_element(b)), m);
      auto rhs = productZ(u_gen(a.canon(), m), u_gen(b.canon(), m));
      rep.add("I" + std::to_string(m) + "(" + key_label(a) + "*" + key_label(b) + ")", lhs == rhs, sdhz_str(lhs),
              sdhz_str(rhs));
    }
  return rep;
}

/// Relations (U), (V), (UV) for m in {0,1}, p = m+2, alpha, beta in {+-simples}; relations of I_m(H)
/// are checked through the quantum Serre relations under the degree-m twist. With perturb the
/// factor q-1 in the (U) commutator is replaced by q.
inline Report verify_presentation(const Category& c, bool perturb = false) {
  Report rep;
  rep.suite = "presentation-uv";
  const Quiver& qv = c.quiver();
  int n = qv.n, q = c.q();
  auto tw3 = [](const SDHZElement& x, const SDHZElement& y) { return twist_mode(3, x, y); };
  auto qp = [q](int e) { return CoeffScalar::q_power(q, e); };
  auto u = [&](int i, int m) { return u_gen(simple(c, i), m); };
  auto S = [&](int i) { return unit_vector(n, i); };
  std::vector<DimVector> roots;
  for (int i = 0; i < n; ++i) {
    roots.push_back(S(i));
    roots.push_back(dim_neg(S(i)));
  }
  auto idx = [](int i) { return std::to_string(i + 1); };
  CoeffScalar delta_coeff = perturb ? CoeffScalar(q) : CoeffScalar(q - 1);
  for (int m : {0, 1}) {
    std::string ms = std::to_string(m);
    int p = m + 2;
    SDHZElement one = unitZ(c);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::string tag = idx(i) + "," + idx(j) + ";" + ms;
        if (i != j) {
          int a = symmetric_form(qv, S(i), S(j));
          auto se = serre_expression(u(i, m), u(j, m), a, q, one, tw3);
          rep.add("U-serre(" + tag + ")", se.is_zero(), sdhz_str(se), "0");
        }
        auto lhs = productZ(u(i, m), u(j, m + 1));
        auto rhs = productZ(u(j, m + 1), u(i, m));
        if (i == j) rhs += v_gen(c, S(i), m) * delta_coeff;
        rep.add("U-adjacent(" + tag + ")", lhs == rhs, sdhz_str(lhs), sdhz_str(rhs));
        auto l2 = productZ(u(i, m), u(j, p)), r2 = productZ(u(j, p), u(i, m));
        rep.add("U-far(" + tag + ")", l2 == r2, sdhz_str(l2), sdhz_str(r2));
      }
    // the nonsplit extension of u_{S_i,m} by u_{S_i,m+1}, enumerated in C^b
    for (int i = 0; i < n; ++i) {
      Rep s = simple(c, i);
      auto classes = ext1_classes(stalk_b(s, m), stalk_b(s, m + 1));
      int nonsplit = 0;
      bool all_v = true;
      for (const auto& e : classes) {
        bool split = is_isomorphic(e.middle, direct_sum(stalk_b(s, m), stalk_b(s, m + 1)));
        if (split) continue;
        ++nonsplit;
        all_v = all_v && is_isomorphic(e.middle, v_complex(s, m));
      }
      auto direct = hall_productZ_direct(stalk_b(s, m), stalk_b(s, m + 1));
      auto prod = productZ(u(i, m), u(i, m + 1));
      bool ok = nonsplit == q - 1 && all_v && direct == prod;
      rep.add("ua-ua middle term v(S" + idx(i) + ") in degrees " + ms + "," + std::to_string(m + 1), ok,
              sdhz_str(prod), sdhz_str(direct) + " ; nonsplit classes " + std::to_string(nonsplit));
    }
    for (const auto& al : roots)
      for (const auto& be : roots) {
        std::string tag = dim_str(al) + "," + dim_str(be) + ";" + ms;
        int ab = euler_form_int(qv, al, be), ba = euler_form_int(qv, be, al);
        auto l1 = productZ(v_gen(c, al, m), v_gen(c, be, m));
        auto r1 = productZ(v_gen(c, be, m), v_gen(c, al, m)) * qp(ba - ab);
        rep.add("V-same(" + tag + ")", l1 == r1, sdhz_str(l1), sdhz_str(r1));
        auto l2 = productZ(v_gen(c, al, m), v_gen(c, be, m + 1));
        auto r2 = productZ(v_gen(c, be, m + 1), v_gen(c, al, m)) * qp(ba);
        rep.add("V-adjacent(" + tag + ")", l2 == r2, sdhz_str(l2), sdhz_str(r2));
        auto l3 = productZ(v_gen(c, al, m), v_gen(c, be, p));
        auto r3 = productZ(v_gen(c, be, p), v_gen(c, al, m));
        rep.add("V-far(" + tag + ")", l3 == r3, sdhz_str(l3), sdhz_str(r3));
      }
    for (int i = 0; i < n; ++i)
      for (const auto& al : roots) {
        std::string tag = idx(i) + "," + dim_str(al) + ";" + ms;
        auto va = v_gen(c, al, m);
        auto l1 = productZ(va, u(i, m + 1));
        auto r1 = productZ(u(i, m + 1), va) * qp(euler_form_int(qv, S(i), al));
        rep.add("UV-vu-adjacent(" + tag + ")", l1 == r1, sdhz_str(l1), sdhz_str(r1));
        auto l2 = productZ(u(i, m), va);
        auto r2 = productZ(va, u(i, m)) * qp(euler_form_int(qv, al, S(i)));
        rep.add("UV-uv-same(" + tag + ")", l2 == r2, sdhz_str(l2), sdhz_str(r2));
        auto vb1 = v_gen(c, al, m + 1);
        auto l3 = productZ(u(i, m), vb1), r3 = productZ(vb1, u(i, m));
        rep.add("UV-uv-adjacent(" + tag + ")", l3 == r3, sdhz_str(l3), sdhz_str(r3));
        auto vbp = v_gen(c, al, p);
        auto l4 = productZ(u(i, m), vbp), r4 = productZ(vbp, u(i, m));
        rep.add("UV-uv-far(" + tag + ")", l4 == r4, sdhz_str(l4), sdhz_str(r4));
        auto l5 = productZ(va, u(i, p)), r5 = productZ(u(i, p), va);
        rep.add("UV-vu-far(" + tag + ")", l5 == r5, sdhz_str(l5), sdhz_str(r5));
      }
  }
  return rep;
}

// --- property suites -----------------------------------------------------------------------------------

inline CxB random_acyclic_projectiveZ(std::mt19937& rng, const Category& c, int lo, int hi, int max_total) {
  std::vector<CxB> parts;
  for (int s = lo; s < hi; ++s) {
    auto mult = random_projective_mult(rng, c, max_total);
    if (!dim_is_zero(mult)) parts.push_back(v_complex(projective_sum(c, mult), s));
  }
  if (parts.empty()) return pad(zero_cxb(c), lo, hi);
  return random_base_change(rng, pad(direct_sum(parts, c), lo, hi));
}

inline CxBMorphism random_chain_map(std::mt19937& rng, const CxB& l, const CxB& m) {
  auto basis = chain_maps_basis(l, m);
  int lo = std::min(l.lo, m.lo), hi = std::max(l.hi, m.hi);
  const auto& fs = l.cat().field();
  Vec coeff;
  for (size_t k = 0; k < basis.size(); ++k) coeff.push_back(static_cast<int>(rng() % fs.p));
  std::vector<RepMorphism> ext;
  for (const auto& b : basis) ext.push_back(to_ext(b));
  return from_ext(combine(ext, coeff, to_rep(pad(l, lo, hi)), to_rep(pad(m, lo, hi))), l.cat().n(), lo);
}

/// Random homology key with total dimension <= max_dim in degrees [lo, hi].
inline QisKeyZ random_keyz(std::mt19937& rng, const Category& c, const std::vector<IsoClassKey>& classes, int lo,
                           int hi, int max_dim) {
  QisKeyZ k{c, {}};
  int budget = max_dim;
  for (int m = lo; m <= hi; ++m) {
    if (rng() % 2) continue;
    const auto& a = classes[rng() % classes.size()];
    if (a.is_zero() || a.canon().total_dim() > budget) continue;
    budget -= a.canon().total_dim();
    k.h.emplace(m, a);
  }
  return k;
}

inline TorusEltZ random_torusz(std::mt19937& rng, int n, int lo, int hi) {
  TorusEltZ t;
  for (int s = lo; s <= hi; ++s) {
    DimVector d(n);
    for (auto& x : d) x = static_cast<int>(rng() % 3) - 1;
    t[s] = d;
  }
  return tz_normalize(t);
}

/// Conflations K >-> L ->> M with K acyclic: [L] = [K (+) M] = <K,M> [K] <> [M].
inline Report verify_quotient_relationsZ(const Category& c, int samples, unsigned seed) {
  Report rep;
  rep.suite = "quotient-relations-z";
  std::mt19937 rng(seed);
  auto classes = iso_classes_up_to(c, 2);
  const Quiver& q = c.quiver();
  for (int s = 0; s < samples; ++s) {
    CxB m;
    if (s % 2 == 0) {
      m = direct_sum(key_complex(random_keyz(rng, c, classes, 0, 2, 3)), random_acyclic_projectiveZ(rng, c, 0, 2, 2));
      m = random_base_change(rng, m);
    } else {
      // stalks, generally without projective components
      std::vector<CxB> parts;
      for (int d = 0; d <= 1; ++d) parts.push_back(stalk_b(classes[rng() % classes.size()].canon(), d));
      m = direct_sum(parts, c);
    }
    CxB k = random_acyclic_projectiveZ(rng, c, -1, 2, 2);
    CxB l = middle_term(m, k, random_chain_map(rng, m, shift_b(k, 1)));
    auto nl = normal_formZ(l).element();
    auto nkm = normal_formZ(direct_sum(k, m)).element();
    auto fk = normal_formZ(k);
    auto rule = torus_leftZ(c, fk.torus, normal_formZ(m).element()) * fk.coeff *
                CoeffScalar::q_power(c.q(), euler_torus_cxz(q, fk.torus, grade_b(m)));
    rep.add("conflation " + std::to_string(s), nl == nkm && nkm == rule, sdhz_str(nl),
            sdhz_str(nkm) + " ; " + sdhz_str(rule));
  }
  return rep;
}

/// Random u- or v-generator in degrees [0, 2].
inline SDHZElement random_generatorZ(std::mt19937& rng, const Category& c, const std::vector<IsoClassKey>& classes) {
  int m = static_cast<int>(rng() % 3);
  if (rng() % 3) return u_gen(classes[rng() % classes.size()].canon(), m);
  int n = c.n();
  DimVector a(n);
  for (auto& x : a) x = static_cast<int>(rng() % 3) - 1;
  return v_gen(c, a, m);
}

inline Report verify_assocZ(const Category& c, int samples, unsigned seed) {
  Report rep;
  rep.suite = "assoc-z";
  std::mt19937 rng(seed);
  auto classes = iso_classes_up_to(c, 2);
  for (int s = 0; s < samples; ++s) {
    auto x = random_generatorZ(rng, c, classes);
    auto y = random_generatorZ(rng, c, classes);
    auto z = random_generatorZ(rng, c, classes);
    auto l = productZ(productZ(x, y), z), r = productZ(x, productZ(y, z));
    rep.add("triple " + std::to_string(s), l == r, sdhz_str(l), sdhz_str(r));
  }
  return rep;
}

/// Basis elements rebuilt as (torus) <> u_{H^{m_k}, m_k} <> ... <> u_{H^{m_1}, m_1} with m_k > ... > m_1.
inline Report verify_generationZ(const Category& c, int samples, unsigned seed) {
  Report rep;
  rep.suite = "generation-z";
  std::mt19937 rng(seed);
  auto classes = iso_classes_up_to(c, 4);
  for (int s = 0; s < samples; ++s) {
    SdhzKey target{random_torusz(rng, c.n(), -2, 2), random_keyz(rng, c, classes, -1, 2, 4)};
    SDHZElement prod = unitZ(c);
    for (auto it = target.key.h.rbegin(); it != target.key.h.rend(); ++it)
      prod = productZ(prod, u_gen(it->second.canon(), it->first));
    bool ok = prod.size() == 1 && prod.terms.begin()->first.key == target.key;
    SDHZElement rebuilt;
    if (ok) {
      auto [k0, c0] = *prod.terms.begin();
      TorusEltZ diff = tz_add(target.torus, tz_neg(k0.torus));
      rebuilt = productZ(torus_elementZ(c, diff), prod);
      ok = rebuilt.size() == 1 && rebuilt.terms.begin()->first == target && !rebuilt.terms.begin()->second.is_zero();
    }
    rep.add("basis " + sdhz_label(target), ok, sdhz_str(rebuilt), sdhz_label(target));
  }
  return rep;
}

/// Products of elements with homology in disjoint degree sets: component classes add, and homology
/// classes add per degree when the supports are at distance >= 2.
inline Report verify_homology_additivity(const Category& c, int samples, unsigned seed) {
  Report rep;
  rep.suite = "homology-additivity";
  std::mt19937 rng(seed);
  auto classes = iso_classes_up_to(c, 2);
  const Quiver& q = c.quiver();
  for (int s = 0; s < samples; ++s) {
    QisKeyZ kx{c, {}}, ky{c, {}};
    for (int m = -1; m <= 3; ++m) {
      const auto& a = classes[rng() % classes.size()];
      if (a.is_zero()) continue;
      (rng() % 2 ? kx : ky).h.emplace(m, a);
    }
    SdhzKey x{random_torusz(rng, c.n(), 0, 1), kx}, y{random_torusz(rng, c.n(), 0, 1), ky};
    auto prod = productZ_basis(x, y);
    auto gx = gradeZ(x), gy = gradeZ(y);
    std::map<int, DimVector> gsum = gx;
    for (const auto& [m, d] : gy) gsum[m] = gsum.count(m) ? dim_add(gsum[m], d) : d;
    for (auto it = gsum.begin(); it != gsum.end();) it = dim_is_zero(it->second) ? gsum.erase(it) : std::next(it);
    bool separated = true;
    for (const auto& [a, ha] : kx.h)
      for (const auto& [b, hb] : ky.h) separated = separated && std::abs(a - b) >= 2;
    bool ok = !prod.is_zero();
    for (const auto& [k, coeff] : prod.terms) {
      ok = ok && gradeZ(k) == gsum;
      if (!separated) continue;
      for (int m = -1; m <= 3; ++m) {
        auto dim_at = [&](const QisKeyZ& kk) {
          return kk.h.count(m) ? kk.h.at(m).dim() : DimVector(c.n(), 0);
        };
        ok = ok && dim_at(k.key) == dim_add(dim_at(kx), dim_at(ky));
      }
    }
    (void)q;
    rep.add("product " + sdhz_label(x) + " * " + sdhz_label(y), ok, sdhz_str(prod),
            separated ? "homology adds per degree" : "component classes add");
  }
  return rep;
}

}  // namespace sdh
