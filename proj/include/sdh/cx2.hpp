#pragma once
// Z/2-graded complexes over rep_k(Q), encoded as representations of a doubled quiver
// so that chain maps are morphisms and subcomplexes are subrepresentations.

#include <string>
#include <utility>
#include <vector>

#include "sdh/quiverrep.hpp"

namespace sdh {

struct Cx2 {
  Rep m0, m1;
  RepMorphism d0;  // m0 -> m1
  RepMorphism d1;  // m1 -> m0

  const Category& cat() const { return m0.cat; }
  int total_dim() const { return m0.total_dim() + m1.total_dim(); }
};

struct Cx2Morphism {
  RepMorphism s0, s1;
};

/// Doubled quiver: vertex (i, deg) is i + deg*n; arrows are the Q-arrows in degree 0, then
/// in degree 1, then d0_i: (i,0) -> (i,1), then d1_i: (i,1) -> (i,0).
inline Category z2_category(const Category& base) {
  return base.derived("z2", [&] {
    const Quiver& q = base.quiver();
    int n = q.n;
    std::vector<std::pair<int, int>> arr;
    for (auto [s, t] : q.arrows) arr.emplace_back(s, t);
    for (auto [s, t] : q.arrows) arr.emplace_back(s + n, t + n);
    for (int i = 0; i < n; ++i) arr.emplace_back(i, i + n);
    for (int i = 0; i < n; ++i) arr.emplace_back(i + n, i);
    return Quiver(2 * n, arr);
  });
}

inline void check_cx2(const Cx2& x) {
  require_same(x.m0.cat, x.m1.cat);
  const auto& fs = x.cat().field();
  if (!is_morphism(x.m0, x.m1, x.d0) || !is_morphism(x.m1, x.m0, x.d1))
    throw ShapeError("differential is not a morphism of representations");
  if (!is_zero(compose(x.d1, x.d0, fs)) || !is_zero(compose(x.d0, x.d1, fs)))
    throw SignConventionBroken("differential does not square to zero");
}

inline Cx2 make_cx2(Rep m0, Rep m1, RepMorphism d0, RepMorphism d1) {
  Cx2 x{std::move(m0), std::move(m1), std::move(d0), std::move(d1)};
  check_cx2(x);
  return x;
}

inline Rep to_rep(const Cx2& x) {
  Category ext = z2_category(x.cat());
  DimVector d = x.m0.dim;
  d.insert(d.end(), x.m1.dim.begin(), x.m1.dim.end());
  std::vector<FpMatrix> maps = x.m0.maps;
  maps.insert(maps.end(), x.m1.maps.begin(), x.m1.maps.end());
  maps.insert(maps.end(), x.d0.f.begin(), x.d0.f.end());
  maps.insert(maps.end(), x.d1.f.begin(), x.d1.f.end());
  return Rep(ext, d, maps);
}

inline Cx2 from_rep(const Rep& r, const Category& base) {
  int n = base.n();
  int a = base.quiver().num_arrows();
  DimVector d0(r.dim.begin(), r.dim.begin() + n), d1(r.dim.begin() + n, r.dim.end());
  std::vector<FpMatrix> m0(r.maps.begin(), r.maps.begin() + a), m1(r.maps.begin() + a, r.maps.begin() + 2 * a);
  RepMorphism x0, x1;
  x0.f.assign(r.maps.begin() + 2 * a, r.maps.begin() + 2 * a + n);
  x1.f.assign(r.maps.begin() + 2 * a + n, r.maps.end());
  return Cx2{Rep(base, d0, m0), Rep(base, d1, m1), x0, x1};
}

inline RepMorphism to_ext(const Cx2Morphism& f) {
  RepMorphism g = f.s0;
  g.f.insert(g.f.end(), f.s1.f.begin(), f.s1.f.end());
  return g;
}

inline Cx2Morphism from_ext(const RepMorphism& g, int n) {
  Cx2Morphism f;
  f.s0.f.assign(g.f.begin(), g.f.begin() + n);
  f.s1.f.assign(g.f.begin() + n, g.f.end());
  return f;
}

inline Cx2 zero_cx2(const Category& c) {
  Rep z = Rep::zero(c);
  return Cx2{z, z, zero_morphism(z, z), zero_morphism(z, z)};
}

inline Cx2 stalk(const Rep& a, int deg) {
  Rep z = Rep::zero(a.cat);
  if (deg == 0) return Cx2{a, z, zero_morphism(a, z), zero_morphism(z, a)};
  return Cx2{z, a, zero_morphism(z, a), zero_morphism(a, z)};
}

inline Cx2 make_KP(const Rep& p) { return Cx2{p, p, identity_morphism(p), zero_morphism(p, p)}; }
inline Cx2 make_KPstar(const Rep& p) { return Cx2{p, p, zero_morphism(p, p), identity_morphism(p)}; }

inline RepMorphism block_morphism(const RepMorphism& a, const RepMorphism& b) {
  RepMorphism r;
  for (size_t i = 0; i < a.f.size(); ++i) r.f.push_back(block_diag(a.f[i], b.f[i]));
  return r;
}

inline Cx2 direct_sum(const Cx2& x, const Cx2& y) {
  return Cx2{direct_sum(x.m0, y.m0), direct_sum(x.m1, y.m1), block_morphism(x.d0, y.d0), block_morphism(x.d1, y.d1)};
}

/// Shift: swap degrees and negate the differentials.
inline Cx2 shift(const Cx2& x) {
  const auto& fs = x.cat().field();
  return Cx2{x.m1, x.m0, negate(x.d1, fs), negate(x.d0, fs)};
}

inline Cx2Morphism shift(const Cx2Morphism& f) { return {f.s1, f.s0}; }

inline Cx2 direct_sum(const std::vector<Cx2>& parts, const Category& c) {
  Cx2 acc = zero_cx2(c);
  for (const auto& x : parts) acc = direct_sum(acc, x);
  return acc;
}

/// Same complex after a random change of basis in every component.
template <class Rng>
Cx2 random_base_change(Rng& rng, const Cx2& x) {
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
  return from_rep(base_change(r, g), x.cat());
}

inline bool is_isomorphic(const Cx2& x, const Cx2& y) { return is_isomorphic(to_rep(x), to_rep(y)); }

inline bool is_chain_map(const Cx2& l, const Cx2& m, const Cx2Morphism& f) {
  return is_morphism(to_rep(l), to_rep(m), to_ext(f));
}

inline std::vector<Cx2Morphism> chain_maps_basis(const Cx2& l, const Cx2& m) {
  require_same(l.cat(), m.cat());
  std::vector<Cx2Morphism> out;
  for (const auto& g : hom_basis(to_rep(l), to_rep(m))) out.push_back(from_ext(g, l.cat().n()));
  return out;
}

inline int chain_maps_dim(const Cx2& l, const Cx2& m) { return hom_dim(to_rep(l), to_rep(m)); }

/// The chain map d_N h + h d_L induced by h = (h0: L0 -> N1, h1: L1 -> N0).
inline Cx2Morphism null_homotopic(const Cx2& l, const Cx2& n, const RepMorphism& h0, const RepMorphism& h1) {
  const auto& fs = l.cat().field();
  Cx2Morphism f;
  f.s0 = add(compose(n.d1, h0, fs), compose(h1, l.d0, fs), fs);
  f.s1 = add(compose(n.d0, h1, fs), compose(h0, l.d1, fs), fs);
  return f;
}

/// Spanning set of null-homotopic chain maps as coordinate vectors in the extended hom space.
inline std::vector<Vec> homotopy_vectors(const Cx2& l, const Cx2& n) {
  std::vector<Vec> out;
  for (const auto& h0 : hom_basis(l.m0, n.m1))
    out.push_back(morphism_to_vector(to_ext(null_homotopic(l, n, h0, zero_morphism(l.m1, n.m0)))));
  for (const auto& h1 : hom_basis(l.m1, n.m0))
    out.push_back(morphism_to_vector(to_ext(null_homotopic(l, n, zero_morphism(l.m0, n.m1), h1))));
  return out;
}

inline int ambient_dim(const Rep& a, const Rep& b) {
  int s = 0;
  for (size_t i = 0; i < a.dim.size(); ++i) s += a.dim[i] * b.dim[i];
  return s;
}

/// Basis of the null-homotopic subspace.
inline std::vector<Cx2Morphism> homotopy_subspace(const Cx2& l, const Cx2& n) {
  require_same(l.cat(), n.cat());
  Rep rl = to_rep(l), rn = to_rep(n);
  int amb = ambient_dim(rl, rn);
  FpMatrix span = column_space(FpMatrix::from_columns(homotopy_vectors(l, n), amb), l.cat().field());
  std::vector<Cx2Morphism> out;
  for (int j = 0; j < span.cols; ++j)
    out.push_back(from_ext(morphism_from_vector(rl.dim, rn.dim, span.column(j)), l.cat().n()));
  return out;
}

inline int homotopy_dim(const Cx2& l, const Cx2& n) {
  Rep rl = to_rep(l), rn = to_rep(n);
  return rank(FpMatrix::from_columns(homotopy_vectors(l, n), ambient_dim(rl, rn)), l.cat().field());
}

/// dim Hom_K(L, N).
inline int homotopy_hom_dim(const Cx2& l, const Cx2& n) { return chain_maps_dim(l, n) - homotopy_dim(l, n); }

/// Chain maps L -> N spanning a complement of the null-homotopic ones.
inline std::vector<Cx2Morphism> homotopy_class_generators(const Cx2& l, const Cx2& n) {
  const auto& fs = l.cat().field();
  Rep rl = to_rep(l), rn = to_rep(n);
  int amb = ambient_dim(rl, rn);
  FpMatrix span = FpMatrix::from_columns(homotopy_vectors(l, n), amb);
  int rk = rank(span, fs);
  std::vector<Cx2Morphism> out;
  for (const auto& g : hom_basis(rl, rn)) {
    FpMatrix trial = hstack(span, FpMatrix::from_columns({morphism_to_vector(g)}, amb));
    int r2 = rank(trial, fs);
    if (r2 > rk) {
      span = trial;
      rk = r2;
      out.push_back(from_ext(g, l.cat().n()));
    }
  }
  return out;
}

// --- homology ------------------------------------------------------------------------------

struct Homology2 {
  Rep h0, h1;
  Embedded z0, z1;   // cycles inside m0, m1
  Quotient q0, q1;   // z -> h
};

inline Homology2 homology_data(const Cx2& x) {
  const auto& fs = x.cat().field();
  auto part = [&](const Rep& m, const RepMorphism& d_out, const RepMorphism& d_in, Embedded& z, Quotient& q) {
    z = kernel(m, d_out);
    std::vector<FpMatrix> b;
    for (size_t v = 0; v < d_in.f.size(); ++v) {
      auto co = coordinates(z.incl.f[v], column_space(d_in.f[v], fs), fs);
      if (!co) throw SignConventionBroken("boundaries are not cycles");
      b.push_back(*co);
    }
    q = quotient(z.rep, b);
    return q.rep;
  };
  Homology2 h;
  h.h0 = part(x.m0, x.d0, x.d1, h.z0, h.q0);
  h.h1 = part(x.m1, x.d1, x.d0, h.z1, h.q1);
  return h;
}

inline std::pair<Rep, Rep> homology(const Cx2& x) {
  auto h = homology_data(x);
  return {h.h0, h.h1};
}

inline bool is_acyclic(const Cx2& x) {
  auto [h0, h1] = homology(x);
  return h0.total_dim() == 0 && h1.total_dim() == 0;
}

inline bool has_projective_components(const Cx2& x) { return is_projective(x.m0) && is_projective(x.m1); }

// --- building blocks -----------------------------------------------------------------------

/// C_A = (P0 in degree 0, P1 in degree 1, d1 = inclusion, d0 = 0).
inline Cx2 resolution_complex(const Rep& a) {
  auto r = min_proj_resolution(a);
  return Cx2{r.p0, r.p1, zero_morphism(r.p0, r.p1), r.incl};
}

/// C_A (+) shift(C_B): projective components, homology (A, B).
inline Cx2 minimal_complex(const Rep& a, const Rep& b) {
  return direct_sum(resolution_complex(a), shift(resolution_complex(b)));
}

/// E(f) for a chain map f: L -> shift(M); contains M, with quotient L.
inline Cx2 middle_term(const Cx2& l, const Cx2& m, const Cx2Morphism& f) {
  const auto& fs = l.cat().field();
  // f.s0: L0 -> M1, f.s1: L1 -> M0
  auto block = [&](const RepMorphism& dm, const RepMorphism& off, const RepMorphism& dl) {
    RepMorphism r;
    for (size_t v = 0; v < dm.f.size(); ++v)
      r.f.push_back(block2(dm.f[v], off.f[v], FpMatrix(dl.f[v].rows, dm.f[v].cols), dl.f[v]));
    return r;
  };
  Cx2 e{direct_sum(m.m0, l.m0), direct_sum(m.m1, l.m1), block(m.d0, f.s0, l.d0), block(m.d1, f.s1, l.d1)};
  if (!is_zero(compose(e.d1, e.d0, fs)) || !is_zero(compose(e.d0, e.d1, fs)))
    throw SignConventionBroken("middle term differential does not square to zero");
  return e;
}

struct ExtClass2 {
  Cx2Morphism f;
  Cx2 middle;
};

/// One representative per homotopy class of chain maps L -> shift(M), with its middle term.
inline std::vector<ExtClass2> ext1_classes_proj(const Cx2& l, const Cx2& m) {
  require_same(l.cat(), m.cat());
  if (!has_projective_components(l)) throw PreconditionError("first argument needs projective components");
  Cx2 sm = shift(m);
  auto gens = homotopy_class_generators(l, sm);
  int k = static_cast<int>(gens.size());
  const auto& fs = l.cat().field();
  check_budget(fs.p, k, "ext1_classes_proj");
  Rep rl = to_rep(l), rs = to_rep(sm);
  std::vector<RepMorphism> ext_gens;
  for (const auto& g : gens) ext_gens.push_back(to_ext(g));
  std::vector<ExtClass2> out;
  for_each_vector(k, fs.p, [&](const Vec& c) {
    auto f = from_ext(combine(ext_gens, c, rl, rs), l.cat().n());
    out.push_back({f, middle_term(l, m, f)});
    return false;
  });
  return out;
}

// --- decomposition -----------------------------------------------------------------------------

enum class SummandKind { KP, KPstar, Other };

struct Summand2 {
  Cx2 cx;
  SummandKind kind = SummandKind::Other;
  Rep p;  // the projective P for K_P / K_P*
};

inline std::vector<Cx2> decompose2_raw(const Cx2& x) {
  if (x.total_dim() > 12) throw BudgetExceeded("decompose2 is limited to total dimension 12");
  std::vector<Cx2> out;
  for (const auto& r : decompose_rep(to_rep(x))) out.push_back(from_rep(r, x.cat()));
  return out;
}

inline Summand2 classify_summand(const Cx2& s) {
  const auto& fs = s.cat().field();
  Summand2 out{s, SummandKind::Other, Rep::zero(s.cat())};
  if (!has_projective_components(s) || !is_acyclic(s)) return out;
  bool d0_iso = is_iso_morphism(s.d0, fs), d1_iso = is_iso_morphism(s.d1, fs);
  if (d0_iso && is_zero(s.d1)) out = {s, SummandKind::KP, s.m0};
  else if (d1_iso && is_zero(s.d0)) out = {s, SummandKind::KPstar, s.m0};
  return out;
}

inline std::vector<Summand2> decompose2(const Cx2& x) {
  std::vector<Summand2> out;
  for (const auto& s : decompose2_raw(x)) out.push_back(classify_summand(s));
  return out;
}

inline std::string cx2_dims(const Cx2& x) { return dim_str(x.m0.dim) + "<->" + dim_str(x.m1.dim); }

}  // namespace sdh
