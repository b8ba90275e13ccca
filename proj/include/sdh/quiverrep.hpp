#pragma once
// rep_k(Q) for acyclic Q: projectives, simples, resolutions, Ext, iso-class keys, reflection.

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sdh/quiver.hpp"

namespace sdh {

inline Category make_category(const Quiver& q, int p) { return Category(q, FieldSpec(p)); }

inline int euler_form_int(const Quiver& q, const DimVector& d, const DimVector& e) {
  if (static_cast<int>(d.size()) != q.n || static_cast<int>(e.size()) != q.n)
    throw ShapeError("dimension vector length mismatch");
  int s = 0;
  for (int i = 0; i < q.n; ++i) s += d[i] * e[i];
  for (auto [a, b] : q.arrows) s -= d[a] * e[b];
  return s;
}

inline DimVector dim_add(const DimVector& a, const DimVector& b) {
  DimVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline DimVector dim_sub(const DimVector& a, const DimVector& b) {
  DimVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline DimVector dim_neg(const DimVector& a) { return dim_sub(DimVector(a.size(), 0), a); }

inline bool dim_is_zero(const DimVector& a) {
  for (int x : a)
    if (x) return false;
  return true;
}

inline std::string dim_str(const DimVector& d) {
  std::string s = "(";
  for (size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

inline void check_vertex(const Category& c, int i) {
  if (i < 0 || i >= c.n()) throw IndexError("vertex " + std::to_string(i + 1) + " out of range");
}

// --- paths and projectives ---------------------------------------------------------

struct Path {
  int target;
  std::vector<int> arrows;  // applied first to last
};

/// Paths starting at i ordered by length, then arrow sequence.
inline std::vector<Path> paths_from(const Quiver& q, int i) {
  if (!q.is_acyclic()) throw PreconditionError("path algebra needs an acyclic quiver");
  std::vector<Path> out{{i, {}}};
  for (size_t k = 0; k < out.size(); ++k)
    for (int a = 0; a < q.num_arrows(); ++a)
      if (q.arrows[a].first == out[k].target) {
        Path p = out[k];
        p.arrows.push_back(a);
        p.target = q.arrows[a].second;
        out.push_back(p);
      }
  return out;
}

/// Basis of P_i at each vertex: indices into paths_from.
inline std::vector<std::vector<int>> projective_layout(const Quiver& q, const std::vector<Path>& ps) {
  std::vector<std::vector<int>> at(q.n);
  for (size_t k = 0; k < ps.size(); ++k) at[ps[k].target].push_back(static_cast<int>(k));
  return at;
}

inline Rep projective(const Category& c, int i) {
  check_vertex(c, i);
  return *c.cached<Rep>("P" + std::to_string(i), [&] {
    const Quiver& q = c.quiver();
    auto ps = paths_from(q, i);
    auto at = projective_layout(q, ps);
    DimVector d(q.n);
    for (int j = 0; j < q.n; ++j) d[j] = static_cast<int>(at[j].size());
    std::vector<FpMatrix> maps;
    for (int a = 0; a < q.num_arrows(); ++a) {
      auto [s, t] = q.arrows[a];
      FpMatrix m(d[t], d[s]);
      for (int col = 0; col < d[s]; ++col) {
        std::vector<int> ext = ps[at[s][col]].arrows;
        ext.push_back(a);
        for (int row = 0; row < d[t]; ++row)
          if (ps[at[t][row]].arrows == ext) m(row, col) = 1;
      }
      maps.push_back(m);
    }
    return Rep(c, d, maps);
  });
}

inline Rep simple(const Category& c, int i) {
  check_vertex(c, i);
  DimVector d(c.n(), 0);
  d[i] = 1;
  return Rep(c, d, Rep::zero_maps(c, d));
}

/// The morphism P_i -> M sending the trivial path to m in M_i.
inline RepMorphism from_projective(const Category& c, int i, const Rep& m, const Vec& elt) {
  const Quiver& q = c.quiver();
  const auto& fs = c.field();
  auto ps = paths_from(q, i);
  auto at = projective_layout(q, ps);
  RepMorphism f;
  for (int j = 0; j < q.n; ++j) {
    FpMatrix col(m.dim[j], static_cast<int>(at[j].size()));
    for (size_t k = 0; k < at[j].size(); ++k) {
      Vec v = elt;
      for (int a : ps[at[j][k]].arrows) v = mat_vec(m.maps[a], v, fs);
      for (int r = 0; r < m.dim[j]; ++r) col(r, static_cast<int>(k)) = v[r];
    }
    f.f.push_back(col);
  }
  return f;
}

inline Rep projective_sum(const Category& c, const DimVector& mult) {
  Rep acc = Rep::zero(c);
  for (int i = 0; i < c.n(); ++i)
    for (int k = 0; k < mult[i]; ++k) acc = direct_sum(acc, projective(c, i));
  return acc;
}

inline DimVector projective_dim(const Category& c, const DimVector& mult) {
  DimVector d(c.n(), 0);
  for (int i = 0; i < c.n(); ++i)
    if (mult[i]) {
      auto p = projective(c, i);
      for (int j = 0; j < c.n(); ++j) d[j] += mult[i] * p.dim[j];
    }
  return d;
}

/// rad M at vertex i: sum of images of incoming arrows.
inline std::vector<FpMatrix> radical_basis(const Rep& m) {
  const Quiver& q = m.cat.quiver();
  const auto& fs = m.cat.field();
  std::vector<FpMatrix> rad;
  for (int i = 0; i < q.n; ++i) {
    FpMatrix acc(m.dim[i], 0);
    for (int a = 0; a < q.num_arrows(); ++a)
      if (q.arrows[a].second == i) acc = hstack(acc, m.maps[a]);
    rad.push_back(column_space(acc, fs));
  }
  return rad;
}

struct ProjectiveCover {
  DimVector top;  // multiplicity of each P_i
  Rep p;
  RepMorphism cover;  // p -> M, surjective
};

inline ProjectiveCover projective_cover(const Rep& m) {
  const Category& c = m.cat;
  const auto& fs = c.field();
  auto rad = radical_basis(m);
  ProjectiveCover pc;
  pc.top.assign(c.n(), 0);
  pc.p = Rep::zero(c);
  std::vector<FpMatrix> blocks(c.n());
  for (int j = 0; j < c.n(); ++j) blocks[j] = FpMatrix(m.dim[j], 0);
  for (int i = 0; i < c.n(); ++i) {
    FpMatrix gens = complement_basis(rad[i], fs);
    pc.top[i] = gens.cols;
    for (int g = 0; g < gens.cols; ++g) {
      auto f = from_projective(c, i, m, gens.column(g));
      pc.p = direct_sum(pc.p, projective(c, i));
      for (int j = 0; j < c.n(); ++j) blocks[j] = hstack(blocks[j], f.f[j]);
    }
  }
  pc.cover.f = blocks;
  return pc;
}

struct ProjResolution {
  Rep p1, p0;
  RepMorphism incl;   // p1 -> p0
  RepMorphism cover;  // p0 -> A
  DimVector top0, top1;
};

/// 0 -> P1 -> P0 -> A -> 0 with both terms written as standard sums of P_i.
inline ProjResolution min_proj_resolution(const Rep& a) {
  const auto& fs = a.cat.field();
  auto pc = projective_cover(a);
  auto k = kernel(pc.p, pc.cover);
  auto kc = projective_cover(k.rep);
  ProjResolution r;
  r.p0 = pc.p;
  r.cover = pc.cover;
  r.top0 = pc.top;
  r.p1 = kc.p;
  r.top1 = kc.top;
  r.incl = compose(k.incl, kc.cover, fs);
  return r;
}

inline bool is_projective(const Rep& a) { return dim_is_zero(min_proj_resolution(a).top1); }

/// Hom(P0,N) -> Hom(P1,N) by precomposition: returns (basis of Hom(P1,N), image vectors).
struct ExtPresentation {
  ProjResolution res;
  std::vector<RepMorphism> hom_p1;
  std::vector<Vec> image;          // coordinates in hom_p1 of restricted Hom(P0,N)
  std::vector<int> complement;     // indices of hom_p1 spanning a complement of image
};

inline ExtPresentation ext_presentation(const Rep& m, const Rep& n) {
  require_same(m.cat, n.cat);
  const auto& fs = m.cat.field();
  ExtPresentation e;
  e.res = min_proj_resolution(m);
  e.hom_p1 = hom_basis(e.res.p1, n);
  int h = static_cast<int>(e.hom_p1.size());
  std::vector<Vec> cols;
  for (const auto& b : e.hom_p1) cols.push_back(morphism_to_vector(b));
  int amb = 0;
  for (size_t i = 0; i < n.dim.size(); ++i) amb += n.dim[i] * e.res.p1.dim[i];
  FpMatrix basis = FpMatrix::from_columns(cols, amb);
  for (const auto& g : hom_basis(e.res.p0, n)) {
    auto r = compose(g, e.res.incl, fs);
    auto co = solve_linear(basis, morphism_to_vector(r), fs);
    if (!co) throw ConversionMismatch("restricted morphism outside Hom(P1,N)");
    e.image.push_back(*co);
  }
  FpMatrix span = FpMatrix::from_columns(e.image, h);
  int rk = rank(span, fs);
  for (int j = 0; j < h; ++j) {
    Vec ej(h, 0);
    ej[j] = 1;
    FpMatrix trial = hstack(span, FpMatrix::from_columns({ej}, h));
    int r2 = rank(trial, fs);
    if (r2 > rk) {
      span = trial;
      rk = r2;
      e.complement.push_back(j);
    }
  }
  return e;
}

inline int ext1_dim_resolution(const Rep& m, const Rep& n) {
  return static_cast<int>(ext_presentation(m, n).complement.size());
}

inline int ext1_dim(const Rep& m, const Rep& n) {
  require_same(m.cat, n.cat);
  int via_form = hom_dim(m, n) - euler_form_int(m.cat.quiver(), m.dim, n.dim);
  int via_res = ext1_dim_resolution(m, n);
  if (via_form != via_res) throw ConversionMismatch("Ext^1 dimension disagrees between routes");
  return via_res;
}

// --- iso-class keys ----------------------------------------------------------------------

struct IsoClassKey {
  std::shared_ptr<const Rep> rep;

  const Rep& canon() const { return *rep; }
  const DimVector& dim() const { return rep->dim; }
  bool is_zero() const { return rep->total_dim() == 0; }
  std::string content() const { return rep->content(); }

  friend bool operator==(const IsoClassKey& a, const IsoClassKey& b) {
    return a.rep == b.rep || *a.rep == *b.rep;
  }
  friend bool operator!=(const IsoClassKey& a, const IsoClassKey& b) { return !(a == b); }
  friend bool operator<(const IsoClassKey& a, const IsoClassKey& b) {
    if (a.rep == b.rep) return false;
    return rep_lex_less(*a.rep, *b.rep);
  }
};

inline std::ostream& operator<<(std::ostream& os, const IsoClassKey& k) { return os << "<" << k.content() << ">"; }

/// Lex-smallest representative with dim d isomorphic to m.
inline Rep canonical_representative(const Rep& m) {
  const Category& c = m.cat;
  const Quiver& q = c.quiver();
  int entries = 0;
  for (auto [s, t] : q.arrows) entries += m.dim[s] * m.dim[t];
  auto target_ranks = rank_profile(m);
  long long tried = 0;
  std::optional<Rep> found;
  for_each_vector(entries, c.q(), [&](const Vec& v) {
    if (++tried > kScanBudget) throw BudgetExceeded("canonical representative search exceeds 2^20");
    std::vector<FpMatrix> maps;
    size_t k = 0;
    for (auto [s, t] : q.arrows) {
      FpMatrix x(m.dim[t], m.dim[s]);
      for (auto& e : x.e) e = v[k++];
      maps.push_back(std::move(x));
    }
    Rep cand(c, m.dim, maps);
    if (rank_profile(cand) != target_ranks) return false;
    if (!is_isomorphic(cand, m)) return false;
    found = cand;
    return true;
  });
  if (!found) throw BudgetExceeded("no representative found");
  return *found;
}

inline IsoClassKey intern(const Rep& m) {
  auto& reg = m.cat.registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  std::string content = m.content();
  auto hit = reg.memo.find(content);
  if (hit != reg.memo.end()) return {hit->second};
  auto& bucket = reg.classes[m.dim];
  for (const auto& known : bucket)
    if (is_isomorphic(*known, m)) {
      reg.memo.emplace(content, known);
      return {known};
    }
  auto canon = std::make_shared<const Rep>(canonical_representative(m));
  auto pos = std::lower_bound(bucket.begin(), bucket.end(), canon,
                              [](const auto& x, const auto& y) { return rep_lex_less(*x, *y); });
  bucket.insert(pos, canon);
  reg.memo.emplace(content, canon);
  reg.memo.emplace(canon->content(), canon);
  return {canon};
}

inline IsoClassKey zero_key(const Category& c) { return intern(Rep::zero(c)); }

/// Indecomposable summands as a sorted multiset of keys.
inline std::vector<IsoClassKey> decompose(const Rep& m) {
  if (m.total_dim() > 12) throw BudgetExceeded("decompose is limited to total dimension 12");
  std::vector<IsoClassKey> out;
  for (const auto& s : decompose_rep(m)) out.push_back(intern(s));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Embedded> submodules_with_dim(const Rep& c, const DimVector& d) {
  if (c.total_dim() > 6) throw BudgetExceeded("submodule enumeration is limited to total dimension 6");
  std::vector<Embedded> out;
  for (const auto& fam : stable_subspace_families(c, d)) out.push_back(subrep(c, fam));
  return out;
}

/// Readable name: S_i, P_i or the dimension vector per indecomposable summand.
inline std::string key_label(const IsoClassKey& k) {
  const Rep& m = k.canon();
  const Category& c = m.cat;
  if (m.total_dim() == 0) return "0";
  std::map<std::string, int> counts;
  std::vector<std::string> order;
  for (const auto& part : decompose(m)) {
    std::string name;
    for (int i = 0; i < c.n() && name.empty(); ++i) {
      if (part.dim() == simple(c, i).dim) name = "S" + std::to_string(i + 1);
      else if (c.quiver().is_acyclic() && part.dim() == projective(c, i).dim &&
               is_isomorphic(part.canon(), projective(c, i)))
        name = "P" + std::to_string(i + 1);
    }
    if (name.empty()) {
      name = "M";
      for (int x : part.dim()) name += std::to_string(x);
    }
    if (!counts[name]++) order.push_back(name);
  }
  std::string s;
  for (const auto& n : order) {
    if (!s.empty()) s += "+";
    if (counts[n] > 1) s += std::to_string(counts[n]);
    s += n;
  }
  return s;
}

// --- reflection at a sink ----------------------------------------------------------------

inline Quiver reflected_quiver(const Quiver& q, int i) {
  auto arr = q.arrows;
  for (auto& [s, t] : arr)
    if (s == i || t == i) std::swap(s, t);
  return Quiver(q.n, arr);
}

inline DimVector weyl_reflect(const Quiver& q, int i, const DimVector& d) {
  DimVector r = d;
  int adj = 0;
  for (auto [s, t] : q.arrows) {
    if (t == i && s != i) adj += d[s];
    if (s == i && t != i) adj += d[t];
  }
  r[i] = adj - d[i];
  return r;
}

struct Reflected {
  Rep rep;
  FpMatrix kernel;                 // basis of the new space inside the incoming sum
  std::vector<int> incoming;       // arrows ending at the sink, in order
  std::vector<int> offsets;        // block offsets in the incoming sum
};

inline FpMatrix incoming_sum_map(const Rep& m, const std::vector<int>& incoming) {
  const Quiver& q = m.cat.quiver();
  int i = incoming.empty() ? 0 : q.arrows[incoming[0]].second;
  FpMatrix acc(incoming.empty() ? 0 : m.dim[i], 0);
  for (int a : incoming) acc = hstack(acc, m.maps[a]);
  return acc;
}

inline void check_sink(const Quiver& q, int i) {
  if (i < 0 || i >= q.n) throw IndexError("vertex out of range");
  if (!q.is_sink(i)) throw PreconditionError("vertex " + std::to_string(i + 1) + " is not a sink");
}

/// BGP reflection at sink i into rep(Q') with Q' = reflected_quiver(Q, i).
inline Reflected reflect_sink(const Rep& m, int i, const Category& target) {
  const Quiver& q = m.cat.quiver();
  const auto& fs = m.cat.field();
  check_sink(q, i);
  if (target.quiver() != reflected_quiver(q, i) || target.field() != m.cat.field())
    throw CategoryMismatch("target category is not the reflected quiver");
  Reflected r;
  int total = 0;
  for (int a = 0; a < q.num_arrows(); ++a)
    if (q.arrows[a].second == i) {
      r.incoming.push_back(a);
      r.offsets.push_back(total);
      total += m.dim[q.arrows[a].first];
    }
  FpMatrix sum(m.dim[i], total);
  for (size_t k = 0; k < r.incoming.size(); ++k) {
    const auto& x = m.maps[r.incoming[k]];
    for (int row = 0; row < x.rows; ++row)
      for (int col = 0; col < x.cols; ++col) sum(row, r.offsets[k] + col) = x(row, col);
  }
  if (rank(sum, fs) != m.dim[i])
    throw NotInSubcategory("representation has a direct summand S_" + std::to_string(i + 1));
  r.kernel = FpMatrix::from_columns(kernel_basis(sum, fs), total);
  DimVector d = m.dim;
  d[i] = r.kernel.cols;
  std::vector<FpMatrix> maps;
  for (int a = 0; a < q.num_arrows(); ++a) {
    auto [s, t] = q.arrows[a];
    if (t != i) {
      maps.push_back(m.maps[a]);
      continue;
    }
    size_t k = std::find(r.incoming.begin(), r.incoming.end(), a) - r.incoming.begin();
    maps.push_back(submatrix(r.kernel, r.offsets[k], 0, m.dim[s], r.kernel.cols));
  }
  r.rep = Rep(target, d, maps);
  return r;
}

/// The induced morphism between reflections of f: M -> N.
inline RepMorphism reflect_morphism(const Reflected& rm, const Reflected& rn, const RepMorphism& f,
                                    const Quiver& q, const FieldSpec& fs) {
  int i = -1;
  for (int a : rm.incoming) i = q.arrows[a].second;
  RepMorphism g = f;
  if (i < 0) return g;
  int tm = rm.kernel.rows, tn = rn.kernel.rows;
  FpMatrix big(tn, tm);
  for (size_t k = 0; k < rm.incoming.size(); ++k) {
    int s = q.arrows[rm.incoming[k]].first;
    const auto& fsx = f.f[s];
    for (int r = 0; r < fsx.rows; ++r)
      for (int c = 0; c < fsx.cols; ++c) big(rn.offsets[k] + r, rm.offsets[k] + c) = fsx(r, c);
  }
  auto co = coordinates(rn.kernel, mat_mul(big, rm.kernel, fs), fs);
  if (!co) throw ShapeError("reflected morphism does not preserve kernels");
  g.f[i] = *co;
  return g;
}

inline Reflected reflect_sink(const Rep& m, int i) {
  return reflect_sink(m, i, make_category(reflected_quiver(m.cat.quiver(), i), m.cat.q()));
}

}  // namespace sdh
