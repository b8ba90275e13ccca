#pragma once
// Hall algebra of rep_k(Q): Hall numbers, Bridgeland-normalised constants by two routes,
// twisted and extended products, Ringel's Serre relations.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sdh/lincomb.hpp"
#include "sdh/quiverrep.hpp"
#include "sdh/report.hpp"

namespace sdh {

using HallElement = LinComb<IsoClassKey>;

struct ExtKey {
  DimVector alpha;
  IsoClassKey key;
  friend bool operator<(const ExtKey& a, const ExtKey& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.key < b.key;
  }
  friend bool operator==(const ExtKey& a, const ExtKey& b) { return a.alpha == b.alpha && a.key == b.key; }
};

inline std::ostream& operator<<(std::ostream& os, const ExtKey& k) { return os << "K" << dim_str(k.alpha) << k.key; }

using ExtHallElement = LinComb<ExtKey>;

inline HallElement basis_element(const IsoClassKey& k) { return HallElement(k, CoeffScalar(1)); }
inline HallElement basis_element(const Rep& m) { return basis_element(intern(m)); }

inline std::string hall_str(const HallElement& x) {
  return x.str([](const IsoClassKey& k) { return "[" + key_label(k) + "]"; });
}

inline BigInt big_pow(int q, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= q;
  return r;
}

inline BigInt count_units_by_scan(const Rep& m) {
  auto basis = hom_basis(m, m);
  const auto& fs = m.cat.field();
  int h = static_cast<int>(basis.size());
  check_budget(fs.p, h, "aut_count");
  BigInt count = 0;
  for_each_vector(h, fs.p, [&](const Vec& c) {
    if (is_iso_morphism(combine(basis, c, m, m), fs)) ++count;
    return false;
  });
  return count;
}

/// |Aut M| = |End M| prod_i prod_{j<=m_i} (1 - q_i^{-j}) with q_i = |End X_i / rad|.
inline BigInt count_units_by_summands(const Rep& m) {
  int q = m.cat.q();
  std::vector<Rep> types;
  std::vector<int> mult;
  for (auto& x : decompose_rep(m)) {
    bool hit = false;
    for (size_t i = 0; i < types.size() && !hit; ++i)
      if (is_isomorphic(types[i], x)) ++mult[i], hit = true;
    if (!hit) types.push_back(x), mult.push_back(1);
  }
  Rational acc = Rational(big_pow(q, hom_dim(m, m)));
  for (size_t i = 0; i < types.size(); ++i) {
    int h = hom_dim(types[i], types[i]);
    BigInt units = count_units_by_scan(types[i]);
    BigInt rad = big_pow(q, h) - units;
    BigInt residue = big_pow(q, h) / rad;
    for (int j = 1; j <= mult[i]; ++j) {
      BigInt pj = 1;
      for (int t = 0; t < j; ++t) pj *= residue;
      acc *= Rational(pj - 1, pj);
    }
  }
  if (denominator(acc) != 1) throw ConversionMismatch("automorphism count is not an integer");
  return numerator(acc);
}

/// |Aut A|; scans End(A) when it fits the budget, else counts per indecomposable type.
inline BigInt aut_count(const IsoClassKey& a) {
  const Rep& m = a.canon();
  if (m.total_dim() > 6) throw BudgetExceeded("aut_count is limited to total dimension 6");
  return *m.cat.cached<BigInt>("aut:" + m.content(), [&] {
    if (ipow(m.cat.q(), hom_dim(m, m)) <= kScanBudget) return count_units_by_scan(m);
    return count_units_by_summands(m);
  });
}

/// #{C' in B : C' ~ C, B/C' ~ A}; the third argument is the middle term.
inline BigInt hall_number(const IsoClassKey& a, const IsoClassKey& c, const IsoClassKey& b) {
  const Rep& mb = b.canon();
  if (dim_add(a.dim(), c.dim()) != mb.dim) return 0;
  BigInt count = 0;
  for (const auto& sub : submodules_with_dim(mb, c.dim())) {
    if (!is_isomorphic(sub.rep, c.canon())) continue;
    auto qt = quotient(mb, sub.incl.f);
    if (is_isomorphic(qt.rep, a.canon())) ++count;
  }
  return count;
}

/// Middle term of the extension of A by C classified by phi: P1(A) -> C.
inline Rep pushout_middle(const Rep& c, const ProjResolution& res, const RepMorphism& phi) {
  const auto& fs = c.cat.field();
  Rep sum = direct_sum(c, res.p0);
  RepMorphism psi;
  for (size_t i = 0; i < phi.f.size(); ++i) psi.f.push_back(vstack(phi.f[i], mat_neg(res.incl.f[i], fs)));
  return cokernel(sum, psi).rep;
}

/// Number of classes in Ext^1(A,C) per middle-term iso class, with dim Hom(A,C).
struct ExtDistribution {
  std::map<IsoClassKey, BigInt> counts;
  int hom = 0;
  int ext = 0;
};

inline const ExtDistribution& ext_distribution(const IsoClassKey& a, const IsoClassKey& c) {
  const Rep& ma = a.canon();
  const Rep& mc = c.canon();
  return *ma.cat.cached<ExtDistribution>("extdist:" + ma.content() + "/" + mc.content(), [&] {
    ExtDistribution d;
    d.hom = hom_dim(ma, mc);
    auto pres = ext_presentation(ma, mc);
    d.ext = static_cast<int>(pres.complement.size());
    check_budget(ma.cat.q(), d.ext, "extension enumeration");
    std::vector<RepMorphism> gens;
    for (int j : pres.complement) gens.push_back(pres.hom_p1[j]);
    for_each_vector(d.ext, ma.cat.q(), [&](const Vec& v) {
      auto phi = combine(gens, v, pres.res.p1, mc);
      d.counts[intern(pushout_middle(mc, pres.res, phi))] += 1;
      return false;
    });
    return d;
  });
}

inline CoeffScalar ext_constant_by_extensions(const IsoClassKey& a, const IsoClassKey& c, const IsoClassKey& b) {
  const auto& d = ext_distribution(a, c);
  auto it = d.counts.find(b);
  if (it == d.counts.end()) return CoeffScalar(0);
  return CoeffScalar(Rational(it->second, big_pow(a.canon().cat.q(), d.hom)));
}

inline CoeffScalar ext_constant_by_subobjects(const IsoClassKey& a, const IsoClassKey& c, const IsoClassKey& b) {
  BigInt g = hall_number(a, c, b);
  if (g == 0) return CoeffScalar(0);
  return CoeffScalar(Rational(g * aut_count(a) * aut_count(c), aut_count(b)));
}

/// |Ext^1(A,C)_B| / |Hom(A,C)|, computed by both routes.
inline CoeffScalar ext_constant(const IsoClassKey& a, const IsoClassKey& c, const IsoClassKey& b) {
  auto x = ext_constant_by_subobjects(a, c, b);
  auto y = ext_constant_by_extensions(a, c, b);
  if (x != y)
    throw ConversionMismatch("structure constant routes disagree: " + x.str() + " vs " + y.str());
  return y;
}

#ifdef NDEBUG
inline constexpr bool kAlwaysCrossCheck = false;
#else
inline constexpr bool kAlwaysCrossCheck = true;
#endif

inline bool sampled_cross_check(const IsoClassKey& a, const IsoClassKey& c) {
  if (kAlwaysCrossCheck) return true;
  return std::hash<std::string>{}(a.content() + "/" + c.content()) % 16 == 0;
}

inline HallElement hall_product_basis(const IsoClassKey& a, const IsoClassKey& c) {
  const auto& d = ext_distribution(a, c);
  HallElement out;
  BigInt denom = big_pow(a.canon().cat.q(), d.hom);
  bool check = sampled_cross_check(a, c) && a.canon().total_dim() + c.canon().total_dim() <= 6;
  for (const auto& [b, n] : d.counts) {
    CoeffScalar k(Rational(n, denom));
    if (check && ext_constant_by_subobjects(a, c, b) != k)
      throw ConversionMismatch("structure constant routes disagree for " + key_label(a) + ", " + key_label(c));
    out.add(b, k);
  }
  return out;
}

inline HallElement hall_product(const HallElement& x, const HallElement& y) {
  return bilinear<IsoClassKey>(x, y, hall_product_basis);
}

inline HallElement twisted_product(const HallElement& x, const HallElement& y) {
  return bilinear<IsoClassKey>(x, y, [](const IsoClassKey& a, const IsoClassKey& b) {
    const Rep& ma = a.canon();
    int e = euler_form_int(ma.cat.quiver(), a.dim(), b.dim());
    return hall_product_basis(a, b) * CoeffScalar::v_power(ma.cat.q(), e);
  });
}

inline int symmetric_form(const Quiver& q, const DimVector& a, const DimVector& b) {
  return euler_form_int(q, a, b) + euler_form_int(q, b, a);
}

inline ExtHallElement ext_basis(const DimVector& alpha, const IsoClassKey& k) {
  return ExtHallElement(ExtKey{alpha, k}, CoeffScalar(1));
}

/// (K_a [A]) * (K_b [B]) = v^{-(b, A)} K_{a+b} ([A] * [B]).
inline ExtHallElement extended_product(const ExtHallElement& x, const ExtHallElement& y) {
  return bilinear<ExtKey>(x, y, [](const ExtKey& s, const ExtKey& t) {
    const Rep& ma = s.key.canon();
    int q = ma.cat.q();
    int e = -symmetric_form(ma.cat.quiver(), t.alpha, s.key.dim());
    auto prod = twisted_product(basis_element(s.key), basis_element(t.key));
    ExtHallElement out;
    DimVector ab = dim_add(s.alpha, t.alpha);
    for (const auto& [k, c] : prod.terms) out.add(ExtKey{ab, k}, c * CoeffScalar::v_power(q, e));
    return out;
  });
}

inline std::string ext_hall_str(const ExtHallElement& x) {
  return x.str([](const ExtKey& k) {
    std::string s = dim_is_zero(k.alpha) ? "" : "K" + dim_str(k.alpha);
    return s + "[" + key_label(k.key) + "]";
  });
}

/// Iso classes of all representations with total dimension <= bound, sorted.
inline std::vector<IsoClassKey> iso_classes_up_to(const Category& c, int bound) {
  const Quiver& q = c.quiver();
  std::set<IsoClassKey> seen;
  DimVector d(q.n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == q.n) {
      int entries = 0;
      for (auto [s, t] : q.arrows) entries += d[s] * d[t];
      check_budget(c.q(), entries, "iso class enumeration");
      for_each_vector(entries, c.q(), [&](const Vec& v) {
        std::vector<FpMatrix> maps;
        size_t k = 0;
        for (auto [s, t] : q.arrows) {
          FpMatrix x(d[t], d[s]);
          for (auto& e : x.e) e = v[k++];
          maps.push_back(std::move(x));
        }
        seen.insert(intern(Rep(c, d, maps)));
        return false;
      });
      return;
    }
    for (int k = 0; k <= left; ++k) {
      d[i] = k;
      rec(i + 1, left - k);
    }
    d[i] = 0;
  };
  rec(0, bound);
  return {seen.begin(), seen.end()};
}

inline std::vector<std::pair<int, int>> underlying_edges(const Quiver& q) {
  std::set<std::pair<int, int>> e;
  for (auto [s, t] : q.arrows)
    if (s != t) e.insert({std::min(s, t), std::max(s, t)});
  return {e.begin(), e.end()};
}

/// Quantum Serre relations for E_i = [S_i]/(q-1) in the twisted Hall algebra.
inline Report verify_ringel(const Category& c) {
  const Quiver& q = c.quiver();
  int p = c.q();
  Report rep;
  rep.suite = "ringel";
  std::vector<HallElement> e;
  for (int i = 0; i < q.n; ++i) e.push_back(basis_element(simple(c, i)) * CoeffScalar(Rational(1, p - 1)));
  auto mul = [](const HallElement& x, const HallElement& y) { return twisted_product(x, y); };
  CoeffScalar vv = CoeffScalar::v_power(p, 1) + CoeffScalar::v_power(p, -1);
  auto edges = underlying_edges(q);
  for (int i = 0; i < q.n; ++i)
    for (int j = 0; j < q.n; ++j) {
      if (i == j) continue;
      bool adj = std::find(edges.begin(), edges.end(), std::make_pair(std::min(i, j), std::max(i, j))) != edges.end();
      std::string tag = std::to_string(i + 1) + "," + std::to_string(j + 1);
      if (adj) {
        auto eii = mul(e[i], e[i]);
        auto lhs = mul(eii, e[j]) + mul(e[j], eii) - vv * mul(mul(e[i], e[j]), e[i]);
        rep.add("serre(" + tag + ")", lhs.is_zero(), hall_str(lhs), "0");
      } else if (i < j) {
        auto lhs = mul(e[i], e[j]) - mul(e[j], e[i]);
        rep.add("commute(" + tag + ")", lhs.is_zero(), hall_str(lhs), "0");
      }
    }
  return rep;
}

}  // namespace sdh
