#include <gtest/gtest.h>

#include <random>

#include "sdh/quiverrep.hpp"

using namespace sdh;

namespace {

Category a2(int q = 2) { return make_category(Quiver::linear_a(2), q); }
Category a3(int q = 2) { return make_category(Quiver::linear_a(3), q); }
Category vect(int q = 2) { return make_category(Quiver(1, {}), q); }

Rep rep_a2(const Category& c, int d1, int d2, std::vector<int> entries) {
  return Rep(c, {d1, d2}, {FpMatrix(d2, d1, std::move(entries))});
}

Rep random_rep(std::mt19937& rng, const Category& c, const DimVector& d) {
  std::vector<FpMatrix> maps;
  for (auto [s, t] : c.quiver().arrows) {
    FpMatrix m(d[t], d[s]);
    for (auto& x : m.e) x = static_cast<int>(rng() % c.q());
    maps.push_back(m);
  }
  return Rep(c, d, maps);
}

std::vector<FpMatrix> random_gl(std::mt19937& rng, const Rep& m) {
  const auto& fs = m.cat.field();
  std::vector<FpMatrix> g;
  for (int d : m.dim) {
    while (true) {
      FpMatrix x(d, d);
      for (auto& e : x.e) e = static_cast<int>(rng() % fs.p);
      if (is_invertible(x, fs)) {
        g.push_back(x);
        break;
      }
    }
  }
  return g;
}

// all reps of A2 with total dimension <= n
std::vector<Rep> all_a2_reps(const Category& c, int n) {
  std::vector<Rep> out;
  for (int d1 = 0; d1 <= n; ++d1)
    for (int d2 = 0; d1 + d2 <= n; ++d2)
      for_each_vector(d1 * d2, c.q(), [&](const Vec& v) {
        out.push_back(rep_a2(c, d1, d2, v));
        return false;
      });
  return out;
}

}  // namespace

TEST(Quiver, RejectsCycles) {
  EXPECT_THROW(Quiver::from_one_indexed(2, {{1, 2}, {2, 1}}), InputError);
  EXPECT_THROW(Quiver(2, {{0, 2}}), IndexError);
  EXPECT_NO_THROW(Quiver::from_one_indexed(3, {{1, 2}, {2, 3}}));
}

TEST(Rep, ShapeChecks) {
  auto c = a2();
  EXPECT_THROW(Rep(c, {1, 1}, {FpMatrix(2, 1)}), ShapeError);
  EXPECT_THROW(Rep(c, {1, 1}, {FpMatrix(1, 1, {2})}), ShapeError);
  EXPECT_THROW(Rep(c, {1}, {}), ShapeError);
}

TEST(HomBasis, Examples) {
  auto c = a2();
  EXPECT_TRUE(hom_basis(simple(c, 0), simple(c, 1)).empty());
  EXPECT_EQ(hom_basis(simple(c, 0), simple(c, 0)).size(), 1u);
  EXPECT_EQ(hom_basis(projective(c, 0), simple(c, 0)).size(), 1u);
  EXPECT_THROW(hom_basis(simple(c, 0), simple(a2(3), 0)), CategoryMismatch);
}

TEST(HomBasis, MatchesEnumerationOfAllMaps) {
  auto c = a2();
  auto pool = all_a2_reps(c, 3);
  const auto& fs = c.field();
  std::mt19937 rng(1);
  for (int t = 0; t < 40; ++t) {
    const Rep& m = pool[rng() % pool.size()];
    const Rep& n = pool[rng() % pool.size()];
    int vars = m.dim[0] * n.dim[0] + m.dim[1] * n.dim[1];
    long long count = 0;
    for_each_vector(vars, fs.p, [&](const Vec& v) {
      if (is_morphism(m, n, morphism_from_vector(m.dim, n.dim, v))) ++count;
      return false;
    });
    EXPECT_EQ(count, ipow(fs.p, static_cast<int>(hom_basis(m, n).size())));
    for (const auto& b : hom_basis(m, n)) EXPECT_TRUE(is_morphism(m, n, b));
  }
}

TEST(EulerForm, Examples) {
  Quiver q = Quiver::linear_a(2);
  EXPECT_EQ(euler_form_int(q, {1, 0}, {0, 1}), -1);
  EXPECT_EQ(euler_form_int(q, {2, 3}, {0, 0}), 0);
  EXPECT_EQ(euler_form_int(q, {1, 1}, {1, 1}), 1);
  EXPECT_THROW(euler_form_int(q, {1}, {1, 1}), ShapeError);
}

TEST(Ext1, Examples) {
  auto c = a2();
  EXPECT_EQ(ext1_dim(simple(c, 0), simple(c, 1)), 1);
  EXPECT_EQ(ext1_dim(simple(c, 1), simple(c, 0)), 0);
  EXPECT_EQ(ext1_dim(projective(c, 0), simple(c, 1)), 0);
  EXPECT_EQ(ext1_dim(projective(c, 1), simple(c, 0)), 0);
}

TEST(Ext1, HereditaryEulerIdentityOnAllSmallPairs) {
  auto c = a2();
  auto pool = all_a2_reps(c, 4);
  for (const auto& m : pool)
    for (const auto& n : pool) {
      if (m.total_dim() + n.total_dim() > 4) continue;
      EXPECT_EQ(hom_dim(m, n) - ext1_dim_resolution(m, n), euler_form_int(c.quiver(), m.dim, n.dim));
    }
}

TEST(IsIsomorphic, Examples) {
  auto c = a2();
  auto m = rep_a2(c, 1, 1, {1});
  EXPECT_TRUE(is_isomorphic(m, m));
  EXPECT_FALSE(is_isomorphic(simple(c, 0), simple(c, 1)));
  EXPECT_FALSE(is_isomorphic(rep_a2(c, 1, 1, {1}), rep_a2(c, 1, 1, {0})));
}

TEST(IsIsomorphic, EquivalenceRelationOnPool) {
  auto c = a2(3);
  std::mt19937 rng(30);
  std::vector<Rep> pool;
  for (int t = 0; t < 30; ++t) pool.push_back(random_rep(rng, c, {1 + t % 2, 1 + (t / 2) % 2}));
  int n = static_cast<int>(pool.size());
  std::vector<std::vector<char>> iso(n, std::vector<char>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) iso[i][j] = is_isomorphic(pool[i], pool[j]);
  for (int i = 0; i < n; ++i) {
    EXPECT_TRUE(iso[i][i]);
    for (int j = 0; j < n; ++j) {
      EXPECT_EQ(iso[i][j], iso[j][i]);
      for (int k = 0; k < n; ++k)
        if (iso[i][j] && iso[j][k]) EXPECT_TRUE(iso[i][k]);
    }
  }
}

TEST(Projective, Dimensions) {
  EXPECT_EQ(projective(a2(), 0).dim, (DimVector{1, 1}));
  EXPECT_EQ(projective(a2(), 1).dim, (DimVector{0, 1}));
  EXPECT_EQ(projective(vect(), 0), simple(vect(), 0));
  EXPECT_EQ(projective(a3(), 0).dim, (DimVector{1, 1, 1}));
  EXPECT_THROW(projective(a2(), 2), IndexError);
  EXPECT_THROW(simple(a2(), -1), IndexError);
}

TEST(Projective, PathCountOracleOnBranchingQuiver) {
  // D4-like: 1->2, 1->3, 1->4, plus 2->4
  Quiver q = Quiver::from_one_indexed(4, {{1, 2}, {1, 3}, {1, 4}, {2, 4}});
  auto c = make_category(q, 2);
  EXPECT_EQ(projective(c, 0).dim, (DimVector{1, 1, 1, 2}));
  EXPECT_TRUE(is_projective(projective(c, 0)));
  EXPECT_FALSE(is_projective(simple(c, 0)));
}

TEST(Resolution, Examples) {
  auto c = a2();
  auto r = min_proj_resolution(simple(c, 0));
  EXPECT_TRUE(is_isomorphic(r.p1, projective(c, 1)));
  EXPECT_TRUE(is_isomorphic(r.p0, projective(c, 0)));
  auto r2 = min_proj_resolution(simple(c, 1));
  EXPECT_EQ(r2.p1.total_dim(), 0);
  EXPECT_TRUE(is_isomorphic(r2.p0, projective(c, 1)));
  auto r3 = min_proj_resolution(projective(c, 0));
  EXPECT_EQ(r3.p1.total_dim(), 0);
}

TEST(Resolution, ExactOnRandomReps) {
  auto c = a3(3);
  std::mt19937 rng(4);
  const auto& fs = c.field();
  for (int t = 0; t < 30; ++t) {
    auto m = random_rep(rng, c, {static_cast<int>(rng() % 3), static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)});
    auto r = min_proj_resolution(m);
    EXPECT_TRUE(is_morphism(r.p1, r.p0, r.incl));
    EXPECT_TRUE(is_morphism(r.p0, m, r.cover));
    EXPECT_TRUE(is_zero(compose(r.cover, r.incl, fs)));
    for (int i = 0; i < 3; ++i) {
      EXPECT_EQ(rank(r.cover.f[i], fs), m.dim[i]);
      EXPECT_EQ(rank(r.incl.f[i], fs), r.p1.dim[i]);
      EXPECT_EQ(r.p0.dim[i] - r.p1.dim[i], m.dim[i]);
    }
  }
}

TEST(Decompose, Examples) {
  auto c = a2();
  auto s1 = simple(c, 0), s2 = simple(c, 1), p1 = projective(c, 0);
  EXPECT_EQ(decompose(s1), (std::vector<IsoClassKey>{intern(s1)}));
  EXPECT_EQ(decompose(direct_sum(s1, s1)), (std::vector<IsoClassKey>{intern(s1), intern(s1)}));
  auto parts = decompose(direct_sum(p1, s2));
  ASSERT_EQ(parts.size(), 2u);
  auto expect = std::vector<IsoClassKey>{intern(p1), intern(s2)};
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(parts, expect);
}

TEST(Decompose, InvariantUnderBaseChange) {
  auto c = a3(2);
  std::mt19937 rng(50);
  auto m = direct_sum(direct_sum(projective(c, 0), simple(c, 1)), projective(c, 1));
  auto base = decompose(m);
  EXPECT_EQ(base.size(), 3u);
  for (int t = 0; t < 50; ++t) EXPECT_EQ(decompose(base_change(m, random_gl(rng, m))), base);
}

TEST(IsoClassKey, EqualIffIsomorphic) {
  auto c = a2(3);
  std::mt19937 rng(9);
  std::vector<Rep> pool;
  for (int t = 0; t < 20; ++t) pool.push_back(random_rep(rng, c, {1 + t % 2, 1 + (t / 3) % 2}));
  for (const auto& x : pool)
    for (const auto& y : pool) EXPECT_EQ(intern(x) == intern(y), is_isomorphic(x, y));
}

TEST(IsoClassKey, CanonicalIsLexSmallest) {
  auto c = a2();
  auto k = intern(rep_a2(c, 2, 2, {1, 1, 0, 1}));
  EXPECT_EQ(k.canon().maps[0].e, (std::vector<int>{0, 1, 1, 0}));
  EXPECT_EQ(intern(rep_a2(c, 1, 1, {1})).canon().maps[0].e, (std::vector<int>{1}));
}

TEST(Submodules, Examples) {
  auto v = vect();
  auto k2 = direct_sum(simple(v, 0), simple(v, 0));
  EXPECT_EQ(submodules_with_dim(k2, {1}).size(), 3u);
  EXPECT_EQ(submodules_with_dim(k2, {2}).size(), 1u);
  EXPECT_EQ(submodules_with_dim(k2, {0}).size(), 1u);
  EXPECT_EQ(submodules_with_dim(direct_sum(simple(vect(3), 0), simple(vect(3), 0)), {1}).size(), 4u);
  auto c = a2();
  auto p1 = projective(c, 0);
  auto subs = submodules_with_dim(p1, {0, 1});
  ASSERT_EQ(subs.size(), 1u);
  EXPECT_TRUE(is_isomorphic(subs[0].rep, simple(c, 1)));
  EXPECT_TRUE(submodules_with_dim(p1, {1, 0}).empty());
}

TEST(Submodules, QuotientDuality) {
  auto c = a2();
  auto m = direct_sum(projective(c, 0), simple(c, 0));
  for (int d1 = 0; d1 <= m.dim[0]; ++d1)
    for (int d2 = 0; d2 <= m.dim[1]; ++d2)
      for (const auto& u : submodules_with_dim(m, {d1, d2})) {
        EXPECT_TRUE(is_morphism(u.rep, m, u.incl));
        auto qt = quotient(m, u.incl.f);
        EXPECT_EQ(qt.rep.dim, (DimVector{m.dim[0] - d1, m.dim[1] - d2}));
        EXPECT_TRUE(is_morphism(m, qt.rep, qt.proj));
      }
}

TEST(Quotient, Examples) {
  auto c = a2();
  auto p1 = projective(c, 0);
  auto qz = quotient(p1, {FpMatrix(1, 0), FpMatrix(1, 0)});
  EXPECT_TRUE(is_isomorphic(qz.rep, p1));
  auto qa = quotient(p1, {FpMatrix::identity(1), FpMatrix::identity(1)});
  EXPECT_EQ(qa.rep.total_dim(), 0);
  auto qs = quotient(p1, {FpMatrix(1, 0), FpMatrix::identity(1)});
  EXPECT_TRUE(is_isomorphic(qs.rep, simple(c, 0)));
  EXPECT_THROW(quotient(p1, {FpMatrix::identity(1), FpMatrix(1, 0)}), NotASubmodule);
}

TEST(Reflection, Examples) {
  auto c = a2();
  auto r = reflect_sink(projective(c, 0), 1);
  EXPECT_EQ(r.rep.dim, (DimVector{1, 0}));
  EXPECT_THROW(reflect_sink(simple(c, 1), 1), NotInSubcategory);
  EXPECT_THROW(reflect_sink(simple(c, 0), 0), PreconditionError);
  // A3 1->2->3 at sink 3: S_1 is untouched
  auto c3 = a3();
  auto r1 = reflect_sink(simple(c3, 0), 2);
  EXPECT_EQ(r1.rep.dim, (DimVector{1, 0, 0}));
}

TEST(Reflection, WeylActionOnIndecomposables) {
  for (int n : {2, 3}) {
    auto c = make_category(Quiver::linear_a(n), 2);
    int sink = n - 1;
    // indecomposables of linear A_n are intervals [i, j]
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        DimVector d(n, 0);
        for (int k = i; k <= j; ++k) d[k] = 1;
        std::vector<FpMatrix> maps;
        for (int a = 0; a + 1 < n; ++a) maps.push_back(FpMatrix(d[a + 1], d[a], std::vector<int>(d[a] * d[a + 1], 1)));
        Rep m(c, d, maps);
        if (i == sink) {
          EXPECT_THROW(reflect_sink(m, sink), NotInSubcategory);
          continue;
        }
        auto r = reflect_sink(m, sink);
        EXPECT_EQ(r.rep.dim, weyl_reflect(c.quiver(), sink, d));
        EXPECT_EQ(decompose(r.rep).size(), 1u);
      }
  }
}
