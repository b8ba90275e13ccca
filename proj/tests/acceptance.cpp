// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sdh/cx2.hpp"
#include "sdh/sdh2.hpp"
#include "sdh/sdhz.hpp"

using namespace sdh;

namespace {

struct Outcome {
  bool pass = true;
  int checks = 0;
  std::string note;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && pass) {
      pass = false;
      note = what;
    }
  }
  void absorb(const Report& r, const std::string& where) {
    for (const auto& c : r.checks) expect(c.pass, where + ": " + c.name + " lhs=" + c.lhs + " rhs=" + c.rhs);
    if (r.checks.empty()) expect(false, where + ": no checks ran");
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Category vect(int q) { return make_category(Quiver(1, {}), q); }
Category a1(int q) { return vect(q); }
Category a2(int q) { return make_category(Quiver::linear_a(2), q); }
Category a3(int q) { return make_category(Quiver::linear_a(3), q); }

// Runs f and fails the outcome if it took longer than limit seconds.
void timed(Outcome& o, double limit, const std::string& what, const std::function<void()>& f) {
  auto t0 = Clock::now();
  f();
  double s = seconds_since(t0);
  o.expect(s <= limit, what + " took " + std::to_string(s) + "s");
}

Outcome ringel() {
  Outcome o;
  for (int q : {2, 3}) {
    timed(o, 60, "A2 q=" + std::to_string(q), [&] { o.absorb(verify_ringel(a2(q)), "A2 q=" + std::to_string(q)); });
    timed(o, 60, "A3 q=" + std::to_string(q), [&] { o.absorb(verify_ringel(a3(q)), "A3 q=" + std::to_string(q)); });
  }
  return o;
}

Outcome quantum_group() {
  Outcome o;
  for (int q : {2, 3})
    for (int n : {1, 2}) {
      auto c = n == 1 ? a1(q) : a2(q);
      std::string tag = "A" + std::to_string(n) + " q=" + std::to_string(q);
      timed(o, 300, tag, [&] {
        o.absorb(verify_quantum_group(c), tag);
        auto bad = verify_quantum_group(c, true);
        bool ef_fails = false;
        for (const auto& ch : bad.checks)
          if (ch.name.rfind("EF", 0) == 0 && !ch.pass) ef_fails = true;
        o.expect(ef_fails, tag + ": negative control did not break the E-F commutator");
      });
    }
  return o;
}

Outcome presentation() {
  Outcome o;
  timed(o, 120, "presentation", [&] {
    auto c = a2(2);
    o.absorb(verify_presentation(c), "presentation");
    bool saw_middle = false;
    for (const auto& ch : verify_presentation(c).checks)
      if (ch.name.find("middle term") != std::string::npos) saw_middle = true;
    o.expect(saw_middle, "no enumerated u_a,u_a middle-term check");
  });
  return o;
}

Outcome euler_lemmas() {
  Outcome o;
  timed(o, 60, "euler", [&] { o.absorb(verify_euler_lemmas(a2(2), {0, 1, 2}), "A2 q=2"); });
  return o;
}

Outcome associativity() {
  Outcome o;
  timed(o, 300, "assoc", [&] {
    auto c = a2(2);
    auto z = verify_assocZ(c, 50, 0);
    auto z2 = verify_assoc2(c, 50, 0);
    o.expect(z.checks.size() == 50 && z2.checks.size() == 50, "expected 50 triples per grading");
    o.absorb(z, "Z");
    o.absorb(z2, "Z/2");
  });
  return o;
}

Outcome structure_constants() {
  Outcome o;
  timed(o, 120, "structure constants", [&] {
    for (int q : {2, 3})
      for (bool quiver_a2 : {false, true}) {
        auto c = quiver_a2 ? a2(q) : vect(q);
        std::string tag = std::string(quiver_a2 ? "A2" : "Vect") + " q=" + std::to_string(q);
        auto classes = iso_classes_up_to(c, 4);
        for (const auto& a : classes)
          for (const auto& x : classes)
            for (const auto& b : classes) {
              if (b.dim() != dim_add(a.dim(), x.dim())) continue;
              auto s = ext_constant_by_subobjects(a, x, b);
              auto e = ext_constant_by_extensions(a, x, b);
              o.expect(s == e, tag + ": (" + key_label(a) + "," + key_label(x) + "," + key_label(b) + ") " + s.str() +
                                   " vs " + e.str());
            }
        auto k = intern(simple(vect(q), 0));
        auto k2 = intern(direct_sum(simple(vect(q), 0), simple(vect(q), 0)));
        o.expect(hall_number(k, k, k2) == q + 1, tag + ": g(k,k,k^2) != q+1");
        o.expect(ext_constant(k, k, k2) == CoeffScalar(Rational(1, q)), tag + ": constant(k,k,k^2) != 1/q");
      }
  });
  return o;
}

Outcome quotient_relations() {
  Outcome o;
  auto c = a2(2);
  auto z = verify_quotient_relationsZ(c, 20, 0);
  auto z2 = verify_quotient_relations2(c, 20, 0);
  o.expect(z.checks.size() >= 20 && z2.checks.size() >= 20, "expected 20 conflations per grading");
  o.absorb(z, "Z");
  o.absorb(z2, "Z/2");
  return o;
}

Outcome acyclic_decomposition() {
  Outcome o;
  std::mt19937 rng(2024);
  auto c = a2(2);
  for (int t = 0; t < 30; ++t) {
    DimVector a{static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)};
    DimVector b{static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)};
    if (dim_is_zero(a) && dim_is_zero(b)) a = {0, 1};
    auto x = direct_sum(make_KP(projective_sum(c, a)), make_KPstar(projective_sum(c, b)));
    for (int trial = 0; trial < 2; ++trial) {
      auto y = random_base_change(rng, x);
      DimVector ga(2, 0), gb(2, 0);
      bool clean = true;
      for (const auto& s : decompose2(y)) {
        int idx = -1;
        for (int i = 0; i < 2; ++i)
          if (is_isomorphic(s.p, projective(c, i))) idx = i;
        if (s.kind == SummandKind::Other || idx < 0) {
          clean = false;
          continue;
        }
        (s.kind == SummandKind::KP ? ga : gb)[idx]++;
      }
      std::string tag = "sample " + std::to_string(t);
      o.expect(clean, tag + ": summand not of the form K_P or K_P*");
      o.expect(ga == a && gb == b, tag + ": got P=" + dim_str(ga) + " Q=" + dim_str(gb) + ", built P=" + dim_str(a) +
                                       " Q=" + dim_str(b));
    }
  }
  return o;
}

Outcome reflection() {
  Outcome o;
  timed(o, 300, "reflection", [&] {
    auto r = reflection_iso_check(a2(2), 1);
    bool formula = false;
    for (const auto& ch : r.checks) formula |= ch.name == "bgp-formula";
    o.expect(formula, "displayed formula not checked");
    o.absorb(r, "A2 sink 2");
  });
  return o;
}

Outcome bridgeland() {
  Outcome o;
  o.absorb(bridgeland_compare(a2(2), 4), "A2 q=2");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion all[] = {
      {"Ringel quantum Serre relations (A2, A3; q=2,3)", ringel},
      {"Quantum group realization + E-F negative control (A1, A2; q=2,3)", quantum_group},
      {"U/V/UV presentation relations (A2, q=2, m=0,1)", presentation},
      {"Euler form closed forms (A2, m,n in 0..2)", euler_lemmas},
      {"Associativity, 50 triples each grading (A2, q=2)", associativity},
      {"Structure constants by two routes (A2, Vect; q=2,3; dim <= 4)", structure_constants},
      {"Normal forms respect [L] = [K+M], 20 per grading", quotient_relations},
      {"Acyclic Z/2 complexes split as K_P + K_Q* (30 samples)", acyclic_decomposition},
      {"Reflection isomorphism at sink 2 (A2, q=2)", reflection},
      {"Z/2 product vs localized Hall product (A2, q=2, dim <= 4)", bridgeland},
  };
  int failed = 0, idx = 0;
  for (const auto& c : all) {
    ++idx;
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    double s = seconds_since(t0);
    std::printf("[%s] %2d %s (%d checks, %.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", idx, c.name, o.checks, s,
                o.pass ? "" : " :: ", o.note.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%d criteria pass\n", idx - failed, idx);
  return failed ? 1 : 0;
}
