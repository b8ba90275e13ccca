#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdh/sdh2.hpp"
#include "sdh/sdhz.hpp"

using json = nlohmann::ordered_json;
using namespace sdh;

namespace {

struct RunConfig {
  std::string quiver_path;
  int q = 2;
  std::string suite;
  bool table = false;
  int bound = 3;
  int samples = 20;
  unsigned seed = 0;
  std::string out;
  std::string format = "json";
  bool perturb = false;
  int sink = 0;  // 1-indexed, 0 = pick the largest sink
};

const std::vector<std::string> kSuites = {"ringel",          "presentation-uv", "euler-lemmas",      "assoc-z",
                                          "assoc-z2",        "bridgeland-compare", "quantum-group", "reflection",
                                          "torus-commutation", "quotient-relations"};

struct InputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Quiver load_quiver(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputFailure("cannot open quiver file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw InputFailure("quiver file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_number_integer())
    throw InputFailure("quiver file needs an integer \"vertices\" field");
  int n = j["vertices"].get<int>();
  if (n < 1) throw InputFailure("quiver needs at least one vertex");
  std::vector<std::pair<int, int>> arrows;
  if (j.contains("arrows")) {
    if (!j["arrows"].is_array()) throw InputFailure("\"arrows\" must be an array");
    for (const auto& a : j["arrows"]) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() || !a[1].is_number_integer())
        throw InputFailure("each arrow must be [source, target]");
      arrows.emplace_back(a[0].get<int>(), a[1].get<int>());
    }
  }
  try {
    return Quiver::from_one_indexed(n, arrows);
  } catch (const Error& e) {
    throw InputFailure(e.what());
  }
}

json quiver_json(const Quiver& q) {
  json arr = json::array();
  for (auto [s, t] : q.arrows) arr.push_back({s + 1, t + 1});
  return json{{"vertices", q.n}, {"arrows", arr}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char ch : s) {
    if (ch == '"') r += '"';
    r += ch;
  }
  return r + "\"";
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw InputFailure("cannot write " + cfg.out);
  f << text;
}

int dim_total(const DimVector& d) {
  int t = 0;
  for (int x : d) t += x;
  return t;
}

int cmd_table(const RunConfig& cfg, const Category& c) {
  auto classes = iso_classes_up_to(c, cfg.bound);
  std::map<int, std::vector<IsoClassKey>> by_dim;
  for (const auto& k : classes) by_dim[dim_total(k.dim())].push_back(k);
  struct Row {
    IsoClassKey a, cc, b;
    BigInt g;
    CoeffScalar constant;
  };
  std::vector<Row> rows;
  for (const auto& a : classes)
    for (const auto& cc : classes) {
      int d = dim_total(a.dim()) + dim_total(cc.dim());
      if (d > cfg.bound) continue;
      auto want = dim_add(a.dim(), cc.dim());
      for (const auto& b : by_dim[d]) {
        if (b.dim() != want) continue;
        BigInt g = hall_number(a, cc, b);
        auto k = ext_constant(a, cc, b);
        if (g == 0 && k.is_zero()) continue;
        rows.push_back({a, cc, b, g, k});
      }
    }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    if (!(x.a == y.a)) return x.a < y.a;
    if (!(x.cc == y.cc)) return x.cc < y.cc;
    return x.b < y.b;
  });
  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "A,C,B,dimA,dimC,dimB,g,constant\n";
    for (const auto& r : rows)
      os << csv_field(key_label(r.a)) << ',' << csv_field(key_label(r.cc)) << ',' << csv_field(key_label(r.b)) << ','
         << csv_field(dim_str(r.a.dim())) << ',' << csv_field(dim_str(r.cc.dim())) << ','
         << csv_field(dim_str(r.b.dim())) << ',' << r.g << ',' << csv_field(r.constant.str()) << '\n';
  } else {
    json j;
    j["table"] = "structure-constants";
    j["q"] = cfg.q;
    j["quiver"] = quiver_json(c.quiver());
    j["bound"] = cfg.bound;
    json arr = json::array();
    for (const auto& r : rows) {
      std::ostringstream g;
      g << r.g;
      arr.push_back({{"A", key_label(r.a)},
                     {"C", key_label(r.cc)},
                     {"B", key_label(r.b)},
                     {"dimA", r.a.dim()},
                     {"dimC", r.cc.dim()},
                     {"dimB", r.b.dim()},
                     {"g", g.str()},
                     {"constant", r.constant.str()}});
    }
    j["rows"] = arr;
    os << j.dump(2) << '\n';
  }
  emit(cfg, os.str());
  return 0;
}

int default_sink(const Quiver& q) {
  for (int i = q.n - 1; i >= 0; --i)
    if (q.is_sink(i)) return i;
  return -1;
}

Report run_suite(const RunConfig& cfg, const Category& c) {
  const std::string& s = cfg.suite;
  if (cfg.perturb && s != "quantum-group" && s != "presentation-uv")
    throw InputFailure("--perturb is only supported for quantum-group and presentation-uv");
  Report r;
  if (s == "ringel") {
    r = verify_ringel(c);
  } else if (s == "presentation-uv") {
    r = verify_presentation(c, cfg.perturb);
    r.append(verify_embed_Im(c, 0, 4));
    r.append(verify_embed_Im(c, 1, 4));
    r.append(verify_generationZ(c, cfg.samples, cfg.seed));
    r.append(verify_homology_additivity(c, cfg.samples, cfg.seed));
  } else if (s == "euler-lemmas") {
    r = verify_euler_lemmas(c);
  } else if (s == "assoc-z") {
    r = verify_assocZ(c, cfg.samples, cfg.seed);
  } else if (s == "assoc-z2") {
    r = verify_assoc2(c, cfg.samples, cfg.seed);
  } else if (s == "bridgeland-compare") {
    r = bridgeland_compare(c, cfg.bound);
  } else if (s == "quantum-group") {
    r = verify_quantum_group(c, cfg.perturb);
  } else if (s == "reflection") {
    int i = cfg.sink ? cfg.sink - 1 : default_sink(c.quiver());
    if (i < 0 || i >= c.n() || !c.quiver().is_sink(i)) throw InputFailure("reflection needs a sink vertex");
    r = reflection_iso_check(c, i);
  } else if (s == "torus-commutation") {
    r = verify_torus_commutation(c);
  } else if (s == "quotient-relations") {
    r = verify_quotient_relationsZ(c, cfg.samples, cfg.seed);
    r.append(verify_quotient_relations2(c, cfg.samples, cfg.seed));
  }
  r.suite = s;
  return r;
}

int cmd_verify(const RunConfig& cfg, const Category& c) {
  Report r = run_suite(cfg, c);
  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "name,status,lhs,rhs\n";
    for (const auto& ch : r.checks)
      os << csv_field(ch.name) << ',' << (ch.pass ? "pass" : "fail") << ',' << csv_field(ch.lhs) << ','
         << csv_field(ch.rhs) << '\n';
  } else {
    json j;
    j["suite"] = r.suite;
    j["q"] = cfg.q;
    j["quiver"] = quiver_json(c.quiver());
    json arr = json::array();
    for (const auto& ch : r.checks)
      arr.push_back({{"name", ch.name}, {"status", ch.pass ? "pass" : "fail"}, {"lhs", ch.lhs}, {"rhs", ch.rhs}});
    j["checks"] = arr;
    j["seed"] = cfg.seed;
    os << j.dump(2) << '\n';
  }
  emit(cfg, os.str());
  std::cerr << r.suite << ": " << r.checks.size() - r.failures() << "/" << r.checks.size() << " pass\n";
  return r.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"sdhcli"};
  app.add_option("--quiver", cfg.quiver_path, "quiver JSON file")->required();
  app.add_option("--q", cfg.q, "prime field size")->required();
  auto* suite = app.add_option("--suite", cfg.suite, "verification suite");
  auto* table = app.add_flag("--table", cfg.table, "emit structure constants");
  suite->excludes(table);
  app.add_option("--bound", cfg.bound, "total dimension bound");
  app.add_option("--samples", cfg.samples, "random samples");
  app.add_option("--seed", cfg.seed, "seed");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--sink", cfg.sink, "sink vertex for reflection (1-indexed)");
  app.add_flag("--perturb", cfg.perturb, "falsify one relation (negative control)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (!is_prime(cfg.q)) throw InputFailure("q must be prime");
    if (cfg.samples < 1) throw InputFailure("samples must be >= 1");
    if (cfg.bound < 0) throw InputFailure("bound must be >= 0");
    if (!cfg.table && std::find(kSuites.begin(), kSuites.end(), cfg.suite) == kSuites.end())
      throw InputFailure(cfg.suite.empty() ? "one of --suite or --table is required" : "unknown suite " + cfg.suite);
    Quiver q = load_quiver(cfg.quiver_path);
    Category c = [&] {
      try {
        return make_category(q, cfg.q);
      } catch (const Error& e) {
        throw InputFailure(e.what());
      }
    }();
    return cfg.table ? cmd_table(cfg, c) : cmd_verify(cfg, c);
  } catch (const InputFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConversionMismatch& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
