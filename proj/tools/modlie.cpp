// modlie: construct algebras, analyze structure-constant files, run the
// acceptance suites. Exit codes: 0 ok, 1 usage, 2 verification failure,
// 3 internal limit.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "modlie/cartan.hpp"
#include "modlie/errors.hpp"
#include "modlie/exceptional.hpp"
#include "modlie/restricted.hpp"
#include "suites.hpp"

using namespace modlie;
using nlohmann::json;

namespace {

enum Exit { ok = 0, usage = 1, verification = 2, limit = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<unsigned> parse_list(const std::string& s) {
  std::vector<unsigned> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<unsigned>(v));
    } catch (const std::logic_error&) {
      throw UsageError("expected a comma-separated list of nonnegative integers, got \"" + s + "\"");
    }
  }
  return out;
}

std::vector<std::pair<size_t, size_t>> parse_pairs(const std::string& s) {
  std::vector<std::pair<size_t, size_t>> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("pairs are written i:j, got \"" + item + "\"");
    auto a = parse_list(item.substr(0, colon)), b = parse_list(item.substr(colon + 1));
    if (a.size() != 1 || b.size() != 1) throw UsageError("pairs are written i:j, got \"" + item + "\"");
    out.emplace_back(a[0], b[0]);
  }
  return out;
}

CartanFamily cartan_family(const std::string& s) {
  static const std::map<std::string, CartanFamily> names = {
      {"W", CartanFamily::W}, {"S", CartanFamily::S}, {"CS", CartanFamily::CS},
      {"H", CartanFamily::H}, {"CH", CartanFamily::CH}, {"K", CartanFamily::K}};
  auto it = names.find(s);
  if (it == names.end()) throw UsageError("unknown Cartan family \"" + s + "\" (W, S, CS, H, CH, K)");
  return it->second;
}

NormalFormFamily form_family(const std::string& s) {
  static const std::map<std::string, NormalFormFamily> names = {
      {"volume_exp_i", NormalFormFamily::volume_exp_i},
      {"volume_delta", NormalFormFamily::volume_delta},
      {"contact_I", NormalFormFamily::contact_I},
      {"hamiltonian_exp_iI", NormalFormFamily::hamiltonian_exp_iI},
      {"hamiltonian_AB", NormalFormFamily::hamiltonian_AB}};
  auto it = names.find(s);
  if (it == names.end()) throw UsageError("unknown form family \"" + s + "\"");
  return it->second;
}

FormMode form_mode(const std::string& s) {
  if (s == "annihilate") return FormMode::annihilate;
  if (s == "scale_F") return FormMode::scale_by_F;
  if (s == "scale_O") return FormMode::scale_by_O;
  throw UsageError("unknown mode \"" + s + "\" (annihilate, scale_F, scale_O)");
}

HamiltonianBlock::Kind block_kind(const std::string& s) {
  if (s == "zero") return HamiltonianBlock::Kind::zero;
  if (s == "jordan") return HamiltonianBlock::Kind::jordan_nilpotent;
  if (s == "block_cyclic") return HamiltonianBlock::Kind::block_cyclic;
  if (s == "cyclic") return HamiltonianBlock::Kind::cyclic;
  throw UsageError("unknown B block \"" + s + "\" (zero, jordan, block_cyclic, cyclic)");
}

// Picks a term of the derived series: 0 is L itself, -1 the last term.
LieAlgebra derived_term(const LieAlgebra& L, int k) {
  if (k == 0) return L;
  auto chain = derived_to_stability(L);
  if (k < 0) return chain.back();
  if (static_cast<size_t>(k) >= chain.size()) return chain.back();
  return chain[static_cast<size_t>(k)];
}

// ------------------------------------------------------------ construct

struct ConstructArgs {
  std::string family;
  unsigned m = 1;
  std::string n = "1";
  uint32_t p = 5;
  std::string cartan = "W";
  std::string form_family = "volume_delta";
  std::string mode = "annihilate";
  std::string A = "std", B = "zero";
  size_t i = 0;
  std::string pairs;
  uint32_t lambda = 1;
  size_t d = 1, s = 1;
  int derived = 0;
  std::string type = "A";
  size_t rank = 1, size = 2;
  std::string kind = "sl";
  std::string out;
};

LieAlgebra construct(const ConstructArgs& a) {
  if (a.family == "witt") return build_witt(a.m, parse_list(a.n), a.p);
  if (a.family == "cartan") return derived_term(build_cartan(cartan_family(a.cartan), a.m, parse_list(a.n), a.p), a.derived);
  if (a.family == "form") {
    NormalFormSpec spec;
    spec.family = form_family(a.form_family);
    spec.i = a.i;
    spec.pairs = parse_pairs(a.pairs);
    if (spec.family == NormalFormFamily::hamiltonian_AB) {
      if (a.A != "std") throw UsageError("only the standard symplectic A is supported");
      HamiltonianBlock b;
      b.kind = block_kind(a.B);
      b.r = a.m / 2;
      b.lambda = a.lambda;
      if (b.kind == HamiltonianBlock::Kind::block_cyclic) b.d = a.d, b.s = a.s;
      spec.blocks = {b};
    }
    TwistedForm w = normal_form(spec, a.m, parse_list(a.n), a.p);
    return derived_term(build_from_form(w, form_mode(a.mode)), a.derived);
  }
  if (a.family == "melikian") {
    auto n = parse_list(a.n);
    if (n.size() != 1) throw UsageError("melikian takes --m and a single --n");
    return build_melikian(a.m, n[0], a.p);
  }
  if (a.family == "brown") {
    auto n = parse_list(a.n);
    if (n.size() != 2) throw UsageError("brown takes --n as a pair, e.g. 1,1");
    return build_brown_g2({n[0], n[1]}, a.p);
  }
  if (a.family == "chevalley") {
    if (a.type.size() != 1) throw UsageError("--type is a single letter A-G");
    return build_chevalley(a.type[0], a.rank, a.p);
  }
  if (a.family == "matrix") {
    auto k = matrix_kind_from_string(a.kind);
    if (!k) throw UsageError("unknown matrix kind \"" + a.kind + "\" (gl, sl, pgl, psl)");
    return build_matrix_classical(*k, a.size, a.p);
  }
  throw UsageError("unknown family \"" + a.family + "\"");
}

// -------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string file;
  bool simple = false, restrictable = false, sandwich = false, roots = false, toral_rank = false,
       center = false, verify = false, table = false;
  std::string torus;
  std::vector<std::string> expects;
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string weight_string(const Vec& w) {
  std::string s = "(";
  for (size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + ")";
}

std::vector<Vec> chosen_torus(const LieAlgebra& L, const std::string& spec, uint64_t seed) {
  if (spec == "auto") return maximal_torus(L, 3, seed).torus.toral_basis;
  std::vector<Vec> vs;
  for (unsigned k : parse_list(spec)) {
    if (k >= L.dim()) throw UsageError("--torus index " + std::to_string(k) + " is out of range");
    vs.push_back(L.basis_vector(k));
  }
  return toral_elements(L, SubspaceBasis::span(vs, L.dim(), L.p()));
}

// Scalar comparison for --expect key=value against the report.
bool expectation_holds(const json& report, const std::string& key, const std::string& value, std::string& seen) {
  const json* node = &report;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) {
    if (!node->is_object() || !node->contains(part)) {
      seen = "missing";
      return false;
    }
    node = &(*node)[part];
  }
  seen = node->is_string() ? node->get<std::string>() : node->dump();
  return seen == value;
}

int analyze(const AnalyzeArgs& a, uint64_t seed) {
  std::ifstream in(a.file);
  if (!in) throw UsageError("cannot open " + a.file);
  std::stringstream buf;
  buf << in.rdbuf();
  auto start = std::chrono::steady_clock::now();
  LieAlgebra L = from_json(buf.str(), a.verify ? Validation::full : Validation::spot_check);

  json r;
  r["algebra"] = {{"dim", L.dim()}, {"field", {{"p", L.p()}, {"k", 1}}}, {"meta", L.meta}};
  r["timing"]["load"] = seconds_since(start);
  json flags = json::object(), numbers = json::object();
  bool failed = false;
  std::vector<std::string> failures;

  if (a.simple) {
    auto t = std::chrono::steady_clock::now();
    flags["simple"] = is_simple(L, seed);
    r["timing"]["simple"] = seconds_since(t);
  }
  bool restr = false;
  if (a.restrictable || a.roots || a.toral_rank || !a.torus.empty()) {
    auto t = std::chrono::steady_clock::now();
    restr = is_restrictable(L);
    flags["restrictable"] = restr;
    r["timing"]["restrictable"] = seconds_since(t);
  }
  if (a.sandwich) {
    auto t = std::chrono::steady_clock::now();
    SandwichReport s = sandwich_search(L);
    flags["strongly_degenerate"] = s.strongly_degenerate;
    numbers["sandwich_span_dim"] = s.span.dim();
    if (!s.skipped.empty()) r["sandwich_skipped"] = s.skipped;
    r["timing"]["sandwich"] = seconds_since(t);
  }
  if (a.center) numbers["center_dim"] = center(L).dim();
  if (a.toral_rank) {
    auto t = std::chrono::steady_clock::now();
    ToralRank tr = toral_rank_via_adjoint(L, 3, seed);
    numbers["toral_rank"] = {{"value", tr.value}, {"exact", tr.exact}, {"kind", tr.exact ? "exact" : "lower_bound"}};
    if (restr) {
      TorusSearch ts = maximal_torus(L, 3, seed);
      numbers["max_torus"] = {{"value", ts.mt_estimate},
                              {"exact", ts.exact},
                              {"maximal_certified", ts.maximal_certified},
                              {"kind", ts.exact ? "exact" : "lower_bound"}};
      numbers["cartan_dim"] = centralizer(L, ts.torus.space).dim();
    }
    if (auto known = registered_toral_rank(L)) {
      numbers["registered_toral_rank"] = *known;
      if (a.verify && tr.value > *known) {
        failed = true;
        failures.push_back("toral rank estimate exceeds the registered value");
      }
    }
    r["timing"]["toral_rank"] = seconds_since(t);
  }
  if (a.roots || !a.torus.empty()) {
    auto t = std::chrono::steady_clock::now();
    if (!restr) {
      r["roots"] = {{"error", "root decomposition needs a restrictable algebra"}};
    } else {
      RootDatum R = root_decomposition(L, chosen_torus(L, a.torus.empty() ? "auto" : a.torus, seed));
      json table = json::array();
      for (size_t k = 0; k < R.weights.size(); ++k)
        table.push_back({{"weight", R.weights[k]}, {"dim", R.spaces[k].dim()}});
      r["roots"] = {{"torus_dim", R.toral_basis.size()}, {"weights", table}};
      if (a.verify && !root_grading_holds(L, R)) {
        failed = true;
        failures.push_back("[L_a, L_b] ⊄ L_{a+b} for the computed root spaces");
      }
    }
    r["timing"]["roots"] = seconds_since(t);
  }
  r["flags"] = flags;
  r["numbers"] = numbers;

  for (const std::string& e : a.expects) {
    auto eq = e.find('=');
    if (eq == std::string::npos) throw UsageError("--expect takes key=value, got \"" + e + "\"");
    std::string seen;
    if (!expectation_holds(r, e.substr(0, eq), e.substr(eq + 1), seen)) {
      failed = true;
      failures.push_back(e + " (got " + seen + ")");
    }
  }
  if (a.verify) r["verify"] = {{"pass", !failed}, {"failures", failures}};
  r["timing"]["total"] = seconds_since(start);

  if (a.table) {
    std::cout << "dim " << L.dim() << " over GF(" << L.p() << ")\n";
    for (auto& [k, v] : flags.items()) std::cout << "  " << k << ": " << v.dump() << "\n";
    for (auto& [k, v] : numbers.items()) std::cout << "  " << k << ": " << v.dump() << "\n";
    if (r.contains("roots") && r["roots"].contains("weights")) {
      std::cout << "  weight        dim\n";
      for (const auto& w : r["roots"]["weights"])
        std::cout << "  " << std::left << std::setw(14) << weight_string(w["weight"].get<Vec>()) << w["dim"] << "\n";
    }
    for (const auto& f : failures) std::cout << "  FAILED " << f << "\n";
  } else {
    std::cout << r.dump(2) << "\n";
  }
  return failed ? verification : ok;
}

// --------------------------------------------------------------- verify

int verify(const std::string& name) {
  std::vector<const suites::Suite*> chosen;
  if (name == "all") {
    for (const auto& s : suites::all()) chosen.push_back(&s);
  } else if (const suites::Suite* s = suites::find(name)) {
    chosen.push_back(s);
  } else {
    std::string known;
    for (const auto& s : suites::all()) known += std::string(" ") + s.key;
    throw UsageError("unknown suite \"" + name + "\"; known:" + known + " all");
  }
  json out = json::array();
  bool pass = true;
  for (const suites::Suite* s : chosen) {
    suites::Result res = suites::run(*s);
    out.push_back({{"suite", res.key},
                   {"title", res.title},
                   {"pass", res.pass},
                   {"seconds", res.seconds},
                   {"failures", res.failures},
                   {"notes", res.notes}});
    pass = pass && res.pass;
  }
  std::cout << out.dump(2) << "\n";
  return pass ? ok : verification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modular Lie algebras over prime fields"};
  app.require_subcommand(1);
  uint64_t seed = kDefaultSeed;
  app.add_option("--seed", seed, "seed for randomized searches")->capture_default_str();

  ConstructArgs ca;
  auto* construct_cmd = app.add_subcommand("construct", "build an algebra and write its structure constants");
  construct_cmd->add_option("algebra", ca.family, "witt, cartan, form, melikian, brown, chevalley, matrix")->required();
  construct_cmd->add_option("--m", ca.m, "number of variables")->capture_default_str();
  construct_cmd->add_option("--n", ca.n, "heights, comma separated")->capture_default_str();
  construct_cmd->add_option("--p", ca.p, "characteristic")->capture_default_str();
  construct_cmd->add_option("--cartan", ca.cartan, "cartan: W, S, CS, H, CH or K")->capture_default_str();
  construct_cmd->add_option("--family", ca.form_family, "form: normal-form family")->capture_default_str();
  construct_cmd->add_option("--mode", ca.mode, "form: annihilate, scale_F or scale_O")->capture_default_str();
  construct_cmd->add_option("--A", ca.A, "form: symplectic part of (A,B)")->capture_default_str();
  construct_cmd->add_option("--B", ca.B, "form: zero, jordan, block_cyclic or cyclic")->capture_default_str();
  construct_cmd->add_option("--lambda", ca.lambda, "form: eigenvalue of a cyclic B block")->capture_default_str();
  construct_cmd->add_option("--d", ca.d, "form: block_cyclic d")->capture_default_str();
  construct_cmd->add_option("--s", ca.s, "form: block_cyclic s")->capture_default_str();
  construct_cmd->add_option("--i", ca.i, "form: distinguished variable, 0-based")->capture_default_str();
  construct_cmd->add_option("--pairs", ca.pairs, "form: decomposition pairs i:j,...");
  construct_cmd->add_option("--derived", ca.derived, "take this derived-series term, -1 for the last")
      ->capture_default_str();
  construct_cmd->add_option("--type", ca.type, "chevalley: root system type")->capture_default_str();
  construct_cmd->add_option("--rank", ca.rank, "chevalley: rank")->capture_default_str();
  construct_cmd->add_option("--kind", ca.kind, "matrix: gl, sl, pgl or psl")->capture_default_str();
  construct_cmd->add_option("--size", ca.size, "matrix: matrix size")->capture_default_str();
  construct_cmd->add_option("-o,--output", ca.out, "output file (stdout when omitted)");

  AnalyzeArgs aa;
  auto* analyze_cmd = app.add_subcommand("analyze", "analyze a structure-constant file");
  analyze_cmd->add_option("file", aa.file, "JSON structure constants")->required();
  analyze_cmd->add_flag("--simple", aa.simple);
  analyze_cmd->add_flag("--restrictable", aa.restrictable);
  analyze_cmd->add_flag("--sandwich", aa.sandwich);
  analyze_cmd->add_flag("--roots", aa.roots);
  analyze_cmd->add_option("--torus", aa.torus, "auto, or comma-separated basis indices spanning a torus");
  analyze_cmd->add_flag("--toral-rank", aa.toral_rank);
  analyze_cmd->add_flag("--center", aa.center);
  analyze_cmd->add_flag("--verify", aa.verify, "full Jacobi check and consistency assertions; exit 2 on failure");
  analyze_cmd->add_option("--expect", aa.expects, "assert report field, e.g. flags.simple=true");
  analyze_cmd->add_flag("--table", aa.table, "human-readable table instead of JSON");

  std::string suite;
  auto* verify_cmd = app.add_subcommand("verify", "run an acceptance suite");
  verify_cmd->add_option("suite", suite, "suite name or all")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? ok : usage;
  }

  try {
    if (*construct_cmd) {
      std::string text = to_json(construct(ca));
      if (ca.out.empty()) {
        std::cout << text << "\n";
      } else {
        std::ofstream f(ca.out);
        if (!f) throw UsageError("cannot write " + ca.out);
        f << text << "\n";
      }
      return ok;
    }
    if (*analyze_cmd) return analyze(aa, seed);
    return verify(suite);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const DimensionLimitExceeded& e) {
    std::cerr << "limit: " << e.what() << "\n";
    return limit;
  } catch (const SearchLimitExceeded& e) {
    std::cerr << "limit: " << e.what() << "\n";
    return limit;
  } catch (const MalformedInput& e) {
    std::cerr << "malformed input in " << aa.file << ": " << e.what() << "\n";
    return usage;
  } catch (const AntisymmetryViolation& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return verification;
  } catch (const JacobiViolation& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return verification;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return limit;
  }
}
