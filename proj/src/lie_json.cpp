#include <json.hpp>

#include "modlie/liealg.hpp"

namespace modlie {

using nlohmann::json;

std::string to_json(const LieAlgebra& L) {
  json j;
  j["p"] = L.p();
  j["k"] = 1;
  j["dim"] = L.dim();
  j["labels"] = L.labels();
  json br = json::array();
  for (size_t a = 0; a < L.dim(); ++a)
    for (size_t b = a + 1; b < L.dim(); ++b) {
      const SparseVec& v = L.bracket_basis(a, b);
      if (v.empty()) continue;
      json terms = json::array();
      for (auto [k, c] : v) terms.push_back(json::array({k, std::to_string(c)}));
      br.push_back(json::array({a, b, terms}));
    }
  j["brackets"] = br;
  if (L.grading) j["grading"] = *L.grading;
  if (!L.meta.empty()) j["meta"] = L.meta;
  return j.dump();
}

namespace {

uint64_t parse_coefficient(const json& c, const std::string& where) {
  if (c.is_number_unsigned()) return c.get<uint64_t>();
  if (c.is_number_integer()) {
    int64_t v = c.get<int64_t>();
    if (v < 0) throw MalformedInput(where + ": negative coefficient");
    return static_cast<uint64_t>(v);
  }
  if (!c.is_string()) throw MalformedInput(where + ": coefficient must be a decimal string");
  const std::string s = c.get<std::string>();
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw MalformedInput(where + ": coefficient \"" + s + "\" is not a decimal string");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw MalformedInput(where + ": coefficient out of range");
  }
}

size_t index_field(const json& v, size_t dim, const std::string& where) {
  if (!v.is_number_integer() || v.get<int64_t>() < 0 || static_cast<size_t>(v.get<int64_t>()) >= dim)
    throw MalformedInput(where + ": index must be an integer in [0, dim)");
  return static_cast<size_t>(v.get<int64_t>());
}

}  // namespace

LieAlgebra from_json(const std::string& text, Validation validation) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedInput(std::string("JSON parse error at byte ") + std::to_string(e.byte));
  }
  if (!j.is_object()) throw MalformedInput("top level: expected an object");
  for (const char* key : {"p", "dim", "brackets"})
    if (!j.contains(key)) throw MalformedInput(std::string("top level: missing \"") + key + "\"");
  if (!j["p"].is_number_integer() || j["p"].get<int64_t>() < 2) throw MalformedInput("p: expected an integer ≥ 2");
  uint32_t p = static_cast<uint32_t>(j["p"].get<int64_t>());
  if (!is_prime(p)) throw NonPrime("p = " + std::to_string(p) + " is not prime");
  if (j.contains("k") && j["k"] != 1) throw MalformedInput("k: only prime fields (k = 1) are supported");
  if (!j["dim"].is_number_integer() || j["dim"].get<int64_t>() < 0) throw MalformedInput("dim: expected an integer ≥ 0");
  size_t dim = static_cast<size_t>(j["dim"].get<int64_t>());
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array() || j["labels"].size() != dim)
      throw MalformedInput("labels: expected an array of dim strings");
    for (size_t i = 0; i < dim; ++i) {
      if (!j["labels"][i].is_string()) throw MalformedInput("labels[" + std::to_string(i) + "]: expected a string");
      labels.push_back(j["labels"][i].get<std::string>());
    }
  }
  const json& br = j["brackets"];
  if (!br.is_array()) throw MalformedInput("brackets: expected an array");
  std::vector<BracketEntry> entries;
  for (size_t e = 0; e < br.size(); ++e) {
    std::string where = "brackets[" + std::to_string(e) + "]";
    const json& row = br[e];
    if (!row.is_array() || row.size() != 3) throw MalformedInput(where + ": expected [i, j, terms]");
    size_t a = index_field(row[0], dim, where + "[0]");
    size_t b = index_field(row[1], dim, where + "[1]");
    if (a >= b) throw MalformedInput(where + ": requires i < j");
    if (!row[2].is_array()) throw MalformedInput(where + "[2]: expected an array of [k, c]");
    SparseVec value;
    for (size_t t = 0; t < row[2].size(); ++t) {
      std::string tw = where + "[2][" + std::to_string(t) + "]";
      const json& term = row[2][t];
      if (!term.is_array() || term.size() != 2) throw MalformedInput(tw + ": expected [k, c]");
      size_t k = index_field(term[0], dim, tw + "[0]");
      value.emplace_back(static_cast<uint32_t>(k), static_cast<uint32_t>(parse_coefficient(term[1], tw + "[1]") % p));
    }
    entries.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b), std::move(value)});
  }
  LieAlgebra L = LieAlgebra::from_structure_constants(dim, p, entries, labels, validation);
  if (j.contains("grading")) {
    const json& g = j["grading"];
    if (!g.is_array() || g.size() != dim) throw MalformedInput("grading: expected an array of dim integers");
    std::vector<int> deg;
    for (size_t i = 0; i < dim; ++i) {
      if (!g[i].is_number_integer()) throw MalformedInput("grading[" + std::to_string(i) + "]: expected an integer");
      deg.push_back(g[i].get<int>());
    }
    L.grading = deg;
  }
  if (j.contains("meta") && j["meta"].is_object())
    for (auto it = j["meta"].begin(); it != j["meta"].end(); ++it)
      L.meta[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
  return L;
}

}  // namespace modlie
