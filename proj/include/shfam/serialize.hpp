#pragma once

// JSON, CSV and plain-text forms of the library's values. Integers that fit
// in 64 bits are JSON numbers; larger ones are decimal strings.

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shfam/arrays.hpp"
#include "shfam/hashfam.hpp"
#include "shfam/integer.hpp"
#include "shfam/sequences.hpp"
#include "shfam/solfree.hpp"

namespace shfam {

using json = nlohmann::ordered_json;

inline json integer_json(const Integer& x) {
  if (fits_int64(x)) return json(x.convert_to<std::int64_t>());
  return json(x.str());
}

inline Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) return parse_integer(j.get<std::string>());
  throw precondition_error("expected an integer, got " + j.dump());
}

inline json integers_json(std::span<const Integer> xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(integer_json(x));
  return out;
}

inline std::vector<Integer> integers_from_json(const json& j) {
  if (!j.is_array()) throw precondition_error("expected an integer array, got " + j.dump());
  std::vector<Integer> out;
  for (const auto& e : j) out.push_back(integer_from_json(e));
  return out;
}

inline json to_json(const PermSeq& u) { return integers_json(u.entries()); }

inline json to_json(const SeqAnalysis& a) {
  json d = json::array();
  for (const auto& u : a.deletions) d.push_back(to_json(u));
  return {{"tau", a.tau}, {"epsilon", a.epsilon}, {"chi", a.chi}, {"deletions", d}};
}

inline json to_json(const BipartiteArray& a) { return {{"pos", integers_json(a.pos())}, {"neg", integers_json(a.neg())}}; }

inline BipartiteArray array_from_json(const json& j) {
  if (!j.is_object() || !j.contains("pos") || !j.contains("neg")) throw precondition_error("array JSON needs pos and neg");
  return BipartiteArray(integers_from_json(j.at("pos")), integers_from_json(j.at("neg")));
}

inline json to_json(std::span<const BipartiteArray> eqs) {
  json out = json::array();
  for (const auto& a : eqs) out.push_back(to_json(a));
  return out;
}

inline std::vector<BipartiteArray> arrays_from_json(const json& j) {
  if (j.is_object()) return {array_from_json(j)};
  std::vector<BipartiteArray> out;
  for (const auto& e : j) out.push_back(array_from_json(e));
  return out;
}

inline json to_json(const ArrayDiagnostics& d) {
  return {{"alpha", integer_json(d.alpha)},   {"alpha_prime", integer_json(d.alpha_prime)},
          {"gap", integer_json(d.gap)},       {"delta", integer_json(d.delta)},
          {"z_set", integers_json(d.z_set)},  {"mutually_unequal", d.mutually_unequal}};
}

inline json to_json(const AncestorString& s) {
  std::vector<bool> repro(s.reproducible.begin(), s.reproducible.end());
  return {{"arrays", to_json(std::span<const BipartiteArray>(s.arrays))},
          {"thetas", integers_json(s.thetas)},
          {"choices", s.choices},
          {"locations", integers_json(s.locations)},
          {"reproducible", repro},
          {"epsilon", s.epsilon}};
}

inline json to_json(const SolutionWitness& w) {
  json a = json::array();
  for (const auto& [slot, v] : w.assignment) a.push_back({slot, v});
  return {{"assignment", a}, {"lhs", w.lhs_value}, {"rhs", w.rhs_value}};
}

inline json to_json(const LinkParams& p) {
  return {{"base", integer_json(p.base)}, {"digit_count", p.digit_count}, {"digit_set", p.digit_set},
          {"side", p.side},               {"sigma", integer_json(p.sigma)}, {"location", integer_json(p.location)}};
}

inline json to_json(const SolutionFreeCert& c) {
  json j = {{"construction", c.construction},
            {"method", to_string(c.method)},
            {"verified", c.verified},
            {"size", c.set.size()},
            {"set", c.set},
            {"equations", to_json(std::span<const BipartiteArray>(c.equations))}};
  if (c.witness) j["witness"] = to_json(*c.witness);
  if (c.failing_equation) j["failing_equation"] = *c.failing_equation;
  if (c.link) j["link"] = to_json(*c.link);
  if (!c.notes.empty()) j["notes"] = c.notes;
  return j;
}

inline json to_json(const PipelineResult& p) {
  json levels = json::array();
  for (const auto& l : p.levels)
    levels.push_back({{"index", l.index},
                      {"location", integer_json(l.location)},
                      {"construction", l.construction},
                      {"size", l.size},
                      {"fallback", l.fallback}});
  return {{"string", to_json(p.string)}, {"levels", levels}, {"certificate", to_json(p.cert)}};
}

inline json to_json(const PlasticSet& r) { return {{"elements", integers_json(r.elements())}, {"rank", integer_json(r.rank())}}; }

inline json to_json(const HashFamilyMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < a.cols(); ++c) row.push_back(a.at(i, c));
    rows.push_back(row);
  }
  json j = {{"q", a.q()}, {"rows", rows}};
  if (const auto& p = a.provenance())
    j["provenance"] = {{"r", integers_json(p->r)}, {"m", p->m}, {"m_status", to_string(p->m_status)}};
  return j;
}

inline MStatus m_status_from_string(const std::string& s) {
  if (s == "verified") return MStatus::verified;
  if (s == "violated") return MStatus::violated;
  return MStatus::unchecked;
}

inline HashFamilyMatrix matrix_from_json(const json& j) {
  const Value q = j.at("q").get<Value>();
  const auto& rows = j.at("rows");
  const std::size_t n_rows = rows.size(), n_cols = n_rows ? rows.at(0).size() : 0;
  std::vector<Value> cells;
  for (const auto& row : rows) {
    if (row.size() != n_cols) throw precondition_error("matrix rows have unequal lengths");
    for (const auto& v : row) cells.push_back(v.get<Value>());
  }
  std::optional<Provenance> prov;
  if (j.contains("provenance")) {
    const auto& p = j.at("provenance");
    prov = Provenance{integers_from_json(p.at("r")), p.at("m").get<std::vector<Value>>(),
                      m_status_from_string(p.value("m_status", "unchecked"))};
  }
  return HashFamilyMatrix(n_rows, n_cols, q, std::move(cells), std::move(prov));
}

/// CSV: "# q=<q>", an optional "# provenance r=..;.. m=..;.. m_status=..", then one line per row.
inline void write_matrix_csv(std::ostream& os, const HashFamilyMatrix& a) {
  os << "# q=" << a.q() << '\n';
  if (const auto& p = a.provenance()) {
    os << "# provenance r=";
    for (std::size_t i = 0; i < p->r.size(); ++i) os << (i ? ";" : "") << p->r[i];
    os << " m=";
    for (std::size_t i = 0; i < p->m.size(); ++i) os << (i ? ";" : "") << p->m[i];
    os << " m_status=" << to_string(p->m_status) << '\n';
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t c = 0; c < a.cols(); ++c) os << (c ? "," : "") << a.at(i, c);
    os << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

}  // namespace detail

inline HashFamilyMatrix read_matrix_csv(std::istream& is) {
  std::optional<Value> q;
  std::optional<Provenance> prov;
  std::vector<Value> cells;
  std::size_t rows = 0, cols = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# q=", 0) == 0) {
      q = parse_integer(line.substr(4)).convert_to<Value>();
    } else if (line.rfind("# provenance", 0) == 0) {
      Provenance p;
      for (const auto& field : detail::split(line.substr(12), ' ')) {
        if (field.rfind("r=", 0) == 0)
          for (const auto& v : detail::split(field.substr(2), ';')) p.r.push_back(parse_integer(v));
        else if (field.rfind("m=", 0) == 0)
          for (const auto& v : detail::split(field.substr(2), ';')) p.m.push_back(to_value(parse_integer(v)));
        else if (field.rfind("m_status=", 0) == 0)
          p.m_status = m_status_from_string(field.substr(9));
      }
      prov = std::move(p);
    } else if (line[0] == '#') {
      continue;
    } else {
      const auto items = detail::split(line, ',');
      if (rows == 0) cols = items.size();
      if (items.size() != cols) throw precondition_error("matrix rows have unequal lengths");
      for (const auto& v : items) cells.push_back(to_value(parse_integer(v)));
      ++rows;
    }
  }
  if (!q) throw precondition_error("matrix CSV lacks a '# q=' header");
  return HashFamilyMatrix(rows, cols, *q, std::move(cells), std::move(prov));
}

inline json to_json(const ShfResult& r) {
  json j = {{"separating", r.separating}, {"families", r.families}};
  if (r.witness) j["witness"] = *r.witness;
  return j;
}

inline json to_json(const RainbowCycle& c) { return {{"k", c.k()}, {"columns", c.columns}, {"rows", c.rows}}; }

inline json to_json(const CycleEquation& e) {
  return {{"sequence", integers_json(e.sequence)},
          {"coefficients", integers_json(e.coefficients)},
          {"values", e.values},
          {"residue", integer_json(e.residue)},
          {"holds", e.holds},
          {"nontrivial", e.nontrivial}};
}

/// One decimal integer per line.
inline void write_set_text(std::ostream& os, std::span<const Value> set) {
  for (Value v : set) os << v << '\n';
}

inline std::vector<Value> read_set_text(std::istream& is) {
  std::vector<Value> out;
  std::string line;
  while (std::getline(is, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.push_back(to_value(parse_integer(line.substr(b, e - b + 1))));
  }
  return out;
}

}  // namespace shfam
