#pragma once

// Structured records for algebras, set functions, groups, labeled
// partitions and certificates. Objects serialize with sorted keys and
// rationals as canonical "p/q" strings, so equal values give equal bytes.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "l0/algebra.hpp"
#include "l0/group.hpp"
#include "l0/pathology.hpp"
#include "l0/pugroup.hpp"
#include "l0/submeasure.hpp"

namespace l0 {

using Json = nlohmann::json;

inline std::string canonical(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

inline std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

/// Rationals are strings; bare integers are tolerated on input.
inline Rational as_rational(const Json& j, const std::string& where) {
  try {
    if (j.is_number()) throw InputError("rationals must be written as strings");
    return parse_rational(as_string(j, where));
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline long as_long(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<long>();
  if (!j.is_string()) throw InputError(where + ": expected an integer");
  Rational r = as_rational(j, where);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p()) throw InputError(where + ": expected an integer");
  return r.get_num().get_si();
}

inline Json to_json(const Rational& r) { return to_string(r); }

// ---------------------------------------------------------------------------
// Algebras and elements

inline Json algebra_to_json(const FiniteAlgebra& alg) { return Json{{"atoms", alg.atoms()}}; }

inline AlgebraPtr algebra_from_json(const Json& j, const std::string& where = "algebra") {
  const Json& atoms = field(j, "atoms", where);
  if (!atoms.is_array()) throw InputError(where + ".atoms: expected an array");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    names.push_back(as_string(atoms[i], where + ".atoms[" + std::to_string(i) + "]"));
  }
  return FiniteAlgebra::make(std::move(names));
}

inline Json elem_to_json(const AlgebraPtr& alg, Mask m) { return Elem(alg, m).atom_names(); }

inline Mask elem_from_json(const AlgebraPtr& alg, const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of atom names");
  Mask m = 0;
  for (const auto& a : j) {
    std::string name = as_string(a, where);
    try {
      m |= Mask{1} << alg->atom_index(name);
    } catch (const InputError&) {
      throw InputError(where + ": unknown atom '" + name + "'");
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Set functions

inline Json measure_weights_to_json(const AlgebraPtr& alg, const std::vector<Rational>& w) {
  Json out = Json::object();
  for (int i = 0; i < alg->size(); ++i) out[alg->atom(i)] = to_json(w[static_cast<std::size_t>(i)]);
  return out;
}

inline std::vector<Rational> measure_weights_from_json(const AlgebraPtr& alg, const Json& j,
                                                       const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object of atom weights");
  std::vector<Rational> w(static_cast<std::size_t>(alg->size()), 0);
  for (auto it = j.begin(); it != j.end(); ++it) {
    int i;
    try {
      i = alg->atom_index(it.key());
    } catch (const InputError&) {
      throw InputError(where + ": unknown atom '" + it.key() + "'");
    }
    w[static_cast<std::size_t>(i)] = as_rational(it.value(), where + "." + it.key());
  }
  return w;
}

inline Json setfunc_to_json(const SetFunc& phi) {
  const auto& alg = phi.algebra();
  Json out = algebra_to_json(*alg);
  out["kind"] = kind_name(phi.kind());
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, TableRepr>) {
          Json values = Json::object();
          for (Mask m = 0; m < r.values.size(); ++m) values[std::to_string(m)] = to_json(r.values[m]);
          out["values"] = values;
        } else if constexpr (std::is_same_v<T, CoverRepr>) {
          Json fam = Json::array();
          for (Mask s : r.family) fam.push_back(elem_to_json(alg, s));
          out["family"] = fam;
          out["unit_cost"] = to_json(r.unit_cost);
        } else if constexpr (std::is_same_v<T, MeasureRepr>) {
          out["weights"] = measure_weights_to_json(alg, r.weights);
        } else if constexpr (std::is_same_v<T, MaxRepr>) {
          Json of = Json::array();
          for (const auto& m : r.parts) of.push_back(Json{{"kind", "measure"}, {"weights", measure_weights_to_json(alg, m.weights)}});
          out["of"] = of;
        } else {
          out["outer"] = setfunc_to_json(*r.outer);
          Json table = Json::object();
          for (Mask m = 0; m < r.hom.table().size(); ++m) {
            table[std::to_string(m)] = elem_to_json(r.hom.target(), r.hom.table()[m]);
          }
          out["hom"] = Json{{"table", table}};
        }
      },
      phi.repr());
  return out;
}

/// A set-function record; `alg` overrides the record's own "atoms" (used
/// for nested measures inside "max").
inline SetFunc setfunc_from_json(const Json& j, const std::string& where = "setfunc",
                                 AlgebraPtr alg = nullptr, std::optional<Seed> seed = std::nullopt) {
  if (!alg) alg = algebra_from_json(j, where);
  const std::string kind = as_string(field(j, "kind", where), where + ".kind");
  if (kind == "table") {
    const Json& values = field(j, "values", where);
    if (!values.is_object()) throw InputError(where + ".values: expected an object keyed by bitmask");
    std::vector<std::optional<Rational>> slots(alg->element_count());
    for (auto it = values.begin(); it != values.end(); ++it) {
      const std::string key = where + ".values." + it.key();
      long m = as_long(Json(it.key()), key);
      if (m < 0 || static_cast<std::size_t>(m) >= slots.size()) throw InputError(key + ": bitmask out of range");
      slots[static_cast<std::size_t>(m)] = as_rational(it.value(), key);
    }
    if (!slots[0]) slots[0] = Rational(0);
    std::vector<Rational> v;
    for (std::size_t m = 0; m < slots.size(); ++m) {
      if (!slots[m]) throw InputError(where + ".values: missing bitmask " + std::to_string(m));
      v.push_back(*slots[m]);
    }
    return SetFunc::table(alg, std::move(v));
  }
  if (kind == "cover") {
    const Json& fam = field(j, "family", where);
    if (!fam.is_array()) throw InputError(where + ".family: expected an array");
    std::vector<Mask> family;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      family.push_back(elem_from_json(alg, fam[i], where + ".family[" + std::to_string(i) + "]"));
    }
    Rational cost = j.contains("unit_cost") ? as_rational(j["unit_cost"], where + ".unit_cost") : Rational(1);
    return SetFunc::cover(alg, std::move(family), cost);
  }
  if (kind == "measure") {
    return SetFunc::measure(alg, measure_weights_from_json(alg, field(j, "weights", where), where + ".weights"));
  }
  if (kind == "max") {
    const Json& of = field(j, "of", where);
    if (!of.is_array()) throw InputError(where + ".of: expected an array");
    std::vector<std::vector<Rational>> parts;
    for (std::size_t i = 0; i < of.size(); ++i) {
      const std::string w = where + ".of[" + std::to_string(i) + "]";
      if (as_string(field(of[i], "kind", w), w + ".kind") != "measure") {
        throw InputError(w + ": max combines measure records only");
      }
      parts.push_back(measure_weights_from_json(alg, field(of[i], "weights", w), w + ".weights"));
    }
    return SetFunc::max_of(alg, std::move(parts));
  }
  if (kind == "pullback") {
    SetFunc outer = setfunc_from_json(field(j, "outer", where), where + ".outer", nullptr, seed);
    const Json& table = field(field(j, "hom", where), "table", where + ".hom");
    if (!table.is_object()) throw InputError(where + ".hom.table: expected an object keyed by bitmask");
    std::vector<std::optional<Mask>> slots(alg->element_count());
    for (auto it = table.begin(); it != table.end(); ++it) {
      const std::string key = where + ".hom.table." + it.key();
      long m = as_long(Json(it.key()), key);
      if (m < 0 || static_cast<std::size_t>(m) >= slots.size()) throw InputError(key + ": bitmask out of range");
      slots[static_cast<std::size_t>(m)] = elem_from_json(outer.algebra(), it.value(), key);
    }
    std::vector<Mask> t;
    for (std::size_t m = 0; m < slots.size(); ++m) {
      if (!slots[m]) throw InputError(where + ".hom.table: missing bitmask " + std::to_string(m));
      t.push_back(*slots[m]);
    }
    if (alg->size() > kMaxExhaustivePairAtoms && !seed) {
      throw InputError(where + ": checking a join-homomorphism on more than " +
                       std::to_string(kMaxExhaustivePairAtoms) + " atoms samples pairs and needs --seed");
    }
    return SetFunc::pullback(outer, VeeMonoidHom(alg, outer.algebra(), std::move(t), seed));
  }
  throw InputError(where + ".kind: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Groups and labeled partitions

inline Json group_to_json(const Group& G) {
  switch (G.kind()) {
    case GroupKind::kCyclic: {
      Json out{{"kind", "cyclic"}, {"order", G.order()}};
      return out;
    }
    case GroupKind::kIntegers: return Json{{"kind", "int"}};
    case GroupKind::kRationals: return Json{{"kind", "rational-add"}};
    case GroupKind::kTable: break;
  }
  Json mul = Json::array();
  for (const auto& row : G.table_mul()) {
    Json r = Json::array();
    for (int v : row) r.push_back(G.names()[static_cast<std::size_t>(v)]);
    mul.push_back(r);
  }
  Json inv = Json::array();
  for (int v : G.table_inv()) inv.push_back(G.names()[static_cast<std::size_t>(v)]);
  Json out{{"kind", "table"}, {"elements", G.names()}, {"mul", mul}, {"inv", inv}};
  if (G.declared_length()) {
    Json len = Json::object();
    for (std::size_t i = 0; i < G.names().size(); ++i) len[G.names()[i]] = to_json((*G.declared_length())[i]);
    out["length"] = len;
  }
  return out;
}

inline GroupPtr group_from_json(const Json& j, const std::string& where = "group") {
  const std::string kind = as_string(field(j, "kind", where), where + ".kind");
  if (kind == "int") return Group::integers();
  if (kind == "rational-add") return Group::rationals();
  if (kind == "cyclic") {
    long k = as_long(field(j, "order", where), where + ".order");
    std::optional<std::vector<Rational>> length;
    if (j.contains("length")) {
      const Json& l = j["length"];
      if (!l.is_object()) throw InputError(where + ".length: expected an object keyed by residue");
      std::vector<Rational> v(static_cast<std::size_t>(std::max(k, 0L)), 0);
      for (auto it = l.begin(); it != l.end(); ++it) {
        long x = as_long(Json(it.key()), where + ".length." + it.key());
        if (x < 0 || x >= k) throw InputError(where + ".length: residue " + it.key() + " out of range");
        v[static_cast<std::size_t>(x)] = as_rational(it.value(), where + ".length." + it.key());
      }
      length = std::move(v);
    }
    return Group::cyclic(k, std::move(length));
  }
  if (kind != "table") throw InputError(where + ".kind: unknown group kind '" + kind + "'");
  const Json& elems = field(j, "elements", where);
  if (!elems.is_array()) throw InputError(where + ".elements: expected an array");
  std::vector<std::string> names;
  for (const auto& e : elems) names.push_back(as_string(e, where + ".elements"));
  auto index = [&](const Json& x, const std::string& w) -> int {
    if (x.is_number_integer()) return x.get<int>();
    std::string s = as_string(x, w);
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == s) return static_cast<int>(i);
    }
    throw InputError(w + ": unknown element '" + s + "'");
  };
  const Json& mul = field(j, "mul", where);
  if (!mul.is_array()) throw InputError(where + ".mul: expected an array of rows");
  std::vector<std::vector<int>> table;
  for (std::size_t r = 0; r < mul.size(); ++r) {
    if (!mul[r].is_array()) throw InputError(where + ".mul[" + std::to_string(r) + "]: expected an array");
    std::vector<int> row;
    for (const auto& x : mul[r]) row.push_back(index(x, where + ".mul[" + std::to_string(r) + "]"));
    table.push_back(std::move(row));
  }
  const Json& inv = field(j, "inv", where);
  if (!inv.is_array()) throw InputError(where + ".inv: expected an array");
  std::vector<int> inverse;
  for (const auto& x : inv) inverse.push_back(index(x, where + ".inv"));
  std::optional<std::vector<Rational>> length;
  if (j.contains("length")) {
    const Json& l = j["length"];
    if (!l.is_object()) throw InputError(where + ".length: expected an object keyed by element");
    std::vector<Rational> v(names.size(), 0);
    for (auto it = l.begin(); it != l.end(); ++it) {
      v[static_cast<std::size_t>(index(Json(it.key()), where + ".length"))] =
          as_rational(it.value(), where + ".length." + it.key());
    }
    length = std::move(v);
  }
  return Group::table(std::move(names), std::move(table), std::move(inverse), std::move(length));
}

inline Json pufunc_to_json(const PUFunc& a) {
  Json labels = Json::object();
  for (const auto& [g, m] : a.labels()) labels[a.group()->format(g)] = elem_to_json(a.algebra(), m);
  return Json{{"group", group_to_json(*a.group())}, {"labels", labels}};
}

inline PUFunc pufunc_from_json(const Json& j, const AlgebraPtr& alg, const std::string& where = "pufunc",
                               GroupPtr group = nullptr) {
  if (!group) group = group_from_json(field(j, "group", where), where + ".group");
  const Json& labels = field(j, "labels", where);
  if (!labels.is_object()) throw InputError(where + ".labels: expected an object");
  LabelMap l;
  for (auto it = labels.begin(); it != labels.end(); ++it) {
    const std::string w = where + ".labels." + it.key();
    GroupElement g;
    try {
      g = group->parse(it.key());
    } catch (const InputError& e) {
      throw InputError(w + ": " + e.what());
    }
    l[g] |= elem_from_json(alg, it.value(), w);
  }
  return PUFunc(alg, group, l);
}

// ---------------------------------------------------------------------------
// Certificates

inline Json certificate_to_json(const SetFunc& phi, const DominationCertificate& c, bool verified) {
  const auto& alg = phi.algebra();
  Json dual = Json::array();
  for (const auto& d : c.dual) dual.push_back(Json{{"set", elem_to_json(alg, d.set)}, {"y", to_json(d.weight)}});
  Json out{{"M", to_json(c.value)},
           {"primal", measure_weights_to_json(alg, c.primal)},
           {"dual", dual},
           {"dual_cost", to_json(c.dual_cost)},
           {"verified", verified}};
  const Rational top = phi.top_value();
  out["kappa"] = sgn(top) > 0 ? Json(to_json(c.value / top)) : Json(nullptr);
  return out;
}

inline DominationCertificate certificate_from_json(const SetFunc& phi, const Json& j,
                                                   const std::string& where = "certificate") {
  const auto& alg = phi.algebra();
  DominationCertificate c;
  c.value = as_rational(field(j, "M", where), where + ".M");
  c.primal = measure_weights_from_json(alg, field(j, "primal", where), where + ".primal");
  const Json& dual = field(j, "dual", where);
  if (!dual.is_array()) throw InputError(where + ".dual: expected an array");
  for (std::size_t i = 0; i < dual.size(); ++i) {
    const std::string w = where + ".dual[" + std::to_string(i) + "]";
    c.dual.push_back({elem_from_json(alg, field(dual[i], "set", w), w + ".set"), as_rational(field(dual[i], "y", w), w + ".y")});
  }
  c.dual_cost = j.contains("dual_cost") ? as_rational(j["dual_cost"], where + ".dual_cost") : c.value;
  return c;
}

inline Json kelley_to_json(const SetFunc& phi, const KelleyMeasure& k, bool verified) {
  const auto& alg = phi.algebra();
  Json order = Json::array();
  for (int i : k.order) order.push_back(alg->atom(i));
  return Json{{"order", order}, {"nu", measure_weights_to_json(alg, k.weights)}, {"verified", verified}};
}

inline KelleyMeasure kelley_from_json(const SetFunc& phi, const Json& j, const std::string& where = "kelley") {
  const auto& alg = phi.algebra();
  KelleyMeasure k;
  const Json& order = field(j, "order", where);
  if (!order.is_array()) throw InputError(where + ".order: expected an array");
  for (const auto& a : order) k.order.push_back(alg->atom_index(as_string(a, where + ".order")));
  k.weights = measure_weights_from_json(alg, field(j, "nu", where), where + ".nu");
  return k;
}

/// Empty when ν <= φ everywhere and ν(1) = φ(1).
inline std::string verify_kelley(const SetFunc& phi, const KelleyMeasure& k) {
  const auto& v = phi.values();
  MeasureRepr nu{k.weights};
  for (const auto& w : k.weights) {
    if (sgn(w) < 0) return "negative weight";
  }
  for (Mask a = 0; a < v.size(); ++a) {
    if (measure_of(nu, a) > v[a]) return "ν exceeds φ at " + Elem(phi.algebra(), a).to_string();
  }
  if (measure_of(nu, phi.algebra()->top()) != v[phi.algebra()->top()]) return "ν(1) ≠ φ(1)";
  return {};
}

inline Json witness_to_json(const SetFunc& phi, const ChristensenWitness& w) {
  const auto& alg = phi.algebra();
  Json sets = Json::array();
  for (const auto& [s, mult] : w.sets) {
    sets.push_back(Json{{"set", elem_to_json(alg, s)}, {"multiplicity", mult.get_str()}});
  }
  Json partition = Json::array();
  for (Mask q : w.partition) partition.push_back(elem_to_json(alg, q));
  return Json{{"epsilon", to_json(w.epsilon)}, {"m", w.m.get_str()},
              {"sets", sets},                 {"partition", partition},
              {"min_coverage", w.min_coverage.get_str()}, {"lp_value", to_json(w.lp_value)}};
}

inline ChristensenWitness witness_from_json(const SetFunc& phi, const Json& j, const std::string& where = "witness") {
  const auto& alg = phi.algebra();
  ChristensenWitness w;
  w.epsilon = as_rational(field(j, "epsilon", where), where + ".epsilon");
  auto integer = [&](const Json& x, const std::string& wh) {
    Rational r = as_rational(x, wh);
    if (r.get_den() != 1) throw InputError(wh + ": expected an integer");
    return Integer(r.get_num());
  };
  w.m = integer(field(j, "m", where), where + ".m");
  const Json& sets = field(j, "sets", where);
  if (!sets.is_array()) throw InputError(where + ".sets: expected an array");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::string s = where + ".sets[" + std::to_string(i) + "]";
    w.sets.emplace_back(elem_from_json(alg, field(sets[i], "set", s), s + ".set"),
                        integer(field(sets[i], "multiplicity", s), s + ".multiplicity"));
  }
  const Json& part = field(j, "partition", where);
  if (!part.is_array()) throw InputError(where + ".partition: expected an array");
  for (const auto& q : part) w.partition.push_back(elem_from_json(alg, q, where + ".partition"));
  w.min_coverage = integer(field(j, "min_coverage", where), where + ".min_coverage");
  w.lp_value = j.contains("lp_value") ? as_rational(j["lp_value"], where + ".lp_value") : Rational(0);
  return w;
}

}  // namespace l0
