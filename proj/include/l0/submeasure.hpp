#pragma once

// Set functions φ: 𝒜 → ℚ≥0 on finite powerset algebras. Several
// representations share one exact evaluator; classification scans the
// defining inequalities over pairs of elements.

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "l0/algebra.hpp"
#include "l0/rational.hpp"
#include "l0/set_cover.hpp"

namespace l0 {

class SetFunc;
using SetFuncPtr = std::shared_ptr<const SetFunc>;

struct TableRepr {
  std::vector<Rational> values;  // indexed by mask
};
struct CoverRepr {
  std::vector<Mask> family;
  Rational unit_cost;
};
struct MeasureRepr {
  std::vector<Rational> weights;  // one per atom
};
struct MaxRepr {
  std::vector<MeasureRepr> parts;
};
struct PullbackRepr {
  SetFuncPtr outer;
  VeeMonoidHom hom;
};

enum class SetFuncKind { kTable, kCover, kMeasure, kMax, kPullback };

inline const char* kind_name(SetFuncKind k) {
  switch (k) {
    case SetFuncKind::kTable: return "table";
    case SetFuncKind::kCover: return "cover";
    case SetFuncKind::kMeasure: return "measure";
    case SetFuncKind::kMax: return "max";
    case SetFuncKind::kPullback: return "pullback";
  }
  return "?";
}

inline Rational measure_of(const MeasureRepr& m, Mask a) {
  Rational s = 0;
  for (; a; a &= a - 1) s += m.weights[static_cast<std::size_t>(std::countr_zero(a))];
  return s;
}

class SetFunc {
 public:
  using Repr = std::variant<TableRepr, CoverRepr, MeasureRepr, MaxRepr, PullbackRepr>;

  static SetFunc table(AlgebraPtr alg, std::vector<Rational> values) {
    if (values.size() != alg->element_count()) {
      throw InputError("table needs " + std::to_string(alg->element_count()) + " values, got " +
                       std::to_string(values.size()));
    }
    for (auto& v : values) {
      v.canonicalize();
      if (sgn(v) < 0) throw InputError("set-function values must be nonnegative");
    }
    if (values[0] != 0) throw InputError("φ(0) ≠ 0");
    return SetFunc(std::move(alg), TableRepr{std::move(values)});
  }

  template <class Fn>
  static SetFunc from_function(AlgebraPtr alg, Fn&& fn) {
    std::vector<Rational> values(alg->element_count());
    for (Mask m = 0; m < values.size(); ++m) values[m] = fn(m);
    return table(std::move(alg), std::move(values));
  }

  /// φ(A) = unit_cost · (least number of family members whose join covers A).
  static SetFunc cover(AlgebraPtr alg, std::vector<Mask> family, Rational unit_cost = 1) {
    if (family.empty()) throw InputError("cover family must be nonempty");
    if (family.size() > kMaxCoverFamily) {
      throw CapacityError("cover family has " + std::to_string(family.size()) +
                          " sets; the maximum is " + std::to_string(kMaxCoverFamily));
    }
    if (sgn(unit_cost) <= 0) throw InputError("unit_cost must be positive");
    Mask all = 0;
    for (Mask s : family) {
      if (!alg->contains(s)) throw InputError("cover set outside algebra");
      all |= s;
    }
    if (all != alg->top()) {
      throw InputError("cover family does not join to 1 (missing " +
                       Elem(alg, alg->top() & ~all).to_string() + ")");
    }
    return SetFunc(std::move(alg), CoverRepr{std::move(family), std::move(unit_cost)});
  }

  static SetFunc measure(AlgebraPtr alg, std::vector<Rational> weights) {
    check_weights(*alg, weights);
    return SetFunc(std::move(alg), MeasureRepr{std::move(weights)});
  }

  static SetFunc max_of(AlgebraPtr alg, std::vector<std::vector<Rational>> parts) {
    if (parts.empty()) throw InputError("max needs at least one measure");
    MaxRepr r;
    for (auto& w : parts) {
      check_weights(*alg, w);
      r.parts.push_back(MeasureRepr{std::move(w)});
    }
    return SetFunc(std::move(alg), std::move(r));
  }

  static SetFunc pullback(const SetFunc& outer, VeeMonoidHom hom) {
    require_same_algebra(hom.target(), outer.algebra(), "pullback");
    AlgebraPtr src = hom.source();
    return SetFunc(std::move(src),
                   PullbackRepr{std::make_shared<const SetFunc>(outer), std::move(hom)});
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  const Repr& repr() const { return repr_; }
  SetFuncKind kind() const { return static_cast<SetFuncKind>(repr_.index()); }

  Rational eval(Mask a) const {
    if (!algebra_->contains(a)) throw InputError("element outside the set function's algebra");
    return std::visit([&](const auto& r) { return eval_repr(r, a); }, repr_);
  }

  Rational operator()(const Elem& a) const {
    require_same_algebra(a.algebra(), algebra_, "eval");
    return eval(a.bits());
  }

  Rational top_value() const { return eval(algebra_->top()); }

  /// All 2^n values, computed once and shared between copies.
  const std::vector<Rational>& values() const {
    std::call_once(cache_->once, [&] {
      if (auto* t = std::get_if<TableRepr>(&repr_)) {
        cache_->table = t->values;
        return;
      }
      std::vector<Rational> out(algebra_->element_count());
      for (Mask m = 0; m < out.size(); ++m) out[m] = eval(m);
      cache_->table = std::move(out);
    });
    return cache_->table;
  }

  SetFunc materialize() const { return table(algebra_, values()); }

 private:
  struct Cache {
    std::once_flag once;
    std::vector<Rational> table;
    std::mutex mu;
    std::map<Mask, Rational> cover_memo;
  };

  SetFunc(AlgebraPtr alg, Repr repr)
      : algebra_(std::move(alg)), repr_(std::move(repr)), cache_(std::make_shared<Cache>()) {}

  static void check_weights(const FiniteAlgebra& alg, std::vector<Rational>& w) {
    if (w.size() != static_cast<std::size_t>(alg.size())) {
      throw InputError("measure needs one weight per atom");
    }
    for (auto& x : w) {
      x.canonicalize();
      if (sgn(x) < 0) throw InputError("measure weights must be nonnegative");
    }
  }

  Rational eval_repr(const TableRepr& r, Mask a) const { return r.values[a]; }
  Rational eval_repr(const MeasureRepr& r, Mask a) const { return measure_of(r, a); }
  Rational eval_repr(const MaxRepr& r, Mask a) const {
    Rational best = 0;
    for (const auto& m : r.parts) best = std::max(best, measure_of(m, a));
    return best;
  }
  Rational eval_repr(const PullbackRepr& r, Mask a) const { return r.outer->eval(r.hom.apply(a)); }
  Rational eval_repr(const CoverRepr& r, Mask a) const {
    if (a == 0) return 0;
    {
      std::lock_guard lock(cache_->mu);
      auto it = cache_->cover_memo.find(a);
      if (it != cache_->cover_memo.end()) return it->second;
    }
    CoverResult c = min_set_cover(r.family, a);
    if (!c.coverable) throw VerificationError("cover family fails to cover an element");
    Rational v = r.unit_cost * c.size;
    std::lock_guard lock(cache_->mu);
    cache_->cover_memo.emplace(a, v);
    return v;
  }

  AlgebraPtr algebra_;
  Repr repr_;
  std::shared_ptr<Cache> cache_;
};

// ---------------------------------------------------------------------------
// Classification

struct Violation {
  std::string property;  // "monotone", "subadditive", "submodular", "additive", "strictly_positive"
  Mask a = 0;
  Mask b = 0;
  Rational lhs;  // the side that should be smaller (or equal, for additivity)
  Rational rhs;
};

struct PropertyReport {
  bool monotone = true;
  bool subadditive = true;
  bool submodular = true;
  bool additive = true;
  bool strictly_positive = true;
  bool sampled = false;
  std::vector<Violation> counterexamples;

  bool is_submeasure() const { return monotone && subadditive; }
  bool is_measure() const { return monotone && additive; }
  const Violation* counterexample(const std::string& property) const {
    for (const auto& v : counterexamples) {
      if (v.property == property) return &v;
    }
    return nullptr;
  }
};

/// Re-evaluates a counterexample; true iff it is a genuine violation.
inline bool replays(const SetFunc& phi, const Violation& v) {
  auto f = [&](Mask m) { return phi.eval(m); };
  if (v.property == "monotone") {
    return (v.a & ~v.b) == 0 && f(v.a) == v.lhs && f(v.b) == v.rhs && v.lhs > v.rhs;
  }
  if (v.property == "subadditive") {
    return f(v.a | v.b) == v.lhs && f(v.a) + f(v.b) == v.rhs && v.lhs > v.rhs;
  }
  if (v.property == "submodular") {
    return f(v.a | v.b) + f(v.a & v.b) == v.lhs && f(v.a) + f(v.b) == v.rhs && v.lhs > v.rhs;
  }
  if (v.property == "additive") {
    return (v.a & v.b) == 0 && f(v.a | v.b) == v.lhs && f(v.a) + f(v.b) == v.rhs &&
           v.lhs != v.rhs;
  }
  if (v.property == "strictly_positive") {
    return v.a != 0 && f(v.a) == 0 && v.lhs == 0;
  }
  return false;
}

/// Scans every pair (A, B) for n <= 8; larger algebras need a seed and the
/// report is marked sampled.
inline PropertyReport classify(const SetFunc& phi, std::optional<Seed> seed = std::nullopt) {
  PropertyReport rep;
  const auto& alg = phi.algebra();
  const bool exhaustive_ok = alg->size() <= kMaxExhaustivePairAtoms;
  const std::vector<Rational>* table = exhaustive_ok ? &phi.values() : nullptr;
  auto f = [&](Mask m) { return table ? (*table)[m] : phi.eval(m); };

  auto fail = [&](bool& flag, const char* name, Mask a, Mask b, Rational lhs, Rational rhs) {
    flag = false;
    rep.counterexamples.push_back({name, a, b, std::move(lhs), std::move(rhs)});
  };

  bool exhaustive = for_each_pair(alg, seed, [&](Mask a, Mask b) {
    const Rational fa = f(a), fb = f(b), fj = f(a | b);
    if (rep.monotone && (a & ~b) == 0 && fa > fb) fail(rep.monotone, "monotone", a, b, fa, fb);
    const Rational sum = fa + fb;
    if (rep.subadditive && fj > sum) fail(rep.subadditive, "subadditive", a, b, fj, sum);
    if (rep.submodular) {
      Rational lhs = fj + f(a & b);
      if (lhs > sum) fail(rep.submodular, "submodular", a, b, lhs, sum);
    }
    if (rep.additive && (a & b) == 0 && fj != sum) fail(rep.additive, "additive", a, b, fj, sum);
    return rep.monotone || rep.subadditive || rep.submodular || rep.additive;
  });
  rep.sampled = !exhaustive;

  for (Mask a = 1; a <= alg->top(); ++a) {
    if (f(a) == 0) {
      fail(rep.strictly_positive, "strictly_positive", a, a, 0, 0);
      break;
    }
  }
  return rep;
}

/// Exhaustive monotonicity via single-atom extensions (equivalent to the
/// pairwise definition; O(2^n · n)).
inline std::optional<Violation> find_monotonicity_violation(const SetFunc& phi) {
  const auto& v = phi.values();
  const int n = phi.algebra()->size();
  for (Mask a = 0; a < v.size(); ++a) {
    for (int i = 0; i < n; ++i) {
      Mask b = a | (Mask{1} << i);
      if (b != a && v[a] > v[b]) return Violation{"monotone", a, b, v[a], v[b]};
    }
  }
  return std::nullopt;
}

/// Exhaustive submodularity via diminishing returns:
/// φ(A+i) + φ(A+j) >= φ(A+i+j) + φ(A) for all A and i, j ∉ A.
inline std::optional<Violation> find_submodularity_violation(const SetFunc& phi) {
  const auto& v = phi.values();
  const int n = phi.algebra()->size();
  for (Mask a = 0; a < v.size(); ++a) {
    for (int i = 0; i < n; ++i) {
      Mask ai = a | (Mask{1} << i);
      if (ai == a) continue;
      for (int j = i + 1; j < n; ++j) {
        Mask aj = a | (Mask{1} << j);
        if (aj == a) continue;
        Rational lhs = v[ai | aj] + v[a];
        Rational rhs = v[ai] + v[aj];
        if (lhs > rhs) return Violation{"submodular", ai, aj, lhs, rhs};
      }
    }
  }
  return std::nullopt;
}

inline void require_monotone(const SetFunc& phi, const char* op) {
  if (auto v = find_monotonicity_violation(phi)) {
    throw PreconditionError(std::string(op) + " needs a monotone set function; φ(" +
                            Elem(phi.algebra(), v->a).to_string() + ") = " + to_string(v->lhs) +
                            " > φ(" + Elem(phi.algebra(), v->b).to_string() +
                            ") = " + to_string(v->rhs));
  }
}

inline void require_submeasure(const SetFunc& phi, const char* op) {
  require_monotone(phi, op);
  const auto& v = phi.values();
  // subadditivity reduces to disjoint pairs once monotonicity holds
  for (Mask a = 1; a < v.size(); ++a) {
    for (Mask b = a; b; b = (b - 1) & a) {
      Mask rest = a & ~b;
      if (b < rest) continue;
      if (v[a] > v[b] + v[rest]) {
        throw PreconditionError(std::string(op) + " needs a subadditive set function; φ(" +
                                Elem(phi.algebra(), a).to_string() + ") > φ(" +
                                Elem(phi.algebra(), b).to_string() + ") + φ(" +
                                Elem(phi.algebra(), rest).to_string() + ")");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Diffuseness and two-valued domination

struct Diffuseness {
  Rational value;     // min over partitions of the largest cell value
  Rational atom_max;  // max over atoms of φ({a})
  std::vector<Mask> best_partition;
};

inline Diffuseness diffuseness(const SetFunc& phi) {
  require_monotone(phi, "diffuseness");
  const auto& alg = phi.algebra();
  const auto& v = phi.values();
  Diffuseness d;
  bool first = true;
  for_each_partition(alg, [&](const PartitionOfUnity& q) {
    Rational worst = 0;
    for (const auto& c : q.cells()) worst = std::max(worst, v[c.bits()]);
    if (first || worst < d.value) {
      d.value = worst;
      d.best_partition.clear();
      for (const auto& c : q.cells()) d.best_partition.push_back(c.bits());
      first = false;
    }
  });
  d.atom_max = 0;
  for (int i = 0; i < alg->size(); ++i) d.atom_max = std::max(d.atom_max, v[Mask{1} << i]);
  if (d.value != d.atom_max) {
    throw VerificationError("diffuseness " + to_string(d.value) +
                            " differs from the atom maximum " + to_string(d.atom_max));
  }
  return d;
}

struct TwoValuedDomination {
  Rational value;  // max r such that r·χ <= φ for some two-valued χ
  int atom = 0;    // the atom whose ultrafilter attains it
};

/// For each atom a, the largest r with r·χ_a <= φ is min{φ(A) : a ∈ A};
/// the result maximizes that over atoms.
inline TwoValuedDomination two_valued_domination(const SetFunc& phi) {
  require_monotone(phi, "two_valued_domination");
  const auto& alg = phi.algebra();
  const auto& v = phi.values();
  TwoValuedDomination out{0, 0};
  for (int i = 0; i < alg->size(); ++i) {
    TwoValuedHom chi(alg, i);
    std::optional<Rational> r;
    for (Mask a = 0; a < v.size(); ++a) {
      if (chi(Elem(alg, a)) == 1 && (!r || v[a] < *r)) r = v[a];
    }
    if (*r > out.value) out = {*r, i};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pullbacks and continuity

inline SetFunc pullback(const SetFunc& phi, const VeeMonoidHom& theta) {
  return SetFunc::pullback(phi, theta);
}

/// δ ↦ sup{ μ(θ(A)) : φ(A) <= δ } as an exact nondecreasing step function.
class ContinuityModulus {
 public:
  struct Step {
    Rational delta;
    Rational value;
  };

  explicit ContinuityModulus(std::vector<Step> steps) : steps_(std::move(steps)) {}

  Rational at(const Rational& delta) const {
    Rational out = 0;
    for (const auto& s : steps_) {
      if (s.delta > delta) break;
      out = s.value;
    }
    return out;
  }
  bool continuous_at(const Rational& eps, const Rational& delta) const { return at(delta) <= eps; }
  const std::vector<Step>& steps() const { return steps_; }

 private:
  std::vector<Step> steps_;
};

inline ContinuityModulus continuity_modulus(const VeeMonoidHom& theta, const SetFunc& phi,
                                            const SetFunc& mu) {
  require_same_algebra(theta.source(), phi.algebra(), "continuity_modulus (φ)");
  require_same_algebra(theta.target(), mu.algebra(), "continuity_modulus (μ)");
  std::map<Rational, Rational> best;  // φ-value → max μ∘θ at that φ-value
  const auto& pv = phi.values();
  for (Mask a = 0; a < pv.size(); ++a) {
    Rational m = mu.eval(theta.apply(a));
    auto [it, inserted] = best.emplace(pv[a], m);
    if (!inserted && m > it->second) it->second = m;
  }
  std::vector<ContinuityModulus::Step> steps;
  Rational running = 0;
  for (const auto& [d, m] : best) {
    running = std::max(running, m);
    steps.push_back({d, running});
  }
  return ContinuityModulus(std::move(steps));
}

}  // namespace l0
