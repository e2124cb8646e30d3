#pragma once

// Escape dynamics on label groups: (1/n)U = {g : g¹..gⁿ ∈ U}, trap(U),
// the power-bounded decomposition of S(φ,G), escape-function verdicts,
// Følner checks, and finite models of S(φ,G) and (𝒜,△) as table groups.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "l0/algebra.hpp"
#include "l0/group.hpp"
#include "l0/pugroup.hpp"
#include "l0/submeasure.hpp"

namespace l0 {

// Powers of a factor are replayed up to its order; in infinite groups the
// replay stops here.
inline constexpr long kPowerReplayCap = 64;

namespace detail {

inline bool powers_inside(const Group& G, const GroupElement& g, long n,
                          const std::function<bool(const GroupElement&)>& in) {
  GroupElement p = g;
  for (long k = 1; k <= n; ++k) {
    if (!in(p)) return false;
    p = G.mul(p, g);
  }
  return true;
}

inline long max_abs(const std::set<GroupElement>& s) {
  long r = 0;
  for (const auto& g : s) r = std::max(r, std::abs(g.as_long()));
  return r;
}

}  // namespace detail

/// (1/n)U. Finite groups and finite subsets of ℤ by definition; ℤ and ℚ
/// balls in closed form (Ball(r) ↦ Ball(⌊r/n⌋), resp. Ball(r/n)).
inline Neighborhood one_over_n(const Neighborhood& U, long n) {
  if (n < 1) throw InputError("(1/n)U needs n >= 1");
  const GroupPtr& G = U.group();
  if (std::holds_alternative<Neighborhood::PUNbhd>(U.repr())) {
    throw InputError("(1/n)U is computed on label-group neighborhoods");
  }
  if (auto* b = std::get_if<Neighborhood::Ball>(&U.repr()); b && !G->is_finite()) {
    if (G->kind() == GroupKind::kIntegers) return Neighborhood::ball(G, floor_div(b->radius / n));
    return Neighborhood::ball(G, b->radius / n);
  }
  std::set<GroupElement> members = U.members();
  auto in = [&](const GroupElement& x) { return members.count(x) > 0; };
  std::set<GroupElement> out;
  for (const auto& g : members) {
    if (detail::powers_inside(*G, g, n, in)) out.insert(g);
  }
  return Neighborhood::finite(G, std::move(out));
}

/// trap(U), the union of the subgroups inside U. On ℤ and ℚ only {0}
/// qualifies once U is bounded.
inline Neighborhood trap(const Neighborhood& U) {
  const GroupPtr& G = U.group();
  if (std::holds_alternative<Neighborhood::PUNbhd>(U.repr())) {
    throw InputError("trap is computed on label-group neighborhoods");
  }
  if (!G->is_finite()) return Neighborhood::finite(G, {G->identity()});
  std::set<GroupElement> members = U.members();
  auto in = [&](const GroupElement& x) { return members.count(x) > 0; };
  std::set<GroupElement> out;
  for (const auto& g : members) {
    if (detail::powers_inside(*G, g, G->element_order(g), in)) out.insert(g);
  }
  return Neighborhood::finite(G, std::move(out));
}

/// Smallest n with (1/n)U = trap(U).
inline long trap_stabilization(const Neighborhood& U) {
  const GroupPtr& G = U.group();
  std::set<GroupElement> t = trap(U).members();
  if (G->is_finite()) {
    long bound = 1;
    for (const auto& g : U.members()) bound = std::max(bound, G->element_order(g));
    for (long n = 1; n <= bound; ++n) {
      if (one_over_n(U, n).members() == t) return n;
    }
    throw VerificationError("(1/n)U did not reach trap(U) by the largest element order");
  }
  if (G->kind() != GroupKind::kIntegers) throw PreconditionError("no stabilization on ℚ");
  return detail::max_abs(U.members()) + 1;
}

// ---------------------------------------------------------------------------
// Power-bounded decomposition

/// a = ∏_Q a_Q over the atom partition, with a_Q(e) = a(e) ∨ ¬Q and
/// a_Q(g) = a(g) ∧ Q. Each a_Q lies in Γ(Q), so its powers stay in
/// N_φ(V,ε) as soon as φ(Q) <= ε.
inline std::vector<PUFunc> trap_decompose(const SetFunc& phi, const PUFunc& a, const Neighborhood& V,
                                          const Rational& eps) {
  const auto& alg = a.algebra();
  require_same_algebra(phi.algebra(), alg, "trap_decompose");
  if (!same_group(V.group(), a.group())) throw InputError("trap_decompose: V lives in another group");
  if (sgn(eps) <= 0) throw InputError("ε must be positive");
  for (int i = 0; i < alg->size(); ++i) {
    Rational v = phi.eval(Mask{1} << i);
    if (v > eps) {
      throw PreconditionError("no partition with cells of φ-value <= " + to_string(eps) + ": atom " +
                              alg->atom(i) + " has φ = " + to_string(v));
    }
  }
  const GroupPtr& G = a.group();
  const GroupElement e = G->identity();
  const Mask top = alg->top();
  const Neighborhood N = Neighborhood::pu(V, eps);

  std::vector<PUFunc> factors;
  for (int i = 0; i < alg->size(); ++i) {
    const Mask q = Mask{1} << i;
    LabelMap l;
    for (const auto& [g, m] : a.labels()) {
      if (!(g == e)) l[g] = m & q;
    }
    l[e] = a.at(e) | (top & ~q);
    factors.emplace_back(alg, G, l);
  }

  PUFunc product = pu_identity(alg, G);
  const PUFunc id = product;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const PUFunc& f = factors[i];
    if (!gamma_contains(Elem::atom(alg, static_cast<int>(i)), f)) {
      throw VerificationError("trap factor outside Γ(Q)");
    }
    PUFunc p = f;
    for (long k = 1; k <= kPowerReplayCap && !(p == id); ++k) {
      if (!in_nbhd(phi, p, N)) throw VerificationError("a power of a trap factor leaves N_φ(V,ε)");
      p = pu_multiply(p, f);
    }
    product = pu_multiply(product, f);
  }
  if (!(product == a)) throw VerificationError("trap factors do not multiply back to a");
  return factors;
}

// ---------------------------------------------------------------------------
// Escape functions

using LengthFn = std::function<Rational(const GroupElement&)>;

struct EscapeVerdict {
  bool escape = false;
  long stabilization = 0;                   // n with (1/n)U = trap(U)
  std::optional<GroupElement> witness;      // element of trap(U) with f > 0
  Rational witness_value;
  std::vector<std::pair<Rational, std::optional<long>>> per_epsilon;  // least n, if any
};

inline void require_length_function(const Group& G, const std::vector<GroupElement>& window,
                                    const LengthFn& f) {
  const GroupElement e = G.identity();
  if (f(e) != 0) throw PreconditionError("f(e) ≠ 0");
  std::set<GroupElement> in(window.begin(), window.end());
  for (const auto& x : window) {
    if (sgn(f(x)) < 0) throw PreconditionError("f is negative at " + G.format(x));
    if (f(G.inv(x)) != f(x)) throw PreconditionError("f(g⁻¹) ≠ f(g) at " + G.format(x));
    for (const auto& y : window) {
      GroupElement xy = G.mul(x, y);
      if (!G.is_finite() && !in.count(xy)) continue;
      if (f(xy) > f(x) + f(y)) {
        throw PreconditionError("f(gh) > f(g) + f(h) at (" + G.format(x) + ", " + G.format(y) + ")");
      }
    }
  }
}

/// Decides whether some (1/n)U lands in f⁻¹([0,ε)) for every ε > 0, which
/// happens iff f vanishes on trap(U). Exact on finite groups and on ℤ;
/// `eps_grid` additionally reports the least n per ε up to `n_max`.
inline EscapeVerdict is_escape_function(const LengthFn& f, const Neighborhood& U,
                                        const std::vector<Rational>& eps_grid, long n_max) {
  const GroupPtr& G = U.group();
  if (G->kind() == GroupKind::kRationals) {
    throw PreconditionError("(1/n)U never stabilizes on ℚ; no exact escape verdict");
  }
  if (std::holds_alternative<Neighborhood::PUNbhd>(U.repr())) {
    throw InputError("materialize S(φ,G) first; U must be a label-group neighborhood");
  }
  EscapeVerdict v;
  std::vector<GroupElement> window;
  if (G->is_finite()) {
    window = G->elements();
  } else {
    const long w = 2 * (detail::max_abs(U.members()) + 1);
    for (long k = -w; k <= w; ++k) window.emplace_back(k);
  }
  require_length_function(*G, window, f);

  v.stabilization = trap_stabilization(U);
  v.escape = true;
  for (const auto& g : trap(U).members()) {
    Rational x = f(g);
    if (sgn(x) > 0) {
      v.escape = false;
      v.witness = g;
      v.witness_value = x;
      break;
    }
  }
  const long limit = std::max(n_max, v.stabilization);
  for (const auto& eps : eps_grid) {
    if (sgn(eps) <= 0) throw InputError("ε must be positive");
    std::optional<long> hit;
    for (long n = 1; n <= limit && !hit; ++n) {
      bool inside = true;
      for (const auto& g : one_over_n(U, n).members()) {
        if (f(g) >= eps) {
          inside = false;
          break;
        }
      }
      if (inside) hit = n;
    }
    v.per_epsilon.emplace_back(eps, hit);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Følner sets

struct FolnerReport {
  std::size_t f_size = 0;
  Rational translate_ratio;  // |F △ gF| / |F|
  Rational outside_ratio;    // |F ∖ A| / |F|
  Rational bound;            // (1 − ε)/2
  bool antecedent = false;   // translate_ratio <= ε
  bool holds = true;         // antecedent ⟹ outside_ratio >= bound
};

inline FolnerReport folner_check(const Group& G, const std::set<GroupElement>& F,
                                 const std::set<GroupElement>& A, const GroupElement& g,
                                 const Rational& eps) {
  if (F.empty()) throw InputError("F must be nonempty");
  for (const auto& x : F) G.require(x);
  for (const auto& x : A) G.require(x);
  G.require(g);
  for (const auto& x : A) {
    GroupElement gx = G.mul(g, x);
    if (A.count(gx)) {
      throw PreconditionError("A ∩ gA ≠ ∅: " + G.format(gx) + " = " + G.format(g) + "·" + G.format(x));
    }
  }
  std::set<GroupElement> gF;
  for (const auto& x : F) gF.insert(G.mul(g, x));
  std::size_t sym = 0;
  for (const auto& x : F) sym += gF.count(x) ? 0 : 1;
  for (const auto& x : gF) sym += F.count(x) ? 0 : 1;
  std::size_t outside = 0;
  for (const auto& x : F) outside += A.count(x) ? 0 : 1;

  FolnerReport r;
  r.f_size = F.size();
  const Rational size(static_cast<unsigned long>(F.size()));
  r.translate_ratio = Rational(static_cast<unsigned long>(sym)) / size;
  r.outside_ratio = Rational(static_cast<unsigned long>(outside)) / size;
  r.bound = (1 - eps) / 2;
  r.antecedent = r.translate_ratio <= eps;
  r.holds = !r.antecedent || r.outside_ratio >= r.bound;
  if (!r.holds) throw VerificationError("Følner implication fails");
  return r;
}

// ---------------------------------------------------------------------------
// Finite models

inline constexpr long kMaxModelOrder = 256;

/// S(𝒜,G) for finite G as a Cayley table, with length d_φ(·,e).
struct PuGroupModel {
  AlgebraPtr algebra;
  GroupPtr labels;
  GroupPtr group;
  std::vector<PUFunc> elements;

  long index_of(const PUFunc& a) const {
    long code = 0;
    for (int i = algebra->size() - 1; i >= 0; --i) {
      long digit = -1;
      for (const auto& [g, m] : a.labels()) {
        if ((m >> i) & 1U) digit = g.as_long();
      }
      code = code * labels->order() + digit;
    }
    return code;
  }

  /// N_φ(V,ε) as a subset of the table group.
  Neighborhood nbhd(const SetFunc& phi, const Neighborhood& V, const Rational& eps) const {
    const Neighborhood N = Neighborhood::pu(V, eps);
    std::set<GroupElement> members;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (in_nbhd(phi, elements[i], N)) members.insert(GroupElement(static_cast<long>(i)));
    }
    return Neighborhood::finite(group, std::move(members));
  }
};

inline PuGroupModel materialize_pu_group(const AlgebraPtr& alg, const GroupPtr& G, const SetFunc& phi) {
  require_same_algebra(alg, phi.algebra(), "materialize_pu_group");
  if (!G->is_finite()) throw InputError("only finite label groups have a finite S(𝒜,G)");
  long count = 1;
  for (int i = 0; i < alg->size(); ++i) {
    count *= G->order();
    if (count > kMaxModelOrder) {
      throw CapacityError("S(𝒜,G) has more than " + std::to_string(kMaxModelOrder) + " elements");
    }
  }
  PuGroupModel model{alg, G, nullptr, {}};
  for (long code = 0; code < count; ++code) {
    LabelMap l;
    long c = code;
    for (int i = 0; i < alg->size(); ++i) {
      l[GroupElement(c % G->order())] |= Mask{1} << i;
      c /= G->order();
    }
    model.elements.emplace_back(alg, G, l);
  }
  const PUFunc id = pu_identity(alg, G);
  std::vector<std::string> names;
  std::vector<std::vector<int>> mul(static_cast<std::size_t>(count), std::vector<int>(static_cast<std::size_t>(count)));
  std::vector<int> inv(static_cast<std::size_t>(count));
  std::vector<Rational> length(static_cast<std::size_t>(count));
  for (long x = 0; x < count; ++x) {
    const PUFunc& a = model.elements[static_cast<std::size_t>(x)];
    names.push_back(a.to_string());
    inv[static_cast<std::size_t>(x)] = static_cast<int>(model.index_of(pu_inverse(a)));
    length[static_cast<std::size_t>(x)] = d_phi(phi, a, id);
    for (long y = 0; y < count; ++y) {
      mul[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          static_cast<int>(model.index_of(pu_multiply(a, model.elements[static_cast<std::size_t>(y)])));
    }
  }
  model.group = Group::table(std::move(names), std::move(mul), std::move(inv), std::move(length),
                             count > 64);
  return model;
}

inline constexpr int kMaxSymmDiffAtoms = 12;

/// (𝒜, △) with length φ.
inline GroupPtr to_symm_diff_group(const AlgebraPtr& alg, const SetFunc& phi) {
  require_same_algebra(alg, phi.algebra(), "to_symm_diff_group");
  if (alg->size() > kMaxSymmDiffAtoms) {
    throw CapacityError("symmetric-difference groups are capped at " + std::to_string(kMaxSymmDiffAtoms) +
                        " atoms");
  }
  require_submeasure(phi, "to_symm_diff_group");
  const std::size_t count = alg->element_count();
  std::vector<std::string> names;
  std::vector<std::vector<int>> mul(count, std::vector<int>(count));
  std::vector<int> inv(count);
  for (Mask x = 0; x < count; ++x) {
    names.push_back(Elem(alg, x).to_string());
    inv[x] = static_cast<int>(x);
    for (Mask y = 0; y < count; ++y) mul[x][y] = static_cast<int>(x ^ y);
  }
  return Group::table(std::move(names), std::move(mul), std::move(inv), phi.values(),
                      count > Group::kMaxCheckedTable);
}

}  // namespace l0
