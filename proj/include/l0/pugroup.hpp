#pragma once

// S(𝒜,G): finite G-labeled partitions of unity under convolution,
//   (ab)(g) = ⋁{ a(x) ∧ b(y) : xy = g },
// together with support maps, the pseudometric d_φ, the supported
// subgroups Γ(A), the embeddings η and σ_𝒬, and the liftings π_# and f_•.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "l0/algebra.hpp"
#include "l0/group.hpp"
#include "l0/submeasure.hpp"

namespace l0 {

using LabelMap = std::map<GroupElement, Mask>;

class PUFunc {
 public:
  /// Validates disjointness and join = 1; zero labels are dropped.
  PUFunc(AlgebraPtr alg, GroupPtr group, const LabelMap& labels)
      : algebra_(std::move(alg)), group_(std::move(group)) {
    Mask all = 0;
    for (const auto& [g, m] : labels) {
      group_->require(g);
      if (!algebra_->contains(m)) throw InputError("label image outside algebra");
      if (m == 0) continue;
      if (all & m) {
        throw InputError("labels are not pairwise disjoint (at " + group_->format(g) + ")");
      }
      all |= m;
      labels_.emplace(g, m);
    }
    if (all != algebra_->top()) {
      throw InputError("labels do not join to 1 (missing " +
                       Elem(algebra_, algebra_->top() & ~all).to_string() + ")");
    }
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  const GroupPtr& group() const { return group_; }
  const LabelMap& labels() const { return labels_; }

  Mask at(const GroupElement& g) const {
    auto it = labels_.find(g);
    return it == labels_.end() ? 0 : it->second;
  }
  Elem operator()(const GroupElement& g) const { return {algebra_, at(g)}; }

  std::set<GroupElement> support_labels() const {
    std::set<GroupElement> out;
    for (const auto& kv : labels_) out.insert(kv.first);
    return out;
  }

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [g, m] : labels_) {
      if (!first) out += ", ";
      out += group_->format(g) + ":" + Elem(algebra_, m).to_string();
      first = false;
    }
    return out + "}";
  }

  friend bool operator==(const PUFunc& a, const PUFunc& b) {
    return same_algebra(a.algebra_, b.algebra_) && same_group(a.group_, b.group_) &&
           a.labels_ == b.labels_;
  }

 private:
  AlgebraPtr algebra_;
  GroupPtr group_;
  LabelMap labels_;
};

inline void require_compatible(const PUFunc& a, const PUFunc& b, const char* op) {
  require_same_algebra(a.algebra(), b.algebra(), op);
  if (!same_group(a.group(), b.group())) {
    throw InputError(std::string(op) + ": elements have different label groups");
  }
}

inline PUFunc pu_identity(const AlgebraPtr& alg, const GroupPtr& group) {
  return {alg, group, {{group->identity(), alg->top()}}};
}

inline PUFunc pu_multiply(const PUFunc& a, const PUFunc& b) {
  require_compatible(a, b, "pu_multiply");
  const auto& G = *a.group();
  LabelMap out;
  for (const auto& [x, ax] : a.labels()) {
    for (const auto& [y, by] : b.labels()) {
      Mask m = ax & by;
      if (m) out[G.mul(x, y)] |= m;
    }
  }
  return {a.algebra(), a.group(), out};
}

inline PUFunc pu_inverse(const PUFunc& a) {
  LabelMap out;
  for (const auto& [g, m] : a.labels()) out.emplace(a.group()->inv(g), m);
  return {a.algebra(), a.group(), out};
}

/// a^k for k >= 0.
inline PUFunc pu_power(const PUFunc& a, long k) {
  PUFunc out = pu_identity(a.algebra(), a.group());
  const PUFunc base = k < 0 ? pu_inverse(a) : a;
  for (long i = 0; i < std::abs(k); ++i) out = pu_multiply(out, base);
  return out;
}

/// a[T] = ⋁_{g∈T} a(g) for a finite T.
inline Elem support(const PUFunc& a, const std::set<GroupElement>& T) {
  Mask m = 0;
  for (const auto& [g, img] : a.labels()) {
    if (T.count(g)) m |= img;
  }
  return {a.algebra(), m};
}

/// a[{g : pred(g)}]; handles infinite label sets through the finite support.
inline Elem support_where(const PUFunc& a, const std::function<bool(const GroupElement&)>& pred) {
  Mask m = 0;
  for (const auto& [g, img] : a.labels()) {
    if (pred(g)) m |= img;
  }
  return {a.algebra(), m};
}

/// a[G∖{e}].
inline Elem off_identity(const PUFunc& a) {
  const GroupElement e = a.group()->identity();
  return support_where(a, [&](const GroupElement& g) { return !(g == e); });
}

/// d_φ(a,b) = φ(ab⁻¹[G∖{e}]).
inline Rational d_phi(const SetFunc& phi, const PUFunc& a, const PUFunc& b) {
  require_same_algebra(phi.algebra(), a.algebra(), "d_phi");
  return phi(off_identity(pu_multiply(a, pu_inverse(b))));
}

// ---------------------------------------------------------------------------
// Neighborhoods

class Neighborhood {
 public:
  struct FiniteSubset {
    std::set<GroupElement> members;
  };
  struct Ball {
    Rational radius;  // {g : length(g) <= radius}
  };
  struct PUNbhd {
    std::shared_ptr<const Neighborhood> labels;  // U in the label group
    Rational epsilon;
  };
  using Repr = std::variant<FiniteSubset, Ball, PUNbhd>;

  static Neighborhood finite(const GroupPtr& group, std::set<GroupElement> members) {
    for (const auto& g : members) group->require(g);
    if (!members.count(group->identity())) throw InputError("neighborhood must contain the identity");
    for (const auto& g : members) {
      if (!members.count(group->inv(g))) {
        throw InputError("neighborhood must be symmetric (missing inverse of " + group->format(g) + ")");
      }
    }
    return Neighborhood(group, FiniteSubset{std::move(members)});
  }

  static Neighborhood ball(const GroupPtr& group, Rational radius) {
    if (!group->has_length()) throw InputError("a ball needs a length function on the group");
    if (sgn(radius) < 0) throw InputError("ball radius must be nonnegative");
    return Neighborhood(group, Ball{std::move(radius)});
  }

  /// N_φ(U,ε) inside S(φ,G); `labels` is U.
  static Neighborhood pu(const Neighborhood& labels, Rational epsilon) {
    if (sgn(epsilon) <= 0) throw InputError("ε must be positive");
    return Neighborhood(labels.group_, PUNbhd{std::make_shared<const Neighborhood>(labels), std::move(epsilon)});
  }

  const GroupPtr& group() const { return group_; }
  const Repr& repr() const { return repr_; }

  /// Membership for the label-group kinds (FiniteSubset, Ball).
  bool contains(const GroupElement& g) const {
    if (auto* f = std::get_if<FiniteSubset>(&repr_)) return f->members.count(g) > 0;
    if (auto* b = std::get_if<Ball>(&repr_)) return group_->length(g) <= b->radius;
    throw InputError("PU neighborhoods contain partitions, not group elements");
  }

  /// Members of a FiniteSubset or a Ball on a finite group or on ℤ.
  std::set<GroupElement> members() const {
    if (auto* f = std::get_if<FiniteSubset>(&repr_)) return f->members;
    if (auto* b = std::get_if<Ball>(&repr_)) {
      std::set<GroupElement> out;
      if (group_->is_finite()) {
        for (const auto& g : group_->elements()) {
          if (contains(g)) out.insert(g);
        }
        return out;
      }
      if (group_->kind() == GroupKind::kIntegers) {
        const long r = floor_div(b->radius).get_num().get_si();
        for (long k = -r; k <= r; ++k) out.insert(GroupElement(k));
        return out;
      }
    }
    throw InputError("neighborhood has no finite member list");
  }

 private:
  Neighborhood(GroupPtr g, Repr r) : group_(std::move(g)), repr_(std::move(r)) {}
  GroupPtr group_;
  Repr repr_;
};

/// a ∈ N_φ(U,ε)  ⟺  φ(a[G∖U]) <= ε.
inline bool in_nbhd(const SetFunc& phi, const PUFunc& a, const Neighborhood& n) {
  const auto* pn = std::get_if<Neighborhood::PUNbhd>(&n.repr());
  if (!pn) throw InputError("in_nbhd expects a PU neighborhood N_φ(U,ε)");
  const Neighborhood& U = *pn->labels;
  Elem outside = support_where(a, [&](const GroupElement& g) { return !U.contains(g); });
  return phi(outside) <= pn->epsilon;
}

// ---------------------------------------------------------------------------
// Embeddings

inline PUFunc eta(const AlgebraPtr& alg, const GroupPtr& group, const GroupElement& g) {
  return {alg, group, {{g, alg->top()}}};
}

/// σ_𝒬: cell ↦ label; the value at x is the join of the cells labeled x.
inline PUFunc sigma_q(const PartitionOfUnity& q, const GroupPtr& group,
                      const std::map<Mask, GroupElement>& labels) {
  LabelMap out;
  for (const auto& cell : q.cells()) {
    auto it = labels.find(cell.bits());
    if (it == labels.end()) throw InputError("σ_𝒬 labeling is missing cell " + cell.to_string());
    out[it->second] |= cell.bits();
  }
  return {q.algebra(), group, out};
}

// ---------------------------------------------------------------------------
// Supported subgroups Γ(A) = {a : a[G∖{e}] <= A}

inline bool gamma_contains(const Elem& A, const PUFunc& a) {
  require_same_algebra(A.algebra(), a.algebra(), "gamma_contains");
  return leq(off_identity(a), A);
}

/// Γ(A ∨ B) = Γ(A)Γ(B), constructively:
///   a(e) = c(e) ∨ ¬A, a(g) = c(g) ∧ A;   b(e) = c(e) ∨ A, b(g) = c(g) ∧ ¬A.
inline std::pair<PUFunc, PUFunc> gamma_decompose(const PUFunc& c, const Elem& A, const Elem& B) {
  require_same_algebra(c.algebra(), A.algebra(), "gamma_decompose");
  require_same_algebra(c.algebra(), B.algebra(), "gamma_decompose");
  const Mask ab = A.bits() | B.bits();
  const GroupElement e = c.group()->identity();
  for (const auto& [g, m] : c.labels()) {
    if (!(g == e) && (m & ~ab)) {
      throw PreconditionError("c ∉ Γ(A∨B): label " + c.group()->format(g) + " carries " +
                              Elem(c.algebra(), m).to_string() + " outside A∨B");
    }
  }
  const Mask top = c.algebra()->top();
  const Mask notA = top & ~A.bits();
  LabelMap la, lb;
  for (const auto& [g, m] : c.labels()) {
    if (g == e) continue;
    la[g] = m & A.bits();
    lb[g] = m & notA;
  }
  la[e] = c.at(e) | notA;
  lb[e] = c.at(e) | A.bits();
  PUFunc a(c.algebra(), c.group(), la);
  PUFunc b(c.algebra(), c.group(), lb);
  if (!gamma_contains(A, a)) throw VerificationError("Γ-decomposition: first factor not in Γ(A)");
  if (!gamma_contains(B, b)) throw VerificationError("Γ-decomposition: second factor not in Γ(B)");
  if (!(pu_multiply(a, b) == c)) throw VerificationError("Γ-decomposition: ab ≠ c");
  return {a, b};
}

// ---------------------------------------------------------------------------
// π_# for a homomorphism π: G → S(φ,H) given on finitely many elements

class PuHomTable {
 public:
  PuHomTable(GroupPtr source, AlgebraPtr alg, GroupPtr target, std::map<GroupElement, PUFunc> table)
      : source_(std::move(source)),
        algebra_(std::move(alg)),
        target_(std::move(target)),
        table_(std::move(table)),
        state_(std::make_shared<State>()) {
    for (const auto& [g, img] : table_) {
      source_->require(g);
      require_same_algebra(img.algebra(), algebra_, "π table");
      if (!same_group(img.group(), target_)) throw InputError("π table: image in the wrong group");
    }
  }

  template <class Fn>
  static PuHomTable from_function(GroupPtr source, AlgebraPtr alg, GroupPtr target,
                                  const std::set<GroupElement>& domain, Fn&& fn) {
    std::map<GroupElement, PUFunc> table;
    for (const auto& g : domain) table.emplace(g, fn(g));
    return PuHomTable(std::move(source), std::move(alg), std::move(target), std::move(table));
  }

  const GroupPtr& source() const { return source_; }
  const GroupPtr& target() const { return target_; }
  const AlgebraPtr& algebra() const { return algebra_; }
  bool defined_at(const GroupElement& g) const { return table_.count(g) > 0; }

  const PUFunc& operator()(const GroupElement& g) const {
    auto it = table_.find(g);
    if (it == table_.end()) throw InputError("π is not given at " + source_->format(g));
    return it->second;
  }

  /// Checks π(xy) = π(x)π(y) for every pair from `elems` whose product lies
  /// in the table, and π(e) = e when tabulated. Verdicts are memoized.
  void require_homomorphic_on(const std::set<GroupElement>& elems) const {
    const GroupElement e = source_->identity();
    if (defined_at(e) && !((*this)(e) == pu_identity(algebra_, target_))) {
      throw PreconditionError("π(e) is not the identity");
    }
    for (const auto& x : elems) {
      for (const auto& y : elems) {
        GroupElement xy = source_->mul(x, y);
        if (!defined_at(x) || !defined_at(y) || !defined_at(xy)) continue;
        {
          std::lock_guard lock(state_->mu);
          if (state_->checked.count({x, y})) continue;
        }
        if (!(pu_multiply((*this)(x), (*this)(y)) == (*this)(xy))) {
          throw PreconditionError("π is not a homomorphism at (" + source_->format(x) + ", " +
                                  source_->format(y) + ")");
        }
        std::lock_guard lock(state_->mu);
        state_->checked.insert({x, y});
      }
    }
  }

 private:
  struct State {
    std::mutex mu;
    std::set<std::pair<GroupElement, GroupElement>> checked;
  };
  GroupPtr source_;
  AlgebraPtr algebra_;
  GroupPtr target_;
  std::map<GroupElement, PUFunc> table_;
  std::shared_ptr<State> state_;
};

/// π_#(a)(h) = ⋁_g a(g) ∧ π(g)(h).
inline PUFunc pi_sharp(const PuHomTable& pi, const PUFunc& a) {
  require_same_algebra(pi.algebra(), a.algebra(), "pi_sharp");
  if (!same_group(pi.source(), a.group())) throw InputError("pi_sharp: a is labeled in the wrong group");
  for (const auto& [g, m] : a.labels()) {
    if (!pi.defined_at(g)) throw InputError("pi_sharp: π is not given at label " + a.group()->format(g));
  }
  pi.require_homomorphic_on(a.support_labels());
  LabelMap out;
  for (const auto& [g, m] : a.labels()) {
    for (const auto& [h, img] : pi(g).labels()) {
      Mask x = m & img;
      if (x) out[h] |= x;
    }
  }
  return {a.algebra(), pi.target(), out};
}

struct PiSharpCheck {
  bool homomorphic = true;  // π_#(ab) = π_#(a)π_#(b)
  bool extends = true;      // π(g) = π_#(η(g)) on the labels used
  bool lipschitz = true;    // d_φ(π_#a, π_#b) <= d_φ(a, b)
  Rational d_source;
  Rational d_target;
};

inline PiSharpCheck check_pi_sharp(const SetFunc& phi, const PuHomTable& pi, const PUFunc& a,
                                   const PUFunc& b) {
  PiSharpCheck r;
  PUFunc pa = pi_sharp(pi, a), pb = pi_sharp(pi, b);
  r.homomorphic = pi_sharp(pi, pu_multiply(a, b)) == pu_multiply(pa, pb);
  for (const auto* x : {&a, &b}) {
    for (const auto& [g, m] : x->labels()) {
      if (!(pi_sharp(pi, eta(a.algebra(), a.group(), g)) == pi(g))) r.extends = false;
    }
  }
  r.d_source = d_phi(phi, a, b);
  r.d_target = d_phi(phi, pa, pb);
  r.lipschitz = r.d_target <= r.d_source;
  return r;
}

// ---------------------------------------------------------------------------
// f_• for maps between label groups

using GroupMap = std::function<GroupElement(const GroupElement&)>;

/// f_•(a)(h) = a[f⁻¹(h)], computed over a's finite support.
inline PUFunc f_bullet(const GroupMap& f, const GroupPtr& target, const PUFunc& a) {
  LabelMap out;
  for (const auto& [g, m] : a.labels()) {
    GroupElement h = f(g);
    target->require(h);
    out[h] |= m;
  }
  return {a.algebra(), target, out};
}

/// f_• for the label group's own length function, landing in (ℚ, +).
inline PUFunc length_bullet(const PUFunc& a, const GroupPtr& rationals = Group::rationals()) {
  const auto& G = a.group();
  return f_bullet([&](const GroupElement& g) { return GroupElement(G->length(g)); }, rationals, a);
}

inline void require_rational_labels(const PUFunc& a, const char* op) {
  if (a.group()->kind() != GroupKind::kRationals) {
    throw InputError(std::string(op) + " needs ℚ-labeled elements");
  }
}

/// a[[r,∞)].
inline Mask upper_set(const PUFunc& a, const Rational& r) {
  Mask m = 0;
  for (const auto& [g, img] : a.labels()) {
    if (g.value >= r) m |= img;
  }
  return m;
}

/// a <= b  ⟺  a[[r,∞)] <= b[[r,∞)] for every r; the upper sets only change
/// at label values, so those thresholds suffice.
inline bool pu_leq(const PUFunc& a, const PUFunc& b) {
  require_rational_labels(a, "pu_leq");
  require_rational_labels(b, "pu_leq");
  require_same_algebra(a.algebra(), b.algebra(), "pu_leq");
  std::set<Rational> thresholds;
  for (const auto& kv : a.labels()) thresholds.insert(kv.first.value);
  for (const auto& kv : b.labels()) thresholds.insert(kv.first.value);
  for (const auto& r : thresholds) {
    if (upper_set(a, r) & ~upper_set(b, r)) return false;
  }
  return true;
}

inline PUFunc pu_add(const PUFunc& a, const PUFunc& b) {
  require_rational_labels(a, "pu_add");
  require_rational_labels(b, "pu_add");
  return pu_multiply(a, b);
}

}  // namespace l0
