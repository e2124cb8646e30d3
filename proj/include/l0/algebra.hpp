#pragma once

// Finite powerset Boolean algebras, their elements, partitions of unity,
// two-valued homomorphisms, atom-generated ideals and join-preserving maps.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "l0/error.hpp"

namespace l0 {

using Mask = std::uint32_t;
using Seed = std::uint64_t;

inline constexpr int kMaxAtoms = 16;
inline constexpr int kMaxPartitionAtoms = 10;
inline constexpr int kMaxExhaustivePairAtoms = 8;
inline constexpr int kSampledPairs = 20000;

class FiniteAlgebra;
using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

class FiniteAlgebra {
 public:
  static AlgebraPtr make(std::vector<std::string> atoms) {
    if (atoms.empty()) throw InputError("an algebra needs at least one atom");
    if (atoms.size() > static_cast<std::size_t>(kMaxAtoms)) {
      throw CapacityError("algebra has " + std::to_string(atoms.size()) +
                          " atoms; the maximum is " + std::to_string(kMaxAtoms));
    }
    std::set<std::string> seen;
    for (const auto& a : atoms) {
      if (a.empty()) throw InputError("atom names must be nonempty");
      if (!seen.insert(a).second) throw InputError("duplicate atom name '" + a + "'");
    }
    return AlgebraPtr(new FiniteAlgebra(std::move(atoms)));
  }

  int size() const { return static_cast<int>(atoms_.size()); }
  std::size_t element_count() const { return std::size_t{1} << atoms_.size(); }
  Mask top() const { return static_cast<Mask>(element_count() - 1); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::string& atom(int i) const { return atoms_.at(static_cast<std::size_t>(i)); }

  int atom_index(const std::string& name) const {
    auto it = std::find(atoms_.begin(), atoms_.end(), name);
    if (it == atoms_.end()) throw InputError("unknown atom '" + name + "'");
    return static_cast<int>(it - atoms_.begin());
  }

  bool contains(Mask m) const { return (m & ~top()) == 0; }

 private:
  explicit FiniteAlgebra(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {}
  std::vector<std::string> atoms_;
};

inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  return a == b || (a && b && a->atoms() == b->atoms());
}

inline void require_same_algebra(const AlgebraPtr& a, const AlgebraPtr& b,
                                 const char* what = "operation") {
  if (!same_algebra(a, b)) {
    throw InputError(std::string(what) + ": elements belong to different algebras");
  }
}

/// An element of a finite powerset algebra, encoded as an atom-subset mask.
class Elem {
 public:
  Elem() = default;
  Elem(AlgebraPtr algebra, Mask bits) : algebra_(std::move(algebra)), bits_(bits) {
    if (!algebra_) throw InputError("element without algebra");
    if (!algebra_->contains(bits_)) throw InputError("mask outside algebra");
  }

  static Elem zero(const AlgebraPtr& alg) { return {alg, 0}; }
  static Elem one(const AlgebraPtr& alg) { return {alg, alg->top()}; }
  static Elem atom(const AlgebraPtr& alg, int i) { return {alg, Mask{1} << i}; }

  static Elem from_names(const AlgebraPtr& alg, const std::vector<std::string>& names) {
    Mask m = 0;
    for (const auto& n : names) m |= Mask{1} << alg->atom_index(n);
    return {alg, m};
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  Mask bits() const { return bits_; }
  bool is_zero() const { return bits_ == 0; }
  bool is_one() const { return bits_ == algebra_->top(); }
  int cardinality() const { return std::popcount(bits_); }
  bool has_atom(int i) const { return (bits_ >> i) & 1U; }

  std::vector<std::string> atom_names() const {
    std::vector<std::string> out;
    for (int i = 0; i < algebra_->size(); ++i) {
      if (has_atom(i)) out.push_back(algebra_->atom(i));
    }
    return out;
  }

  /// "{p,q}" style rendering.
  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& n : atom_names()) {
      if (!first) out += ",";
      out += n;
      first = false;
    }
    return out + "}";
  }

  friend bool operator==(const Elem& a, const Elem& b) {
    return a.bits_ == b.bits_ && same_algebra(a.algebra_, b.algebra_);
  }
  friend bool operator<(const Elem& a, const Elem& b) { return a.bits_ < b.bits_; }

 private:
  AlgebraPtr algebra_;
  Mask bits_ = 0;
};

inline Elem meet(const Elem& a, const Elem& b) {
  require_same_algebra(a.algebra(), b.algebra(), "meet");
  return {a.algebra(), a.bits() & b.bits()};
}
inline Elem join(const Elem& a, const Elem& b) {
  require_same_algebra(a.algebra(), b.algebra(), "join");
  return {a.algebra(), a.bits() | b.bits()};
}
inline Elem complement(const Elem& a) { return {a.algebra(), a.algebra()->top() & ~a.bits()}; }
inline Elem symm_diff(const Elem& a, const Elem& b) {
  require_same_algebra(a.algebra(), b.algebra(), "symm_diff");
  return {a.algebra(), a.bits() ^ b.bits()};
}
inline bool leq(const Elem& a, const Elem& b) {
  require_same_algebra(a.algebra(), b.algebra(), "leq");
  return (a.bits() & ~b.bits()) == 0;
}

inline Elem operator&(const Elem& a, const Elem& b) { return meet(a, b); }
inline Elem operator|(const Elem& a, const Elem& b) { return join(a, b); }
inline Elem operator^(const Elem& a, const Elem& b) { return symm_diff(a, b); }
inline Elem operator~(const Elem& a) { return complement(a); }

// ---------------------------------------------------------------------------
// Partitions of unity

struct PartitionReport {
  bool ok = true;
  std::string clause;  // "nonzero", "disjoint", "join" or "algebra"
  std::string message;
  std::optional<std::pair<Elem, Elem>> witness;
};

/// Checks the three partition-of-unity clauses in order: every cell nonzero,
/// cells pairwise disjoint, join equal to 1. Reports the first violation.
inline PartitionReport check_partition_of_unity(const AlgebraPtr& alg,
                                                const std::vector<Elem>& cells) {
  PartitionReport r;
  for (const auto& c : cells) {
    if (!same_algebra(c.algebra(), alg)) {
      r.ok = false;
      r.clause = "algebra";
      r.message = "cell from a different algebra";
      return r;
    }
    if (c.is_zero()) {
      r.ok = false;
      r.clause = "nonzero";
      r.message = "cell is 0";
      r.witness = std::make_pair(c, c);
      return r;
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      if ((cells[i].bits() & cells[j].bits()) != 0) {
        r.ok = false;
        r.clause = "disjoint";
        r.message = "cells " + cells[i].to_string() + " and " + cells[j].to_string() +
                    " are not disjoint";
        r.witness = std::make_pair(cells[i], cells[j]);
        return r;
      }
    }
  }
  Mask all = 0;
  for (const auto& c : cells) all |= c.bits();
  if (all != alg->top()) {
    r.ok = false;
    r.clause = "join";
    r.message = "join of cells is " + Elem(alg, all).to_string() + ", not 1";
  }
  return r;
}

inline bool is_partition_of_unity(const AlgebraPtr& alg, const std::vector<Elem>& cells) {
  return check_partition_of_unity(alg, cells).ok;
}

class PartitionOfUnity {
 public:
  PartitionOfUnity(AlgebraPtr alg, std::vector<Elem> cells) : algebra_(std::move(alg)) {
    auto report = check_partition_of_unity(algebra_, cells);
    if (!report.ok) throw InputError("not a partition of unity: " + report.message);
    std::sort(cells.begin(), cells.end());
    cells_ = std::move(cells);
  }

  static PartitionOfUnity trivial(const AlgebraPtr& alg) {
    return {alg, {Elem::one(alg)}};
  }
  static PartitionOfUnity atoms(const AlgebraPtr& alg) {
    std::vector<Elem> cells;
    for (int i = 0; i < alg->size(); ++i) cells.push_back(Elem::atom(alg, i));
    return {alg, std::move(cells)};
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<Elem>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  friend bool operator==(const PartitionOfUnity& a, const PartitionOfUnity& b) {
    return same_algebra(a.algebra_, b.algebra_) && a.cells_ == b.cells_;
  }

 private:
  AlgebraPtr algebra_;
  std::vector<Elem> cells_;  // sorted by mask
};

/// Q ⪯ Q′: every cell of `finer` lies below some cell of `coarser`, i.e.
/// `finer` refines `coarser`.
inline bool is_refined_by(const PartitionOfUnity& coarser, const PartitionOfUnity& finer) {
  require_same_algebra(coarser.algebra(), finer.algebra(), "is_refined_by");
  return std::all_of(finer.cells().begin(), finer.cells().end(), [&](const Elem& f) {
    return std::any_of(coarser.cells().begin(), coarser.cells().end(),
                       [&](const Elem& c) { return leq(f, c); });
  });
}

inline PartitionOfUnity common_refinement(const PartitionOfUnity& q, const PartitionOfUnity& r) {
  require_same_algebra(q.algebra(), r.algebra(), "common_refinement");
  std::vector<Elem> cells;
  for (const auto& a : q.cells()) {
    for (const auto& b : r.cells()) {
      Elem m = meet(a, b);
      if (!m.is_zero()) cells.push_back(m);
    }
  }
  return {q.algebra(), std::move(cells)};
}

/// Visits every partition of unity exactly once (restricted growth strings
/// over the atoms). Returns the number visited, which is the Bell number.
inline std::size_t for_each_partition(const AlgebraPtr& alg,
                                      const std::function<void(const PartitionOfUnity&)>& visit) {
  const int n = alg->size();
  if (n > kMaxPartitionAtoms) {
    throw CapacityError("partition enumeration is capped at " +
                        std::to_string(kMaxPartitionAtoms) + " atoms (got " +
                        std::to_string(n) + ")");
  }
  std::vector<int> block(static_cast<std::size_t>(n), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
  std::size_t count = 0;
  while (true) {
    int blocks = 1 + *std::max_element(block.begin(), block.end());
    std::vector<Mask> masks(static_cast<std::size_t>(blocks), 0);
    for (int i = 0; i < n; ++i) masks[static_cast<std::size_t>(block[i])] |= Mask{1} << i;
    std::vector<Elem> cells;
    cells.reserve(masks.size());
    for (Mask m : masks) cells.emplace_back(alg, m);
    visit(PartitionOfUnity(alg, std::move(cells)));
    ++count;

    // next restricted growth string: block[0] = 0, block[i] <= 1 + max(block[0..i-1])
    int i = n - 1;
    while (i > 0 && block[static_cast<std::size_t>(i)] > prefix_max[static_cast<std::size_t>(i - 1)]) --i;
    if (i <= 0) break;
    ++block[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)], block[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      block[static_cast<std::size_t>(j)] = 0;
      prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(i)];
    }
  }
  return count;
}

inline std::vector<PartitionOfUnity> enumerate_partitions(const AlgebraPtr& alg) {
  std::vector<PartitionOfUnity> out;
  for_each_partition(alg, [&](const PartitionOfUnity& p) { out.push_back(p); });
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphisms

/// The principal ultrafilter at an atom, as a homomorphism into {0,1}.
class TwoValuedHom {
 public:
  TwoValuedHom(AlgebraPtr alg, int atom) : algebra_(std::move(alg)), atom_(atom) {
    if (atom < 0 || atom >= algebra_->size()) throw InputError("atom index out of range");
  }
  int atom() const { return atom_; }
  const AlgebraPtr& algebra() const { return algebra_; }
  int operator()(const Elem& a) const {
    require_same_algebra(a.algebra(), algebra_, "two-valued hom");
    return a.has_atom(atom_) ? 1 : 0;
  }

 private:
  AlgebraPtr algebra_;
  int atom_;
};

/// Visits pairs of masks: all pairs when the algebra is small enough,
/// otherwise `kSampledPairs` seeded random pairs. Returns true if exhaustive.
inline bool for_each_pair(const AlgebraPtr& alg, std::optional<Seed> seed,
                          const std::function<bool(Mask, Mask)>& visit) {
  if (alg->size() <= kMaxExhaustivePairAtoms) {
    const Mask count = static_cast<Mask>(alg->element_count());
    for (Mask a = 0; a < count; ++a) {
      for (Mask b = 0; b < count; ++b) {
        if (!visit(a, b)) return true;
      }
    }
    return true;
  }
  if (!seed) {
    throw InputError("algebra with " + std::to_string(alg->size()) +
                     " atoms needs sampled checks; an explicit seed is required");
  }
  std::mt19937_64 rng(*seed);
  for (int i = 0; i < kSampledPairs; ++i) {
    Mask a = static_cast<Mask>(rng()) & alg->top();
    Mask b = static_cast<Mask>(rng()) & alg->top();
    if (!visit(a, b)) break;
  }
  return false;
}

/// A map between algebras preserving 0 and binary joins, stored as a full
/// table because it need not preserve meets or complements.
class VeeMonoidHom {
 public:
  VeeMonoidHom(AlgebraPtr source, AlgebraPtr target, std::vector<Mask> table,
               std::optional<Seed> seed = std::nullopt)
      : source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {
    if (table_.size() != source_->element_count()) {
      throw InputError("join-homomorphism table must have one entry per source element");
    }
    for (Mask m : table_) {
      if (!target_->contains(m)) throw InputError("join-homomorphism image outside target algebra");
    }
    if (table_[0] != 0) throw InputError("join-homomorphism must map 0 to 0");
    std::string bad;
    exhaustive_ = for_each_pair(source_, seed, [&](Mask a, Mask b) {
      if (table_[a | b] != (table_[a] | table_[b])) {
        bad = "theta(A v B) != theta(A) v theta(B) for A=" + Elem(source_, a).to_string() +
              ", B=" + Elem(source_, b).to_string();
        return false;
      }
      return true;
    });
    if (!bad.empty()) throw InputError(bad);
  }

  /// θ(A) = ⋁_{a∈A} images[a]; always join-preserving.
  static VeeMonoidHom from_atom_images(AlgebraPtr source, AlgebraPtr target,
                                       const std::vector<Mask>& images) {
    if (images.size() != static_cast<std::size_t>(source->size())) {
      throw InputError("need one image per source atom");
    }
    std::vector<Mask> table(source->element_count(), 0);
    for (Mask m = 1; m < table.size(); ++m) {
      int low = std::countr_zero(m);
      table[m] = table[m & (m - 1)] | images[static_cast<std::size_t>(low)];
    }
    return VeeMonoidHom(std::move(source), std::move(target), std::move(table), Seed{0});
  }

  static VeeMonoidHom identity(const AlgebraPtr& alg) {
    std::vector<Mask> table(alg->element_count());
    for (Mask m = 0; m < table.size(); ++m) table[m] = m;
    return VeeMonoidHom(alg, alg, std::move(table), Seed{0});
  }

  static VeeMonoidHom zero(const AlgebraPtr& source, const AlgebraPtr& target) {
    return VeeMonoidHom(source, target, std::vector<Mask>(source->element_count(), 0), Seed{0});
  }

  const AlgebraPtr& source() const { return source_; }
  const AlgebraPtr& target() const { return target_; }
  const std::vector<Mask>& table() const { return table_; }
  bool exhaustively_checked() const { return exhaustive_; }

  Mask apply(Mask a) const { return table_.at(a); }
  Elem operator()(const Elem& a) const {
    require_same_algebra(a.algebra(), source_, "join-homomorphism");
    return {target_, table_[a.bits()]};
  }

 private:
  AlgebraPtr source_;
  AlgebraPtr target_;
  std::vector<Mask> table_;
  bool exhaustive_ = true;
};

/// An ideal of a finite powerset algebra: all elements below a generator set.
class Ideal {
 public:
  static Ideal generated_by(const AlgebraPtr& alg, const Elem& generator) {
    require_same_algebra(alg, generator.algebra(), "ideal");
    return Ideal(alg, generator.bits());
  }

  /// Validates an explicit member list (contains 0, downward closed, join closed).
  static Ideal from_members(const AlgebraPtr& alg, const std::vector<Elem>& members) {
    std::set<Mask> set;
    for (const auto& m : members) {
      require_same_algebra(alg, m.algebra(), "ideal");
      set.insert(m.bits());
    }
    if (!set.count(0)) throw InputError("ideal must contain 0");
    Mask gen = 0;
    for (Mask a : set) {
      for (Mask b : set) {
        if (!set.count(a | b)) throw InputError("ideal not closed under joins");
      }
      for (Mask sub = a;; sub = (sub - 1) & a) {
        if (!set.count(sub)) throw InputError("ideal not downward closed");
        if (sub == 0) break;
      }
      gen |= a;
    }
    return Ideal(alg, gen);
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  Elem generator() const { return {algebra_, generator_}; }
  bool contains(const Elem& a) const { return (a.bits() & ~generator_) == 0; }

 private:
  Ideal(AlgebraPtr alg, Mask gen) : algebra_(std::move(alg)), generator_(gen) {}
  AlgebraPtr algebra_;
  Mask generator_;
};

struct Quotient {
  AlgebraPtr algebra;
  VeeMonoidHom projection;
};

/// 𝒜/𝒩 for an atom-generated ideal: the surviving atoms span the quotient
/// and the projection forgets the ideal's atoms.
inline Quotient quotient_by_ideal(const AlgebraPtr& alg, const Ideal& ideal) {
  require_same_algebra(alg, ideal.algebra(), "quotient");
  std::vector<std::string> kept;
  std::vector<int> new_index(static_cast<std::size_t>(alg->size()), -1);
  for (int i = 0; i < alg->size(); ++i) {
    if (!ideal.generator().has_atom(i)) {
      new_index[static_cast<std::size_t>(i)] = static_cast<int>(kept.size());
      kept.push_back(alg->atom(i));
    }
  }
  if (kept.empty()) throw InputError("quotient by the whole algebra is degenerate");
  AlgebraPtr q = FiniteAlgebra::make(kept);
  std::vector<Mask> images(static_cast<std::size_t>(alg->size()), 0);
  for (int i = 0; i < alg->size(); ++i) {
    int j = new_index[static_cast<std::size_t>(i)];
    if (j >= 0) images[static_cast<std::size_t>(i)] = Mask{1} << j;
  }
  return {q, VeeMonoidHom::from_atom_images(alg, q, images)};
}

}  // namespace l0
