#pragma once

// How far a submeasure is from dominating a measure: the maximal dominated
// mass M(φ) with primal/dual certificates, the ratio κ = M(φ)/φ(1), greedy
// (Kelley) measures for submodular φ, covering witnesses, and generators
// for benchmark families.

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "l0/algebra.hpp"
#include "l0/lp.hpp"
#include "l0/submeasure.hpp"

namespace l0 {

inline constexpr int kMaxLpAtoms = 12;

struct DualWeight {
  Mask set;
  Rational weight;
};

struct DominationCertificate {
  Rational value;                  // M(φ)
  std::vector<Rational> primal;    // μ*, one weight per atom
  std::vector<DualWeight> dual;    // fractional cover y_A > 0
  Rational dual_cost;              // Σ y_A φ(A)
  std::size_t pivots = 0;
};

/// Replays μ* <= φ on every element, dual coverage of each atom, and
/// μ*(1) = M = dual cost. Returns the first failure, empty if sound.
inline std::string verify_certificate(const SetFunc& phi, const DominationCertificate& c) {
  const auto& alg = phi.algebra();
  const int n = alg->size();
  if (c.primal.size() != static_cast<std::size_t>(n)) return "primal has wrong length";
  MeasureRepr mu{c.primal};
  for (const auto& w : c.primal) {
    if (sgn(w) < 0) return "negative primal weight";
  }
  const auto& v = phi.values();
  for (Mask a = 0; a < v.size(); ++a) {
    if (measure_of(mu, a) > v[a]) {
      return "μ*(" + Elem(alg, a).to_string() + ") exceeds φ";
    }
  }
  std::vector<Rational> coverage(static_cast<std::size_t>(n), 0);
  Rational cost = 0;
  for (const auto& d : c.dual) {
    if (sgn(d.weight) < 0) return "negative dual weight";
    if (!alg->contains(d.set) || d.set == 0) return "dual weight on an invalid set";
    cost += d.weight * v[d.set];
    for (int i = 0; i < n; ++i) {
      if ((d.set >> i) & 1U) coverage[static_cast<std::size_t>(i)] += d.weight;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (coverage[static_cast<std::size_t>(i)] < 1) return "dual covers atom " + alg->atom(i) + " by less than 1";
  }
  if (measure_of(mu, alg->top()) != c.value) return "μ*(1) differs from M";
  if (cost != c.dual_cost) return "stated dual cost is wrong";
  if (cost != c.value) return "duality gap: " + to_string(cost - c.value);
  return {};
}

inline void require_lp_size(const SetFunc& phi, const char* op) {
  if (phi.algebra()->size() > kMaxLpAtoms) {
    throw CapacityError(std::string(op) + " materializes every constraint and is capped at " +
                        std::to_string(kMaxLpAtoms) + " atoms");
  }
}

/// max Σ_a x_a  s.t.  Σ_{a∈A} x_a <= φ(A) for every A ≠ 0, x >= 0.
inline DominationCertificate max_dominated_measure(const SetFunc& phi) {
  require_lp_size(phi, "max_dominated_measure");
  require_submeasure(phi, "max_dominated_measure");
  const auto& alg = phi.algebra();
  const int n = alg->size();
  const auto& v = phi.values();

  RationalLP lp;
  lp.objective.assign(static_cast<std::size_t>(n), 1);
  std::vector<Mask> row_set;
  for (Mask a = 1; a < v.size(); ++a) {
    std::vector<Rational> row(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      if ((a >> i) & 1U) row[static_cast<std::size_t>(i)] = 1;
    }
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(v[a]);
    row_set.push_back(a);
  }
  LPSolution sol = solve_lp(lp);

  DominationCertificate cert;
  cert.value = sol.value;
  cert.primal = sol.primal;
  cert.pivots = sol.pivots;
  cert.dual_cost = 0;
  for (std::size_t i = 0; i < sol.dual.size(); ++i) {
    if (sgn(sol.dual[i]) > 0) {
      cert.dual.push_back({row_set[i], sol.dual[i]});
      cert.dual_cost += sol.dual[i] * v[row_set[i]];
    }
  }
  if (auto err = verify_certificate(phi, cert); !err.empty()) {
    throw VerificationError("domination certificate failed replay: " + err);
  }
  return cert;
}

inline Rational kappa(const SetFunc& phi, const DominationCertificate& cert) {
  Rational top = phi.top_value();
  if (sgn(top) == 0) throw PreconditionError("κ is undefined when φ(1) = 0");
  return cert.value / top;
}

inline Rational kappa(const SetFunc& phi) {
  if (sgn(phi.top_value()) == 0) throw PreconditionError("κ is undefined when φ(1) = 0");
  return kappa(phi, max_dominated_measure(phi));
}

// ---------------------------------------------------------------------------
// Greedy measures for submodular functions

struct KelleyMeasure {
  std::vector<int> order;
  std::vector<Rational> weights;  // ν({a}) per atom index
};

inline std::vector<int> identity_order(int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  return order;
}

/// ν(a_i) = φ({a_1..a_i}) − φ({a_1..a_{i−1}}) along `order`; verifies ν <= φ
/// on every element and ν(1) = φ(1) before returning.
inline KelleyMeasure kelley_greedy(const SetFunc& phi, const std::vector<int>& order) {
  require_lp_size(phi, "kelley_greedy");
  const auto& alg = phi.algebra();
  const int n = alg->size();
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != identity_order(n)) throw InputError("order must be a permutation of the atoms");
  require_monotone(phi, "kelley_greedy");
  if (auto v = find_submodularity_violation(phi)) {
    throw PreconditionError("kelley_greedy needs a submodular set function; A=" +
                            Elem(alg, v->a).to_string() + ", B=" + Elem(alg, v->b).to_string() +
                            ": φ(A∨B)+φ(A∧B) = " + to_string(v->lhs) +
                            " > φ(A)+φ(B) = " + to_string(v->rhs));
  }
  const auto& v = phi.values();
  KelleyMeasure k{order, std::vector<Rational>(static_cast<std::size_t>(n), 0)};
  Mask prefix = 0;
  for (int a : order) {
    Mask next = prefix | (Mask{1} << a);
    k.weights[static_cast<std::size_t>(a)] = v[next] - v[prefix];
    prefix = next;
  }
  MeasureRepr nu{k.weights};
  for (Mask a = 0; a < v.size(); ++a) {
    if (measure_of(nu, a) > v[a]) {
      throw VerificationError("greedy measure exceeds φ at " + Elem(alg, a).to_string());
    }
  }
  if (measure_of(nu, alg->top()) != v[alg->top()]) {
    throw VerificationError("greedy measure misses φ(1)");
  }
  return k;
}

// ---------------------------------------------------------------------------
// Covering witnesses

struct ChristensenWitness {
  Rational epsilon;
  Integer m;
  std::vector<std::pair<Mask, Integer>> sets;  // C_i with multiplicities, Σ = m
  std::vector<Mask> partition;                 // the atom partition
  Integer min_coverage;
  Rational lp_value;                           // t*
};

/// Replays sup φ(C_i) <= ε and |{i : Q <= C_i}| >= (1−ε)m for every cell.
inline std::string verify_witness(const SetFunc& phi, const ChristensenWitness& w) {
  const auto& alg = phi.algebra();
  Integer total = 0;
  for (const auto& [set, mult] : w.sets) {
    if (sgn(mult) <= 0) return "nonpositive multiplicity";
    if (!alg->contains(set)) return "witness set outside algebra";
    if (phi.eval(set) > w.epsilon) return "φ(" + Elem(alg, set).to_string() + ") > ε";
    total += mult;
  }
  if (total != w.m) return "multiplicities do not sum to m";
  std::vector<Elem> cells;
  for (Mask q : w.partition) cells.emplace_back(alg, q);
  if (!is_partition_of_unity(alg, cells)) return "witness partition is not a partition of unity";
  Integer least = -1;
  for (Mask q : w.partition) {
    Integer count = 0;
    for (const auto& [set, mult] : w.sets) {
      if ((q & ~set) == 0) count += mult;
    }
    if (least < 0 || count < least) least = count;
    if (Rational(count) < (1 - w.epsilon) * Rational(w.m)) {
      return "cell " + Elem(alg, q).to_string() + " covered fewer than (1-ε)m times";
    }
  }
  if (least != w.min_coverage) return "stated min_coverage is wrong";
  return {};
}

/// Searches for a covering witness at tolerance ε ∈ (0,1) over the atom
/// partition by maximizing the worst atom coverage of a distribution on
/// 𝒞_ε = {A ≠ 0 : φ(A) <= ε}.
inline std::optional<ChristensenWitness> christensen_witness(const SetFunc& phi,
                                                             const Rational& epsilon) {
  if (sgn(epsilon) <= 0 || epsilon >= 1) throw InputError("ε must lie in (0,1)");
  require_lp_size(phi, "christensen_witness");
  require_submeasure(phi, "christensen_witness");
  const auto& alg = phi.algebra();
  const int n = alg->size();
  const auto& v = phi.values();

  std::vector<Mask> small;
  for (Mask a = 1; a < v.size(); ++a) {
    if (v[a] <= epsilon) small.push_back(a);
  }
  if (small.empty()) return std::nullopt;

  // variables: y_A for A in small, then t.
  // rows: t − Σ_{A∋a} y_A <= 0 per atom;  Σ y_A <= 1.
  const std::size_t k = small.size();
  RationalLP lp;
  lp.objective.assign(k + 1, 0);
  lp.objective[k] = 1;
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> row(k + 1, 0);
    for (std::size_t j = 0; j < k; ++j) {
      if ((small[j] >> i) & 1U) row[j] = -1;
    }
    row[k] = 1;
    lp.rows.push_back(std::move(row));
    lp.rhs.emplace_back(0);
  }
  std::vector<Rational> total(k + 1, 1);
  total[k] = 0;
  lp.rows.push_back(std::move(total));
  lp.rhs.emplace_back(1);

  LPSolution sol = solve_lp(lp);
  if (auto err = check_lp_certificate(lp, sol); !err.empty()) {
    throw VerificationError("witness LP failed replay: " + err);
  }
  const Rational t = sol.value;
  if (t < 1 - epsilon || sgn(t) == 0) return std::nullopt;

  Rational mass = 0;
  for (std::size_t j = 0; j < k; ++j) mass += sol.primal[j];
  Integer denom = 1;
  for (std::size_t j = 0; j < k; ++j) {
    if (sgn(sol.primal[j]) == 0) continue;
    Rational y = sol.primal[j] / mass;
    mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), y.get_den_mpz_t());
  }

  ChristensenWitness w;
  w.epsilon = epsilon;
  w.lp_value = t;
  w.m = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (sgn(sol.primal[j]) == 0) continue;
    Rational scaled = sol.primal[j] / mass * Rational(denom);
    Integer mult = scaled.get_num();
    w.sets.emplace_back(small[j], mult);
    w.m += mult;
  }
  for (int i = 0; i < n; ++i) w.partition.push_back(Mask{1} << i);
  w.min_coverage = -1;
  for (Mask q : w.partition) {
    Integer count = 0;
    for (const auto& [set, mult] : w.sets) {
      if ((q & ~set) == 0) count += mult;
    }
    if (w.min_coverage < 0 || count < w.min_coverage) w.min_coverage = count;
  }
  if (auto err = verify_witness(phi, w); !err.empty()) {
    throw VerificationError("covering witness failed replay: " + err);
  }
  return w;
}

struct MassBound {
  Rational mass;   // M(φ)
  Rational bound;  // ε/(1−ε)
};

/// Averaging over the witness: any μ <= φ has (1−ε)·m·μ(1) <= Σ μ(C_i) <= m·ε.
inline MassBound witness_mass_bound(const SetFunc& phi, const ChristensenWitness& w) {
  if (auto err = verify_witness(phi, w); !err.empty()) {
    throw PreconditionError("witness invalid: " + err);
  }
  if (w.epsilon >= 1) throw PreconditionError("mass bound needs ε < 1");
  MassBound b{max_dominated_measure(phi).value, w.epsilon / (1 - w.epsilon)};
  if (b.mass > b.bound) {
    throw VerificationError("M(φ) = " + to_string(b.mass) + " exceeds ε/(1−ε) = " +
                            to_string(b.bound));
  }
  return b;
}

// ---------------------------------------------------------------------------
// Generators

inline AlgebraPtr numbered_algebra(int n) {
  if (n < 1 || n > kMaxAtoms) {
    throw CapacityError("atom count must be in [1, " + std::to_string(kMaxAtoms) + "]");
  }
  std::vector<std::string> atoms;
  for (int i = 0; i < n; ++i) atoms.push_back(std::to_string(i));
  return FiniteAlgebra::make(std::move(atoms));
}

/// Cover by the n co-singletons X∖{i}.
inline SetFunc generate_copoints(int n) {
  if (n < 2) throw InputError("copoints needs at least 2 atoms");
  auto alg = numbered_algebra(n);
  std::vector<Mask> family;
  for (int i = 0; i < n; ++i) family.push_back(alg->top() & ~(Mask{1} << i));
  return SetFunc::cover(alg, family);
}

/// Cover by all ℓ-element subsets.
inline SetFunc generate_ell_subsets_cover(int n, int ell) {
  if (ell < 1 || ell > n) throw InputError("ℓ must lie in [1, N]");
  auto alg = numbered_algebra(n);
  if (binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(ell)) >
      static_cast<unsigned long>(kMaxCoverFamily)) {
    throw CapacityError("C(N, ℓ) exceeds the family cap of " + std::to_string(kMaxCoverFamily));
  }
  std::vector<Mask> family;
  for (Mask m = 0; m <= alg->top(); ++m) {
    if (std::popcount(m) == ell) family.push_back(m);
  }
  return SetFunc::cover(alg, family);
}

/// m random sets, each atom included with probability `density`; atoms no
/// set covers are added to set (atom mod m). Deterministic for a seed.
inline SetFunc generate_random_cover(int n, int m, const Rational& density, Seed seed) {
  if (m < 1 || static_cast<std::size_t>(m) > kMaxCoverFamily) {
    throw CapacityError("family size must be in [1, " + std::to_string(kMaxCoverFamily) + "]");
  }
  if (sgn(density) < 0 || density > 1) throw InputError("density must lie in [0,1]");
  auto alg = numbered_algebra(n);
  std::mt19937_64 rng(seed);
  const unsigned long num = density.get_num().get_ui();
  const unsigned long den = density.get_den().get_ui();
  std::vector<Mask> family(static_cast<std::size_t>(m), 0);
  for (auto& s : family) {
    for (int i = 0; i < n; ++i) {
      if (rng() % den < num) s |= Mask{1} << i;
    }
  }
  Mask all = 0;
  for (Mask s : family) all |= s;
  for (int i = 0; i < n; ++i) {
    if (!((all >> i) & 1U)) family[static_cast<std::size_t>(i % m)] |= Mask{1} << i;
  }
  return SetFunc::cover(alg, family);
}

/// φ(A) = f(|A|) for breakpoints f(0..N); f must start at 0, be
/// nondecreasing and concave so that φ is a submodular submeasure.
inline SetFunc generate_concave_cardinality(int n, const std::vector<Rational>& f) {
  if (f.size() != static_cast<std::size_t>(n) + 1) throw InputError("need N+1 breakpoints");
  if (f[0] != 0) throw InputError("f(0) must be 0");
  for (int k = 1; k <= n; ++k) {
    if (f[static_cast<std::size_t>(k)] < f[static_cast<std::size_t>(k - 1)]) {
      throw InputError("breakpoints must be nondecreasing");
    }
    if (k >= 2 && f[static_cast<std::size_t>(k)] - f[static_cast<std::size_t>(k - 1)] >
                      f[static_cast<std::size_t>(k - 1)] - f[static_cast<std::size_t>(k - 2)]) {
      throw InputError("breakpoints must be concave");
    }
  }
  auto alg = numbered_algebra(n);
  return SetFunc::from_function(alg, [&](Mask a) { return f[static_cast<std::size_t>(std::popcount(a))]; });
}

}  // namespace l0
