#pragma once

// Built-in invariant suites. Level 1 runs exhaustive small cases; level 2
// adds seeded volume. Each suite throws on the first violation.

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "l0/escape.hpp"
#include "l0/pathology.hpp"
#include "l0/positive_type.hpp"
#include "l0/pugroup.hpp"
#include "l0/random.hpp"
#include "l0/set_cover.hpp"
#include "l0/submeasure.hpp"

namespace l0 {

struct SelfTestSuite {
  std::string name;
  std::function<void(int level, Rng& rng)> run;
};

namespace selftest {

inline void check(bool ok, const std::string& what) {
  if (!ok) throw AssertionFailure(what);
}

inline AlgebraPtr pq() { return FiniteAlgebra::make({"p", "q"}); }
inline AlgebraPtr pqr() { return FiniteAlgebra::make({"p", "q", "r"}); }

inline SetFunc card(const AlgebraPtr& alg, const Rational& c) {
  return SetFunc::measure(alg, std::vector<Rational>(static_cast<std::size_t>(alg->size()), c));
}

inline SetFunc min_card(int n, int cap) {
  std::vector<Rational> f;
  for (int k = 0; k <= n; ++k) f.emplace_back(std::min(k, cap));
  return generate_concave_cardinality(n, f);
}

/// ℤ-window elements {-w..w}.
inline std::vector<GroupElement> window(long w) {
  std::vector<GroupElement> out;
  for (long k = -w; k <= w; ++k) out.emplace_back(k);
  return out;
}

inline void group_laws(const std::vector<PUFunc>& xs, const std::vector<PUFunc>& ys, const std::vector<PUFunc>& zs) {
  const PUFunc id = pu_identity(xs[0].algebra(), xs[0].group());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto &a = xs[i], &b = ys[i], &c = zs[i];
    check(pu_multiply(pu_multiply(a, b), c) == pu_multiply(a, pu_multiply(b, c)), "associativity");
    check(pu_multiply(id, a) == a && pu_multiply(a, id) == a, "identity");
    check(pu_multiply(a, pu_inverse(a)) == id && pu_multiply(pu_inverse(a), a) == id, "inverse");
  }
}

inline std::vector<PUFunc> sample(const AlgebraPtr& alg, const GroupPtr& G, const std::vector<GroupElement>& pool,
                                  Rng& rng, std::size_t count) {
  std::vector<PUFunc> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_pufunc(alg, G, pool, rng));
  return out;
}

inline long bell(int n) {
  std::vector<std::vector<long>> t(static_cast<std::size_t>(n) + 1);
  t[0] = {1};
  for (int i = 1; i <= n; ++i) {
    t[static_cast<std::size_t>(i)].push_back(t[static_cast<std::size_t>(i - 1)].back());
    for (int j = 1; j <= i; ++j) {
      t[static_cast<std::size_t>(i)].push_back(t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] +
                                               t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
    }
  }
  return t[static_cast<std::size_t>(n)][0];
}

}  // namespace selftest

inline std::vector<SelfTestSuite> selftest_suites() {
  using namespace selftest;
  std::vector<SelfTestSuite> s;

  // --- algebra ------------------------------------------------------------
  s.push_back({"algebra.lattice_laws", [](int, Rng&) {
    auto alg = numbered_algebra(4);
    for (Mask a = 0; a < 16; ++a) {
      for (Mask b = 0; b < 16; ++b) {
        Elem A(alg, a), B(alg, b);
        check((A | B) == (B | A) && (A & B) == (B & A), "commutativity");
        check((A | (A & B)) == A && (A & (A | B)) == A, "absorption");
        check(~(A | B) == (~A & ~B) && ~(A & B) == (~A | ~B), "De Morgan");
        for (Mask c = 0; c < 16; ++c) {
          Elem C(alg, c);
          check((A & (B | C)) == ((A & B) | (A & C)), "distributivity");
          check(((A | B) | C) == (A | (B | C)), "associativity");
        }
      }
      check((Elem(alg, a) & ~Elem(alg, a)).is_zero(), "complement");
    }
  }});
  s.push_back({"algebra.bell_numbers", [](int level, Rng&) {
    for (int n = 1; n <= (level >= 2 ? 8 : 6); ++n) {
      check(static_cast<long>(for_each_partition(numbered_algebra(n), [](const PartitionOfUnity&) {})) == bell(n),
            "partition count differs from the Bell number at n=" + std::to_string(n));
    }
  }});
  s.push_back({"algebra.partition_reports", [](int, Rng&) {
    auto alg = pqr();
    auto e = [&](std::vector<std::string> n) { return Elem::from_names(alg, n); };
    check(is_partition_of_unity(alg, {e({"p"}), e({"q"}), e({"r"})}), "atoms");
    auto r = check_partition_of_unity(alg, {e({"p"}), e({"p", "q"})});
    check(!r.ok && r.clause == "disjoint", "disjointness clause");
    check(check_partition_of_unity(alg, {e({"p", "q"})}).clause == "join", "join clause");
    check(!is_partition_of_unity(alg, {}), "empty family");
  }});
  s.push_back({"algebra.refinement_directed", [](int, Rng&) {
    auto alg = numbered_algebra(4);
    auto all = enumerate_partitions(alg);
    for (const auto& q : all) {
      for (const auto& r : all) {
        auto c = common_refinement(q, r);
        check(is_refined_by(q, c) && is_refined_by(r, c), "common refinement is an upper bound");
        for (const auto& u : all) {
          if (is_refined_by(q, u) && is_refined_by(r, u)) check(is_refined_by(c, u), "least upper bound");
        }
      }
    }
  }});
  s.push_back({"algebra.two_valued_homs", [](int, Rng&) {
    auto alg = numbered_algebra(6);
    for (int i = 0; i < 6; ++i) {
      TwoValuedHom chi(alg, i);
      for (Mask a = 0; a < 64; ++a) {
        Elem A(alg, a);
        check(chi(~A) == 1 - chi(A), "χ(¬A) = 1 − χ(A)");
        for (Mask b = 0; b < 64; ++b) check(chi(A & Elem(alg, b)) == chi(A) * chi(Elem(alg, b)), "χ(A∧B)");
      }
    }
  }});
  s.push_back({"algebra.quotient", [](int, Rng&) {
    auto alg = pqr();
    auto q = quotient_by_ideal(alg, Ideal::generated_by(alg, Elem::from_names(alg, {"r"})));
    check(q.algebra->atoms() == std::vector<std::string>{"p", "q"}, "quotient atoms");
    check(q.projection(Elem::from_names(alg, {"p", "r"})) == Elem::from_names(q.algebra, {"p"}), "θ({p,r})");
    auto id = quotient_by_ideal(alg, Ideal::generated_by(alg, Elem::zero(alg)));
    for (Mask a = 0; a < 8; ++a) check(id.projection.apply(a) == a, "trivial ideal");
    bool rejected = false;
    try {
      quotient_by_ideal(alg, Ideal::generated_by(alg, Elem::one(alg)));
    } catch (const InputError&) {
      rejected = true;
    }
    check(rejected, "degenerate quotient");
  }});
  s.push_back({"algebra.vee_hom_validation", [](int, Rng&) {
    auto alg = pq();
    bool rejected = false;
    try {
      VeeMonoidHom(alg, alg, {0, 1, 2, 1});
    } catch (const InputError&) {
      rejected = true;
    }
    check(rejected, "non-join-preserving table accepted");
  }});

  // --- set cover ----------------------------------------------------------
  s.push_back({"cover.matches_dp", [](int level, Rng& rng) {
    const int rounds = level >= 2 ? 200 : 40;
    for (int r = 0; r < rounds; ++r) {
      const int n = static_cast<int>(uniform_long(rng, 2, 7));
      const int m = static_cast<int>(uniform_long(rng, 1, 8));
      std::vector<Mask> fam;
      for (int i = 0; i < m; ++i) fam.push_back(static_cast<Mask>(uniform_long(rng, 0, (1L << n) - 1)));
      const Mask full = (Mask{1} << n) - 1;
      std::vector<int> dp(std::size_t{1} << n, 1 << 20);
      dp[0] = 0;
      for (Mask a = 1; a <= full; ++a) {
        for (Mask f : fam) {
          if (f & a) dp[a] = std::min(dp[a], 1 + dp[a & ~f]);
        }
      }
      for (Mask a = 0; a <= full; ++a) {
        auto c = min_set_cover(fam, a);
        check(c.coverable == (dp[a] < (1 << 20)), "coverability");
        if (c.coverable) check(c.size == dp[a], "minimum cover size");
      }
    }
  }});

  // --- submeasure ---------------------------------------------------------
  s.push_back({"submeasure.copoints3", [](int, Rng&) {
    auto phi = generate_copoints(3);
    check(phi.top_value() == 2, "φ(X) = 2");
    check(phi.eval(0) == 0, "φ(0) = 0");
    auto rep = classify(phi);
    check(rep.monotone && rep.subadditive && !rep.submodular, "copoints3 classification");
  }});
  s.push_back({"submeasure.classify_min2", [](int, Rng&) {
    auto rep = classify(min_card(3, 2));
    check(rep.monotone && rep.subadditive && rep.submodular && !rep.additive, "min(|A|,2)");
    for (const auto& v : rep.counterexamples) check(replays(min_card(3, 2), v), "counterexample replays");
  }});
  s.push_back({"submeasure.classify_measures", [](int, Rng& rng) {
    for (int r = 0; r < 10; ++r) {
      auto alg = numbered_algebra(4);
      std::vector<Rational> w;
      for (int i = 0; i < 4; ++i) w.push_back(random_rational(rng, 3, 2));
      for (auto& x : w) x.canonicalize();
      auto rep = classify(SetFunc::measure(alg, w));
      bool zero_weight = std::any_of(w.begin(), w.end(), [](const Rational& x) { return sgn(x) == 0; });
      check(rep.is_measure() && rep.subadditive && rep.submodular, "measure flags");
      check(rep.strictly_positive == !zero_weight, "strict positivity");
    }
  }});
  s.push_back({"submeasure.materialize_agrees", [](int, Rng& rng) {
    auto alg = numbered_algebra(5);
    std::vector<SetFunc> fs = {generate_copoints(5), random_max_of_measures(alg, rng), min_card(5, 3),
                               SetFunc::pullback(random_max_of_measures(alg, rng), random_vee_hom(alg, alg, rng))};
    for (const auto& f : fs) {
      auto t = f.materialize();
      for (Mask a = 0; a < 32; ++a) check(t.eval(a) == f.eval(a), "materialized value");
    }
  }});
  s.push_back({"submeasure.covers_are_submeasures", [](int level, Rng& rng) {
    for (int r = 0; r < (level >= 2 ? 60 : 15); ++r) {
      auto f = generate_random_cover(static_cast<int>(uniform_long(rng, 2, 6)), static_cast<int>(uniform_long(rng, 1, 6)),
                                     Rational(1, 2), rng());
      check(classify(f).is_submeasure(), "cover function is a submeasure");
    }
  }});
  s.push_back({"submeasure.max_not_additive", [](int, Rng&) {
    auto alg = pq();
    auto f = SetFunc::max_of(alg, {{1, 0}, {0, 1}});
    auto rep = classify(f);
    check(rep.is_submeasure() && !rep.additive, "max of non-proportional measures");
    check(replays(f, *rep.counterexample("additive")), "additivity witness replays");
  }});
  s.push_back({"submeasure.diffuse_two_valued", [](int level, Rng& rng) {
    for (int r = 0; r < (level >= 2 ? 300 : 60); ++r) {
      auto f = random_monotone(numbered_algebra(static_cast<int>(uniform_long(rng, 1, 4))), rng);
      check(diffuseness(f).value == two_valued_domination(f).value, "diffuseness = two-valued domination");
    }
  }});
  s.push_back({"submeasure.diffuse_zero", [](int, Rng& rng) {
    auto alg = numbered_algebra(3);
    check(diffuseness(SetFunc::measure(alg, {0, 0, 0})).value == 0, "zero function");
    for (int r = 0; r < 30; ++r) {
      auto f = random_max_of_measures(alg, rng);
      bool zero = true;
      for (Mask a = 0; a < 8; ++a) zero = zero && f.eval(a) == 0;
      check((diffuseness(f).value == 0) == zero, "diffuseness 0 iff φ ≡ 0");
    }
  }});
  s.push_back({"submeasure.pullback_preserves", [](int level, Rng& rng) {
    for (int r = 0; r < (level >= 2 ? 100 : 20); ++r) {
      auto src = numbered_algebra(static_cast<int>(uniform_long(rng, 1, 4)));
      auto tgt = numbered_algebra(4);
      auto theta = random_vee_hom(src, tgt, rng);
      auto sub = classify(SetFunc::pullback(random_max_of_measures(tgt, rng), theta));
      check(sub.is_submeasure(), "pullback of a submeasure");
      check(classify(SetFunc::pullback(min_card(4, 2), theta)).submodular, "pullback of a submodular function");
    }
  }});
  s.push_back({"submeasure.continuity_modulus", [](int, Rng&) {
    auto alg = pqr();
    auto q = quotient_by_ideal(alg, Ideal::generated_by(alg, Elem::from_names(alg, {"r"})));
    auto m = continuity_modulus(q.projection, card(alg, Rational(1, 3)), card(q.algebra, Rational(1, 2)));
    check(m.at(Rational(1, 3)) == Rational(1, 2), "modulus(1/3) = 1/2");
    auto z = continuity_modulus(VeeMonoidHom::zero(alg, alg), card(alg, 1), card(alg, 1));
    check(z.at(3) == 0, "constant-0 map");
  }});

  // --- pathology ----------------------------------------------------------
  s.push_back({"pathology.copoints3_lp", [](int, Rng&) {
    auto phi = generate_copoints(3);
    auto c = max_dominated_measure(phi);
    check(c.value == Rational(3, 2), "M = 3/2");
    check(kappa(phi) == Rational(3, 4), "κ = 3/4");
    check(verify_certificate(phi, c).empty(), "certificate replays");
  }});
  s.push_back({"pathology.measures_full_mass", [](int, Rng& rng) {
    for (int r = 0; r < 10; ++r) {
      auto alg = numbered_algebra(4);
      std::vector<Rational> w;
      for (int i = 0; i < 4; ++i) w.push_back(Rational(uniform_long(rng, 1, 5), uniform_long(rng, 1, 3)));
      for (auto& x : w) x.canonicalize();
      auto mu = SetFunc::measure(alg, w);
      check(max_dominated_measure(mu).value == mu.top_value(), "M(μ) = μ(1)");
      check(kappa(mu) == 1, "κ(μ) = 1");
    }
  }});
  s.push_back({"pathology.duality_generated", [](int level, Rng& rng) {
    std::vector<SetFunc> fs;
    for (int n = 2; n <= 5; ++n) fs.push_back(generate_copoints(n));
    for (int n = 2; n <= 5; ++n) {
      for (int l = 1; l <= n; ++l) {
        if (binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(l)) <= 24) fs.push_back(generate_ell_subsets_cover(n, l));
      }
    }
    for (int r = 0; r < (level >= 2 ? 50 : 10); ++r) {
      fs.push_back(generate_random_cover(static_cast<int>(uniform_long(rng, 2, 6)), static_cast<int>(uniform_long(rng, 1, 6)),
                                         Rational(1, 2), rng()));
    }
    for (const auto& f : fs) {
      auto c = max_dominated_measure(f);
      check(c.value == c.dual_cost && verify_certificate(f, c).empty(), "strong duality");
      Rational atom_max = 0;
      for (int i = 0; i < f.algebra()->size(); ++i) atom_max = std::max(atom_max, f.eval(Mask{1} << i));
      check(c.value >= atom_max, "M >= max atom value");
    }
  }});
  s.push_back({"pathology.min2_values", [](int, Rng&) {
    auto phi = min_card(3, 2);
    check(max_dominated_measure(phi).value == 2 && kappa(phi) == 1, "M = 2, κ = 1");
  }});
  s.push_back({"pathology.kelley", [](int level, Rng& rng) {
    auto k = kelley_greedy(min_card(3, 2), {0, 1, 2});
    check(k.weights == std::vector<Rational>{1, 1, 0}, "ν = (1,1,0)");
    for (int n = 1; n <= (level >= 2 ? 6 : 5); ++n) {
      for (int cap = 1; cap <= n; ++cap) {
        auto phi = min_card(n, cap);
        auto order = identity_order(n);
        std::shuffle(order.begin(), order.end(), rng);
        auto nu = kelley_greedy(phi, order);
        check(max_dominated_measure(phi).value == phi.top_value(), "M = φ(1) for submodular φ");
        check(MeasureRepr{nu.weights}.weights.size() == static_cast<std::size_t>(n), "ν size");
      }
    }
  }});
  s.push_back({"pathology.kelley_refuses", [](int, Rng&) {
    bool refused = false;
    try {
      kelley_greedy(generate_copoints(3), {0, 1, 2});
    } catch (const PreconditionError&) {
      refused = true;
    }
    check(refused, "non-submodular input refused");
  }});
  s.push_back({"pathology.christensen_copoints", [](int, Rng&) {
    auto phi = generate_copoints(3);
    for (int k = 1; k <= 11; ++k) check(!christensen_witness(phi, Rational(k, 20)), "no witness below 3/5");
  }});
  s.push_back({"pathology.christensen_sound", [](int level, Rng& rng) {
    auto alg = numbered_algebra(4);
    auto zero = SetFunc::measure(alg, {0, 0, 0, 0});
    for (int k = 1; k < 10; ++k) {
      auto w = christensen_witness(zero, Rational(k, 10));
      check(w.has_value(), "φ ≡ 0 admits witnesses");
      auto b = witness_mass_bound(zero, *w);
      check(b.mass <= b.bound, "mass bound");
    }
    check(!christensen_witness(card(alg, Rational(1, 4)), Rational(1, 4)), "|A|/4 at ε = 1/4");
    for (int r = 0; r < (level >= 2 ? 40 : 10); ++r) {
      auto f = generate_random_cover(static_cast<int>(uniform_long(rng, 2, 5)), static_cast<int>(uniform_long(rng, 2, 6)),
                                     Rational(1, 2), rng());
      for (int k = 1; k < 10; ++k) {
        if (auto w = christensen_witness(f, Rational(k, 10))) {
          check(verify_witness(f, *w).empty(), "witness replays");
          witness_mass_bound(f, *w);
        }
      }
    }
  }});
  s.push_back({"pathology.generator_determinism", [](int, Rng&) {
    for (Seed seed : {Seed{1}, Seed{7}, Seed{99}}) {
      auto a = generate_random_cover(4, 6, Rational(1, 2), seed);
      auto b = generate_random_cover(4, 6, Rational(1, 2), seed);
      check(std::get<CoverRepr>(a.repr()).family == std::get<CoverRepr>(b.repr()).family, "same family");
    }
    check(min_card(3, 2).values() == generate_concave_cardinality(3, {0, 1, 2, 2}).values(), "concave table");
  }});

  // --- groups -------------------------------------------------------------
  s.push_back({"pugroup.laws_exhaustive", [](int, Rng&) {
    // n=2 over ℤ₂ has 4 elements; n=4 over ℤ₂ and n=2 over ℤ₄ have 16
    std::vector<std::pair<int, long>> models = {{2, 2}, {4, 2}, {2, 4}};
    for (const auto& [n, k] : models) {
      auto all = all_pufuncs(numbered_algebra(n), Group::cyclic(k));
      long expected = 1;
      for (int i = 0; i < n; ++i) expected *= k;
      check(static_cast<long>(all.size()) == expected, "element count");
      const PUFunc id = pu_identity(all[0].algebra(), all[0].group());
      for (const auto& a : all) {
        check(pu_multiply(a, pu_inverse(a)) == id && pu_multiply(id, a) == a, "inverse and identity");
        for (const auto& b : all) {
          for (const auto& c : all) {
            check(pu_multiply(pu_multiply(a, b), c) == pu_multiply(a, pu_multiply(b, c)), "associativity");
          }
        }
      }
    }
  }});
  s.push_back({"pugroup.laws_seeded", [](int level, Rng& rng) {
    const std::size_t count = level >= 2 ? 1000 : 200;
    auto alg = numbered_algebra(4);
    std::vector<std::pair<GroupPtr, std::vector<GroupElement>>> gs = {
        {Group::cyclic(2), Group::cyclic(2)->elements()},
        {Group::cyclic(4), Group::cyclic(4)->elements()},
        {symmetric_group_3(), symmetric_group_3()->elements()},
        {Group::integers(), window(5)}};
    for (const auto& [G, pool] : gs) {
      group_laws(sample(alg, G, pool, rng, count), sample(alg, G, pool, rng, count), sample(alg, G, pool, rng, count));
    }
  }});
  s.push_back({"pugroup.support_identities", [](int, Rng& rng) {
    auto alg = numbered_algebra(3);
    auto G = Group::cyclic(4);
    auto elems = G->elements();
    for (int r = 0; r < 100; ++r) {
      auto a = random_pufunc(alg, G, elems, rng), b = random_pufunc(alg, G, elems, rng);
      std::set<GroupElement> S, T, ST, Tinv, both;
      for (const auto& g : elems) {
        if (rng() % 2) S.insert(g);
        if (rng() % 2) T.insert(g);
      }
      for (const auto& x : S) {
        for (const auto& y : T) ST.insert(G->mul(x, y));
      }
      for (const auto& y : T) Tinv.insert(G->inv(y));
      for (const auto& g : S) {
        if (T.count(g)) both.insert(g);
      }
      check(support(pu_inverse(a), T) == support(a, Tinv), "a⁻¹[T] = a[T⁻¹]");
      check(leq(support(a, S) & support(b, T), support(pu_multiply(a, b), ST)), "a[S]∧b[T] <= ab[ST]");
      check((support(a, S) & support(a, T)) == support(a, both), "meet preservation");
      check(support(a, std::set<GroupElement>(elems.begin(), elems.end())).is_one(), "a[G] = 1");
    }
  }});
  s.push_back({"pugroup.metric", [](int, Rng& rng) {
    auto alg = numbered_algebra(3);
    auto G = Group::cyclic(4);
    auto phi = generate_copoints(3);
    auto elems = G->elements();
    for (int r = 0; r < 100; ++r) {
      auto a = random_pufunc(alg, G, elems, rng), b = random_pufunc(alg, G, elems, rng),
           c = random_pufunc(alg, G, elems, rng);
      Rational dab = d_phi(phi, a, b);
      check(d_phi(phi, a, a) == 0 && dab == d_phi(phi, b, a), "symmetry");
      check(dab <= d_phi(phi, a, c) + d_phi(phi, c, b), "triangle");
      check(d_phi(phi, pu_multiply(a, c), pu_multiply(b, c)) == dab, "right invariance");
      check(d_phi(phi, pu_multiply(c, a), pu_multiply(c, b)) == dab, "left invariance");
    }
  }});
  s.push_back({"pugroup.embeddings", [](int, Rng& rng) {
    auto alg = numbered_algebra(3);
    auto G = Group::cyclic(4);
    for (const auto& g : G->elements()) {
      for (const auto& h : G->elements()) {
        check(pu_multiply(eta(alg, G, g), eta(alg, G, h)) == eta(alg, G, G->mul(g, h)), "η homomorphism");
      }
    }
    auto Q = PartitionOfUnity::atoms(alg);
    for (int r = 0; r < 50; ++r) {
      std::map<Mask, GroupElement> u, v, uv;
      for (const auto& cell : Q.cells()) {
        u[cell.bits()] = GroupElement(uniform_long(rng, 0, 3));
        v[cell.bits()] = GroupElement(uniform_long(rng, 0, 3));
        uv[cell.bits()] = G->mul(u[cell.bits()], v[cell.bits()]);
      }
      check(pu_multiply(sigma_q(Q, G, u), sigma_q(Q, G, v)) == sigma_q(Q, G, uv), "σ homomorphism");
    }
  }});
  s.push_back({"pugroup.convolution_example", [](int, Rng&) {
    auto alg = pq();
    auto G = Group::cyclic(2);
    PUFunc a(alg, G, {{GroupElement(1), 1}, {GroupElement(0), 2}});
    PUFunc b(alg, G, {{GroupElement(1), 3}});
    check(pu_multiply(a, b) == PUFunc(alg, G, {{GroupElement(0), 1}, {GroupElement(1), 2}}), "ab");
    check(d_phi(card(alg, Rational(1, 2)), a, pu_identity(alg, G)) == Rational(1, 2), "d_φ(a,e)");
  }});
  s.push_back({"pugroup.gamma", [](int, Rng&) {
    for (int n = 2; n <= 3; ++n) {
      auto alg = numbered_algebra(n);
      auto all = all_pufuncs(alg, Group::cyclic(2));
      for (Mask A = 0; A <= alg->top(); ++A) {
        for (Mask B = 0; B <= alg->top(); ++B) {
          for (const auto& c : all) {
            if (!gamma_contains(Elem(alg, A | B), c)) continue;
            auto [a, b] = gamma_decompose(c, Elem(alg, A), Elem(alg, B));
            check(pu_multiply(a, b) == c, "ab = c");
          }
        }
      }
    }
  }});
  s.push_back({"pugroup.pi_sharp", [](int level, Rng& rng) {
    auto alg = numbered_algebra(3);
    auto Z = Group::integers();
    auto Z2 = Group::cyclic(2);
    auto phi = generate_copoints(3);
    auto pool = window(4);
    std::set<GroupElement> dom;
    for (long k = -8; k <= 8; ++k) dom.insert(GroupElement(k));
    auto pi = PuHomTable::from_function(Z, alg, Z2, dom, [&](const GroupElement& g) {
      return eta(alg, Z2, GroupElement(((g.as_long() % 2) + 2) % 2));
    });
    for (int r = 0; r < (level >= 2 ? 200 : 50); ++r) {
      auto a = random_pufunc(alg, Z, pool, rng), b = random_pufunc(alg, Z, pool, rng);
      auto c = check_pi_sharp(phi, pi, a, b);
      check(c.homomorphic && c.extends && c.lipschitz, "π_# properties");
    }
  }});
  s.push_back({"pugroup.lifting", [](int level, Rng& rng) {
    auto alg = numbered_algebra(3);
    auto Q = Group::rationals();
    std::vector<std::pair<GroupPtr, std::vector<GroupElement>>> gs = {
        {Group::cyclic(2), Group::cyclic(2)->elements()}, {Group::cyclic(4), Group::cyclic(4)->elements()},
        {Group::integers(), window(6)}};
    for (const auto& [G, pool] : gs) {
      for (int r = 0; r < (level >= 2 ? 200 : 50); ++r) {
        auto a = random_pufunc(alg, G, pool, rng), b = random_pufunc(alg, G, pool, rng);
        check(length_bullet(pu_inverse(a), Q) == length_bullet(a, Q), "f_•(a⁻¹) = f_•(a)");
        check(pu_leq(length_bullet(pu_multiply(a, b), Q), pu_add(length_bullet(a, Q), length_bullet(b, Q))),
              "f_•(ab) <= f_•(a) + f_•(b)");
      }
    }
  }});
  s.push_back({"pugroup.order", [](int, Rng& rng) {
    auto alg = numbered_algebra(3);
    auto Q = Group::rationals();
    std::vector<GroupElement> pool = {GroupElement(Rational(0)), GroupElement(Rational(1, 2)), GroupElement(Rational(2))};
    for (int r = 0; r < 50; ++r) {
      auto a = random_pufunc(alg, Q, pool, rng);
      check(pu_leq(a, a), "reflexive");
      check(pu_leq(pu_identity(alg, Q), a), "0 <= nonnegative");
    }
  }});

  // --- escape -------------------------------------------------------------
  s.push_back({"escape.one_over_n_integers", [](int, Rng&) {
    auto Z = Group::integers();
    for (long k = 0; k <= 20; ++k) {
      auto U = Neighborhood::ball(Z, k);
      for (long n = 1; n <= 20; ++n) {
        auto closed = one_over_n(U, n).members();
        auto replay = one_over_n(Neighborhood::finite(Z, U.members()), n).members();
        check(closed == replay, "closed form vs definition");
      }
      check(trap(U).members() == std::set<GroupElement>{GroupElement(0)}, "trap = {0}");
    }
  }});
  s.push_back({"escape.trap_finite", [](int, Rng&) {
    auto G = Group::cyclic(6);
    auto all = G->elements();
    auto whole = Neighborhood::finite(G, {all.begin(), all.end()});
    check(trap(whole).members().size() == 6, "trap(G) = G");
    auto U = Neighborhood::finite(G, {GroupElement(0), GroupElement(3), GroupElement(1), GroupElement(5)});
    check(trap(U).members() == std::set<GroupElement>{GroupElement(0), GroupElement(3)}, "trap picks {0,3}");
  }});
  s.push_back({"escape.trap_decompose", [](int, Rng&) {
    for (int n = 2; n <= 3; ++n) {
      auto alg = numbered_algebra(n);
      auto G = Group::cyclic(2);
      auto phi = card(alg, Rational(1, n));
      auto V = Neighborhood::finite(G, {G->identity()});
      for (const auto& a : all_pufuncs(alg, G)) {
        auto f = trap_decompose(phi, a, V, Rational(1, n));
        check(static_cast<int>(f.size()) <= n, "factor count");
      }
    }
  }});
  s.push_back({"escape.integers", [](int, Rng&) {
    auto Z = Group::integers();
    auto v = is_escape_function([](const GroupElement& g) { return Rational(abs(g.value)); }, Neighborhood::ball(Z, 5),
                                {Rational(1, 2), Rational(1)}, 10);
    check(v.escape, "|n| escapes on ℤ");
  }});
  s.push_back({"escape.power_bounded", [](int, Rng&) {
    for (int n = 2; n <= 3; ++n) {
      auto alg = numbered_algebra(n);
      auto phi = card(alg, Rational(1, n));
      auto model = materialize_pu_group(alg, Group::cyclic(2), phi);
      auto V = Neighborhood::finite(model.labels, {model.labels->identity()});
      auto U = model.nbhd(phi, V, Rational(1, n));
      auto v = is_escape_function([&](const GroupElement& g) { return model.group->length(g); }, U, {Rational(1, 10)}, 8);
      check(!v.escape, "d_φ(·,e) is not an escape function");
    }
  }});
  s.push_back({"escape.folner_z6", [](int, Rng&) {
    auto G = Group::cyclic(6);
    for (unsigned F = 1; F < 64; ++F) {
      for (unsigned A = 0; A < 64; ++A) {
        for (long g = 0; g < 6; ++g) {
          std::set<GroupElement> fs, as;
          for (long x = 0; x < 6; ++x) {
            if ((F >> x) & 1U) fs.insert(GroupElement(x));
            if ((A >> x) & 1U) as.insert(GroupElement(x));
          }
          bool disjoint = true;
          for (const auto& x : as) disjoint = disjoint && !as.count(G->mul(GroupElement(g), x));
          if (!disjoint) continue;
          for (long k = 0; k <= 6; ++k) folner_check(*G, fs, as, GroupElement(g), Rational(k, 6));
        }
      }
    }
  }});
  s.push_back({"escape.folner_example", [](int, Rng&) {
    auto Z = Group::integers();
    std::set<GroupElement> F, A;
    for (long k = 0; k < 10; ++k) F.insert(GroupElement(k));
    for (long k = -2; k <= 12; k += 2) A.insert(GroupElement(k));
    auto r = folner_check(*Z, F, A, GroupElement(1), Rational(1, 5));
    check(r.translate_ratio == Rational(1, 5) && r.outside_ratio == Rational(1, 2), "ratios 1/5 and 1/2");
  }});

  // --- positive type ------------------------------------------------------
  s.push_back({"positive.characters", [](int, Rng&) {
    for (long k : {1L, 2L, 4L}) {
      for (long j = 0; j < k; ++j) check(pos_type_check(Group::cyclic(k), cyclic_character(k, j)), "character");
    }
    for (long k : {3L, 6L}) {
      for (long j = 0; j < k; ++j) check(pos_type_check(Group::cyclic(k), cyclic_cosine(k, j)), "cosine");
    }
    check(!pos_type_check(Group::cyclic(2), {Complex(1), Complex(2)}), "(1,2) rejected");
  }});
  s.push_back({"positive.lift", [](int, Rng& rng) {
    auto alg = pq();
    auto G = Group::cyclic(2);
    PosTypeFn f(G, {Complex(1), Complex(-1)});
    auto mu = card(alg, Rational(1, 2));
    PUFunc a(alg, G, {{GroupElement(1), 1}, {GroupElement(0), 2}});
    check(pos_type_lift(f, mu, a) == Complex(0), "f′(a) = 0");
    auto G4 = Group::cyclic(4);
    auto alg3 = numbered_algebra(3);
    PosTypeFn chi(G4, cyclic_character(4, 1));
    auto nu = SetFunc::measure(alg3, {1, 2, 3});
    std::vector<PUFunc> samples;
    for (int r = 0; r < 20; ++r) samples.push_back(random_pufunc(alg3, G4, G4->elements(), rng));
    for (const auto& x : samples) pos_type_lift(chi, nu, x);
    check(is_psd(lifted_gram(chi, nu, samples)), "lift is of positive type");
  }});
  s.push_back({"positive.symm_diff_iso", [](int, Rng&) {
    for (int n = 1; n <= 3; ++n) {
      auto alg = numbered_algebra(n);
      auto phi = n == 3 ? generate_copoints(3) : card(alg, 1);
      auto D = to_symm_diff_group(alg, phi);
      auto Z2 = Group::cyclic(2);
      auto iso = [&](Mask x) {
        return PUFunc(alg, Z2, {{GroupElement(1), x}, {GroupElement(0), alg->top() & ~x}});
      };
      for (Mask x = 0; x <= alg->top(); ++x) {
        check(d_phi(phi, iso(x), pu_identity(alg, Z2)) == D->length(GroupElement(static_cast<long>(x))), "ℓ = d_φ(·,e)");
        for (Mask y = 0; y <= alg->top(); ++y) {
          check(pu_multiply(iso(x), iso(y)) ==
                    iso(static_cast<Mask>(D->mul(GroupElement(static_cast<long>(x)), GroupElement(static_cast<long>(y))).as_long())),
                "△ intertwines");
        }
      }
    }
  }});
  s.push_back({"lp.random_certificates", [](int level, Rng& rng) {
    for (int r = 0; r < (level >= 2 ? 200 : 40); ++r) {
      RationalLP lp;
      const int vars = static_cast<int>(uniform_long(rng, 1, 4));
      const int rows = static_cast<int>(uniform_long(rng, 1, 5));
      for (int v = 0; v < vars; ++v) lp.objective.emplace_back(uniform_long(rng, -2, 3));
      for (int i = 0; i < rows; ++i) {
        std::vector<Rational> row;
        for (int v = 0; v < vars; ++v) row.emplace_back(uniform_long(rng, 0, 3));
        lp.rows.push_back(row);
        lp.rhs.emplace_back(uniform_long(rng, 0, 6));
      }
      for (int v = 0; v < vars; ++v) {  // keep it bounded
        std::vector<Rational> row(static_cast<std::size_t>(vars), 0);
        row[static_cast<std::size_t>(v)] = 1;
        lp.rows.push_back(row);
        lp.rhs.emplace_back(5);
      }
      check(check_lp_certificate(lp, solve_lp(lp)).empty(), "LP certificate");
    }
  }});
  return s;
}

/// Runs every suite; returns the number of failures.
inline int run_selftest(int level, Seed seed, std::ostream& out) {
  auto suites = selftest_suites();
  int failures = 0;
  for (const auto& suite : suites) {
    Rng rng(seed);
    std::string error;
    try {
      suite.run(level, rng);
    } catch (const std::exception& e) {
      error = e.what();
    }
    if (error.empty()) {
      out << "PASS " << suite.name << "\n";
    } else {
      ++failures;
      out << "FAIL " << suite.name << ": " << error << "\n";
    }
  }
  out << suites.size() << " suites, " << failures << " failed\n";
  return failures;
}

}  // namespace l0
