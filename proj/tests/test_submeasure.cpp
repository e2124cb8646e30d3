#include <gtest/gtest.h>

#include "l0/pathology.hpp"
#include "l0/random.hpp"
#include "l0/submeasure.hpp"
#include "oracles.hpp"

using namespace l0;

namespace {

AlgebraPtr pqr() { return FiniteAlgebra::make({"p", "q", "r"}); }

SetFunc min2() { return generate_concave_cardinality(3, {0, 1, 2, 2}); }

SetFunc zero_fn(const AlgebraPtr& alg) { return SetFunc::measure(alg, std::vector<Rational>(alg->size(), 0)); }

// Direct definition scans, independent of classify().
bool scan_monotone(const std::vector<Rational>& v) {
  for (Mask a = 0; a < v.size(); ++a)
    for (Mask b = 0; b < v.size(); ++b)
      if ((a & ~b) == 0 && v[a] > v[b]) return false;
  return true;
}
bool scan_subadditive(const std::vector<Rational>& v) {
  for (Mask a = 0; a < v.size(); ++a)
    for (Mask b = 0; b < v.size(); ++b)
      if (v[a | b] > v[a] + v[b]) return false;
  return true;
}
bool scan_submodular(const std::vector<Rational>& v) {
  for (Mask a = 0; a < v.size(); ++a)
    for (Mask b = 0; b < v.size(); ++b)
      if (v[a | b] + v[a & b] > v[a] + v[b]) return false;
  return true;
}

}  // namespace

TEST(SetFunc, EvaluationAcrossRepresentations) {
  SetFunc c3 = generate_copoints(3);
  EXPECT_EQ(c3.eval(7), 2);
  auto alg = pqr();
  SetFunc u = SetFunc::measure(alg, {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  EXPECT_EQ(u.eval(0b011), Rational(2, 3));
  SetFunc mx = SetFunc::max_of(alg, {{1, 0, 0}, {0, 1, 1}});
  EXPECT_EQ(mx.eval(0b111), 2);
  EXPECT_EQ(mx.eval(0b001), 1);
  for (const SetFunc& f : {c3, u, mx, min2()}) EXPECT_EQ(f.eval(0), 0);
}

TEST(SetFunc, CoverValuesMatchBruteForce) {
  for (Seed s = 1; s <= 20; ++s) {
    SetFunc phi = generate_random_cover(5, 6, Rational(1, 3), s);
    const auto& fam = std::get<CoverRepr>(phi.repr()).family;
    for (Mask a = 0; a < 32; ++a) {
      auto want = oracle::min_cover(fam, a);
      ASSERT_TRUE(want.has_value());
      EXPECT_EQ(phi.eval(a), *want) << "seed " << s << " mask " << a;
    }
  }
}

TEST(SetFunc, TableRejectsNonzeroAtZero) {
  auto alg = FiniteAlgebra::make({"p"});
  EXPECT_THROW(SetFunc::table(alg, {1, 1}), InputError);
  EXPECT_THROW(SetFunc::table(alg, {0}), InputError);
  EXPECT_THROW(SetFunc::measure(alg, {-1}), InputError);
}

TEST(Classify, MinCardinalityTwo) {
  PropertyReport r = classify(min2());
  EXPECT_TRUE(r.monotone);
  EXPECT_TRUE(r.subadditive);
  EXPECT_TRUE(r.submodular);
  EXPECT_FALSE(r.additive);
  const Violation* v = r.counterexample("additive");
  ASSERT_NE(v, nullptr);
  EXPECT_TRUE(replays(min2(), *v));
}

TEST(Classify, MeasureAndZeroWeight) {
  auto alg = pqr();
  PropertyReport r = classify(SetFunc::measure(alg, {Rational(1, 2), Rational(1, 3), Rational(1, 6)}));
  EXPECT_TRUE(r.is_measure());
  EXPECT_TRUE(r.submodular && r.strictly_positive);
  r = classify(SetFunc::measure(alg, {1, 0, 2}));
  EXPECT_TRUE(r.is_measure());
  EXPECT_FALSE(r.strictly_positive);
}

TEST(Classify, CopointsNotSubmodular) {
  SetFunc c3 = generate_copoints(3);
  PropertyReport r = classify(c3);
  EXPECT_TRUE(r.monotone && r.subadditive);
  EXPECT_FALSE(r.submodular);
  const Violation* v = r.counterexample("submodular");
  ASSERT_NE(v, nullptr);
  EXPECT_TRUE(replays(c3, *v));
}

TEST(Classify, AgreesWithDefinitionScansOnRandomTables) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    auto alg = numbered_algebra(static_cast<int>(uniform_long(rng, 1, 4)));
    std::vector<Rational> v(alg->element_count(), 0);
    for (Mask m = 1; m < v.size(); ++m) v[m] = Rational(uniform_long(rng, 0, 4), uniform_long(rng, 1, 2));
    for (auto& x : v) x.canonicalize();
    SetFunc phi = SetFunc::table(alg, v);
    PropertyReport r = classify(phi);
    EXPECT_EQ(r.monotone, scan_monotone(v));
    EXPECT_EQ(r.subadditive, scan_subadditive(v));
    EXPECT_EQ(r.submodular, scan_submodular(v));
    for (const auto& ce : r.counterexamples) EXPECT_TRUE(replays(phi, ce)) << ce.property;
  }
}

TEST(Classify, SampledAboveExhaustiveCapIsDeterministic) {
  SetFunc phi = generate_random_cover(10, 8, Rational(1, 2), 3);
  PropertyReport a = classify(phi, Seed{5});
  PropertyReport b = classify(phi, Seed{5});
  EXPECT_TRUE(a.sampled);
  EXPECT_EQ(a.submodular, b.submodular);
  ASSERT_EQ(a.counterexamples.size(), b.counterexamples.size());
  for (std::size_t i = 0; i < a.counterexamples.size(); ++i) {
    EXPECT_EQ(a.counterexamples[i].a, b.counterexamples[i].a);
    EXPECT_EQ(a.counterexamples[i].b, b.counterexamples[i].b);
  }
}

TEST(Diffuseness, Examples) {
  auto alg = pqr();
  EXPECT_EQ(diffuseness(min2()).value, 1);
  EXPECT_EQ(diffuseness(zero_fn(alg)).value, 0);
  EXPECT_EQ(diffuseness(SetFunc::measure(alg, {Rational(1, 2), Rational(1, 3), Rational(1, 6)})).value,
            Rational(1, 2));
  EXPECT_EQ(two_valued_domination(min2()).value, 1);
  EXPECT_EQ(two_valued_domination(zero_fn(alg)).value, 0);
  EXPECT_EQ(two_valued_domination(generate_copoints(3)).value, 1);
}

TEST(Diffuseness, EqualsTwoValuedDominationOnRandomMonotone) {
  Rng rng(2024);
  for (int t = 0; t < 100; ++t) {
    auto alg = numbered_algebra(static_cast<int>(uniform_long(rng, 1, 4)));
    SetFunc phi = random_monotone(alg, rng);
    const auto& v = phi.values();
    // oracle: min over partitions of the max cell value
    Rational best = -1;
    for (const auto& q : oracle::set_partitions(alg->size())) {
      Rational worst = 0;
      for (Mask c : q) worst = std::max(worst, v[c]);
      if (best < 0 || worst < best) best = worst;
    }
    EXPECT_EQ(diffuseness(phi).value, best);
    EXPECT_EQ(two_valued_domination(phi).value, best);
  }
}

TEST(Diffuseness, ZeroExactlyForZeroFunction) {
  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    auto alg = numbered_algebra(static_cast<int>(uniform_long(rng, 1, 4)));
    SetFunc phi = random_max_of_measures(alg, rng);
    bool all_zero = true;
    for (const auto& x : phi.values()) all_zero = all_zero && sgn(x) == 0;
    EXPECT_EQ(sgn(diffuseness(phi).value) == 0, all_zero);
  }
}

TEST(Pullback, Examples) {
  auto alg = pqr();
  SetFunc u = SetFunc::measure(alg, {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  SetFunc id = pullback(u, VeeMonoidHom::identity(alg));
  EXPECT_EQ(id.values(), u.values());

  // θ kills r: project onto {p,q}
  auto tgt = FiniteAlgebra::make({"p", "q"});
  auto theta = VeeMonoidHom::from_atom_images(alg, tgt, {0b01, 0b10, 0});
  SetFunc on_tgt = SetFunc::measure(tgt, {Rational(1, 3), Rational(1, 3)});
  SetFunc pb = pullback(on_tgt, theta);
  EXPECT_EQ(pb.eval(0b100), 0);
  EXPECT_EQ(pb.eval(0b101), Rational(1, 3));
}

TEST(Pullback, PreservesSubmodularity) {
  Rng rng(9);
  SetFunc phi = generate_concave_cardinality(4, {0, 3, 5, 6, 6});
  for (int t = 0; t < 20; ++t) {
    auto src = numbered_algebra(static_cast<int>(uniform_long(rng, 1, 4)));
    auto theta = random_vee_hom(src, phi.algebra(), rng);
    EXPECT_TRUE(classify(pullback(phi, theta)).submodular);
  }
}

TEST(Continuity, Modulus) {
  SetFunc m = min2();
  auto alg = m.algebra();
  auto mod = continuity_modulus(VeeMonoidHom::identity(alg), m, m);
  for (Rational d : {Rational(0), Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)}) {
    EXPECT_LE(mod.at(d), d);
  }
  auto zero = continuity_modulus(VeeMonoidHom::zero(alg, alg), m, m);
  EXPECT_EQ(zero.at(10), 0);

  auto two = FiniteAlgebra::make({"p", "q"});
  auto three = pqr();
  auto proj = VeeMonoidHom::from_atom_images(three, two, {0b01, 0b10, 0});
  SetFunc phi = SetFunc::measure(three, {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  SetFunc mu = SetFunc::measure(two, {Rational(1, 2), Rational(1, 2)});
  EXPECT_EQ(continuity_modulus(proj, phi, mu).at(Rational(1, 3)), Rational(1, 2));
}

TEST(Submeasure, RequireSubmeasureNamesFailure) {
  auto alg = FiniteAlgebra::make({"p", "q"});
  SetFunc bad = SetFunc::table(alg, {0, 1, 1, 3});
  EXPECT_THROW(require_submeasure(bad, "test"), PreconditionError);
}
