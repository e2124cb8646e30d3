#include <gtest/gtest.h>

#include "l0/escape.hpp"
#include "l0/pathology.hpp"
#include "l0/random.hpp"

using namespace l0;

namespace {

std::set<GroupElement> range(long lo, long hi) {
  std::set<GroupElement> s;
  for (long k = lo; k <= hi; ++k) s.insert(GroupElement(k));
  return s;
}

}  // namespace

TEST(OneOverN, IntegerBallClosedForm) {
  auto Z = Group::integers();
  for (long k = 0; k <= 20; ++k) {
    auto U = Neighborhood::ball(Z, k);
    const auto members = U.members();
    for (long n = 1; n <= 20; ++n) {
      // definition replay: g, 2g, ..., ng all in U
      std::set<GroupElement> want;
      for (const auto& g : members) {
        bool in = true;
        for (long j = 1; j <= n; ++j) in = in && members.count(GroupElement(j * g.as_long())) > 0;
        if (in) want.insert(g);
      }
      EXPECT_EQ(one_over_n(U, n).members(), want) << "k=" << k << " n=" << n;
      EXPECT_EQ(one_over_n(U, n).members(), range(-(k / n), k / n));
    }
    EXPECT_EQ(trap(U).members(), range(0, 0));
  }
  EXPECT_EQ(one_over_n(Neighborhood::ball(Z, 5), 2).members(), range(-2, 2));
}

TEST(OneOverN, RationalBall) {
  auto Q = Group::rationals();
  auto U = one_over_n(Neighborhood::ball(Q, 5), 2);
  ASSERT_TRUE(std::holds_alternative<Neighborhood::Ball>(U.repr()));
  EXPECT_EQ(std::get<Neighborhood::Ball>(U.repr()).radius, Rational(5, 2));
}

TEST(Trap, FiniteGroups) {
  auto z6 = Group::cyclic(6);
  auto whole = Neighborhood::finite(z6, range(0, 5));
  EXPECT_EQ(trap(whole).members(), range(0, 5));
  // {0, 2, 3, 4}: {0,2,4} and {0,3} are subgroups
  auto U = Neighborhood::finite(z6, {GroupElement(0), GroupElement(2), GroupElement(3), GroupElement(4)});
  EXPECT_EQ(trap(U).members(), (std::set<GroupElement>{GroupElement(0), GroupElement(2), GroupElement(3), GroupElement(4)}));
  auto W = Neighborhood::finite(z6, {GroupElement(0), GroupElement(1), GroupElement(5)});
  EXPECT_EQ(trap(W).members(), range(0, 0));
  EXPECT_EQ(one_over_n(W, trap_stabilization(W)).members(), trap(W).members());
}

TEST(TrapDecompose, ThreeAtomsExample) {
  auto alg = FiniteAlgebra::make({"p", "q", "r"});
  auto z2 = Group::cyclic(2);
  SetFunc phi = SetFunc::measure(alg, {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  PUFunc a = eta(alg, z2, 1);
  auto V = Neighborhood::finite(z2, {GroupElement(0)});
  auto f = trap_decompose(phi, a, V, Rational(1, 3));
  EXPECT_EQ(f.size(), 3U);
  PUFunc prod = pu_identity(alg, z2);
  for (const auto& x : f) prod = pu_multiply(prod, x);
  EXPECT_EQ(prod, a);

  auto id_factors = trap_decompose(phi, pu_identity(alg, z2), V, Rational(1, 3));
  for (const auto& x : id_factors) EXPECT_EQ(x, pu_identity(alg, z2));

  EXPECT_THROW(trap_decompose(phi, a, V, Rational(1, 4)), PreconditionError);
}

TEST(TrapDecompose, ReconstructsEveryElement) {
  auto z2 = Group::cyclic(2);
  auto z3 = Group::cyclic(3);
  Rng rng(6);
  for (int n = 2; n <= 3; ++n) {
    auto alg = numbered_algebra(n);
    for (int t = 0; t < 5; ++t) {
      std::vector<Rational> w;
      for (int i = 0; i < n; ++i) w.emplace_back(uniform_long(rng, 1, 5), 4);
      SetFunc phi = SetFunc::measure(alg, w);
      Rational eps = *std::max_element(w.begin(), w.end());
      for (const auto& G : {z2, z3}) {
        auto V = Neighborhood::finite(G, {G->identity()});
        for (const auto& a : all_pufuncs(alg, G)) {
          auto f = trap_decompose(phi, a, V, eps);
          EXPECT_LE(f.size(), static_cast<std::size_t>(n));
          PUFunc prod = pu_identity(alg, G);
          for (const auto& x : f) prod = pu_multiply(prod, x);
          EXPECT_EQ(prod, a);
        }
      }
    }
  }
}

TEST(Escape, AbsoluteValueOnIntegers) {
  auto Z = Group::integers();
  LengthFn f = [](const GroupElement& g) { return Rational(abs(g.value)); };
  auto v = is_escape_function(f, Neighborhood::ball(Z, 5), {Rational(1), Rational(1, 2)}, 10);
  EXPECT_TRUE(v.escape);
  EXPECT_EQ(v.stabilization, 6);
  ASSERT_EQ(v.per_epsilon.size(), 2U);
  EXPECT_EQ(v.per_epsilon[0].second, 6);
}

TEST(Escape, RejectsBadInputs) {
  LengthFn f = [](const GroupElement& g) { return Rational(abs(g.value)); };
  EXPECT_THROW(is_escape_function(f, Neighborhood::ball(Group::rationals(), 1), {}, 3), PreconditionError);
  LengthFn bad = [](const GroupElement& g) { return g.value; };
  EXPECT_THROW(is_escape_function(bad, Neighborhood::ball(Group::integers(), 2), {}, 3), PreconditionError);
}

TEST(Escape, FiniteGroupZeroOnTrap) {
  auto z6 = Group::cyclic(6);
  auto U = Neighborhood::finite(z6, {GroupElement(0), GroupElement(3)});
  LengthFn f = [](const GroupElement& g) { return Rational(g.as_long() % 3 == 0 ? 0 : 1); };
  EXPECT_TRUE(is_escape_function(f, U, {Rational(1, 2)}, 4).escape);
}

TEST(Escape, PuLengthIsNotEscapeOnFiniteModel) {
  auto z2 = Group::cyclic(2);
  for (int n = 2; n <= 3; ++n) {
    auto alg = numbered_algebra(n);
    std::vector<Rational> w;
    for (int i = 0; i < n; ++i) w.emplace_back(i + 1, 6);
    SetFunc phi = SetFunc::measure(alg, w);
    PuGroupModel model = materialize_pu_group(alg, z2, phi);
    ASSERT_EQ(static_cast<long>(model.elements.size()), 1L << n);
    LengthFn ell = [&](const GroupElement& g) { return model.group->length(g); };
    auto V = Neighborhood::finite(z2, {GroupElement(0)});
    for (Rational eps : {Rational(n, 6), Rational(1), Rational(2)}) {
      auto U = model.nbhd(phi, V, eps);
      auto verdict = is_escape_function(ell, U, {Rational(1, 100)}, 8);
      EXPECT_FALSE(verdict.escape);
      ASSERT_TRUE(verdict.witness.has_value());
      EXPECT_GT(verdict.witness_value, 0);
    }
  }
}

TEST(Folner, IntegerWindowExample) {
  auto Z = Group::integers();
  std::set<GroupElement> evens;
  for (long k = -20; k <= 20; k += 2) evens.insert(GroupElement(k));
  auto r = folner_check(*Z, range(0, 9), evens, GroupElement(1), Rational(1, 5));
  EXPECT_EQ(r.translate_ratio, Rational(1, 5));
  EXPECT_EQ(r.outside_ratio, Rational(1, 2));
  EXPECT_EQ(r.bound, Rational(2, 5));
  EXPECT_TRUE(r.antecedent && r.holds);
}

TEST(Folner, ExhaustiveCyclicSix) {
  auto z6 = Group::cyclic(6);
  long checked = 0;
  for (int f = 1; f < 64; ++f) {
    std::set<GroupElement> F;
    for (int i = 0; i < 6; ++i)
      if ((f >> i) & 1) F.insert(GroupElement(i));
    for (int a = 0; a < 64; ++a) {
      std::set<GroupElement> A;
      for (int i = 0; i < 6; ++i)
        if ((a >> i) & 1) A.insert(GroupElement(i));
      for (long g = 0; g < 6; ++g) {
        bool disjoint = true;
        for (const auto& x : A) disjoint = disjoint && !A.count(z6->mul(g, x));
        for (long k = 0; k <= 6; ++k) {
          if (!disjoint) {
            EXPECT_THROW(folner_check(*z6, F, A, g, Rational(k, 6)), PreconditionError);
            continue;
          }
          // independent count of |F △ gF| and |F ∖ A|
          int sym = 0, out = 0;
          for (int i = 0; i < 6; ++i) {
            bool inF = (f >> i) & 1, ingF = (f >> (((i - g) % 6 + 6) % 6)) & 1;
            sym += inF != ingF;
            out += inF && !((a >> i) & 1);
          }
          int size = std::popcount(static_cast<unsigned>(f));
          bool antecedent = Rational(sym, size) <= Rational(k, 6);
          bool consequent = Rational(out, size) >= (1 - Rational(k, 6)) / 2;
          EXPECT_TRUE(!antecedent || consequent);
          auto r = folner_check(*z6, F, A, g, Rational(k, 6));
          EXPECT_EQ(r.antecedent, antecedent);
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Folner, SingletonWithLargeEpsilon) {
  auto z6 = Group::cyclic(6);
  auto r = folner_check(*z6, {GroupElement(0)}, {}, GroupElement(1), 2);
  EXPECT_TRUE(r.holds);
}

TEST(SymmDiffGroup, MatchesPuModel) {
  auto z2 = Group::cyclic(2);
  for (int n = 1; n <= 3; ++n) {
    auto alg = numbered_algebra(n);
    SetFunc phi = generate_concave_cardinality(n, [&] {
      std::vector<Rational> f{0};
      for (int k = 1; k <= n; ++k) f.emplace_back(std::min(k, 2));
      return f;
    }());
    auto D = to_symm_diff_group(alg, phi);
    if (n == 1) {
      EXPECT_EQ(D->order(), 2);
    }
    auto iso = [&](Mask A) {
      LabelMap l{{GroupElement(1), A}, {GroupElement(0), alg->top() & ~A}};
      return PUFunc(alg, z2, l);
    };
    const PUFunc e = pu_identity(alg, z2);
    for (Mask A = 0; A <= alg->top(); ++A) {
      EXPECT_EQ(D->length(GroupElement(static_cast<long>(A))), d_phi(phi, iso(A), e));
      for (Mask B = 0; B <= alg->top(); ++B) {
        EXPECT_EQ(iso(A ^ B), pu_multiply(iso(A), iso(B)));
        EXPECT_EQ(D->mul(GroupElement(static_cast<long>(A)), GroupElement(static_cast<long>(B))),
                  GroupElement(static_cast<long>(A ^ B)));
        EXPECT_LE(phi.eval(A ^ B), phi.eval(A) + phi.eval(B));
      }
    }
  }
}
