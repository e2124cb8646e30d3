#include <gtest/gtest.h>

#include "l0/pathology.hpp"
#include "l0/pugroup.hpp"
#include "l0/random.hpp"

using namespace l0;

namespace {

AlgebraPtr pq() { return FiniteAlgebra::make({"p", "q"}); }

PUFunc pu(const AlgebraPtr& alg, const GroupPtr& G, std::vector<std::pair<long, Mask>> l) {
  LabelMap m;
  for (auto [g, mask] : l) m[GroupElement(g)] |= mask;
  return {alg, G, m};
}

// Convolution straight from its defining sum, over every pair of labels.
PUFunc convolve(const PUFunc& a, const PUFunc& b) {
  std::map<GroupElement, Mask> out;
  for (const auto& [x, ax] : a.labels())
    for (const auto& [y, by] : b.labels()) out[a.group()->mul(x, y)] |= ax & by;
  return {a.algebra(), a.group(), out};
}

SetFunc half_card(const AlgebraPtr& alg) {
  return SetFunc::measure(alg, std::vector<Rational>(static_cast<std::size_t>(alg->size()), Rational(1, 2)));
}

}  // namespace

TEST(PUFunc, ConstructionValidates) {
  auto alg = pq();
  auto z2 = Group::cyclic(2);
  EXPECT_THROW(pu(alg, z2, {{0, 0b01}}), InputError);
  EXPECT_THROW(pu(alg, z2, {{0, 0b11}, {1, 0b01}}), InputError);
  EXPECT_THROW(pu(alg, z2, {{2, 0b11}}), InputError);
  EXPECT_EQ(pu_identity(alg, z2).labels(), (LabelMap{{GroupElement(0), 0b11}}));
}

TEST(PUFunc, HandConvolution) {
  auto alg = pq();
  auto z2 = Group::cyclic(2);
  PUFunc a = pu(alg, z2, {{1, 0b01}, {0, 0b10}});
  PUFunc b = pu(alg, z2, {{1, 0b11}});
  EXPECT_EQ(pu_multiply(a, b), pu(alg, z2, {{0, 0b01}, {1, 0b10}}));
}

TEST(PUFunc, MultiplyMatchesDefinitionOnSamples) {
  Rng rng(31);
  auto alg = FiniteAlgebra::make({"a", "b", "c", "d"});
  auto s3 = symmetric_group_3();
  for (int t = 0; t < 300; ++t) {
    PUFunc a = random_pufunc(alg, s3, s3->elements(), rng);
    PUFunc b = random_pufunc(alg, s3, s3->elements(), rng);
    EXPECT_EQ(pu_multiply(a, b), convolve(a, b));
  }
}

TEST(PUFunc, InverseNegatesLabels) {
  auto alg = pq();
  auto z4 = Group::cyclic(4);
  PUFunc a = pu(alg, z4, {{1, 0b01}, {3, 0b10}});
  EXPECT_EQ(pu_inverse(a), pu(alg, z4, {{3, 0b01}, {1, 0b10}}));
  EXPECT_EQ(pu_multiply(a, pu_inverse(a)), pu_identity(alg, z4));
  EXPECT_EQ(pu_power(a, 2), pu(alg, z4, {{2, 0b11}}));
  EXPECT_EQ(pu_power(a, -1), pu_inverse(a));
}

TEST(PUFunc, SupportIsBooleanHomomorphism) {
  Rng rng(5);
  auto alg = FiniteAlgebra::make({"a", "b", "c"});
  auto z4 = Group::cyclic(4);
  std::vector<std::set<GroupElement>> subsets;
  for (int s = 0; s < 16; ++s) {
    std::set<GroupElement> T;
    for (int g = 0; g < 4; ++g)
      if ((s >> g) & 1) T.insert(GroupElement(g));
    subsets.push_back(T);
  }
  for (int t = 0; t < 50; ++t) {
    PUFunc a = random_pufunc(alg, z4, z4->elements(), rng);
    EXPECT_TRUE(support(a, subsets.back()).is_one());
    EXPECT_TRUE(support(a, subsets.front()).is_zero());
    for (const auto& S : subsets) {
      for (const auto& T : subsets) {
        std::set<GroupElement> both, either;
        for (const auto& g : S) {
          either.insert(g);
          if (T.count(g)) both.insert(g);
        }
        either.insert(T.begin(), T.end());
        EXPECT_EQ(meet(support(a, S), support(a, T)), support(a, both));
        EXPECT_EQ(join(support(a, S), support(a, T)), support(a, either));
      }
    }
  }
  PUFunc e = pu_identity(alg, z4);
  EXPECT_TRUE(support(e, {GroupElement(0)}).is_one());
  EXPECT_TRUE(support(e, {GroupElement(1)}).is_zero());
}

TEST(Metric, Examples) {
  auto alg = pq();
  auto z2 = Group::cyclic(2);
  SetFunc phi = half_card(alg);
  PUFunc a = pu(alg, z2, {{1, 0b01}, {0, 0b10}});
  EXPECT_EQ(d_phi(phi, a, pu_identity(alg, z2)), Rational(1, 2));
  EXPECT_EQ(d_phi(phi, a, a), 0);
}

TEST(Metric, BiInvariantAndTriangle) {
  Rng rng(8);
  auto alg = FiniteAlgebra::make({"a", "b", "c", "d"});
  SetFunc phi = random_max_of_measures(alg, rng, 3);
  auto s3 = symmetric_group_3();
  for (int t = 0; t < 300; ++t) {
    PUFunc a = random_pufunc(alg, s3, s3->elements(), rng);
    PUFunc b = random_pufunc(alg, s3, s3->elements(), rng);
    PUFunc c = random_pufunc(alg, s3, s3->elements(), rng);
    Rational d = d_phi(phi, a, b);
    EXPECT_EQ(d_phi(phi, pu_multiply(a, c), pu_multiply(b, c)), d);
    EXPECT_EQ(d_phi(phi, pu_multiply(c, a), pu_multiply(c, b)), d);
    EXPECT_EQ(d_phi(phi, b, a), d);
    EXPECT_LE(d_phi(phi, a, c), d + d_phi(phi, b, c));
  }
}

TEST(Embeddings, EtaAndSigma) {
  auto alg = FiniteAlgebra::make({"a", "b", "c"});
  auto z4 = Group::cyclic(4);
  for (long g = 0; g < 4; ++g)
    for (long h = 0; h < 4; ++h)
      EXPECT_EQ(pu_multiply(eta(alg, z4, g), eta(alg, z4, h)), eta(alg, z4, z4->mul(g, h)));

  auto atoms = PartitionOfUnity::atoms(alg);
  std::map<Mask, GroupElement> constant{{1, GroupElement(3)}, {2, GroupElement(3)}, {4, GroupElement(3)}};
  EXPECT_EQ(sigma_q(atoms, z4, constant), eta(alg, z4, 3));

  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    std::map<Mask, GroupElement> u, v, uv;
    for (Mask cell : {1U, 2U, 4U}) {
      u[cell] = GroupElement(uniform_long(rng, 0, 3));
      v[cell] = GroupElement(uniform_long(rng, 0, 3));
      uv[cell] = z4->mul(u[cell], v[cell]);
    }
    EXPECT_EQ(pu_multiply(sigma_q(atoms, z4, u), sigma_q(atoms, z4, v)), sigma_q(atoms, z4, uv));
  }
}

TEST(Gamma, DecomposeExample) {
  auto alg = pq();
  auto z2 = Group::cyclic(2);
  Elem A(alg, 0b01), B(alg, 0b10);
  PUFunc c = pu(alg, z2, {{1, 0b11}});
  auto [a, b] = gamma_decompose(c, A, B);
  EXPECT_EQ(a, pu(alg, z2, {{1, 0b01}, {0, 0b10}}));
  EXPECT_EQ(b, pu(alg, z2, {{1, 0b10}, {0, 0b01}}));
  EXPECT_EQ(pu_multiply(a, b), c);

  PUFunc e = pu_identity(alg, z2);
  auto [x, y] = gamma_decompose(e, A, B);
  EXPECT_EQ(x, e);
  EXPECT_EQ(y, e);
}

TEST(Gamma, DecomposeExhaustiveSmall) {
  auto z2 = Group::cyclic(2);
  for (int n = 1; n <= 3; ++n) {
    auto alg = numbered_algebra(n);
    auto all = all_pufuncs(alg, z2);
    for (Mask A = 0; A <= alg->top(); ++A) {
      for (Mask B = 0; B <= alg->top(); ++B) {
        for (const auto& c : all) {
          if (!gamma_contains(Elem(alg, A | B), c)) {
            EXPECT_THROW(gamma_decompose(c, Elem(alg, A), Elem(alg, B)), PreconditionError);
            continue;
          }
          auto [a, b] = gamma_decompose(c, Elem(alg, A), Elem(alg, B));
          EXPECT_TRUE(gamma_contains(Elem(alg, A), a));
          EXPECT_TRUE(gamma_contains(Elem(alg, B), b));
          EXPECT_EQ(convolve(a, b), c);
        }
      }
    }
  }
}

TEST(PiSharp, IdentityAndReduction) {
  auto alg = numbered_algebra(3);
  auto z2 = Group::cyclic(2);
  std::set<GroupElement> dom{GroupElement(0), GroupElement(1)};
  auto unit = PuHomTable::from_function(z2, alg, z2, dom, [&](const GroupElement& g) { return eta(alg, z2, g); });
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    PUFunc a = random_pufunc(alg, z2, z2->elements(), rng);
    EXPECT_EQ(pi_sharp(unit, a), a);
  }

  auto Z = Group::integers();
  std::set<GroupElement> window;
  std::vector<GroupElement> pool;
  for (long k = -6; k <= 6; ++k) {
    window.insert(GroupElement(k));
    pool.emplace_back(k);
  }
  auto mod2 = PuHomTable::from_function(Z, alg, z2, window, [&](const GroupElement& g) {
    return eta(alg, z2, ((g.as_long() % 2) + 2) % 2);
  });
  SetFunc phi = generate_concave_cardinality(3, {0, 1, 2, 2});
  std::vector<GroupElement> small;
  for (long k = -3; k <= 3; ++k) small.emplace_back(k);
  for (int t = 0; t < 50; ++t) {
    PUFunc a = random_pufunc(alg, Z, small, rng);
    PUFunc b = random_pufunc(alg, Z, small, rng);
    PUFunc pa = pi_sharp(mod2, a);
    for (const auto& [g, m] : a.labels()) {
      long r = ((g.as_long() % 2) + 2) % 2;
      EXPECT_EQ(pa.at(r) & m, m);
    }
    PiSharpCheck r = check_pi_sharp(phi, mod2, a, b);
    EXPECT_TRUE(r.homomorphic);
    EXPECT_TRUE(r.extends);
    EXPECT_TRUE(r.lipschitz);
  }
}

TEST(PiSharp, RejectsNonHomomorphism) {
  auto alg = pq();
  auto z2 = Group::cyclic(2);
  std::set<GroupElement> dom{GroupElement(0), GroupElement(1)};
  auto bad = PuHomTable::from_function(z2, alg, z2, dom, [&](const GroupElement&) { return eta(alg, z2, 1); });
  EXPECT_THROW(pi_sharp(bad, eta(alg, z2, 1)), PreconditionError);
}

TEST(FBullet, Examples) {
  auto alg = pq();
  auto z2 = Group::cyclic(2);
  auto Q = Group::rationals();
  PUFunc a = pu(alg, z2, {{1, 0b01}, {0, 0b10}});
  EXPECT_EQ(length_bullet(a, Q), pu(alg, Q, {{1, 0b01}, {0, 0b10}}));
  PUFunc c = f_bullet([](const GroupElement&) { return GroupElement(0); }, z2, a);
  EXPECT_EQ(c, pu_identity(alg, z2));
}

TEST(FBullet, LengthLiftIsSymmetricAndSubadditive) {
  Rng rng(12);
  auto alg = FiniteAlgebra::make({"a", "b", "c", "d"});
  auto Q = Group::rationals();
  std::vector<GroupPtr> groups{Group::cyclic(2), Group::cyclic(4), Group::integers()};
  for (const auto& G : groups) {
    std::vector<GroupElement> pool;
    if (G->is_finite()) {
      pool = G->elements();
    } else {
      for (long k = -5; k <= 5; ++k) pool.emplace_back(k);
    }
    for (int t = 0; t < 200; ++t) {
      PUFunc a = random_pufunc(alg, G, pool, rng);
      PUFunc b = random_pufunc(alg, G, pool, rng);
      EXPECT_EQ(length_bullet(pu_inverse(a), Q), length_bullet(a, Q));
      EXPECT_TRUE(pu_leq(length_bullet(pu_multiply(a, b), Q), pu_add(length_bullet(a, Q), length_bullet(b, Q))));
    }
  }
}

TEST(Order, PuLeq) {
  auto alg = pq();
  auto Q = Group::rationals();
  PUFunc a = pu(alg, Q, {{1, 0b01}, {2, 0b10}});
  EXPECT_TRUE(pu_leq(a, a));
  EXPECT_TRUE(pu_leq(pu_identity(alg, Q), a));
  EXPECT_FALSE(pu_leq(a, pu_identity(alg, Q)));
  EXPECT_THROW(pu_leq(pu_identity(alg, Group::cyclic(2)), a), InputError);
}

TEST(Neighborhood, Membership) {
  auto alg = pq();
  auto z2 = Group::cyclic(2);
  SetFunc phi = half_card(alg);
  auto V = Neighborhood::finite(z2, {GroupElement(0)});
  PUFunc a = pu(alg, z2, {{1, 0b01}, {0, 0b10}});
  EXPECT_TRUE(in_nbhd(phi, a, Neighborhood::pu(V, Rational(1, 2))));
  EXPECT_FALSE(in_nbhd(phi, a, Neighborhood::pu(V, Rational(1, 3))));
  EXPECT_THROW(Neighborhood::finite(Group::cyclic(4), {GroupElement(0), GroupElement(1)}), InputError);
}
