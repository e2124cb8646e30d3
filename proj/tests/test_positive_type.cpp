#include <gtest/gtest.h>

#include "l0/positive_type.hpp"
#include "l0/random.hpp"

using namespace l0;

namespace {

// Sylvester's criterion on every principal minor, via exact determinants;
// a Hermitian matrix is PSD iff all principal minors are nonnegative.
Complex det(std::vector<std::vector<Complex>> m) {
  const std::size_t n = m.size();
  Complex d(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == Complex(0)) ++p;
    if (p == n) return Complex(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      d = Complex(0) - d;
    }
    d = d * m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Complex f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] = m[r][k] - f * m[c][k];
    }
  }
  return d;
}

bool psd_by_minors(const ComplexMatrix& m) {
  const std::size_t n = m.size();
  for (std::uint32_t s = 1; s < (1U << n); ++s) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if ((s >> i) & 1U) idx.push_back(i);
    std::vector<std::vector<Complex>> sub;
    for (auto i : idx) {
      std::vector<Complex> row;
      for (auto j : idx) row.push_back(m[i][j]);
      sub.push_back(row);
    }
    Complex d = det(sub);
    if (sgn(d.re) < 0) return false;
  }
  return true;
}

}  // namespace

TEST(PositiveType, CharactersAccepted) {
  for (long k : {1L, 2L, 4L}) {
    auto G = Group::cyclic(k);
    for (long j = 0; j < k; ++j) EXPECT_TRUE(pos_type_check(G, cyclic_character(k, j))) << k << "," << j;
  }
  for (long k : {3L, 6L}) {
    auto G = Group::cyclic(k);
    for (long j = 0; j < k; ++j) EXPECT_TRUE(pos_type_check(G, cyclic_cosine(k, j))) << k << "," << j;
  }
}

TEST(PositiveType, RejectsNonPositive) {
  auto z2 = Group::cyclic(2);
  EXPECT_FALSE(pos_type_check(z2, {Complex(1), Complex(2)}));
  EXPECT_THROW(PosTypeFn(z2, {Complex(1), Complex(2)}), PreconditionError);
  EXPECT_FALSE(pos_type_check(z2, {Complex(-1), Complex(0)}));
  EXPECT_THROW(PosTypeFn(z2, {Complex(1)}), InputError);
}

TEST(PositiveType, PsdAgreesWithMinors) {
  Rng rng(17);
  auto z4 = Group::cyclic(4);
  auto s3 = symmetric_group_3();
  for (int t = 0; t < 300; ++t) {
    const GroupPtr& G = t % 2 ? z4 : s3;
    std::vector<Complex> v;
    for (long i = 0; i < G->order(); ++i) v.emplace_back(uniform_long(rng, -3, 3), uniform_long(rng, -1, 1));
    v[0] = Complex(uniform_long(rng, 0, 6));
    ComplexMatrix m(static_cast<std::size_t>(G->order()), std::vector<Complex>(static_cast<std::size_t>(G->order())));
    auto els = G->elements();
    for (std::size_t i = 0; i < els.size(); ++i)
      for (std::size_t j = 0; j < els.size(); ++j)
        m[i][j] = v[static_cast<std::size_t>(G->mul(G->inv(els[j]), els[i]).as_long())];
    const bool expect = is_hermitian(m) && psd_by_minors(m);
    EXPECT_EQ(pos_type_check(G, v), expect);
  }
}

TEST(Lift, WorkedValue) {
  auto alg = FiniteAlgebra::make({"p", "q"});
  auto z2 = Group::cyclic(2);
  PosTypeFn f(z2, {Complex(1), Complex(-1)});
  SetFunc mu = SetFunc::measure(alg, {Rational(1, 2), Rational(1, 2)});
  PUFunc a(alg, z2, {{GroupElement(1), 0b01}, {GroupElement(0), 0b10}});
  EXPECT_EQ(pos_type_lift(f, mu, a), Complex(0));
}

TEST(Lift, ConstantOne) {
  auto alg = FiniteAlgebra::make({"a", "b", "c"});
  auto z4 = Group::cyclic(4);
  PosTypeFn f(z4, cyclic_character(4, 0));
  SetFunc mu = SetFunc::measure(alg, {1, 2, 3});
  for (const auto& a : all_pufuncs(alg, z4)) EXPECT_EQ(pos_type_lift(f, mu, a), Complex(1));
}

TEST(Lift, ExtendsAndStaysPositive) {
  Rng rng(23);
  auto alg = FiniteAlgebra::make({"a", "b", "c"});
  SetFunc mu = SetFunc::measure(alg, {1, 2, 3});
  std::vector<std::pair<GroupPtr, std::vector<Complex>>> cases{
      {Group::cyclic(4), cyclic_character(4, 1)},
      {Group::cyclic(3), cyclic_cosine(3, 1)},
      {Group::cyclic(6), cyclic_cosine(6, 1)},
  };
  for (const auto& [G, values] : cases) {
    PosTypeFn f(G, values);
    for (const auto& g : G->elements()) EXPECT_EQ(lift_value(f, mu, eta(alg, G, g)), f(g));
    std::vector<PUFunc> sample;
    for (int i = 0; i < 8; ++i) sample.push_back(random_pufunc(alg, G, G->elements(), rng));
    ComplexMatrix m = lifted_gram(f, mu, sample);
    EXPECT_TRUE(is_hermitian(m));
    EXPECT_TRUE(is_psd(m));
    EXPECT_TRUE(psd_by_minors(m));
  }
}

TEST(Lift, RequiresMeasure) {
  auto alg = FiniteAlgebra::make({"p", "q"});
  auto z2 = Group::cyclic(2);
  PosTypeFn f(z2, {Complex(1), Complex(-1)});
  SetFunc notmu = SetFunc::max_of(alg, {{1, 0}, {0, 1}});
  EXPECT_THROW(pos_type_lift(f, notmu, pu_identity(alg, z2)), PreconditionError);
  EXPECT_THROW(pos_type_lift(f, SetFunc::measure(alg, {0, 0}), pu_identity(alg, z2)), PreconditionError);
}
