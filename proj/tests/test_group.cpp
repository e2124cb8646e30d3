#include <gtest/gtest.h>

#include "l0/group.hpp"

using namespace l0;

TEST(Group, CyclicArithmetic) {
  auto z4 = Group::cyclic(4);
  EXPECT_EQ(z4->mul(3, 2), GroupElement(1));
  EXPECT_EQ(z4->inv(1), GroupElement(3));
  EXPECT_EQ(z4->power(1, 6), GroupElement(2));
  EXPECT_EQ(z4->power(1, -1), GroupElement(3));
  EXPECT_EQ(Group::integers()->power(3, -2), GroupElement(-6));
  EXPECT_EQ(z4->element_order(2), 2);
  EXPECT_EQ(z4->element_order(0), 1);
  EXPECT_EQ(z4->length(3), 1);
  EXPECT_EQ(z4->length(2), 2);
  EXPECT_FALSE(z4->contains(4));
}

TEST(Group, IntegersAndRationals) {
  auto z = Group::integers();
  EXPECT_EQ(z->mul(-3, 5), GroupElement(2));
  EXPECT_EQ(z->inv(7), GroupElement(-7));
  EXPECT_EQ(z->length(-4), 4);
  EXPECT_FALSE(z->contains(GroupElement(Rational(1, 2))));
  auto q = Group::rationals();
  EXPECT_EQ(q->mul(GroupElement(Rational(1, 2)), GroupElement(Rational(1, 3))), GroupElement(Rational(5, 6)));
  EXPECT_THROW(z->element_order(1), InputError);
}

TEST(Group, SymmetricGroupAxioms) {
  auto s3 = symmetric_group_3();
  ASSERT_EQ(s3->order(), 6);
  auto els = s3->elements();
  int non_commuting = 0;
  for (const auto& x : els) {
    EXPECT_EQ(s3->mul(x, s3->inv(x)), s3->identity());
    for (const auto& y : els) {
      if (!(s3->mul(x, y) == s3->mul(y, x))) ++non_commuting;
      for (const auto& z : els) EXPECT_EQ(s3->mul(s3->mul(x, y), z), s3->mul(x, s3->mul(y, z)));
    }
  }
  EXPECT_GT(non_commuting, 0);
}

TEST(Group, TableValidation) {
  // not associative: a Latin square on 3 symbols with identity 0 that is not ℤ₃
  std::vector<std::vector<int>> bad{{0, 1, 2}, {1, 0, 2}, {2, 2, 0}};
  EXPECT_THROW(Group::table({"e", "a", "b"}, bad, {0, 1, 2}), InputError);
  std::vector<std::vector<int>> z2{{0, 1}, {1, 0}};
  EXPECT_NO_THROW(Group::table({"e", "a"}, z2, {0, 1}));
  EXPECT_THROW(Group::table({"e", "a"}, z2, {0, 0}), InputError);
}

TEST(Group, LengthValidation) {
  EXPECT_THROW(Group::cyclic(3, std::vector<Rational>{1, 1, 1}), InputError);   // f(e) ≠ 0
  EXPECT_THROW(Group::cyclic(3, std::vector<Rational>{0, 1, 2}), InputError);   // not symmetric
  EXPECT_THROW(Group::cyclic(4, std::vector<Rational>{0, 1, 5, 1}), InputError);  // triangle fails
  EXPECT_NO_THROW(Group::cyclic(4, std::vector<Rational>{0, 1, 1, 1}));
}

TEST(Group, FormatAndParse) {
  auto s3 = symmetric_group_3();
  for (const auto& g : s3->elements()) EXPECT_EQ(s3->parse(s3->format(g)), g);
  auto q = Group::rationals();
  EXPECT_EQ(q->parse("-3/6"), GroupElement(Rational(-1, 2)));
  EXPECT_THROW(Group::cyclic(2)->parse("5"), InputError);
}
