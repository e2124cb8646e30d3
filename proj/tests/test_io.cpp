#include <gtest/gtest.h>

#include "l0/io.hpp"
#include "l0/random.hpp"

using namespace l0;

namespace {

void expect_same(const SetFunc& a, const SetFunc& b) {
  EXPECT_EQ(a.algebra()->atoms(), b.algebra()->atoms());
  EXPECT_EQ(a.values(), b.values());
}

SetFunc round_trip(const SetFunc& phi) {
  return setfunc_from_json(parse_json(canonical(setfunc_to_json(phi)), "rt"), "rt");
}

}  // namespace

TEST(Io, RationalStrings) {
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-2"), -2);
  EXPECT_EQ(to_string(Rational(-6, 4)), "-3/2");
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("abc"), InputError);
  EXPECT_THROW(parse_rational("0.5"), InputError);
  EXPECT_EQ(parse_complex("1/2-3i"), Complex(Rational(1, 2), -3));
  EXPECT_EQ(to_string(Complex(0, 1)), "0+1i");
}

TEST(Io, SetFuncRoundTrips) {
  Rng rng(3);
  auto alg = FiniteAlgebra::make({"p", "q", "r"});
  expect_same(round_trip(generate_copoints(4)), generate_copoints(4));
  expect_same(round_trip(SetFunc::measure(alg, {Rational(1, 2), 0, 3})), SetFunc::measure(alg, {Rational(1, 2), 0, 3}));
  SetFunc mx = random_max_of_measures(alg, rng, 3);
  expect_same(round_trip(mx), mx);
  SetFunc tb = random_monotone(alg, rng);
  expect_same(round_trip(tb), tb);
  auto src = FiniteAlgebra::make({"x", "y"});
  SetFunc pb = SetFunc::pullback(generate_copoints(3), random_vee_hom(src, generate_copoints(3).algebra(), rng));
  expect_same(round_trip(pb), pb);
  SetFunc cc = generate_concave_cardinality(3, {0, 1, 2, 2});
  expect_same(round_trip(cc), cc);
}

TEST(Io, CanonicalOutputIsStable) {
  SetFunc phi = generate_random_cover(4, 6, Rational(1, 2), 7);
  std::string a = canonical(setfunc_to_json(phi));
  std::string b = canonical(setfunc_to_json(round_trip(phi)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.back(), '\n');
}

TEST(Io, TableErrors) {
  auto parse = [](const std::string& s) { return setfunc_from_json(parse_json(s, "t"), "t"); };
  EXPECT_THROW(parse(R"({"atoms":["p"],"kind":"table","values":{"0":"1","1":"1"}})"), InputError);
  EXPECT_THROW(parse(R"({"atoms":["p","q"],"kind":"table","values":{"1":"1"}})"), InputError);
  EXPECT_THROW(parse(R"({"atoms":["p"],"kind":"table","values":{"9":"1","1":"1"}})"), InputError);
  EXPECT_THROW(parse(R"({"atoms":["p"],"kind":"wat"})"), InputError);
  EXPECT_THROW(parse(R"({"atoms":["p"],"kind":"measure","weights":{"z":"1"}})"), InputError);
  EXPECT_THROW(parse(R"({"atoms":["p"],"kind":"measure","weights":{"p":1}})"), InputError);
  EXPECT_THROW(parse_json("{", "t"), InputError);
  try {
    parse(R"({"atoms":["p"],"kind":"table","values":{"0":"1","1":"1"}})");
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("φ(0) ≠ 0"), std::string::npos);
  }
  auto ok = parse(R"({"atoms":["p","q"],"kind":"table","values":{"1":"1","2":"1","3":"3/2"}})");
  EXPECT_EQ(ok.eval(3), Rational(3, 2));
}

TEST(Io, CertificateRoundTrip) {
  SetFunc c3 = generate_copoints(3);
  DominationCertificate c = max_dominated_measure(c3);
  Json j = certificate_to_json(c3, c, true);
  EXPECT_EQ(j["M"], "3/2");
  EXPECT_EQ(j["kappa"], "3/4");
  DominationCertificate back = certificate_from_json(c3, parse_json(canonical(j), "c"), "c");
  EXPECT_EQ(back.value, c.value);
  EXPECT_EQ(back.primal, c.primal);
  EXPECT_EQ(verify_certificate(c3, back), "");
}

TEST(Io, KelleyAndWitnessRoundTrip) {
  SetFunc m2 = generate_concave_cardinality(3, {0, 1, 2, 2});
  KelleyMeasure k = kelley_greedy(m2, {2, 1, 0});
  KelleyMeasure kb = kelley_from_json(m2, kelley_to_json(m2, k, true));
  EXPECT_EQ(kb.order, k.order);
  EXPECT_EQ(kb.weights, k.weights);
  EXPECT_EQ(verify_kelley(m2, kb), "");
  kb.weights[0] += 1;
  EXPECT_NE(verify_kelley(m2, kb), "");

  SetFunc single = generate_ell_subsets_cover(4, 1);
  std::optional<ChristensenWitness> w;
  for (int k2 = 1; k2 < 20 && !w; ++k2) w = christensen_witness(SetFunc::measure(single.algebra(), {0, 0, 0, 0}), Rational(k2, 20));
  ASSERT_TRUE(w.has_value());
  SetFunc zero = SetFunc::measure(single.algebra(), {0, 0, 0, 0});
  ChristensenWitness wb = witness_from_json(zero, parse_json(canonical(witness_to_json(zero, *w)), "w"), "w");
  EXPECT_EQ(wb.m, w->m);
  EXPECT_EQ(wb.sets, w->sets);
  EXPECT_EQ(verify_witness(zero, wb), "");
}

TEST(Io, GroupsAndPuFuncs) {
  for (const GroupPtr& G : {Group::cyclic(4), Group::integers(), Group::rationals(), symmetric_group_3()}) {
    GroupPtr back = group_from_json(parse_json(canonical(group_to_json(*G)), "g"));
    EXPECT_TRUE(same_group(G, back));
  }
  auto alg = FiniteAlgebra::make({"p", "q"});
  auto s3 = symmetric_group_3();
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    PUFunc a = random_pufunc(alg, s3, s3->elements(), rng);
    PUFunc b = pufunc_from_json(parse_json(canonical(pufunc_to_json(a)), "a"), alg);
    EXPECT_EQ(a, b);
  }
  EXPECT_THROW(pufunc_from_json(parse_json(R"({"group":{"kind":"cyclic","order":2},"labels":{"0":["p"]}})", "a"), alg),
               InputError);
  EXPECT_THROW(group_from_json(parse_json(R"({"kind":"cyclic","order":3,"length":{"1":"1","2":"2"}})", "g")),
               InputError);
}
