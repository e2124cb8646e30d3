#include <gtest/gtest.h>

#include <sstream>

#include "l0/script.hpp"

using namespace l0;

namespace {

std::string run(const std::string& script, int* asserts = nullptr) {
  std::ostringstream out;
  ScriptRunner r(out);
  int n = r.run(script);
  if (asserts) *asserts = n;
  return out.str();
}

const char* kPrelude = "atoms p q\ngroup G = cyclic 2\nphi card 1/2\n";

}  // namespace

TEST(Script, MetricAndGroupLaw) {
  int n = 0;
  std::string out = run(std::string(kPrelude) +
                            "a = pu {1:[p], 0:[q]}\n"
                            "assert dphi(a, id) == 1/2\n"
                            "assert mul(a, inv(a)) == id\n",
                        &n);
  EXPECT_EQ(n, 2);
  EXPECT_NE(out.find("a = {0:{q}, 1:{p}}"), std::string::npos);
  EXPECT_NE(out.find("ok: assert dphi(a, id) == 1/2"), std::string::npos);
}

TEST(Script, GammaDecompose) {
  int n = 0;
  run(std::string(kPrelude) +
          "c = pu {1:[p,q]}\n"
          "d = gamma_decompose(c, [p], [q])\n"
          "assert mul(d.0, d.1) == c\n"
          "assert gamma_contains([p], d.0); assert gamma_contains([q], d.1)\n",
      &n);
  EXPECT_EQ(n, 3);
}

TEST(Script, FailedAssertReportsSides) {
  try {
    run(std::string(kPrelude) + "a = pu {1:[p,q]}\nassert dphi(a, id) == 1/2\n");
    FAIL() << "expected AssertionFailure";
  } catch (const AssertionFailure& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("line 5"), std::string::npos);
    EXPECT_NE(msg.find("lhs = 1"), std::string::npos);
    EXPECT_NE(msg.find("rhs = 1/2"), std::string::npos);
  }
}

TEST(Script, ErrorsCarryLineNumbers) {
  try {
    run("atoms p q\ngroup G = cyclic 2\nx = pu {1:[p]}\n");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(run("atoms p q\nassert frob(1) == 1\n"), InputError);
  EXPECT_THROW(run("y = id\n"), InputError);
}

TEST(Script, LiftingAndOrder) {
  int n = 0;
  run("atoms p q\n"
      "group Z = int\n"
      "group G = cyclic 2\n"
      "phi card 1/2\n"
      "a = pu Z {3:[p], -2:[q]}\n"
      "assert pisharp(a) == pu {1:[p], 0:[q]}\n"
      "b = pu {1:[p], 0:[q]}\n"
      "assert fbullet(inv(b)) == fbullet(b)\n"
      "assert leq(fbullet(mul(b, b)), add(fbullet(b), fbullet(b)))\n"
      "f = posfn([1, -1])\n"
      "assert lift(f, b) == 0\n"
      "t = trap_decompose(b, 1/2)\n"
      "assert mul(t.0, t.1) == b\n",
      &n);
  EXPECT_EQ(n, 5);
}

TEST(Script, Comments) {
  int n = 0;
  run(std::string(kPrelude) + "# a comment line\nassert id == id # trailing\n", &n);
  EXPECT_EQ(n, 1);
}
