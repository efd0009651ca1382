#include <gtest/gtest.h>

#include <set>

#include "wittdeform/exactring.hpp"

using namespace wd;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::Io;
}

}  // namespace

TEST(RingMake, ParsesEachKind) {
  EXPECT_EQ(ring_make("zmod:4")->kind(), RingKind::ModRing);
  EXPECT_EQ(ring_make("int")->kind(), RingKind::Integers);
  EXPECT_EQ(ring_make("plocal:3")->prime(), 3u);
  auto q = ring_make("polyquot: base=plocal:2, modulus=T^2+T+1");
  EXPECT_EQ(q->kind(), RingKind::PolyQuotient);
  EXPECT_EQ(q->degree(), 2u);
  EXPECT_EQ(q->describe(), ring_make("polyquot:plocal:2;T^2+T+1")->describe());
  auto l = ring_make("laurent: p=2, gens=[U,Λ], laurent=[Λ]");
  EXPECT_EQ(l->gens().size(), 2u);
  EXPECT_TRUE(l->is_laurent_gen(1));
  EXPECT_EQ(ring_make("laurent:p=2;gens=U,L;laurent=L")->gens().size(), 2u);
}

TEST(RingMake, RejectsMalformed) {
  EXPECT_EQ(code_of([] { ring_make("zmod:1"); }), Errc::MalformedSpec);
  EXPECT_EQ(code_of([] { ring_make("plocal:4"); }), Errc::MalformedSpec);
  EXPECT_EQ(code_of([] { ring_make("polyquot:int;2*T^2+1"); }), Errc::MalformedSpec);
  EXPECT_EQ(code_of([] { ring_make("laurent:p=2;gens=a,b;subs=a=b+1,b=a*2"); }), Errc::MalformedSpec);
  EXPECT_EQ(code_of([] { ring_make("laurent:p=2;gens=a;subs=a=a+1"); }), Errc::MalformedSpec);
  EXPECT_EQ(code_of([] { ring_make("banana"); }), Errc::MalformedSpec);
}

TEST(RingMake, AcyclicSubstitutionsResolve) {
  auto r = ring_make("laurent:p=2;gens=a,b,c;subs=a=b+1,b=c*2");
  EXPECT_EQ(r->parse("a"), r->parse("2*c+1"));
}

TEST(Arith, ModularAndCyclotomic) {
  auto z4 = ring_make("zmod:4");
  EXPECT_EQ(z4->from_int(3) * z4->from_int(3), z4->one());
  auto r = ring_make("polyquot:plocal:3;T^2+T+1");
  RingElem z = r->var_class();
  RingElem one = r->one();
  EXPECT_EQ(pow(one - z, 2) * (one + z), r->from_int(3));
  auto l = ring_make("laurent:p=2;gens=U,L;laurent=L");
  EXPECT_TRUE((l->parse("L") * l->parse("L^-1")).is_one());
  EXPECT_EQ(code_of([&] { (void)(z4->one() + l->one()); }), Errc::CtxMismatch);
}

TEST(Arith, ParseErrorsCarryPosition) {
  auto z4 = ring_make("zmod:4");
  try {
    z4->parse("1 + * 2");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("position"), std::string::npos);
  }
  EXPECT_EQ(code_of([&] { z4->parse("x"); }), Errc::UnboundSymbol);
  EXPECT_EQ(code_of([&] { z4->parse("1/2"); }), Errc::NotIntegral);
  EXPECT_EQ(z4->parse("1/3"), z4->from_int(3));
}

TEST(Inv, Examples) {
  auto z4 = ring_make("zmod:4");
  EXPECT_EQ(inv(z4->from_int(3)), z4->from_int(3));
  EXPECT_EQ(code_of([&] { inv(z4->from_int(2)); }), Errc::NotAUnit);
  auto r = ring_make("polyquot:plocal:3;T^2+T+1");
  RingElem u = r->one() + r->var_class();
  EXPECT_TRUE((inv(u) * u).is_one());
  EXPECT_EQ(code_of([&] { inv(r->one() - r->var_class()); }), Errc::NotAUnit);
  auto f4 = ring_make("polyquot:zmod:2;T^2+T+1");
  for (const auto& x : f4->elements())
    if (!x.is_zero()) EXPECT_TRUE((inv(x) * x).is_one());
  auto eps = ring_make("polyquot:zmod:2;e^2");
  EXPECT_FALSE(is_unit(eps->var_class()));
  EXPECT_TRUE(is_zero_divisor(eps->var_class()));
}

TEST(PVal, Examples) {
  auto q2 = ring_make("rat:2");
  EXPECT_EQ(p_val(q2->parse("3/4")), -2);
  EXPECT_FALSE(is_p_integral(q2->parse("3/4")));
  EXPECT_EQ(p_val(q2->parse("5/3")), 0);
  EXPECT_TRUE(is_p_integral(q2->parse("5/3")));
  EXPECT_FALSE(p_val(q2->zero()).has_value());
  auto l = ring_make("laurent:p=2;gens=U,L;laurent=L");
  EXPECT_TRUE(is_p_integral(l->parse("U*(U-L)")));
  EXPECT_FALSE(is_p_integral(l->parse("U/2")));
  EXPECT_FALSE(is_p_integral(l->parse("U*L^-1")));
}

TEST(Specialize, Examples) {
  auto q = ring_make("rat:2");
  auto z4 = ring_make("zmod:4");
  EXPECT_EQ(specialize({}, z4, q->parse("1/3")), z4->from_int(3));
  EXPECT_EQ(code_of([&] { specialize({}, z4, q->parse("1/2")); }), Errc::NotIntegral);
  auto l = ring_make("laurent:p=2;gens=U,L;laurent=L");
  auto f2 = ring_make("zmod:2");
  std::map<std::string, RingElem, std::less<>> b{{"U", f2->one()}, {"L", f2->one()}};
  EXPECT_TRUE(specialize(b, f2, l->parse("U*(U-L)")).is_zero());
  EXPECT_EQ(code_of([&] { specialize({{"U", f2->one()}}, f2, l->parse("U*L")); }), Errc::UnboundSymbol);
}

TEST(Nilpotency, Examples) {
  auto z4 = ring_make("zmod:4");
  EXPECT_EQ(nilpotency_index(z4->from_int(2), 4), 2u);
  EXPECT_FALSE(nilpotency_index(ring_make("zmod:2")->one(), 4).has_value());
  auto r = ring_make("polyquot:zmod:4;X^4+2*X^2");
  RingElem x = r->var_class();
  // Least vanishing power is 6 (X^4 = 2X^2, X^6 = 4X^2); repeated squaring first vanishes at 8.
  EXPECT_EQ(nilpotency_index(x, 16), 6u);
  EXPECT_EQ(nilpotency_by_squaring(x, 16), 8u);
}

TEST(Sample, DeterministicAndCovering) {
  auto z4 = ring_make("zmod:4");
  EXPECT_EQ(sample(z4, 0), sample(z4, 0));
  auto eps = ring_make("polyquot:zmod:2;e^2");
  std::set<std::string> seen;
  for (std::uint64_t s = 0; s < 4; ++s) seen.insert(sample(eps, s).str());
  EXPECT_EQ(seen.size(), 4u);
  EXPECT_EQ(code_of([] { sample(RingCtx::integers(), 1); }), Errc::UnsupportedCtx);
  EXPECT_NO_THROW(sample(RingCtx::integers(), 1, SamplePolicy{}));
}

TEST(Properties, RingAxiomsOnSamples) {
  SamplePolicy pol;
  pol.den_bound = 5;
  for (auto spec : {"int", "plocal:2", "zmod:8", "zmod:9", "polyquot:zmod:2;e^2", "polyquot:plocal:3;T^2+T+1",
                    "laurent:p=2;gens=U,L;laurent=L"}) {
    Ring r = ring_make(spec);
    for (std::uint64_t s = 0; s < 60; ++s) {
      RingElem a = sample(r, 3 * s, pol), b = sample(r, 3 * s + 1, pol), c = sample(r, 3 * s + 2, pol);
      EXPECT_EQ((a * b) * c, a * (b * c)) << spec;
      EXPECT_EQ(a * b, b * a) << spec;
      EXPECT_EQ(a * (b + c), a * b + a * c) << spec;
      EXPECT_EQ(a + r->zero(), a) << spec;
      EXPECT_EQ(a * r->one(), a) << spec;
      EXPECT_TRUE((a - a).is_zero()) << spec;
      if (auto y = try_inv(a)) EXPECT_TRUE((*y * a).is_one()) << spec;
    }
  }
}

TEST(Properties, ValuationAndSpecializationHomomorphism) {
  SamplePolicy pol;
  pol.den_bound = 12;
  auto r = ring_make("plocal:2");
  for (std::uint64_t s = 0; s < 100; ++s) {
    RingElem x = sample(r, 2 * s, pol), y = sample(r, 2 * s + 1, pol);
    if (x.is_zero() || y.is_zero()) continue;
    EXPECT_EQ(*p_val(x * y), *p_val(x) + *p_val(y));
  }
  auto l = ring_make("laurent:p=3;gens=U,L;laurent=L");
  auto t = ring_make("polyquot:zmod:9;T^2+T+1");
  std::map<std::string, RingElem, std::less<>> b{{"U", t->parse("T+2")}, {"L", t->parse("T")}};
  pol.den_bound = 1;
  Specializer sp(l, t, b);
  for (std::uint64_t s = 0; s < 60; ++s) {
    RingElem x = sample(l, 2 * s, pol), y = sample(l, 2 * s + 1, pol);
    EXPECT_EQ(sp(x * y), sp(x) * sp(y));
    EXPECT_EQ(sp(x + y), sp(x) + sp(y));
    if (is_p_integral(x) && is_p_integral(y)) EXPECT_TRUE(is_p_integral(x * y));
  }
}
