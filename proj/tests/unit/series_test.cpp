#include <gtest/gtest.h>

#include "wittdeform/series.hpp"

using namespace wd;

namespace {

const unsigned kX = var_bit(Var::X);
const unsigned kY = var_bit(Var::Y);
const unsigned kT = var_bit(Var::T);

TruncSeries S(const Ring& r, const std::string& text, unsigned vars, unsigned cap) {
  return TruncSeries::parse(r, text, vars, cap);
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::Io;
}

TruncSeries sample_series(const Ring& r, unsigned vars, unsigned cap, std::uint64_t seed, bool unit_const) {
  SamplePolicy pol;
  pol.coeff_bound = 3;
  pol.den_bound = 3;
  TruncSeries s(r, vars, cap);
  std::uint64_t k = seed * 97;
  for (unsigned i = 0; i <= cap; ++i)
    for (unsigned j = 0; i + j <= cap; ++j) {
      if (!(vars & kY) && j > 0) continue;
      std::array<uint16_t, kSeriesVars> e{};
      e[1] = uint16_t(i);
      e[2] = uint16_t(j);
      s.set(SMono::of(e), sample(r, k++, pol));
    }
  s.set(SMono{}, unit_const ? r->one() : r->zero());
  return s;
}

}  // namespace

TEST(Series, MulAndInv) {
  auto q = ring_make("rat:2");
  EXPECT_EQ(S(q, "1 + X", kX, 4) * S(q, "1 + (-1)*X", kX, 4), S(q, "1 + (-1)*X^2", kX, 4));
  EXPECT_EQ(s_inv(S(q, "1 + X", kX, 3)), S(q, "(1) + (-1)*X + (1)*X^2 + (-1)*X^3", kX, 3));
  auto z4 = ring_make("zmod:4");
  auto f = S(z4, "1 + (2)*X", kX, 2);
  EXPECT_EQ(s_inv(f), S(z4, "1 + (2)*X", kX, 2));
  EXPECT_TRUE((f * s_inv(f)).constant_term().is_one());
  EXPECT_EQ(code_of([&] { s_inv(S(z4, "(2) + X", kX, 2)); }), Errc::NonUnitConstantTerm);
  EXPECT_EQ(code_of([&] { (void)(S(q, "X", kX, 2) * S(q, "X", kX, 3)); }), Errc::CapMismatch);
}

TEST(Series, LiteralRoundTrip) {
  auto l = ring_make("laurent:p=2;gens=U,L;laurent=L");
  auto f = S(l, "(U) + (U^2 - 1/2*L^-1)*X^2*Y + (3)*Y^3", kX | kY, 5);
  EXPECT_EQ(S(l, f.str(), kX | kY, 5), f);
  EXPECT_EQ(S(l, "0", kX, 3).str(), "0");
  EXPECT_EQ(code_of([&] { S(l, "(1) + * X", kX, 3); }), Errc::ParseError);
  auto q = ring_make("rat:2");
  EXPECT_EQ(S(q, "-1 + 2*X - (1/3)*X^2", kX, 3), S(q, "(-1) + (2)*X + (-1/3)*X^2", kX, 3));
}

TEST(Series, Substitution) {
  auto q = ring_make("rat:2");
  auto g = S(q, "X + (5)*X^3", kX, 6);
  EXPECT_EQ(s_subst(S(q, "T", kT, 6), g), g);
  EXPECT_EQ(s_subst(S(q, "1 + T^2", kT, 4), S(q, "X + X^2", kX, 4)), S(q, "1 + X^2 + (2)*X^3 + X^4", kX, 4));
  auto f2 = ring_make("zmod:2");
  auto f = S(f2, "1 + T + T^3", kT, 8);
  auto out = s_subst(f, S(f2, "X^2", kX, 8));
  EXPECT_EQ(out, S(f2, "1 + X^2 + X^6", kX, 8));
  EXPECT_EQ(code_of([&] { s_subst(f, S(f2, "1 + X", kX, 8)); }), Errc::NonzeroConstantTerm);
}

TEST(Series, BinomPow) {
  auto q = ring_make("rat:2");
  auto f = S(q, "1 + X", kX, 4);
  EXPECT_EQ(s_binom_pow(f, q->one()), f);
  EXPECT_EQ(s_binom_pow(f, q->from_int(2)), f * f);
  auto l = ring_make("laurent:p=2;gens=U,L;laurent=L");
  auto b = s_binom_pow(S(l, "1 + (L)*X", kX, 2), l->parse("U*L^-1"));
  EXPECT_EQ(b.coeff(SMono::power(Var::X, 2)), l->parse("U*(U-L)/2"));
  auto z4 = ring_make("zmod:4");
  EXPECT_EQ(code_of([&] { s_binom_pow(S(z4, "1 + X", kX, 3), z4->from_int(3)); }), Errc::NonInvertibleFactorial);
  EXPECT_EQ(code_of([&] { s_binom_pow(S(q, "(2) + X", kX, 3), q->from_int(3)); }), Errc::NonUnitBase);
}

TEST(Series, ExpLog) {
  auto q = ring_make("rat:2");
  EXPECT_TRUE(s_exp(TruncSeries(q, kX, 5)).constant_term().is_one());
  EXPECT_EQ(s_log(s_exp(S(q, "X", kX, 7))), S(q, "X", kX, 7));
  // Artin-Hasse for p=2: exp(X + X^2/2 + X^4/4) = 1 + X + X^2 + 2/3 X^3 + ...
  auto ah = s_exp(S(q, "X + (1/2)*X^2 + (1/4)*X^4", kX, 4));
  EXPECT_EQ(ah, S(q, "1 + X + X^2 + (2/3)*X^3 + (2/3)*X^4", kX, 4));
  for (const auto& [m, c] : ah.coeffs()) EXPECT_TRUE(is_p_integral(c));
  EXPECT_EQ(code_of([] { s_exp(S(ring_make("zmod:4"), "X", kX, 3)); }), Errc::UnsupportedCtx);
}

TEST(Series, PsiAdicExpand) {
  auto z4 = ring_make("zmod:4");
  auto psi = S(z4, "X + X^2", kX, 6);
  auto e = psi_adic_expand(psi, psi, 6);
  ASSERT_EQ(e.status, ExpandStatus::Unique);
  EXPECT_TRUE(e.solutions[0][1].is_one());
  EXPECT_TRUE(e.solutions[0][0].is_zero());
  auto g = S(z4, "(3) + (2)*X + X^5", kX, 6);
  auto e2 = psi_adic_expand(g, psi, 6);
  ASSERT_EQ(e2.status, ExpandStatus::Unique);
  TruncSeries back(z4, kX, 6);
  TruncSeries pk = TruncSeries::constant(z4->one(), kX, 6);
  for (const auto& d : e2.solutions[0]) {
    back = back + pk.scaled(d);
    pk = pk * psi;
  }
  EXPECT_EQ(back, g);
  auto f2 = ring_make("zmod:2");
  EXPECT_EQ(psi_adic_expand(S(f2, "X", kX, 4), S(f2, "X^2", kX, 4), 4).status, ExpandStatus::Unsolvable);
  auto amb = psi_adic_expand(S(z4, "(2)*X", kX, 4), S(z4, "(2)*X", kX, 4), 4);
  EXPECT_EQ(amb.status, ExpandStatus::Ambiguous);
}

TEST(Properties, CompositionAssociative) {
  auto q = ring_make("rat:2");
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto f = sample_series(q, kX, 6, s, true);
    TruncSeries fT(q, kT, 6);
    for (auto& [m, c] : f.coeffs()) fT.set(SMono::power(Var::T, m.deg), c);
    auto g = sample_series(q, kX, 6, s + 50, false);
    TruncSeries gT(q, kT, 6);
    for (auto& [m, c] : g.coeffs()) gT.set(SMono::power(Var::T, m.deg), c);
    auto h = sample_series(q, kX, 6, s + 90, false);
    EXPECT_EQ(s_subst(s_subst(fT, gT), h), s_subst(fT, s_subst(gT, h)));
  }
}

TEST(Properties, BinomPowAndLogHomomorphisms) {
  auto q = ring_make("rat:3");
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto f = sample_series(q, kX | kY, 5, s, true);
    auto g = sample_series(q, kX | kY, 5, s + 40, true);
    RingElem c = q->parse("2/3"), c2 = q->from_int(-5);
    EXPECT_EQ(s_binom_pow(f, c + c2), s_binom_pow(f, c) * s_binom_pow(f, c2));
    EXPECT_EQ(s_log(f * g), s_log(f) + s_log(g));
    auto a = sample_series(q, kX | kY, 5, s + 80, false);
    auto b = sample_series(q, kX | kY, 5, s + 120, false);
    EXPECT_EQ(s_exp(a + b), s_exp(a) * s_exp(b));
  }
}

TEST(Properties, CapMonotonicity) {
  auto q = ring_make("rat:2");
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto f = sample_series(q, kX | kY, 8, s, true);
    auto g = sample_series(q, kX | kY, 8, s + 7, true);
    EXPECT_EQ((f * g).truncated(5), f.truncated(5) * g.truncated(5));
    EXPECT_EQ(s_inv(f).truncated(5), s_inv(f.truncated(5)));
    EXPECT_EQ(s_log(f).truncated(4), s_log(f.truncated(4)));
  }
}

TEST(Properties, PsiExpansionReproduces) {
  auto eps = ring_make("polyquot:zmod:2;e^2");
  auto psi = S(eps, "(e)*X + X^2", kX, 8);
  unsigned ok = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto g = sample_series(eps, kX, 8, s, true);
    auto e = psi_adic_expand(g, psi, 8);
    for (const auto& d : e.solutions) {
      TruncSeries back(eps, kX, 8);
      TruncSeries pk = TruncSeries::constant(eps->one(), kX, 8);
      for (const auto& c : d) {
        back = back + pk.scaled(c);
        pk = pk * psi;
      }
      EXPECT_EQ(back, g);
      ++ok;
    }
  }
  SUCCEED() << ok << " expansions checked";
}
