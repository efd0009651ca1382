#include <gtest/gtest.h>

#include "wittdeform/ahdeform.hpp"

using namespace wd;

namespace {

const unsigned kX = var_bit(Var::X);
const unsigned kXY = var_bit(Var::X) | var_bit(Var::Y);

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::Io;
}

TruncSeries S(const Ring& r, const std::string& text, unsigned vars, unsigned cap) {
  return TruncSeries::parse(r, text, vars, cap);
}

Ring sym_ring(unsigned p) { return ring_make("laurent:p=" + std::to_string(p) + ";gens=x0,x1,x2,x3,L;laurent=L"); }

TruncSeries e_ratio(const TruncSeries& ex, const RingElem& lambda) {
  const Ring& r = lambda.ring();
  unsigned cap = ex.cap();
  TruncSeries x = TruncSeries::variable(r, Var::X, kXY, cap), y = TruncSeries::variable(r, Var::Y, kXY, cap);
  TruncSeries law = DeformLaw{lambda}.compose(x, y);
  TruncSeries ey(r, kXY, cap);
  for (const auto& [m, c] : ex.coeffs()) ey.set(SMono::power(Var::Y, m.deg), c);
  return ex.with_vars(kXY) * ey * s_inv(s_subst(ex, law));
}

}  // namespace

TEST(Psi, SymbolicExamples) {
  auto r = ring_make("laurent:p=2;gens=L;laurent=L");
  RingElem L = r->symbol("L");
  auto psi1 = psi_build(2, 1, L, universal_nu(2, 1, L));
  EXPECT_EQ(psi1.series(4), S(r, "(2*L^-1)*X + X^2", kX, 4));
  auto nu = universal_nu(2, 2, L);
  auto psi2 = psi_build(2, 2, L, nu);
  TruncSeries want(r, kX, 4);
  want.set(SMono::power(Var::X, 1), nu[0]);
  want.set(SMono::power(Var::X, 2), times_int(nu[1], 3));
  want.set(SMono::power(Var::X, 3), times_int(L * nu[1], 2));
  want.set(SMono::power(Var::X, 4), r->one());
  EXPECT_EQ(psi2.series(4), want);
}

TEST(Psi, ConcreteAndErrors) {
  auto z4 = ring_make("zmod:4");
  auto psi = psi_build(2, 2, z4->one(), {z4->zero(), z4->from_int(2)});
  EXPECT_EQ(psi.series(4), S(z4, "(2)*X^2 + X^4", kX, 4));
  try {
    psi_build(2, 2, z4->one(), {z4->zero(), z4->one()});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RelationViolated);
    EXPECT_NE(std::string(e.what()).find("k=1"), std::string::npos);
  }
  auto f2 = ring_make("zmod:2");
  EXPECT_EQ(psi_build(2, 1, f2->one(), {f2->zero()}).series(2), S(f2, "X^2", kX, 2));
}

TEST(Psi, HomomorphismLaw) {
  for (auto [p, l] : {std::pair{2u, 1u}, {2u, 2u}, {3u, 1u}}) {
    auto r = ring_make("laurent:p=" + std::to_string(p) + ";gens=L;laurent=L");
    RingElem L = r->symbol("L");
    auto psi = psi_build(p, l, L, universal_nu(p, l, L));
    EXPECT_TRUE(psi_hom_check(psi, 4).ok()) << p << " " << l << psi_hom_check(psi, 4).detail;
  }
  auto f2 = ring_make("zmod:2");
  EXPECT_TRUE(psi_hom_check(psi_build(2, 2, f2->zero(), {f2->one(), f2->one()}), 8).ok());
  auto z4 = ring_make("zmod:4");
  EXPECT_TRUE(psi_hom_check(psi_build(2, 2, z4->one(), {z4->zero(), z4->from_int(2)}), 8).ok());
}

TEST(DeformLawTest, GroupAxioms) {
  for (auto spec : {"zmod:4", "rat:2", "laurent:p=2;gens=L;laurent=L"}) {
    auto r = ring_make(spec);
    RingElem lam = r->kind() == RingKind::Laurent ? r->symbol("L") : r->from_int(3);
    EXPECT_TRUE(DeformLaw{lam}.check(6).ok()) << spec;
  }
}

TEST(ArtinHasse, UniversalCoefficients) {
  auto u = ep_universal(2, 6);
  const Ring& r = u->ring;
  EXPECT_TRUE(u->series.constant_term().is_one());
  EXPECT_EQ(u->series.coeff(SMono::power(Var::X, 1)), r->parse("U"));
  EXPECT_EQ(u->series.coeff(SMono::power(Var::X, 2)), r->parse("U*(U-L)"));
  for (bool ok : u->certificate) EXPECT_TRUE(ok);
  EXPECT_EQ(u->series, ep_log_oracle(2, 6));
  EXPECT_EQ(ep_universal(3, 9)->series, ep_log_oracle(3, 9));
}

TEST(ArtinHasse, ClassicalLimit) {
  for (unsigned p : {2u, 3u}) {
    auto q = ring_make("rat:" + std::to_string(p));
    auto u = ep_universal(p, 9);
    Specializer sp(u->ring, q, {{"U", q->one()}, {"L", q->zero()}});
    TruncSeries lg(q, kX, 9);
    for (unsigned long pr = 1; pr <= 9; pr *= p) lg.set(SMono::power(Var::X, unsigned(pr)), q->from_rational(Rational(1, pr)));
    EXPECT_EQ(u->series.map_coeffs(q, sp), s_exp(lg));
  }
}

TEST(ArtinHasse, VectorForm) {
  auto q = ring_make("rat:2");
  EXPECT_EQ(ep_vec(witt_zero(q, 2, 3), q->from_int(5), 6), TruncSeries::constant(q->one(), kX, 6));
  TruncSeries ah = s_exp(S(q, "X + (1/2)*X^2 + (1/4)*X^4", kX, 4));
  EXPECT_EQ(ep_vec(teichmuller(q->one(), 2, 3), q->zero(), 4), ah);
  auto r = sym_ring(2);
  RingElem mu = r->symbol("L");
  EXPECT_EQ(ep_vec(teichmuller(mu, 2, 4), mu, 10), S(r, "1 + (L)*X", kX, 10));
  // Closed exponent form (1 + lX)^{v0/l} prod (1 + l^{p^k} X^{p^k})^{Phi_{k-1}(F^(l) v) / p^k l^{p^k}}.
  auto v = generic_vec(r, 2, "x", 3);
  RingElem L = r->symbol("L");
  const unsigned D = 6;
  auto fv = ghost(f_lambda(L, pad(v, 4)));
  TruncSeries one = TruncSeries::constant(r->one(), kX, D), x = TruncSeries::variable(r, Var::X, kX, D);
  TruncSeries alt = s_binom_pow(one + x.scaled(L), v[0] * inv(L));
  for (unsigned k = 1, q2 = 2; q2 <= D; ++k, q2 *= 2)
    alt = alt * s_binom_pow(one + s_pow(x, q2).scaled(pow(L, q2)),
                            fv[k - 1] * inv(pow(L, q2)) * r->from_rational(Rational(1, q2)));
  EXPECT_EQ(ep_vec(v, L, D), alt);
}

TEST(Cocycle, FpSymmetryAndIdentity) {
  auto r = sym_ring(2);
  RingElem L = r->symbol("L");
  auto v = generic_vec(r, 2, "x", 4);
  const unsigned D = 6;
  TruncSeries F = fp_vec(f_lambda(L, v), L, D);
  TruncSeries swapped(r, kXY, D);
  for (const auto& [m, c] : F.coeffs()) {
    auto e = m.e;
    std::swap(e[1], e[2]);
    swapped.set(SMono::of(e), c);
  }
  EXPECT_EQ(F, swapped);
  EXPECT_EQ(F, e_ratio(ep_vec(v, L, D), L));
  EXPECT_EQ(F, fp_vec_specialized(f_lambda(L, v), L, D));
  EXPECT_EQ(fp_vec(witt_zero(r, 2, 3), L, D), TruncSeries::constant(r->one(), kXY, D));
}

TEST(Cocycle, FpConcrete) {
  for (auto spec : {"zmod:2", "zmod:4", "polyquot:zmod:2;e^2"}) {
    auto r = ring_make(spec);
    for (std::uint64_t s = 0; s < 6; ++s) {
      WittVec v(2, {sample(r, s), sample(r, s + 3), sample(r, s + 5), sample(r, 7 * s + 1)});
      RingElem lam = sample(r, s + 11);
      TruncSeries F = fp_vec(f_lambda(lam, v), lam, 8);
      EXPECT_TRUE(F.constant_term().is_one());
      EXPECT_EQ(F, e_ratio(ep_vec(v, lam, 8), lam)) << spec << " seed " << s;
    }
  }
}

TEST(Gp, TrivialAndLemmaInstance) {
  auto r = sym_ring(2);
  RingElem L = r->symbol("L");
  const unsigned D = 6;
  EXPECT_EQ(ptilde(0, {generic_vec(r, 2, "x", 2), L, {}}, D), ep_vec(generic_vec(r, 2, "x", 2), L, D));
  RingElem mu = pow(L, 2);
  EPresentation e{teichmuller(mu, 2, 3), mu, {}};
  EXPECT_EQ(ptilde(1, e, D), S(r, "1 + (L^4)*X^2", kX, D));
  EXPECT_EQ(ptilde(3, e, D), TruncSeries::constant(r->one(), kX, D));
  auto psi = psi_build(2, 1, L, universal_nu(2, 1, L));
  e.arg = psi.series(D);
  EXPECT_EQ(gp(witt_zero(r, 2, 3), mu, e, D), TruncSeries::constant(r->one(), kX, D));
  EXPECT_EQ(gp(generic_vec(r, 2, "x", 3), mu, e, D), TruncSeries::constant(r->one(), kX, D));
  auto z4 = ring_make("zmod:4");
  EXPECT_EQ(code_of([&] { gp(witt_zero(z4, 2, 2), z4->one(), {witt_zero(z4, 2, 2), z4->one(), {}}, 4); }),
            Errc::UnsupportedCtx);
  EXPECT_EQ(code_of([&] { gp(witt_zero(r, 2, 2), L, {WittVec{}, L, {}}, 4); }), Errc::UnsupportedE);
}

TEST(Properties, SpecializationCommutes) {
  auto r = sym_ring(2);
  for (auto spec : {"zmod:4", "zmod:8", "polyquot:zmod:2;e^2"}) {
    auto t = ring_make(spec);
    for (std::uint64_t s = 0; s < 5; ++s) {
      std::map<std::string, RingElem, std::less<>> b;
      for (auto n : {"x0", "x1", "x2", "x3", "L"}) b.emplace(n, sample(t, s * 13 + b.size()));
      b["L"] = t->one() + t->one() + t->one();  // a unit, so the Laurent ring maps
      Specializer sp(r, t, b);
      auto v = generic_vec(r, 2, "x", 3);
      RingElem L = r->symbol("L");
      WittVec vt(2, {b["x0"], b["x1"], b["x2"]});
      EXPECT_EQ(ep_vec(v, L, 7).map_coeffs(t, sp), ep_vec(vt, b["L"], 7)) << spec;
      EXPECT_EQ(fp_vec(v, L, 7).map_coeffs(t, sp), fp_vec(vt, b["L"], 7)) << spec;
    }
  }
}
