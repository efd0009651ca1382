#include <algorithm>

#include "wittdeform/ahdeform.hpp"

namespace wd {

namespace {

unsigned long ipow(unsigned long b, unsigned e) {
  unsigned long r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TruncSeries PsiPoly::series(Var v, unsigned vars, unsigned cap) const {
  TruncSeries s(ring(), vars | var_bit(v), cap);
  for (unsigned i = 0; i < coeff.size(); ++i) s.set(SMono::power(v, i), coeff[i]);
  return s;
}

std::vector<RingElem> universal_nu(unsigned p, unsigned l, const RingElem& lambda) {
  RingElem li = inv(lambda);
  std::vector<RingElem> nu;
  const unsigned long q = ipow(p, l);
  for (unsigned k = 0; k < l; ++k) {
    RingElem n = pow(li, q - ipow(p, k));
    nu.push_back(times_int(n, long(ipow(p, l - k))));
  }
  return nu;
}

PsiPoly psi_build(unsigned p, unsigned l, const RingElem& lambda, const std::vector<RingElem>& nu) {
  if (l == 0) throw Error(Errc::ScenarioInvalid, "psi needs l >= 1");
  if (nu.size() != l)
    throw Error(Errc::LengthMismatch, "expected " + std::to_string(l) + " nu values, got " + std::to_string(nu.size()));
  const Ring& r = lambda.ring();
  const unsigned long q = ipow(p, l);
  const RingElem lq = pow(lambda, q);
  for (unsigned k = 0; k < l; ++k) {
    require_same_ring(nu[k].ring(), r, "psi_build nu");
    RingElem lhs = times_int(pow(lambda, ipow(p, k)), long(ipow(p, l - k)));
    if (!(lhs == nu[k] * lq))
      throw Error(Errc::RelationViolated, "k=" + std::to_string(k) + ": p^(l-k) lambda^(p^k) = " + lhs.str() +
                                              " but nu_k lambda^(p^l) = " + (nu[k] * lq).str());
  }
  PsiPoly psi{p, l, lambda, nu, std::vector<RingElem>(q + 1, r->zero())};
  for (unsigned long i = 1; i < q; ++i) {
    unsigned k = 0;
    while (ipow(p, k + 1) <= i) ++k;
    const unsigned long rr = i - ipow(p, k);
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), q, i);
    Integer d;
    mpz_ui_pow_ui(d.get_mpz_t(), p, l - k);
    if (b % d != 0)
      throw Error(Errc::BinomialDivisibilityFailure,
                  "i=" + std::to_string(i) + ": binom(" + std::to_string(q) + ", i) not divisible by " + d.get_str());
    psi.coeff[i] = r->from_integer(b / d) * pow(lambda, rr) * nu[k];
  }
  psi.coeff[q] = r->one();
  if (!is_zero_divisor(lambda)) {
    TruncSeries lhs = psi.series(unsigned(q)).scaled(lq);
    TruncSeries base = TruncSeries::constant(r->one(), var_bit(Var::X), unsigned(q)) +
                       TruncSeries::variable(r, Var::X, var_bit(Var::X), unsigned(q)).scaled(lambda);
    TruncSeries rhs = s_pow(base, q) - TruncSeries::constant(r->one(), var_bit(Var::X), unsigned(q));
    if (auto d = first_difference(lhs, rhs))
      throw Error(Errc::RelationViolated, "closed form lambda^(p^l) psi = (1 + lambda X)^(p^l) - 1 fails, " + *d);
  }
  return psi;
}

Verdict psi_hom_check(const PsiPoly& psi, unsigned D) {
  const unsigned cap = std::max(D, 2 * psi.degree());
  const unsigned xy = var_bit(Var::X) | var_bit(Var::Y);
  DeformLaw law{psi.lambda};
  TruncSeries px = psi.series(Var::X, xy, cap);
  TruncSeries py = psi.series(Var::Y, xy, cap);
  TruncSeries lhs = s_subst(psi.series(Var::T, var_bit(Var::T), cap), law.law(Var::X, Var::Y, xy, cap));
  TruncSeries rhs = px + py + (px * py).scaled(pow(psi.lambda, psi.degree()));
  if (auto d = first_difference(lhs, rhs)) return Verdict::fail(*d);
  return Verdict::pass("exact to degree " + std::to_string(cap));
}

TruncSeries DeformLaw::compose(const TruncSeries& a, const TruncSeries& b) const {
  return a + b + (a * b).scaled(lambda);
}

TruncSeries DeformLaw::law(Var a, Var b, unsigned vars, unsigned cap) const {
  const Ring& r = lambda.ring();
  return compose(TruncSeries::variable(r, a, vars, cap), TruncSeries::variable(r, b, vars, cap));
}

TruncSeries DeformLaw::inverse(unsigned cap) const {
  const Ring& r = lambda.ring();
  const unsigned t = var_bit(Var::T);
  TruncSeries x = TruncSeries::variable(r, Var::T, t, cap);
  return -(x * s_inv(TruncSeries::constant(r->one(), t, cap) + x.scaled(lambda)));
}

Verdict DeformLaw::check(unsigned cap) const {
  const Ring& r = lambda.ring();
  const unsigned xyz = var_bit(Var::X) | var_bit(Var::Y) | var_bit(Var::Z);
  TruncSeries x = TruncSeries::variable(r, Var::X, xyz, cap);
  TruncSeries y = TruncSeries::variable(r, Var::Y, xyz, cap);
  TruncSeries z = TruncSeries::variable(r, Var::Z, xyz, cap);
  if (auto d = first_difference(compose(compose(x, y), z), compose(x, compose(y, z))))
    return Verdict::fail("associativity: " + *d);
  if (auto d = first_difference(compose(x, TruncSeries(r, xyz, cap)), x)) return Verdict::fail("unit: " + *d);
  TruncSeries t = TruncSeries::variable(r, Var::T, var_bit(Var::T), cap);
  TruncSeries i = inverse(cap);
  if (!i.constant_term().is_zero()) return Verdict::fail("inverse has a constant term");
  if (auto d = first_difference(compose(t, i), TruncSeries(r, var_bit(Var::T), cap))) return Verdict::fail("inverse: " + *d);
  return Verdict::pass();
}

}  // namespace wd
