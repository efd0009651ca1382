#pragma once

// The deformed Artin-Hasse family and the isogeny psi of degree p^l.
//
// Series whose definitions divide by p or by powers of lambda are computed
// over a Laurent ring Q[..., L^{+-1}], certified to have coefficients in
// Z_(p)[...] and only then transported to a concrete ring by specialization.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wittdeform/series.hpp"
#include "wittdeform/verdict.hpp"
#include "wittdeform/wittcore.hpp"

namespace wd {

struct PsiPoly {
  unsigned p = 0;
  unsigned l = 0;
  RingElem lambda;
  std::vector<RingElem> nu;     // nu_0..nu_{l-1}
  std::vector<RingElem> coeff;  // coefficients of X^0..X^{p^l}; X^0 is 0, X^{p^l} is 1

  unsigned degree() const { return static_cast<unsigned>(coeff.size() - 1); }
  const Ring& ring() const { return lambda.ring(); }
  /// psi as a series in v with the given cap.
  TruncSeries series(Var v, unsigned vars, unsigned cap) const;
  TruncSeries series(unsigned cap) const { return series(Var::X, var_bit(Var::X), cap); }
};

/// Checks p^{l-k} lambda^{p^k} = nu_k lambda^{p^l} for every k (RelationViolated
/// naming k), the divisibility of each binomial (BinomialDivisibilityFailure
/// naming i) and, when lambda is not a zero divisor, the closed form
/// lambda^{p^l} psi = (1 + lambda X)^{p^l} - 1.
PsiPoly psi_build(unsigned p, unsigned l, const RingElem& lambda, const std::vector<RingElem>& nu);

/// nu_k = p^{l-k} lambda^{p^k - p^l}; needs lambda invertible.
std::vector<RingElem> universal_nu(unsigned p, unsigned l, const RingElem& lambda);

/// psi(X + Y + lambda XY) = psi(X) + psi(Y) + lambda^{p^l} psi(X) psi(Y), checked
/// at cap max(D, 2 p^l).
Verdict psi_hom_check(const PsiPoly& psi, unsigned D);

/// The composition law x*y = x + y + lambda xy.
struct DeformLaw {
  RingElem lambda;

  /// a + b + lambda ab for series in the same variables and cap.
  TruncSeries compose(const TruncSeries& a, const TruncSeries& b) const;
  /// a + b + lambda ab for the variables a, b.
  TruncSeries law(Var a, Var b, unsigned vars, unsigned cap) const;
  /// i(T) with T * i(T) = 0.
  TruncSeries inverse(unsigned cap) const;
  /// Associativity, unit and inverse as exact identities at cap.
  Verdict check(unsigned cap) const;
};

/// A series over the Laurent ring of its symbols together with the
/// integrality certificate (one entry per coefficient degree).
struct UniversalSeries {
  unsigned p = 0;
  unsigned cap = 0;
  Ring ring;
  TruncSeries series;
  std::vector<bool> certificate;
};

/// E_p(U, L; X) over symbols U, L up to degree D.
std::shared_ptr<const UniversalSeries> ep_universal(unsigned p, unsigned D);

/// F_p(v, L; X, Y) over symbols v0..v{K-1}, L up to total degree D, where
/// K = floor(log_p D) is the number of components that reach degree D.
std::shared_ptr<const UniversalSeries> fp_universal(unsigned p, unsigned D);

/// floor(log_p D): the Witt components that can affect a window of cap D
/// are those with index <= this.
unsigned window_log(unsigned p, unsigned D);

/// E_p(v, lambda; X) = prod_k E_p(v_k, lambda^{p^k}; X^{p^k}). Components of v
/// past its length count as 0.
TruncSeries ep_vec(const WittVec& v, const RingElem& lambda, unsigned D);

/// F_p(v, lambda; X, Y). Computed directly when the ring contains Q and lambda
/// is a unit, otherwise by specializing fp_universal.
TruncSeries fp_vec(const WittVec& v, const RingElem& lambda, unsigned D);
/// Always through the certified universal series.
TruncSeries fp_vec_specialized(const WittVec& v, const RingElem& lambda, unsigned D);

/// E given as E_p(u, lambda; arg) with arg defaulting to X.
struct EPresentation {
  WittVec u;
  RingElem lambda;
  std::optional<TruncSeries> arg;

  TruncSeries eval(unsigned D) const;
};

/// E_p(V^k(u^{(p^k)}), lambda; arg).
TruncSeries ptilde(unsigned k, const EPresentation& e, unsigned D);

/// G_p(v, mu; E). Needs a ring containing Q with mu a unit (UnsupportedCtx
/// otherwise) and a presented E (UnsupportedE when u is empty).
TruncSeries gp(const WittVec& v, const RingElem& mu, const EPresentation& e, unsigned D);

/// The series whose logarithm is
/// U sum (-1)^{n+1} L^{n-1} X^n / n + sum_k p^{-k}(U^{p^k} L^{-p^k} - U^{p^{k-1}} L^{-p^{k-1}})
///   sum_n (-1)^{n+1} L^{p^k n} X^{p^k n} / n,
/// an independent oracle for ep_universal.
TruncSeries ep_log_oracle(unsigned p, unsigned D);

}  // namespace wd
