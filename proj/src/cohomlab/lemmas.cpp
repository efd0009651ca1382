#include <algorithm>
#include <functional>

#include "wittdeform/cohomlab.hpp"

namespace wd {

namespace {

const unsigned kX = var_bit(Var::X);

unsigned work_length(const Scenario& scn) { return scn.work_length(); }

/// Runs check on every scenario vector; the first failure carries its witness.
Verdict over_vectors(const Scenario& scn, unsigned length, const std::string& prefix, const Budgets& b,
                     const std::function<Verdict(const WittVec&)>& check) {
  bool exhaustive = false;
  auto vs = scenario_vectors(scn, length, prefix, b, &exhaustive);
  Verdict out = Verdict::pass();
  for (const auto& v : vs) {
    Verdict one = check(v);
    if (!one.ok()) one.detail = prefix + " = " + v.str() + ": " + one.detail;
    merge(out, one);
    if (out.failed()) return out;
  }
  if (out.ok()) {
    out.detail = scn.universal ? "generic " + prefix + " of length " + std::to_string(length)
                               : std::to_string(vs.size()) + (exhaustive ? " vectors (exhaustive)" : " sampled vectors");
  }
  return out;
}

Verdict equal(const TruncSeries& lhs, const TruncSeries& rhs) {
  if (auto d = first_difference(lhs, rhs)) return Verdict::fail(*d);
  return Verdict::pass();
}

TruncSeries e_ratio(const TruncSeries& e, const RingElem& lambda) {
  TruncSeries t(e.ring(), var_bit(Var::T), e.cap());
  for (const auto& [m, c] : e.coeffs()) t.set(SMono::power(Var::T, m.deg), c);
  return coboundary(t, lambda).series;
}

Verdict lemma_4_1(const Scenario& scn, const Budgets& b) {
  if (!scn.ring->contains_q() || !is_unit(scn.mu))
    throw Error(Errc::UnsupportedCtx, "G_p is evaluated over a ring containing Q with lambda invertible");
  const unsigned D = scn.D;
  EPresentation e{teichmuller(scn.mu, scn.p, work_length(scn)), scn.mu, scn.psi.series(D)};
  TruncSeries one = TruncSeries::constant(scn.ring->one(), kX, D);
  return over_vectors(scn, work_length(scn), "v", b,
                      [&](const WittVec& x) { return equal(gp(x, scn.mu, e, D), one); });
}

Verdict lemma_4_2(const Scenario& scn, const Budgets& b) {
  const unsigned D = scn.D;
  TruncSeries psi = scn.psi.series(D);
  return over_vectors(scn, work_length(scn), "v", b, [&](const WittVec& v) {
    return equal(s_subst(ep_vec(v, scn.mu, D), psi), ep_vec(t_map(scn.a, v), scn.lambda, D));
  });
}

Verdict lemma_4_3(const Scenario& scn, const Budgets& b) {
  const unsigned D = scn.D;
  return over_vectors(scn, work_length(scn), "w", b, [&](const WittVec& w) {
    WittVec v = f_lambda(scn.mu, w);
    Cocycle2 pb = pullback_psi({fp_vec(v, scn.mu, D), scn.mu, D}, scn.psi);
    TruncSeries rhs = fp_vec(f_lambda(scn.lambda, t_map(scn.a, w)), scn.lambda, D);
    return equal(pb.series.truncated(std::min(D, pb.reliable)), rhs.truncated(std::min(D, pb.reliable)));
  });
}

Verdict cocycle_identity(const Scenario& scn, const Budgets& b) {
  const unsigned D = scn.D;
  return over_vectors(scn, work_length(scn), "v", b, [&](const WittVec& v) {
    Verdict out = Verdict::pass();
    for (const RingElem& lam : {scn.lambda, scn.mu}) {
      TruncSeries F = fp_vec(f_lambda(lam, v), lam, D);
      Verdict eq = equal(F, e_ratio(ep_vec(v, lam, D), lam));
      if (!eq.ok()) eq.detail = "E_p ratio at " + lam.str() + ": " + eq.detail;
      merge(out, eq);
      Verdict inv = cocycle_invariants({fp_vec(v, lam, D), lam, D}, b.cocycle_cap);
      if (!inv.ok()) inv.detail = "F_p(v, " + lam.str() + "): " + inv.detail;
      merge(out, inv);
    }
    return out;
  });
}

/// E_p(v, mu; psi(T)) expands psi-adically with the coefficients of E_p(v, mu; X).
Verdict lemma_4_5_roundtrip(const Scenario& scn, const Budgets& b) {
  const unsigned D = scn.D;
  TruncSeries psi = scn.psi.series(D);
  const unsigned K = D / psi_order(scn.psi);
  return over_vectors(scn, work_length(scn), "v", b, [&](const WittVec& v) {
    TruncSeries E = ep_vec(v, scn.mu, D);
    auto ex = psi_adic_expand(s_subst(E, psi), psi, K, b.branch);
    if (ex.status == ExpandStatus::BudgetExceeded) return Verdict::inconclusive("expansion budget exhausted");
    if (ex.status == ExpandStatus::Unsolvable) return Verdict::fail("not in A[[psi(T)]]: " + ex.detail);
    std::vector<RingElem> want;
    for (unsigned k = 0; k <= K; ++k) want.push_back(E.coeff(SMono::power(Var::X, k)));
    for (const auto& s : ex.solutions)
      if (std::equal(s.begin(), s.end(), want.begin(), want.end())) return Verdict::pass();
    return Verdict::fail("no expansion reproduces the coefficients of E_p(v, mu; X)");
  });
}

}  // namespace

Verdict verify_lemma(LemmaId id, const Scenario& scn, const Budgets& b) {
  switch (id) {
    case LemmaId::L4_1: return lemma_4_1(scn, b);
    case LemmaId::L4_2: return lemma_4_2(scn, b);
    case LemmaId::L4_3: return lemma_4_3(scn, b);
    case LemmaId::CocycleIdentity: return cocycle_identity(scn, b);
    case LemmaId::L4_5Roundtrip: return lemma_4_5_roundtrip(scn, b);
  }
  throw Error(Errc::ScenarioInvalid, "unknown lemma");
}

}  // namespace wd
