#include <algorithm>
#include <set>

#include "wittdeform/cohomlab.hpp"

namespace wd {

namespace {

unsigned long ipow(unsigned long b, std::size_t e) {
  unsigned long r = 1;
  while (e--) r *= b;
  return r;
}

/// Degrees below p^m only see the first m Witt components.
unsigned truncation_cap(const Scenario& scn) {
  return unsigned(std::min<unsigned long>(scn.D, ipow(scn.p, scn.m) - 1));
}

Verdict differ(const std::string& what, const WittVec& x, const TruncSeries& a, const TruncSeries& b) {
  if (auto d = first_difference(a, b)) return Verdict::fail(what + " at " + x.str() + ": " + *d);
  return Verdict::pass();
}

/// Lowest degree of psi with a unit coefficient: a degree-d term of a cocycle
/// first shows up in its pullback near degree d times this.
unsigned unit_order(const PsiPoly& psi) {
  for (unsigned j = 1; j < psi.coeff.size(); ++j)
    if (is_unit(psi.coeff[j])) return j;
  return psi.degree();
}

}  // namespace

Verdict diagram_checks(const Scenario& scn, const Budgets& b) {
  const unsigned cap = truncation_cap(scn);
  TruncSeries psi = scn.psi.series(cap);
  Verdict out = Verdict::pass();

  // Series square on Ker F^(mu): psi^* E_p(u, mu) = E_p(T_a u, lambda).
  auto kmu = stable_kernels(scn, b).mu;
  for (const auto& u : kmu) {
    WittVec tu = t_map(scn.a, u);
    if (!f_lambda(scn.lambda, tu).is_zero()) return Verdict::fail("T_a(" + u.str() + ") is not in Ker F^(lambda)");
    merge(out, differ("kernel square", u, s_subst(ep_vec(u, scn.mu, cap), psi), ep_vec(tu, scn.lambda, cap)));
    if (out.failed()) return out;
  }

  // Restriction to N_l against the pairing on the class of v.
  std::string pairing_note = "restriction square skipped (pairing hypotheses fail)";
  bool hyp = scn.ring->is_finite() && scn.nu.front().is_zero();
  std::optional<FiniteKernelAlg> alg;
  if (hyp) {
    try {
      alg.emplace(nl_algebra(scn));
    } catch (const Error& e) {
      if (e.code() != Errc::HypothesisViolated) throw;
    }
  }
  if (alg && alg->nilpotency_index() && ipow(scn.p, scn.m) >= *alg->nilpotency_index()) {
    const unsigned ncap = *alg->nilpotency_index() - 1;
    ExactSeq es = exact_seq_check(scn, b);
    merge(out, es.verdict);
    if (out.failed()) return out;
    // The representative of pi(v) differs from v by an element of Im T_a.
    auto klam = kernel_enum(KernelOp::FLambda, scn, b);
    std::set<std::string> im_t;
    for (const auto& w : scenario_vectors(scn, scn.m, "w", b)) im_t.insert(t_map(scn.a, w).str());
    std::vector<FiniteKernelAlg::Elem> rep_e;
    for (const auto& r : es.m_l_reps) rep_e.push_back(cartier_pairing(r, *alg, scn, b).e);
    for (const auto& v : klam) {
      auto ev = alg->from_series(ep_vec(v, scn.lambda, ncap));
      bool found = false;
      for (std::size_t i = 0; i < es.m_l_reps.size() && !found; ++i) {
        if (!im_t.count(witt_sub(v, es.m_l_reps[i]).str())) continue;
        found = true;
        if (ev != rep_e[i]) return Verdict::fail("restriction square at " + v.str() + ": class representative " +
                                                 es.m_l_reps[i].str() + " pairs differently");
      }
      if (!found) return Verdict::fail(v.str() + " lies in no class of M_l");
    }
    pairing_note = "restriction square on " + std::to_string(klam.size()) + " kernel vectors";
  }

  // Pullback square for every w: psi^* F_p(F^(mu) w, mu) = F_p(F^(lambda) T_a w, lambda).
  bool exhaustive = false;
  auto ws = scenario_vectors(scn, scn.m, "w", b, &exhaustive);
  for (const auto& w : ws) {
    Cocycle2 pb = pullback_psi({fp_vec(f_lambda(scn.mu, w), scn.mu, cap), scn.mu, cap}, scn.psi);
    TruncSeries rhs = fp_vec(f_lambda(scn.lambda, t_map(scn.a, w)), scn.lambda, cap);
    merge(out, differ("pullback square", w, pb.series.truncated(cap), rhs));
    if (out.failed()) return out;
  }
  if (out.ok())
    out.detail = "kernel square on " + std::to_string(kmu.size()) + " vectors, " + pairing_note + ", pullback square on " +
                 std::to_string(ws.size()) + (exhaustive ? " vectors (exhaustive)" : " sampled vectors") + ", cap " +
                 std::to_string(cap);
  return out;
}

DeskResult theorem_1_4_desk(const Scenario& scn, const Budgets& b) {
  const RingElem& nu0 = scn.nu.front();
  const bool nu0_zero = nu0.is_zero();
  if (!nu0_zero && !is_unit(nu0))
    throw Error(Errc::HypothesisViolated, "nu_0 = " + nu0.str() + " is neither 0 nor a unit");
  const unsigned D = scn.D;
  // The pullback is tested to degree R, which needs the cocycle to degree Dc.
  const unsigned R = unit_order(scn.psi) * D, ord = psi_order(scn.psi);
  const unsigned Dc = std::max(D, (R + ord) / ord - 1);
  DeskResult out;
  std::string first_fail, first_inconclusive;
  bool exhaustive = false;
  for (const auto& v : scenario_vectors(scn, scn.work_length(), "v", b, &exhaustive)) {
    ++out.cases;
    TruncSeries full = fp_vec(v, scn.mu, Dc);
    Cocycle2 c{full.truncated(D), scn.mu, D};
    Cocycle2 pb = pullback_psi({full, scn.mu, Dc}, scn.psi);
    pb = {pb.series.truncated(R), pb.lambda, R};
    auto mp = b2_membership(pb, b.branch, nu0_zero ? 16 : 1);
    if (mp.status == Membership::BudgetExceeded) {
      ++out.inconclusive;
      if (first_inconclusive.empty()) first_inconclusive = "pullback at " + v.str() + ": " + mp.detail;
      continue;
    }
    if (mp.status == Membership::NotCoboundaryWithinCap) {
      ++out.vacuous;
      continue;
    }
    auto mc = b2_membership(c, b.branch);
    if (mc.status == Membership::BudgetExceeded) {
      ++out.inconclusive;
      if (first_inconclusive.empty()) first_inconclusive = "cocycle at " + v.str() + ": " + mc.detail;
      continue;
    }
    if (mc.status == Membership::NotCoboundaryWithinCap) {
      ++out.failed;
      if (first_fail.empty())
        first_fail = "v = " + v.str() + ": pullback is a coboundary to degree " + std::to_string(pb.reliable) +
                     " but F_p(v, mu) is not one to degree " + std::to_string(D);
      continue;
    }
    ++out.confirmed;
    if (!nu0_zero) continue;
    // Descent: a generator H(T) = G(psi(T)) of the pullback yields G with coboundary(G, mu) = c.
    for (const auto& h : mp.generators) {
      auto ex = psi_adic_expand(h, scn.psi.series(Var::T, var_bit(Var::T), h.cap()), D, b.branch);
      bool descended = false;
      for (const auto& d : ex.solutions) {
        TruncSeries g(h.ring(), var_bit(Var::T), D);
        for (unsigned k = 0; k < d.size() && k <= D; ++k) g.set(SMono::power(Var::T, k), d[k]);
        if (!is_unit(g.constant_term())) continue;
        if (!first_difference(coboundary(g, scn.mu).series, c.series.truncated(D))) {
          descended = true;
          break;
        }
      }
      if (descended) {
        ++out.descents;
        break;
      }
    }
  }
  std::string counts = std::to_string(out.cases) + (exhaustive ? " vectors (exhaustive)" : " sampled vectors") + ": " +
                       std::to_string(out.confirmed) + " confirmed, " + std::to_string(out.vacuous) + " vacuous, " +
                       std::to_string(out.inconclusive) + " inconclusive, " + std::to_string(out.failed) + " failed";
  if (nu0_zero) counts += ", " + std::to_string(out.descents) + " descents through psi";
  if (out.failed) {
    out.verdict = Verdict::fail(first_fail + " (" + counts + ")");
  } else if (out.inconclusive * 5 >= out.cases && out.inconclusive > 0) {
    out.verdict = Verdict::inconclusive(counts + "; " + first_inconclusive);
  } else {
    out.verdict = Verdict::pass(counts);
  }
  return out;
}

}  // namespace wd
