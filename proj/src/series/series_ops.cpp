#include <algorithm>

#include "wittdeform/series.hpp"

namespace wd {

namespace {

Var single_var(const TruncSeries& f) {
  unsigned used = 0;
  for (const auto& [m, c] : f.coeffs())
    for (std::size_t i = 0; i < kSeriesVars; ++i)
      if (m.e[i]) used |= 1u << i;
  if (used == 0) used = f.vars();
  for (std::size_t i = 0; i < kSeriesVars; ++i)
    if (used == (1u << i)) return Var(i);
  if (used == 0) return Var::T;
  throw Error(Errc::UnsupportedCtx, "expected a univariate series");
}

RingElem inverse_of_n(const Ring& r, unsigned n) {
  try {
    return r->from_rational(Rational(1, n));
  } catch (const Error&) {
    throw Error(Errc::NonInvertibleFactorial, std::to_string(n) + " is not invertible in " + r->describe());
  }
}

std::vector<RingElem> dense(const TruncSeries& f, unsigned cap) {
  std::vector<RingElem> out(cap + 1, f.ring()->zero());
  for (const auto& [m, c] : f.coeffs())
    if (m.deg <= cap) out[m.deg] = c;
  return out;
}

}  // namespace

TruncSeries s_subst(const TruncSeries& f, const TruncSeries& g) {
  require_same_ring(f.ring(), g.ring(), "s_subst");
  if (!g.constant_term().is_zero()) throw Error(Errc::NonzeroConstantTerm, "substituted series has g(0) != 0");
  if (g.cap() < f.cap())
    throw Error(Errc::CapMismatch, "inner series cap " + std::to_string(g.cap()) + " below " + std::to_string(f.cap()));
  single_var(f);
  TruncSeries gg = g.truncated(f.cap());
  auto fc = dense(f, f.cap());
  TruncSeries acc(f.ring(), g.vars(), f.cap());
  for (unsigned d = f.cap() + 1; d-- > 0;) {
    acc = acc * gg;
    acc.add_to(SMono{}, fc[d]);
  }
  return acc;
}

TruncSeries s_subst_multi(const TruncSeries& f, const std::map<Var, TruncSeries>& subs, unsigned out_cap) {
  unsigned vars = f.vars();
  for (const auto& [v, g] : subs) {
    require_same_ring(f.ring(), g.ring(), "s_subst_multi");
    if (!g.constant_term().is_zero()) throw Error(Errc::NonzeroConstantTerm, "substituted series has g(0) != 0");
    if (g.cap() < out_cap)
      throw Error(Errc::CapMismatch, "inner series cap " + std::to_string(g.cap()) + " below " + std::to_string(out_cap));
    vars &= ~var_bit(v);
  }
  for (const auto& [v, g] : subs) vars |= g.vars();
  // Cached powers of each substituted series (and of kept variables).
  std::array<std::vector<TruncSeries>, kSeriesVars> pw;
  std::array<unsigned, kSeriesVars> ord{};
  for (std::size_t i = 0; i < kSeriesVars; ++i) {
    auto it = subs.find(Var(i));
    TruncSeries base = it != subs.end() ? it->second.truncated(out_cap).with_vars(vars)
                                        : TruncSeries::variable(f.ring(), Var(i), vars, out_cap);
    ord[i] = base.order().value_or(out_cap + 1);
    pw[i].push_back(TruncSeries::constant(f.ring()->one(), vars, out_cap));
    pw[i].push_back(base);
  }
  auto power = [&](std::size_t i, unsigned k) -> const TruncSeries& {
    while (pw[i].size() <= k) pw[i].push_back(pw[i].back() * pw[i][1]);
    return pw[i][k];
  };
  TruncSeries acc(f.ring(), vars, out_cap);
  for (const auto& [m, c] : f.coeffs()) {
    unsigned low = 0;
    for (std::size_t i = 0; i < kSeriesVars; ++i) low += m.e[i] * ord[i];
    if (low > out_cap) continue;
    TruncSeries term = TruncSeries::constant(c, vars, out_cap);
    for (std::size_t i = 0; i < kSeriesVars; ++i)
      if (m.e[i]) term = term * power(i, m.e[i]);
    acc = acc + term;
  }
  return acc;
}

TruncSeries s_binom_pow(const TruncSeries& f, const RingElem& c) {
  require_same_ring(f.ring(), c.ring(), "s_binom_pow");
  const Ring& r = f.ring();
  if (!f.constant_term().is_one()) throw Error(Errc::NonUnitBase, "base series must have constant term 1");
  TruncSeries u = f - TruncSeries::constant(r->one(), f.vars(), f.cap());
  TruncSeries acc = TruncSeries::constant(r->one(), f.vars(), f.cap());
  TruncSeries un = acc;
  RingElem binom = r->one();
  for (unsigned n = 1; n <= f.cap(); ++n) {
    un = un * u;
    if (un.is_zero()) break;
    binom = binom * (c - r->from_int(long(n) - 1)) * inverse_of_n(r, n);
    acc = acc + un.scaled(binom);
  }
  return acc;
}

TruncSeries s_exp(const TruncSeries& f) {
  const Ring& r = f.ring();
  if (!r->contains_q()) throw Error(Errc::UnsupportedCtx, "s_exp needs a ring containing Q, got " + r->describe());
  if (!f.constant_term().is_zero()) throw Error(Errc::NonzeroConstantTerm, "s_exp needs f(0) = 0");
  const unsigned D = f.cap();
  std::vector<TruncSeries> F, E;
  for (unsigned k = 0; k <= D; ++k) F.push_back(f.slice(k));
  E.push_back(TruncSeries::constant(r->one(), f.vars(), D));
  // n E_n = sum_{k=1}^n k F_k E_{n-k}
  for (unsigned n = 1; n <= D; ++n) {
    TruncSeries s(r, f.vars(), D);
    for (unsigned k = 1; k <= n; ++k)
      if (!F[k].is_zero() && !E[n - k].is_zero()) s = s + (F[k] * E[n - k]).scaled(r->from_int(k));
    E.push_back(s.scaled(inverse_of_n(r, n)));
  }
  TruncSeries out(r, f.vars(), D);
  for (auto& e : E) out = out + e;
  return out;
}

TruncSeries s_log(const TruncSeries& f) {
  const Ring& r = f.ring();
  if (!r->contains_q()) throw Error(Errc::UnsupportedCtx, "s_log needs a ring containing Q, got " + r->describe());
  if (!f.constant_term().is_one()) throw Error(Errc::NonUnitConstantTerm, "s_log needs f(0) = 1");
  const unsigned D = f.cap();
  std::vector<TruncSeries> F, L;
  for (unsigned k = 0; k <= D; ++k) F.push_back(f.slice(k));
  L.push_back(TruncSeries(r, f.vars(), D));
  // L_n = f_n - (1/n) sum_{k=1}^{n-1} k L_k f_{n-k}
  for (unsigned n = 1; n <= D; ++n) {
    TruncSeries s(r, f.vars(), D);
    for (unsigned k = 1; k < n; ++k)
      if (!L[k].is_zero() && !F[n - k].is_zero()) s = s + (L[k] * F[n - k]).scaled(r->from_int(k));
    L.push_back(F[n] - s.scaled(inverse_of_n(r, n)));
  }
  TruncSeries out(r, f.vars(), D);
  for (auto& l : L) out = out + l;
  return out;
}

PsiExpansion psi_adic_expand(const TruncSeries& g, const TruncSeries& psi, unsigned kmax, std::size_t budget) {
  require_same_ring(g.ring(), psi.ring(), "psi_adic_expand");
  const Ring& r = g.ring();
  if (!psi.constant_term().is_zero()) throw Error(Errc::NonzeroConstantTerm, "psi(0) != 0");
  const unsigned D = g.cap();
  PsiExpansion out;
  auto gc = dense(g, D);
  auto ord = psi.order();
  if (!ord) {
    bool constant = true;
    for (unsigned n = 1; n <= D; ++n) constant = constant && gc[n].is_zero();
    if (!constant) {
      out.detail = "psi is zero and g is not constant";
      return out;
    }
    out.status = ExpandStatus::Unique;
    out.solutions.push_back({gc[0]});
    return out;
  }
  const unsigned rr = *ord;
  const unsigned K = std::min(kmax, D / rr);
  TruncSeries ps = psi.truncated(D).with_vars(g.vars());
  std::vector<std::vector<RingElem>> P;
  TruncSeries pk = TruncSeries::constant(r->one(), ps.vars(), D);
  for (unsigned k = 0; k <= K; ++k) {
    P.push_back(dense(pk, D));
    pk = pk * ps;
  }
  std::vector<RingElem> elems;
  if (r->is_finite()) elems = r->elements();

  std::vector<RingElem> d(K + 1, r->zero());
  std::size_t nodes = 0;
  bool free_unknown = false;
  bool exhausted = false;

  std::function<void(unsigned, unsigned)> dfs = [&](unsigned n, unsigned assigned) {
    if (exhausted) return;
    if (++nodes > budget) {
      exhausted = true;
      return;
    }
    if (n > D) {
      out.solutions.push_back(d);
      return;
    }
    RingElem res = gc[n];
    for (unsigned j = 0; j < assigned; ++j)
      if (!P[j][n].is_zero()) res -= d[j] * P[j][n];
    bool fresh = n % rr == 0 && n / rr <= K && n / rr == assigned;
    if (!fresh) {
      if (res.is_zero()) dfs(n + 1, assigned);
      return;
    }
    const unsigned k = assigned;
    const RingElem& lead = P[k][n];
    if (auto li = try_inv(lead)) {
      d[k] = res * *li;
      dfs(n + 1, assigned + 1);
    } else if (r->is_finite()) {
      for (const auto& c : elems) {
        if (!(lead * c == res)) continue;
        d[k] = c;
        dfs(n + 1, assigned + 1);
        if (exhausted) return;
      }
    } else if (lead.is_zero()) {
      if (!res.is_zero()) return;
      free_unknown = true;
      d[k] = r->zero();
      dfs(n + 1, assigned + 1);
    } else if (auto q = exact_div(res, lead)) {
      d[k] = *q;
      dfs(n + 1, assigned + 1);
    }
    d[k] = r->zero();
  };
  dfs(0, 0);

  if (exhausted) {
    out.status = ExpandStatus::BudgetExceeded;
    out.detail = "search budget of " + std::to_string(budget) + " nodes exhausted";
  } else if (out.solutions.empty()) {
    out.status = ExpandStatus::Unsolvable;
    out.detail = "no expansion up to degree " + std::to_string(D);
  } else if (out.solutions.size() == 1 && !free_unknown) {
    out.status = ExpandStatus::Unique;
  } else {
    out.status = ExpandStatus::Ambiguous;
    out.detail = std::to_string(out.solutions.size()) + " expansions" + (free_unknown ? " (free coefficient)" : "");
  }
  return out;
}

}  // namespace wd
