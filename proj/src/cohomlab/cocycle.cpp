#include <algorithm>

#include "wittdeform/cohomlab.hpp"

namespace wd {

namespace {

const unsigned kXY = var_bit(Var::X) | var_bit(Var::Y);
const unsigned kXYZ = kXY | var_bit(Var::Z);

SMono xy(unsigned i, unsigned j) {
  std::array<uint16_t, kSeriesVars> e{};
  e[1] = uint16_t(i);
  e[2] = uint16_t(j);
  return SMono::of(e);
}

/// f in one variable, renamed to v.
TruncSeries rename(const TruncSeries& f, Var v, unsigned vars) {
  TruncSeries out(f.ring(), vars | var_bit(v), f.cap());
  for (const auto& [m, c] : f.coeffs()) out.set(SMono::power(v, m.deg), c);
  return out;
}

TruncSeries swap_xy(const TruncSeries& f) {
  TruncSeries out(f.ring(), f.vars(), f.cap());
  for (const auto& [m, c] : f.coeffs()) {
    auto e = m.e;
    std::swap(e[1], e[2]);
    out.set(SMono::of(e), c);
  }
  return out;
}

/// Coefficients of X^i Y^(d-i), i = 0..d, of the degree-d part of f.
std::vector<RingElem> slice_xy(const TruncSeries& f, unsigned d) {
  std::vector<RingElem> out(d + 1, f.ring()->zero());
  for (unsigned i = 0; i <= d; ++i) out[i] = f.coeff(xy(i, d - i));
  return out;
}

TruncSeries generator(const Ring& r, const std::vector<RingElem>& f) {
  TruncSeries F(r, var_bit(Var::T), unsigned(f.size() - 1));
  for (unsigned d = 0; d < f.size(); ++d) F.set(SMono::power(Var::T, d), f[d]);
  return F;
}

/// Depth-first search for F with c F(X*Y) = F(X) F(Y) degree by degree. At
/// degree d the unknown f_d enters only through f_d (X^d + Y^d - (X+Y)^d).
class FiniteSearch {
 public:
  FiniteSearch(const Cocycle2& c, unsigned R, std::size_t budget, std::size_t max_gen)
      : r_(c.lambda.ring()), R_(R), budget_(budget), max_gen_(max_gen), elems_(r_->elements()) {
    TruncSeries cc = c.series.truncated(R).with_vars(kXY);
    TruncSeries law = DeformLaw{c.lambda}.law(Var::X, Var::Y, kXY, R);
    TruncSeries P = TruncSeries::constant(r_->one(), kXY, R);
    q_.resize(R + 1);
    for (unsigned j = 0; j <= R; ++j) {
      TruncSeries Q = cc * P;
      for (unsigned d = j; d <= R; ++d) q_[j].push_back(slice_xy(Q, d));
      P = P * law;
    }
    f_.assign(R + 1, r_->zero());
    f_[0] = r_->one();
  }

  MembershipResult run() {
    MembershipResult out;
    bool done = dfs(1);
    out.nodes = nodes_;
    out.generators = found_;
    if (!found_.empty()) {
      out.status = Membership::Coboundary;
      out.detail = std::to_string(found_.size()) + " generator(s)";
    } else if (!done && nodes_ > budget_) {
      out.status = Membership::BudgetExceeded;
      out.detail = "search budget of " + std::to_string(budget_) + " nodes exhausted";
    } else {
      out.status = Membership::NotCoboundaryWithinCap;
      out.detail = "no generator up to degree " + std::to_string(R_) + "; deepest degree reached " +
                   std::to_string(deepest_);
    }
    return out;
  }

 private:
  /// Returns true when the search finished (exhausted or enough generators).
  bool dfs(unsigned d) {
    if (d > R_) {
      found_.push_back(generator(r_, f_));
      return found_.size() >= max_gen_;
    }
    deepest_ = std::max(deepest_, d);
    std::vector<RingElem> rhs(d + 1, r_->zero());
    for (unsigned j = 0; j < d; ++j)
      if (!f_[j].is_zero())
        for (unsigned i = 0; i <= d; ++i) rhs[i] += f_[j] * q_[j][d - j][i];
    for (unsigned i = 1; i < d; ++i) rhs[i] -= f_[i] * f_[d - i];
    if (!rhs[0].is_zero() || !rhs[d].is_zero()) return false;
    std::vector<RingElem> b(d + 1, r_->zero());
    std::optional<RingElem> forced;
    for (unsigned i = 1; i < d; ++i) {
      Integer bin;
      mpz_bin_uiui(bin.get_mpz_t(), d, i);
      b[i] = -r_->from_integer(bin);
      if (!forced)
        if (auto bi = try_inv(b[i])) forced = rhs[i] * *bi;
    }
    auto fits = [&](const RingElem& x) {
      for (unsigned i = 1; i < d; ++i)
        if (!(x * b[i] == rhs[i])) return false;
      return true;
    };
    std::vector<RingElem> cands;
    if (forced) {
      if (fits(*forced)) cands.push_back(*forced);
    } else {
      for (const auto& x : elems_)
        if (fits(x)) cands.push_back(x);
    }
    for (const auto& x : cands) {
      if (++nodes_ > budget_) return false;
      f_[d] = x;
      if (dfs(d + 1)) return true;
      if (nodes_ > budget_) return false;
    }
    f_[d] = r_->zero();
    return false;
  }

  Ring r_;
  unsigned R_;
  std::size_t budget_, max_gen_;
  std::vector<RingElem> elems_;
  std::vector<std::vector<std::vector<RingElem>>> q_;  // q_[j][d - j] = degree-d slice of c (X*Y)^j
  std::vector<RingElem> f_;
  std::vector<TruncSeries> found_;
  std::size_t nodes_ = 0;
  unsigned deepest_ = 0;
};

/// Over Q: log c = G(X) + G(Y) - G(X*Y) is linear in the coefficients of G.
MembershipResult membership_rational(const Cocycle2& c, unsigned R) {
  const Ring& r = c.lambda.ring();
  MembershipResult out;
  TruncSeries lc = s_log(c.series.truncated(R).with_vars(kXY));
  TruncSeries law = DeformLaw{c.lambda}.law(Var::X, Var::Y, kXY, R);
  std::vector<SMono> rows;
  for (unsigned d = 1; d <= R; ++d)
    for (unsigned i = 0; i <= d; ++i) rows.push_back(xy(i, d - i));
  std::vector<std::vector<Rational>> a(rows.size(), std::vector<Rational>(R));
  std::vector<Rational> rhs(rows.size());
  TruncSeries P = law;
  for (unsigned j = 1; j <= R; ++j) {
    TruncSeries col = s_pow(TruncSeries::variable(r, Var::X, kXY, R), j) +
                      s_pow(TruncSeries::variable(r, Var::Y, kXY, R), j) - P;
    for (std::size_t k = 0; k < rows.size(); ++k) a[k][j - 1] = col.coeff(rows[k]).scalar();
    P = P * law;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) rhs[k] = lc.coeff(rows[k]).scalar();
  auto sol = solve_rational(std::move(a), std::move(rhs));
  out.nodes = 1;
  if (!sol.x) {
    out.status = Membership::NotCoboundaryWithinCap;
    out.detail = "log-linear system inconsistent up to degree " + std::to_string(R);
    return out;
  }
  TruncSeries G(r, var_bit(Var::T), R);
  for (unsigned j = 1; j <= R; ++j) G.set(SMono::power(Var::T, j), r->from_rational((*sol.x)[j - 1]));
  out.status = Membership::Coboundary;
  out.generators.push_back(s_exp(G));
  out.detail = sol.unique ? "unique logarithm" : "logarithm determined up to the kernel";
  return out;
}

}  // namespace

std::string_view membership_name(Membership m) {
  switch (m) {
    case Membership::Coboundary: return "coboundary";
    case Membership::NotCoboundaryWithinCap: return "not-coboundary-within-cap";
    case Membership::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

Cocycle2 coboundary(const TruncSeries& F, const RingElem& lambda) {
  const unsigned cap = F.cap();
  if (!is_unit(F.constant_term()))
    throw Error(Errc::NonUnitConstantTerm, "generator constant term " + F.constant_term().str() + " is not a unit");
  TruncSeries fx = rename(F, Var::X, kXY), fy = rename(F, Var::Y, kXY);
  TruncSeries law = DeformLaw{lambda}.law(Var::X, Var::Y, kXY, cap);
  TruncSeries fl = s_subst(rename(F, Var::T, 0), law);
  return {fx * fy * s_inv(fl), lambda, cap};
}

Verdict cocycle_invariants(const Cocycle2& c, unsigned cap3) {
  const unsigned R = c.reliable;
  TruncSeries f = c.series.truncated(R);
  if (!f.constant_term().is_one()) return Verdict::fail("constant term " + f.constant_term().str());
  if (auto d = first_difference(f, swap_xy(f))) return Verdict::fail("symmetry: " + *d);
  for (const auto& [m, v] : f.coeffs())
    if (m.deg > 0 && (m.e[1] == 0 || m.e[2] == 0))
      return Verdict::fail("normalization: coefficient of " + mono_str(m) + " is " + v.str());
  const unsigned K = std::min(cap3, R);
  TruncSeries g = f.truncated(K).with_vars(kXYZ);
  DeformLaw law{c.lambda};
  TruncSeries lxy = law.law(Var::X, Var::Y, kXYZ, K), lyz = law.law(Var::Y, Var::Z, kXYZ, K);
  TruncSeries z = TruncSeries::variable(g.ring(), Var::Z, kXYZ, K), y = TruncSeries::variable(g.ring(), Var::Y, kXYZ, K);
  TruncSeries lhs = g * s_subst_multi(g, {{Var::X, lxy}, {Var::Y, z}}, K);
  TruncSeries rhs = s_subst_multi(g, {{Var::X, y}, {Var::Y, z}}, K) * s_subst_multi(g, {{Var::Y, lyz}}, K);
  if (auto d = first_difference(lhs, rhs)) return Verdict::fail("cocycle condition: " + *d);
  return Verdict::pass("symmetric, normalized, cocycle to degree " + std::to_string(K));
}

MembershipResult b2_membership(const Cocycle2& c, std::size_t budget, std::size_t max_generators) {
  const Ring& r = c.lambda.ring();
  const unsigned R = std::min(c.reliable, c.series.cap());
  if (!c.series.constant_term().is_one()) {
    MembershipResult out;
    out.detail = "constant term " + c.series.constant_term().str() + " is not 1";
    return out;
  }
  if (r->is_finite()) return FiniteSearch(c, R, budget, std::max<std::size_t>(max_generators, 1)).run();
  if (r->kind() == RingKind::Rationals) return membership_rational(c, R);
  throw Error(Errc::UnsupportedCtx, "coboundary membership needs a finite ring or Q, got " + r->describe());
}

unsigned psi_order(const PsiPoly& psi) {
  for (unsigned i = 1; i < psi.coeff.size(); ++i)
    if (!psi.coeff[i].is_zero()) return i;
  return psi.degree();
}

Cocycle2 pullback_psi(const Cocycle2& c, const PsiPoly& psi) {
  if (!(c.lambda == pow(psi.lambda, psi.degree())))
    throw Error(Errc::ScenarioInvalid, "cocycle parameter " + c.lambda.str() + " is not lambda^{p^l} for lambda = " +
                                           psi.lambda.str());
  const unsigned out = (c.reliable + 1) * psi_order(psi) - 1;
  TruncSeries src = c.series.truncated(std::min(c.reliable, c.series.cap()));
  TruncSeries px = psi.series(Var::X, kXY, out), py = psi.series(Var::Y, kXY, out);
  return {s_subst_multi(src, {{Var::X, px}, {Var::Y, py}}, out), psi.lambda, out};
}

}  // namespace wd
