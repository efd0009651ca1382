#include "wittdeform/cohomlab.hpp"

namespace wd {

namespace {

unsigned long ipow(unsigned long b, std::size_t e) {
  unsigned long r = 1;
  while (e--) r *= b;
  return r;
}

/// The structure map A -> B: identity on equal rings, integer lift out of Z/(n).
RingElem base_change(const RingElem& x, const Ring& target) {
  const Ring& src = x.ring();
  if (src->describe() == target->describe()) return target->parse(x.str());
  if (src->kind() == RingKind::ModRing) {
    if (!target->from_integer(src->modulus()).is_zero())
      throw Error(Errc::HypothesisViolated, target->describe() + " is not an algebra over " + src->describe());
    return target->from_integer(x.scalar().get_num());
  }
  throw Error(Errc::UnsupportedCtx, "base change from " + src->describe() + " is only implemented for Z/(n)");
}

Scenario base_changed(const Scenario& scn, const std::string& algebra) {
  Ring B = ring_make(algebra);
  ScenarioSpec s = scn.spec;
  s.ring = algebra;
  s.lambda = base_change(scn.lambda, B).str();
  s.nu.clear();
  for (const auto& n : scn.nu) s.nu.push_back(base_change(n, B).str());
  s.a.clear();
  for (const auto& c : scn.a.c) s.a.push_back(base_change(c, B).str());
  return make_scenario(s);
}

RingElem evaluate(const FiniteKernelAlg::Elem& e, const RingElem& x) {
  RingElem out = x.ring()->zero(), xp = x.ring()->one();
  for (const auto& c : e) {
    out += c * xp;
    xp *= x;
  }
  return out;
}

std::string elem_str(const FiniteKernelAlg::Elem& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    std::string c = "(" + e[i].str() + ")";
    out += i == 0 ? c : c + "*X^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace

FiniteKernelAlg nl_algebra(const Scenario& scn) {
  const Ring& r = scn.ring;
  if (!r->is_finite()) throw Error(Errc::HypothesisViolated, r->describe() + " is not a Z/(p^n)-algebra");
  bool torsion = false;
  for (unsigned n = 1; n <= 64 && !torsion; ++n) torsion = r->from_integer(Integer(ipow(scn.p, n))).is_zero();
  if (!torsion) throw Error(Errc::HypothesisViolated, r->describe() + " is not killed by a power of p");
  auto elems = r->elements();
  for (std::size_t k = 0; k < scn.nu.size(); ++k) {
    bool divisible = false;
    for (const auto& x : elems) divisible = divisible || times_int(x, long(scn.p)) == scn.nu[k];
    if (!divisible)
      throw Error(Errc::HypothesisViolated,
                  "nu_" + std::to_string(k) + " = " + scn.nu[k].str() + " is not divisible by " + std::to_string(scn.p));
  }
  return FiniteKernelAlg(r, scn.psi);
}

Pairing cartier_pairing(const WittVec& v, const FiniteKernelAlg& alg, const Scenario& scn, const Budgets& b) {
  if (v.length() != scn.m) throw Error(Errc::LengthMismatch, "pairing expects vectors of length " + std::to_string(scn.m));
  if (!f_lambda(scn.lambda, v).is_zero()) throw Error(Errc::NotInKernel, v.str() + " is not in Ker F^(lambda)");
  auto n = alg.nilpotency_index();
  if (!n) throw Error(Errc::HypothesisViolated, "X is not nilpotent in A[X]/(psi)");
  if (ipow(scn.p, scn.m) < *n)
    throw Error(Errc::ScenarioInvalid, "Witt length " + std::to_string(scn.m) + " does not reach the nilpotency index " +
                                           std::to_string(*n));
  const unsigned cap = *n - 1;
  Pairing out;
  out.e = alg.from_series(ep_vec(v, scn.lambda, cap));
  out.group_like = alg.is_group_like(out.e);
  out.well_defined = true;
  for (const auto& u : stable_kernels(scn, b).mu) {
    auto shifted = alg.from_series(ep_vec(witt_add(v, t_map(scn.a, u)), scn.lambda, cap));
    if (shifted != out.e) {
      out.well_defined = false;
      out.detail = "shift by T_a(" + u.str() + ") gives " + elem_str(shifted);
      break;
    }
  }
  if (!out.group_like && out.detail.empty()) out.detail = elem_str(out.e) + " is not group-like";
  return out;
}

std::vector<PairingTable> pairing_tables(const Scenario& scn, const Budgets& b) {
  if (!scn.nu.front().is_zero())
    throw Error(Errc::HypothesisViolated, "the pairing needs nu_0 = 0, got " + scn.nu.front().str());
  nl_algebra(scn);
  std::vector<std::string> algebras = scn.spec.test_algebras;
  if (algebras.empty()) algebras.push_back(scn.spec.ring);
  std::vector<PairingTable> out;
  for (const auto& name : algebras) {
    Scenario sb = base_changed(scn, name);
    FiniteKernelAlg alg = nl_algebra(sb);
    ExactSeq es = exact_seq_check(sb, b);
    PairingTable t;
    t.algebra = name;
    auto elems = sb.ring->elements();
    std::vector<RingElem> pts;
    for (const auto& x : elems) {
      RingElem px = sb.ring->zero();
      for (unsigned i = 0; i < sb.psi.coeff.size(); ++i) px += sb.psi.coeff[i] * pow(x, i);
      if (px.is_zero() && nilpotency_index(x, 64)) {
        pts.push_back(x);
        t.points.push_back(x.str());
      }
    }
    bool all_group_like = es.verdict.ok();
    std::vector<FiniteKernelAlg::Elem> images;
    for (const auto& v : es.m_l_reps) {
      Pairing pr = cartier_pairing(v, alg, sb, b);
      all_group_like = all_group_like && pr.group_like && pr.well_defined;
      t.classes.push_back(v.str());
      std::vector<std::string> row;
      for (const auto& x : pts) row.push_back(evaluate(pr.e, x).str());
      t.values.push_back(std::move(row));
      images.push_back(pr.e);
    }
    const unsigned q = alg.rank();
    Integer total = 1;
    for (unsigned i = 0; i < q; ++i) total *= Integer(elems.size());
    if (total > Integer(b.enumeration))
      throw Error(Errc::BudgetExceeded, "group-like search over " + total.get_str() + " elements of " + name);
    std::vector<std::size_t> idx(q, 0);
    for (;;) {
      FiniteKernelAlg::Elem g;
      for (auto i : idx) g.push_back(elems[i]);
      if (alg.is_group_like(g)) ++t.group_likes;
      std::size_t j = 0;
      while (j < q && ++idx[j] == elems.size()) idx[j++] = 0;
      if (j == q) break;
    }
    bool distinct = true;
    for (std::size_t i = 0; i < images.size(); ++i)
      for (std::size_t j = i + 1; j < images.size(); ++j) distinct = distinct && images[i] != images[j];
    t.bijective = all_group_like && distinct && images.size() == t.group_likes;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace wd
