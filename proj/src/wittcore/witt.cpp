#include <sstream>

#include "wittdeform/wittcore.hpp"

namespace wd {

namespace {

void require_compatible(const WittVec& x, const WittVec& y, std::string_view where) {
  if (x.p != y.p) throw Error(Errc::CtxMismatch, std::string(where) + ": primes differ");
  if (x.length() != y.length())
    throw Error(Errc::LengthMismatch, std::string(where) + ": lengths " + std::to_string(x.length()) + " and " +
                                          std::to_string(y.length()));
  require_same_ring(x.ring(), y.ring(), where);
}

unsigned long p_power(unsigned p, std::size_t k) {
  unsigned long r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= p;
  return r;
}

WittVec binary(const WittVec& x, const WittVec& y, OpKind op) {
  require_compatible(x, y, op_name(op));
  auto t = op_table(x.p, unsigned(x.length()), op);
  std::vector<RingElem> in = x.c;
  in.insert(in.end(), y.c.begin(), y.c.end());
  return WittVec(x.p, eval_table(*t, in));
}

}  // namespace

WittVec::WittVec(unsigned p_, std::vector<RingElem> comps) : p(p_), c(std::move(comps)) {
  if (c.empty()) throw Error(Errc::LengthTooShort, "Witt vectors have length >= 1");
  for (const auto& x : c) require_same_ring(x.ring(), c.front().ring(), "WittVec");
}

bool WittVec::is_zero() const {
  for (const auto& x : c)
    if (!x.is_zero()) return false;
  return true;
}

std::string WittVec::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? ", " : "") << c[i].str();
  os << ")";
  return os.str();
}

bool operator==(const WittVec& a, const WittVec& b) { return a.p == b.p && a.c == b.c; }

WittVec witt_zero(const Ring& r, unsigned p, std::size_t m) { return WittVec(p, std::vector<RingElem>(m, r->zero())); }

WittVec teichmuller(const RingElem& lambda, unsigned p, std::size_t m) {
  std::vector<RingElem> c(m, lambda.ring()->zero());
  c[0] = lambda;
  return WittVec(p, std::move(c));
}

WittVec witt_int(const Ring& r, unsigned p, std::size_t m, long n) {
  WittVec one = teichmuller(r->one(), p, m);
  WittVec acc = witt_zero(r, p, m);
  WittVec base = n < 0 ? witt_neg(one) : one;
  unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
  while (k) {
    if (k & 1) acc = witt_add(acc, base);
    k >>= 1;
    if (k) base = witt_add(base, base);
  }
  return acc;
}

WittVec generic_vec(const Ring& r, unsigned p, const std::string& prefix, std::size_t m) {
  std::vector<RingElem> c;
  for (std::size_t i = 0; i < m; ++i) c.push_back(r->symbol(prefix + std::to_string(i)));
  return WittVec(p, std::move(c));
}

std::vector<RingElem> ghost(const WittVec& w) {
  std::vector<RingElem> pw, out;
  for (std::size_t n = 0; n < w.length(); ++n) {
    for (auto& x : pw) x = pow(x, w.p);
    pw.push_back(w[n]);
    // Horner in p: ((x_n p + x_{n-1}^p) p + ...) starting from the top index.
    RingElem g = pw[n];
    for (std::size_t i = n; i-- > 0;) g = times_int(g, long(w.p)) + pw[i];
    out.push_back(g);
  }
  return out;
}

WittVec witt_add(const WittVec& x, const WittVec& y) {
  if (x.is_zero()) {
    require_compatible(x, y, "sum");
    return y;
  }
  if (y.is_zero()) {
    require_compatible(x, y, "sum");
    return x;
  }
  return binary(x, y, OpKind::Sum);
}

WittVec witt_mul(const WittVec& x, const WittVec& y) { return binary(x, y, OpKind::Prod); }

WittVec witt_neg(const WittVec& x) {
  if (x.p != 2) {
    std::vector<RingElem> c;
    for (const auto& v : x.c) c.push_back(-v);
    return WittVec(x.p, std::move(c));
  }
  auto t = op_table(x.p, unsigned(x.length()), OpKind::Neg);
  return WittVec(x.p, eval_table(*t, x.c));
}

WittVec witt_sub(const WittVec& x, const WittVec& y) { return witt_add(x, witt_neg(y)); }

WittVec witt_times(long n, const WittVec& w) { return witt_mul(witt_int(w.ring(), w.p, w.length(), n), w); }

WittVec frobenius(const WittVec& w) {
  if (w.length() < 2) throw Error(Errc::LengthTooShort, "frobenius needs length >= 2");
  auto t = op_table(w.p, unsigned(w.length()), OpKind::Frobenius);
  return WittVec(w.p, eval_table(*t, w.c));
}

WittVec verschiebung(const WittVec& w) {
  std::vector<RingElem> c{w.ring()->zero()};
  c.insert(c.end(), w.c.begin(), w.c.end());
  return WittVec(w.p, std::move(c));
}

WittVec truncate(const WittVec& w, std::size_t m) {
  if (m < 1 || m > w.length())
    throw Error(Errc::LengthMismatch, "truncate to " + std::to_string(m) + " from " + std::to_string(w.length()));
  return WittVec(w.p, std::vector<RingElem>(w.c.begin(), w.c.begin() + long(m)));
}

WittVec pad(const WittVec& w, std::size_t m) {
  if (m <= w.length()) return truncate(w, m);
  std::vector<RingElem> c = w.c;
  c.resize(m, w.ring()->zero());
  return WittVec(w.p, std::move(c));
}

WittVec teich_scale(const RingElem& a, const WittVec& w) {
  std::vector<RingElem> c;
  RingElem ap = a;
  for (std::size_t n = 0; n < w.length(); ++n) {
    c.push_back(ap * w[n]);
    ap = pow(ap, w.p);
  }
  return WittVec(w.p, std::move(c));
}

WittVec f_lambda(const RingElem& lambda, const WittVec& w) {
  if (w.length() < 2) throw Error(Errc::LengthTooShort, "f_lambda needs length >= 2");
  return witt_sub(frobenius(w), teich_scale(pow(lambda, w.p - 1), truncate(w, w.length() - 1)));
}

WittVec t_map(const WittVec& a, const WittVec& w) {
  if (a.p != w.p) throw Error(Errc::CtxMismatch, "t_map: primes differ");
  require_same_ring(a.ring(), w.ring(), "t_map");
  const std::size_t m = w.length();
  WittVec aa = pad(a, m);
  WittVec acc = witt_zero(w.ring(), w.p, m);
  for (std::size_t n = 0; n < m; ++n) {
    if (aa[n].is_zero()) continue;
    // V^n([a_n] w) truncated to m: position n + j holds a_n^{p^j} w_j.
    std::vector<RingElem> c(m, w.ring()->zero());
    RingElem ap = aa[n];
    for (std::size_t j = 0; n + j < m; ++j) {
      c[n + j] = ap * w[j];
      ap = pow(ap, w.p);
    }
    acc = witt_add(acc, WittVec(w.p, std::move(c)));
  }
  return acc;
}

WittVec comp_power(const WittVec& w, unsigned k) {
  unsigned long e = p_power(w.p, k);
  std::vector<RingElem> c;
  for (const auto& x : w.c) c.push_back(pow(x, e));
  return WittVec(w.p, std::move(c));
}

MakeA make_a(const RingElem& lambda, unsigned p, unsigned l, std::size_t m, const std::optional<RingElem>& a0_hint) {
  const Ring& r = lambda.ring();
  RingElem mu = pow(lambda, p_power(p, l));
  WittVec b = witt_times(long(p_power(p, l)), teichmuller(lambda, p, m));
  MakeA out;
  if (auto mu_inv = try_inv(mu)) {
    std::vector<RingElem> c;
    for (const auto& x : b.c) c.push_back(x * *mu_inv);
    out = {WittVec(p, std::move(c)), "closed-form"};
  } else if (r->is_finite()) {
    auto elems = r->elements();
    std::vector<RingElem> c;
    for (std::size_t i = 0; i < m; ++i) {
      std::optional<RingElem> pick;
      if (i == 0 && a0_hint && mu * *a0_hint == b[0]) pick = *a0_hint;
      for (std::size_t k = 0; !pick && k < elems.size(); ++k)
        if (mu * elems[k] == b[i]) pick = elems[k];
      if (!pick) throw Error(Errc::NoSuchA, "no a_" + std::to_string(i) + " with mu*a = " + b[i].str());
      c.push_back(*pick);
    }
    out = {WittVec(p, std::move(c)), "search"};
  } else if (r->kind() == RingKind::Laurent) {
    throw Error(Errc::NotInvertible, lambda.str() + " is not invertible; a needs lambda^{-1}");
  } else {
    std::vector<RingElem> c;
    for (std::size_t i = 0; i < m; ++i) {
      auto q = exact_div(b[i], mu);
      if (!q) throw Error(Errc::NoSuchA, "mu does not divide " + b[i].str());
      c.push_back(*q);
    }
    out = {WittVec(p, std::move(c)), "exact-division"};
  }
  WittVec lhs = t_map(out.a, teichmuller(mu, p, m));
  if (!(lhs == b)) throw Error(Errc::RelationViolated, "T_a([mu]) != p^l[lambda] for a = " + out.a.str());
  return out;
}

}  // namespace wd
