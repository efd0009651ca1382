#include <map>
#include <mutex>

#include "wittdeform/ahdeform.hpp"

namespace wd {

namespace {

const unsigned kX = var_bit(Var::X);
const unsigned kXY = var_bit(Var::X) | var_bit(Var::Y);

unsigned long ipow(unsigned long b, unsigned e) {
  unsigned long r = 1;
  while (e--) r *= b;
  return r;
}

RingElem inv_pk(const Ring& r, unsigned p, unsigned k) {
  Integer d;
  mpz_ui_pow_ui(d.get_mpz_t(), p, k);
  return r->from_rational(Rational(Integer(1), d));
}

/// Write-once memo keyed by (p, D).
template <class T>
class Memo {
 public:
  template <class F>
  std::shared_ptr<const T> get(std::pair<unsigned, unsigned> key, F&& make) {
    std::shared_ptr<Slot> slot;
    {
      std::lock_guard<std::mutex> g(mu_);
      auto& s = slots_[key];
      if (!s) s = std::make_shared<Slot>();
      slot = s;
    }
    std::call_once(slot->once, [&] { slot->value = make(); });
    return slot->value;
  }

 private:
  struct Slot {
    std::once_flag once;
    std::shared_ptr<const T> value;
  };
  std::mutex mu_;
  std::map<std::pair<unsigned, unsigned>, std::shared_ptr<Slot>> slots_;
};

void certify(UniversalSeries& u, const std::string& what) {
  u.certificate.assign(u.cap + 1, true);
  for (const auto& [m, c] : u.series.coeffs()) {
    if (is_p_integral(c)) continue;
    u.certificate[m.deg] = false;
    throw Error(Errc::IntegralityFailure,
                what + ": coefficient of " + mono_str(m) + " is " + c.str() + ", not in Z_(" + std::to_string(u.p) + ")");
  }
}

/// X -> X^e on a univariate series in X, keeping terms up to cap.
TruncSeries stretch(const TruncSeries& f, unsigned long e, unsigned cap) {
  TruncSeries out(f.ring(), kX, cap);
  for (const auto& [m, c] : f.coeffs()) {
    unsigned long d = m.deg * e;
    if (d > cap) break;
    out.set(SMono::power(Var::X, unsigned(d)), c);
  }
  return out;
}

/// F_p by its defining product; needs 1/p and 1/lambda in the ring.
TruncSeries fp_direct(const WittVec& v, const RingElem& lambda, unsigned D) {
  const Ring& r = lambda.ring();
  const unsigned p = v.p;
  const unsigned K = window_log(p, D);
  TruncSeries one = TruncSeries::constant(r->one(), kXY, D);
  TruncSeries F = one;
  if (K == 0) return F;
  auto gh = ghost(pad(v, K));
  TruncSeries x = TruncSeries::variable(r, Var::X, kXY, D);
  TruncSeries y = TruncSeries::variable(r, Var::Y, kXY, D);
  TruncSeries law = DeformLaw{lambda}.compose(x, y);
  RingElem li = inv(lambda);
  for (unsigned k = 1; k <= K; ++k) {
    if (gh[k - 1].is_zero()) continue;
    const unsigned long q = ipow(p, k);
    RingElem lk = pow(lambda, q);
    TruncSeries num = (one + s_pow(x, q).scaled(lk)) * (one + s_pow(y, q).scaled(lk));
    TruncSeries ratio = num * s_inv(one + s_pow(law, q).scaled(lk));
    F = F * s_binom_pow(ratio, gh[k - 1] * pow(li, q) * inv_pk(r, p, k));
  }
  return F;
}

}  // namespace

unsigned window_log(unsigned p, unsigned D) {
  unsigned k = 0;
  while (ipow(p, k + 1) <= D) ++k;
  return k;
}

std::shared_ptr<const UniversalSeries> ep_universal(unsigned p, unsigned D) {
  static Memo<UniversalSeries> memo;
  return memo.get({p, D}, [&] {
    auto u = std::make_shared<UniversalSeries>();
    u->p = p;
    u->cap = D;
    u->ring = RingCtx::laurent(p, {"U", "L"}, {"L"});
    const Ring& r = u->ring;
    RingElem L = r->symbol("L");
    RingElem ul = r->symbol("U") * inv(L);
    TruncSeries one = TruncSeries::constant(r->one(), kX, D);
    TruncSeries x = TruncSeries::variable(r, Var::X, kX, D);
    TruncSeries E = s_binom_pow(one + x.scaled(L), ul);
    for (unsigned k = 1; ipow(p, k) <= D; ++k) {
      const unsigned long q = ipow(p, k);
      RingElem e = (pow(ul, q) - pow(ul, q / p)) * inv_pk(r, p, k);
      E = E * s_binom_pow(one + s_pow(x, q).scaled(pow(L, q)), e);
    }
    u->series = E;
    certify(*u, "E_p(U, L; X)");
    return std::shared_ptr<const UniversalSeries>(u);
  });
}

std::shared_ptr<const UniversalSeries> fp_universal(unsigned p, unsigned D) {
  static Memo<UniversalSeries> memo;
  return memo.get({p, D}, [&] {
    auto u = std::make_shared<UniversalSeries>();
    u->p = p;
    u->cap = D;
    const unsigned K = window_log(p, D);
    std::vector<std::string> gens;
    for (unsigned i = 0; i < K; ++i) gens.push_back("v" + std::to_string(i));
    gens.push_back("L");
    u->ring = RingCtx::laurent(p, gens, {"L"});
    const Ring& r = u->ring;
    std::vector<RingElem> comps;
    for (unsigned i = 0; i < K; ++i) comps.push_back(r->symbol(gens[i]));
    WittVec v(p, comps.empty() ? std::vector<RingElem>{r->zero()} : comps);
    u->series = fp_direct(v, r->symbol("L"), D);
    certify(*u, "F_p(v, L; X, Y)");
    return std::shared_ptr<const UniversalSeries>(u);
  });
}

TruncSeries ep_vec(const WittVec& v, const RingElem& lambda, unsigned D) {
  const Ring& r = lambda.ring();
  const unsigned p = v.p;
  TruncSeries E = TruncSeries::constant(r->one(), kX, D);
  for (unsigned k = 0; k < v.length() && ipow(p, k) <= D; ++k) {
    require_same_ring(v[k].ring(), r, "ep_vec");
    if (v[k].is_zero()) continue;
    const unsigned long q = ipow(p, k);
    auto u = ep_universal(p, unsigned(D / q));
    Specializer sp(u->ring, r, {{"U", v[k]}, {"L", pow(lambda, q)}});
    E = E * stretch(u->series.map_coeffs(r, sp), q, D);
  }
  return E;
}

TruncSeries fp_vec_specialized(const WittVec& v, const RingElem& lambda, unsigned D) {
  const Ring& r = lambda.ring();
  auto u = fp_universal(v.p, D);
  const unsigned K = window_log(v.p, D);
  std::map<std::string, RingElem, std::less<>> b{{"L", lambda}};
  for (unsigned i = 0; i < K; ++i) b.emplace("v" + std::to_string(i), i < v.length() ? v[i] : r->zero());
  Specializer sp(u->ring, r, std::move(b));
  return u->series.map_coeffs(r, sp);
}

TruncSeries fp_vec(const WittVec& v, const RingElem& lambda, unsigned D) {
  const Ring& r = lambda.ring();
  if (r->contains_q() && is_unit(lambda)) return fp_direct(v, lambda, D);
  return fp_vec_specialized(v, lambda, D);
}

TruncSeries EPresentation::eval(unsigned D) const {
  TruncSeries E = ep_vec(u, lambda, D);
  if (!arg) return E;
  return s_subst(E, *arg);
}

TruncSeries ptilde(unsigned k, const EPresentation& e, unsigned D) {
  WittVec w = comp_power(e.u, k);
  for (unsigned j = 0; j < k; ++j) w = verschiebung(w);
  return EPresentation{w, e.lambda, e.arg}.eval(D);
}

TruncSeries gp(const WittVec& v, const RingElem& mu, const EPresentation& e, unsigned D) {
  const Ring& r = mu.ring();
  if (e.u.length() == 0) throw Error(Errc::UnsupportedE, "E must be given with its Witt vector");
  if (!r->contains_q() || !is_unit(mu))
    throw Error(Errc::UnsupportedCtx, "G_p needs Q and an invertible mu; use a Laurent ring, got " + r->describe());
  const unsigned p = v.p;
  const unsigned K = window_log(p, D);
  TruncSeries E = e.eval(D);
  TruncSeries one = TruncSeries::constant(r->one(), E.vars(), D);
  TruncSeries G = one;
  if (K == 0) return G;
  auto gh = ghost(pad(v, K));
  RingElem mi = inv(mu);
  for (unsigned k = 1; k <= K; ++k) {
    if (gh[k - 1].is_zero()) continue;
    const unsigned long q = ipow(p, k);
    TruncSeries num = one + s_pow(E - one, q);
    TruncSeries ratio = num * s_inv(ptilde(k, e, D).with_vars(E.vars()));
    G = G * s_binom_pow(ratio, gh[k - 1] * pow(mi, q) * inv_pk(r, p, k));
  }
  return G;
}

TruncSeries ep_log_oracle(unsigned p, unsigned D) {
  Ring r = RingCtx::laurent(p, {"U", "L"}, {"L"});
  RingElem U = r->symbol("U"), L = r->symbol("L"), li = inv(L);
  TruncSeries lg(r, kX, D);
  auto alt_log = [&](unsigned long q, const RingElem& scale) {
    for (unsigned long n = 1; n * q <= D; ++n) {
      RingElem c = scale * pow(L, q * n) * r->from_rational(Rational(n % 2 ? 1 : -1, n));
      lg.add_to(SMono::power(Var::X, unsigned(q * n)), c);
    }
  };
  alt_log(1, U * li);
  for (unsigned k = 1; ipow(p, k) <= D; ++k) {
    const unsigned long q = ipow(p, k);
    alt_log(q, (pow(U * li, q) - pow(U * li, q / p)) * inv_pk(r, p, k));
  }
  return s_exp(lg);
}

}  // namespace wd
