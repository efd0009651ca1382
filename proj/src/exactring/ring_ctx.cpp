#include <algorithm>
#include <set>
#include <sstream>

#include "wittdeform/exactring.hpp"

namespace wd {

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

unsigned prime_of_prime_power(const Integer& m) {
  if (m < 2 || !m.fits_ulong_p()) return 0;
  unsigned long v = m.get_ui();
  for (unsigned long d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      while (v % d == 0) v /= d;
      return v == 1 ? unsigned(d) : 0;
    }
  }
  return unsigned(m.get_ui());
}

std::string rational_str(const Rational& q) { return q.get_str(); }

}  // namespace

Ring RingCtx::integers() {
  auto r = std::shared_ptr<RingCtx>(new RingCtx());
  r->kind_ = RingKind::Integers;
  r->desc_ = "int";
  return r;
}

Ring RingCtx::rationals(unsigned p) {
  if (!is_prime(p)) throw Error(Errc::MalformedSpec, "rat: " + std::to_string(p) + " is not prime");
  auto r = std::shared_ptr<RingCtx>(new RingCtx());
  r->kind_ = RingKind::Rationals;
  r->prime_ = p;
  r->desc_ = "rat:" + std::to_string(p);
  return r;
}

Ring RingCtx::plocal(unsigned p) {
  if (!is_prime(p)) throw Error(Errc::MalformedSpec, "plocal: " + std::to_string(p) + " is not prime");
  auto r = std::shared_ptr<RingCtx>(new RingCtx());
  r->kind_ = RingKind::PLocal;
  r->prime_ = p;
  r->desc_ = "plocal:" + std::to_string(p);
  return r;
}

Ring RingCtx::zmod(const Integer& m) {
  if (m < 2) throw Error(Errc::MalformedSpec, "zmod modulus must be >= 2 (zero ring rejected)");
  auto r = std::shared_ptr<RingCtx>(new RingCtx());
  r->kind_ = RingKind::ModRing;
  r->modulus_ = m;
  r->prime_ = prime_of_prime_power(m);
  r->desc_ = "zmod:" + m.get_str();
  return r;
}

Ring RingCtx::polyquot(Ring base, std::vector<Rational> modulus, std::string var) {
  if (!base || base->kind() == RingKind::PolyQuotient || base->kind() == RingKind::Laurent)
    throw Error(Errc::MalformedSpec, "polyquot base must be int, rat, plocal or zmod");
  while (!modulus.empty() && base->scalar_normalize(modulus.back()) == 0) modulus.pop_back();
  if (modulus.size() < 2) throw Error(Errc::MalformedSpec, "polyquot modulus must have degree >= 1");
  for (auto& c : modulus) c = base->scalar_normalize(c);
  if (modulus.back() != 1) throw Error(Errc::MalformedSpec, "polyquot modulus must be monic");
  auto r = std::shared_ptr<RingCtx>(new RingCtx());
  r->kind_ = RingKind::PolyQuotient;
  r->base_ = std::move(base);
  r->prime_ = r->base_->prime();
  r->poly_mod_ = std::move(modulus);
  r->var_ = std::move(var);
  std::ostringstream os;
  os << "polyquot:" << r->base_->describe() << ";";
  bool first = true;
  for (std::size_t k = r->poly_mod_.size(); k-- > 0;) {
    const Rational& c = r->poly_mod_[k];
    if (c == 0) continue;
    if (!first) os << "+";
    first = false;
    if (k == 0 || c != 1) os << rational_str(c);
    if (k > 0 && c != 1) os << "*";
    if (k > 0) os << r->var_;
    if (k > 1) os << "^" << k;
  }
  r->desc_ = os.str();
  return r;
}

Ring RingCtx::laurent(unsigned p, std::vector<std::string> gens, std::vector<std::string> laurent_gens,
                      std::vector<std::pair<std::string, std::string>> subs) {
  if (!is_prime(p)) throw Error(Errc::MalformedSpec, "laurent: " + std::to_string(p) + " is not prime");
  if (gens.empty() || gens.size() > kMaxSymbols)
    throw Error(Errc::MalformedSpec, "laurent: between 1 and " + std::to_string(kMaxSymbols) + " generators");
  std::set<std::string> seen;
  for (auto& g : gens)
    if (!seen.insert(g).second) throw Error(Errc::MalformedSpec, "laurent: duplicate generator " + g);
  auto r = std::shared_ptr<RingCtx>(new RingCtx());
  r->kind_ = RingKind::Laurent;
  r->prime_ = p;
  r->gens_ = gens;
  r->laurent_.assign(gens.size(), false);
  for (auto& lg : laurent_gens) {
    auto it = std::find(gens.begin(), gens.end(), lg);
    if (it == gens.end()) throw Error(Errc::MalformedSpec, "laurent: unknown laurent generator " + lg);
    r->laurent_[std::size_t(it - gens.begin())] = true;
  }
  std::ostringstream os;
  os << "laurent:p=" << p << ";gens=";
  for (std::size_t i = 0; i < gens.size(); ++i) os << (i ? "," : "") << gens[i];
  os << ";laurent=";
  for (std::size_t i = 0; i < laurent_gens.size(); ++i) os << (i ? "," : "") << laurent_gens[i];

  // Substitutions: resolve in dependency order, rejecting cycles.
  std::map<std::string, std::string> pending;
  for (auto& [name, expr] : subs) {
    if (!seen.count(name)) throw Error(Errc::MalformedSpec, "laurent: substitution for unknown generator " + name);
    pending[name] = expr;
  }
  if (!subs.empty()) {
    os << ";subs=";
    bool first = true;
    for (auto& [name, expr] : pending) {
      os << (first ? "" : ",") << name << "=" << expr;
      first = false;
    }
  }
  r->desc_ = os.str();
  // Dependency resolution by repeated passes; a pass without progress is a cycle.
  while (!pending.empty()) {
    bool progress = false;
    for (auto it = pending.begin(); it != pending.end();) {
      bool depends = false;
      for (auto& [other, _] : pending) {
        if (other == it->first) continue;
        // Identifier-level containment check.
        std::size_t pos = 0;
        while ((pos = it->second.find(other, pos)) != std::string::npos) {
          auto is_id = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || (c & 0x80); };
          bool left = pos == 0 || !is_id(it->second[pos - 1]);
          bool right = pos + other.size() >= it->second.size() || !is_id(it->second[pos + other.size()]);
          if (left && right) {
            depends = true;
            break;
          }
          pos += other.size();
        }
        if (depends) break;
      }
      // Self reference is a cycle of length one.
      {
        const std::string& self = it->first;
        std::size_t pos = 0;
        while ((pos = it->second.find(self, pos)) != std::string::npos) {
          auto is_id = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || (c & 0x80); };
          bool left = pos == 0 || !is_id(it->second[pos - 1]);
          bool right = pos + self.size() >= it->second.size() || !is_id(it->second[pos + self.size()]);
          if (left && right) throw Error(Errc::MalformedSpec, "laurent: cyclic substitution at " + self);
          pos += self.size();
        }
      }
      if (depends) {
        ++it;
        continue;
      }
      RingElem v = r->parse(it->second);
      r->bound_[it->first] = v.laurent();
      it = pending.erase(it);
      progress = true;
    }
    if (!progress) throw Error(Errc::MalformedSpec, "laurent: cyclic substitution bindings");
  }
  return r;
}

std::optional<std::size_t> RingCtx::gen_index(std::string_view name) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i] == name) return i;
  return std::nullopt;
}

bool RingCtx::contains_q() const {
  switch (kind_) {
    case RingKind::Rationals:
    case RingKind::Laurent: return true;
    case RingKind::PolyQuotient: return base_->contains_q();
    default: return false;
  }
}

bool RingCtx::is_finite() const {
  if (kind_ == RingKind::ModRing) return true;
  if (kind_ == RingKind::PolyQuotient) return base_->is_finite();
  return false;
}

bool RingCtx::char_is(unsigned p) const { return from_int(long(p)).is_zero(); }

std::optional<Integer> RingCtx::size() const {
  if (kind_ == RingKind::ModRing) return modulus_;
  if (kind_ == RingKind::PolyQuotient && base_->kind() == RingKind::ModRing) {
    Integer s;
    mpz_pow_ui(s.get_mpz_t(), base_->modulus().get_mpz_t(), degree());
    return s;
  }
  return std::nullopt;
}

std::vector<RingElem> RingCtx::elements(std::size_t limit) const {
  auto sz = size();
  if (!sz) throw Error(Errc::UnsupportedCtx, describe() + " is not finite");
  if (*sz > Integer(static_cast<unsigned long>(limit)))
    throw Error(Errc::BudgetExceeded, describe() + " has more than " + std::to_string(limit) + " elements");
  std::size_t n = sz->get_ui();
  std::vector<RingElem> out;
  out.reserve(n);
  auto self = shared_from_this();
  if (kind_ == RingKind::ModRing) {
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(self, Rational(static_cast<unsigned long>(i)));
    return out;
  }
  unsigned long m = base_->modulus().get_ui();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> c(degree());
    std::size_t v = i;
    for (auto& x : c) {
      x = static_cast<unsigned long>(v % m);
      v /= m;
    }
    out.emplace_back(self, std::move(c));
  }
  return out;
}

Rational RingCtx::scalar_normalize(const Rational& q) const {
  switch (kind_) {
    case RingKind::Integers:
      if (q.get_den() != 1) throw Error(Errc::NotIntegral, q.get_str() + " is not an integer");
      return q;
    case RingKind::Rationals: return q;
    case RingKind::PLocal:
      if (q.get_den() % prime_ == 0)
        throw Error(Errc::NotIntegral, q.get_str() + " is not in Z_(" + std::to_string(prime_) + ")");
      return q;
    case RingKind::ModRing: {
      Integer den = q.get_den();
      Integer inv_den;
      if (den != 1) {
        if (mpz_invert(inv_den.get_mpz_t(), den.get_mpz_t(), modulus_.get_mpz_t()) == 0)
          throw Error(Errc::NotIntegral, "denominator of " + q.get_str() + " is not invertible mod " + modulus_.get_str());
      } else {
        inv_den = 1;
      }
      Integer r = Integer(q.get_num() * inv_den) % modulus_;
      if (r < 0) r += modulus_;
      return Rational(r);
    }
    default: throw Error(Errc::UnsupportedCtx, "scalar_normalize on " + describe());
  }
}

bool RingCtx::scalar_representable(const Rational& q) const {
  try {
    (void)scalar_normalize(q);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::vector<Rational> RingCtx::reduce_quot(std::vector<Rational> c) const {
  const std::size_t d = degree();
  for (std::size_t k = c.size(); k-- > d;) {
    if (c[k] == 0) continue;
    Rational lead = c[k];
    for (std::size_t j = 0; j < d; ++j) c[k - d + j] -= lead * poly_mod_[j];
    c[k] = 0;
  }
  c.resize(d);
  for (auto& x : c) x = base_->scalar_normalize(x);
  return c;
}

RingCtx::Payload RingCtx::canonical_laurent(LaurentPoly lp) const {
  for (const auto& [m, c] : lp.terms()) {
    for (std::size_t i = 0; i < kMaxSymbols; ++i) {
      if (m[i] == 0) continue;
      if (i >= gens_.size()) throw Error(Errc::MalformedSpec, "monomial uses a generator outside " + describe());
      if (m[i] < 0 && !laurent_[i]) throw Error(Errc::NotAUnit, gens_[i] + " is not invertible in " + describe());
    }
  }
  return lp;
}

RingElem RingCtx::from_payload(Payload p) const {
  auto self = shared_from_this();
  switch (kind_) {
    case RingKind::PolyQuotient: return {self, reduce_quot(std::get<std::vector<Rational>>(p))};
    case RingKind::Laurent: return {self, canonical_laurent(std::get<LaurentPoly>(std::move(p)))};
    default: return {self, scalar_normalize(std::get<Rational>(p))};
  }
}

RingElem RingCtx::zero() const { return from_rational(0); }
RingElem RingCtx::one() const { return from_rational(1); }
RingElem RingCtx::from_int(long v) const { return from_rational(Rational(v)); }
RingElem RingCtx::from_integer(const Integer& v) const { return from_rational(Rational(v)); }

RingElem RingCtx::from_rational(const Rational& q) const {
  auto self = shared_from_this();
  switch (kind_) {
    case RingKind::PolyQuotient: {
      std::vector<Rational> c(degree());
      c[0] = base_->scalar_normalize(q);
      return {self, std::move(c)};
    }
    case RingKind::Laurent: return {self, LaurentPoly(q)};
    default: return {self, scalar_normalize(q)};
  }
}

RingElem RingCtx::symbol(std::string_view name) const {
  if (kind_ == RingKind::PolyQuotient && name == var_) return var_class();
  if (kind_ != RingKind::Laurent) throw Error(Errc::UnboundSymbol, std::string(name) + " in " + describe());
  if (auto it = bound_.find(name); it != bound_.end()) return {shared_from_this(), it->second};
  auto idx = gen_index(name);
  if (!idx) throw Error(Errc::UnboundSymbol, std::string(name) + " is not a generator of " + describe());
  Monomial m;
  m[*idx] = 1;
  return {shared_from_this(), LaurentPoly(m, 1)};
}

RingElem RingCtx::var_class() const {
  if (kind_ != RingKind::PolyQuotient) throw Error(Errc::UnsupportedCtx, "var_class on " + describe());
  std::vector<Rational> c(degree() + 1);
  c[1] = 1;
  return {shared_from_this(), reduce_quot(std::move(c))};
}

RingCtx::Payload RingCtx::add(const Payload& a, const Payload& b) const {
  switch (kind_) {
    case RingKind::PolyQuotient: {
      auto& x = std::get<std::vector<Rational>>(a);
      auto& y = std::get<std::vector<Rational>>(b);
      std::vector<Rational> r(x.size());
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = base_->scalar_normalize(x[i] + y[i]);
      return r;
    }
    case RingKind::Laurent: return std::get<LaurentPoly>(a) + std::get<LaurentPoly>(b);
    default: return scalar_normalize(std::get<Rational>(a) + std::get<Rational>(b));
  }
}

RingCtx::Payload RingCtx::sub(const Payload& a, const Payload& b) const {
  switch (kind_) {
    case RingKind::PolyQuotient: {
      auto& x = std::get<std::vector<Rational>>(a);
      auto& y = std::get<std::vector<Rational>>(b);
      std::vector<Rational> r(x.size());
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = base_->scalar_normalize(x[i] - y[i]);
      return r;
    }
    case RingKind::Laurent: return std::get<LaurentPoly>(a) - std::get<LaurentPoly>(b);
    default: return scalar_normalize(std::get<Rational>(a) - std::get<Rational>(b));
  }
}

RingCtx::Payload RingCtx::neg(const Payload& a) const {
  switch (kind_) {
    case RingKind::PolyQuotient: {
      auto r = std::get<std::vector<Rational>>(a);
      for (auto& x : r) x = base_->scalar_normalize(-x);
      return r;
    }
    case RingKind::Laurent: return -std::get<LaurentPoly>(a);
    default: return scalar_normalize(-std::get<Rational>(a));
  }
}

RingCtx::Payload RingCtx::mul(const Payload& a, const Payload& b) const {
  switch (kind_) {
    case RingKind::PolyQuotient: {
      auto& x = std::get<std::vector<Rational>>(a);
      auto& y = std::get<std::vector<Rational>>(b);
      std::vector<Rational> r(x.size() + y.size() - 1);
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
      }
      return reduce_quot(std::move(r));
    }
    case RingKind::Laurent: return std::get<LaurentPoly>(a) * std::get<LaurentPoly>(b);
    default: return scalar_normalize(std::get<Rational>(a) * std::get<Rational>(b));
  }
}

bool RingCtx::is_zero(const Payload& a) const {
  switch (kind_) {
    case RingKind::PolyQuotient: {
      auto& x = std::get<std::vector<Rational>>(a);
      return std::all_of(x.begin(), x.end(), [](const Rational& c) { return c == 0; });
    }
    case RingKind::Laurent: return std::get<LaurentPoly>(a).is_zero();
    default: return std::get<Rational>(a) == 0;
  }
}

std::string RingCtx::format(const Payload& a) const {
  std::ostringstream os;
  switch (kind_) {
    case RingKind::PolyQuotient: {
      auto& x = std::get<std::vector<Rational>>(a);
      bool first = true;
      for (std::size_t k = x.size(); k-- > 0;) {
        Rational c = x[k];
        if (c == 0) continue;
        bool negative = c < 0;
        if (negative) c = -c;
        os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
        first = false;
        if (k == 0 || c != 1) os << rational_str(c);
        if (k > 0 && c != 1) os << "*";
        if (k > 0) os << var_;
        if (k > 1) os << "^" << k;
      }
      if (first) os << "0";
      return os.str();
    }
    case RingKind::Laurent: {
      auto& p = std::get<LaurentPoly>(a);
      if (p.is_zero()) return "0";
      bool first = true;
      for (const auto& [m, c0] : p.terms()) {
        Rational c = c0;
        bool negative = c < 0;
        if (negative) c = -c;
        os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
        first = false;
        bool printed = false;
        if (m.is_one() || c != 1) {
          os << rational_str(c);
          printed = true;
        }
        for (std::size_t i = 0; i < gens_.size(); ++i) {
          if (m[i] == 0) continue;
          if (printed) os << "*";
          os << gens_[i];
          if (m[i] != 1) os << "^" << m[i];
          printed = true;
        }
      }
      return os.str();
    }
    default: return rational_str(std::get<Rational>(a));
  }
}

bool same_ring(const Ring& a, const Ring& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->describe() == b->describe();
}

void require_same_ring(const Ring& a, const Ring& b, std::string_view where) {
  if (!same_ring(a, b))
    throw Error(Errc::CtxMismatch, std::string(where) + ": " + (a ? a->describe() : "null") + " vs " +
                                       (b ? b->describe() : "null"));
}

}  // namespace wd
