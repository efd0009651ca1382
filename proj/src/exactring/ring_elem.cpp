#include <algorithm>
#include <numeric>
#include <random>

#include "wittdeform/exactring.hpp"

namespace wd {

namespace {

constexpr std::size_t kExhaustiveLimit = 1u << 16;

// Matrix of multiplication by x on the power basis of a quotient ring.
std::vector<std::vector<Rational>> mult_matrix(const RingElem& x) {
  const Ring& r = x.ring();
  const std::size_t d = r->degree();
  std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d));
  RingElem basis = r->one();
  RingElem t = r->var_class();
  for (std::size_t j = 0; j < d; ++j) {
    RingElem col = x * basis;
    for (std::size_t i = 0; i < d; ++i) m[i][j] = col.quot_coeffs()[i];
    basis *= t;
  }
  return m;
}

long val_of(const Rational& q, unsigned p) {
  if (q == 0) return 0;
  Integer P(p);
  long v = 0;
  Integer n = q.get_num(), d = q.get_den();
  v += long(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), P.get_mpz_t()));
  v -= long(mpz_remove(d.get_mpz_t(), d.get_mpz_t(), P.get_mpz_t()));
  return v;
}

std::optional<RingElem> search_inverse(const RingElem& x) {
  for (const auto& y : x.ring()->elements(kExhaustiveLimit))
    if ((x * y).is_one()) return y;
  return std::nullopt;
}

}  // namespace

LinSolve solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    Rational s = 1 / a[r][c];
    for (auto& v : a[r]) v *= s;
    b[r] *= s;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  LinSolve out;
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return out;
  std::vector<Rational> x(cols);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  out.x = std::move(x);
  out.unique = r == cols;
  return out;
}

bool RingElem::is_one() const { return *this == ring_->one(); }

const Rational& RingElem::scalar() const {
  if (!std::holds_alternative<Rational>(v_)) throw Error(Errc::UnsupportedCtx, "scalar() on " + ring_->describe());
  return std::get<Rational>(v_);
}

const std::vector<Rational>& RingElem::quot_coeffs() const {
  if (!std::holds_alternative<std::vector<Rational>>(v_))
    throw Error(Errc::UnsupportedCtx, "quot_coeffs() on " + ring_->describe());
  return std::get<std::vector<Rational>>(v_);
}

const LaurentPoly& RingElem::laurent() const {
  if (!std::holds_alternative<LaurentPoly>(v_)) throw Error(Errc::UnsupportedCtx, "laurent() on " + ring_->describe());
  return std::get<LaurentPoly>(v_);
}

RingElem operator+(const RingElem& a, const RingElem& b) {
  require_same_ring(a.ring_, b.ring_, "add");
  return {a.ring_, a.ring_->add(a.v_, b.v_)};
}

RingElem operator-(const RingElem& a, const RingElem& b) {
  require_same_ring(a.ring_, b.ring_, "sub");
  return {a.ring_, a.ring_->sub(a.v_, b.v_)};
}

RingElem operator*(const RingElem& a, const RingElem& b) {
  require_same_ring(a.ring_, b.ring_, "mul");
  return {a.ring_, a.ring_->mul(a.v_, b.v_)};
}

bool operator==(const RingElem& a, const RingElem& b) {
  require_same_ring(a.ring_, b.ring_, "eq");
  return a.v_ == b.v_;
}

RingElem pow(const RingElem& x, unsigned long e) {
  RingElem result = x.ring()->one();
  RingElem base = x;
  while (e) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

RingElem times_int(const RingElem& x, long n) { return x.ring()->from_int(n) * x; }

std::optional<RingElem> try_inv(const RingElem& x) {
  const Ring& r = x.ring();
  switch (r->kind()) {
    case RingKind::Integers: {
      const Rational& q = x.scalar();
      if (q == 1 || q == -1) return x;
      return std::nullopt;
    }
    case RingKind::Rationals:
      if (x.is_zero()) return std::nullopt;
      return r->from_rational(1 / x.scalar());
    case RingKind::PLocal:
      if (x.is_zero() || x.scalar().get_num() % r->prime() == 0) return std::nullopt;
      return r->from_rational(1 / x.scalar());
    case RingKind::ModRing: {
      Integer v = x.scalar().get_num(), out;
      if (mpz_invert(out.get_mpz_t(), v.get_mpz_t(), r->modulus().get_mpz_t()) == 0) return std::nullopt;
      return r->from_integer(out);
    }
    case RingKind::PolyQuotient: {
      if (r->is_finite()) return search_inverse(x);
      std::vector<Rational> e0(r->degree());
      e0[0] = 1;
      LinSolve s = solve_rational(mult_matrix(x), e0);
      if (!s.x || !s.unique) return std::nullopt;
      for (const auto& c : *s.x)
        if (!r->base()->scalar_representable(c)) return std::nullopt;
      return r->from_payload(*s.x);
    }
    case RingKind::Laurent: {
      const auto& t = x.laurent().terms();
      if (t.size() != 1) return std::nullopt;
      Monomial m;
      for (std::size_t i = 0; i < kMaxSymbols; ++i) {
        if (t[0].first[i] != 0 && !r->is_laurent_gen(i)) return std::nullopt;
        m[i] = int16_t(-t[0].first[i]);
      }
      return r->from_payload(LaurentPoly(m, 1 / t[0].second));
    }
  }
  return std::nullopt;
}

RingElem inv(const RingElem& x) {
  if (auto y = try_inv(x)) return *y;
  const Ring& r = x.ring();
  std::string witness;
  if (r->is_finite()) {
    witness = "exhaustive search over " + r->size()->get_str() + " elements found no inverse";
  } else if (r->kind() == RingKind::PolyQuotient) {
    witness = "no inverse with coefficients in " + r->base()->describe();
    if (r->prime() != 0) {
      Rational at_one = 0;
      for (const auto& c : x.quot_coeffs()) at_one += c;
      Ring fp = RingCtx::zmod(r->prime());
      if (fp->scalar_representable(at_one) && fp->from_rational(at_one).is_zero())
        witness += "; residue at T=1 mod " + std::to_string(r->prime()) + " is 0";
    }
  } else {
    witness = "not invertible in " + r->describe();
  }
  throw Error(Errc::NotAUnit, x.str() + ": " + witness);
}

bool is_unit(const RingElem& x) { return try_inv(x).has_value(); }

bool is_zero_divisor(const RingElem& x) {
  if (x.is_zero()) return true;
  const Ring& r = x.ring();
  if (r->is_finite()) {
    for (const auto& y : r->elements(kExhaustiveLimit))
      if (!y.is_zero() && (x * y).is_zero()) return true;
    return false;
  }
  if (r->kind() == RingKind::PolyQuotient) {
    LinSolve s = solve_rational(mult_matrix(x), std::vector<Rational>(r->degree()));
    return !s.unique;
  }
  return false;
}

RingElem div_int(const RingElem& x, const Integer& n) {
  if (n == 0) throw Error(Errc::NotIntegral, "division by zero");
  return x * x.ring()->from_rational(Rational(1) / Rational(n));
}

std::optional<RingElem> exact_div(const RingElem& a, const RingElem& b) {
  require_same_ring(a.ring(), b.ring(), "exact_div");
  if (auto bi = try_inv(b)) return a * *bi;
  const Ring& r = a.ring();
  if (a.is_zero()) return r->zero();
  if (b.is_zero()) return std::nullopt;
  switch (r->kind()) {
    case RingKind::Integers:
    case RingKind::PLocal: {
      Rational q = a.scalar() / b.scalar();
      if (!r->scalar_representable(q)) return std::nullopt;
      return r->from_rational(q);
    }
    case RingKind::ModRing:
      for (const auto& y : r->elements(kExhaustiveLimit))
        if (b * y == a) return y;
      return std::nullopt;
    case RingKind::PolyQuotient: {
      if (r->is_finite()) {
        for (const auto& y : r->elements(kExhaustiveLimit))
          if (b * y == a) return y;
        return std::nullopt;
      }
      LinSolve s = solve_rational(mult_matrix(b), a.quot_coeffs());
      if (!s.x) return std::nullopt;
      for (const auto& c : *s.x)
        if (!r->base()->scalar_representable(c)) return std::nullopt;
      return r->from_payload(*s.x);
    }
    case RingKind::Laurent: {
      const auto& t = b.laurent().terms();
      if (t.size() != 1) throw Error(Errc::UnsupportedCtx, "exact_div by a non-monomial Laurent element");
      std::vector<LaurentPoly::Term> out;
      Monomial inv_m;
      for (std::size_t i = 0; i < kMaxSymbols; ++i) inv_m[i] = int16_t(-t[0].first[i]);
      for (const auto& [m, c] : a.laurent().terms()) out.emplace_back(m * inv_m, c / t[0].second);
      try {
        return r->from_payload(LaurentPoly::from_terms(std::move(out)));
      } catch (const Error&) {
        return std::nullopt;
      }
    }
    default: return std::nullopt;
  }
}

std::optional<long> p_val(const RingElem& x) {
  const Ring& r = x.ring();
  const unsigned p = r->prime();
  if (x.is_zero()) return std::nullopt;
  switch (r->kind()) {
    case RingKind::Rationals:
    case RingKind::PLocal: return val_of(x.scalar(), p);
    case RingKind::ModRing: {
      if (p == 0) throw Error(Errc::UnsupportedCtx, "p_val needs a prime-power modulus");
      return val_of(x.scalar(), p);
    }
    case RingKind::Laurent: {
      long v = LONG_MAX;
      for (const auto& [m, c] : x.laurent().terms()) v = std::min(v, val_of(c, p));
      return v;
    }
    case RingKind::PolyQuotient: {
      if (p == 0) throw Error(Errc::UnsupportedCtx, "p_val on " + r->describe());
      long v = LONG_MAX;
      for (const auto& c : x.quot_coeffs())
        if (c != 0) v = std::min(v, val_of(c, p));
      return v;
    }
    default: throw Error(Errc::UnsupportedCtx, "p_val on " + r->describe());
  }
}

bool is_p_integral(const RingElem& x) {
  const Ring& r = x.ring();
  switch (r->kind()) {
    case RingKind::Integers:
    case RingKind::ModRing:
    case RingKind::PLocal: return true;
    case RingKind::Laurent:
      for (const auto& [m, c] : x.laurent().terms()) {
        if (val_of(c, r->prime()) < 0) return false;
        for (std::size_t i = 0; i < r->gens().size(); ++i)
          if (m[i] < 0) return false;
      }
      return true;
    default: {
      auto v = p_val(x);
      return !v || *v >= 0;
    }
  }
}

std::optional<unsigned> nilpotency_index(const RingElem& x, unsigned bound) {
  RingElem acc = x;
  for (unsigned k = 1; k <= bound; ++k) {
    if (acc.is_zero()) return k;
    acc *= x;
  }
  return std::nullopt;
}

std::optional<unsigned> nilpotency_by_squaring(const RingElem& x, unsigned bound) {
  RingElem acc = x;
  for (unsigned k = 1; k <= bound; k *= 2) {
    if (acc.is_zero()) return k;
    acc *= acc;
  }
  return std::nullopt;
}

Specializer::Specializer(Ring source, Ring target, std::map<std::string, RingElem, std::less<>> bindings)
    : source_(std::move(source)), target_(std::move(target)) {
  if (source_->kind() == RingKind::Laurent) {
    binding_.resize(source_->gens().size());
    for (auto& [name, value] : bindings) {
      auto idx = source_->gen_index(name);
      if (!idx) throw Error(Errc::UnboundSymbol, name + " is not a generator of " + source_->describe());
      require_same_ring(value.ring(), target_, "specialize binding " + name);
      binding_[*idx] = value;
    }
    pos_pow_.resize(binding_.size());
    neg_pow_.resize(binding_.size());
  }
}

const RingElem& Specializer::power(std::size_t gen, int e) const {
  if (!binding_[gen]) throw Error(Errc::UnboundSymbol, source_->gens()[gen] + " has no binding");
  auto& cache = e >= 0 ? pos_pow_[gen] : neg_pow_[gen];
  std::size_t k = std::size_t(e >= 0 ? e : -e);
  if (cache.empty()) {
    cache.push_back(target_->one());
    cache.push_back(e >= 0 ? *binding_[gen] : inv(*binding_[gen]));
  }
  while (cache.size() <= k) cache.push_back(cache.back() * cache[1]);
  return cache[k];
}

RingElem Specializer::operator()(const RingElem& x) const {
  require_same_ring(x.ring(), source_, "specialize");
  auto coeff = [&](const Rational& c) -> RingElem {
    auto it = coeff_cache_.find(c);
    if (it != coeff_cache_.end()) return it->second;
    RingElem v = target_->from_rational(c);
    coeff_cache_.emplace(c, v);
    return v;
  };
  switch (source_->kind()) {
    case RingKind::Laurent: {
      RingElem acc = target_->zero();
      for (const auto& [m, c] : x.laurent().terms()) {
        RingElem term = coeff(c);
        for (std::size_t i = 0; i < binding_.size(); ++i)
          if (m[i] != 0) term *= power(i, m[i]);
        acc += term;
      }
      return acc;
    }
    case RingKind::Integers:
    case RingKind::Rationals:
    case RingKind::PLocal: return coeff(x.scalar());
    default:
      if (same_ring(source_, target_)) return x;
      throw Error(Errc::UnsupportedCtx, "specialize from " + source_->describe());
  }
}

RingElem specialize(const std::map<std::string, RingElem, std::less<>>& bindings, const Ring& target,
                    const RingElem& x) {
  return Specializer(x.ring(), target, bindings)(x);
}

RingElem sample(const Ring& ctx, std::uint64_t seed, const std::optional<SamplePolicy>& policy) {
  if (auto sz = ctx->size(); sz && sz->fits_ulong_p()) {
    // Each block of |R| consecutive seeds is an affine permutation of the
    // enumeration order, so every element is hit once per block.
    const std::uint64_t n = sz->get_ui();
    std::mt19937_64 rng(seed / n);
    std::uint64_t a;
    do a = rng() % n; while (std::gcd(a, n) != 1);
    std::uint64_t b = rng() % n;
    std::uint64_t idx = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * (seed % n) + b) % n);
    if (ctx->kind() == RingKind::ModRing) return ctx->from_integer(Integer(static_cast<unsigned long>(idx)));
    const unsigned long m = ctx->base()->modulus().get_ui();
    std::vector<Rational> c(ctx->degree());
    for (auto& x : c) {
      x = static_cast<unsigned long>(idx % m);
      idx /= m;
    }
    return ctx->from_payload(std::move(c));
  }
  if (!policy) throw Error(Errc::UnsupportedCtx, "sampling " + ctx->describe() + " needs a policy");
  std::mt19937_64 rng(seed);
  auto draw = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  auto scalar = [&](const Ring& r) {
    Rational q(draw(-policy->coeff_bound, policy->coeff_bound));
    if (r->kind() == RingKind::Integers || policy->den_bound <= 1) return q;
    long d = draw(1, policy->den_bound);
    if (r->kind() == RingKind::PLocal)
      while (d % long(r->prime()) == 0) --d;
    q /= Rational(d);
    q.canonicalize();
    return q;
  };
  switch (ctx->kind()) {
    case RingKind::PolyQuotient: {
      std::vector<Rational> c(ctx->degree());
      for (auto& x : c) x = ctx->base()->scalar_normalize(scalar(ctx->base()));
      return ctx->from_payload(std::move(c));
    }
    case RingKind::Laurent: {
      std::vector<LaurentPoly::Term> terms;
      int n = int(draw(0, policy->max_terms));
      for (int t = 0; t < n; ++t) {
        Monomial m;
        for (std::size_t i = 0; i < ctx->gens().size(); ++i) {
          long lo = ctx->is_laurent_gen(i) ? -policy->max_degree : 0;
          m[i] = int16_t(draw(lo, policy->max_degree));
        }
        terms.emplace_back(m, scalar(ctx));
      }
      return ctx->from_payload(LaurentPoly::from_terms(std::move(terms)));
    }
    default: return ctx->from_rational(scalar(ctx));
  }
}

}  // namespace wd
