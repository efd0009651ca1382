#pragma once

// Exact commutative coefficient rings.
//
// A RingCtx describes one of
//   int                      the integers
//   rat:<p>                  the rationals, with a distinguished prime p
//   plocal:<p>               Z_(p): rationals whose denominator is prime to p
//   zmod:<m>                 Z/(m), m >= 2
//   polyquot:<base>;<f>      base[T]/(f) for a monic univariate f
//   laurent:p=..;gens=..     Q[gens] with selected generators invertible
//
// Elements are immutable values in canonical normal form, so equality is
// structural.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "wittdeform/error.hpp"

namespace wd {

using Rational = mpq_class;
using Integer = mpz_class;

inline constexpr std::size_t kMaxSymbols = 24;

/// Exponent vector of a Laurent monomial, indexed by generator position.
struct Monomial {
  std::array<int16_t, kMaxSymbols> e{};

  int16_t operator[](std::size_t i) const { return e[i]; }
  int16_t& operator[](std::size_t i) { return e[i]; }
  bool is_one() const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

Monomial operator*(const Monomial& a, const Monomial& b);

/// Sparse Laurent polynomial over Q with terms sorted by monomial.
class LaurentPoly {
 public:
  using Term = std::pair<Monomial, Rational>;

  LaurentPoly() = default;
  explicit LaurentPoly(const Rational& c);
  LaurentPoly(const Monomial& m, const Rational& c);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<Rational> as_constant() const;

  LaurentPoly operator-() const;
  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly scaled(const Rational& c) const;
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  /// Builds from unsorted, possibly repeated terms.
  static LaurentPoly from_terms(std::vector<Term> terms);

 private:
  std::vector<Term> terms_;
};

class RingCtx;
class RingElem;
using Ring = std::shared_ptr<const RingCtx>;

enum class RingKind { Integers, Rationals, PLocal, ModRing, PolyQuotient, Laurent };

/// Bounded sampling for infinite rings (property-test inputs).
struct SamplePolicy {
  long coeff_bound = 5;   // numerators drawn from [-bound, bound]
  long den_bound = 1;     // denominators from [1, den_bound] (prime to p where required)
  int max_terms = 3;      // Laurent: number of monomials
  int max_degree = 2;     // Laurent: per-generator exponent bound
};

class RingCtx : public std::enable_shared_from_this<RingCtx> {
 public:
  using Payload = std::variant<Rational, std::vector<Rational>, LaurentPoly>;

  static Ring integers();
  static Ring rationals(unsigned p);
  static Ring plocal(unsigned p);
  static Ring zmod(const Integer& m);
  /// modulus: coefficients low to high of a monic polynomial of degree >= 1.
  static Ring polyquot(Ring base, std::vector<Rational> modulus, std::string var = "T");
  static Ring laurent(unsigned p, std::vector<std::string> gens, std::vector<std::string> laurent_gens,
                      std::vector<std::pair<std::string, std::string>> subs = {});

  RingKind kind() const { return kind_; }
  /// Context prime used for p-locality questions; 0 when none is attached.
  unsigned prime() const { return prime_; }
  const Integer& modulus() const { return modulus_; }
  const Ring& base() const { return base_; }
  const std::vector<Rational>& poly_modulus() const { return poly_mod_; }
  std::size_t degree() const { return poly_mod_.empty() ? 0 : poly_mod_.size() - 1; }
  const std::string& var() const { return var_; }
  const std::vector<std::string>& gens() const { return gens_; }
  bool is_laurent_gen(std::size_t i) const { return laurent_[i]; }
  std::optional<std::size_t> gen_index(std::string_view name) const;
  const std::string& describe() const { return desc_; }

  bool contains_q() const;
  bool is_finite() const;
  /// Characteristic-p test: p * 1 == 0.
  bool char_is(unsigned p) const;
  std::optional<Integer> size() const;
  /// All elements in a deterministic order (finite rings only, bounded by limit).
  std::vector<RingElem> elements(std::size_t limit = 1u << 20) const;

  RingElem zero() const;
  RingElem one() const;
  RingElem from_int(long v) const;
  RingElem from_integer(const Integer& v) const;
  /// Image of a rational; NotIntegral when the denominator is not invertible.
  RingElem from_rational(const Rational& q) const;
  RingElem symbol(std::string_view name) const;
  /// Class of the polynomial variable of a quotient ring.
  RingElem var_class() const;
  RingElem parse(std::string_view text) const;
  RingElem from_payload(Payload p) const;

  // Arithmetic on canonical payloads; callers go through RingElem.
  Payload add(const Payload& a, const Payload& b) const;
  Payload sub(const Payload& a, const Payload& b) const;
  Payload mul(const Payload& a, const Payload& b) const;
  Payload neg(const Payload& a) const;
  bool is_zero(const Payload& a) const;
  std::string format(const Payload& a) const;

  /// Canonicalizes a scalar for scalar kinds (and quotient coefficients).
  Rational scalar_normalize(const Rational& q) const;
  bool scalar_representable(const Rational& q) const;

 private:
  RingCtx() = default;
  Payload canonical_laurent(LaurentPoly lp) const;
  std::vector<Rational> reduce_quot(std::vector<Rational> c) const;

  RingKind kind_ = RingKind::Integers;
  unsigned prime_ = 0;
  Integer modulus_;
  Ring base_;
  std::vector<Rational> poly_mod_;
  std::string var_;
  std::vector<std::string> gens_;
  std::vector<bool> laurent_;
  std::map<std::string, LaurentPoly, std::less<>> bound_;
  std::string desc_;
};

bool same_ring(const Ring& a, const Ring& b);
void require_same_ring(const Ring& a, const Ring& b, std::string_view where);

class RingElem {
 public:
  RingElem() = default;
  RingElem(Ring r, RingCtx::Payload p) : ring_(std::move(r)), v_(std::move(p)) {}

  const Ring& ring() const { return ring_; }
  const RingCtx::Payload& payload() const { return v_; }
  bool valid() const { return ring_ != nullptr; }
  bool is_zero() const { return ring_->is_zero(v_); }
  bool is_one() const;
  std::string str() const { return ring_->format(v_); }

  /// Scalar rings only: the rational payload.
  const Rational& scalar() const;
  /// Quotient rings only: coefficient vector, low to high.
  const std::vector<Rational>& quot_coeffs() const;
  /// Laurent rings only.
  const LaurentPoly& laurent() const;

  RingElem operator-() const { return {ring_, ring_->neg(v_)}; }
  friend RingElem operator+(const RingElem& a, const RingElem& b);
  friend RingElem operator-(const RingElem& a, const RingElem& b);
  friend RingElem operator*(const RingElem& a, const RingElem& b);
  RingElem& operator+=(const RingElem& b) { return *this = *this + b; }
  RingElem& operator-=(const RingElem& b) { return *this = *this - b; }
  RingElem& operator*=(const RingElem& b) { return *this = *this * b; }
  friend bool operator==(const RingElem& a, const RingElem& b);

 private:
  Ring ring_;
  RingCtx::Payload v_;
};

inline std::ostream& operator<<(std::ostream& os, const RingElem& x) { return os << x.str(); }

RingElem pow(const RingElem& x, unsigned long e);
RingElem times_int(const RingElem& x, long n);

/// Multiplicative inverse; NotAUnit (with a witness message) on failure.
RingElem inv(const RingElem& x);
std::optional<RingElem> try_inv(const RingElem& x);
bool is_unit(const RingElem& x);
bool is_zero_divisor(const RingElem& x);
/// x / n for an integer n; NotIntegral when n is not invertible.
RingElem div_int(const RingElem& x, const Integer& n);
/// Exact quotient y with b*y == a when one exists (unique over domains).
std::optional<RingElem> exact_div(const RingElem& a, const RingElem& b);

/// p-adic valuation; nullopt encodes +infinity (the zero element).
std::optional<long> p_val(const RingElem& x);
bool is_p_integral(const RingElem& x);

/// Least k <= bound with x^k == 0.
std::optional<unsigned> nilpotency_index(const RingElem& x, unsigned bound);
/// Least power of two 2^j <= bound with x^(2^j) == 0, found by repeated squaring.
std::optional<unsigned> nilpotency_by_squaring(const RingElem& x, unsigned bound);

/// Dense linear system over Q. x is some solution when consistent; unique
/// reports a trivial kernel.
struct LinSolve {
  std::optional<std::vector<Rational>> x;
  bool unique = false;
};
LinSolve solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> b);

/// Ring homomorphism out of a Laurent ring: bindings for generators plus the
/// canonical map Q -> target on coefficients.
class Specializer {
 public:
  Specializer(Ring source, Ring target, std::map<std::string, RingElem, std::less<>> bindings);

  RingElem operator()(const RingElem& x) const;
  const Ring& target() const { return target_; }

 private:
  const RingElem& power(std::size_t gen, int e) const;

  Ring source_;
  Ring target_;
  std::vector<std::optional<RingElem>> binding_;
  mutable std::vector<std::vector<RingElem>> pos_pow_;
  mutable std::vector<std::vector<RingElem>> neg_pow_;
  mutable std::map<Rational, RingElem> coeff_cache_;
};

RingElem specialize(const std::map<std::string, RingElem, std::less<>>& bindings, const Ring& target,
                    const RingElem& x);

/// Deterministic pseudo-random element. Finite rings: seeds 0..|R|-1 cover
/// every element. Infinite rings need a policy, else UnsupportedCtx.
RingElem sample(const Ring& ctx, std::uint64_t seed, const std::optional<SamplePolicy>& policy = std::nullopt);

/// Parses the ring mini-language.
Ring ring_make(std::string_view spec);

bool is_prime(unsigned long n);

}  // namespace wd
