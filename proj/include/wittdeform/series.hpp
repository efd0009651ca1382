#pragma once

// Truncated power series in up to four variables T, X, Y, Z. Coefficients of
// total degree above the cap are not represented.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wittdeform/exactring.hpp"

namespace wd {

enum class Var : uint8_t { T = 0, X = 1, Y = 2, Z = 3 };
inline constexpr std::size_t kSeriesVars = 4;

char var_char(Var v);
Var var_from_char(char c);

/// Exponents of (T, X, Y, Z). Ordered by total degree, then with higher
/// powers of earlier variables first (X^2 before X*Y before Y^2).
struct SMono {
  uint16_t deg = 0;
  std::array<uint16_t, kSeriesVars> e{};

  static SMono of(std::array<uint16_t, kSeriesVars> e);
  static SMono power(Var v, unsigned k);
  friend SMono operator*(const SMono& a, const SMono& b);
  friend std::strong_ordering operator<=>(const SMono& a, const SMono& b) {
    if (auto c = a.deg <=> b.deg; c != 0) return c;
    return b.e <=> a.e;
  }
  friend bool operator==(const SMono&, const SMono&) = default;
};

class TruncSeries {
 public:
  using Coeffs = std::map<SMono, RingElem>;

  TruncSeries() = default;
  /// vars is a bitmask of (1 << Var).
  TruncSeries(Ring ring, unsigned vars, unsigned cap);

  static TruncSeries constant(const RingElem& c, unsigned vars, unsigned cap);
  static TruncSeries variable(const Ring& ring, Var v, unsigned vars, unsigned cap);
  static TruncSeries monomial(const RingElem& c, const SMono& m, unsigned vars, unsigned cap);

  const Ring& ring() const { return ring_; }
  unsigned vars() const { return vars_; }
  unsigned cap() const { return cap_; }
  const Coeffs& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  RingElem coeff(const SMono& m) const;
  RingElem constant_term() const { return coeff(SMono{}); }
  /// Lowest total degree with a nonzero coefficient; nullopt for zero.
  std::optional<unsigned> order() const;
  /// Homogeneous part of degree d.
  TruncSeries slice(unsigned d) const;

  void set(const SMono& m, const RingElem& c);
  void add_to(const SMono& m, const RingElem& c);

  TruncSeries truncated(unsigned cap) const;
  TruncSeries with_vars(unsigned vars) const;
  TruncSeries scaled(const RingElem& c) const;
  TruncSeries map_coeffs(const Ring& target, const std::function<RingElem(const RingElem&)>& f) const;

  TruncSeries operator-() const;
  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
  friend bool operator==(const TruncSeries& a, const TruncSeries& b);

  /// Canonical literal: "(c)*X^i*Y^j" terms joined by " + ", "0" when empty.
  std::string str() const;
  static TruncSeries parse(const Ring& ring, std::string_view text, unsigned vars, unsigned cap);

 private:
  Ring ring_;
  unsigned vars_ = 0;
  unsigned cap_ = 0;
  Coeffs c_;
};

inline std::ostream& operator<<(std::ostream& os, const TruncSeries& x) { return os << x.str(); }

unsigned var_bit(Var v);

/// Monomial as text ("1", "X^2*Y").
std::string mono_str(const SMono& m);
/// First monomial (in series order) where a and b differ, rendered with both
/// coefficients; nullopt when equal.
std::optional<std::string> first_difference(const TruncSeries& a, const TruncSeries& b);

TruncSeries s_mul(const TruncSeries& f, const TruncSeries& g);
TruncSeries s_pow(const TruncSeries& f, unsigned long e);
/// NonUnitConstantTerm unless f(0) is a unit.
TruncSeries s_inv(const TruncSeries& f);
/// f(g) for univariate f; NonzeroConstantTerm unless g(0) == 0. Output cap is f's.
TruncSeries s_subst(const TruncSeries& f, const TruncSeries& g);
/// Replaces each variable v of f by subs[v] (all with zero constant term);
/// variables without an entry stay. Output truncated at out_cap.
TruncSeries s_subst_multi(const TruncSeries& f, const std::map<Var, TruncSeries>& subs, unsigned out_cap);
/// f^c = sum_n binom(c, n) (f - 1)^n.
TruncSeries s_binom_pow(const TruncSeries& f, const RingElem& c);
TruncSeries s_exp(const TruncSeries& f);
TruncSeries s_log(const TruncSeries& f);

enum class ExpandStatus { Unique, Ambiguous, Unsolvable, BudgetExceeded };

struct PsiExpansion {
  ExpandStatus status = ExpandStatus::Unsolvable;
  std::vector<std::vector<RingElem>> solutions;  // each d_0..d_k
  std::string detail;
};

/// Writes g = sum_k d_k psi^k up to the cap of g, for k <= kmax.
PsiExpansion psi_adic_expand(const TruncSeries& g, const TruncSeries& psi, unsigned kmax,
                             std::size_t budget = 1u << 20);

}  // namespace wd
