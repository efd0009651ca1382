#pragma once

// p-typical Witt vectors of finite length over an exact coefficient ring.
//
// Length bookkeeping: F and F^(lambda) shorten by one, V lengthens by one,
// the T-map keeps the length by truncating its V^n sum.

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wittdeform/exactring.hpp"

namespace wd {

enum class OpKind { Sum, Prod, Neg, Frobenius, TMapComponent };

std::string_view op_name(OpKind k);
OpKind op_from_name(std::string_view name);

/// Universal polynomials with integer coefficients for one ring operation at
/// one length. Symbols are x0.. (and y0.. or a0.. for binary operations).
struct OpPolyTable {
  static constexpr int kFormatVersion = 1;

  unsigned p = 0;
  unsigned m = 0;
  OpKind op = OpKind::Sum;
  Ring ring;                       // Q[symbols] the polynomials live in
  std::vector<std::string> symbols;
  std::vector<RingElem> polys;     // output components
  std::string body_sha256;

  /// Canonical text of the polynomial block (the hashed body).
  std::string body_text() const;
};

/// Largest length derived for p (default 5 for p=2, 4 for p=3, 3 for p=5,
/// 2 otherwise). Longer requests fail with BudgetExceeded.
unsigned max_length(unsigned p);
void set_max_length(unsigned p, unsigned m);

/// Derives by the triangular phantom solve; every division by p^n is checked
/// to leave integer coefficients (IntegralityFailure otherwise).
std::shared_ptr<const OpPolyTable> derive_op_polys(unsigned p, unsigned m, OpKind op);

/// Cached access: memory first, then the on-disk cache, then derivation.
/// Concurrent requests for one key derive once.
std::shared_ptr<const OpPolyTable> op_table(unsigned p, unsigned m, OpKind op);

/// Reads the on-disk table; null when absent, stale or failing its checksum.
std::shared_ptr<const OpPolyTable> load_cached_table(unsigned p, unsigned m, OpKind op);

/// Cache directory: $WITTDEFORM_CACHE_DIR, else $HOME/.cache/wittdeform.
std::string cache_dir();

std::string sha256_hex(std::string_view data);

struct WittVec {
  unsigned p = 0;
  std::vector<RingElem> c;

  WittVec() = default;
  WittVec(unsigned p_, std::vector<RingElem> comps);

  std::size_t length() const { return c.size(); }
  const Ring& ring() const { return c.front().ring(); }
  const RingElem& operator[](std::size_t i) const { return c[i]; }
  bool is_zero() const;
  std::string str() const;
  friend bool operator==(const WittVec& a, const WittVec& b);
};

inline std::ostream& operator<<(std::ostream& os, const WittVec& x) { return os << x.str(); }

WittVec witt_zero(const Ring& r, unsigned p, std::size_t m);
WittVec teichmuller(const RingElem& lambda, unsigned p, std::size_t m);
/// The Witt vector n * [1].
WittVec witt_int(const Ring& r, unsigned p, std::size_t m, long n);
/// Vector of fresh symbols prefix0..prefix{m-1} from a Laurent ring.
WittVec generic_vec(const Ring& r, unsigned p, const std::string& prefix, std::size_t m);

std::vector<RingElem> ghost(const WittVec& w);

WittVec witt_add(const WittVec& x, const WittVec& y);
WittVec witt_mul(const WittVec& x, const WittVec& y);
WittVec witt_neg(const WittVec& x);
WittVec witt_sub(const WittVec& x, const WittVec& y);
/// Witt-scalar multiple n * w.
WittVec witt_times(long n, const WittVec& w);

WittVec frobenius(const WittVec& w);
WittVec verschiebung(const WittVec& w);
WittVec truncate(const WittVec& w, std::size_t m);
WittVec pad(const WittVec& w, std::size_t m);

/// ([a] w)_n = a^{p^n} w_n.
WittVec teich_scale(const RingElem& a, const WittVec& w);
/// F - [lambda^{p-1}], length m -> m-1.
WittVec f_lambda(const RingElem& lambda, const WittVec& w);
/// T_a(w) = sum_n V^n([a_n] w), truncated to the length of w.
WittVec t_map(const WittVec& a, const WittVec& w);
/// Componentwise p^k-th power.
WittVec comp_power(const WittVec& w, unsigned k);

struct MakeA {
  WittVec a;
  std::string method;  // "closed-form" or "search"
};

/// a with T_a([lambda^{p^l}]) = p^l [lambda] at length m. On finite rings the
/// search prefers a_0 = hint when the hint works.
MakeA make_a(const RingElem& lambda, unsigned p, unsigned l, std::size_t m,
             const std::optional<RingElem>& a0_hint = std::nullopt);

/// Evaluates a universal table at concrete inputs (x then y / a).
std::vector<RingElem> eval_table(const OpPolyTable& t, const std::vector<RingElem>& inputs);

}  // namespace wd
