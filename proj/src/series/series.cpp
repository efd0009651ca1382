#include <cctype>
#include <sstream>

#include "wittdeform/series.hpp"

namespace wd {

char var_char(Var v) { return "TXYZ"[static_cast<int>(v)]; }

Var var_from_char(char c) {
  switch (c) {
    case 'T': return Var::T;
    case 'X': return Var::X;
    case 'Y': return Var::Y;
    case 'Z': return Var::Z;
  }
  throw Error(Errc::ParseError, std::string("unknown series variable '") + c + "'");
}

unsigned var_bit(Var v) { return 1u << static_cast<unsigned>(v); }

SMono SMono::of(std::array<uint16_t, kSeriesVars> e) {
  SMono m;
  m.e = e;
  for (auto x : e) m.deg = uint16_t(m.deg + x);
  return m;
}

SMono SMono::power(Var v, unsigned k) {
  SMono m;
  m.e[static_cast<std::size_t>(v)] = uint16_t(k);
  m.deg = uint16_t(k);
  return m;
}

SMono operator*(const SMono& a, const SMono& b) {
  SMono m;
  for (std::size_t i = 0; i < kSeriesVars; ++i) m.e[i] = uint16_t(a.e[i] + b.e[i]);
  m.deg = uint16_t(a.deg + b.deg);
  return m;
}

TruncSeries::TruncSeries(Ring ring, unsigned vars, unsigned cap) : ring_(std::move(ring)), vars_(vars), cap_(cap) {}

TruncSeries TruncSeries::constant(const RingElem& c, unsigned vars, unsigned cap) {
  TruncSeries s(c.ring(), vars, cap);
  s.set(SMono{}, c);
  return s;
}

TruncSeries TruncSeries::variable(const Ring& ring, Var v, unsigned vars, unsigned cap) {
  TruncSeries s(ring, vars | var_bit(v), cap);
  s.set(SMono::power(v, 1), ring->one());
  return s;
}

TruncSeries TruncSeries::monomial(const RingElem& c, const SMono& m, unsigned vars, unsigned cap) {
  TruncSeries s(c.ring(), vars, cap);
  s.set(m, c);
  return s;
}

RingElem TruncSeries::coeff(const SMono& m) const {
  auto it = c_.find(m);
  return it == c_.end() ? ring_->zero() : it->second;
}

std::optional<unsigned> TruncSeries::order() const {
  if (c_.empty()) return std::nullopt;
  return c_.begin()->first.deg;
}

TruncSeries TruncSeries::slice(unsigned d) const {
  TruncSeries s(ring_, vars_, cap_);
  for (const auto& [m, c] : c_)
    if (m.deg == d) s.c_.emplace(m, c);
  return s;
}

void TruncSeries::set(const SMono& m, const RingElem& c) {
  if (m.deg > cap_) return;
  for (std::size_t i = 0; i < kSeriesVars; ++i)
    if (m.e[i] && !(vars_ & (1u << i)))
      throw Error(Errc::LengthMismatch, std::string("series has no variable ") + var_char(Var(i)));
  if (c.is_zero()) {
    c_.erase(m);
  } else {
    c_.insert_or_assign(m, c);
  }
}

void TruncSeries::add_to(const SMono& m, const RingElem& c) {
  if (m.deg > cap_ || c.is_zero()) return;
  auto it = c_.find(m);
  if (it == c_.end()) {
    set(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) c_.erase(it);
}

TruncSeries TruncSeries::truncated(unsigned cap) const {
  TruncSeries s(ring_, vars_, cap);
  for (const auto& [m, c] : c_) {
    if (m.deg > cap) break;
    s.c_.emplace(m, c);
  }
  return s;
}

TruncSeries TruncSeries::with_vars(unsigned vars) const {
  TruncSeries s(ring_, vars_ | vars, cap_);
  s.c_ = c_;
  return s;
}

TruncSeries TruncSeries::scaled(const RingElem& k) const {
  TruncSeries s(ring_, vars_, cap_);
  for (const auto& [m, c] : c_) s.add_to(m, c * k);
  return s;
}

TruncSeries TruncSeries::map_coeffs(const Ring& target, const std::function<RingElem(const RingElem&)>& f) const {
  TruncSeries s(target, vars_, cap_);
  for (const auto& [m, c] : c_) s.add_to(m, f(c));
  return s;
}

TruncSeries TruncSeries::operator-() const {
  TruncSeries s = *this;
  for (auto& [m, c] : s.c_) c = -c;
  return s;
}

namespace {

void require_compatible(const TruncSeries& a, const TruncSeries& b, std::string_view where) {
  require_same_ring(a.ring(), b.ring(), where);
  if (a.cap() != b.cap())
    throw Error(Errc::CapMismatch, std::string(where) + ": caps " + std::to_string(a.cap()) + " and " +
                                       std::to_string(b.cap()));
}

}  // namespace

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
  require_compatible(a, b, "series add");
  TruncSeries s = a.with_vars(b.vars());
  for (const auto& [m, c] : b.coeffs()) s.add_to(m, c);
  return s;
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
  require_compatible(a, b, "series sub");
  TruncSeries s = a.with_vars(b.vars());
  for (const auto& [m, c] : b.coeffs()) s.add_to(m, -c);
  return s;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  require_compatible(a, b, "series mul");
  TruncSeries s(a.ring(), a.vars() | b.vars(), a.cap());
  const unsigned cap = a.cap();
  for (const auto& [ma, ca] : a.coeffs()) {
    if (ma.deg > cap) break;
    for (const auto& [mb, cb] : b.coeffs()) {
      if (ma.deg + mb.deg > cap) break;
      s.add_to(ma * mb, ca * cb);
    }
  }
  return s;
}

bool operator==(const TruncSeries& a, const TruncSeries& b) {
  require_compatible(a, b, "series eq");
  if (a.coeffs().size() != b.coeffs().size()) return false;
  auto i = a.coeffs().begin();
  for (auto j = b.coeffs().begin(); j != b.coeffs().end(); ++i, ++j)
    if (!(i->first == j->first) || !(i->second == j->second)) return false;
  return true;
}

std::string TruncSeries::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : c_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (std::size_t i = 0; i < kSeriesVars; ++i) {
      if (!m.e[i]) continue;
      os << "*" << var_char(Var(i));
      if (m.e[i] != 1) os << "^" << m.e[i];
    }
  }
  return os.str();
}

TruncSeries TruncSeries::parse(const Ring& ring, std::string_view text, unsigned vars, unsigned cap) {
  TruncSeries s(ring, vars, cap);
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(Errc::ParseError, "series at position " + std::to_string(pos) + ": " + msg);
  };
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  if (text.substr(pos) == "0") return s;
  bool neg = pos < text.size() && text[pos] == '-';
  if (neg) ++pos;
  for (;;) {
    skip();
    RingElem coef = ring->one();
    bool need_star = false;
    bool had_coef = false;
    if (pos < text.size() && text[pos] == '(') {
      int depth = 0;
      std::size_t start = pos;
      for (; pos < text.size(); ++pos) {
        if (text[pos] == '(') ++depth;
        if (text[pos] == ')' && --depth == 0) break;
      }
      if (pos >= text.size()) fail("unbalanced parenthesis");
      coef = ring->parse(text.substr(start + 1, pos - start - 1));
      ++pos;
      need_star = true;
      had_coef = true;
    } else if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::size_t start = pos;
      while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/')) ++pos;
      coef = ring->parse(text.substr(start, pos - start));
      need_star = true;
      had_coef = true;
    }
    std::array<uint16_t, kSeriesVars> e{};
    bool any_var = false;
    for (;;) {
      skip();
      if (need_star) {
        if (pos >= text.size() || text[pos] != '*') break;
        ++pos;
        skip();
      }
      if (pos >= text.size() || std::string_view("TXYZ").find(text[pos]) == std::string_view::npos) {
        if (need_star) fail("expected a series variable");
        break;
      }
      Var v = var_from_char(text[pos++]);
      unsigned k = 1;
      skip();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        skip();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) fail("expected an exponent");
        k = unsigned(std::stoul(std::string(text.substr(start, pos - start))));
      }
      e[static_cast<std::size_t>(v)] = uint16_t(e[static_cast<std::size_t>(v)] + k);
      any_var = true;
      need_star = true;
    }
    if (!any_var && !had_coef) fail("expected a term");
    s.add_to(SMono::of(e), neg ? -coef : coef);
    skip();
    if (pos >= text.size()) break;
    if (text[pos] != '+' && text[pos] != '-') fail("expected '+' or '-'");
    neg = text[pos++] == '-';
  }
  return s;
}

std::string mono_str(const SMono& m) {
  std::string out;
  for (std::size_t i = 0; i < kSeriesVars; ++i) {
    if (!m.e[i]) continue;
    if (!out.empty()) out += "*";
    out += var_char(Var(i));
    if (m.e[i] != 1) out += "^" + std::to_string(m.e[i]);
  }
  return out.empty() ? "1" : out;
}

std::optional<std::string> first_difference(const TruncSeries& a, const TruncSeries& b) {
  TruncSeries d = a - b;
  if (d.is_zero()) return std::nullopt;
  const SMono& m = d.coeffs().begin()->first;
  return "coefficient of " + mono_str(m) + ": " + a.coeff(m).str() + " vs " + b.coeff(m).str();
}

TruncSeries s_mul(const TruncSeries& f, const TruncSeries& g) { return f * g; }

TruncSeries s_pow(const TruncSeries& f, unsigned long e) {
  TruncSeries r = TruncSeries::constant(f.ring()->one(), f.vars(), f.cap());
  TruncSeries b = f;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

TruncSeries s_inv(const TruncSeries& f) {
  auto c0 = try_inv(f.constant_term());
  if (!c0) throw Error(Errc::NonUnitConstantTerm, "constant term " + f.constant_term().str() + " is not a unit");
  // f = c0^{-1}(1 + u) with u(0) = 0, so 1/f = c0 * sum (-u)^n.
  TruncSeries one = TruncSeries::constant(f.ring()->one(), f.vars(), f.cap());
  TruncSeries mu = one - f.scaled(*c0);
  TruncSeries acc = one;
  TruncSeries term = one;
  for (unsigned n = 1; n <= f.cap(); ++n) {
    term = term * mu;
    if (term.is_zero()) break;
    acc = acc + term;
  }
  return acc.scaled(*c0);
}

}  // namespace wd
