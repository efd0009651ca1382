#include <algorithm>

#include "wittdeform/exactring.hpp"

namespace wd {

std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::MalformedSpec: return "MalformedSpec";
    case Errc::ParseError: return "ParseError";
    case Errc::CtxMismatch: return "CtxMismatch";
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::UnsupportedCtx: return "UnsupportedCtx";
    case Errc::NotIntegral: return "NotIntegral";
    case Errc::UnboundSymbol: return "UnboundSymbol";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::LengthTooShort: return "LengthTooShort";
    case Errc::IntegralityFailure: return "IntegralityFailure";
    case Errc::NonUnitConstantTerm: return "NonUnitConstantTerm";
    case Errc::NonzeroConstantTerm: return "NonzeroConstantTerm";
    case Errc::CapMismatch: return "CapMismatch";
    case Errc::NonInvertibleFactorial: return "NonInvertibleFactorial";
    case Errc::NonUnitBase: return "NonUnitBase";
    case Errc::NoSuchA: return "NoSuchA";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::RelationViolated: return "RelationViolated";
    case Errc::BinomialDivisibilityFailure: return "BinomialDivisibilityFailure";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::ScenarioInvalid: return "ScenarioInvalid";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::NotInKernel: return "NotInKernel";
    case Errc::UnsupportedE: return "UnsupportedE";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

bool Monomial::is_one() const {
  return std::all_of(e.begin(), e.end(), [](int16_t x) { return x == 0; });
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxSymbols; ++i) {
    int s = int(a.e[i]) + int(b.e[i]);
    if (s > INT16_MAX || s < INT16_MIN) throw Error(Errc::UnsupportedCtx, "monomial exponent overflow");
    r.e[i] = int16_t(s);
  }
  return r;
}

LaurentPoly::LaurentPoly(const Rational& c) {
  if (c != 0) terms_.emplace_back(Monomial{}, c);
}

LaurentPoly::LaurentPoly(const Monomial& m, const Rational& c) {
  if (c != 0) terms_.emplace_back(m, c);
}

std::optional<Rational> LaurentPoly::as_constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_[0].first.is_one()) return terms_[0].second;
  return std::nullopt;
}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  LaurentPoly r;
  r.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!r.terms_.empty() && r.terms_.back().first == t.first) {
      r.terms_.back().second += t.second;
    } else {
      if (!r.terms_.empty() && r.terms_.back().second == 0) r.terms_.pop_back();
      r.terms_.push_back(std::move(t));
    }
  }
  if (!r.terms_.empty() && r.terms_.back().second == 0) r.terms_.pop_back();
  return r;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
  if (c == 0) return {};
  LaurentPoly r = *this;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

namespace {

LaurentPoly merge(const LaurentPoly& a, const LaurentPoly& b, bool subtract) {
  std::vector<LaurentPoly::Term> out;
  out.reserve(a.terms().size() + b.terms().size());
  auto i = a.terms().begin(), ie = a.terms().end();
  auto j = b.terms().begin(), je = b.terms().end();
  while (i != ie || j != je) {
    if (j == je || (i != ie && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == ie || j->first < i->first) {
      out.emplace_back(j->first, subtract ? Rational(-j->second) : j->second);
      ++j;
    } else {
      Rational c = subtract ? Rational(i->second - j->second) : Rational(i->second + j->second);
      if (c != 0) out.emplace_back(i->first, std::move(c));
      ++i;
      ++j;
    }
  }
  return LaurentPoly::from_terms(std::move(out));
}

}  // namespace

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return merge(a, b, false);
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) return a;
  return merge(a, b, true);
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (auto c = a.as_constant()) return b.scaled(*c);
  if (auto c = b.as_constant()) return a.scaled(*c);
  std::vector<LaurentPoly::Term> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) out.emplace_back(ma * mb, ca * cb);
  return LaurentPoly::from_terms(std::move(out));
}

}  // namespace wd
