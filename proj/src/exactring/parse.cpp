#include <algorithm>
#include <cctype>

#include "wittdeform/exactring.hpp"

namespace wd {

namespace {

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

// Values stay rational while no ring symbol is involved, so "3/4" is
// checked against the ring once rather than via an inverse of 4.
struct Value {
  std::optional<Rational> q;
  RingElem e;
};

class ExprParser {
 public:
  ExprParser(const RingCtx& ring, std::string_view text) : ring_(ring), s_(text) {}

  RingElem run() {
    Value v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return materialize(v);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::ParseError, "at position " + std::to_string(pos_) + " in \"" + std::string(s_) + "\": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RingElem materialize(const Value& v) const { return v.q ? ring_.from_rational(*v.q) : v.e; }

  Value expr() {
    Value acc = term();
    for (;;) {
      if (accept('+')) {
        Value r = term();
        acc = combine(acc, r, '+');
      } else if (accept('-')) {
        Value r = term();
        acc = combine(acc, r, '-');
      } else {
        return acc;
      }
    }
  }

  Value term() {
    Value acc = unary();
    for (;;) {
      if (accept('*')) {
        Value r = unary();
        acc = combine(acc, r, '*');
      } else if (accept('/')) {
        std::size_t at = pos_;
        Value r = unary();
        if (r.q && *r.q == 0) {
          pos_ = at;
          fail("division by zero");
        }
        acc = combine(acc, r, '/');
      } else {
        return acc;
      }
    }
  }

  Value unary() {
    if (accept('-')) {
      Value v = unary();
      if (v.q) return {Rational(-*v.q), {}};
      return {std::nullopt, -v.e};
    }
    if (accept('+')) return unary();
    return power();
  }

  Value power() {
    Value base = atom();
    if (!accept('^')) return base;
    skip();
    bool negative = false;
    if (accept('-')) negative = true;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
    if (base.q) {
      Rational r;
      mpz_class num, den;
      mpz_pow_ui(num.get_mpz_t(), base.q->get_num().get_mpz_t(), e);
      mpz_pow_ui(den.get_mpz_t(), base.q->get_den().get_mpz_t(), e);
      r = Rational(num, den);
      r.canonicalize();
      if (negative) {
        if (r == 0) fail("zero to a negative power");
        r = 1 / r;
      }
      return {r, {}};
    }
    RingElem b = negative ? inv(base.e) : base.e;
    return {std::nullopt, pow(b, e)};
  }

  Value atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    unsigned char c = static_cast<unsigned char>(s_[pos_]);
    if (c == '(') {
      ++pos_;
      Value v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(c)) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return {Rational(Integer(std::string(s_.substr(start, pos_ - start)))), {}};
    }
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && is_ident_char(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return {std::nullopt, ring_.symbol(s_.substr(start, pos_ - start))};
    }
    fail("unexpected '" + std::string(1, char(c)) + "'");
  }

  Value combine(const Value& a, const Value& b, char op) {
    if (a.q && b.q) {
      switch (op) {
        case '+': return {Rational(*a.q + *b.q), {}};
        case '-': return {Rational(*a.q - *b.q), {}};
        case '*': return {Rational(*a.q * *b.q), {}};
        default: return {Rational(*a.q / *b.q), {}};
      }
    }
    if (op == '/' && b.q) return {std::nullopt, materialize(a) * ring_.from_rational(1 / *b.q)};
    RingElem x = materialize(a), y = materialize(b);
    switch (op) {
      case '+': return {std::nullopt, x + y};
      case '-': return {std::nullopt, x - y};
      case '*': return {std::nullopt, x * y};
      default: {
        auto q = exact_div(x, y);
        if (!q) throw Error(Errc::NotAUnit, y.str() + " does not divide " + x.str());
        return {std::nullopt, *q};
      }
    }
  }

  const RingCtx& ring_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string strip(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '[' || s[i] == '(') ++depth;
    if (s[i] == ']' || s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(strip(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(strip(s.substr(start)));
  return out;
}

std::string unbracket(std::string v) {
  v = strip(v);
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = strip(std::string_view(v).substr(1, v.size() - 2));
  return v;
}

unsigned parse_prime(const std::string& text, std::string_view what) {
  std::string t = strip(text);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw Error(Errc::MalformedSpec, std::string(what) + ": expected a prime, got \"" + t + "\"");
  unsigned long p = std::stoul(t);
  if (!is_prime(p)) throw Error(Errc::MalformedSpec, std::string(what) + ": " + t + " is not prime");
  return unsigned(p);
}

Ring make_polyquot(std::string_view rest) {
  std::string base_spec, poly;
  std::string body = strip(rest);
  if (body.find("base=") != std::string::npos) {
    for (auto& tok : split_top(body, body.find(';') != std::string::npos ? ';' : ',')) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw Error(Errc::MalformedSpec, "polyquot: bad field " + tok);
      std::string key = strip(tok.substr(0, eq)), val = strip(tok.substr(eq + 1));
      if (key == "base") base_spec = val;
      else if (key == "modulus") poly = val;
      else throw Error(Errc::MalformedSpec, "polyquot: unknown field " + key);
    }
  } else {
    auto semi = body.find(';');
    if (semi == std::string::npos) throw Error(Errc::MalformedSpec, "polyquot: expected <base>;<modulus>");
    base_spec = body.substr(0, semi);
    poly = body.substr(semi + 1);
  }
  if (base_spec.empty() || poly.empty()) throw Error(Errc::MalformedSpec, "polyquot: missing base or modulus");
  Ring base = ring_make(base_spec);

  std::string var;
  for (std::size_t i = 0; i < poly.size();) {
    if (is_ident_start(static_cast<unsigned char>(poly[i]))) {
      std::size_t j = i;
      while (j < poly.size() && is_ident_char(static_cast<unsigned char>(poly[j]))) ++j;
      std::string id = poly.substr(i, j - i);
      if (!var.empty() && var != id) throw Error(Errc::MalformedSpec, "polyquot: modulus must be univariate");
      var = id;
      i = j;
    } else {
      ++i;
    }
  }
  if (var.empty()) var = "T";
  Ring scratch = RingCtx::laurent(2, {var}, {});
  RingElem f;
  try {
    f = scratch->parse(poly);
  } catch (const Error& e) {
    throw Error(Errc::MalformedSpec, std::string("polyquot modulus: ") + e.what());
  }
  std::vector<Rational> coeffs;
  for (const auto& [m, c] : f.laurent().terms()) {
    std::size_t k = std::size_t(m[0]);
    if (coeffs.size() <= k) coeffs.resize(k + 1);
    coeffs[k] = c;
  }
  return RingCtx::polyquot(std::move(base), std::move(coeffs), var);
}

Ring make_laurent(std::string_view rest) {
  std::string body = strip(rest);
  char sep = body.find(';') != std::string::npos ? ';' : ',';
  std::optional<unsigned> p;
  std::vector<std::string> gens, lgens;
  std::vector<std::pair<std::string, std::string>> subs;
  std::string last;
  auto add_item = [&](const std::string& key, const std::string& item) {
    if (item.empty()) return;
    if (key == "gens") {
      gens.push_back(item);
    } else if (key == "laurent") {
      lgens.push_back(item);
    } else if (key == "subs") {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(Errc::MalformedSpec, "laurent: substitution needs name=expr");
      subs.emplace_back(strip(item.substr(0, eq)), strip(item.substr(eq + 1)));
    } else {
      throw Error(Errc::MalformedSpec, "laurent: unexpected item " + item);
    }
  };
  for (auto& tok : split_top(body, sep)) {
    if (tok.empty()) continue;
    auto eq = tok.find('=');
    std::string key = eq == std::string::npos ? "" : strip(tok.substr(0, eq));
    if (key == "p" || key == "gens" || key == "laurent" || key == "subs") {
      std::string val = unbracket(tok.substr(eq + 1));
      if (key == "p") {
        p = parse_prime(val, "laurent");
      } else {
        for (auto& item : split_top(val, ',')) add_item(key, item);
      }
      last = key;
    } else if (!last.empty() && last != "p") {
      add_item(last, tok);
    } else {
      throw Error(Errc::MalformedSpec, "laurent: unknown field " + tok);
    }
  }
  if (!p) throw Error(Errc::MalformedSpec, "laurent: missing p");
  return RingCtx::laurent(*p, gens, lgens, subs);
}

}  // namespace

RingElem RingCtx::parse(std::string_view text) const { return ExprParser(*this, text).run(); }

Ring ring_make(std::string_view spec) {
  std::string s = strip(spec);
  auto colon = s.find(':');
  std::string head = strip(s.substr(0, colon));
  std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (head == "int" && colon == std::string::npos) return RingCtx::integers();
  if (head == "rat") return RingCtx::rationals(parse_prime(rest, "rat"));
  if (head == "plocal") return RingCtx::plocal(parse_prime(rest, "plocal"));
  if (head == "zmod") {
    std::string t = strip(rest);
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw Error(Errc::MalformedSpec, "zmod: expected a modulus, got \"" + t + "\"");
    return RingCtx::zmod(Integer(t));
  }
  if (head == "polyquot") return make_polyquot(rest);
  if (head == "laurent") return make_laurent(rest);
  throw Error(Errc::MalformedSpec, "unknown ring spec \"" + s + "\"");
}

}  // namespace wd
