#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>

#include <openssl/evp.h>

#include "wittdeform/wittcore.hpp"

namespace wd {

namespace fs = std::filesystem;

namespace {

std::mutex g_limits_mu;
std::map<unsigned, unsigned> g_limits;

std::vector<std::string> symbols_for(unsigned m, OpKind op) {
  std::vector<std::string> s;
  auto add = [&](const char* prefix) {
    for (unsigned i = 0; i < m; ++i) s.push_back(prefix + std::to_string(i));
  };
  add(op == OpKind::TMapComponent ? "a" : "x");
  if (op == OpKind::Sum || op == OpKind::Prod) add("y");
  if (op == OpKind::TMapComponent) add("x");
  return s;
}

// Ghost components of the vector (syms[off], ..., syms[off+m-1]).
std::vector<RingElem> generic_ghost(const Ring& r, unsigned p, unsigned m, const std::vector<std::string>& syms,
                                    std::size_t off) {
  std::vector<RingElem> pw;  // pw[i] = x_i^{p^{n-i}} at step n
  std::vector<RingElem> out;
  for (unsigned n = 0; n < m; ++n) {
    for (auto& x : pw) x = pow(x, p);
    pw.push_back(r->symbol(syms[off + n]));
    RingElem g = r->zero();
    Integer pi = 1;
    for (unsigned i = 0; i <= n; ++i) {
      g += r->from_integer(pi) * pw[i];
      pi *= p;
    }
    out.push_back(g);
  }
  return out;
}

}  // namespace

std::string_view op_name(OpKind k) {
  switch (k) {
    case OpKind::Sum: return "sum";
    case OpKind::Prod: return "prod";
    case OpKind::Neg: return "neg";
    case OpKind::Frobenius: return "frobenius";
    case OpKind::TMapComponent: return "t_map_component";
  }
  return "?";
}

OpKind op_from_name(std::string_view name) {
  for (OpKind k : {OpKind::Sum, OpKind::Prod, OpKind::Neg, OpKind::Frobenius, OpKind::TMapComponent})
    if (op_name(k) == name) return k;
  throw Error(Errc::MalformedSpec, "unknown op kind " + std::string(name));
}

unsigned max_length(unsigned p) {
  std::lock_guard lk(g_limits_mu);
  if (auto it = g_limits.find(p); it != g_limits.end()) return it->second;
  switch (p) {
    case 2: return 5;
    case 3: return 4;
    case 5: return 3;
    default: return 2;
  }
}

void set_max_length(unsigned p, unsigned m) {
  std::lock_guard lk(g_limits_mu);
  g_limits[p] = m;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(Errc::Io, "sha256 failed");
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string OpPolyTable::body_text() const {
  std::ostringstream os;
  for (std::size_t n = 0; n < polys.size(); ++n) {
    const auto& terms = polys[n].laurent().terms();
    os << "poly " << n << " " << terms.size() << "\n";
    for (const auto& [mono, c] : terms) {
      os << c.get_num().get_str();
      for (std::size_t i = 0; i < symbols.size(); ++i) os << " " << mono[i];
      os << "\n";
    }
  }
  return os.str();
}

std::shared_ptr<const OpPolyTable> derive_op_polys(unsigned p, unsigned m, OpKind op) {
  if (!is_prime(p)) throw Error(Errc::MalformedSpec, std::to_string(p) + " is not prime");
  if (m < 1 || (op == OpKind::Frobenius && m < 2))
    throw Error(Errc::LengthTooShort, std::string(op_name(op)) + " at length " + std::to_string(m));
  if (m > max_length(p))
    throw Error(Errc::BudgetExceeded, "length " + std::to_string(m) + " exceeds the configured maximum " +
                                          std::to_string(max_length(p)) + " for p=" + std::to_string(p));
  auto t = std::make_shared<OpPolyTable>();
  t->p = p;
  t->m = m;
  t->op = op;
  t->symbols = symbols_for(m, op);
  t->ring = RingCtx::laurent(p, t->symbols, {});
  const Ring& r = t->ring;

  std::vector<RingElem> target;
  switch (op) {
    case OpKind::Sum:
    case OpKind::Prod: {
      auto gx = generic_ghost(r, p, m, t->symbols, 0);
      auto gy = generic_ghost(r, p, m, t->symbols, m);
      for (unsigned n = 0; n < m; ++n) target.push_back(op == OpKind::Sum ? gx[n] + gy[n] : gx[n] * gy[n]);
      break;
    }
    case OpKind::Neg:
      for (auto& g : generic_ghost(r, p, m, t->symbols, 0)) target.push_back(-g);
      break;
    case OpKind::Frobenius: {
      auto gx = generic_ghost(r, p, m, t->symbols, 0);
      target.assign(gx.begin() + 1, gx.end());
      break;
    }
    case OpKind::TMapComponent: {
      auto gx = generic_ghost(r, p, m, t->symbols, m);
      for (unsigned n = 0; n < m; ++n) {
        RingElem g = r->zero();
        Integer pi = 1;
        for (unsigned i = 0; i <= n; ++i) {
          Integer e;
          mpz_ui_pow_ui(e.get_mpz_t(), p, n - i);
          g += r->from_integer(pi) * pow(r->symbol(t->symbols[i]), e.get_ui()) * gx[n - i];
          pi *= p;
        }
        target.push_back(g);
      }
      break;
    }
  }

  // s_n = (G_n - sum_{i<n} p^i s_i^{p^{n-i}}) / p^n
  std::vector<RingElem> pw;
  Integer pn = 1;
  for (std::size_t n = 0; n < target.size(); ++n) {
    for (auto& x : pw) x = pow(x, p);
    RingElem rest = target[n];
    Integer pi = 1;
    for (std::size_t i = 0; i < n; ++i) {
      rest -= r->from_integer(pi) * pw[i];
      pi *= p;
    }
    RingElem s = div_int(rest, pn);
    for (const auto& [mono, c] : s.laurent().terms())
      if (c.get_den() != 1)
        throw Error(Errc::IntegralityFailure, std::string(op_name(op)) + " component " + std::to_string(n) +
                                                  " has coefficient " + c.get_str());
    t->polys.push_back(s);
    pw.push_back(s);
    pn *= p;
  }
  t->body_sha256 = sha256_hex(t->body_text());
  return t;
}

std::string cache_dir() {
  if (const char* d = std::getenv("WITTDEFORM_CACHE_DIR"); d && *d) return d;
  if (const char* h = std::getenv("HOME"); h && *h) return std::string(h) + "/.cache/wittdeform";
  return ".wittdeform-cache";
}

namespace {

std::string cache_path(unsigned p, unsigned m, OpKind op) {
  return cache_dir() + "/optable-p" + std::to_string(p) + "-m" + std::to_string(m) + "-" + std::string(op_name(op)) +
         ".txt";
}

std::string header_text(const OpPolyTable& t) {
  std::ostringstream os;
  os << "wittdeform-optable\n"
     << "format_version " << OpPolyTable::kFormatVersion << "\n"
     << "p " << t.p << "\nm " << t.m << "\nop " << op_name(t.op) << "\nsymbols";
  for (auto& s : t.symbols) os << " " << s;
  os << "\nsha256 " << t.body_sha256 << "\n---\n";
  return os.str();
}

}  // namespace

std::shared_ptr<const OpPolyTable> load_cached_table(unsigned p, unsigned m, OpKind op) {
  std::ifstream in(cache_path(p, m, op));
  if (!in) return nullptr;
  std::stringstream ss;
  ss << in.rdbuf();
  std::string all = ss.str();
  auto sep = all.find("\n---\n");
  if (sep == std::string::npos) return nullptr;
  std::string body = all.substr(sep + 5);

  auto t = std::make_shared<OpPolyTable>();
  t->p = p;
  t->m = m;
  t->op = op;
  t->symbols = symbols_for(m, op);
  std::istringstream hs(all.substr(0, sep + 1));
  std::string magic, key, sha;
  int version = 0;
  unsigned hp = 0, hm = 0;
  std::string hop;
  hs >> magic >> key >> version >> key >> hp >> key >> hm >> key >> hop >> key;
  std::vector<std::string> syms;
  std::string tok;
  while (hs >> tok && tok != "sha256") syms.push_back(tok);
  hs >> sha;
  if (magic != "wittdeform-optable" || version != OpPolyTable::kFormatVersion || hp != p || hm != m ||
      hop != op_name(op) || syms != t->symbols)
    return nullptr;
  if (sha256_hex(body) != sha) {
    std::cerr << "warning: optable cache " << cache_path(p, m, op) << " failed its checksum; re-deriving\n";
    return nullptr;
  }
  t->ring = RingCtx::laurent(p, t->symbols, {});
  std::istringstream bs(body);
  std::string word;
  std::size_t idx = 0, count = 0;
  while (bs >> word) {
    if (word != "poly" || !(bs >> idx >> count) || idx != t->polys.size()) return nullptr;
    std::vector<LaurentPoly::Term> terms;
    for (std::size_t k = 0; k < count; ++k) {
      std::string coef;
      bs >> coef;
      Monomial mono;
      for (std::size_t i = 0; i < t->symbols.size(); ++i) {
        int e = 0;
        bs >> e;
        mono[i] = int16_t(e);
      }
      if (!bs) return nullptr;
      terms.emplace_back(mono, Rational(Integer(coef)));
    }
    t->polys.push_back(t->ring->from_payload(LaurentPoly::from_terms(std::move(terms))));
  }
  t->body_sha256 = sha;
  return t;
}

namespace {

void store_cached(const OpPolyTable& t) {
  std::error_code ec;
  fs::create_directories(cache_dir(), ec);
  std::string path = cache_path(t.p, t.m, t.op);
  std::string tmp = path + ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(&t));
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << header_text(t) << t.body_text();
    if (!out) return;
  }
  fs::rename(tmp, path, ec);
  if (ec) fs::remove(tmp, ec);
}

struct Slot {
  std::once_flag once;
  std::shared_ptr<const OpPolyTable> table;
};

std::mutex g_cache_mu;
std::map<std::tuple<unsigned, unsigned, OpKind>, std::shared_ptr<Slot>> g_cache;

}  // namespace

std::shared_ptr<const OpPolyTable> op_table(unsigned p, unsigned m, OpKind op) {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lk(g_cache_mu);
    auto& s = g_cache[{p, m, op}];
    if (!s) s = std::make_shared<Slot>();
    slot = s;
  }
  std::call_once(slot->once, [&] {
    auto t = load_cached_table(p, m, op);
    if (!t) {
      t = derive_op_polys(p, m, op);
      store_cached(*t);
    }
    slot->table = std::move(t);
  });
  return slot->table;
}

std::vector<RingElem> eval_table(const OpPolyTable& t, const std::vector<RingElem>& inputs) {
  if (inputs.size() != t.symbols.size())
    throw Error(Errc::LengthMismatch, "table expects " + std::to_string(t.symbols.size()) + " inputs");
  const Ring& target = inputs.front().ring();
  std::vector<std::vector<RingElem>> powers(inputs.size());
  auto power = [&](std::size_t i, int e) -> const RingElem& {
    auto& c = powers[i];
    if (c.empty()) {
      c.push_back(target->one());
      c.push_back(inputs[i]);
    }
    while (c.size() <= std::size_t(e)) c.push_back(c.back() * inputs[i]);
    return c[std::size_t(e)];
  };
  std::vector<RingElem> out;
  out.reserve(t.polys.size());
  for (const auto& poly : t.polys) {
    RingElem acc = target->zero();
    for (const auto& [mono, c] : poly.laurent().terms()) {
      RingElem term = target->from_integer(c.get_num());
      if (term.is_zero()) continue;
      for (std::size_t i = 0; i < inputs.size(); ++i)
        if (mono[i] != 0) term *= power(i, mono[i]);
      acc += term;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace wd
