#include <algorithm>
#include <random>

#include "wittdeform/cohomlab.hpp"

namespace wd {

namespace {

std::vector<std::string> indexed(const std::string& prefix, unsigned n) {
  std::vector<std::string> out;
  for (unsigned i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void finish(Scenario& s) {
  s.mu = pow(s.lambda, s.psi.degree());
  const unsigned W = std::max(s.work_length(), std::min(s.work_length() + kSpareDepth, max_length(s.p)));
  if (s.a.length() == 0) {
    auto made = make_a(s.lambda, s.p, s.l, W, s.nu.front());
    s.a = made.a;
    s.a_method = made.method;
  } else {
    s.a = pad(s.a, W);
    s.a_method = "given";
    WittVec lhs = t_map(s.a, teichmuller(s.mu, s.p, W));
    WittVec rhs = witt_times(long(s.psi.degree()), teichmuller(s.lambda, s.p, W));
    if (!(lhs == rhs))
      throw Error(Errc::RelationViolated, "T_a([lambda^{p^l}]) = " + lhs.str() + " but p^l[lambda] = " + rhs.str());
    if (!(s.a[0] == s.nu[0]))
      throw Error(Errc::ScenarioInvalid, "a_0 = " + s.a[0].str() + " differs from nu_0 = " + s.nu[0].str());
  }
}

}  // namespace

unsigned Scenario::window_length() const { return window_log(p, D) + 1; }
unsigned Scenario::work_length() const { return std::max(m, window_length()); }

Scenario universal_scenario(unsigned p, unsigned l, unsigned m, unsigned D) {
  Scenario s;
  s.p = p, s.l = l, s.m = m, s.D = D;
  s.universal = true;
  s.spec.ring = "universal";
  s.spec.p = p, s.spec.l = l, s.spec.m = m, s.spec.D = D;
  const unsigned W = std::max(m, s.window_length());
  auto gens = indexed("v", W);
  for (auto& g : indexed("w", W + 1)) gens.push_back(g);
  gens.push_back("L");
  s.ring = RingCtx::laurent(p, gens, {"L"});
  s.lambda = s.ring->symbol("L");
  s.nu = universal_nu(p, l, s.lambda);
  s.psi = psi_build(p, l, s.lambda, s.nu);
  finish(s);
  return s;
}

Scenario make_scenario(const ScenarioSpec& spec) {
  if (!is_prime(spec.p)) throw Error(Errc::ScenarioInvalid, "p = " + std::to_string(spec.p) + " is not prime");
  if (spec.l == 0 || spec.m < 2 || spec.D == 0)
    throw Error(Errc::ScenarioInvalid, spec.id + ": need l >= 1, m >= 2 and D >= 1");
  if (spec.ring == "universal") {
    if (!spec.nu.empty() || !spec.a.empty() || !spec.lambda.empty())
      throw Error(Errc::ScenarioInvalid, spec.id + ": the universal scenario fixes lambda, nu and a");
    Scenario s = universal_scenario(spec.p, spec.l, spec.m, spec.D);
    s.spec = spec;
    return s;
  }
  Scenario s;
  s.spec = spec;
  s.p = spec.p, s.l = spec.l, s.m = spec.m, s.D = spec.D;
  s.ring = ring_make(spec.ring);
  if (spec.lambda.empty()) throw Error(Errc::ScenarioInvalid, spec.id + ": lambda missing");
  s.lambda = s.ring->parse(spec.lambda);
  if (spec.nu.empty()) {
    s.nu = universal_nu(s.p, s.l, s.lambda);
  } else {
    if (spec.nu.size() != spec.l)
      throw Error(Errc::ScenarioInvalid, spec.id + ": nu needs " + std::to_string(spec.l) + " entries");
    for (const auto& t : spec.nu) s.nu.push_back(s.ring->parse(t));
  }
  s.psi = psi_build(s.p, s.l, s.lambda, s.nu);
  if (!spec.a.empty()) {
    std::vector<RingElem> c;
    for (const auto& t : spec.a) c.push_back(s.ring->parse(t));
    s.a = WittVec(s.p, std::move(c));
  }
  finish(s);
  return s;
}

CycloData cyclotomic_scenario(unsigned p, unsigned l, unsigned m, unsigned D) {
  unsigned long q = 1;
  for (unsigned i = 1; i < l; ++i) q *= p;
  std::string phi;
  for (unsigned j = 0; j < p; ++j) phi += (j ? " + T^" : "T^") + std::to_string(j * q);
  ScenarioSpec spec;
  spec.id = "cyclotomic-p" + std::to_string(p) + "-l" + std::to_string(l);
  spec.p = p, spec.l = l, spec.m = m, spec.D = D;
  spec.ring = "polyquot:plocal:" + std::to_string(p) + ";" + phi;
  spec.lambda = "1 - T";
  Ring r = ring_make(spec.ring);
  RingElem lambda = r->parse(spec.lambda);
  CycloData out;
  out.u.push_back(r->one());
  out.u_unit.push_back(true);
  for (unsigned k = 1, pk = p; k <= l; ++k, pk *= p) {
    auto u = exact_div(r->from_int(long(pk)), pow(lambda, pk - 1));
    if (!u) throw Error(Errc::ScenarioInvalid, "lambda^" + std::to_string(pk - 1) + " does not divide " + std::to_string(pk));
    out.u.push_back(*u);
    out.u_unit.push_back(is_unit(*u));
  }
  for (unsigned k = 0; k < l; ++k) {
    auto nu = exact_div(out.u[l], out.u[k]);
    if (!nu) throw Error(Errc::ScenarioInvalid, "u_" + std::to_string(k) + " does not divide u_" + std::to_string(l));
    spec.nu.push_back(nu->str());
  }
  out.scenario = make_scenario(spec);
  out.nu_last_unit = is_unit(out.scenario.nu.back());
  return out;
}

std::string_view lemma_name(LemmaId id) {
  switch (id) {
    case LemmaId::L4_1: return "L4_1";
    case LemmaId::L4_2: return "L4_2";
    case LemmaId::L4_3: return "L4_3";
    case LemmaId::CocycleIdentity: return "cocycle_identity";
    case LemmaId::L4_5Roundtrip: return "L4_5_roundtrip";
  }
  return "?";
}

std::optional<LemmaId> lemma_from_name(std::string_view name) {
  for (auto id : {LemmaId::L4_1, LemmaId::L4_2, LemmaId::L4_3, LemmaId::CocycleIdentity, LemmaId::L4_5Roundtrip})
    if (lemma_name(id) == name) return id;
  return std::nullopt;
}

std::vector<WittVec> scenario_vectors(const Scenario& scn, std::size_t length, const std::string& prefix,
                                      const Budgets& b, bool* exhaustive) {
  const Ring& r = scn.ring;
  if (exhaustive) *exhaustive = false;
  if (scn.universal) return {generic_vec(r, scn.p, prefix, length)};
  if (r->is_finite()) {
    auto size = r->size();
    Integer total = 1;
    for (std::size_t i = 0; i < length && total <= Integer(b.enumeration); ++i) total *= *size;
    if (total <= Integer(b.enumeration)) {
      auto elems = r->elements();
      std::vector<WittVec> out;
      std::vector<std::size_t> idx(length, 0);
      for (;;) {
        std::vector<RingElem> c;
        for (auto i : idx) c.push_back(elems[i]);
        out.emplace_back(scn.p, std::move(c));
        std::size_t j = 0;
        while (j < length && ++idx[j] == elems.size()) idx[j++] = 0;
        if (j == length) break;
      }
      if (exhaustive) *exhaustive = true;
      return out;
    }
  }
  std::mt19937_64 rng(scn.spec.seed * 0x9e3779b97f4a7c15ULL + length);
  std::optional<SamplePolicy> policy;
  if (!r->is_finite()) policy = SamplePolicy{};
  std::vector<WittVec> out{witt_zero(r, scn.p, length)};
  for (unsigned s = 0; s < b.samples; ++s) {
    std::vector<RingElem> c;
    for (std::size_t i = 0; i < length; ++i) c.push_back(sample(r, rng(), policy));
    out.emplace_back(scn.p, std::move(c));
  }
  return out;
}

}  // namespace wd
