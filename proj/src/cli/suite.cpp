#include <chrono>
#include <set>
#include <sstream>

#include "wittdeform/suite.hpp"

namespace wd {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

/// mu psi(X) = (1 + lambda X)^{p^l} - 1 coefficientwise, and the homomorphism law.
Verdict psi_check(const Scenario& scn) {
  const PsiPoly& psi = scn.psi;
  const unsigned q = psi.degree();
  RingElem lp = scn.ring->one();
  Integer b = 1;
  for (unsigned i = 1; i <= q; ++i) {
    b = b * (q - i + 1) / i;
    lp *= scn.lambda;
    RingElem want = scn.ring->from_integer(b) * lp;
    if (scn.mu * psi.coeff[i] != want)
      return Verdict::fail("closed form at X^" + std::to_string(i) + ": " + (scn.mu * psi.coeff[i]).str() + " vs " +
                           want.str());
  }
  if (!psi.coeff[0].is_zero()) return Verdict::fail("psi(0) = " + psi.coeff[0].str());
  Verdict hom = psi_hom_check(psi, scn.D);
  if (!hom.ok()) return hom;
  return Verdict::pass("degree " + std::to_string(q) + ", closed form and homomorphism law to degree " +
                       std::to_string(std::max<unsigned>(scn.D, 2 * q)));
}

Verdict algebra_check(const Scenario& scn) {
  FiniteKernelAlg alg = nl_algebra(scn);
  unsigned want = 1;
  for (unsigned i = 0; i < scn.l; ++i) want *= scn.p;
  if (alg.rank() != want)
    return Verdict::fail("rank " + std::to_string(alg.rank()) + ", expected " + std::to_string(want));
  Verdict hopf = alg.check_hopf();
  if (!hopf.ok()) return hopf;
  auto n = alg.nilpotency_index();
  auto sq = alg.nilpotency_by_squaring();
  if (!n) return Verdict::fail("X is not nilpotent");
  return Verdict::pass(hopf.detail + ", nilpotency index " + std::to_string(*n) + " (first vanishing square power " +
                       std::to_string(sq.value_or(0)) + ")");
}

Verdict pairing_check(const Scenario& scn, const Budgets& b) {
  Verdict out = Verdict::pass();
  std::string detail;
  for (const auto& t : pairing_tables(scn, b)) {
    if (!detail.empty()) detail += "; ";
    detail += t.algebra + ": " + std::to_string(t.classes.size()) + " classes, " + std::to_string(t.group_likes) +
              " group-likes, " + std::to_string(t.points.size()) + " points";
    if (!t.bijective) merge(out, Verdict::fail(t.algebra + ": classes do not match the group-likes"));
  }
  if (out.ok()) out.detail = detail;
  else out.detail += " (" + detail + ")";
  return out;
}

Verdict cyclotomic_check(const Scenario& scn) {
  CycloData c = cyclotomic_scenario(scn.p, scn.l, scn.m, scn.D);
  if (c.scenario.ring->describe() != scn.ring->describe() || !(c.scenario.lambda == scn.lambda))
    return Verdict::fail("not a cyclotomic scenario");
  std::string detail, nonunits;
  std::size_t pk = 1;
  for (std::size_t k = 0; k < c.u.size(); ++k, pk *= scn.p) {
    RingElem lhs = c.u[k] * pow(scn.lambda, pk - 1);
    if (lhs != scn.ring->from_integer(Integer(static_cast<unsigned long>(pk)))) return Verdict::fail("u_" + std::to_string(k) + " lambda^{p^k-1} = " + lhs.str());
    detail += (detail.empty() ? "" : ", ") + std::string("u_") + std::to_string(k) + " = " + c.u[k].str();
    if (!c.u_unit[k]) nonunits += (nonunits.empty() ? "" : ", ") + std::string("u_") + std::to_string(k);
  }
  detail += "; nu_" + std::to_string(scn.l - 1) + " = " + scn.nu.back().str() +
            (c.nu_last_unit ? " is a unit" : " is not a unit");
  if (!nonunits.empty()) return Verdict::fail(nonunits + " not units (" + detail + ")");
  if (!c.nu_last_unit) return Verdict::fail(detail);
  return Verdict::pass(detail);
}

json scenario_echo(const Scenario& scn) {
  json j;
  j["id"] = scn.spec.id;
  j["ring"] = scn.ring->describe();
  j["p"] = scn.p;
  j["l"] = scn.l;
  j["m"] = scn.m;
  j["D"] = scn.D;
  j["lambda"] = scn.lambda.str();
  json nu = json::array();
  for (const auto& n : scn.nu) nu.push_back(n.str());
  j["nu"] = nu;
  j["a"] = scn.a.str();
  j["a_method"] = scn.a_method;
  j["psi"] = scn.psi.series(Var::X, var_bit(Var::X), scn.psi.degree()).str();
  j["seed"] = scn.spec.seed;
  return j;
}

json cache_ids(const std::vector<Scenario>& scenarios) {
  std::map<unsigned, std::size_t> longest;
  for (const auto& s : scenarios) longest[s.p] = std::max(longest[s.p], s.a.length());
  json out = json::array();
  for (const auto& [p, m] : longest) {
    auto t = op_table(p, unsigned(m), OpKind::Sum);
    out.push_back({{"p", p}, {"m", m}, {"op", std::string(op_name(OpKind::Sum))}, {"sha256", t->body_sha256}});
  }
  return out;
}

std::string cell(std::string s) {
  std::string out;
  for (char c : s) out += c == '|' ? std::string("\\|") : std::string(1, c);
  return out;
}

}  // namespace

Verdict run_check(const std::string& id, const Scenario& scn, const Budgets& b) {
  try {
    if (auto lemma = lemma_from_name(id)) return verify_lemma(*lemma, scn, b);
    if (id == "psi") return psi_check(scn);
    if (id == "L4_7") return lemma_4_7(scn, b);
    if (id == "exact_seq") return exact_seq_check(scn, b).verdict;
    if (id == "nl_algebra") return algebra_check(scn);
    if (id == "pairing") return pairing_check(scn, b);
    if (id == "diagrams") return diagram_checks(scn, b);
    if (id == "theorem_1_4") return theorem_1_4_desk(scn, b).verdict;
    if (id == "cyclotomic") return cyclotomic_check(scn);
  } catch (const Error& e) {
    if (e.code() == Errc::BudgetExceeded) return Verdict::inconclusive(e.what());
    return Verdict::fail(e.what());
  }
  throw Error(Errc::MalformedSpec, "unknown check '" + id + "'");
}

json run_suite(const SuiteConfig& cfg, const std::vector<Scenario>& scenarios, const RunOptions& opt) {
  const auto start = Clock::now();
  auto seconds = [](Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); };
  std::set<std::string> only(opt.only.begin(), opt.only.end());
  json report;
  report["schema"] = "wittdeform-report";
  report["schema_version"] = kReportVersion;
  report["config"] = cfg.echo;
  report["selector"] = opt.only.empty() ? json("all") : json(opt.only);
  std::size_t counts[3] = {0, 0, 0};
  json out = json::array();
  for (const auto& scn : scenarios) {
    json s = scenario_echo(scn);
    json checks = json::array();
    for (const auto& id : check_ids()) {
      if (std::find(scn.spec.checks.begin(), scn.spec.checks.end(), id) == scn.spec.checks.end()) continue;
      if (!only.empty() && !only.count(id)) continue;
      const auto t = Clock::now();
      Verdict v = cfg.time_seconds > 0 && seconds(start) > cfg.time_seconds
                      ? Verdict::inconclusive("time budget of " + std::to_string(cfg.time_seconds) + " s exhausted")
                      : run_check(id, scn, cfg.budgets);
      json c = {{"id", id}, {"verdict", std::string(kind_name(v.kind))}, {"detail", v.detail}};
      if (opt.timings) c["seconds"] = seconds(t);
      ++counts[v.kind == Verdict::Kind::Pass ? 0 : v.kind == Verdict::Kind::Fail ? 1 : 2];
      checks.push_back(std::move(c));
    }
    s["checks"] = std::move(checks);
    out.push_back(std::move(s));
  }
  report["scenarios"] = std::move(out);
  report["cache"] = {{"tables", cache_ids(scenarios)}};
  report["summary"] = {{"pass", counts[0]}, {"fail", counts[1]}, {"inconclusive", counts[2]}};
  if (opt.timings) report["seconds"] = seconds(start);
  return report;
}

std::size_t report_failures(const json& report) { return report.at("summary").at("fail").get<std::size_t>(); }

std::string report_markdown(const json& report) {
  std::ostringstream os;
  const json& sum = report.at("summary");
  os << "# wittdeform report (schema " << report.at("schema_version") << ")\n\n";
  os << "pass " << sum.at("pass") << ", fail " << sum.at("fail") << ", inconclusive " << sum.at("inconclusive") << "\n";
  for (const auto& s : report.at("scenarios")) {
    os << "\n## " << s.at("id").get<std::string>() << "\n\n";
    os << "ring `" << s.at("ring").get<std::string>() << "`, p = " << s.at("p") << ", l = " << s.at("l")
       << ", m = " << s.at("m") << ", D = " << s.at("D") << ", lambda = `" << s.at("lambda").get<std::string>()
       << "`, a = `" << s.at("a").get<std::string>() << "` (" << s.at("a_method").get<std::string>() << ")\n\n";
    os << "| check | verdict | detail |\n|---|---|---|\n";
    for (const auto& c : s.at("checks"))
      os << "| " << c.at("id").get<std::string>() << " | " << c.at("verdict").get<std::string>() << " | "
         << cell(c.at("detail").get<std::string>()) << " |\n";
  }
  return os.str();
}

}  // namespace wd
