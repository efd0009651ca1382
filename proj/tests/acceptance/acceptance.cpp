// Acceptance run: one PASS/FAIL line per criterion.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include "wittdeform/suite.hpp"

using namespace wd;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what + (cond ? "" : " [failed]");
    ok = ok && cond;
  }
  void verdict(const std::string& what, const Verdict& v) {
    std::string d = v.detail.size() > 160 ? v.detail.substr(0, 160) + "..." : v.detail;
    require(v.ok(), what + " " + kind_name(v.kind) + (d.empty() ? "" : " (" + d + ")"));
  }
};

int failures = 0;

void criterion(int n, double limit, const std::function<void(Outcome&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("error: ") + e.what());
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit > 0 && s > limit) out.require(false, "took longer than " + std::to_string(int(limit)) + " s");
  if (!out.ok) ++failures;
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f s", s);
  std::cout << (out.ok ? "PASS" : "FAIL") << " criterion " << n << " (" << secs << "): " << out.detail << std::endl;
}

Scenario finite(const std::string& ring, unsigned l, const std::string& lambda, std::vector<std::string> nu,
                unsigned m, unsigned D = 8) {
  ScenarioSpec s;
  s.id = ring;
  s.ring = ring;
  s.p = 2;
  s.l = l;
  s.m = m;
  s.D = D;
  s.lambda = lambda;
  s.nu = std::move(nu);
  return make_scenario(s);
}

Scenario f2(unsigned m) { return finite("zmod:2", 1, "1", {"0"}, m); }
Scenario f2e(unsigned m) {
  Scenario s = finite("polyquot:zmod:2;e^2", 1, "1", {"0"}, m);
  s.spec.test_algebras = {"polyquot:zmod:2;e^2"};
  return s;
}
Scenario z4(unsigned m = 3) { return finite("zmod:4", 2, "1", {"0", "2"}, m); }
Scenario z4cyc() {
  ScenarioSpec s;
  s.id = "z4-cyclotomic";
  s.ring = "zmod:4";
  s.lambda = "2";
  s.nu = {"1"};
  s.a = {"1", "3", "0", "0", "0", "0"};
  return make_scenario(s);
}

std::vector<Scenario> universals() {
  return {universal_scenario(2, 1, 3, 12), universal_scenario(2, 2, 3, 12), universal_scenario(3, 1, 3, 9)};
}

std::string tag(const Scenario& s) {
  return (s.universal ? "universal" : s.ring->describe()) + " p=" + std::to_string(s.p) + " l=" + std::to_string(s.l);
}

void lemma_over(Outcome& out, LemmaId id, const std::vector<Scenario>& scns) {
  for (const auto& s : scns) out.verdict(tag(s), verify_lemma(id, s));
}

WittVec sample_vec(const Ring& r, unsigned p, std::size_t m, std::uint64_t seed) {
  SamplePolicy pol;
  pol.coeff_bound = 50;
  std::vector<RingElem> c;
  for (std::size_t i = 0; i < m; ++i) c.push_back(sample(r, seed * 31 + i, pol));
  return WittVec(p, c);
}

}  // namespace

int main() {
  set_max_length(2, 6);

  criterion(1, 10, [](Outcome& out) {
    for (const char* spec : {"int", "zmod:8", "zmod:9", "polyquot:zmod:2;e^2"}) {
      Ring r = ring_make(spec);
      std::size_t bad = 0, n = 0;
      for (auto [p, m] : {std::pair{2u, 2u}, {2u, 3u}, {2u, 4u}, {3u, 2u}, {3u, 3u}})
        for (std::uint64_t s = 0; s < 100; ++s, ++n) {
          auto x = sample_vec(r, p, m, 2 * s), y = sample_vec(r, p, m, 2 * s + 1);
          auto gx = ghost(x), gy = ghost(y), gs = ghost(witt_add(x, y)), gm = ghost(witt_mul(x, y));
          for (std::size_t k = 0; k < m; ++k)
            if (gs[k] != gx[k] + gy[k] || gm[k] != gx[k] * gy[k]) ++bad;
        }
      out.require(bad == 0, std::string(spec) + ": " + std::to_string(n) + " sample pairs, " + std::to_string(bad) +
                                " ghost mismatches");
    }
  });

  criterion(2, 30, [](Outcome& out) {
    std::size_t tables = 0, unstable = 0;
    for (auto [p, m] : {std::pair{2u, 2u}, {2u, 3u}, {2u, 4u}, {3u, 2u}, {3u, 3u}})
      for (auto op : {OpKind::Sum, OpKind::Prod, OpKind::Frobenius}) {
        auto first = derive_op_polys(p, m, op), second = derive_op_polys(p, m, op);
        ++tables;
        if (first->body_sha256 != second->body_sha256 || first->body_sha256 != op_table(p, m, op)->body_sha256)
          ++unstable;
      }
    out.require(unstable == 0, std::to_string(tables) + " tables integral, " + std::to_string(unstable) +
                                   " with differing hashes across runs");
  });

  criterion(3, 60, [](Outcome& out) {
    for (auto [p, D] : {std::pair{2u, 12u}, {3u, 9u}}) {
      auto u = ep_universal(p, D);
      std::size_t bad = 0, n = 0;
      for (unsigned d = 0; d <= D; ++d, ++n) {
        RingElem c = u->series.coeff(SMono::power(Var::X, d));
        if (!u->certificate.at(d) || !is_p_integral(c)) ++bad;
      }
      out.require(bad == 0, "E_" + std::to_string(p) + " to degree " + std::to_string(D) + ": " + std::to_string(n) +
                                " coefficients, " + std::to_string(bad) + " not certified");
    }
  });

  criterion(4, 0, [](Outcome& out) {
    for (auto [p, D] : {std::pair{2u, 12u}, {3u, 9u}}) {
      Ring q = ring_make("rat:" + std::to_string(p));
      auto u = ep_universal(p, D);
      Specializer sp(u->ring, q, {{"U", q->one()}, {"L", q->zero()}});
      TruncSeries lg(q, var_bit(Var::X), D);
      for (unsigned long pr = 1; pr <= D; pr *= p)
        lg.set(SMono::power(Var::X, unsigned(pr)), q->from_rational(Rational(1, pr)));
      auto diff = first_difference(u->series.map_coeffs(q, sp), s_exp(lg));
      out.require(!diff, "p=" + std::to_string(p) + " to degree " + std::to_string(D) + (diff ? ": " + *diff : ""));
    }
  });

  criterion(5, 5, [](Outcome& out) {
    std::vector<Scenario> scns = {universal_scenario(2, 1, 2, 12), universal_scenario(2, 2, 2, 12),
                                  universal_scenario(3, 1, 2, 9), f2(2), z4(2)};
    for (const auto& s : scns) out.verdict(tag(s), run_check("psi", s, {}));
  });

  criterion(6, 0, [](Outcome& out) { lemma_over(out, LemmaId::L4_1, universals()); });

  criterion(7, 0, [](Outcome& out) {
    auto scns = universals();
    scns.push_back(f2(2));
    scns.push_back(z4());
    lemma_over(out, LemmaId::L4_2, scns);
  });

  criterion(8, 0, [](Outcome& out) {
    auto scns = universals();
    scns.push_back(f2(2));
    scns.push_back(z4(2));
    lemma_over(out, LemmaId::CocycleIdentity, scns);
  });

  criterion(9, 0, [](Outcome& out) {
    auto scns = universals();
    scns.push_back(f2(2));
    scns.push_back(z4());
    lemma_over(out, LemmaId::L4_3, scns);
  });

  criterion(10, 5, [](Outcome& out) {
    for (const auto& s : {f2(2), f2(3), f2e(2), f2e(3)})
      out.verdict(tag(s) + " m=" + std::to_string(s.m), lemma_4_7(s));
  });

  criterion(11, 0, [](Outcome& out) {
    for (const auto& s : {f2(2), f2(3), f2e(2), f2e(3)}) {
      const std::string t = tag(s) + " m=" + std::to_string(s.m);
      ExactSeq es = exact_seq_check(s);
      out.verdict(t + " sequence", es.verdict);
      out.require(es.m_l == 2, t + " |M_1| = " + std::to_string(es.m_l));
      out.verdict(t + " diagrams", diagram_checks(s));
      for (const auto& tb : pairing_tables(s)) {
        bool shape = tb.values.size() == tb.classes.size() && tb.classes.size() == tb.group_likes;
        for (const auto& row : tb.values) shape = shape && row.size() == tb.points.size();
        out.require(tb.bijective && shape, t + " pairing over " + tb.algebra + ": " +
                                               std::to_string(tb.classes.size()) + " classes, " +
                                               std::to_string(tb.group_likes) + " group-likes");
      }
    }
  });

  criterion(12, 0, [](Outcome& out) {
    FiniteKernelAlg a = nl_algebra(f2(2));
    out.verdict("F_2 Hopf", a.check_hopf());
    out.require(a.rank() == 2 && a.nilpotency_index() == 2u,
                "F_2 l=1: rank " + std::to_string(a.rank()) + ", index " +
                    std::to_string(a.nilpotency_index().value_or(0)));
    FiniteKernelAlg b = nl_algebra(z4());
    out.verdict("Z/4 Hopf", b.check_hopf());
    out.require(b.rank() == 4 && b.nilpotency_by_squaring() == 8u,
                "Z/4 l=2: rank " + std::to_string(b.rank()) + ", first vanishing square power " +
                    std::to_string(b.nilpotency_by_squaring().value_or(0)) + " (least index " +
                    std::to_string(b.nilpotency_index().value_or(0)) + ")");
  });

  criterion(13, 0, [](Outcome& out) {
    for (auto [p, l] : {std::pair{2u, 1u}, {2u, 2u}, {3u, 1u}}) {
      Scenario s = cyclotomic_scenario(p, l).scenario;
      out.verdict("p=" + std::to_string(p) + " l=" + std::to_string(l), run_check("cyclotomic", s, {}));
    }
  });

  criterion(14, 0, [](Outcome& out) {
    for (const auto& s : {f2(2), z4cyc()}) {
      DeskResult d = theorem_1_4_desk(s);
      out.verdict(s.spec.id, d.verdict);
      out.require(d.failed == 0 && d.cases > 0 && 5 * d.inconclusive < d.cases,
                  s.spec.id + ": " + std::to_string(d.cases) + " cases, " + std::to_string(d.confirmed) +
                      " confirmed, " + std::to_string(d.inconclusive) + " inconclusive, " +
                      std::to_string(d.failed) + " failed");
    }
  });

  criterion(15, 300, [](Outcome& out) {
    const std::string cmd = std::string("\"") + WD_CLI_PATH + "\" verify --config \"" + WD_DEFAULT_CONFIG +
                            "\" --only all > /dev/null 2> wittdeform-suite.log";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    out.require(code == 0, "verify --only all exited with " + std::to_string(code));
  });

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
