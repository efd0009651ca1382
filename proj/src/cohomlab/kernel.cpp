#include <array>
#include <map>
#include <mutex>
#include <optional>
#include <set>

#include "wittdeform/cohomlab.hpp"

namespace wd {

namespace {

/// W_n(R) in odometer order; BudgetExceeded past the enumeration budget.
std::vector<WittVec> all_vectors(const Scenario& scn, const Budgets& b) {
  if (!scn.ring->is_finite())
    throw Error(Errc::UnsupportedCtx, "enumeration needs a finite ring, got " + scn.ring->describe());
  const unsigned n = scn.m;
  bool exhaustive = false;
  auto vs = scenario_vectors(scn, n, "v", b, &exhaustive);
  if (!exhaustive)
    throw Error(Errc::BudgetExceeded, "|W_" + std::to_string(n) + "(" + scn.ring->describe() + ")| exceeds " +
                                          std::to_string(b.enumeration));
  return vs;
}

bool in_kernel(KernelOp op, const Scenario& scn, const WittVec& w) {
  switch (op) {
    case KernelOp::FLambda: return f_lambda(scn.lambda, w).is_zero();
    case KernelOp::FLambdaPl: return f_lambda(scn.mu, w).is_zero();
    case KernelOp::FLambdaComposeT: return f_lambda(scn.lambda, t_map(scn.a, w)).is_zero();
  }
  return false;
}

/// Ker op in W_n(R), grown one component at a time: component k of the
/// image only involves w_0..w_{k+1}, so a prefix whose image is already
/// nonzero is dropped.
std::vector<WittVec> kernel_dfs(KernelOp op, const Scenario& scn, const Budgets& b, unsigned n) {
  if (!scn.ring->is_finite())
    throw Error(Errc::UnsupportedCtx, "enumeration needs a finite ring, got " + scn.ring->describe());
  const auto elems = scn.ring->elements();
  std::vector<WittVec> level;
  for (const auto& x : elems) level.push_back(WittVec(scn.p, {x}));
  std::size_t nodes = level.size();
  for (unsigned k = 1; k < n; ++k) {
    std::vector<WittVec> next;
    for (const auto& w : level)
      for (const auto& x : elems) {
        if (++nodes > b.enumeration)
          throw Error(Errc::BudgetExceeded, "kernel search at length " + std::to_string(n) + " exceeds " +
                                                std::to_string(b.enumeration) + " nodes");
        std::vector<RingElem> c = w.c;
        c.push_back(x);
        WittVec ext(scn.p, std::move(c));
        if (in_kernel(op, scn, ext)) next.push_back(std::move(ext));
      }
    level = std::move(next);
  }
  return level;
}

std::set<std::string> keys(const std::vector<WittVec>& vs) {
  std::set<std::string> out;
  for (const auto& v : vs) out.insert(v.str());
  return out;
}

Verdict closed_under_add(const std::vector<WittVec>& k, const std::string& name) {
  auto ks = keys(k);
  for (const auto& x : k)
    for (const auto& y : k)
      if (!ks.count(witt_add(x, y).str()))
        return Verdict::fail(name + " not closed under addition: " + x.str() + " + " + y.str());
  return Verdict::pass();
}

/// Projection to length m, deduplicated, in first-seen order.
struct Projection {
  std::vector<WittVec> vecs;
  std::set<std::string> keys;
  void add(const WittVec& w, unsigned m) {
    WittVec t = truncate(w, m);
    if (keys.insert(t.str()).second) vecs.push_back(std::move(t));
  }
};

}  // namespace

StableKernels stable_kernels(const Scenario& scn, const Budgets& b) {
  static std::mutex mu;
  static std::map<std::string, StableKernels> memo;
  const std::string key = scn.ring->describe() + "|" + scn.lambda.str() + "|" + scn.mu.str() + "|" + scn.a.str() + "|" +
                          std::to_string(scn.m) + "|" + std::to_string(b.enumeration) + "|" +
                          std::to_string(max_length(scn.p));
  {
    std::lock_guard lk(mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  const unsigned m = scn.m;
  std::optional<std::array<Projection, 4>> prev;
  StableKernels out;
  for (unsigned n = m; n <= scn.a.length(); ++n) {
    std::array<Projection, 4> cur;
    for (const auto& w : kernel_dfs(KernelOp::FLambdaPl, scn, b, n)) cur[0].add(w, m);
    for (const auto& w : kernel_dfs(KernelOp::FLambda, scn, b, n)) cur[1].add(w, m);
    for (const auto& w : kernel_dfs(KernelOp::FLambdaComposeT, scn, b, n)) {
      cur[2].add(w, m);
      cur[3].add(t_map(scn.a, w), m);
    }
    out.depth = n;
    bool same = prev.has_value();
    for (std::size_t i = 0; i < 4 && same; ++i) same = (*prev)[i].keys == cur[i].keys;
    prev = std::move(cur);
    if (same) {
      out.stabilized = true;
      break;
    }
  }
  out.mu = std::move((*prev)[0].vecs);
  out.lambda = std::move((*prev)[1].vecs);
  out.compose = std::move((*prev)[2].vecs);
  out.ker_pi = std::move((*prev)[3].vecs);
  std::lock_guard lk(mu);
  memo.emplace(key, out);
  return out;
}

std::vector<WittVec> kernel_enum(KernelOp op, const Scenario& scn, const Budgets& b) {
  return kernel_dfs(op, scn, b, scn.m);
}

Verdict lemma_4_7(const Scenario& scn, const Budgets& b) {
  // Ker F^(mu) lies in Ker F^(lambda) o T_a at every length.
  auto k1 = kernel_enum(KernelOp::FLambdaPl, scn, b);
  for (const auto& w : k1)
    if (!in_kernel(KernelOp::FLambdaComposeT, scn, w))
      return Verdict::fail(w.str() + " is in Ker F^(lambda^{p^l}) but not in Ker F^(lambda) o T_a");
  Verdict out = Verdict::pass();
  merge(out, closed_under_add(k1, "Ker F^(lambda^{p^l})"));
  merge(out, closed_under_add(kernel_enum(KernelOp::FLambda, scn, b), "Ker F^(lambda)"));
  if (out.failed()) return out;

  StableKernels st = stable_kernels(scn, b);
  std::string at = " at length " + std::to_string(scn.m) + " (projected from length " + std::to_string(st.depth) + ")";
  auto kmu = keys(st.mu), kc = keys(st.compose);
  for (const auto& w : st.compose)
    if (!kmu.count(w.str())) {
      Verdict v = Verdict::fail(w.str() + " is in Ker F^(lambda) o T_a but not in Ker F^(lambda^{p^l})" + at);
      return st.stabilized ? v : Verdict::inconclusive(v.detail + ", projections not yet stable");
    }
  for (const auto& w : st.mu)
    if (!kc.count(w.str())) return Verdict::fail(w.str() + " is in Ker F^(lambda^{p^l}) but not in Ker F^(lambda) o T_a" + at);
  if (!st.stabilized) return Verdict::inconclusive("kernel projections not stable by length " + std::to_string(st.depth));
  out.detail = "both kernels have " + std::to_string(st.mu.size()) + " elements" + at;
  return out;
}

ExactSeq exact_seq_check(const Scenario& scn, const Budgets& b) {
  auto all = all_vectors(scn, b);
  ExactSeq es;
  std::vector<WittVec> kmu, klam;
  std::set<std::string> im_t, im_tp, klam_keys;
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& w = all[i];
    idx[w.str()] = i;
    WittVec tw = t_map(scn.a, w);
    im_t.insert(tw.str());
    im_tp.insert(f_lambda(scn.lambda, tw).str());
    if (in_kernel(KernelOp::FLambdaPl, scn, w)) kmu.push_back(w);
    if (in_kernel(KernelOp::FLambda, scn, w)) {
      klam.push_back(w);
      klam_keys.insert(w.str());
    }
  }
  es.ker_f_mu = kmu.size();
  es.ker_f_lambda = klam.size();
  es.verdict = Verdict::pass();
  auto fail = [&](const std::string& d) {
    es.verdict = Verdict::fail(d);
    return es;
  };

  for (const auto& u : kmu) {
    WittVec tu = t_map(scn.a, u);
    if (!klam_keys.count(tu.str())) return fail("T_a(" + u.str() + ") = " + tu.str() + " is not in Ker F^(lambda)");
  }

  // Cosets of Im T_a, labelled by first member in enumeration order.
  std::vector<WittVec> im_vecs;
  for (const auto& w : all)
    if (im_t.count(w.str())) im_vecs.push_back(w);
  std::vector<long> cls(all.size(), -1);
  std::vector<std::size_t> leaders;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (cls[i] >= 0) continue;
    for (const auto& h : im_vecs) cls[idx.at(witt_add(all[i], h).str())] = long(leaders.size());
    leaders.push_back(i);
  }
  std::vector<bool> in_ml(leaders.size()), hit(leaders.size());
  for (std::size_t c = 0; c < leaders.size(); ++c)
    in_ml[c] = im_tp.count(f_lambda(scn.lambda, all[leaders[c]]).str()) > 0;

  std::set<std::string> ker_pi;
  for (const auto& v : klam) {
    long c = cls[idx.at(v.str())];
    if (!in_ml[c]) return fail("pi(" + v.str() + ") is not in M_l");
    if (im_t.count(v.str())) ker_pi.insert(v.str());
    if (!hit[c]) es.m_l_reps.push_back(v);
    hit[c] = true;
  }
  es.ker_pi = ker_pi.size();
  for (std::size_t c = 0; c < leaders.size(); ++c) {
    if (!in_ml[c]) continue;
    ++es.m_l;
    if (!hit[c]) return fail("class of " + all[leaders[c]].str() + " in M_l has no preimage in Ker F^(lambda)");
  }
  // Ker pi = T_a(Ker F^(mu)) holds for the true kernels, compared on stable projections.
  StableKernels st = stable_kernels(scn, b);
  es.depth = st.depth;
  std::set<std::string> st_pi = keys(st.ker_pi), st_tmu;
  for (const auto& u : st.mu) st_tmu.insert(t_map(scn.a, u).str());
  if (st_pi != st_tmu) {
    std::string d = "Ker pi has " + std::to_string(st_pi.size()) + " elements but T_a(Ker F^(lambda^{p^l})) has " +
                    std::to_string(st_tmu.size()) + " (projected from length " + std::to_string(st.depth) + ")";
    if (st.stabilized) return fail(d);
    es.verdict = Verdict::inconclusive(d + ", projections not yet stable");
    return es;
  }
  if (es.ker_pi * es.m_l != es.ker_f_lambda)
    return fail("|Ker pi| * |Im pi| = " + std::to_string(es.ker_pi * es.m_l) + " but |Ker F^(lambda)| = " +
                std::to_string(es.ker_f_lambda));
  es.verdict.detail = "|Ker F^(mu)| = " + std::to_string(es.ker_f_mu) + ", |Ker F^(lambda)| = " +
                      std::to_string(es.ker_f_lambda) + ", |Ker pi| = " + std::to_string(es.ker_pi) +
                      ", |M_l| = " + std::to_string(es.m_l) + ", stable to length " + std::to_string(es.depth);
  if (!st.stabilized) es.verdict = Verdict::inconclusive(es.verdict.detail + " not reached");
  return es;
}

}  // namespace wd
