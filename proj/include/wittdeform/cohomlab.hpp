#pragma once

// Symmetric 2-cocycles of the deformed group law with values in G_m, and
// executable desk checks of the kernel/cokernel statements built on them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wittdeform/ahdeform.hpp"

namespace wd {

/// F(X, Y) for the law x*y = x + y + lambda xy. Coefficients above `reliable`
/// are truncation artifacts and excluded from every verdict.
struct Cocycle2 {
  TruncSeries series;
  RingElem lambda;
  unsigned reliable = 0;
};

/// Symmetry, F(X, 0) = 1 and F(X,Y) F(X*Y, Z) = F(Y,Z) F(X, Y*Z), the last up to
/// degree min(cap3, reliable).
Verdict cocycle_invariants(const Cocycle2& c, unsigned cap3);

/// F(X) F(Y) / F(X + Y + lambda XY) for F in T with unit constant term.
Cocycle2 coboundary(const TruncSeries& F, const RingElem& lambda);

enum class Membership { Coboundary, NotCoboundaryWithinCap, BudgetExceeded };
std::string_view membership_name(Membership m);

struct MembershipResult {
  Membership status = Membership::NotCoboundaryWithinCap;
  std::vector<TruncSeries> generators;  // F(T) with F(0) = 1, in search order
  std::size_t nodes = 0;
  std::string detail;
};

/// Searches F(T) = 1 + f_1 T + ... with coboundary(F) = c up to c.reliable.
/// Finite rings: depth-first over the solutions of each degree's equation,
/// stopping after max_generators certificates. Q: a linear solve on log c.
/// Other rings: UnsupportedCtx.
MembershipResult b2_membership(const Cocycle2& c, std::size_t budget, std::size_t max_generators = 1);

/// Least degree with a nonzero coefficient of psi.
unsigned psi_order(const PsiPoly& psi);

/// c(psi(X), psi(Y)), a cocycle for lambda; reliable to (c.reliable + 1) ord(psi) - 1.
Cocycle2 pullback_psi(const Cocycle2& c, const PsiPoly& psi);

struct Budgets {
  std::size_t enumeration = 1u << 16;  // vectors per enumeration
  std::size_t branch = 1u << 18;       // b2 search nodes per cocycle
  unsigned samples = 8;                // vectors drawn when enumeration is too large
  unsigned cocycle_cap = 8;            // three-variable check cap
};

/// Declarative scenario as read from a config. Empty nu means the universal
/// choice p^{l-k} lambda^{p^k - p^l}; empty a means derive.
struct ScenarioSpec {
  std::string id;
  unsigned p = 2;
  unsigned l = 1;
  unsigned m = 2;
  unsigned D = 8;
  std::string ring;  // "universal" builds the symbolic Laurent ring
  std::string lambda;
  std::vector<std::string> nu;
  std::vector<std::string> a;
  std::vector<std::string> test_algebras;
  std::vector<std::string> checks;
  std::uint64_t seed = 0;
};

struct Scenario {
  ScenarioSpec spec;
  unsigned p = 0, l = 0, m = 0, D = 0;
  bool universal = false;
  Ring ring;
  RingElem lambda;
  RingElem mu;  // lambda^{p^l}
  std::vector<RingElem> nu;
  WittVec a;
  std::string a_method;
  PsiPoly psi;

  /// Witt length that covers every component reaching degree D.
  unsigned window_length() const;
  /// max(m, window_length()): the length lemma checks run at.
  unsigned work_length() const;
};

/// Components of a kept beyond work_length(), for kernels computed deeper,
/// as far as max_length(p) allows.
inline constexpr unsigned kSpareDepth = 2;

/// Validates the relation for nu, T_a([mu]) = p^l [lambda] and a_0 = nu_0 when
/// both are given. RelationViolated / ScenarioInvalid on failure.
Scenario make_scenario(const ScenarioSpec& s);

/// Symbolic scenario over Q[v.., w.., L^{+-1}] with lambda = L.
Scenario universal_scenario(unsigned p, unsigned l, unsigned m, unsigned D);

enum class LemmaId { L4_1, L4_2, L4_3, CocycleIdentity, L4_5Roundtrip };
std::string_view lemma_name(LemmaId id);
std::optional<LemmaId> lemma_from_name(std::string_view name);

Verdict verify_lemma(LemmaId id, const Scenario& scn, const Budgets& b = {});

/// The vectors a check runs over: one generic vector for universal scenarios,
/// all of W_m(R) when within budget, otherwise seeded samples.
std::vector<WittVec> scenario_vectors(const Scenario& scn, std::size_t length, const std::string& prefix,
                                      const Budgets& b, bool* exhaustive = nullptr);

enum class KernelOp { FLambda, FLambdaPl, FLambdaComposeT };

/// Exhaustive kernel at length m (codomain length m - 1).
std::vector<WittVec> kernel_enum(KernelOp op, const Scenario& scn, const Budgets& b = {});

/// Ker F^(lambda^{p^l}) = Ker(F^(lambda) o T_a) setwise, and both are subgroups.
Verdict lemma_4_7(const Scenario& scn, const Budgets& b = {});

struct ExactSeq {
  Verdict verdict;
  std::size_t ker_f_mu = 0;      // Ker F^(lambda^{p^l})
  std::size_t ker_f_lambda = 0;  // Ker F^(lambda)
  std::size_t ker_pi = 0;
  std::size_t m_l = 0;
  std::vector<WittVec> m_l_reps;  // one kernel element per class of M_l
  unsigned depth = 0;             // length the stable kernels were taken at
};

/// Kernels at length M projected to length m, for M = m, m+1, ... until two
/// consecutive lengths give the same projections. A truncated kernel only
/// overestimates the true one; the projections decrease to it.
struct StableKernels {
  unsigned depth = 0;
  bool stabilized = false;
  std::vector<WittVec> mu, lambda, compose;  // Ker F^(mu), Ker F^(lambda), Ker F^(lambda) o T_a
  std::vector<WittVec> ker_pi;               // Ker F^(lambda) meet Im T_a
};
StableKernels stable_kernels(const Scenario& scn, const Budgets& b = {});

/// 0 -> Ker F^(mu) -> Ker F^(lambda) -> M_l -> 0 by enumeration at length m.
ExactSeq exact_seq_check(const Scenario& scn, const Budgets& b = {});

/// A_n[X]/(psi(X)) with the comultiplication induced by the group law.
class FiniteKernelAlg {
 public:
  FiniteKernelAlg(Ring base, PsiPoly psi);

  const Ring& base() const { return base_; }
  const PsiPoly& psi() const { return psi_; }
  unsigned rank() const { return q_; }

  using Elem = std::vector<RingElem>;       // coefficients of 1, X, ..., X^{q-1}
  using Tensor = std::vector<RingElem>;     // k-fold tensor, index sum i_j q^j

  Elem unit() const;
  Elem x() const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem from_series(const TruncSeries& f) const;
  bool is_zero(const Elem& a) const;

  /// Delta(X) = X(x)1 + 1(x)X + lambda X(x)X extended multiplicatively.
  Tensor delta(const Elem& a) const;
  Tensor tensor_mul(const Tensor& a, const Tensor& b, unsigned k) const;
  Tensor outer(const Elem& a, const Elem& b) const;

  /// Coassociativity and counit on every basis element.
  Verdict check_hopf() const;
  /// Least k with X^k = 0 and the squaring index; nullopt when not nilpotent.
  std::optional<unsigned> nilpotency_index() const;
  std::optional<unsigned> nilpotency_by_squaring() const;

  /// Delta(e) = e (x) e and counit 1.
  bool is_group_like(const Elem& e) const;

 private:
  Ring base_;
  PsiPoly psi_;
  unsigned q_;
  std::vector<Elem> pow_;  // X^e reduced, e < 2q
};

/// Checks that the ring has characteristic p^n and that p divides every nu_k
/// (HypothesisViolated otherwise), then builds the algebra.
FiniteKernelAlg nl_algebra(const Scenario& scn);

struct Pairing {
  FiniteKernelAlg::Elem e;
  bool group_like = false;
  bool well_defined = false;
  std::string detail;
};

/// e = E_p(v, lambda; X) mod psi, with the group-like test and invariance under
/// v -> v + T_a(u) for every enumerated u in Ker F^(lambda^{p^l}).
Pairing cartier_pairing(const WittVec& v, const FiniteKernelAlg& alg, const Scenario& scn, const Budgets& b = {});

struct PairingTable {
  std::string algebra;
  std::vector<std::string> classes;  // M_l representatives over the algebra
  std::vector<std::string> points;   // N_l points x in B (psi(x) = 0, x nilpotent)
  std::vector<std::vector<std::string>> values;  // E_p(v, lambda; x)
  std::size_t group_likes = 0;       // group-like elements of B (x) A_n[X]/(psi)
  bool bijective = false;
};

/// One table per test algebra; the scenario needs nu_0 = 0 and p | nu_k.
std::vector<PairingTable> pairing_tables(const Scenario& scn, const Budgets& b = {});

/// Squares of the kernel diagram and the pullback square on enumerated vectors.
Verdict diagram_checks(const Scenario& scn, const Budgets& b = {});

struct CycloData {
  Scenario scenario;
  std::vector<RingElem> u;  // u_0..u_l with p^k = u_k lambda^{p^k - 1}
  std::vector<bool> u_unit;
  bool nu_last_unit = false;
};

/// Z_(p)[T]/(Phi_{p^l}) with lambda = 1 - T.
CycloData cyclotomic_scenario(unsigned p, unsigned l, unsigned m = 2, unsigned D = 8);

struct DeskResult {
  Verdict verdict;
  std::size_t cases = 0;
  std::size_t vacuous = 0;       // pullback not a coboundary in the window
  std::size_t confirmed = 0;     // both sides coboundaries
  std::size_t inconclusive = 0;
  std::size_t failed = 0;
  std::size_t descents = 0;      // nu_0 = 0 branch: generators descended through psi
};

/// For each v: if pullback_psi(F_p(v, mu)) is a coboundary within its window,
/// F_p(v, mu) must be one within D.
DeskResult theorem_1_4_desk(const Scenario& scn, const Budgets& b = {});

}  // namespace wd
