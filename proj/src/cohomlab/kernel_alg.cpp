#include "wittdeform/cohomlab.hpp"

namespace wd {

FiniteKernelAlg::FiniteKernelAlg(Ring base, PsiPoly psi) : base_(std::move(base)), psi_(std::move(psi)) {
  q_ = psi_.degree();
  Elem cur(q_, base_->zero());
  cur[0] = base_->one();
  for (unsigned e = 0; e < 2 * q_; ++e) {
    pow_.push_back(cur);
    // Multiply by X, folding X^q = -sum psi_i X^i.
    RingElem top = cur[q_ - 1];
    for (unsigned i = q_ - 1; i > 0; --i) cur[i] = cur[i - 1] - top * psi_.coeff[i];
    cur[0] = -(top * psi_.coeff[0]);
  }
}

FiniteKernelAlg::Elem FiniteKernelAlg::unit() const { return pow_[0]; }
FiniteKernelAlg::Elem FiniteKernelAlg::x() const { return pow_[1 % (2 * q_)]; }

FiniteKernelAlg::Elem FiniteKernelAlg::mul(const Elem& a, const Elem& b) const {
  Elem out(q_, base_->zero());
  for (unsigned i = 0; i < q_; ++i) {
    if (a[i].is_zero()) continue;
    for (unsigned j = 0; j < q_; ++j) {
      if (b[j].is_zero()) continue;
      RingElem c = a[i] * b[j];
      const Elem& p = pow_[i + j];
      for (unsigned k = 0; k < q_; ++k)
        if (!p[k].is_zero()) out[k] += c * p[k];
    }
  }
  return out;
}

FiniteKernelAlg::Elem FiniteKernelAlg::from_series(const TruncSeries& f) const {
  Elem out(q_, base_->zero());
  Elem xp = unit();
  for (unsigned d = 0; d <= f.cap(); ++d) {
    RingElem c = f.coeff(SMono::power(Var::X, d));
    if (!c.is_zero())
      for (unsigned k = 0; k < q_; ++k) out[k] += c * xp[k];
    xp = mul(xp, x());
  }
  return out;
}

bool FiniteKernelAlg::is_zero(const Elem& a) const {
  for (const auto& c : a)
    if (!c.is_zero()) return false;
  return true;
}

FiniteKernelAlg::Tensor FiniteKernelAlg::tensor_mul(const Tensor& a, const Tensor& b, unsigned k) const {
  Tensor out(a.size(), base_->zero());
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (a[s].is_zero()) continue;
    for (std::size_t t = 0; t < b.size(); ++t) {
      if (b[t].is_zero()) continue;
      // Product of basis tensors: one reduced power per factor.
      Tensor prod{a[s] * b[t]};
      std::size_t ss = s, tt = t;
      for (unsigned j = 0; j < k; ++j, ss /= q_, tt /= q_) {
        const Elem& p = pow_[ss % q_ + tt % q_];
        Tensor next(prod.size() * q_, base_->zero());
        for (std::size_t u = 0; u < prod.size(); ++u) {
          if (prod[u].is_zero()) continue;
          for (unsigned i = 0; i < q_; ++i)
            if (!p[i].is_zero()) next[u + prod.size() * i] = prod[u] * p[i];
        }
        prod = std::move(next);
      }
      for (std::size_t u = 0; u < prod.size(); ++u)
        if (!prod[u].is_zero()) out[u] += prod[u];
    }
  }
  return out;
}

FiniteKernelAlg::Tensor FiniteKernelAlg::outer(const Elem& a, const Elem& b) const {
  Tensor out(q_ * q_, base_->zero());
  for (unsigned i = 0; i < q_; ++i)
    for (unsigned j = 0; j < q_; ++j) out[i + q_ * j] = a[i] * b[j];
  return out;
}

FiniteKernelAlg::Tensor FiniteKernelAlg::delta(const Elem& a) const {
  Tensor dx = outer(x(), unit());
  Tensor rhs = outer(unit(), x()), both = outer(x(), x());
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += rhs[i] + psi_.lambda * both[i];
  Tensor out(q_ * q_, base_->zero()), pw = outer(unit(), unit());
  for (unsigned i = 0; i < q_; ++i) {
    if (!a[i].is_zero())
      for (std::size_t s = 0; s < out.size(); ++s) out[s] += a[i] * pw[s];
    pw = tensor_mul(pw, dx, 2);
  }
  return out;
}

Verdict FiniteKernelAlg::check_hopf() const {
  // psi(Delta X) = 0 makes Delta a well-defined algebra map.
  Tensor dx = delta(x()), acc(q_ * q_, base_->zero()), pw = outer(unit(), unit());
  for (unsigned i = 0; i <= q_; ++i) {
    for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += psi_.coeff[i] * pw[s];
    pw = tensor_mul(pw, dx, 2);
  }
  for (const auto& c : acc)
    if (!c.is_zero()) return Verdict::fail("psi(Delta X) != 0");
  std::vector<Tensor> deltas;
  for (unsigned i = 0; i < q_; ++i) deltas.push_back(delta(pow_[i]));
  for (unsigned i = 0; i < q_; ++i) {
    const Tensor& d = deltas[i];
    Elem left(q_, base_->zero()), right(q_, base_->zero());
    for (unsigned j = 0; j < q_; ++j) {
      left[j] = d[q_ * j];
      right[j] = d[j];
    }
    if (left != pow_[i] || right != pow_[i]) return Verdict::fail("counit fails on X^" + std::to_string(i));
    const std::size_t q2 = std::size_t(q_) * q_;
    Tensor l3(q2 * q_, base_->zero()), r3(q2 * q_, base_->zero());
    for (unsigned j0 = 0; j0 < q_; ++j0)
      for (unsigned j1 = 0; j1 < q_; ++j1) {
        const RingElem& c = d[j0 + q_ * j1];
        if (c.is_zero()) continue;
        const Tensor &a = deltas[j0], &b = deltas[j1];
        for (std::size_t s = 0; s < q2; ++s) {
          if (!a[s].is_zero()) l3[s + q2 * j1] += c * a[s];
          if (!b[s].is_zero()) r3[j0 + q_ * s] += c * b[s];
        }
      }
    if (l3 != r3) return Verdict::fail("coassociativity fails on X^" + std::to_string(i));
  }
  return Verdict::pass("rank " + std::to_string(q_) + ", coassociative and counital");
}

std::optional<unsigned> FiniteKernelAlg::nilpotency_index() const {
  Elem p = unit();
  for (unsigned k = 1; k <= 64 * q_; ++k) {
    p = mul(p, x());
    if (is_zero(p)) return k;
  }
  return std::nullopt;
}

std::optional<unsigned> FiniteKernelAlg::nilpotency_by_squaring() const {
  Elem p = x();
  for (unsigned k = 1; k <= 64 * q_; k *= 2) {
    if (is_zero(p)) return k;
    p = mul(p, p);
  }
  return std::nullopt;
}

bool FiniteKernelAlg::is_group_like(const Elem& e) const {
  return e[0].is_one() && delta(e) == outer(e, e);
}

}  // namespace wd
