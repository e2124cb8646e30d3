#pragma once

// Functions of positive type on finite groups with Gaussian-rational
// values, decided by an exact pivoted LDL* factorization of the Gram
// matrix, and their lift f′(a) = (1/μ(1)) Σ_g f(g) μ(a(g)) to S(μ,G).

#include <string>
#include <vector>

#include "l0/group.hpp"
#include "l0/pugroup.hpp"
#include "l0/rational.hpp"
#include "l0/submeasure.hpp"

namespace l0 {

using ComplexMatrix = std::vector<std::vector<Complex>>;

inline bool is_hermitian(const ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m.size()) return false;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!(m[i][j] == m[j][i].conj())) return false;
    }
  }
  return true;
}

/// Hermitian PSD test: pivot on any positive diagonal entry and take the
/// Schur complement; a zero diagonal forces a zero row.
inline bool is_psd(ComplexMatrix m) {
  if (!is_hermitian(m)) return false;
  std::vector<std::size_t> live(m.size());
  for (std::size_t i = 0; i < live.size(); ++i) live[i] = i;
  while (!live.empty()) {
    std::size_t pivot = live.size();
    for (std::size_t k = 0; k < live.size(); ++k) {
      const Rational& d = m[live[k]][live[k]].re;
      if (sgn(d) < 0) return false;
      if (sgn(d) > 0 && pivot == live.size()) pivot = k;
    }
    if (pivot == live.size()) {
      for (std::size_t i : live) {
        for (std::size_t j : live) {
          if (!(m[i][j] == Complex())) return false;
        }
      }
      return true;
    }
    const std::size_t p = live[pivot];
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(pivot));
    const Rational d = m[p][p].re;
    for (std::size_t i : live) {
      if (m[i][p] == Complex()) continue;
      for (std::size_t j : live) {
        m[i][j] = m[i][j] - m[i][p] * m[p][j] / Complex(d);
      }
    }
  }
  return true;
}

class PosTypeFn {
 public:
  /// Rejects f unless its full Gram matrix is Hermitian PSD.
  PosTypeFn(GroupPtr group, std::vector<Complex> values) : group_(std::move(group)), values_(std::move(values)) {
    if (!group_->is_finite()) throw InputError("positive-type functions are checked on finite groups");
    if (values_.size() != static_cast<std::size_t>(group_->order())) {
      throw InputError("need one value per group element");
    }
    if (!is_psd(gram())) throw PreconditionError("f is not of positive type (Gram matrix is not PSD)");
  }

  static bool check(const GroupPtr& group, const std::vector<Complex>& values) {
    try {
      PosTypeFn f(group, values);
      return true;
    } catch (const PreconditionError&) {
      return false;
    }
  }

  const GroupPtr& group() const { return group_; }
  const std::vector<Complex>& values() const { return values_; }
  const Complex& operator()(const GroupElement& g) const {
    return values_[static_cast<std::size_t>(g.as_long())];
  }

  /// [f(g_j⁻¹ g_i)]_{i,j} over all elements.
  ComplexMatrix gram() const {
    const auto elems = group_->elements();
    ComplexMatrix m(elems.size(), std::vector<Complex>(elems.size()));
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = 0; j < elems.size(); ++j) {
        m[i][j] = (*this)(group_->mul(group_->inv(elems[j]), elems[i]));
      }
    }
    return m;
  }

 private:
  GroupPtr group_;
  std::vector<Complex> values_;
};

inline bool pos_type_check(const GroupPtr& group, const std::vector<Complex>& values) {
  return PosTypeFn::check(group, values);
}

/// x ↦ i^{(4/k)·j·x} on ℤ_k; Gaussian-rational exactly when k divides 4.
inline std::vector<Complex> cyclic_character(long k, long j) {
  if (k < 1 || 4 % k != 0) throw InputError("ℤ_k characters are Gaussian rational only for k | 4");
  static const Complex units[4] = {Complex(1), Complex(0, 1), Complex(-1), Complex(0, -1)};
  std::vector<Complex> out;
  for (long x = 0; x < k; ++x) out.push_back(units[((4 / k) * j * x) % 4]);
  return out;
}

/// x ↦ cos(2π j x / k), rational for k ∈ {1,2,3,4,6}.
inline std::vector<Complex> cyclic_cosine(long k, long j) {
  if (k < 1 || 12 % k != 0 || k == 12) throw InputError("cos(2πjx/k) is rational only for k ∈ {1,2,3,4,6}");
  // cos(2π t/12) for t = 0..11 at the angles reachable from k ∈ {1,2,3,4,6}
  std::vector<Complex> out;
  for (long x = 0; x < k; ++x) {
    const long t = (12 / k) * j * x % 12;
    Rational c;
    switch (t) {
      case 0: c = 1; break;
      case 2: case 10: c = Rational(1, 2); break;
      case 3: case 9: c = 0; break;
      case 4: case 8: c = Rational(-1, 2); break;
      case 6: c = -1; break;
      default: throw InputError("irrational cosine");
    }
    out.emplace_back(c);
  }
  return out;
}

inline void require_measure(const SetFunc& mu, const char* op) {
  const auto& v = mu.values();
  const int n = mu.algebra()->size();
  for (Mask a = 0; a < v.size(); ++a) {
    Rational s = 0;
    for (int i = 0; i < n; ++i) {
      if ((a >> i) & 1U) s += v[Mask{1} << i];
    }
    if (s != v[a]) {
      throw PreconditionError(std::string(op) + " needs an additive μ; fails at " +
                              Elem(mu.algebra(), a).to_string());
    }
  }
  if (sgn(mu.top_value()) <= 0) throw PreconditionError(std::string(op) + " needs μ(1) > 0");
}

inline Complex lift_value(const PosTypeFn& f, const SetFunc& mu, const PUFunc& a) {
  Complex s;
  for (const auto& [g, m] : a.labels()) s = s + f(g) * Complex(mu.eval(m));
  return s / Complex(mu.top_value());
}

/// f′(a), with f′∘η = f and |f′(a)|² <= f′(e)² replayed.
inline Complex pos_type_lift(const PosTypeFn& f, const SetFunc& mu, const PUFunc& a) {
  if (!same_group(f.group(), a.group())) throw InputError("f and a use different groups");
  require_same_algebra(mu.algebra(), a.algebra(), "pos_type_lift");
  require_measure(mu, "pos_type_lift");
  Complex v = lift_value(f, mu, a);
  for (const auto& g : f.group()->elements()) {
    if (!(lift_value(f, mu, eta(a.algebra(), a.group(), g)) == f(g))) {
      throw VerificationError("f′(η(g)) ≠ f(g) at " + f.group()->format(g));
    }
  }
  const Complex fe = f(f.group()->identity());
  if (v.norm2() > fe.norm2()) throw VerificationError("|f′(a)|² exceeds f′(e)²");
  return v;
}

/// Gram matrix of f′ over a sample of elements of S(μ,G).
inline ComplexMatrix lifted_gram(const PosTypeFn& f, const SetFunc& mu, const std::vector<PUFunc>& sample) {
  require_measure(mu, "lifted_gram");
  ComplexMatrix m(sample.size(), std::vector<Complex>(sample.size()));
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = 0; j < sample.size(); ++j) {
      m[i][j] = lift_value(f, mu, pu_multiply(pu_inverse(sample[j]), sample[i]));
    }
  }
  return m;
}

}  // namespace l0
