#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "berezin/multi_index.hpp"
#include "berezin/quadrature.hpp"
#include "berezin/symbol.hpp"

namespace berezin {

// Basis of the Fock space truncated at total degree <= cutoff: the
// normalized monomials u^alpha / sqrt(alpha!) in graded-lex order.
class FockBasis {
 public:
  static std::shared_ptr<const FockBasis> make(int modes, int cutoff) {
    if (modes < 1) throw DimensionError("basis needs at least one mode");
    if (cutoff < 0) throw DimensionError("cutoff must be nonnegative");
    return std::shared_ptr<const FockBasis>(new FockBasis(modes, cutoff));
  }

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& index(int pos) const { return indices_[static_cast<std::size_t>(pos)]; }

  bool contains(const MultiIndex& alpha) const { return lookup_.count(alpha) != 0; }

  int position(const MultiIndex& alpha) const {
    auto it = lookup_.find(alpha);
    if (it == lookup_.end()) throw DomainError("multi-index outside truncated basis");
    return it->second;
  }

 private:
  FockBasis(int modes, int cutoff)
      : modes_(modes), cutoff_(cutoff), indices_(enumerate_multi_indices(modes, cutoff)) {
    for (int i = 0; i < size(); ++i) lookup_.emplace(indices_[static_cast<std::size_t>(i)], i);
  }

  int modes_;
  int cutoff_;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, int> lookup_;
};

using FockBasisPtr = std::shared_ptr<const FockBasis>;

// Element of the truncated Fock space, stored as coefficients over the
// normalized basis.
class FockVector {
 public:
  explicit FockVector(FockBasisPtr basis)
      : basis_(std::move(basis)), coeffs_(Eigen::VectorXcd::Zero(basis_->size())) {}

  FockVector(FockBasisPtr basis, Eigen::VectorXcd coeffs)
      : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != basis_->size())
      throw DimensionError("coefficient count does not match basis size");
  }

  const FockBasisPtr& basis() const { return basis_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }

  Complex coefficient(const MultiIndex& alpha) const {
    return basis_->contains(alpha) ? coeffs_[basis_->position(alpha)] : Complex(0.0);
  }

  double norm() const { return coeffs_.norm(); }

  // Value of the analytic representative sum_a c_a u^a / sqrt(a!).
  Complex evaluate(std::span<const Complex> point) const {
    if (static_cast<int>(point.size()) != basis_->modes())
      throw DimensionError("evaluation point length does not match basis modes");
    Complex total(0.0);
    for (int p = 0; p < basis_->size(); ++p) {
      const MultiIndex& alpha = basis_->index(p);
      Complex mono(1.0);
      for (int i = 0; i < basis_->modes(); ++i)
        for (int k = 0; k < alpha[i]; ++k) mono *= point[static_cast<std::size_t>(i)];
      total += coeffs_[p] * mono / std::sqrt(multi_factorial(alpha));
    }
    return total;
  }

 private:
  FockBasisPtr basis_;
  Eigen::VectorXcd coeffs_;
};

inline void require_same_basis(const FockVector& a, const FockVector& b) {
  const auto& p = *a.basis();
  const auto& q = *b.basis();
  if (p.modes() != q.modes() || p.cutoff() != q.cutoff())
    throw DimensionError("vectors live in different truncated spaces");
}

// Antilinear in the first argument.
inline Complex inner_product(const FockVector& a, const FockVector& b) {
  require_same_basis(a, b);
  return a.coeffs().dot(b.coeffs());
}

struct CoherentState {
  FockVector state;
  double truncation_mass;  // squared norm beyond the cutoff
};

// Truncation of e_z, the analytic function u -> exp(u . z), with
// coefficients z^a / sqrt(a!). The discarded squared mass is the tail
// sum_{k > M} r^k / k!, r = |z|^2, summed directly to avoid cancellation.
inline CoherentState coherent_state(const FockBasisPtr& basis, std::span<const Complex> z) {
  if (static_cast<int>(z.size()) != basis->modes())
    throw DimensionError("coherent point length does not match basis modes");
  FockVector v(basis);
  for (int p = 0; p < basis->size(); ++p) {
    const MultiIndex& alpha = basis->index(p);
    Complex num(1.0);
    for (int i = 0; i < basis->modes(); ++i)
      for (int k = 0; k < alpha[i]; ++k) num *= z[static_cast<std::size_t>(i)];
    v.coeffs()[p] = num / std::sqrt(multi_factorial(alpha));
  }

  double r = 0.0;
  for (const Complex& zi : z) r += std::norm(zi);
  double term = 1.0;
  for (int k = 1; k <= basis->cutoff() + 1; ++k) term *= r / k;
  double tail = 0.0;
  for (int k = basis->cutoff() + 1; k < basis->cutoff() + 10000; ++k) {
    tail += term;
    term *= r / (k + 1);
    if (term < tail * 1e-18 + 1e-300) break;
  }
  return {std::move(v), tail};
}

enum class Ladder { create, annihilate };

struct FockResult {
  FockVector state;
  double lost;  // squared mass pushed past the cutoff and discarded
};

// Creation multiplies by u_i (coefficients shift up with sqrt factors, top
// degree spills past the cutoff); annihilation is d/du_i and is exact.
inline FockResult apply_ladder(const FockVector& v, int mode, Ladder kind) {
  const FockBasisPtr& basis = v.basis();
  if (mode < 0 || mode >= basis->modes()) throw DimensionError("mode index out of range");
  FockVector out(basis);
  double lost = 0.0;
  for (int p = 0; p < basis->size(); ++p) {
    const Complex c = v.coeffs()[p];
    if (c == Complex(0.0)) continue;
    const MultiIndex& alpha = basis->index(p);
    if (kind == Ladder::create) {
      const MultiIndex up = alpha.bumped(mode, 1);
      const double factor = std::sqrt(double(alpha[mode] + 1));
      if (up.degree() > basis->cutoff())
        lost += std::norm(factor * c);
      else
        out.coeffs()[basis->position(up)] += factor * c;
    } else {
      if (alpha[mode] == 0) continue;
      out.coeffs()[basis->position(alpha.bumped(mode, -1))] += std::sqrt(double(alpha[mode])) * c;
    }
  }
  return {std::move(out), lost};
}

enum class Shift { translate, mult_exp };

namespace detail {

// Monomial-coefficient view m_a = c_a / sqrt(a!).
inline Eigen::VectorXcd to_monomial(const FockVector& v) {
  Eigen::VectorXcd m = v.coeffs();
  for (int p = 0; p < v.basis()->size(); ++p)
    m[p] /= std::sqrt(multi_factorial(v.basis()->index(p)));
  return m;
}

inline FockVector from_monomial(const FockBasisPtr& basis, Eigen::VectorXcd m) {
  for (int p = 0; p < basis->size(); ++p)
    m[p] *= std::sqrt(multi_factorial(basis->index(p)));
  return FockVector(basis, std::move(m));
}

inline Complex power(std::span<const Complex> w, const MultiIndex& e) {
  Complex out(1.0);
  for (int i = 0; i < e.modes(); ++i)
    for (int k = 0; k < e[i]; ++k) out *= w[static_cast<std::size_t>(i)];
  return out;
}

// Psi(u) -> Psi(u + w). Degree never grows, so this is exact.
inline FockVector translate(const FockVector& v, std::span<const Complex> w) {
  const FockBasisPtr& basis = v.basis();
  const Eigen::VectorXcd m = to_monomial(v);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(basis->size());
  for (int p = 0; p < basis->size(); ++p) {
    if (m[p] == Complex(0.0)) continue;
    const MultiIndex& alpha = basis->index(p);
    // (u+w)^alpha = sum_{kappa <= alpha} C(alpha,kappa) w^{alpha-kappa} u^kappa
    for (int q = 0; q < basis->size(); ++q) {
      const MultiIndex& kappa = basis->index(q);
      if (!alpha.dominates(kappa)) continue;
      double binom = 1.0;
      for (int i = 0; i < basis->modes(); ++i)
        binom *= factorial(alpha[i]) / (factorial(kappa[i]) * factorial(alpha[i] - kappa[i]));
      out[q] += m[p] * binom * power(w, alpha.minus(kappa));
    }
  }
  return from_monomial(basis, std::move(out));
}

// Psi(u) -> exp(u . w) Psi(u), truncated at the cutoff.
inline FockVector mult_exp(const FockVector& v, std::span<const Complex> w) {
  const FockBasisPtr& basis = v.basis();
  const Eigen::VectorXcd m = to_monomial(v);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(basis->size());
  for (int q = 0; q < basis->size(); ++q) {
    const MultiIndex& gamma = basis->index(q);
    // coefficient of u^gamma: sum_{kappa <= gamma} w^{gamma-kappa}/(gamma-kappa)! m_kappa
    Complex acc(0.0);
    for (int p = 0; p < basis->size(); ++p) {
      const MultiIndex& kappa = basis->index(p);
      if (m[p] == Complex(0.0) || !gamma.dominates(kappa)) continue;
      const MultiIndex beta = gamma.minus(kappa);
      acc += m[p] * power(w, beta) / multi_factorial(beta);
    }
    out[q] = acc;
  }
  return from_monomial(basis, std::move(out));
}

}  // namespace detail

// translate: Psi(u) -> Psi(u + w), exact. mult_exp: Psi(u) -> e^{u.w} Psi(u),
// truncated; its discarded squared mass follows from commuting the adjoint
// through: |E_w Psi|^2 = e^{|w|^2} <Psi, E_w T_{conj w} Psi>, which only needs
// components inside the cutoff.
inline FockResult apply_shift(const FockVector& v, std::span<const Complex> w, Shift kind) {
  if (static_cast<int>(w.size()) != v.basis()->modes())
    throw DimensionError("shift vector length does not match basis modes");
  if (kind == Shift::translate) return {detail::translate(v, w), 0.0};

  FockVector truncated = detail::mult_exp(v, w);
  std::vector<Complex> wbar(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) wbar[i] = std::conj(w[i]);
  double wsq = 0.0;
  for (const Complex& wi : w) wsq += std::norm(wi);
  const FockVector cross = detail::mult_exp(detail::translate(v, wbar), w);
  const double full_norm_sq = std::exp(wsq) * inner_product(v, cross).real();
  const double lost = std::max(0.0, full_norm_sq - truncated.coeffs().squaredNorm());
  return {std::move(truncated), lost};
}

// Max entrywise deviation of the quadrature-discretized coherent resolution
// of identity sum_nodes wt e_z e_z^H from the identity matrix.
inline double resolution_of_identity_residual(int modes, int cutoff, int points_per_axis) {
  const FockBasisPtr basis = FockBasis::make(modes, cutoff);
  const int n = basis->size();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd v(n);
  for_each_gaussian_node(modes, points_per_axis,
                         [&](const std::vector<Complex>& zeta, double wt) {
                           for (int p = 0; p < n; ++p) {
                             const MultiIndex& alpha = basis->index(p);
                             v[p] = detail::power(zeta, alpha) /
                                    std::sqrt(multi_factorial(alpha));
                           }
                           s.noalias() += wt * v * v.adjoint();
                         });
  return (s - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace berezin
