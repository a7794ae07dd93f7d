#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "berezin/fock.hpp"
#include "berezin/symbol.hpp"

namespace berezin {

// Matrix of an operator on the truncated Fock space (the compression
// P_M A P_M), rows and columns over the graded-lex basis.
class OperatorMatrix {
 public:
  explicit OperatorMatrix(FockBasisPtr basis)
      : basis_(std::move(basis)),
        mat_(Eigen::MatrixXcd::Zero(basis_->size(), basis_->size())) {}

  OperatorMatrix(FockBasisPtr basis, Eigen::MatrixXcd mat)
      : basis_(std::move(basis)), mat_(std::move(mat)) {
    if (mat_.rows() != basis_->size() || mat_.cols() != basis_->size())
      throw DimensionError("matrix shape does not match basis size");
  }

  static OperatorMatrix identity(FockBasisPtr basis) {
    const int n = basis->size();
    return OperatorMatrix(std::move(basis), Eigen::MatrixXcd::Identity(n, n));
  }

  const FockBasisPtr& basis() const { return basis_; }
  const Eigen::MatrixXcd& mat() const { return mat_; }
  Eigen::MatrixXcd& mat() { return mat_; }

  FockVector apply(const FockVector& v) const {
    if (v.basis()->modes() != basis_->modes() || v.basis()->cutoff() != basis_->cutoff())
      throw DimensionError("vector lives in a different truncated space");
    return FockVector(v.basis(), mat_ * v.coeffs());
  }

  bool is_hermitian(double tol = 1e-12) const {
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, mat_.cwiseAbs().maxCoeff());
  }

 private:
  FockBasisPtr basis_;
  Eigen::MatrixXcd mat_;
};

namespace detail {

// sqrt(a*b), rooted factor by factor only when the product overflows: the
// product form keeps perfect squares exact, the split form keeps deep
// exponential-series symbols finite.
inline double root_product(double a, double b) {
  const double p = a * b;
  return std::isfinite(p) ? std::sqrt(p) : std::sqrt(a) * std::sqrt(b);
}

}  // namespace detail

// Normal (Wick) quantization: each term c z*^b z^a becomes c (a+)^b (a-)^a.
// Matrix elements are exact square roots of integer falling-factorial
// products; components raised past the cutoff are compressed away.
inline OperatorMatrix normal_quantize(const PolySymbol& symbol, const FockBasisPtr& basis) {
  if (symbol.modes() != basis->modes())
    throw DimensionError("symbol and basis mode counts differ");
  OperatorMatrix op(basis);
  for (const auto& [key, c] : symbol.terms()) {
    for (int col = 0; col < basis->size(); ++col) {
      const MultiIndex& delta = basis->index(col);
      if (!delta.dominates(key.z)) continue;
      const MultiIndex mu = delta.minus(key.z);
      const MultiIndex gamma = mu.plus(key.zstar);
      if (!basis->contains(gamma)) continue;
      const double amp = detail::root_product(rising_factorial_ratio(mu, key.z),
                                              rising_factorial_ratio(mu, key.zstar));
      op.mat()(basis->position(gamma), col) += c * amp;
    }
  }
  return op;
}

// Anti-normal (coherent / Berezin) quantization: the symbol is averaged
// against coherent projectors, int Theta(conj z, z) |e_z><e_z| dmu. Matrix
// elements reduce to Gaussian moments, again exact integer square roots.
inline OperatorMatrix antinormal_quantize(const PolySymbol& symbol, const FockBasisPtr& basis) {
  if (symbol.modes() != basis->modes())
    throw DimensionError("symbol and basis mode counts differ");
  OperatorMatrix op(basis);
  for (const auto& [key, c] : symbol.terms()) {
    for (int col = 0; col < basis->size(); ++col) {
      const MultiIndex& delta = basis->index(col);
      const MultiIndex raised = delta.plus(key.zstar);
      if (!raised.dominates(key.z)) continue;
      const MultiIndex gamma = raised.minus(key.z);
      if (!basis->contains(gamma)) continue;
      const double amp = detail::root_product(rising_factorial_ratio(delta, key.zstar),
                                              rising_factorial_ratio(gamma, key.z));
      op.mat()(basis->position(gamma), col) += c * amp;
    }
  }
  return op;
}

struct ExtractedSymbol {
  PolySymbol symbol;
  double residual;  // max entrywise defect of re-quantizing the symbol
};

// Inverts normal quantization: on the truncated space the map from symbol
// coefficients (degrees up to 2M) to matrices is triangular and invertible,
// so the residual measures only numerical health.
inline ExtractedSymbol normal_symbol_of(const OperatorMatrix& op) {
  const FockBasisPtr& basis = op.basis();
  PolySymbol symbol(basis->modes());
  for (int r = 0; r < basis->size(); ++r) {
    const MultiIndex& beta = basis->index(r);
    for (int col = 0; col < basis->size(); ++col) {
      const MultiIndex& alpha = basis->index(col);
      Complex acc(0.0);
      for (int k = 0; k < basis->size(); ++k) {
        const MultiIndex& kappa = basis->index(k);
        if (!beta.dominates(kappa) || !alpha.dominates(kappa)) continue;
        const MultiIndex bk = beta.minus(kappa), ak = alpha.minus(kappa);
        const double sign = (kappa.degree() % 2 == 0) ? 1.0 : -1.0;
        acc += sign / multi_factorial(kappa) *
               op.mat()(basis->position(bk), basis->position(ak)) /
               std::sqrt(multi_factorial(bk) * multi_factorial(ak));
      }
      symbol.add_term(beta, alpha, acc);
    }
  }
  const OperatorMatrix back = normal_quantize(symbol, basis);
  const double residual = (op.mat() - back.mat()).cwiseAbs().maxCoeff();
  return {std::move(symbol), residual};
}

// Anti-normal symbol: the heat flow at time -1 applied to the normal symbol
// undoes the Gaussian smoothing that links the two orderings.
inline ExtractedSymbol antinormal_symbol_of(const OperatorMatrix& op) {
  ExtractedSymbol normal = normal_symbol_of(op);
  PolySymbol anti = heat_transform(normal.symbol, -1.0);
  const OperatorMatrix back = antinormal_quantize(anti, op.basis());
  const double residual = (op.mat() - back.mat()).cwiseAbs().maxCoeff();
  return {std::move(anti), residual};
}

// Diagonal of the integral kernel of the operator: K(z, z*) =
// <e_z| A |e_z> = Theta_normal(z*, z) e^{z* . z}. The polynomial factor is
// stored; evaluation restores the exponential.
struct DiagonalKernel {
  PolySymbol symbol;  // normal symbol of the operator

  Complex evaluate(std::span<const Complex> z, std::span<const Complex> zstar) const {
    Complex dot(0.0);
    for (int i = 0; i < symbol.modes(); ++i)
      dot += zstar[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    return symbol.evaluate(z, zstar) * std::exp(dot);
  }
};

inline DiagonalKernel kernel_diag(const OperatorMatrix& op) {
  return {normal_symbol_of(op).symbol};
}

}  // namespace berezin
