#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "berezin/errors.hpp"

namespace berezin {

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // for weight function e^{-x^2} on the real line
};

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the Hermite
// recurrence (subdiagonal sqrt(k/2)), weights sqrt(pi) * (first eigenvector
// component)^2. Exact for polynomials of degree <= 2n-1.
inline GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw DomainError("quadrature order must be positive");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd subdiag(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) subdiag[k - 1] = std::sqrt(k / 2.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, subdiag);
  if (solver.info() != Eigen::Success)
    throw DomainError("Gauss-Hermite eigensolve failed");

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt_pi = std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()[i];
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = sqrt_pi * v0 * v0;
  }
  return rule;
}

// Iterate the tensor-product rule for the normalized Gaussian measure
// prod_i pi^-1 e^{-|zeta_i|^2} d^2 zeta_i over d complex modes: each mode
// contributes two real Gauss-Hermite axes. The callback receives the complex
// node vector and the combined weight (already divided by pi^d); summing
// weight * f(zeta) approximates the Gaussian integral of f, exactly when f
// restricted to each real axis has degree <= 2*points_per_axis - 1.
inline void for_each_gaussian_node(
    int modes, int points_per_axis,
    const std::function<void(const std::vector<std::complex<double>>&, double)>& visit) {
  if (modes < 1) throw DomainError("need at least one mode");
  const GaussHermiteRule rule = gauss_hermite(points_per_axis);
  const int axes = 2 * modes;
  std::vector<int> idx(axes, 0);
  std::vector<std::complex<double>> zeta(modes);
  const double norm = std::pow(M_PI, -modes);
  while (true) {
    double weight = norm;
    for (int a = 0; a < axes; ++a) weight *= rule.weights[idx[a]];
    for (int i = 0; i < modes; ++i)
      zeta[i] = {rule.nodes[idx[2 * i]], rule.nodes[idx[2 * i + 1]]};
    visit(zeta, weight);
    int a = 0;
    while (a < axes && ++idx[a] == points_per_axis) idx[a++] = 0;
    if (a == axes) break;
  }
}

}  // namespace berezin
