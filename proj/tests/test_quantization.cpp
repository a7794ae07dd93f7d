#include <catch2/catch_amalgamated.hpp>
#include <complex>
#include <random>
#include <vector>

#include "berezin/quantization.hpp"

using namespace berezin;
using Catch::Matchers::WithinAbs;

namespace {

// Independent oracle: entry (g,d) of the coherent average of Theta is the
// Gaussian integral of Theta(conj z, z) z^g conj(z)^d / sqrt(g! d!).
Eigen::MatrixXcd quadrature_antinormal(const PolySymbol& theta, const FockBasisPtr& basis,
                                       int pts) {
  const int n = basis->size();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd v(n);
  for_each_gaussian_node(basis->modes(), pts, [&](const std::vector<Complex>& zeta, double wt) {
    std::vector<Complex> zbar(zeta.size());
    for (std::size_t i = 0; i < zeta.size(); ++i) zbar[i] = std::conj(zeta[i]);
    const Complex tv = theta.evaluate(zeta, zbar);
    for (int p = 0; p < n; ++p) {
      const MultiIndex& alpha = basis->index(p);
      Complex mono(1.0);
      for (int i = 0; i < basis->modes(); ++i)
        for (int k = 0; k < alpha[i]; ++k) mono *= zeta[static_cast<std::size_t>(i)];
      v[p] = mono / std::sqrt(multi_factorial(alpha));
    }
    s.noalias() += (wt * tv) * v * v.adjoint();
  });
  return s;
}

PolySymbol mono(std::initializer_list<int> bs, std::initializer_list<int> as, Complex c = 1.0) {
  return PolySymbol::monomial(MultiIndex(bs), MultiIndex(as), c);
}

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

PolySymbol random_real_symbol(int modes, int degree, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  PolySymbol p(modes);
  for (const auto& b : enumerate_multi_indices(modes, degree))
    for (const auto& a : enumerate_multi_indices(modes, degree - b.degree()))
      p.add_term(b, a, Complex(dist(gen), dist(gen)));
  return p + p.conjugate();
}

}  // namespace

TEST_CASE("anti-normal quantization of moments has closed forms") {
  auto basis = FockBasis::make(1, 8);
  CHECK(max_diff(antinormal_quantize(PolySymbol::constant(1, 1.0), basis).mat(),
                 Eigen::MatrixXcd::Identity(9, 9)) == 0.0);

  auto num = antinormal_quantize(mono({1}, {1}), basis);
  auto quart = antinormal_quantize(mono({2}, {2}), basis);
  for (int n = 0; n <= 8; ++n) {
    CHECK(num.mat()(n, n) == Complex(n + 1.0));
    CHECK(quart.mat()(n, n) == Complex((n + 1.0) * (n + 2.0)));
  }
  CHECK(num.mat().cwiseAbs().sum() == Catch::Approx(9.0 * 10.0 / 2.0));  // diagonal only
}

TEST_CASE("anti-normal quantization matches coherent-average quadrature") {
  auto basis = FockBasis::make(1, 6);
  std::vector<PolySymbol> symbols = {
      mono({1}, {1}),
      mono({0}, {1}) + mono({1}, {0}),
      mono({2}, {2}, 0.7) + mono({1}, {1}, 0.3),
      mono({2}, {1}, Complex(1.0, 2.0)) + mono({1}, {2}, Complex(1.0, -2.0)),
      mono({3}, {0}, Complex(0.0, 1.0)),
  };
  for (const auto& theta : symbols) {
    const auto exact = antinormal_quantize(theta, basis).mat();
    const auto quad = quadrature_antinormal(theta, basis, 12);
    const double scale = std::max(1.0, exact.cwiseAbs().maxCoeff());
    CHECK(max_diff(exact, quad) <= 1e-11 * scale);
  }

  auto basis2 = FockBasis::make(2, 3);
  PolySymbol theta2 = mono({1, 0}, {0, 1}, Complex(0.5, 0.5)) +
                      mono({0, 1}, {1, 0}, Complex(0.5, -0.5)) + mono({1, 1}, {1, 1}, 0.25);
  const auto exact2 = antinormal_quantize(theta2, basis2).mat();
  const auto quad2 = quadrature_antinormal(theta2, basis2, 8);
  CHECK(max_diff(exact2, quad2) <= 1e-11 * std::max(1.0, exact2.cwiseAbs().maxCoeff()));
}

TEST_CASE("normal quantization realizes ladder monomials") {
  auto basis = FockBasis::make(1, 8);
  auto num = normal_quantize(mono({1}, {1}), basis);
  for (int n = 0; n <= 8; ++n) CHECK(num.mat()(n, n) == Complex(double(n)));

  auto quart = normal_quantize(mono({2}, {2}), basis);
  for (int n = 0; n <= 8; ++n) CHECK(quart.mat()(n, n) == Complex(n * (n - 1.0)));

  // pure z / z* terms agree with the ladder maps on states
  auto basis2 = FockBasis::make(2, 5);
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  FockVector psi(basis2);
  for (int p = 0; p < basis2->size(); ++p) psi.coeffs()[p] = {dist(gen), dist(gen)};
  for (int i = 0; i < 2; ++i) {
    MultiIndex unit = MultiIndex::unit(2, i), zero(2);
    auto ann = normal_quantize(PolySymbol::monomial(zero, unit, 1.0), basis2).apply(psi);
    CHECK((ann.coeffs() - apply_ladder(psi, i, Ladder::annihilate).state.coeffs())
              .cwiseAbs()
              .maxCoeff() <= 1e-13);
    auto cre = normal_quantize(PolySymbol::monomial(unit, zero, 1.0), basis2).apply(psi);
    CHECK((cre.coeffs() - apply_ladder(psi, i, Ladder::create).state.coeffs())
              .cwiseAbs()
              .maxCoeff() <= 1e-13);
  }
}

TEST_CASE("orderings are linked by the heat flow of the symbol") {
  // anti-normal of Theta equals normal of the heat-smoothed Theta
  for (int modes = 1; modes <= 2; ++modes) {
    auto basis = FockBasis::make(modes, modes == 1 ? 6 : 4);
    auto idx = enumerate_multi_indices(modes, 4);
    for (const auto& b : idx)
      for (const auto& a : idx) {
        if (b.degree() + a.degree() > 4) continue;
        PolySymbol theta = PolySymbol::monomial(b, a, 1.0);
        const auto anti = antinormal_quantize(theta, basis).mat();
        const auto smoothed = normal_quantize(heat_transform(theta, 1.0), basis).mat();
        CHECK(max_diff(anti, smoothed) <= 1e-10 * std::max(1.0, anti.cwiseAbs().maxCoeff()));
      }
  }
}

TEST_CASE("real symbols quantize to Hermitian matrices") {
  auto basis = FockBasis::make(2, 4);
  PolySymbol theta = random_real_symbol(2, 3, 13);
  CHECK(normal_quantize(theta, basis).is_hermitian());
  CHECK(antinormal_quantize(theta, basis).is_hermitian());
  CHECK_FALSE(antinormal_quantize(mono({0, 0}, {1, 0}), basis).is_hermitian());
}

TEST_CASE("anti-normal quantization preserves positivity") {
  auto basis = FockBasis::make(1, 10);
  // pointwise nonnegative symbols average positive projectors
  std::vector<PolySymbol> nonneg;
  nonneg.push_back((mono({1}, {1}) - PolySymbol::constant(1, 1.0)) *
                   (mono({1}, {1}) - PolySymbol::constant(1, 1.0)));
  PolySymbol q = mono({0}, {2}, 1.0) + mono({0}, {1}, Complex(0.3, -0.7)) +
                 PolySymbol::constant(1, Complex(0.2, 0.1));
  nonneg.push_back(q.conjugate() * q);
  for (const auto& theta : nonneg) {
    auto op = antinormal_quantize(theta, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.mat());
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
  // normal ordering of the same nonnegative symbol is indefinite
  auto op = normal_quantize(nonneg[0], basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.mat());
  CHECK(es.eigenvalues().minCoeff() < -1e-3);
}

TEST_CASE("normal symbol extraction inverts quantization") {
  auto basis = FockBasis::make(2, 4);
  PolySymbol theta = random_real_symbol(2, 4, 31);
  auto ext = normal_symbol_of(normal_quantize(theta, basis));
  CHECK(ext.residual <= 1e-10);
  PolySymbol diff = ext.symbol - theta;
  for (const auto& [key, c] : diff.terms()) {
    if (key.degree() <= 4) CHECK_THAT(std::abs(c), WithinAbs(0.0, 1e-11));
  }

  // arbitrary matrices are reachable: extraction then quantization round-trips
  std::mt19937 gen(77);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXcd a(basis->size(), basis->size());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) a(r, c) = Complex(dist(gen), dist(gen));
  auto ext2 = normal_symbol_of(OperatorMatrix(basis, a));
  CHECK(ext2.residual <= 1e-10);
}

TEST_CASE("anti-normal symbol extraction undoes the smoothing") {
  auto basis = FockBasis::make(1, 8);
  // normal symbol z*z + 1 and anti-normal symbol z*z name the same operator
  auto op = normal_quantize(mono({1}, {1}) + PolySymbol::constant(1, 1.0), basis);
  auto ext = antinormal_symbol_of(op);
  CHECK(ext.residual <= 1e-10);
  CHECK_THAT(std::abs(ext.symbol.coefficient(MultiIndex{1}, MultiIndex{1}) - 1.0),
             WithinAbs(0.0, 1e-12));
  CHECK_THAT(std::abs(ext.symbol.constant_term()), WithinAbs(0.0, 1e-12));

  PolySymbol theta = mono({2}, {2}, 0.5) + mono({1}, {1}, 2.0);
  auto ext2 = antinormal_symbol_of(antinormal_quantize(theta, basis));
  CHECK(ext2.residual <= 1e-10);
  PolySymbol diff = ext2.symbol - theta;
  for (const auto& [key, c] : diff.terms())
    if (key.degree() <= 4) CHECK_THAT(std::abs(c), WithinAbs(0.0, 1e-11));
}

TEST_CASE("diagonal kernel restores the exponential factor") {
  auto basis = FockBasis::make(1, 12);
  auto ident = kernel_diag(OperatorMatrix::identity(basis));
  std::vector<Complex> z{Complex(0.6, -0.3)}, zbar{std::conj(Complex(0.6, -0.3))};
  const double r = std::norm(z[0]);
  CHECK_THAT(std::abs(ident.evaluate(z, zbar) - std::exp(r)), WithinAbs(0.0, 1e-12 * std::exp(r)));

  auto num = kernel_diag(antinormal_quantize(mono({1}, {1}), basis));
  CHECK_THAT(std::abs(num.evaluate(z, zbar) - (r + 1.0) * std::exp(r)),
             WithinAbs(0.0, 1e-11 * std::exp(r)));
}

TEST_CASE("operator application checks the space") {
  auto basis = FockBasis::make(1, 4);
  auto op = OperatorMatrix::identity(basis);
  CHECK_THROWS_AS(op.apply(FockVector(FockBasis::make(1, 5))), DimensionError);
  CHECK_THROWS_AS(normal_quantize(PolySymbol::constant(2, 1.0), basis), DimensionError);
}
