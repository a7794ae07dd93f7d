// Acceptance gate: every guarantee the library advertises, checked at its
// advertised parameters, one verdict line per criterion.
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "berezin/experiment.hpp"

using namespace berezin;

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double max_coeff(const PolySymbol& p) {
  double m = 0.0;
  for (const auto& [key, c] : p.terms()) m = std::max(m, std::abs(c));
  return m;
}

PolySymbol harmonic(int modes) {
  PolySymbol p(modes);
  for (int i = 0; i < modes; ++i)
    p.add_term(MultiIndex::unit(modes, i), MultiIndex::unit(modes, i), 1.0);
  return p;
}

PolySymbol quartic() {
  PolySymbol p = harmonic(1);
  p.add_term(MultiIndex{2}, MultiIndex{2}, 0.1);
  return p;
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out *= double(n - k + i) / double(i);
  return out;
}

struct Outcome {
  bool pass;
  std::string detail;
};

// --- criteria ---------------------------------------------------------------

Outcome ccr_commutators() {
  double worst = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const int cutoff = 10;
    const FockBasisPtr basis = FockBasis::make(d, cutoff);
    std::vector<Eigen::MatrixXcd> a, adag;
    for (int i = 0; i < d; ++i) {
      const MultiIndex zero(d), unit = MultiIndex::unit(d, i);
      a.push_back(normal_quantize(PolySymbol::monomial(zero, unit, 1.0), basis).mat());
      adag.push_back(normal_quantize(PolySymbol::monomial(unit, zero, 1.0), basis).mat());
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Eigen::MatrixXcd comm = a[i] * adag[j] - adag[j] * a[i];
        const double delta = i == j ? 1.0 : 0.0;
        for (int p = 0; p < basis->size(); ++p) {
          if (basis->index(p).degree() > cutoff - 1) continue;
          Eigen::VectorXcd col = comm.col(p);
          col(p) -= delta;
          worst = std::max(worst, col.cwiseAbs().maxCoeff());
        }
      }
  }
  return {worst <= 1e-13, "max residual " + sci(worst) + " (tol 1e-13), d<=3, M=10"};
}

Outcome reproducing_kernel() {
  double worst = 0.0;
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> dist(-0.7, 0.7);
  for (int d = 1; d <= 2; ++d) {
    const int cutoff = 24;
    const FockBasisPtr basis = FockBasis::make(d, cutoff);
    for (int trial = 0; trial < 100; ++trial) {
      FockVector psi(basis);
      for (int p = 0; p < basis->size(); ++p)
        if (basis->index(p).degree() <= cutoff / 2)
          psi.coeffs()(p) = Complex(dist(gen), dist(gen));
      std::vector<Complex> z(static_cast<std::size_t>(d)), zbar(z.size());
      for (auto& zi : z) zi = Complex(dist(gen), dist(gen)) / std::sqrt(double(d));
      for (std::size_t i = 0; i < z.size(); ++i) zbar[i] = std::conj(z[i]);
      const Complex paired = inner_product(coherent_state(basis, z).state, psi);
      worst = std::max(worst, std::abs(paired - psi.evaluate(zbar)));
    }
  }
  return {worst <= 1e-10, "max |<e_z,Psi> - Psi(conj z)| " + sci(worst) +
                              " (tol 1e-10), 100 random Psi, d<=2, M=24"};
}

Outcome identity_resolution() {
  const double r1 = resolution_of_identity_residual(1, 8, 24);
  const double r2 = resolution_of_identity_residual(2, 4, 16);
  return {r1 <= 1e-10 && r2 <= 1e-10,
          "residuals " + sci(r1) + " (d=1,M=8,Q=24), " + sci(r2) + " (d=2,M=4,Q=16), tol 1e-10"};
}

Outcome ordering_transform() {
  double worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    const FockBasisPtr basis = FockBasis::make(d, 8);
    const FockBasisPtr degrees = FockBasis::make(d, 4);
    for (int pa = 0; pa < degrees->size(); ++pa)
      for (int pb = 0; pb < degrees->size(); ++pb) {
        const MultiIndex &zs = degrees->index(pa), &z = degrees->index(pb);
        if (zs.degree() + z.degree() > 4) continue;
        const PolySymbol mono = PolySymbol::monomial(zs, z, 1.0);
        const ExtractedSymbol ext = normal_symbol_of(antinormal_quantize(mono, basis));
        worst = std::max(worst, ext.residual);
        worst = std::max(worst, max_coeff(ext.symbol - heat_transform(mono, 1.0)));
      }
  }
  // the pinned low-order instance: coherent quantization of z*z is diag(n+1)
  const FockBasisPtr b1 = FockBasis::make(1, 8);
  const Eigen::MatrixXcd num = antinormal_quantize(harmonic(1), b1).mat();
  for (int n = 0; n <= 8; ++n)
    worst = std::max(worst, std::abs(num(n, n) - Complex(n + 1.0)));
  return {worst <= 1e-10, "normal-of-antinormal vs heat(+1) residual " + sci(worst) +
                              " (tol 1e-10), monomials deg<=4, d<=2"};
}

Outcome positivity() {
  const FockBasisPtr basis = FockBasis::make(1, 16);
  std::vector<PolySymbol> cases{harmonic(1), PolySymbol::monomial(MultiIndex{2}, MultiIndex{2}, 1.0)};
  {
    PolySymbol p(1);  // (z*z - 1)^2 multiplied out
    p.add_term(MultiIndex{2}, MultiIndex{2}, 1.0);
    p.add_term(MultiIndex{1}, MultiIndex{1}, -2.0);
    p.add_term(MultiIndex{0}, MultiIndex{0}, 1.0);
    cases.push_back(p);
  }
  double min_eig = 1e300;
  for (const PolySymbol& p : cases) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(antinormal_quantize(p, basis).mat());
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  return {min_eig >= -1e-10,
          "min eigenvalue " + sci(min_eig) + " >= -1e-10 over nonnegative symbols"};
}

Outcome harmonic_closed_form() {
  const PolySymbol h = harmonic(1);
  const std::vector<std::pair<Complex, Complex>> endpoints{
      {Complex(0.6, 0.0), Complex(0.6, 0.0)},
      {Complex(0.8, 0.0), Complex(-0.8, 0.0)},
      {Complex(0.5, 0.3), Complex(-0.2, 0.6)},
      {Complex(0.0, 0.8), Complex(0.4, -0.4)}};
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0})
    for (const auto& [z0, z1] : endpoints) {
      const std::vector<Complex> a{z0}, b{z1};
      const Complex got = exact_amplitude(h, t, a, b, 32);
      const Complex want =
          std::exp(Complex(0.0, -t)) * std::exp(std::conj(z1) * z0 * std::exp(Complex(0.0, -t)));
      worst = std::max(worst, std::abs(got - want));
    }
  return {worst <= 1e-8, "max amplitude error " + sci(worst) + " (tol 1e-8), M=32, t in {0.5,1,2}"};
}

Outcome sliced_convergence() {
  const std::vector<Complex> z{Complex(0.6, 0.0)};
  std::vector<double> errors;
  for (int n : {8, 16, 32, 64}) {
    SliceConfig cfg{quartic(), 1.0, n, 16};
    errors.push_back(chernoff_amplitude(cfg, z, z).abs_error);
  }
  bool decreasing = true;
  double lo = 1e300, hi = -1e300;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    decreasing = decreasing && errors[k] < errors[k - 1];
    const double ratio = std::log2(errors[k - 1] / errors[k]);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  std::ostringstream detail;
  detail << "errors";
  for (double e : errors) detail << ' ' << sci(e);
  detail << ", log2 ratios in [" << sci(lo) << ", " << sci(hi) << "] (want [0.7,1.3])";
  return {decreasing && lo >= 0.7 && hi <= 1.3, detail.str()};
}

Outcome constant_shift() {
  const double c = 0.7, t = 1.0;
  const std::vector<Complex> z{Complex(0.6, 0.0)};
  PolySymbol shifted = quartic();
  shifted.add_term(MultiIndex{0}, MultiIndex{0}, c);
  double worst = 0.0;
  for (int n : {8, 16, 32, 64}) {
    SliceConfig plain{quartic(), t, n, 12};
    SliceConfig offset{shifted, t, n, 12};
    const Complex base = chernoff_amplitude(plain, z, z).amplitude;
    const Complex moved = chernoff_amplitude(offset, z, z).amplitude;
    worst = std::max(worst, std::abs(moved - std::exp(Complex(0.0, -c * t)) * base));
  }
  return {worst <= 1e-12,
          "max |A(theta+c) - exp(-ict) A(theta)| " + sci(worst) + " (tol 1e-12), N in {8..64}"};
}

Outcome bosonization() {
  double worst_iso = 0.0, worst_inv = 0.0, worst_num = 0.0, worst_elem = 0.0;
  bool grades_ok = true;
  for (int d = 1; d <= 5; ++d) {
    const FockBasisPtr boson = FockBasis::make(d, d);
    const HardCoreSubspace hc = HardCoreSubspace::make(boson);
    std::vector<int> grades(static_cast<std::size_t>(d) + 1, 0);
    for (int p = 0; p < hc.fermion->size(); ++p) {
      ++grades[static_cast<std::size_t>(hc.fermion->indicator(p).degree())];
      FermionVector f(hc.fermion);
      f.coeffs()(p) = 1.0;
      const FockVector b = bosonize(f, hc);
      worst_iso = std::max(worst_iso, std::abs(b.norm() - 1.0));
      worst_inv = std::max(
          worst_inv, (debosonize(b, hc).coeffs() - f.coeffs()).cwiseAbs().maxCoeff());
    }
    for (int n = 0; n <= d; ++n)
      grades_ok = grades_ok && grades[static_cast<std::size_t>(n)] == int(binomial(d, n));

    Eigen::MatrixXcd conj = conjugate_operator(normal_quantize(harmonic(d), boson), hc).mat;
    for (int p = 0; p < hc.fermion->size(); ++p)
      conj(p, p) -= double(hc.fermion->indicator(p).degree());
    worst_num = std::max(worst_num, conj.cwiseAbs().maxCoeff());
  }

  // matrix elements through the unitary, random operator and random states
  const FockBasisPtr boson = FockBasis::make(4, 4);
  const HardCoreSubspace hc = HardCoreSubspace::make(boson);
  std::mt19937 gen(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXcd raw(boson->size(), boson->size());
  for (int r = 0; r < raw.rows(); ++r)
    for (int cc = 0; cc < raw.cols(); ++cc) raw(r, cc) = Complex(dist(gen), dist(gen));
  const OperatorMatrix op(boson, raw);
  const FermionOperator f = conjugate_operator(op, hc);
  auto random_fermion = [&](unsigned seed) {
    std::mt19937 g(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FermionVector v(hc.fermion);
    for (int p = 0; p < hc.fermion->size(); ++p) v.coeffs()(p) = Complex(u(g), u(g));
    v.coeffs() /= v.coeffs().norm();
    return v;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const FermionVector u = random_fermion(1000 + trial);
    const FermionVector v = random_fermion(2000 + trial);
    const Complex boson_side = inner_product(bosonize(u, hc), op.apply(bosonize(v, hc)));
    const Complex fermi_side = (u.coeffs().adjoint() * f.mat * v.coeffs())(0, 0);
    worst_elem = std::max(worst_elem, std::abs(boson_side - fermi_side));
  }

  const bool pass = worst_iso <= 1e-13 && worst_inv <= 1e-13 && grades_ok &&
                    worst_num <= 1e-13 && worst_elem <= 1e-12;
  return {pass, "isometry " + sci(worst_iso) + ", inverse " + sci(worst_inv) + ", number-op " +
                    sci(worst_num) + ", elements " + sci(worst_elem) +
                    (grades_ok ? ", grade dims C(d,n)" : ", grade dims WRONG") + ", d<=5"};
}

Outcome grassmann_car() {
  double worst = 0.0;
  std::string conj_values;
  for (int d = 1; d <= 4; ++d) {
    const SuperCcrResidual res = super_ccr_residual(d);
    worst = std::max(worst, res.algebraic);
    conj_values += " d=" + std::to_string(d) + ":" + sci(res.conjugated);
  }
  return {worst <= 1e-14, "algebraic residual " + sci(worst) +
                              " (tol 1e-14, d<=4 exhaustive); conjugated finding:" + conj_values};
}

Outcome slice_derivative() {
  const FockBasisPtr basis = FockBasis::make(1, 8);
  const Eigen::MatrixXcd h = antinormal_quantize(quartic(), basis).mat();
  SliceConfig cfg{quartic(), 1.0, 1, 8};
  auto residual = [&](double tau) {
    const Eigen::MatrixXcd a = slice_operator(cfg, tau).mat();
    return ((a - Eigen::MatrixXcd::Identity(h.rows(), h.cols())) / tau + Complex(0.0, 1.0) * h)
        .cwiseAbs()
        .maxCoeff();
  };
  const double ratio = residual(1e-3) / residual(1e-4);
  return {ratio >= 8.0 && ratio <= 12.0,
          "first-order defect ratio " + sci(ratio) + " at tau 1e-3 vs 1e-4 (want [8,12])"};
}

Outcome determinism() {
  const std::string stem = "/tmp/berezin_acceptance_" + std::to_string(::getpid());
  const std::string cfg_path = stem + ".json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"command":"propagate","modes":1,"cutoff":12,"time":1.0,"slices":[8,16],)"
        << R"("symbol":"zs1 z1 + 0.1 zs1^2 z1^2","z0":[0.6],"z1":[0.6]})";
  }
  auto run_once = [&](const std::string& out_path) {
    const std::string cmd =
        std::string(BEREZIN_CLI_PATH) + " --config " + cfg_path + " >" + out_path + " 2>&1";
    const int rc = std::system(cmd.c_str());
    if (!WIFEXITED(rc) || WEXITSTATUS(rc) != 0) throw std::runtime_error("cli run failed");
    std::ifstream in(out_path);
    std::string scrubbed, line;
    while (std::getline(in, line))
      if (line.find("wall_ms") == std::string::npos) scrubbed += line + '\n';
    return scrubbed;
  };
  const std::string first = run_once(stem + ".1"), second = run_once(stem + ".2");
  const bool equal = !first.empty() && first == second;
  return {equal, equal ? "two runs byte-identical modulo wall_ms (" +
                             std::to_string(first.size()) + " bytes compared)"
                       : "runs differ after scrubbing wall_ms"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"ccr-commutators", ccr_commutators},
      {"reproducing-kernel", reproducing_kernel},
      {"identity-resolution", identity_resolution},
      {"ordering-transform", ordering_transform},
      {"positivity", positivity},
      {"harmonic-closed-form", harmonic_closed_form},
      {"sliced-convergence", sliced_convergence},
      {"constant-shift", constant_shift},
      {"bosonization", bosonization},
      {"grassmann-car", grassmann_car},
      {"slice-derivative", slice_derivative},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome outcome{false, ""};
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("%s %2d %-22s %s\n", outcome.pass ? "PASS" : "FAIL", index, name,
                outcome.detail.c_str());
  }
  if (failures > 0) std::printf("%d of %d criteria failed\n", failures, index);
  return failures == 0 ? 0 : 1;
}
