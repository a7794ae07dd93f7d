#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "berezin/quantization.hpp"

namespace berezin {

enum class SliceBackend { automatic, series, quadrature };

struct SliceConfig {
  PolySymbol symbol;
  double time = 1.0;
  int slices = 16;
  int cutoff = 16;
  SliceBackend backend = SliceBackend::automatic;
  int series_degree = 240;     // degree cap for the sliced exponential symbol
  int quad_points = 0;         // per real axis; 0 picks a cutoff-based default
  double cross_check_tol = 1e-8;
};

// What the slice builder actually did: which backend ran, how trustworthy the
// truncated exponential series is, and the cross-check outcome if one ran.
struct SliceDiagnostics {
  SliceBackend used = SliceBackend::series;
  double remainder_bound = 0.0;  // sup-norm tail of the series on the support
  int terms = 0;                 // exponential-series terms retained
  bool cross_checked = false;
  double cross_mismatch = 0.0;
};

// Restriction of the symbol onto the leading modes (the flag projection).
inline PolySymbol project_modes(const PolySymbol& symbol, int modes) {
  return symbol.restricted_to_modes(modes);
}

namespace detail {

inline PolySymbol truncate_degree(const PolySymbol& p, int max_degree) {
  PolySymbol out(p.modes());
  for (const auto& [key, c] : p.terms())
    if (key.degree() <= max_degree) out.add_term(key.zstar, key.z, c);
  return out;
}

// Degree-truncated exp(factor * theta). Because every term of theta has
// positive degree, discarded pieces can never flow back below the cap, so
// this equals the degree truncation of the full exponential series.
inline PolySymbol exp_symbol(const PolySymbol& theta, Complex factor, int degree_cap) {
  PolySymbol result = PolySymbol::constant(theta.modes(), 1.0);
  PolySymbol term = result;
  for (int k = 1; k <= degree_cap + 1; ++k) {
    term = truncate_degree(term * theta * (factor / double(k)), degree_cap);
    if (term.is_zero()) break;
    result += term;
  }
  return result;
}

// Radius r beyond which the top basis state's density r^M e^{-r}/M! has
// dropped below 1e-20: everything the truncated basis can see lives inside.
inline double effective_support_radius(int cutoff) {
  const double m = cutoff;
  const double target = std::log(1e-20) + std::lgamma(m + 1.0);
  const auto excess = [&](double r) { return m * std::log(r) - r - target; };
  double lo = m + 1.0;
  double hi = 2.0 * lo;
  while (excess(hi) > 0.0) hi *= 2.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

// Triangle-inequality bound for |theta| when every |zeta_i|^2 <= radius.
inline double symbol_sup_bound(const PolySymbol& theta, double radius) {
  double bound = 0.0;
  for (const auto& [key, c] : theta.terms())
    bound += std::abs(c) * std::pow(radius, 0.5 * key.degree());
  return bound;
}

// Tail of the exponential series after `terms` terms, valid on the support:
// sum_{k>K} x^k/k! <= 2 x^{K+1}/(K+1)! once K+2 >= 2x. Above that regime the
// series is not certifiable and the bound saturates.
inline double series_tail_bound(double x, int terms) {
  if (x <= 0.0) return 0.0;
  if (terms + 2 < 2.0 * x) return 1e300;
  return std::exp(std::log(2.0) + (terms + 1) * std::log(x) -
                  std::lgamma(terms + 2.0));
}

// Smallest term count whose tail bound clears tol, or -1 within the cap.
inline int certified_terms(double x, double tol, int cap) {
  for (int k = 0; k <= cap; ++k)
    if (series_tail_bound(x, k) <= tol) return k;
  return -1;
}

inline Eigen::MatrixXcd quadrature_slice(const PolySymbol& theta, double tau,
                                         const FockBasisPtr& basis, int points) {
  const int n = basis->size();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd v(n);
  for_each_gaussian_node(
      basis->modes(), points, [&](const std::vector<Complex>& zeta, double wt) {
        std::vector<Complex> zbar(zeta.size());
        for (std::size_t i = 0; i < zeta.size(); ++i) zbar[i] = std::conj(zeta[i]);
        const Complex phase = std::exp(Complex(0.0, -tau) * theta.evaluate(zeta, zbar));
        for (int p = 0; p < n; ++p) {
          const MultiIndex& alpha = basis->index(p);
          Complex mono(1.0);
          for (int i = 0; i < basis->modes(); ++i)
            for (int k = 0; k < alpha[i]; ++k) mono *= zeta[static_cast<std::size_t>(i)];
          v[p] = mono / std::sqrt(multi_factorial(alpha));
        }
        s.noalias() += (wt * phase) * v * v.adjoint();
      });
  return s;
}

}  // namespace detail

// One time slice: the coherent average of exp(-i tau Theta). The constant
// part of the symbol is peeled off analytically so that adding a constant to
// Theta changes the slice by exactly a phase.
//
// The truncated exponential series carries the a-priori remainder bound
// 2 (tau*B)^{K+1}/(K+1)! with B a bound for |Theta| on the quadrature
// support; the series counts as certified when that bound clears
// cross_check_tol within the degree cap. The automatic backend runs the
// series when certified and falls back to quadrature otherwise (for strongly
// anharmonic symbols at large cutoff the quantized series diverges entrywise,
// so no degree cap can rescue it). An explicit quadrature run is cross-checked
// against the series whenever the series is certified; an uncertified series
// is no reference and the check is skipped, with the bound reported in the
// diagnostics as the warning channel.
inline OperatorMatrix slice_operator(const SliceConfig& cfg, double tau,
                                     SliceDiagnostics* diag = nullptr) {
  if (cfg.cutoff < 0) throw ConfigError("cutoff must be nonnegative");
  if (cfg.series_degree < 0) throw ConfigError("series degree must be nonnegative");
  if (!(tau >= 0.0)) throw ConfigError("slice width must be nonnegative");
  if (!cfg.symbol.is_real()) throw DomainError("time slices need a real symbol");
  const FockBasisPtr basis = FockBasis::make(cfg.symbol.modes(), cfg.cutoff);

  const Complex c0 = cfg.symbol.constant_term();
  const PolySymbol theta = cfg.symbol - PolySymbol::constant(cfg.symbol.modes(), c0);
  const Complex phase = std::exp(Complex(0.0, -tau) * c0);

  const int term_degree = std::max(theta.degree(), 1);
  const double radius = detail::effective_support_radius(cfg.cutoff);
  const double x = tau * detail::symbol_sup_bound(theta, radius);
  const int term_cap = cfg.series_degree / term_degree;
  const int certified = detail::certified_terms(x, cfg.cross_check_tol, term_cap);

  SliceDiagnostics local;
  SliceDiagnostics& d = diag ? *diag : local;
  d = SliceDiagnostics{};

  const auto build_series = [&](int terms) {
    const PolySymbol series =
        detail::exp_symbol(theta, Complex(0.0, -tau), terms * term_degree);
    return antinormal_quantize(series, basis);
  };

  SliceBackend backend = cfg.backend;
  if (backend == SliceBackend::automatic)
    backend = certified >= 0 ? SliceBackend::series : SliceBackend::quadrature;

  if (backend == SliceBackend::series) {
    d.used = SliceBackend::series;
    d.terms = certified >= 0 ? certified : term_cap;
    d.remainder_bound = detail::series_tail_bound(x, d.terms);
    OperatorMatrix op = build_series(d.terms);
    op.mat() *= phase;
    return op;
  }

  const int points = cfg.quad_points > 0 ? cfg.quad_points : 2 * cfg.cutoff + 24;
  Eigen::MatrixXcd quad = detail::quadrature_slice(theta, tau, basis, points);
  d.used = SliceBackend::quadrature;
  d.terms = certified >= 0 ? certified : term_cap;
  d.remainder_bound = detail::series_tail_bound(x, d.terms);
  if (cfg.backend == SliceBackend::quadrature && certified >= 0) {
    const OperatorMatrix reference = build_series(certified);
    d.cross_checked = true;
    d.cross_mismatch = (quad - reference.mat()).cwiseAbs().maxCoeff();
    if (d.cross_mismatch > std::max(cfg.cross_check_tol, d.remainder_bound))
      throw CrossCheckError("slice backends disagree by " +
                            std::to_string(d.cross_mismatch));
  }
  return OperatorMatrix(basis, phase * quad);
}

// Reference evolution exp(-i t H), H the coherent quantization of the
// symbol, through the spectral decomposition of the Hermitian matrix.
inline Complex exact_amplitude(const PolySymbol& symbol, double time,
                               std::span<const Complex> z0, std::span<const Complex> z1,
                               int cutoff) {
  if (!symbol.is_real()) throw DomainError("evolution needs a real symbol");
  const FockBasisPtr basis = FockBasis::make(symbol.modes(), cutoff);
  const OperatorMatrix h = antinormal_quantize(symbol, basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.mat());
  if (es.info() != Eigen::Success) throw DomainError("eigensolve failed");
  Eigen::VectorXcd evolved = Eigen::VectorXcd::Zero(basis->size());
  const Eigen::VectorXcd start = coherent_state(basis, z0).state.coeffs();
  for (int k = 0; k < basis->size(); ++k) {
    const Complex phase = std::exp(Complex(0.0, -time * es.eigenvalues()[k]));
    evolved += phase * es.eigenvectors().col(k) *
               (es.eigenvectors().col(k).dot(start));
  }
  return coherent_state(basis, z1).state.coeffs().dot(evolved);
}

inline Complex exact_amplitude(const SliceConfig& cfg, std::span<const Complex> z0,
                               std::span<const Complex> z1) {
  return exact_amplitude(cfg.symbol, cfg.time, z0, z1, cfg.cutoff);
}

struct AmplitudeReport {
  std::vector<Complex> z0, z1;
  int slices = 0;
  int modes = 0;
  int cutoff = 0;
  Complex amplitude;
  Complex exact;
  double abs_error = 0.0;
  double truncation_loss = 0.0;   // coherent mass beyond the cutoff, both ends
  double slice_remainder = 0.0;   // series tail bound from the slice builder
  double wall_ms = 0.0;
};

// Repeated application of the slice operator to a coherent state, paired
// against the spectral reference.
inline AmplitudeReport chernoff_amplitude(const SliceConfig& cfg, std::span<const Complex> z0,
                                          std::span<const Complex> z1) {
  if (cfg.slices < 1) throw ConfigError("slice count must be positive");
  const auto start_time = std::chrono::steady_clock::now();
  SliceDiagnostics diag;
  const OperatorMatrix slice = slice_operator(cfg, cfg.time / cfg.slices, &diag);
  const FockBasisPtr& basis = slice.basis();
  const CoherentState cs0 = coherent_state(basis, z0);
  const CoherentState cs1 = coherent_state(basis, z1);

  Eigen::VectorXcd v = cs0.state.coeffs();
  for (int n = 0; n < cfg.slices; ++n) v = slice.mat() * v;
  const Complex amplitude = cs1.state.coeffs().dot(v);

  AmplitudeReport report;
  report.z0.assign(z0.begin(), z0.end());
  report.z1.assign(z1.begin(), z1.end());
  report.slices = cfg.slices;
  report.modes = cfg.symbol.modes();
  report.cutoff = cfg.cutoff;
  report.amplitude = amplitude;
  report.exact = exact_amplitude(cfg.symbol, cfg.time, z0, z1, cfg.cutoff);
  report.abs_error = std::abs(amplitude - report.exact);
  report.truncation_loss = cs0.truncation_mass + cs1.truncation_mass;
  report.slice_remainder = diag.remainder_bound;
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start_time)
                       .count();
  return report;
}

// Grid over slice counts and flag-mode projections, row order (N, n). The
// endpoint vectors are projected along with the symbol.
inline std::vector<AmplitudeReport> convergence_sweep(const SliceConfig& base,
                                                      std::vector<int> slice_counts,
                                                      std::vector<int> flag_modes,
                                                      std::span<const Complex> z0,
                                                      std::span<const Complex> z1) {
  if (slice_counts.empty()) slice_counts.push_back(base.slices);
  if (flag_modes.empty()) flag_modes.push_back(base.symbol.modes());
  std::sort(slice_counts.begin(), slice_counts.end());
  std::sort(flag_modes.begin(), flag_modes.end());
  const int d = base.symbol.modes();
  if (static_cast<int>(z0.size()) != d || static_cast<int>(z1.size()) != d)
    throw DimensionError("endpoint vectors must match the symbol's mode count");
  std::vector<AmplitudeReport> rows;
  for (int n : slice_counts)
    for (int m : flag_modes) {
      SliceConfig cfg = base;
      cfg.slices = n;
      cfg.symbol = project_modes(base.symbol, m);
      rows.push_back(chernoff_amplitude(cfg, z0.subspan(0, static_cast<std::size_t>(m)),
                                        z1.subspan(0, static_cast<std::size_t>(m))));
    }
  return rows;
}

// Monotone-trend summary of one sweep column (fixed mode projection): is
// abs_error strictly decreasing in N, and what are the per-doubling ratios.
struct TrendSummary {
  int modes = 0;
  bool error_decreasing = true;
  double min_log2_ratio = 0.0;
  double max_log2_ratio = 0.0;
};

inline std::vector<TrendSummary> summarize_trends(const std::vector<AmplitudeReport>& rows) {
  std::vector<int> mode_counts;
  for (const auto& r : rows)
    if (std::find(mode_counts.begin(), mode_counts.end(), r.modes) == mode_counts.end())
      mode_counts.push_back(r.modes);
  std::sort(mode_counts.begin(), mode_counts.end());

  std::vector<TrendSummary> out;
  for (int m : mode_counts) {
    std::vector<const AmplitudeReport*> column;
    for (const auto& r : rows)
      if (r.modes == m) column.push_back(&r);
    std::sort(column.begin(), column.end(),
              [](const AmplitudeReport* a, const AmplitudeReport* b) {
                return a->slices < b->slices;
              });
    TrendSummary s;
    s.modes = m;
    bool first = true;
    for (std::size_t i = 1; i < column.size(); ++i) {
      s.error_decreasing =
          s.error_decreasing && column[i]->abs_error < column[i - 1]->abs_error;
      if (column[i]->abs_error > 0.0) {
        const double ratio =
            std::log2(column[i - 1]->abs_error / column[i]->abs_error);
        s.min_log2_ratio = first ? ratio : std::min(s.min_log2_ratio, ratio);
        s.max_log2_ratio = first ? ratio : std::max(s.max_log2_ratio, ratio);
        first = false;
      }
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace berezin
