#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "berezin/quantization.hpp"

namespace berezin {

inline MultiIndex indicator_of(std::uint32_t mask, int modes) {
  std::vector<int> bits(static_cast<std::size_t>(modes));
  for (int i = 0; i < modes; ++i) bits[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
  return MultiIndex(std::move(bits));
}

// Occupation subsets of d fermionic modes, ordered like their 0/1 indicator
// multi-indices in the boson basis (graded-lex).
class FermionBasis {
 public:
  static std::shared_ptr<const FermionBasis> make(int modes) {
    if (modes < 1 || modes > 16) throw DimensionError("fermion mode count out of range");
    return std::shared_ptr<const FermionBasis>(new FermionBasis(modes));
  }

  int modes() const { return modes_; }
  int size() const { return static_cast<int>(masks_.size()); }
  std::uint32_t mask(int pos) const { return masks_[static_cast<std::size_t>(pos)]; }
  const std::vector<std::uint32_t>& masks() const { return masks_; }
  int position(std::uint32_t mask) const { return pos_of_mask_[mask]; }
  MultiIndex indicator(int pos) const { return indicator_of(mask(pos), modes_); }

 private:
  explicit FermionBasis(int modes) : modes_(modes) {
    const std::uint32_t count = 1u << modes;
    masks_.resize(count);
    for (std::uint32_t m = 0; m < count; ++m) masks_[m] = m;
    std::sort(masks_.begin(), masks_.end(), [modes](std::uint32_t a, std::uint32_t b) {
      return indicator_of(a, modes) < indicator_of(b, modes);
    });
    pos_of_mask_.resize(count);
    for (std::uint32_t p = 0; p < count; ++p) pos_of_mask_[masks_[p]] = static_cast<int>(p);
  }

  int modes_;
  std::vector<std::uint32_t> masks_;
  std::vector<int> pos_of_mask_;
};

using FermionBasisPtr = std::shared_ptr<const FermionBasis>;

class FermionVector {
 public:
  explicit FermionVector(FermionBasisPtr basis)
      : basis_(std::move(basis)), coeffs_(Eigen::VectorXcd::Zero(basis_->size())) {}

  FermionVector(FermionBasisPtr basis, Eigen::VectorXcd coeffs)
      : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != basis_->size())
      throw DimensionError("coefficient count does not match fermion basis");
  }

  const FermionBasisPtr& basis() const { return basis_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }
  double norm() const { return coeffs_.norm(); }

  // Adds c times the wedge of the listed modes; unsorted index tuples pick
  // up the parity of the sorting permutation, repeats vanish.
  void add_antisymmetric(std::span<const int> modes_list, Complex c) {
    std::uint32_t mask = 0;
    int sign = 1;
    for (std::size_t k = 0; k < modes_list.size(); ++k) {
      const int i = modes_list[k];
      if (i < 0 || i >= basis_->modes()) throw DimensionError("fermion mode index out of range");
      const std::uint32_t bit = 1u << i;
      if (mask & bit) return;  // repeated index: antisymmetry kills the term
      // exchanges needed to move past already-placed larger indices
      const std::uint32_t above = mask >> (i + 1);
      if (std::popcount(above) % 2 == 1) sign = -sign;
      mask |= bit;
    }
    coeffs_[basis_->position(mask)] += double(sign) * c;
  }

 private:
  FermionBasisPtr basis_;
  Eigen::VectorXcd coeffs_;
};

inline Complex inner_product(const FermionVector& a, const FermionVector& b) {
  if (a.basis()->modes() != b.basis()->modes())
    throw DimensionError("fermion vectors have different mode counts");
  return a.coeffs().dot(b.coeffs());
}

// Polynomial in anticommuting generators, canonical monomials are
// ascending-index products keyed by their mode mask.
class GrassmannPoly {
 public:
  explicit GrassmannPoly(int modes) : modes_(modes) {
    if (modes < 1 || modes > 16) throw DimensionError("Grassmann mode count out of range");
  }

  static GrassmannPoly monomial(int modes, std::uint32_t mask, Complex c = 1.0) {
    GrassmannPoly p(modes);
    p.add_term(mask, c);
    return p;
  }

  static GrassmannPoly generator(int modes, int mode) {
    if (mode < 0 || mode >= modes) throw DimensionError("generator index out of range");
    return monomial(modes, 1u << mode);
  }

  int modes() const { return modes_; }
  const std::map<std::uint32_t, Complex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Complex coefficient(std::uint32_t mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? Complex(0.0) : it->second;
  }

  void add_term(std::uint32_t mask, Complex c) {
    if (mask >> modes_) throw DimensionError("monomial uses modes outside the algebra");
    if (c == Complex(0.0)) return;
    auto [it, inserted] = terms_.try_emplace(mask, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex(0.0)) terms_.erase(it);
    }
  }

  GrassmannPoly operator+(const GrassmannPoly& other) const {
    check(other);
    GrassmannPoly out(*this);
    for (const auto& [m, c] : other.terms_) out.add_term(m, c);
    return out;
  }

  GrassmannPoly operator-(const GrassmannPoly& other) const { return *this + (other * Complex(-1.0)); }

  GrassmannPoly operator*(Complex scale) const {
    GrassmannPoly out(modes_);
    if (scale == Complex(0.0)) return out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * scale);
    return out;
  }

  // Wedge product; overlapping monomials vanish, the sign counts the
  // exchanges that re-sort the concatenation.
  GrassmannPoly operator*(const GrassmannPoly& other) const {
    check(other);
    GrassmannPoly out(modes_);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : other.terms_) {
        if (ma & mb) continue;
        int exchanges = 0;
        for (int t = 0; t < modes_; ++t)
          if (mb & (1u << t)) exchanges += std::popcount(ma >> (t + 1));
        const double sign = (exchanges % 2 == 0) ? 1.0 : -1.0;
        out.add_term(ma | mb, sign * ca * cb);
      }
    return out;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [mask, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  void check(const GrassmannPoly& other) const {
    if (modes_ != other.modes_) throw DimensionError("Grassmann mode counts differ");
  }

  int modes_;
  std::map<std::uint32_t, Complex> terms_;
};

inline GrassmannPoly operator*(Complex scale, const GrassmannPoly& p) { return p * scale; }

enum class DerivativeSide { left, right };

// Left derivative walks the generator in from the left, picking up one sign
// per smaller occupied mode; the right derivative counts the larger ones.
inline GrassmannPoly grassmann_derivative(const GrassmannPoly& p, int mode, DerivativeSide side) {
  if (mode < 0 || mode >= p.modes()) throw DimensionError("derivative mode out of range");
  const std::uint32_t bit = 1u << mode;
  GrassmannPoly out(p.modes());
  for (const auto& [mask, c] : p.terms()) {
    if (!(mask & bit)) continue;
    const std::uint32_t others = mask & ~bit;
    const int below = std::popcount(others & (bit - 1));
    const int count = (side == DerivativeSide::left) ? below : std::popcount(others) - below;
    out.add_term(others, (count % 2 == 0) ? c : -c);
  }
  return out;
}

// Embedding of the fermion space onto the hard-core (0/1 occupation) slice
// of a boson Fock basis with the same mode count.
struct HardCoreSubspace {
  FockBasisPtr boson;
  FermionBasisPtr fermion;
  std::vector<int> boson_positions;  // per fermion slot

  static HardCoreSubspace make(const FockBasisPtr& boson_basis) {
    if (boson_basis->cutoff() < boson_basis->modes())
      throw DimensionError("boson cutoff too small to hold every occupation pattern");
    HardCoreSubspace hc;
    hc.boson = boson_basis;
    hc.fermion = FermionBasis::make(boson_basis->modes());
    hc.boson_positions.reserve(static_cast<std::size_t>(hc.fermion->size()));
    for (int p = 0; p < hc.fermion->size(); ++p)
      hc.boson_positions.push_back(boson_basis->position(hc.fermion->indicator(p)));
    return hc;
  }
};

// Isometry: occupation subsets map to their indicator boson states.
inline FockVector bosonize(const FermionVector& v, const HardCoreSubspace& hc) {
  if (v.basis()->modes() != hc.fermion->modes())
    throw DimensionError("fermion vector does not match the subspace");
  FockVector out(hc.boson);
  for (int p = 0; p < hc.fermion->size(); ++p)
    out.coeffs()[hc.boson_positions[static_cast<std::size_t>(p)]] = v.coeffs()[p];
  return out;
}

inline FermionVector debosonize(const FockVector& v, const HardCoreSubspace& hc) {
  if (v.basis()->modes() != hc.boson->modes() || v.basis()->cutoff() != hc.boson->cutoff())
    throw DimensionError("boson vector does not match the subspace");
  std::vector<bool> hard_core(static_cast<std::size_t>(hc.boson->size()), false);
  for (int p : hc.boson_positions) hard_core[static_cast<std::size_t>(p)] = true;
  for (int p = 0; p < hc.boson->size(); ++p) {
    if (hard_core[static_cast<std::size_t>(p)] || v.coeffs()[p] == Complex(0.0)) continue;
    std::string msg = "support outside the hard-core subspace at (";
    const MultiIndex& alpha = hc.boson->index(p);
    for (int i = 0; i < alpha.modes(); ++i)
      msg += (i ? "," : "") + std::to_string(alpha[i]);
    throw DomainError(msg + ")");
  }
  FermionVector out(hc.fermion);
  for (int p = 0; p < hc.fermion->size(); ++p)
    out.coeffs()[p] = v.coeffs()[hc.boson_positions[static_cast<std::size_t>(p)]];
  return out;
}

struct FermionOperator {
  FermionBasisPtr basis;
  Eigen::MatrixXcd mat;
};

// Compression of a boson-space operator to the fermion space through the
// bosonization isometry W: the matrix W^H B W.
inline FermionOperator conjugate_operator(const OperatorMatrix& op, const HardCoreSubspace& hc) {
  if (op.basis()->modes() != hc.boson->modes() || op.basis()->cutoff() != hc.boson->cutoff())
    throw DimensionError("operator does not match the subspace");
  const int n = hc.fermion->size();
  Eigen::MatrixXcd f(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      f(r, c) = op.mat()(hc.boson_positions[static_cast<std::size_t>(r)],
                         hc.boson_positions[static_cast<std::size_t>(c)]);
  return {hc.fermion, std::move(f)};
}

struct SuperCcrResidual {
  double algebraic;   // generators and left derivatives on the Grassmann algebra
  double conjugated;  // boson ladders squeezed onto the hard-core slice, no sign string
};

// The Grassmann realization satisfies the anticommutation relations exactly;
// the boson ladders conjugated onto the hard-core subspace do not (they lack
// the sign string), and the returned figure measures by how much.
inline SuperCcrResidual super_ccr_residual(int modes) {
  double algebraic = 0.0;
  const std::uint32_t count = 1u << modes;
  auto anti = [](const GrassmannPoly& a, const GrassmannPoly& b) { return a * b + b * a; };
  for (int i = 0; i < modes; ++i)
    for (int j = 0; j < modes; ++j) {
      const GrassmannPoly xi = GrassmannPoly::generator(modes, i);
      const GrassmannPoly xj = GrassmannPoly::generator(modes, j);
      for (std::uint32_t m = 0; m < count; ++m) {
        const GrassmannPoly p = GrassmannPoly::monomial(modes, m);
        auto d = [&](const GrassmannPoly& q, int mode) {
          return grassmann_derivative(q, mode, DerivativeSide::left);
        };
        // {d_i, xi_j} = delta_ij, {xi_i, xi_j} = 0, {d_i, d_j} = 0
        GrassmannPoly mixed = d(xj * p, i) + xj * d(p, i);
        if (i == j) mixed = mixed - p;
        algebraic = std::max(algebraic, mixed.max_abs_coefficient());
        algebraic = std::max(algebraic, (anti(xi, xj) * p).max_abs_coefficient());
        algebraic = std::max(algebraic, (d(d(p, j), i) + d(d(p, i), j)).max_abs_coefficient());
      }
    }

  const FockBasisPtr boson = FockBasis::make(modes, modes);
  const HardCoreSubspace hc = HardCoreSubspace::make(boson);
  std::vector<Eigen::MatrixXcd> lower, raise;
  for (int i = 0; i < modes; ++i) {
    const MultiIndex unit = MultiIndex::unit(modes, i), zero(modes);
    lower.push_back(
        conjugate_operator(normal_quantize(PolySymbol::monomial(zero, unit, 1.0), boson), hc).mat);
    raise.push_back(
        conjugate_operator(normal_quantize(PolySymbol::monomial(unit, zero, 1.0), boson), hc).mat);
  }
  double conjugated = 0.0;
  const int n = hc.fermion->size();
  for (int i = 0; i < modes; ++i)
    for (int j = 0; j < modes; ++j) {
      Eigen::MatrixXcd acc = lower[i] * raise[j] + raise[j] * lower[i];
      if (i == j) acc -= Eigen::MatrixXcd::Identity(n, n);
      conjugated = std::max(conjugated, acc.cwiseAbs().maxCoeff());
    }
  return {algebraic, conjugated};
}

}  // namespace berezin
