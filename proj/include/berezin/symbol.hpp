#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

#include "berezin/multi_index.hpp"

namespace berezin {

using Complex = std::complex<double>;

// Exponent pair of one monomial  c * z*^zs * z^z.
struct TermKey {
  MultiIndex zstar;
  MultiIndex z;

  int degree() const { return zstar.degree() + z.degree(); }

  bool operator==(const TermKey& other) const {
    return zstar == other.zstar && z == other.z;
  }

  // Graded-lex on the pair: total degree, then z* exponent, then z exponent.
  bool operator<(const TermKey& other) const {
    const int da = degree(), db = other.degree();
    if (da != db) return da < db;
    if (zstar != other.zstar) return zstar < other.zstar;
    return z < other.z;
  }
};

enum class Var { z, zstar };

// Finite complex-coefficient polynomial in (z*, z) over d modes, the symbol
// of a classical observable on phase space. Canonical form: no zero
// coefficients, terms held in graded-lex order.
class PolySymbol {
 public:
  explicit PolySymbol(int modes) : modes_(modes) {
    if (modes < 1) throw DimensionError("symbol needs at least one mode");
  }

  static PolySymbol constant(int modes, Complex c) {
    PolySymbol p(modes);
    p.add_term(MultiIndex(modes), MultiIndex(modes), c);
    return p;
  }

  static PolySymbol monomial(const MultiIndex& zstar, const MultiIndex& z, Complex c) {
    if (zstar.modes() != z.modes()) throw DimensionError("exponent mode counts differ");
    PolySymbol p(zstar.modes());
    p.add_term(zstar, z, c);
    return p;
  }

  int modes() const { return modes_; }

  const std::map<TermKey, Complex>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int deg = 0;
    for (const auto& [key, c] : terms_) deg = std::max(deg, key.degree());
    return deg;
  }

  Complex coefficient(const MultiIndex& zstar, const MultiIndex& z) const {
    auto it = terms_.find(TermKey{zstar, z});
    return it == terms_.end() ? Complex(0.0) : it->second;
  }

  Complex constant_term() const {
    return coefficient(MultiIndex(modes_), MultiIndex(modes_));
  }

  // Merge one term, keeping canonical form (exact zeros dropped).
  void add_term(const MultiIndex& zstar, const MultiIndex& z, Complex c) {
    if (zstar.modes() != modes_ || z.modes() != modes_)
      throw DimensionError("term mode count does not match symbol");
    if (c == Complex(0.0)) return;
    TermKey key{zstar, z};
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex(0.0)) terms_.erase(it);
    }
  }

  PolySymbol& operator+=(const PolySymbol& other) {
    check_same_modes(other);
    for (const auto& [key, c] : other.terms_) add_term(key.zstar, key.z, c);
    return *this;
  }

  PolySymbol operator+(const PolySymbol& other) const {
    PolySymbol out(*this);
    out += other;
    return out;
  }

  PolySymbol operator-() const {
    PolySymbol out(modes_);
    for (const auto& [key, c] : terms_) out.terms_.emplace(key, -c);
    return out;
  }

  PolySymbol operator-(const PolySymbol& other) const { return *this + (-other); }

  PolySymbol operator*(const PolySymbol& other) const {
    check_same_modes(other);
    PolySymbol out(modes_);
    for (const auto& [ka, ca] : terms_)
      for (const auto& [kb, cb] : other.terms_)
        out.add_term(ka.zstar.plus(kb.zstar), ka.z.plus(kb.z), ca * cb);
    return out;
  }

  PolySymbol operator*(Complex scale) const {
    PolySymbol out(modes_);
    if (scale == Complex(0.0)) return out;
    for (const auto& [key, c] : terms_) out.terms_.emplace(key, c * scale);
    return out;
  }

  // Swaps (z*, z) exponents and conjugates coefficients. A symbol with
  // conjugate(P) == P is a real classical observable.
  PolySymbol conjugate() const {
    PolySymbol out(modes_);
    for (const auto& [key, c] : terms_) out.terms_.emplace(TermKey{key.z, key.zstar}, std::conj(c));
    return out;
  }

  bool is_real(double tol = 1e-12) const {
    const PolySymbol diff = *this - conjugate();
    double scale = 1.0;
    for (const auto& [key, c] : terms_) scale = std::max(scale, std::abs(c));
    for (const auto& [key, c] : diff.terms_)
      if (std::abs(c) > tol * scale) return false;
    return true;
  }

  // Formal partial derivative in z_mode or z*_mode.
  PolySymbol derivative(int mode, Var wrt) const {
    if (mode < 0 || mode >= modes_) throw DimensionError("mode index out of range");
    PolySymbol out(modes_);
    for (const auto& [key, c] : terms_) {
      const MultiIndex& exp = (wrt == Var::z) ? key.z : key.zstar;
      const int e = exp[mode];
      if (e == 0) continue;
      if (wrt == Var::z)
        out.add_term(key.zstar, key.z.bumped(mode, -1), c * double(e));
      else
        out.add_term(key.zstar.bumped(mode, -1), key.z, c * double(e));
    }
    return out;
  }

  // Keep only terms supported on the first `n` modes and re-index the
  // result onto n modes: the symbol composed with the flag projection.
  PolySymbol restricted_to_modes(int n) const {
    if (n < 1 || n > modes_) throw DimensionError("flag mode count out of range");
    PolySymbol out(n);
    for (const auto& [key, c] : terms_) {
      bool supported = true;
      for (int i = n; i < modes_ && supported; ++i)
        supported = (key.zstar[i] == 0 && key.z[i] == 0);
      if (!supported) continue;
      std::vector<int> bs(key.zstar.entries().begin(), key.zstar.entries().begin() + n);
      std::vector<int> as(key.z.entries().begin(), key.z.entries().begin() + n);
      out.add_term(MultiIndex(std::move(bs)), MultiIndex(std::move(as)), c);
    }
    return out;
  }

  // Evaluate with independent z and z* arguments; the diagonal (classical)
  // value uses zstar = conj(z).
  Complex evaluate(std::span<const Complex> z, std::span<const Complex> zstar) const {
    if (static_cast<int>(z.size()) != modes_ || static_cast<int>(zstar.size()) != modes_)
      throw DimensionError("evaluation point length does not match symbol modes");
    Complex total(0.0);
    for (const auto& [key, c] : terms_) {
      Complex value = c;
      for (int i = 0; i < modes_; ++i) {
        for (int k = 0; k < key.zstar[i]; ++k) value *= zstar[static_cast<std::size_t>(i)];
        for (int k = 0; k < key.z[i]; ++k) value *= z[static_cast<std::size_t>(i)];
      }
      total += value;
    }
    return total;
  }

 private:
  void check_same_modes(const PolySymbol& other) const {
    if (modes_ != other.modes_) throw DimensionError("symbol mode counts differ");
  }

  int modes_;
  std::map<TermKey, Complex> terms_;
};

inline PolySymbol operator*(Complex scale, const PolySymbol& p) { return p * scale; }

// Contraction Laplacian  sum_i d/dz*_i d/dz_i.
inline PolySymbol laplacian(const PolySymbol& p) {
  PolySymbol out(p.modes());
  for (const auto& [key, c] : p.terms()) {
    for (int i = 0; i < p.modes(); ++i) {
      const int b = key.zstar[i], a = key.z[i];
      if (b == 0 || a == 0) continue;
      out.add_term(key.zstar.bumped(i, -1), key.z.bumped(i, -1), c * double(b) * double(a));
    }
  }
  return out;
}

// exp(s * Laplacian) applied to a polynomial: the terminating sum
// sum_k (s^k / k!) Lap^k P. Connects normal and anti-normal symbols.
inline PolySymbol heat_transform(const PolySymbol& p, double s) {
  PolySymbol result = p;
  PolySymbol term = p;
  for (int k = 1; !term.is_zero(); ++k) {
    term = laplacian(term) * Complex(s / double(k));
    result += term;
  }
  return result;
}

// Moment of the normalized Gaussian measure (per mode pi^-1 e^{-|zeta|^2}):
// integral of conj(zeta)^alpha zeta^beta, which is delta_{alpha,beta} alpha!.
inline double gaussian_moment(const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.modes() != beta.modes()) throw DimensionError("moment index lengths differ");
  if (alpha != beta) return 0.0;
  return multi_factorial(alpha);
}

}  // namespace berezin
