#pragma once

#include <algorithm>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "berezin/errors.hpp"

namespace berezin {

// Occupation vector over d modes. Indexes both Fock basis states and
// symbol monomials. Ordering everywhere is graded lexicographic: total
// degree first, then entrywise lexicographic.
class MultiIndex {
 public:
  explicit MultiIndex(int modes) : entries_(static_cast<std::size_t>(check_modes(modes)), 0) {}

  MultiIndex(std::initializer_list<int> entries) : entries_(entries) {
    if (entries_.empty()) throw DimensionError("multi-index needs at least one mode");
    for (int e : entries_)
      if (e < 0) throw DomainError("multi-index entries must be nonnegative");
  }

  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw DimensionError("multi-index needs at least one mode");
    for (int e : entries_)
      if (e < 0) throw DomainError("multi-index entries must be nonnegative");
  }

  static MultiIndex unit(int modes, int mode) {
    MultiIndex a(modes);
    a.check_mode(mode);
    a.entries_[static_cast<std::size_t>(mode)] = 1;
    return a;
  }

  int modes() const { return static_cast<int>(entries_.size()); }

  int operator[](int mode) const { return entries_[static_cast<std::size_t>(mode)]; }

  int degree() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

  // Copy with entry `mode` bumped by `delta`; negative results are a domain error.
  MultiIndex bumped(int mode, int delta) const {
    check_mode(mode);
    MultiIndex out(*this);
    int& e = out.entries_[static_cast<std::size_t>(mode)];
    e += delta;
    if (e < 0) throw DomainError("multi-index entry would become negative");
    return out;
  }

  // Entrywise sum/difference; difference requires *this >= other entrywise.
  MultiIndex plus(const MultiIndex& other) const {
    check_same_modes(other);
    MultiIndex out(*this);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += other.entries_[i];
    return out;
  }

  MultiIndex minus(const MultiIndex& other) const {
    check_same_modes(other);
    MultiIndex out(*this);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      out.entries_[i] -= other.entries_[i];
      if (out.entries_[i] < 0) throw DomainError("multi-index difference is negative");
    }
    return out;
  }

  bool dominates(const MultiIndex& other) const {
    check_same_modes(other);
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i] < other.entries_[i]) return false;
    return true;
  }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](int e) { return e == 0; });
  }

  const std::vector<int>& entries() const { return entries_; }

  bool operator==(const MultiIndex& other) const { return entries_ == other.entries_; }
  bool operator!=(const MultiIndex& other) const { return entries_ != other.entries_; }

  // Graded-lex order.
  bool operator<(const MultiIndex& other) const {
    check_same_modes(other);
    const int da = degree(), db = other.degree();
    if (da != db) return da < db;
    return std::lexicographical_compare(entries_.begin(), entries_.end(),
                                        other.entries_.begin(), other.entries_.end());
  }

 private:
  static int check_modes(int modes) {
    if (modes < 1) throw DimensionError("mode count must be positive");
    return modes;
  }

  void check_mode(int mode) const {
    if (mode < 0 || mode >= modes()) throw DimensionError("mode index out of range");
  }

  void check_same_modes(const MultiIndex& other) const {
    if (modes() != other.modes()) throw DimensionError("multi-index mode counts differ");
  }

  std::vector<int> entries_;
};

// n! as a double; exact for n <= 22, overflow guarded.
inline double factorial(int n) {
  if (n < 0) throw DomainError("factorial of negative integer");
  if (n > 170) throw DomainError("factorial overflows double");
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// alpha! = prod_i alpha_i!
inline double multi_factorial(const MultiIndex& alpha) {
  double f = 1.0;
  for (int i = 0; i < alpha.modes(); ++i) f *= factorial(alpha[i]);
  return f;
}

// (alpha + beta)! / alpha!  as an exact product of rising factors.
inline double rising_factorial_ratio(const MultiIndex& alpha, const MultiIndex& beta) {
  double f = 1.0;
  for (int i = 0; i < alpha.modes(); ++i)
    for (int k = 1; k <= beta[i]; ++k) f *= alpha[i] + k;
  return f;
}

// All multi-indices over `modes` modes with total degree <= max_degree,
// listed in graded-lex order.
inline std::vector<MultiIndex> enumerate_multi_indices(int modes, int max_degree) {
  if (modes < 1) throw DimensionError("mode count must be positive");
  if (max_degree < 0) throw DomainError("degree cutoff must be nonnegative");
  std::vector<MultiIndex> out;
  std::vector<int> current(static_cast<std::size_t>(modes), 0);
  // Within fixed degree, recursion over modes emits ascending lexicographic order.
  auto emit = [&](auto&& self, int mode, int remaining) -> void {
    if (mode == modes - 1) {
      current[static_cast<std::size_t>(mode)] = remaining;
      out.emplace_back(current);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      current[static_cast<std::size_t>(mode)] = e;
      self(self, mode + 1, remaining - e);
    }
  };
  for (int deg = 0; deg <= max_degree; ++deg) emit(emit, 0, deg);
  return out;
}

}  // namespace berezin
