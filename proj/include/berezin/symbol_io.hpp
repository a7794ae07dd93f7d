#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "berezin/symbol.hpp"

namespace berezin {

// Text form of polynomial symbols:
//   expression:  term (('+'|'-') term)*
//   term:        coefficient ('*')? factor*   (coefficient optional when
//                                              factors are present)
//   factor:      ('zs'|'z') modeIndex ('^' power)?
//   coefficient: signed decimal, or '(' re ',' im ')'
// 'zs' is the starred variable; mode indices are 1-based. Reported error
// positions are 1-based character offsets.

namespace detail {

class SymbolParser {
 public:
  SymbolParser(std::string_view text, int modes) : text_(text), modes_(modes) {}

  PolySymbol parse() {
    PolySymbol out(modes_);
    skip_ws();
    if (at_end()) fail("empty symbol", pos_);
    double sign = 1.0;
    if (peek() == '-' && !starts_number(pos_)) {
      ++pos_;
      sign = -1.0;
    }
    parse_term(out, sign);
    for (skip_ws(); !at_end(); skip_ws()) {
      const char c = peek();
      if (c != '+' && c != '-') fail("expected '+' or '-'", pos_);
      ++pos_;
      parse_term(out, c == '-' ? -1.0 : 1.0);
    }
    return out;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw ParseError(what, at + 1);
  }

  static bool digit(char c) { return c >= '0' && c <= '9'; }

  // does a decimal number (possibly signed) start here?
  bool starts_number(std::size_t at) const {
    if (at < text_.size() && (text_[at] == '+' || text_[at] == '-')) ++at;
    return at < text_.size() && (digit(text_[at]) || text_[at] == '.');
  }

  double parse_decimal() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    const char* start = begin;
    if (begin != end && *begin == '+') ++begin;  // from_chars rejects '+'
    const auto [next, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || next == begin) fail("expected a number", pos_);
    pos_ += static_cast<std::size_t>(next - start);
    return value;
  }

  int parse_int(const std::string& what) {
    if (at_end() || !digit(peek())) fail(what, pos_);
    int value = 0;
    const char* begin = text_.data() + pos_;
    const auto [next, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
    if (ec != std::errc()) fail(what, pos_);
    pos_ += static_cast<std::size_t>(next - begin);
    return value;
  }

  Complex parse_coefficient() {
    if (peek() == '(') {
      ++pos_;
      skip_ws();
      const double re = parse_decimal();
      skip_ws();
      if (at_end() || peek() != ',') fail("expected ',' in a complex coefficient", pos_);
      ++pos_;
      skip_ws();
      const double im = parse_decimal();
      skip_ws();
      if (at_end() || peek() != ')') fail("expected ')' after a complex coefficient", pos_);
      ++pos_;
      return Complex(re, im);
    }
    return Complex(parse_decimal(), 0.0);
  }

  // factor: ('zs'|'z') modeIndex ('^' power)? — cursor sits on 'z'
  void parse_factor(std::vector<int>& zstar, std::vector<int>& z) {
    ++pos_;
    const bool starred = !at_end() && peek() == 's';
    if (starred) ++pos_;
    const std::size_t index_at = pos_;
    const int mode = parse_int("expected a mode index");
    if (mode < 1) fail("mode indices are 1-based", index_at);
    if (mode > modes_)
      throw DimensionError("mode index " + std::to_string(mode) + " exceeds " +
                           std::to_string(modes_) + " modes");
    int power = 1;
    if (!at_end() && peek() == '^') {
      ++pos_;
      power = parse_int("expected an exponent");
    }
    (starred ? zstar : z)[static_cast<std::size_t>(mode - 1)] += power;
  }

  void parse_term(PolySymbol& out, double sign) {
    skip_ws();
    Complex coeff(1.0, 0.0);
    bool have_coeff = false;
    if (!at_end() && (peek() == '(' || starts_number(pos_))) {
      coeff = parse_coefficient();
      have_coeff = true;
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
        if (at_end() || peek() != 'z') fail("expected a factor after '*'", pos_);
      }
    }
    std::vector<int> zstar(static_cast<std::size_t>(modes_), 0);
    std::vector<int> z(static_cast<std::size_t>(modes_), 0);
    bool have_factor = false;
    while (!at_end() && peek() == 'z') {
      parse_factor(zstar, z);
      have_factor = true;
      skip_ws();
    }
    if (!have_coeff && !have_factor) fail("expected a coefficient or a factor", pos_);
    out.add_term(MultiIndex(std::move(zstar)), MultiIndex(std::move(z)), sign * coeff);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int modes_;
};

inline std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace detail

inline PolySymbol parse_symbol(std::string_view text, int modes) {
  if (modes < 1) throw DimensionError("mode count must be positive");
  return detail::SymbolParser(text, modes).parse();
}

// Canonical text: terms in graded-lex order, unit real coefficients elided
// when factors are present, complex coefficients as "(re,im)". The output
// parses back to the identical polynomial (print-parse fixed point).
inline std::string print_symbol(const PolySymbol& p) {
  if (p.terms().empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, c] : p.terms()) {
    Complex coeff = c;
    const bool real = coeff.imag() == 0.0;
    std::string sep;
    if (first) {
      sep = "";
    } else if (real && coeff.real() < 0.0) {
      sep = " - ";
      coeff = -coeff;
    } else {
      sep = " + ";
    }

    std::string factors;
    for (int rep = 0; rep < 2; ++rep) {
      const MultiIndex& idx = rep == 0 ? key.zstar : key.z;
      for (int i = 0; i < p.modes(); ++i) {
        if (idx[i] == 0) continue;
        factors += rep == 0 ? " zs" : " z";
        factors += std::to_string(i + 1);
        if (idx[i] > 1) factors += "^" + std::to_string(idx[i]);
      }
    }

    std::string coeff_str;
    if (!real)
      coeff_str = "(" + detail::format_double(coeff.real()) + "," +
                  detail::format_double(coeff.imag()) + ")";
    else if (factors.empty() || coeff.real() != 1.0)
      coeff_str = detail::format_double(coeff.real());

    out += sep + coeff_str;
    out += coeff_str.empty() && !factors.empty() ? factors.substr(1) : factors;
    first = false;
  }
  return out;
}

}  // namespace berezin
