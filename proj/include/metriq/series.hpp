#pragma once

// Generalized power series sum_k c_k (t - a)^nu_k with real exponents, and the
// text literal used to pass them on the command line:
//
//   a=0; 1@0, 2.5@0.9, -1@1.8
//
// i.e. an optional "a=<offset>;" prefix followed by comma-separated
// coefficient@exponent pairs.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metriq/error.hpp"
#include "metriq/expr.hpp"

namespace metriq {

// Exponents are held in extended precision. Shifting nu by alpha (a double)
// is then exact for the exponents that arise here (sums of a few doubles of
// similar magnitude), so d_alpha maps alpha*k onto alpha*(k-1) bit for bit.
using exponent_t = long double;

struct PowerTerm {
  double coefficient = 0.0;
  exponent_t exponent = 0.0L;

  friend bool operator==(const PowerTerm&, const PowerTerm&) = default;
};

class GeneralizedPowerSeries {
 public:
  static constexpr std::size_t kMaxTerms = 512;

  GeneralizedPowerSeries() = default;

  // Sorts by exponent, merges equal exponents and drops zero coefficients.
  GeneralizedPowerSeries(double offset, std::vector<PowerTerm> terms) : offset_(offset) {
    if (!std::isfinite(offset)) throw DomainError("series: offset must be finite");
    for (const auto& t : terms) {
      if (!std::isfinite(t.coefficient)) throw DomainError("series: coefficients must be finite");
      if (!std::isfinite(t.exponent)) throw DomainError("series: exponents must be finite");
    }
    std::sort(terms.begin(), terms.end(),
              [](const PowerTerm& l, const PowerTerm& r) { return l.exponent < r.exponent; });
    for (const auto& t : terms) {
      if (!terms_.empty() && terms_.back().exponent == t.exponent) {
        terms_.back().coefficient += t.coefficient;
      } else {
        terms_.push_back(t);
      }
    }
    std::erase_if(terms_, [](const PowerTerm& t) { return t.coefficient == 0.0; });
    if (terms_.size() > kMaxTerms) {
      throw SeriesBlowupError("series: more than 512 terms (" + std::to_string(terms_.size()) + ")");
    }
  }

  [[nodiscard]] double offset() const noexcept { return offset_; }
  [[nodiscard]] const std::vector<PowerTerm>& terms() const noexcept { return terms_; }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
  [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }

  // Terms with negative exponent blow up at t = a.
  [[nodiscard]] bool has_singular_terms() const noexcept {
    return std::any_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) { return t.exponent < 0.0L; });
  }

  [[nodiscard]] double coefficient_of(exponent_t exponent) const noexcept {
    for (const auto& t : terms_) {
      if (t.exponent == exponent) return t.coefficient;
    }
    return 0.0;
  }

  // sum_k c_k (t - a)^nu_k. Requires t > a, or t >= a when no term is singular.
  [[nodiscard]] double operator()(double t) const {
    const long double d = static_cast<long double>(t) - offset_;
    if (d < 0.0L || (d == 0.0L && has_singular_terms())) {
      throw DomainError("series: evaluation point must satisfy t > a");
    }
    long double acc = 0.0L;
    for (const auto& term : terms_) {
      const long double p = term.exponent == 0.0L ? 1.0L : std::pow(d, term.exponent);
      acc += static_cast<long double>(term.coefficient) * p;
    }
    return static_cast<double>(acc);
  }

  friend GeneralizedPowerSeries operator*(double c, const GeneralizedPowerSeries& s) {
    std::vector<PowerTerm> out = s.terms_;
    for (auto& t : out) t.coefficient *= c;
    return {s.offset_, std::move(out)};
  }

  friend GeneralizedPowerSeries operator+(const GeneralizedPowerSeries& l, const GeneralizedPowerSeries& r) {
    require_same_offset(l, r);
    std::vector<PowerTerm> out = l.terms_;
    out.insert(out.end(), r.terms_.begin(), r.terms_.end());
    return {l.offset_, std::move(out)};
  }

  friend GeneralizedPowerSeries operator-(const GeneralizedPowerSeries& l, const GeneralizedPowerSeries& r) {
    return l + (-1.0) * r;
  }

  // Cauchy product; exponents add. Throws SeriesBlowupError past 512 terms.
  friend GeneralizedPowerSeries operator*(const GeneralizedPowerSeries& l, const GeneralizedPowerSeries& r) {
    require_same_offset(l, r);
    std::vector<PowerTerm> out;
    out.reserve(l.size() * r.size());
    for (const auto& a : l.terms_) {
      for (const auto& b : r.terms_) {
        out.push_back({a.coefficient * b.coefficient, a.exponent + b.exponent});
      }
    }
    return {l.offset_, std::move(out)};
  }

  friend bool operator==(const GeneralizedPowerSeries&, const GeneralizedPowerSeries&) = default;

 private:
  static void require_same_offset(const GeneralizedPowerSeries& l, const GeneralizedPowerSeries& r) {
    if (l.offset_ != r.offset_ && !l.empty() && !r.empty()) {
      throw DomainError("series: operands have different offsets");
    }
  }

  double offset_ = 0.0;
  std::vector<PowerTerm> terms_;
};

[[nodiscard]] inline GeneralizedPowerSeries constant_series(double c, double offset = 0.0) {
  return {offset, {{c, 0.0L}}};
}

// ---------------------------------------------------------------------------
// Literal text
// ---------------------------------------------------------------------------

namespace detail {

class SeriesLiteralParser {
 public:
  explicit SeriesLiteralParser(std::string_view src) : src_(src) {}

  GeneralizedPowerSeries parse() {
    double offset = 0.0;
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == 'a') {
      ++pos_;
      expect('=');
      offset = number();
      expect(';');
    }
    std::vector<PowerTerm> terms;
    skip_ws();
    if (pos_ < src_.size()) {
      for (;;) {
        const double c = number();
        expect('@');
        const std::size_t at = pos_;
        const double nu = number();
        if (nu < 0.0) throw SyntaxError("series exponent must be >= 0", at);
        terms.push_back({c, static_cast<exponent_t>(nu)});
        skip_ws();
        if (pos_ >= src_.size()) break;
        expect(',');
      }
    }
    return {offset, std::move(terms)};
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= src_.size() || src_[pos_] != c) {
      throw SyntaxError(std::string("series literal: expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  double number() {
    skip_ws();
    std::size_t start = pos_;
    bool negative = false;
    if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
      negative = src_[pos_] == '-';
      ++pos_;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
    if (ec != std::errc{} || ptr == src_.data() + pos_ || !std::isfinite(v)) {
      throw SyntaxError("series literal: malformed number", start);
    }
    pos_ = static_cast<std::size_t>(ptr - src_.data());
    return negative ? -v : v;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

[[nodiscard]] inline GeneralizedPowerSeries parse_series(std::string_view literal) {
  return detail::SeriesLiteralParser(literal).parse();
}

[[nodiscard]] inline std::string to_literal(const GeneralizedPowerSeries& s) {
  std::string out = "a=" + detail::format_number(s.offset()) + ";";
  bool first = true;
  for (const auto& t : s.terms()) {
    out += first ? " " : ", ";
    first = false;
    out += detail::format_number(t.coefficient);
    out += '@';
    out += detail::format_number(static_cast<double>(t.exponent));
  }
  return out;
}

// Expression tree sum_k c_k (x - a)^nu_k, for the operators that take ASTs.
[[nodiscard]] inline ExprAst to_expr(const GeneralizedPowerSeries& s) {
  using namespace expr;
  const ExprAst base = s.offset() == 0.0 ? variable() : sub(variable(), constant(s.offset()));
  ExprAst sum = constant(0.0);
  for (const auto& t : s.terms()) {
    const ExprAst power = pow(base, constant(static_cast<double>(t.exponent)));
    sum = add(sum, mul(constant(t.coefficient), power));
  }
  return sum;
}

}  // namespace metriq
