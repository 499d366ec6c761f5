#pragma once

// Single-variable expression trees: parsing, evaluation, printing and
// symbolic differentiation.
//
// Grammar (whitespace is insignificant):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := base ('^' factor)?
//   base   := number | 'x' | ident '(' args ')' | '(' expr ')' | '-' base
//
// '^' is right-associative. Unary minus belongs to the base, so "-x^2" reads
// as (-x)^2; write "-(x^2)" or "0 - x^2" for the other meaning. A minus applied
// directly to a numeric literal folds into a negative constant.
//
// Builtins: sin, cos, exp, ln, sqrt (one argument) and pow(base, exponent).

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metriq/error.hpp"

namespace metriq {

enum class NodeKind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Builtin { Sin, Cos, Exp, Ln, Sqrt, Pow };

[[nodiscard]] constexpr std::string_view to_string(Builtin fn) noexcept {
  switch (fn) {
    case Builtin::Sin: return "sin";
    case Builtin::Cos: return "cos";
    case Builtin::Exp: return "exp";
    case Builtin::Ln: return "ln";
    case Builtin::Sqrt: return "sqrt";
    case Builtin::Pow: return "pow";
  }
  return "?";
}

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;          // Constant
  Builtin fn = Builtin::Sin;   // Call
  NodePtr lhs;                 // operand / left / call argument
  NodePtr rhs;                 // right / pow exponent
};

// Immutable handle to an expression tree. Copies share structure.
class ExprAst {
 public:
  ExprAst() : root_(make_constant_node(0.0)) {}
  explicit ExprAst(NodePtr root) : root_(std::move(root)) {}

  [[nodiscard]] const ExprNode& node() const noexcept { return *root_; }
  [[nodiscard]] const NodePtr& root() const noexcept { return root_; }
  [[nodiscard]] NodeKind kind() const noexcept { return root_->kind; }

  [[nodiscard]] bool is_constant() const noexcept { return root_->kind == NodeKind::Constant; }
  [[nodiscard]] bool is_constant(double v) const noexcept {
    return is_constant() && root_->value == v;
  }

  [[nodiscard]] double operator()(double x) const;

  static NodePtr make_constant_node(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Constant;
    n->value = v;
    return n;
  }

 private:
  NodePtr root_;
};

// ---------------------------------------------------------------------------
// Construction. These apply constant folding and the 0/1 identities, nothing
// more.
// ---------------------------------------------------------------------------

namespace expr {

inline ExprAst constant(double v) { return ExprAst(ExprAst::make_constant_node(v)); }

inline ExprAst variable() {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Variable;
  return ExprAst(std::move(n));
}

namespace detail {

inline ExprAst make_node(NodeKind kind, const ExprAst& a, const ExprAst* b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = a.root();
  if (b != nullptr) n->rhs = b->root();
  return ExprAst(std::move(n));
}

inline ExprAst make_call(Builtin fn, const ExprAst& arg, const ExprAst* exponent = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Call;
  n->fn = fn;
  n->lhs = arg.root();
  if (exponent != nullptr) n->rhs = exponent->root();
  return ExprAst(std::move(n));
}

}  // namespace detail

// Raw constructors: no folding. The parser uses these so the tree mirrors the
// source text.
inline ExprAst raw_negate(const ExprAst& a) { return detail::make_node(NodeKind::Negate, a); }
inline ExprAst raw_binary(NodeKind kind, const ExprAst& a, const ExprAst& b) {
  return detail::make_node(kind, a, &b);
}
inline ExprAst raw_call(Builtin fn, const ExprAst& arg) { return detail::make_call(fn, arg); }
inline ExprAst raw_pow_call(const ExprAst& base, const ExprAst& exponent) {
  return detail::make_call(Builtin::Pow, base, &exponent);
}

inline ExprAst negate(const ExprAst& a) {
  if (a.is_constant()) return constant(-a.node().value);
  if (a.kind() == NodeKind::Negate) return ExprAst(a.node().lhs);
  return raw_negate(a);
}

inline ExprAst add(const ExprAst& a, const ExprAst& b) {
  if (a.is_constant() && b.is_constant()) return constant(a.node().value + b.node().value);
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return raw_binary(NodeKind::Add, a, b);
}

inline ExprAst sub(const ExprAst& a, const ExprAst& b) {
  if (a.is_constant() && b.is_constant()) return constant(a.node().value - b.node().value);
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return negate(b);
  return raw_binary(NodeKind::Sub, a, b);
}

inline ExprAst mul(const ExprAst& a, const ExprAst& b) {
  if (a.is_constant() && b.is_constant()) return constant(a.node().value * b.node().value);
  if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return raw_binary(NodeKind::Mul, a, b);
}

inline ExprAst div(const ExprAst& a, const ExprAst& b) {
  if (a.is_constant() && b.is_constant() && b.node().value != 0.0) {
    return constant(a.node().value / b.node().value);
  }
  if (a.is_constant(0.0)) return constant(0.0);
  if (b.is_constant(1.0)) return a;
  return raw_binary(NodeKind::Div, a, b);
}

inline ExprAst pow(const ExprAst& base, const ExprAst& exponent) {
  if (exponent.is_constant(0.0)) return constant(1.0);
  if (exponent.is_constant(1.0)) return base;
  if (base.is_constant() && exponent.is_constant()) {
    const double v = std::pow(base.node().value, exponent.node().value);
    if (std::isfinite(v)) return constant(v);
  }
  return raw_binary(NodeKind::Pow, base, exponent);
}

inline ExprAst call(Builtin fn, const ExprAst& arg) {
  if (arg.is_constant()) {
    const double v = arg.node().value;
    double r = NAN;
    switch (fn) {
      case Builtin::Sin: r = std::sin(v); break;
      case Builtin::Cos: r = std::cos(v); break;
      case Builtin::Exp: r = std::exp(v); break;
      case Builtin::Ln: r = v > 0.0 ? std::log(v) : NAN; break;
      case Builtin::Sqrt: r = v >= 0.0 ? std::sqrt(v) : NAN; break;
      case Builtin::Pow: break;
    }
    if (std::isfinite(r)) return constant(r);
  }
  return raw_call(fn, arg);
}

}  // namespace expr

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("expression: ") + what + " is not finite");
  return v;
}

inline double eval_pow(double base, double exponent) {
  if (base < 0.0 && exponent != std::floor(exponent)) {
    throw DomainError("expression: negative base with non-integer exponent");
  }
  if (base == 0.0 && exponent < 0.0) throw DomainError("expression: zero to a negative power");
  return checked(std::pow(base, exponent), "power");
}

inline double eval_node(const ExprNode& n, double x) {
  switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::Variable: return x;
    case NodeKind::Negate: return -eval_node(*n.lhs, x);
    case NodeKind::Add: return checked(eval_node(*n.lhs, x) + eval_node(*n.rhs, x), "sum");
    case NodeKind::Sub: return checked(eval_node(*n.lhs, x) - eval_node(*n.rhs, x), "difference");
    case NodeKind::Mul: return checked(eval_node(*n.lhs, x) * eval_node(*n.rhs, x), "product");
    case NodeKind::Div: {
      const double den = eval_node(*n.rhs, x);
      if (den == 0.0) throw DomainError("expression: division by zero");
      return checked(eval_node(*n.lhs, x) / den, "quotient");
    }
    case NodeKind::Pow: return eval_pow(eval_node(*n.lhs, x), eval_node(*n.rhs, x));
    case NodeKind::Call: {
      const double a = eval_node(*n.lhs, x);
      switch (n.fn) {
        case Builtin::Sin: return std::sin(a);
        case Builtin::Cos: return std::cos(a);
        case Builtin::Exp: return checked(std::exp(a), "exp");
        case Builtin::Ln:
          if (!(a > 0.0)) throw DomainError("expression: ln of non-positive value");
          return std::log(a);
        case Builtin::Sqrt:
          if (a < 0.0) throw DomainError("expression: sqrt of negative value");
          return std::sqrt(a);
        case Builtin::Pow: return eval_pow(a, eval_node(*n.rhs, x));
      }
    }
  }
  throw DomainError("expression: malformed node");
}

}  // namespace detail

inline double ExprAst::operator()(double x) const { return detail::eval_node(*root_, x); }

[[nodiscard]] inline double evaluate(const ExprAst& ast, double x) { return ast(x); }

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace detail {

// Shortest text that reads back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
  return std::string(buf, end);
}

inline void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Constant:
      if (n.value < 0.0 || (n.value == 0.0 && std::signbit(n.value))) {
        out += '(';
        out += format_number(n.value);
        out += ')';
      } else {
        out += format_number(n.value);
      }
      return;
    case NodeKind::Variable: out += 'x'; return;
    case NodeKind::Negate:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div:
    case NodeKind::Pow: {
      static constexpr char ops[] = {'+', '-', '*', '/', '^'};
      const auto idx = static_cast<int>(n.kind) - static_cast<int>(NodeKind::Add);
      out += '(';
      print_node(*n.lhs, out);
      out += ops[idx];
      print_node(*n.rhs, out);
      out += ')';
      return;
    }
    case NodeKind::Call:
      out += to_string(n.fn);
      out += '(';
      print_node(*n.lhs, out);
      if (n.fn == Builtin::Pow) {
        out += ',';
        print_node(*n.rhs, out);
      }
      out += ')';
      return;
  }
}

}  // namespace detail

// Canonical, fully parenthesised text. parse(to_string(a)) is structurally
// equal to a for any tree the parser can produce.
[[nodiscard]] inline std::string to_string(const ExprAst& ast) {
  std::string out;
  detail::print_node(ast.node(), out);
  return out;
}

[[nodiscard]] inline bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant:
      return a.value == b.value && std::signbit(a.value) == std::signbit(b.value);
    case NodeKind::Variable: return true;
    case NodeKind::Negate: return structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::Call:
      if (a.fn != b.fn) return false;
      if (a.fn == Builtin::Pow && !structurally_equal(*a.rhs, *b.rhs)) return false;
      return structurally_equal(*a.lhs, *b.lhs);
    default:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

[[nodiscard]] inline bool structurally_equal(const ExprAst& a, const ExprAst& b) {
  return structurally_equal(a.node(), b.node());
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxExpressionBytes = 4096;

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  ExprAst parse_all() {
    ExprAst e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw SyntaxError(std::string("expected '") + c + "' but input ended", pos_);
      throw SyntaxError(std::string("expected '") + c + "'", pos_);
    }
  }

  ExprAst parse_expr() {
    ExprAst lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = expr::raw_binary(NodeKind::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = expr::raw_binary(NodeKind::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  ExprAst parse_term() {
    ExprAst lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = expr::raw_binary(NodeKind::Mul, lhs, parse_factor());
      } else if (accept('/')) {
        lhs = expr::raw_binary(NodeKind::Div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  ExprAst parse_factor() {
    ExprAst base = parse_base();
    if (accept('^')) return expr::raw_binary(NodeKind::Pow, base, parse_factor());
    return base;
  }

  ExprAst parse_base() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      ExprAst inner = parse_base();
      if (inner.is_constant() && !std::signbit(inner.node().value)) {
        return expr::constant(-inner.node().value);
      }
      return expr::raw_negate(inner);
    }
    if (c == '(') {
      ++pos_;
      ExprAst inner = parse_expr();
      expect(')');
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

  ExprAst parse_number() {
    const std::size_t start = pos_;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
    if (ec != std::errc{} || ptr == src_.data() + pos_) throw SyntaxError("malformed number", start);
    pos_ = static_cast<std::size_t>(ptr - src_.data());
    return expr::constant(v);
  }

  ExprAst parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return expr::variable();

    Builtin fn;
    if (name == "sin") fn = Builtin::Sin;
    else if (name == "cos") fn = Builtin::Cos;
    else if (name == "exp") fn = Builtin::Exp;
    else if (name == "ln") fn = Builtin::Ln;
    else if (name == "sqrt") fn = Builtin::Sqrt;
    else if (name == "pow") fn = Builtin::Pow;
    else throw UnknownIdentifierError(std::string(name), start);

    expect('(');
    ExprAst arg = parse_expr();
    if (fn == Builtin::Pow) {
      expect(',');
      ExprAst exponent = parse_expr();
      expect(')');
      return expr::raw_pow_call(arg, exponent);
    }
    expect(')');
    return expr::raw_call(fn, arg);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

[[nodiscard]] inline ExprAst parse(std::string_view src) {
  if (src.size() > kMaxExpressionBytes) throw SyntaxError("expression longer than 4096 bytes", kMaxExpressionBytes);
  bool blank = true;
  for (char c : src) blank = blank && (c == ' ' || c == '\t' || c == '\n' || c == '\r');
  if (blank) throw SyntaxError("empty expression", 0);
  return detail::ExprParser(src).parse_all();
}

// ---------------------------------------------------------------------------
// Differentiation and composition
// ---------------------------------------------------------------------------

namespace detail {

inline ExprAst diff_node(const NodePtr& p);

inline bool depends_on_x(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::Constant: return false;
    case NodeKind::Variable: return true;
    case NodeKind::Negate: return depends_on_x(*n.lhs);
    case NodeKind::Call:
      return depends_on_x(*n.lhs) || (n.rhs != nullptr && depends_on_x(*n.rhs));
    default: return depends_on_x(*n.lhs) || depends_on_x(*n.rhs);
  }
}

inline ExprAst diff_power(const ExprAst& base, const ExprAst& exponent) {
  using namespace expr;
  const ExprAst db = diff_node(base.root());
  if (!depends_on_x(exponent.node())) {
    // c * b^(c-1) * b'
    return mul(mul(exponent, pow(base, sub(exponent, constant(1.0)))), db);
  }
  // b^e * (e' ln b + e b' / b)
  const ExprAst de = diff_node(exponent.root());
  const ExprAst inner = add(mul(de, call(Builtin::Ln, base)), div(mul(exponent, db), base));
  return mul(pow(base, exponent), inner);
}

inline ExprAst diff_node(const NodePtr& p) {
  using namespace expr;
  const ExprNode& n = *p;
  switch (n.kind) {
    case NodeKind::Constant: return constant(0.0);
    case NodeKind::Variable: return constant(1.0);
    case NodeKind::Negate: return negate(diff_node(n.lhs));
    case NodeKind::Add: return add(diff_node(n.lhs), diff_node(n.rhs));
    case NodeKind::Sub: return sub(diff_node(n.lhs), diff_node(n.rhs));
    case NodeKind::Mul: {
      const ExprAst a(n.lhs), b(n.rhs);
      return add(mul(diff_node(n.lhs), b), mul(a, diff_node(n.rhs)));
    }
    case NodeKind::Div: {
      const ExprAst a(n.lhs), b(n.rhs);
      return div(sub(mul(diff_node(n.lhs), b), mul(a, diff_node(n.rhs))), mul(b, b));
    }
    case NodeKind::Pow: return diff_power(ExprAst(n.lhs), ExprAst(n.rhs));
    case NodeKind::Call: {
      const ExprAst arg(n.lhs);
      const ExprAst da = diff_node(n.lhs);
      switch (n.fn) {
        case Builtin::Sin: return mul(call(Builtin::Cos, arg), da);
        case Builtin::Cos: return mul(negate(call(Builtin::Sin, arg)), da);
        case Builtin::Exp: return mul(call(Builtin::Exp, arg), da);
        case Builtin::Ln: return div(da, arg);
        case Builtin::Sqrt: return div(da, mul(constant(2.0), call(Builtin::Sqrt, arg)));
        case Builtin::Pow: return diff_power(arg, ExprAst(n.rhs));
      }
    }
  }
  throw DomainError("diff: malformed node");
}

inline ExprAst substitute_node(const NodePtr& p, const ExprAst& inner) {
  using namespace expr;
  const ExprNode& n = *p;
  switch (n.kind) {
    case NodeKind::Constant: return ExprAst(p);
    case NodeKind::Variable: return inner;
    case NodeKind::Negate: return raw_negate(substitute_node(n.lhs, inner));
    case NodeKind::Call:
      if (n.fn == Builtin::Pow) {
        return raw_pow_call(substitute_node(n.lhs, inner), substitute_node(n.rhs, inner));
      }
      return raw_call(n.fn, substitute_node(n.lhs, inner));
    default:
      return raw_binary(n.kind, substitute_node(n.lhs, inner), substitute_node(n.rhs, inner));
  }
}

}  // namespace detail

// Symbolic d/dx, simplified only by constant folding and 0/1 identities.
[[nodiscard]] inline ExprAst diff(const ExprAst& ast) { return detail::diff_node(ast.root()); }

// f(g(x)): every occurrence of x in `outer` replaced by `inner`.
[[nodiscard]] inline ExprAst compose(const ExprAst& outer, const ExprAst& inner) {
  return detail::substitute_node(outer.root(), inner);
}

// Coefficients f^(j)(at) / j! for j = 0..order, via repeated symbolic
// differentiation.
[[nodiscard]] inline std::vector<double> taylor_coefficients(const ExprAst& f, double at, int order) {
  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(order) + 1);
  ExprAst d = f;
  double factorial = 1.0;
  for (int j = 0; j <= order; ++j) {
    if (j > 0) {
      d = diff(d);
      factorial *= j;
    }
    coeffs.push_back(d(at) / factorial);
  }
  return coeffs;
}

}  // namespace metriq
