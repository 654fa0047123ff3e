#ifndef CALCXX_EXPR_HPP
#define CALCXX_EXPR_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace calc {

/// Arithmetic operators of the expression grammar.
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

namespace detail {
struct ExprNode;
}

/// Immutable symbolic expression. Copies share the underlying tree.
///
/// Node kinds: constants, variables, unary minus, the five arithmetic
/// operators and calls of the recognized functions (sin, cos, tan, asin,
/// acos, atan, exp, log, sqrt, abs). The identifier `pi` evaluates to the
/// mathematical constant.
class Expr {
 public:
  enum class Kind { Constant, Variable, Negate, Binary, Apply };

  /// Constant zero.
  Expr();

  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr negate(Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr apply(std::string function, std::vector<Expr> args);

  static Expr pi();

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_constant(double value) const;
  bool is_variable() const { return kind() == Kind::Variable; }

  double constant_value() const;        // Kind::Constant
  const std::string& name() const;      // Kind::Variable or Kind::Apply
  const Expr& operand() const;          // Kind::Negate
  BinaryOp op() const;                  // Kind::Binary
  const Expr& lhs() const;              // Kind::Binary
  const Expr& rhs() const;              // Kind::Binary
  const std::vector<Expr>& args() const;  // Kind::Apply

  /// True if some Variable node (other than `pi`) carries this name.
  bool depends_on(const std::string& var) const;

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> node);
  std::shared_ptr<const detail::ExprNode> node_;
};

/// Variable values for evaluation. Each name is bound at most once.
using Binding = std::map<std::string, double>;

struct ParseError : std::runtime_error {
  ParseError(const std::string& message, std::size_t position);
  std::size_t position;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DiffError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// True for the function names the expression core knows how to parse,
/// evaluate and differentiate (except abs, which cannot be differentiated).
bool is_known_function(const std::string& name);

/// Parses `text` against the grammar
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := '-' unary | power
///   power := atom ('^' unary)?
///   atom  := NUMBER | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
/// `^` binds tighter than unary minus (`-x^2` is -(x^2)) and is
/// right-associative; `*`,`/` and `+`,`-` associate to the left.
/// Throws ParseError with the offending position on malformed input or
/// unknown function names.
Expr parse(const std::string& text);

/// Renders an expression so that parse(format(e)) is structurally equal
/// to e. Parentheses are emitted from precedence only where the grammar
/// requires them.
std::string format(const Expr& e);

/// Applies the zero/one rewrite rules to fixpoint:
///   x+0, 0+x, x-0 -> x      0-x -> -x      x*0, 0*x -> 0
///   x*1, 1*x -> x           0/x -> 0       x/1 -> x
///   x^1 -> x                x^0 -> 1       -(-x) -> x
/// No constant folding or polynomial normalization is performed; the
/// result evaluates identically to the input at every binding.
Expr simplify_zero(const Expr& e);

/// Exact symbolic derivative with respect to `var`, passed through
/// simplify_zero. Throws DiffError for abs (no subgradient semantics).
Expr diff(const Expr& e, const std::string& var);

/// IEEE double evaluation with `pi` bound to the mathematical constant.
/// Unbound variables throw EvalError. Domain errors (log of a negative
/// number, ...) propagate as NaN; when `domain_error` is non-null it is
/// set if any sub-expression produced a NaN from finite operands.
double evaluate(const Expr& e, const Binding& env,
                bool* domain_error = nullptr);

/// Elementwise evaluate over a table of bindings, order preserved.
std::vector<double> evaluate_grid(const Expr& e,
                                  const std::vector<Binding>& table,
                                  bool* domain_error = nullptr);

/// Replaces every occurrence of the variable `var` by `replacement`.
Expr substitute(const Expr& e, const std::string& var,
                const Expr& replacement);

/// Replaces every subtree structurally equal to `target` by `replacement`.
Expr replace_subtree(const Expr& e, const Expr& target,
                     const Expr& replacement);

/// Distinct variable names occurring in e (excluding pi), sorted.
std::vector<std::string> variables_of(const Expr& e);

}  // namespace calc

#endif  // CALCXX_EXPR_HPP
