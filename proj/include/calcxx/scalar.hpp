#ifndef CALCXX_SCALAR_HPP
#define CALCXX_SCALAR_HPP

#include <string>
#include <variant>

#include "calcxx/expr.hpp"

namespace calc {

/// Element type of all tensors: either a plain double or a symbolic
/// expression. Arithmetic goes through combine(), which keeps numeric
/// operands numeric and builds structurally parenthesized trees as soon
/// as one side is symbolic.
class Scalar {
 public:
  Scalar() : value_(0.0) {}
  Scalar(double v) : value_(v) {}
  Scalar(int v) : value_(static_cast<double>(v)) {}
  Scalar(Expr e) : value_(std::move(e)) {}

  bool is_number() const { return std::holds_alternative<double>(value_); }
  bool is_symbolic() const { return !is_number(); }

  double number() const { return std::get<double>(value_); }
  const Expr& expr() const { return std::get<Expr>(value_); }

  /// Expression view: symbolic scalars as-is, numbers as Constant nodes.
  Expr as_expr() const {
    return is_number() ? Expr::constant(number()) : expr();
  }

 private:
  std::variant<double, Expr> value_;
};

/// Applies `op` to two scalars. Number op number stays a number (division
/// by numeric zero throws EvalError). If either side is symbolic the
/// result is built as a Binary node, so each operand is kept as its own
/// sub-tree (parenthesization is structural, never textual), then passed
/// through simplify_zero. A symbolic result that collapses to a literal
/// constant is returned as a number again, so 0 * x yields numeric 0.
Scalar combine(BinaryOp op, const Scalar& a, const Scalar& b);

/// Numeric value of a scalar under env (numbers ignore env).
double evaluate(const Scalar& s, const Binding& env,
                bool* domain_error = nullptr);

/// Formats numbers like expression constants (integers without decimal
/// point) and symbolic scalars via format().
std::string to_string(const Scalar& s);

}  // namespace calc

#endif  // CALCXX_SCALAR_HPP
