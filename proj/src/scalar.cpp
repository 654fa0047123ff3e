#include "calcxx/scalar.hpp"

#include <cmath>

namespace calc {

Scalar combine(BinaryOp op, const Scalar& a, const Scalar& b) {
  if (a.is_number() && b.is_number()) {
    double x = a.number();
    double y = b.number();
    switch (op) {
      case BinaryOp::Add: return x + y;
      case BinaryOp::Sub: return x - y;
      case BinaryOp::Mul: return x * y;
      case BinaryOp::Div:
        if (y == 0.0) throw EvalError("division by zero");
        return x / y;
      case BinaryOp::Pow: return std::pow(x, y);
    }
  }
  if (op == BinaryOp::Div && b.is_number() && b.number() == 0.0)
    throw EvalError("division by zero");
  Expr e = simplify_zero(Expr::binary(op, a.as_expr(), b.as_expr()));
  if (e.is_constant()) return e.constant_value();
  return e;
}

double evaluate(const Scalar& s, const Binding& env, bool* domain_error) {
  if (s.is_number()) {
    if (domain_error) *domain_error = false;
    return s.number();
  }
  return evaluate(s.expr(), env, domain_error);
}

std::string to_string(const Scalar& s) { return format(s.as_expr()); }

}  // namespace calc
