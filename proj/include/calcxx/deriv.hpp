#ifndef CALCXX_DERIV_HPP
#define CALCXX_DERIV_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "calcxx/tensor.hpp"

namespace calc {

/// Central finite-difference stencil for the n-th derivative with
/// accuracy order p: offsets -i..i with i = floor((n+p-1)/2) and
/// coefficients solving the moment conditions
///   sum_j C_j j^m = 1 if m == n else 0,   m = 0..2i.
/// The estimate of f^(n)(x) is n!/h^n * sum_j C_j f(x + j h).
struct Stencil {
  int order = 0;
  int accuracy = 0;
  std::vector<int> offsets;
  std::vector<double> coefficients;
};

/// Solves the stencil moment system (a Vandermonde matrix in the
/// offsets, unit right-hand side at row n) by partial-pivot LU.
/// n = 0 yields the trivial identity stencil.
Stencil fd_coefficients(int n, int p);

/// Exact integer factorial, capped at n = 20.
double factorial(int n);

/// What to differentiate and how. `order` holds either a single entry
/// (applied to every variable, one output slice per variable) or one
/// entry per variable (a single mixed partial). A non-empty
/// `named_order` overrides `order`; variables it omits get order 0.
/// Zero-order variables are skipped entirely. `point` binds every
/// variable (and any extra symbol) for the numeric path; `steps` may
/// pin the step size per variable, otherwise
///   h = eps^(1/(n+p)) * max(1, |x|).
struct DerivativeRequest {
  std::vector<std::string> variables;
  std::vector<int> order = {1};
  std::map<std::string, int> named_order;
  Binding point;
  int accuracy = 4;
  std::map<std::string, double> steps;
};

using ScalarFn = std::function<double(const Binding&)>;
using VectorFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Finite-difference derivatives of a tensor of expressions. With a
/// single order n and m > 1 variables the result gains one trailing
/// dimension of extent m: D[..., k] = d^n/dx_k^n F[...]. With
/// per-variable orders the result keeps the target's shape.
Tensor derivative_numeric(const Tensor& f, const DerivativeRequest& req);

/// Same semantics for a scalar-valued callable over named bindings.
Tensor derivative_numeric(const ScalarFn& f, const DerivativeRequest& req);

/// Parameter-vector target: f maps a coordinate vector to one or more
/// components; coordinates are positional. A single-component target is
/// treated as scalar-valued, so order broadcasting yields the gradient
/// layout; an L-component target yields the Jacobian layout (L, m).
Tensor derivative_numeric(const VectorFn& f, const std::vector<double>& x0,
                          const std::vector<int>& order, int accuracy = 4,
                          const std::vector<double>& steps = {});

/// Symbolic counterpart with identical order semantics. When `point`
/// is non-empty the derivatives are additionally evaluated there and
/// the result is numeric.
Tensor derivative_symbolic(const Tensor& f, const DerivativeRequest& req);

}  // namespace calc

#endif  // CALCXX_DERIV_HPP
