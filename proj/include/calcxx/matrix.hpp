#ifndef CALCXX_MATRIX_HPP
#define CALCXX_MATRIX_HPP

#include "calcxx/tensor.hpp"

namespace calc {

/// Determinant of a square rank-2 tensor. Fully numeric input goes
/// through a numeric LU factorization; any symbolic entry switches to
/// recursive cofactor expansion along the first row with simplify_zero
/// applied per step. Symbolic expansion is capped at 8x8.
Scalar mxdet(const Tensor& m);

/// Inverse of a square rank-2 tensor. Numeric input is solved
/// numerically (throws EvalError when singular); symbolic input builds
/// the adjugate over a single shared determinant: entry (i,j) is
/// (-1)^(i+j) * mxdet(minor(j,i)) / mxdet(m). A determinant that
/// simplifies to the literal 0 is rejected.
Tensor mxinv(const Tensor& m);

/// Matrix product through Einstein summation over the inner index.
Tensor mxprod(const Tensor& a, const Tensor& b);

}  // namespace calc

#endif  // CALCXX_MATRIX_HPP
