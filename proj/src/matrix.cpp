#include "calcxx/matrix.hpp"

#include <Eigen/Dense>

namespace calc {

namespace {

void require_square(const Tensor& m) {
  if (m.rank() != 2 || m.extents()[0] != m.extents()[1])
    throw ShapeError("square matrix required");
}

Eigen::MatrixXd to_eigen(const Tensor& m) {
  std::size_t n = m.extents()[0];
  Eigen::MatrixXd out(n, m.extents()[1]);
  for (std::size_t i = 0; i < m.size(); ++i) out.data()[i] = m[i].number();
  return out;
}

Tensor minor_of(const Tensor& m, std::size_t row, std::size_t col) {
  std::size_t n = m.extents()[0];
  std::vector<Scalar> data;
  data.reserve((n - 1) * (n - 1));
  for (std::size_t j = 0; j < n; ++j) {
    if (j == col) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row) continue;
      data.push_back(m.at({i, j}));
    }
  }
  return Tensor({n - 1, n - 1}, std::move(data));
}

Scalar det_cofactor(const Tensor& m) {
  std::size_t n = m.extents()[0];
  if (n == 1) return m.at({0, 0});
  Scalar acc(0.0);
  for (std::size_t j = 0; j < n; ++j) {
    Scalar term =
        combine(BinaryOp::Mul, m.at({0, j}), det_cofactor(minor_of(m, 0, j)));
    acc = combine(j % 2 == 0 ? BinaryOp::Add : BinaryOp::Sub, acc, term);
  }
  return acc;
}

}  // namespace

Scalar mxdet(const Tensor& m) {
  require_square(m);
  std::size_t n = m.extents()[0];
  if (m.all_numeric()) return to_eigen(m).determinant();
  if (n > 8)
    throw ShapeError("symbolic determinant limited to 8x8");
  return det_cofactor(m);
}

Tensor mxinv(const Tensor& m) {
  require_square(m);
  std::size_t n = m.extents()[0];
  if (m.all_numeric()) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(to_eigen(m));
    if (!lu.isInvertible()) throw EvalError("singular matrix");
    Eigen::MatrixXd inv = lu.inverse();
    std::vector<Scalar> data(n * n);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = inv.data()[i];
    return Tensor({n, n}, std::move(data));
  }
  Scalar det = mxdet(m);
  if (det.is_number() && det.number() == 0.0)
    throw EvalError("singular matrix");
  std::vector<Scalar> data(n * n);
  Tensor out({n, n}, std::move(data));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Scalar cof = mxdet(minor_of(m, j, i));
      if ((i + j) % 2 == 1) cof = combine(BinaryOp::Sub, Scalar(0.0), cof);
      out.at({i, j}) = combine(BinaryOp::Div, cof, det);
    }
  }
  return out;
}

Tensor mxprod(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2)
    throw ShapeError("matrix product requires rank-2 tensors");
  if (a.extents()[1] != b.extents()[0])
    throw ShapeError("inner extents must match");
  Tensor lhs = a.renamed({"i", "k"});
  Tensor rhs = b.renamed({"k", "j"});
  return einstein({lhs, rhs}).renamed({});
}

}  // namespace calc
