#ifndef CALCXX_TENSOR_HPP
#define CALCXX_TENSOR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "calcxx/scalar.hpp"

namespace calc {

struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense multidimensional array of Scalars with per-dimension optional
/// index names. Data is stored column-major: the first-listed dimension
/// varies fastest. Repeated index names are allowed and denote diagonal
/// (dummy) dimensions for contraction and Einstein summation.
class Tensor {
 public:
  Tensor() : data_(1) {}
  explicit Tensor(Scalar value) : data_{std::move(value)} {}
  Tensor(std::vector<std::size_t> extents, std::vector<Scalar> data);
  Tensor(std::vector<std::size_t> extents, std::vector<std::string> names,
         std::vector<Scalar> data);

  std::size_t rank() const { return extents_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& extents() const { return extents_; }
  /// One entry per dimension; "" marks an unnamed dimension.
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Scalar>& data() const { return data_; }
  std::vector<Scalar>& data() { return data_; }

  const Scalar& operator[](std::size_t linear) const { return data_[linear]; }
  Scalar& operator[](std::size_t linear) { return data_[linear]; }
  const Scalar& at(const std::vector<std::size_t>& idx) const {
    return data_[linear_index(idx)];
  }
  Scalar& at(const std::vector<std::size_t>& idx) {
    return data_[linear_index(idx)];
  }

  std::size_t linear_index(const std::vector<std::size_t>& idx) const;
  std::vector<std::size_t> multi_index(std::size_t linear) const;

  bool all_numeric() const;
  bool has_names() const;

  /// Same data under new dimension names (empty vector clears them all).
  Tensor renamed(std::vector<std::string> names) const;
  /// Same data under new extents; the element count must not change.
  Tensor reshaped(std::vector<std::size_t> extents,
                  std::vector<std::string> names = {}) const;

 private:
  std::vector<std::size_t> extents_;
  std::vector<std::string> names_;  // always extents_.size() entries
  std::vector<Scalar> data_;
};

/// Column-major construction; throws ShapeError when the data length does
/// not match the product of extents or the name count is wrong.
Tensor make_tensor(std::vector<std::size_t> extents,
                   std::vector<std::string> names, std::vector<Scalar> data);
Tensor make_tensor(std::vector<std::size_t> extents,
                   std::vector<Scalar> data);

/// Reorders dimensions: output dimension k is input dimension perm[k].
Tensor permute(const Tensor& t, const std::vector<std::size_t>& perm);

/// Per-element combine() over two tensors of identical extents.
Tensor elementwise(BinaryOp op, const Tensor& a, const Tensor& b);

/// Numeric tensor obtained by evaluating every element under env.
Tensor evaluate_tensor(const Tensor& t, const Binding& env);

/// Sums each group of dimensions that share an index name over its
/// diagonal. drop=true removes those dimensions; drop=false keeps one
/// (named) diagonal dimension per group, placed after the free
/// dimensions in group first-appearance order. A tensor with no named
/// dimensions, rank >= 2 and all extents equal is treated as one group
/// (the full diagonal trace).
Tensor contraction(const Tensor& t, bool drop = true);

/// Einstein summation over named indices: sums every index that appears
/// more than once across (or within) the operands; indices appearing
/// exactly once survive, ordered by first appearance. Every dimension of
/// every operand must be named, and equal names must have equal extents.
Tensor einstein(const std::vector<Tensor>& operands);

/// Two-operand Einstein summation through a dense matrix product:
/// contract both operands, reshape to (free x shared) and (shared x free)
/// matrices, multiply, reshape back. Returns nullopt when the pattern is
/// not a pure inner product (a summed index missing from one operand) or
/// when either tensor has symbolic entries; the result otherwise equals
/// einstein({a, b}).
std::optional<Tensor> einstein_pair_fast(const Tensor& a, const Tensor& b);

/// Levi-Civita symbol: rank-n tensor with all extents n, +1/-1 per
/// permutation parity, 0 on repeated indices.
Tensor epsilon(std::size_t n);

/// Generalized Kronecker delta: rank-2p tensor with all extents n. The
/// first p dimensions are the upper indices; an entry is the parity of
/// the permutation taking the lower index tuple to the upper one, or 0.
Tensor delta(std::size_t n, std::size_t p);

/// Vector product of n-1 vectors in n dimensions, perpendicular to all
/// inputs: component k expands the signed cofactors of the matrix whose
/// rows are the input vectors.
Tensor cross(const std::vector<Tensor>& vectors);

/// Full inner product of two tensors with identical extents.
Scalar inner(const Tensor& a, const Tensor& b);

/// Inner product over the trailing dimensions of a, which must equal the
/// extents of b; keeps a's leading dimensions.
Tensor dot(const Tensor& a, const Tensor& b);

/// Outer product: concatenated extents, c[i..., j...] = a[i...]*b[j...].
Tensor outer(const Tensor& a, const Tensor& b);

/// Kronecker product of equal-rank tensors: extents multiply per
/// dimension with the standard block layout (a's index is the major one).
Tensor kron(const Tensor& a, const Tensor& b);

/// Parity of a permutation of 0..n-1 via cycle decomposition: +1 or -1.
int permutation_parity(const std::vector<std::size_t>& perm);

}  // namespace calc

#endif  // CALCXX_TENSOR_HPP
