#ifndef CALCXX_OPS_HPP
#define CALCXX_OPS_HPP

#include <string>
#include <vector>

#include "calcxx/deriv.hpp"
#include "calcxx/tensor.hpp"

namespace calc {

/// Orthogonal coordinate chart described by its scale factors h_i,
/// written in terms of the chart variables. The volume element is
/// J = prod h_i.
struct CoordinateSystem {
  std::string name = "cartesian";
  std::vector<Expr> factors;  // empty means all ones (cartesian)
};

/// Built-in charts, with factors spelled positionally in `vars`:
///   cartesian              (1, ..., 1)         any dimension
///   polar                  (1, q1)             2-d
///   cylindrical            (1, q1, 1)          3-d
///   spherical              (1, q1, q1*sin(q2)) 3-d
///   parabolic              (s, s, q1*q2)       3-d, s = sqrt(q1^2+q2^2)
///   parabolic-cylindrical  (s, s, 1)           3-d
/// Unknown names and dimension mismatches raise std::invalid_argument.
CoordinateSystem coordinate_system(const std::string& name,
                                   const std::vector<std::string>& vars);

/// Chart from explicit scale factors, one per variable.
CoordinateSystem custom_coordinates(std::vector<Expr> factors);

/// Callable tensor field over point coordinates: fn returns the
/// components of a tensor of shape `extents`, flattened column-major;
/// empty extents mean a scalar field.
struct Field {
  VectorFn fn;
  std::vector<std::size_t> extents;
};

/// (grad F)_i = (1/h_i) dF/dq_i, one appended trailing axis of length d;
/// tensor-valued inputs are handled per scalar component. The callable
/// form evaluates the scale factors at `point` and raises EvalError
/// where the chart is singular (a factor is 0 or non-finite there).
Tensor gradient(const Tensor& F, const std::vector<std::string>& vars,
                const CoordinateSystem& coords = {});
Tensor gradient(const Field& F, const std::vector<std::string>& vars,
                const std::vector<double>& point,
                const CoordinateSystem& coords = {}, int accuracy = 4);

/// Gradient forced to matrix shape: scalar input gives a 1 x d matrix.
Tensor jacobian(const Tensor& F, const std::vector<std::string>& vars,
                const CoordinateSystem& coords = {});
Tensor jacobian(const Field& F, const std::vector<std::string>& vars,
                const std::vector<double>& point,
                const CoordinateSystem& coords = {}, int accuracy = 4);

/// Matrix of second partials per scalar component, component indices
/// leading. Cartesian only: any other chart raises std::invalid_argument.
Tensor hessian(const Tensor& F, const std::vector<std::string>& vars,
               const CoordinateSystem& coords = {});
Tensor hessian(const Field& F, const std::vector<std::string>& vars,
               const std::vector<double>& point,
               const CoordinateSystem& coords = {}, int accuracy = 4);

/// div F = (1/J) sum_i [ d(J/h_i)/dq_i F_i + (J/h_i) dF_i/dq_i ],
/// consuming the trailing axis (extent must equal d). The scale-factor
/// derivatives are always taken symbolically, also on the numeric route.
Tensor divergence(const Tensor& F, const std::vector<std::string>& vars,
                  const CoordinateSystem& coords = {});
Tensor divergence(const Field& F, const std::vector<std::string>& vars,
                  const std::vector<double>& point,
                  const CoordinateSystem& coords = {}, int accuracy = 4);

/// (curl F)_{k_1..k_m} = sum_{ij} eps_{i j k_1..k_m} / (h_i h_j) *
/// [ dh_j/dq_i F_j + h_j dF_j/dq_i ] with m = d-2: a scalar in 2-d, a
/// vector in 3-d. The trailing axis is consumed and m axes of extent d
/// are appended; tensor-valued inputs are handled per trailing vector.
Tensor curl(const Tensor& F, const std::vector<std::string>& vars,
            const CoordinateSystem& coords = {});
Tensor curl(const Field& F, const std::vector<std::string>& vars,
            const std::vector<double>& point,
            const CoordinateSystem& coords = {}, int accuracy = 4);

/// lap F = (1/J) sum_i [ d(J/h_i^2)/dq_i dF/dq_i + (J/h_i^2) d^2F/dq_i^2 ],
/// componentwise; output shape equals the input shape.
Tensor laplacian(const Tensor& F, const std::vector<std::string>& vars,
                 const CoordinateSystem& coords = {});
Tensor laplacian(const Field& F, const std::vector<std::string>& vars,
                 const std::vector<double>& point,
                 const CoordinateSystem& coords = {}, int accuracy = 4);

}  // namespace calc

#endif
