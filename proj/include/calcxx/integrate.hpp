#ifndef CALCXX_INTEGRATE_HPP
#define CALCXX_INTEGRATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "calcxx/ops.hpp"
#include "calcxx/scalar.hpp"

namespace calc {

/// Integration range of one variable; lo == hi pins the variable to that
/// value instead of integrating over it.
struct Bound {
  double lo = 0.0;
  double hi = 0.0;
  bool fixed() const { return lo == hi; }
};

enum class IntegralMethod { Adaptive, MonteCarlo };

/// Box integral of J * f over the non-degenerate bounds, where J is the
/// product of the coordinate-system scale factors (1 when `coords` is
/// default). Fixed variables are substituted into J * f up front, so an
/// estimate with y pinned at c is bit-identical to integrating the
/// substituted integrand under the same seed. The integrand is `fn` when
/// set, otherwise the `integrand` scalar.
struct IntegralRequest {
  Scalar integrand{1.0};
  ScalarFn fn;
  std::vector<std::pair<std::string, Bound>> bounds;  // in integration order
  CoordinateSystem coords;  // factors per bound variable, fixed ones included
  std::optional<IntegralMethod> method;  // default: adaptive up to 6-d
  double rel_tol = 1e-6;
  double abs_tol = 1e-12;
  std::size_t max_evals = 2000000;  // adaptive evaluation budget
  std::size_t samples = 100000;     // monte-carlo sample count
  std::optional<std::uint64_t> seed;
};

/// `error` is a standard error for monte-carlo and the summed two-level
/// quadrature discrepancy for the adaptive method; always >= 0.
/// `converged` is false when the adaptive budget ran out first (the
/// estimate is still returned). `seed` echoes the monte-carlo seed used.
struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::string method;
  std::uint64_t seed = 0;
  bool converged = true;
};

/// Adaptive: per-cell tensor-product Gauss-Legendre (7 and 5 nodes per
/// axis), cells split in half along their widest axis, worst error
/// first, until sum |err| <= max(abs_tol, rel_tol * |value|) or the
/// budget is spent. Supports up to 6 integrated dimensions; quadrature
/// nodes are strictly interior, so integrable boundary singularities
/// are fine. Monte-carlo: mean * volume over open-interval uniform
/// draws from a seeded mt19937_64; the CALC_SEED environment variable
/// overrides the requested seed.
IntegralResult integral(const IntegralRequest& req);

/// Integral over a coordinate level-set: identical machinery, but
/// requires at least one fixed bound (the surface coordinate).
IntegralResult surface_integral_fixed(const IntegralRequest& req);

}  // namespace calc

#endif
