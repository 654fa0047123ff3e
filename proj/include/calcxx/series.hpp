#ifndef CALCXX_SERIES_HPP
#define CALCXX_SERIES_HPP

#include <map>
#include <string>
#include <vector>

#include "calcxx/deriv.hpp"
#include "calcxx/tensor.hpp"

namespace calc {

/// One row of a series term table: the printed factor label ("1",
/// "x^2", "(y-1)^1", products joined by "*"), the coefficient, the
/// per-variable degrees and their sum.
struct SeriesTerm {
  std::string label;
  double coefficient = 0.0;
  std::vector<int> degree;
  int total = 0;
};

/// A truncated power series around a center: the assembled expression,
/// the expansion order and one table row per multi-index with total
/// degree <= order (rows ascend by total degree, then lexicographically).
/// The assembled expression keeps only terms whose coefficient is a
/// nonzero float; it always equals the table sum semantically.
struct SeriesResult {
  Expr f = Expr::constant(0.0);
  int order = 0;
  std::vector<SeriesTerm> terms;
  std::vector<std::string> variables;
  Binding center;
};

/// Multi-indices for integer partitions. Base set: partitions of n into
/// at most `length` parts. equal=false widens to every total 0..n;
/// perm=true expands each partition into all distinct orderings;
/// fill=true zero-pads to exactly `length` components. Output ascends
/// by total, then lexicographically.
std::vector<std::vector<int>> partitions(int n, int length, bool fill,
                                         bool perm, bool equal);

/// Taylor expansion of order n around `center` (variables missing from
/// center expand around 0). The symbolic form differentiates exactly
/// and evaluates at the center; the callable form uses central finite
/// differences of the given accuracy.
SeriesResult taylor(const Expr& f, const std::vector<std::string>& vars,
                    const Binding& center, int order);
SeriesResult taylor(const ScalarFn& f, const std::vector<std::string>& vars,
                    const Binding& center, int order, int accuracy = 4);

/// Hermite polynomials H_nu' for every |nu'| <= |nu|, keyed by
/// multi-index. sigma must be a symmetric d x d matrix over the d
/// variables; the probabilists' kernel exp(-x' sigma x / 2) is used.
/// Each polynomial is returned as its Taylor series around 0. With an
/// all-integer sigma the coefficients are exact integers.
struct HermiteRequest {
  std::vector<int> order = {0};  // one entry, or one per variable
  std::vector<std::vector<double>> sigma;  // defaults to the identity
  std::vector<std::string> variables = {"x"};
};

std::map<std::vector<int>, SeriesResult> hermite(const HermiteRequest& req);

}  // namespace calc

#endif  // CALCXX_SERIES_HPP
