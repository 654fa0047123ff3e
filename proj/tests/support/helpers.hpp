#ifndef TESTS_SUPPORT_HELPERS_HPP
#define TESTS_SUPPORT_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "calcxx/expr.hpp"
#include "calcxx/tensor.hpp"

namespace testsupport {

using calc::Binding;
using calc::BinaryOp;
using calc::Expr;
using calc::Scalar;
using calc::Tensor;

// One fixed-seed generator per test binary keeps property tests
// reproducible run to run.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eedcafe1234ULL);
  return gen;
}

inline double uniform(double lo, double hi) {
  double u = (rng()() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline int uniform_int(int lo, int hi) {
  return lo + static_cast<int>(rng()() % static_cast<unsigned>(hi - lo + 1));
}

inline Binding random_binding(const std::vector<std::string>& vars,
                              double lo = 0.5, double hi = 2.0) {
  Binding env;
  for (const std::string& v : vars) env[v] = uniform(lo, hi);
  return env;
}

// Semantic equivalence: agreement at randomized bindings within a
// relative tolerance. Bindings that hit a domain error or non-finite
// value on either side are skipped (and do not count as a trial).
inline bool semantically_equal(const Expr& a, const Expr& b,
                               double tol = 1e-9, int trials = 20,
                               double lo = 0.5, double hi = 2.0) {
  std::vector<std::string> vars = variables_of(a);
  for (const std::string& v : variables_of(b)) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      vars.push_back(v);
  }
  int done = 0;
  int attempts = 0;
  while (done < trials) {
    if (++attempts > trials * 50) return false;
    Binding env = random_binding(vars, lo, hi);
    bool bad_a = false, bad_b = false;
    double va = evaluate(a, env, &bad_a);
    double vb = evaluate(b, env, &bad_b);
    if (bad_a || bad_b || !std::isfinite(va) || !std::isfinite(vb)) continue;
    if (std::fabs(va - vb) > tol * (1.0 + std::max(std::fabs(va),
                                                   std::fabs(vb))))
      return false;
    ++done;
  }
  return true;
}

inline bool scalars_equal(const Scalar& a, const Scalar& b,
                          double tol = 1e-9) {
  if (a.is_number() && b.is_number())
    return std::fabs(a.number() - b.number()) <=
           tol * (1.0 + std::fabs(a.number()));
  return semantically_equal(a.as_expr(), b.as_expr(), tol);
}

inline bool tensors_equal(const Tensor& a, const Tensor& b,
                          double tol = 1e-9) {
  if (a.extents() != b.extents()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!scalars_equal(a[i], b[i], tol)) return false;
  }
  return true;
}

// Random expressions over +,-,*, integer powers, sin, cos, exp: safe to
// evaluate and differentiate on positive bindings.
inline Expr random_smooth_expr(const std::vector<std::string>& vars,
                               int depth) {
  if (depth <= 0 || uniform_int(0, 4) == 0) {
    if (uniform_int(0, 2) == 0)
      return Expr::constant(uniform_int(-3, 3));
    return Expr::variable(vars[uniform_int(0, int(vars.size()) - 1)]);
  }
  switch (uniform_int(0, 5)) {
    case 0:
      return Expr::binary(BinaryOp::Add, random_smooth_expr(vars, depth - 1),
                          random_smooth_expr(vars, depth - 1));
    case 1:
      return Expr::binary(BinaryOp::Sub, random_smooth_expr(vars, depth - 1),
                          random_smooth_expr(vars, depth - 1));
    case 2:
      return Expr::binary(BinaryOp::Mul, random_smooth_expr(vars, depth - 1),
                          random_smooth_expr(vars, depth - 1));
    case 3:
      return Expr::binary(BinaryOp::Pow, Expr::variable(vars[0]),
                          Expr::constant(uniform_int(1, 3)));
    case 4:
      return Expr::apply(uniform_int(0, 1) == 0 ? "sin" : "cos",
                         {random_smooth_expr(vars, depth - 1)});
    default:
      return Expr::apply("exp", {Expr::variable(
                                    vars[uniform_int(0, int(vars.size()) - 1)])});
  }
}

// Brute-force Einstein oracle: sums the product over all assignments of
// every index, keeping indices that appear exactly once.
inline Tensor einstein_oracle(const std::vector<Tensor>& operands) {
  std::map<std::string, std::size_t> extent;
  std::map<std::string, std::size_t> count;
  std::vector<std::string> order;
  for (const Tensor& t : operands) {
    for (std::size_t k = 0; k < t.rank(); ++k) {
      const std::string& n = t.names()[k];
      if (!extent.count(n)) {
        extent[n] = t.extents()[k];
        order.push_back(n);
      }
      ++count[n];
    }
  }
  std::vector<std::string> free_names;
  for (const Tensor& t : operands) {
    for (const std::string& n : t.names()) {
      if (count[n] == 1) free_names.push_back(n);
    }
  }
  std::vector<std::string> sum_names;
  for (const std::string& n : order) {
    if (count[n] >= 2) sum_names.push_back(n);
  }

  std::vector<std::size_t> out_extents;
  for (const std::string& n : free_names) out_extents.push_back(extent[n]);
  std::size_t out_size = 1;
  for (std::size_t e : out_extents) out_size *= e;
  Tensor out(out_extents, std::vector<std::string>(free_names),
             std::vector<Scalar>(out_size));

  std::map<std::string, std::size_t> assign;
  for (std::size_t lin = 0; lin < out.size(); ++lin) {
    std::vector<std::size_t> idx = out.multi_index(lin);
    for (std::size_t k = 0; k < free_names.size(); ++k)
      assign[free_names[k]] = idx[k];
    Scalar acc(0.0);
    std::vector<std::size_t> cnt(sum_names.size(), 0);
    for (;;) {
      for (std::size_t k = 0; k < sum_names.size(); ++k)
        assign[sum_names[k]] = cnt[k];
      Scalar term(1.0);
      for (const Tensor& t : operands) {
        std::vector<std::size_t> ti(t.rank());
        for (std::size_t k = 0; k < t.rank(); ++k)
          ti[k] = assign[t.names()[k]];
        term = calc::combine(BinaryOp::Mul, term, t.at(ti));
      }
      acc = calc::combine(BinaryOp::Add, acc, term);
      std::size_t k = 0;
      while (k < cnt.size()) {
        if (++cnt[k] < extent[sum_names[k]]) break;
        cnt[k] = 0;
        ++k;
      }
      if (k == cnt.size() || cnt.empty()) break;
    }
    out[lin] = acc;
  }
  return out;
}

// Random all-named integer tensor; index extents are shared across one
// Einstein instance through `pinned`.
inline Tensor random_named_tensor(
    const std::vector<std::string>& pool,
    std::map<std::string, std::size_t>& pinned, int max_rank,
    int max_extent) {
  int rank = uniform_int(1, max_rank);
  std::vector<std::size_t> extents;
  std::vector<std::string> names;
  for (int k = 0; k < rank; ++k) {
    std::string n = pool[uniform_int(0, int(pool.size()) - 1)];
    std::size_t e;
    auto it = pinned.find(n);
    if (it != pinned.end()) {
      e = it->second;
    } else {
      e = uniform_int(1, max_extent);
      pinned[n] = e;
    }
    names.push_back(n);
    extents.push_back(e);
  }
  std::size_t size = 1;
  for (std::size_t e : extents) size *= e;
  std::vector<Scalar> data(size);
  for (Scalar& s : data) s = Scalar(double(uniform_int(-4, 4)));
  return Tensor(std::move(extents), std::move(names), std::move(data));
}

}  // namespace testsupport

#endif  // TESTS_SUPPORT_HELPERS_HPP
