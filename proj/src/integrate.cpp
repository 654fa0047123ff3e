#include "calcxx/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <stdexcept>

namespace calc {

namespace {

// Gauss-Legendre nodes/weights on (-1, 1)
const double kNodes7[] = {-0.9491079123427585, -0.7415311855993945,
                          -0.4058451513773972, 0.0,
                          0.4058451513773972,  0.7415311855993945,
                          0.9491079123427585};
const double kWeights7[] = {0.1294849661688697, 0.2797053914892766,
                            0.3818300505051189, 0.4179591836734694,
                            0.3818300505051189, 0.2797053914892766,
                            0.1294849661688697};
const double kNodes5[] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                          0.5384693101056831, 0.9061798459386640};
const double kWeights5[] = {0.2369268850561891, 0.4786286704993665,
                            0.5688888888888889, 0.4786286704993665,
                            0.2369268850561891};

struct FreeVar {
  std::string name;
  double lo;
  double hi;
};

using Evaluator = std::function<double(const std::vector<double>&)>;

double product_rule(const Evaluator& f, const std::vector<double>& lo,
                    const std::vector<double>& hi, const double* nodes,
                    const double* weights, std::size_t n,
                    std::size_t& evals) {
  const std::size_t d = lo.size();
  std::vector<double> mid(d), half(d);
  for (std::size_t k = 0; k < d; ++k) {
    mid[k] = 0.5 * (lo[k] + hi[k]);
    half[k] = 0.5 * (hi[k] - lo[k]);
  }
  std::vector<std::size_t> ctr(d, 0);
  std::vector<double> x(d);
  double acc = 0.0;
  for (;;) {
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = mid[k] + half[k] * nodes[ctr[k]];
      w *= weights[ctr[k]] * half[k];
    }
    acc += w * f(x);
    ++evals;
    std::size_t k = 0;
    while (k < d && ++ctr[k] == n) ctr[k++] = 0;
    if (k == d) break;
  }
  return acc;
}

struct Cell {
  std::vector<double> lo, hi;
  double value = 0.0;
  double err = 0.0;
};

Cell make_cell(const Evaluator& f, std::vector<double> lo,
               std::vector<double> hi, std::size_t& evals) {
  Cell c{std::move(lo), std::move(hi), 0.0, 0.0};
  double i7 = product_rule(f, c.lo, c.hi, kNodes7, kWeights7, 7, evals);
  double i5 = product_rule(f, c.lo, c.hi, kNodes5, kWeights5, 5, evals);
  c.value = i7;
  c.err = std::fabs(i7 - i5);
  return c;
}

bool cell_less(const Cell& a, const Cell& b) { return a.err < b.err; }

IntegralResult adaptive(const Evaluator& f, const std::vector<FreeVar>& vars,
                        const IntegralRequest& req) {
  const std::size_t d = vars.size();
  if (d > 6)
    throw std::invalid_argument(
        "the adaptive method supports at most 6 integrated variables");
  std::vector<double> lo, hi;
  for (const FreeVar& v : vars) {
    lo.push_back(v.lo);
    hi.push_back(v.hi);
  }

  IntegralResult res;
  res.method = "adaptive";
  std::vector<Cell> heap;
  heap.push_back(make_cell(f, lo, hi, res.evaluations));
  double value = heap[0].value, err = heap[0].err;

  auto tolerance = [&] {
    return std::max(req.abs_tol, req.rel_tol * std::fabs(value));
  };
  while (err > tolerance() && res.evaluations < req.max_evals) {
    std::pop_heap(heap.begin(), heap.end(), cell_less);
    Cell worst = std::move(heap.back());
    heap.pop_back();
    value -= worst.value;
    err -= worst.err;

    std::size_t axis = 0;
    for (std::size_t k = 1; k < d; ++k) {
      if (worst.hi[k] - worst.lo[k] > worst.hi[axis] - worst.lo[axis])
        axis = k;
    }
    double mid = 0.5 * (worst.lo[axis] + worst.hi[axis]);
    for (int side = 0; side < 2; ++side) {
      std::vector<double> clo = worst.lo, chi = worst.hi;
      (side == 0 ? chi : clo)[axis] = mid;
      heap.push_back(make_cell(f, std::move(clo), std::move(chi),
                               res.evaluations));
      value += heap.back().value;
      err += heap.back().err;
      std::push_heap(heap.begin(), heap.end(), cell_less);
    }
  }

  // exact re-sum: the incremental totals drift over many refinements
  value = 0.0;
  err = 0.0;
  for (const Cell& c : heap) {
    value += c.value;
    err += c.err;
  }
  res.value = value;
  res.error = err;
  res.converged = err <= std::max(req.abs_tol, req.rel_tol * std::fabs(value));
  return res;
}

IntegralResult monte_carlo(const Evaluator& f,
                           const std::vector<FreeVar>& vars,
                           const IntegralRequest& req) {
  IntegralResult res;
  res.method = "monte-carlo";

  std::uint64_t seed = 0x2545f4914f6cdd1dULL;
  if (req.seed) seed = *req.seed;
  if (const char* env = std::getenv("CALC_SEED")) {
    seed = std::strtoull(env, nullptr, 10);
  }
  res.seed = seed;

  double volume = 1.0;
  for (const FreeVar& v : vars) volume *= v.hi - v.lo;

  std::mt19937_64 gen(seed);
  const std::size_t d = vars.size();
  const std::size_t n = std::max<std::size_t>(2, req.samples);
  std::vector<double> x(d);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < d; ++k) {
      // open interval (0,1): bounds are never sampled
      double u = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
      x[k] = vars[k].lo + u * (vars[k].hi - vars[k].lo);
    }
    double v = f(x);
    double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  res.evaluations = n;
  res.value = volume * mean;
  double variance = m2 / static_cast<double>(n - 1);
  res.error = std::fabs(volume) * std::sqrt(std::max(0.0, variance) /
                                            static_cast<double>(n));
  return res;
}

}  // namespace

IntegralResult integral(const IntegralRequest& req) {
  if (req.bounds.empty())
    throw std::invalid_argument("no integration bounds given");
  std::vector<FreeVar> free_vars;
  std::vector<std::pair<std::string, double>> fixed;
  for (const auto& [name, b] : req.bounds) {
    if (!(b.lo <= b.hi))
      throw std::invalid_argument("bound for " + name +
                                  " has lower > upper");
    if (b.fixed())
      fixed.emplace_back(name, b.lo);
    else
      free_vars.push_back(FreeVar{name, b.lo, b.hi});
  }
  if (free_vars.empty())
    throw std::invalid_argument("all bounds are degenerate");

  // volume element of the chart, one factor per bound variable
  Scalar jac(1.0);
  if (!req.coords.factors.empty()) {
    if (req.coords.factors.size() != req.bounds.size())
      throw ShapeError("one scale factor per bound variable required");
    for (const Expr& h : req.coords.factors)
      jac = combine(BinaryOp::Mul, jac, Scalar(h));
  }

  auto substitute_fixed = [&](Scalar s) {
    if (s.is_number()) return s;
    Expr e = s.expr();
    for (const auto& [name, value] : fixed)
      e = substitute(e, name, Expr::constant(value));
    e = simplify_zero(e);
    if (e.is_constant()) return Scalar(e.constant_value());
    return Scalar(e);
  };

  Binding env;
  for (const auto& [name, value] : fixed) env[name] = value;

  Evaluator eval;
  jac = substitute_fixed(jac);
  if (req.fn) {
    eval = [&, jv = jac](const std::vector<double>& x) {
      for (std::size_t k = 0; k < free_vars.size(); ++k)
        env[free_vars[k].name] = x[k];
      double j = jv.is_number() ? jv.number() : evaluate(jv.expr(), env);
      double v = j * req.fn(env);
      if (!std::isfinite(v))
        throw EvalError("integrand is not finite inside the domain");
      return v;
    };
  } else {
    Scalar g = substitute_fixed(
        combine(BinaryOp::Mul, jac, req.integrand));
    if (g.is_number()) {
      eval = [gv = g.number()](const std::vector<double>&) { return gv; };
    } else {
      eval = [&, ge = g.expr()](const std::vector<double>& x) {
        for (std::size_t k = 0; k < free_vars.size(); ++k)
          env[free_vars[k].name] = x[k];
        bool bad = false;
        double v = evaluate(ge, env, &bad);
        if (bad || !std::isfinite(v))
          throw EvalError("integrand is not finite inside the domain");
        return v;
      };
    }
  }

  IntegralMethod method = req.method.value_or(
      free_vars.size() <= 6 ? IntegralMethod::Adaptive
                            : IntegralMethod::MonteCarlo);
  return method == IntegralMethod::Adaptive
             ? adaptive(eval, free_vars, req)
             : monte_carlo(eval, free_vars, req);
}

IntegralResult surface_integral_fixed(const IntegralRequest& req) {
  bool has_fixed = false;
  for (const auto& [name, b] : req.bounds) has_fixed |= b.fixed();
  if (!has_fixed)
    throw std::invalid_argument(
        "a surface integral needs a fixed coordinate");
  return integral(req);
}

}  // namespace calc
