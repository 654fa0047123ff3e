#include "calcxx/deriv.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace calc {

double factorial(int n) {
  if (n < 0 || n > 20)
    throw std::invalid_argument("factorial defined for 0 <= n <= 20");
  unsigned long long f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<unsigned long long>(k);
  return static_cast<double>(f);
}

Stencil fd_coefficients(int n, int p) {
  if (n < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (p < 2 || p % 2 != 0)
    throw std::invalid_argument("accuracy must be a positive even integer");
  if (n == 0) return Stencil{0, p, {0}, {1.0}};

  const int i = (n + p - 1) / 2;
  const int size = 2 * i + 1;
  Eigen::MatrixXd moments(size, size);
  for (int m = 0; m < size; ++m) {
    for (int c = 0; c < size; ++c) {
      moments(m, c) = std::pow(static_cast<double>(c - i), m);
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs(n) = 1.0;
  Eigen::VectorXd coef = moments.partialPivLu().solve(rhs);

  Stencil st{n, p, {}, {}};
  for (int c = 0; c < size; ++c) {
    st.offsets.push_back(c - i);
    st.coefficients.push_back(coef(c));
  }
  return st;
}

namespace {

// Variables that survive zero-order stripping, with their orders and
// whether the request asks for one output slice per variable.
struct Plan {
  std::vector<std::string> vars;
  std::vector<int> orders;
  bool outer = false;
  int outer_order = 1;
};

Plan resolve_plan(const DerivativeRequest& req) {
  if (req.variables.empty())
    throw std::invalid_argument("at least one variable required");
  std::vector<int> orders;
  if (!req.named_order.empty()) {
    orders.assign(req.variables.size(), 0);
    for (const auto& [name, n] : req.named_order) {
      auto it =
          std::find(req.variables.begin(), req.variables.end(), name);
      if (it == req.variables.end())
        throw std::invalid_argument("order given for unknown variable: " +
                                    name);
      orders[static_cast<std::size_t>(it - req.variables.begin())] = n;
    }
  } else {
    orders = req.order;
  }
  for (int n : orders) {
    if (n < 0) throw std::invalid_argument("derivative order must be >= 0");
  }

  Plan plan;
  if (orders.size() == 1 && req.variables.size() > 1) {
    plan.outer = orders[0] > 0;
    plan.outer_order = orders[0];
    if (plan.outer) plan.vars = req.variables;
    return plan;
  }
  if (orders.size() != req.variables.size())
    throw std::invalid_argument(
        "order must hold one entry or one entry per variable");
  for (std::size_t k = 0; k < orders.size(); ++k) {
    if (orders[k] > 0) {
      plan.vars.push_back(req.variables[k]);
      plan.orders.push_back(orders[k]);
    }
  }
  return plan;
}

double default_step(int n, int p, double x) {
  double eps = std::numeric_limits<double>::epsilon();
  return std::pow(eps, 1.0 / (n + p)) * std::max(1.0, std::fabs(x));
}

double resolved_step(const DerivativeRequest& req, const std::string& var,
                     int n, double x) {
  auto it = req.steps.find(var);
  double h = (it != req.steps.end()) ? it->second
                                     : default_step(n, req.accuracy, x);
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  return h;
}

double point_coordinate(const Binding& point, const std::string& var) {
  auto it = point.find(var);
  if (it == point.end())
    throw std::invalid_argument("evaluation point does not bind " + var);
  return it->second;
}

// Runs one mixed-partial stencil: sweeps the tensor-product offset grid
// in a fixed order, weights the samples, applies the n!/h^n scaling.
double fd_mixed(const std::vector<Stencil>& st, const std::vector<double>& h,
                const std::vector<double>& center,
                const std::function<double(const std::vector<double>&)>& f) {
  std::vector<double> shifted = center;
  std::vector<std::size_t> cnt(st.size(), 0);
  double sum = 0.0;
  for (;;) {
    double w = 1.0;
    for (std::size_t k = 0; k < st.size(); ++k) {
      shifted[k] = center[k] + st[k].offsets[cnt[k]] * h[k];
      w *= st[k].coefficients[cnt[k]];
    }
    double v = f(shifted);
    if (!std::isfinite(v))
      throw EvalError("non-finite value in the finite-difference grid");
    sum += w * v;
    std::size_t k = 0;
    while (k < cnt.size() && ++cnt[k] == st[k].offsets.size()) {
      cnt[k] = 0;
      ++k;
    }
    if (k == cnt.size()) break;
  }
  double scale = 1.0;
  for (std::size_t k = 0; k < st.size(); ++k)
    scale *= factorial(st[k].order) / std::pow(h[k], st[k].order);
  return sum * scale;
}

// Shared numeric driver over an abstract component evaluator.
Tensor numeric_derivative(
    const DerivativeRequest& req, const std::vector<std::size_t>& f_extents,
    std::size_t components,
    const std::function<double(std::size_t, const Binding&)>& component_at) {
  Plan plan = resolve_plan(req);
  if (req.accuracy < 2 || req.accuracy % 2 != 0)
    throw std::invalid_argument("accuracy must be a positive even integer");

  auto run_block = [&](const std::vector<std::string>& vars,
                       const std::vector<int>& orders,
                       std::vector<Scalar>& out, std::size_t base) {
    std::vector<Stencil> st;
    std::vector<double> h, center;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      st.push_back(fd_coefficients(orders[k], req.accuracy));
      double x = point_coordinate(req.point, vars[k]);
      center.push_back(x);
      h.push_back(resolved_step(req, vars[k], orders[k], x));
    }
    for (std::size_t c = 0; c < components; ++c) {
      Binding env = req.point;
      auto f = [&](const std::vector<double>& shifted) {
        for (std::size_t k = 0; k < vars.size(); ++k)
          env[vars[k]] = shifted[k];
        return component_at(c, env);
      };
      out[base + c] = fd_mixed(st, h, center, f);
    }
  };

  if (plan.outer) {
    std::size_t m = plan.vars.size();
    std::vector<std::size_t> extents = f_extents;
    extents.push_back(m);
    std::vector<Scalar> out(components * m);
    for (std::size_t k = 0; k < m; ++k) {
      run_block({plan.vars[k]}, {plan.outer_order}, out, k * components);
    }
    return Tensor(std::move(extents), {}, std::move(out));
  }

  std::vector<Scalar> out(components);
  run_block(plan.vars, plan.orders, out, 0);
  return Tensor(f_extents, {}, std::move(out));
}

}  // namespace

Tensor derivative_numeric(const Tensor& f, const DerivativeRequest& req) {
  return numeric_derivative(
      req, f.extents(), f.size(),
      [&](std::size_t c, const Binding& env) {
        bool bad = false;
        double v = evaluate(f[c], env, &bad);
        return bad ? std::numeric_limits<double>::quiet_NaN() : v;
      });
}

Tensor derivative_numeric(const ScalarFn& f, const DerivativeRequest& req) {
  return numeric_derivative(
      req, {}, 1,
      [&](std::size_t, const Binding& env) { return f(env); });
}

Tensor derivative_numeric(const VectorFn& f, const std::vector<double>& x0,
                          const std::vector<int>& order, int accuracy,
                          const std::vector<double>& steps) {
  if (x0.empty()) throw std::invalid_argument("empty evaluation point");
  if (!steps.empty() && steps.size() != x0.size())
    throw std::invalid_argument("one step size per coordinate required");

  DerivativeRequest req;
  for (std::size_t k = 0; k < x0.size(); ++k) {
    std::string name = "x" + std::to_string(k + 1);
    req.variables.push_back(name);
    req.point[name] = x0[k];
    if (!steps.empty()) req.steps[name] = steps[k];
  }
  req.order = order;
  req.accuracy = accuracy;

  std::size_t L = f(x0).size();
  if (L == 0) throw std::invalid_argument("target returned no components");

  auto component_at = [&](std::size_t c, const Binding& env) {
    std::vector<double> x(x0.size());
    for (std::size_t k = 0; k < x.size(); ++k)
      x[k] = env.at(req.variables[k]);
    std::vector<double> v = f(x);
    if (v.size() != L) throw EvalError("target changed component count");
    return v[c];
  };

  std::vector<std::size_t> extents;
  if (L > 1) extents.push_back(L);
  return numeric_derivative(req, extents, L, component_at);
}

Tensor derivative_symbolic(const Tensor& f, const DerivativeRequest& req) {
  Plan plan = resolve_plan(req);

  auto diff_n = [](Expr e, const std::string& var, int n) {
    for (int k = 0; k < n; ++k) e = diff(e, var);
    return e;
  };
  auto pack = [&](Expr e) -> Scalar {
    if (!req.point.empty()) return Scalar(evaluate(e, req.point));
    if (e.is_constant()) return Scalar(e.constant_value());
    return Scalar(std::move(e));
  };

  if (plan.outer) {
    std::size_t m = plan.vars.size();
    std::vector<std::size_t> extents = f.extents();
    extents.push_back(m);
    std::vector<Scalar> out(f.size() * m);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t c = 0; c < f.size(); ++c) {
        out[k * f.size() + c] =
            pack(diff_n(f[c].as_expr(), plan.vars[k], plan.outer_order));
      }
    }
    return Tensor(std::move(extents), {}, std::move(out));
  }

  std::vector<Scalar> out(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    Expr e = f[c].as_expr();
    for (std::size_t k = 0; k < plan.vars.size(); ++k)
      e = diff_n(e, plan.vars[k], plan.orders[k]);
    out[c] = pack(std::move(e));
  }
  return Tensor(f.extents(), {}, std::move(out));
}

}  // namespace calc
