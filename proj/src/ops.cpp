#include "calcxx/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace calc {

CoordinateSystem coordinate_system(const std::string& name,
                                   const std::vector<std::string>& vars) {
  auto var = [&](std::size_t i) { return Expr::variable(vars[i]); };
  auto need = [&](std::size_t d) {
    if (vars.size() != d)
      throw std::invalid_argument(name + " coordinates need " +
                                  std::to_string(d) + " variables");
  };
  CoordinateSystem cs;
  cs.name = name;
  if (name == "cartesian") {
    if (vars.empty())
      throw std::invalid_argument("cartesian coordinates need variables");
    cs.factors.assign(vars.size(), Expr::constant(1.0));
  } else if (name == "polar") {
    need(2);
    cs.factors = {Expr::constant(1.0), var(0)};
  } else if (name == "cylindrical") {
    need(3);
    cs.factors = {Expr::constant(1.0), var(0), Expr::constant(1.0)};
  } else if (name == "spherical") {
    need(3);
    cs.factors = {Expr::constant(1.0), var(0),
                  Expr::binary(BinaryOp::Mul, var(0),
                               Expr::apply("sin", {var(1)}))};
  } else if (name == "parabolic" || name == "parabolic-cylindrical") {
    need(3);
    Expr s = Expr::apply(
        "sqrt",
        {Expr::binary(
            BinaryOp::Add,
            Expr::binary(BinaryOp::Pow, var(0), Expr::constant(2.0)),
            Expr::binary(BinaryOp::Pow, var(1), Expr::constant(2.0)))});
    Expr last = name == "parabolic"
                    ? Expr::binary(BinaryOp::Mul, var(0), var(1))
                    : Expr::constant(1.0);
    cs.factors = {s, s, last};
  } else {
    throw std::invalid_argument("unknown coordinate system: " + name);
  }
  return cs;
}

CoordinateSystem custom_coordinates(std::vector<Expr> factors) {
  if (factors.empty())
    throw std::invalid_argument("at least one scale factor required");
  return CoordinateSystem{"custom", std::move(factors)};
}

namespace {

struct OpSetup {
  std::vector<std::string> vars;
  std::vector<Scalar> h;
  Scalar jac{1.0};
};

OpSetup make_setup(const std::vector<std::string>& vars,
                   const CoordinateSystem& coords) {
  if (vars.empty()) throw std::invalid_argument("at least one variable");
  OpSetup s;
  s.vars = vars;
  if (coords.factors.empty()) {
    s.h.assign(vars.size(), Scalar(1.0));
  } else {
    if (coords.factors.size() != vars.size())
      throw ShapeError("one scale factor per variable required");
    for (const Expr& e : coords.factors) s.h.emplace_back(e);
  }
  for (const Scalar& hi : s.h) s.jac = combine(BinaryOp::Mul, s.jac, hi);
  return s;
}

Scalar diff_scalar(const Scalar& s, const std::string& var) {
  if (s.is_number()) return Scalar(0.0);
  return Scalar(diff(s.expr(), var));
}

Binding bind_point(const std::vector<std::string>& vars,
                   const std::vector<double>& point) {
  if (point.size() != vars.size())
    throw ShapeError("one coordinate per variable required");
  Binding env;
  for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = point[i];
  return env;
}

double value_at(const Scalar& s, const Binding& env, const char* what) {
  double v = evaluate(s, env);
  if (!std::isfinite(v))
    throw EvalError(std::string(what) + " is not finite at the point");
  return v;
}

// evaluated scale factors; 0 marks a singular chart point
std::vector<double> factor_values(const OpSetup& s, const Binding& env) {
  std::vector<double> out;
  for (const Scalar& hi : s.h) {
    double v = value_at(hi, env, "scale factor");
    if (v == 0.0)
      throw EvalError("coordinate chart is singular at the point");
    out.push_back(v);
  }
  return out;
}

std::size_t flat_size(const std::vector<std::size_t>& extents) {
  std::size_t n = 1;
  for (std::size_t e : extents) n *= e;
  return n;
}

Tensor shaped(std::vector<std::size_t> extents, std::vector<std::string> names,
              std::vector<Scalar> data) {
  if (extents.empty()) return Tensor(std::move(data[0]));
  if (names.empty()) names.assign(extents.size(), "");
  return make_tensor(std::move(extents), std::move(names), std::move(data));
}

// flat first partials of all field components: entry [q + i*L] is
// d f_q / d q_i, shared by every numeric operator below
std::vector<double> flat_jacobian(const Field& F,
                                  const std::vector<double>& point,
                                  std::size_t d, std::size_t L,
                                  int accuracy) {
  if (!F.fn) throw std::invalid_argument("empty field callable");
  if (F.fn(point).size() != L)
    throw ShapeError("field extents do not match the callable output");
  Tensor jd = derivative_numeric(F.fn, point, std::vector<int>{1}, accuracy);
  if (jd.data().size() != L * d)
    throw ShapeError("field extents do not match the callable output");
  std::vector<double> out(L * d);
  for (std::size_t q = 0; q < L * d; ++q) out[q] = jd[q].number();
  return out;
}

void require_vector_axis(const Tensor& F, std::size_t d) {
  if (F.rank() == 0 || F.extents().back() != d)
    throw ShapeError("trailing axis extent must match the variable count");
}

void require_vector_axis(const Field& F, std::size_t d) {
  if (F.extents.empty() || F.extents.back() != d)
    throw ShapeError("trailing axis extent must match the variable count");
}

bool all_unit_factors(const CoordinateSystem& coords) {
  if (coords.factors.empty()) return true;
  for (const Expr& e : coords.factors) {
    if (!variables_of(e).empty()) return false;
    if (evaluate(e, {}) != 1.0) return false;
  }
  return true;
}

void require_cartesian(const CoordinateSystem& coords) {
  if (coords.name != "cartesian" && !all_unit_factors(coords))
    throw std::invalid_argument(
        "second derivatives are supported in cartesian coordinates only");
}

std::vector<std::string> appended_names(const std::vector<std::string>& base,
                                        std::size_t count) {
  std::vector<std::string> names = base;
  names.insert(names.end(), count, "");
  return names;
}

}  // namespace

Tensor gradient(const Tensor& F, const std::vector<std::string>& vars,
                const CoordinateSystem& coords) {
  OpSetup s = make_setup(vars, coords);
  const std::size_t d = vars.size();
  const std::size_t L = F.data().size();
  std::vector<Scalar> out(L * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t c = 0; c < L; ++c) {
      out[c + i * L] =
          combine(BinaryOp::Div, diff_scalar(F[c], vars[i]), s.h[i]);
    }
  }
  std::vector<std::size_t> ext = F.extents();
  ext.push_back(d);
  return shaped(std::move(ext), appended_names(F.names(), 1), std::move(out));
}

Tensor gradient(const Field& F, const std::vector<std::string>& vars,
                const std::vector<double>& point,
                const CoordinateSystem& coords, int accuracy) {
  OpSetup s = make_setup(vars, coords);
  Binding env = bind_point(vars, point);
  std::vector<double> hv = factor_values(s, env);
  const std::size_t d = vars.size();
  const std::size_t L = flat_size(F.extents);
  std::vector<double> jd = flat_jacobian(F, point, d, L, accuracy);
  std::vector<Scalar> out(L * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t c = 0; c < L; ++c) {
      out[c + i * L] = Scalar(jd[c + i * L] / hv[i]);
    }
  }
  std::vector<std::size_t> ext = F.extents;
  ext.push_back(d);
  return shaped(std::move(ext), {}, std::move(out));
}

Tensor jacobian(const Tensor& F, const std::vector<std::string>& vars,
                const CoordinateSystem& coords) {
  Tensor g = gradient(F, vars, coords);
  if (F.rank() == 0) return g.reshaped({1, vars.size()});
  return g;
}

Tensor jacobian(const Field& F, const std::vector<std::string>& vars,
                const std::vector<double>& point,
                const CoordinateSystem& coords, int accuracy) {
  Tensor g = gradient(F, vars, point, coords, accuracy);
  if (F.extents.empty()) return g.reshaped({1, vars.size()});
  return g;
}

Tensor hessian(const Tensor& F, const std::vector<std::string>& vars,
               const CoordinateSystem& coords) {
  require_cartesian(coords);
  return gradient(gradient(F, vars, {}), vars, {});
}

Tensor hessian(const Field& F, const std::vector<std::string>& vars,
               const std::vector<double>& point,
               const CoordinateSystem& coords, int accuracy) {
  require_cartesian(coords);
  bind_point(vars, point);
  if (!F.fn) throw std::invalid_argument("empty field callable");
  const std::size_t m = vars.size();
  const std::size_t L = flat_size(F.extents);
  if (F.fn(point).size() != L)
    throw ShapeError("field extents do not match the callable output");
  std::vector<Scalar> out(L * m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      std::vector<int> ord(m, 0);
      ++ord[i];
      ++ord[j];
      Tensor dd = derivative_numeric(F.fn, point, ord, accuracy);
      for (std::size_t c = 0; c < L; ++c) {
        double v = dd[c].number();
        out[c + (i + j * m) * L] = Scalar(v);
        out[c + (j + i * m) * L] = Scalar(v);
      }
    }
  }
  std::vector<std::size_t> ext = F.extents;
  ext.push_back(m);
  ext.push_back(m);
  return shaped(std::move(ext), {}, std::move(out));
}

Tensor divergence(const Tensor& F, const std::vector<std::string>& vars,
                  const CoordinateSystem& coords) {
  OpSetup s = make_setup(vars, coords);
  const std::size_t d = vars.size();
  require_vector_axis(F, d);
  const std::size_t L = F.data().size() / d;
  std::vector<Scalar> g(d), w(d);
  for (std::size_t i = 0; i < d; ++i) {
    g[i] = combine(BinaryOp::Div, s.jac, s.h[i]);
    w[i] = diff_scalar(g[i], vars[i]);
  }
  std::vector<Scalar> out(L);
  for (std::size_t c = 0; c < L; ++c) {
    Scalar acc(0.0);
    for (std::size_t i = 0; i < d; ++i) {
      const Scalar& Fi = F[c + i * L];
      acc = combine(BinaryOp::Add, acc, combine(BinaryOp::Mul, w[i], Fi));
      acc = combine(BinaryOp::Add, acc,
                    combine(BinaryOp::Mul, g[i], diff_scalar(Fi, vars[i])));
    }
    out[c] = combine(BinaryOp::Div, acc, s.jac);
  }
  std::vector<std::size_t> ext(F.extents().begin(), F.extents().end() - 1);
  std::vector<std::string> names(F.names().begin(), F.names().end() - 1);
  return shaped(std::move(ext), std::move(names), std::move(out));
}

Tensor divergence(const Field& F, const std::vector<std::string>& vars,
                  const std::vector<double>& point,
                  const CoordinateSystem& coords, int accuracy) {
  OpSetup s = make_setup(vars, coords);
  Binding env = bind_point(vars, point);
  std::vector<double> hv = factor_values(s, env);
  const std::size_t d = vars.size();
  require_vector_axis(F, d);
  const std::size_t total = flat_size(F.extents);
  const std::size_t L = total / d;
  double jv = value_at(s.jac, env, "volume element");
  std::vector<double> gv(d), wv(d);
  for (std::size_t i = 0; i < d; ++i) {
    Scalar g = combine(BinaryOp::Div, s.jac, s.h[i]);
    gv[i] = value_at(g, env, "scale factor");
    wv[i] = value_at(diff_scalar(g, vars[i]), env, "scale factor derivative");
  }
  std::vector<double> values = F.fn ? F.fn(point) : std::vector<double>{};
  std::vector<double> jd = flat_jacobian(F, point, d, total, accuracy);
  std::vector<Scalar> out(L);
  for (std::size_t c = 0; c < L; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      std::size_t q = c + i * L;
      acc += wv[i] * values[q] + gv[i] * jd[q + i * total];
    }
    out[c] = Scalar(acc / jv);
  }
  std::vector<std::size_t> ext(F.extents.begin(), F.extents.end() - 1);
  return shaped(std::move(ext), {}, std::move(out));
}

Tensor curl(const Tensor& F, const std::vector<std::string>& vars,
            const CoordinateSystem& coords) {
  OpSetup s = make_setup(vars, coords);
  const std::size_t d = vars.size();
  if (d < 2)
    throw std::invalid_argument("curl needs at least two variables");
  require_vector_axis(F, d);
  const std::size_t m = d - 2;
  const std::size_t L = F.data().size() / d;

  std::vector<std::vector<Scalar>> inv(d, std::vector<Scalar>(d));
  std::vector<std::vector<Scalar>> dh(d, std::vector<Scalar>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      inv[i][j] = combine(BinaryOp::Div, Scalar(1.0),
                          combine(BinaryOp::Mul, s.h[i], s.h[j]));
      dh[i][j] = diff_scalar(s.h[j], vars[i]);
    }
  }

  std::size_t K = 1;
  for (std::size_t t = 0; t < m; ++t) K *= d;
  std::vector<Scalar> out(L * K, Scalar(0.0));

  Tensor eps = epsilon(d);
  for (std::size_t lin = 0; lin < eps.data().size(); ++lin) {
    double sgn = eps[lin].number();
    if (sgn == 0.0) continue;
    std::vector<std::size_t> mi = eps.multi_index(lin);
    const std::size_t i = mi[0], j = mi[1];
    std::size_t kflat = 0, stride = 1;
    for (std::size_t t = 2; t < d; ++t) {
      kflat += mi[t] * stride;
      stride *= d;
    }
    for (std::size_t c = 0; c < L; ++c) {
      const Scalar& Fj = F[c + j * L];
      Scalar bracket =
          combine(BinaryOp::Add, combine(BinaryOp::Mul, dh[i][j], Fj),
                  combine(BinaryOp::Mul, s.h[j], diff_scalar(Fj, vars[i])));
      Scalar term = combine(BinaryOp::Mul, Scalar(sgn),
                            combine(BinaryOp::Mul, inv[i][j], bracket));
      std::size_t o = c + kflat * L;
      out[o] = combine(BinaryOp::Add, out[o], term);
    }
  }

  std::vector<std::size_t> ext(F.extents().begin(), F.extents().end() - 1);
  std::vector<std::string> names(F.names().begin(), F.names().end() - 1);
  ext.insert(ext.end(), m, d);
  names.insert(names.end(), m, "");
  return shaped(std::move(ext), std::move(names), std::move(out));
}

Tensor curl(const Field& F, const std::vector<std::string>& vars,
            const std::vector<double>& point, const CoordinateSystem& coords,
            int accuracy) {
  OpSetup s = make_setup(vars, coords);
  Binding env = bind_point(vars, point);
  std::vector<double> hv = factor_values(s, env);
  const std::size_t d = vars.size();
  if (d < 2)
    throw std::invalid_argument("curl needs at least two variables");
  require_vector_axis(F, d);
  const std::size_t m = d - 2;
  const std::size_t total = flat_size(F.extents);
  const std::size_t L = total / d;

  std::vector<std::vector<double>> dhv(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      dhv[i][j] = value_at(diff_scalar(s.h[j], vars[i]), env,
                           "scale factor derivative");
    }
  }
  std::vector<double> values = F.fn ? F.fn(point) : std::vector<double>{};
  std::vector<double> jd = flat_jacobian(F, point, d, total, accuracy);

  std::size_t K = 1;
  for (std::size_t t = 0; t < m; ++t) K *= d;
  std::vector<double> acc(L * K, 0.0);

  Tensor eps = epsilon(d);
  for (std::size_t lin = 0; lin < eps.data().size(); ++lin) {
    double sgn = eps[lin].number();
    if (sgn == 0.0) continue;
    std::vector<std::size_t> mi = eps.multi_index(lin);
    const std::size_t i = mi[0], j = mi[1];
    std::size_t kflat = 0, stride = 1;
    for (std::size_t t = 2; t < d; ++t) {
      kflat += mi[t] * stride;
      stride *= d;
    }
    for (std::size_t c = 0; c < L; ++c) {
      std::size_t q = c + j * L;
      double bracket = dhv[i][j] * values[q] + hv[j] * jd[q + i * total];
      acc[c + kflat * L] += sgn / (hv[i] * hv[j]) * bracket;
    }
  }

  std::vector<Scalar> out(acc.begin(), acc.end());
  std::vector<std::size_t> ext(F.extents.begin(), F.extents.end() - 1);
  ext.insert(ext.end(), m, d);
  return shaped(std::move(ext), {}, std::move(out));
}

Tensor laplacian(const Tensor& F, const std::vector<std::string>& vars,
                 const CoordinateSystem& coords) {
  OpSetup s = make_setup(vars, coords);
  const std::size_t d = vars.size();
  const std::size_t L = F.data().size();
  std::vector<Scalar> g(d), w(d);
  for (std::size_t i = 0; i < d; ++i) {
    g[i] = combine(BinaryOp::Div, combine(BinaryOp::Div, s.jac, s.h[i]),
                   s.h[i]);
    w[i] = diff_scalar(g[i], vars[i]);
  }
  std::vector<Scalar> out(L);
  for (std::size_t c = 0; c < L; ++c) {
    Scalar acc(0.0);
    for (std::size_t i = 0; i < d; ++i) {
      Scalar d1 = diff_scalar(F[c], vars[i]);
      Scalar d2 = diff_scalar(d1, vars[i]);
      acc = combine(BinaryOp::Add, acc, combine(BinaryOp::Mul, w[i], d1));
      acc = combine(BinaryOp::Add, acc, combine(BinaryOp::Mul, g[i], d2));
    }
    out[c] = combine(BinaryOp::Div, acc, s.jac);
  }
  return shaped(F.extents(), F.names(), std::move(out));
}

Tensor laplacian(const Field& F, const std::vector<std::string>& vars,
                 const std::vector<double>& point,
                 const CoordinateSystem& coords, int accuracy) {
  OpSetup s = make_setup(vars, coords);
  Binding env = bind_point(vars, point);
  factor_values(s, env);
  const std::size_t d = vars.size();
  const std::size_t L = flat_size(F.extents);
  if (!F.fn) throw std::invalid_argument("empty field callable");
  if (F.fn(point).size() != L)
    throw ShapeError("field extents do not match the callable output");
  double jv = value_at(s.jac, env, "volume element");
  std::vector<double> acc(L, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    Scalar g = combine(BinaryOp::Div,
                       combine(BinaryOp::Div, s.jac, s.h[i]), s.h[i]);
    double gv = value_at(g, env, "scale factor");
    double wv =
        value_at(diff_scalar(g, vars[i]), env, "scale factor derivative");
    std::vector<int> o1(d, 0), o2(d, 0);
    o1[i] = 1;
    o2[i] = 2;
    Tensor d1 = derivative_numeric(F.fn, point, o1, accuracy);
    Tensor d2 = derivative_numeric(F.fn, point, o2, accuracy);
    for (std::size_t c = 0; c < L; ++c) {
      acc[c] += wv * d1[c].number() + gv * d2[c].number();
    }
  }
  std::vector<Scalar> out;
  for (double v : acc) out.emplace_back(v / jv);
  return shaped(F.extents, {}, std::move(out));
}

}  // namespace calc
