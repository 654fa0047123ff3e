#include "calcxx/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace calc {

namespace {

// Canonical partitions of exactly n into at most maxparts parts, each
// part <= maxpart, non-increasing.
void exact_partitions(int n, int maxparts, int maxpart,
                      std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  if (maxparts == 0) return;
  for (int p = std::min(n, maxpart); p >= 1; --p) {
    cur.push_back(p);
    exact_partitions(n - p, maxparts - 1, p, cur, out);
    cur.pop_back();
  }
}

int total_of(const std::vector<int>& k) {
  int t = 0;
  for (int v : k) t += v;
  return t;
}

bool ordered_before(const std::vector<int>& a, const std::vector<int>& b) {
  int ta = total_of(a), tb = total_of(b);
  if (ta != tb) return ta < tb;
  return a < b;
}

}  // namespace

std::vector<std::vector<int>> partitions(int n, int length, bool fill,
                                         bool perm, bool equal) {
  if (n < 0) throw std::invalid_argument("partitions of a negative integer");
  if (length < 1) throw std::invalid_argument("length must be positive");

  std::vector<std::vector<int>> base;
  std::vector<int> cur;
  if (equal) {
    exact_partitions(n, length, n, cur, base);
  } else {
    for (int m = 0; m <= n; ++m) exact_partitions(m, length, m, cur, base);
  }

  std::vector<std::vector<int>> out;
  for (std::vector<int> part : base) {
    if (fill) part.resize(length, 0);
    if (perm) {
      std::sort(part.begin(), part.end());
      do {
        out.push_back(part);
      } while (std::next_permutation(part.begin(), part.end()));
    } else {
      out.push_back(part);
    }
  }
  std::sort(out.begin(), out.end(), ordered_before);
  return out;
}

namespace {

double center_of(const Binding& center, const std::string& var) {
  auto it = center.find(var);
  return it == center.end() ? 0.0 : it->second;
}

std::string term_label(const std::vector<std::string>& vars,
                       const Binding& center, const std::vector<int>& k) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (k[i] == 0) continue;
    double c = center_of(center, vars[i]);
    std::string factor;
    if (c == 0.0) {
      factor = vars[i];
    } else if (c > 0.0) {
      factor = "(" + vars[i] + "-" + to_string(Scalar(c)) + ")";
    } else {
      factor = "(" + vars[i] + "+" + to_string(Scalar(-c)) + ")";
    }
    factor += "^" + std::to_string(k[i]);
    if (!out.empty()) out += "*";
    out += factor;
  }
  return out.empty() ? "1" : out;
}

Expr assemble_terms(const std::vector<SeriesTerm>& terms,
                    const std::vector<std::string>& vars,
                    const Binding& center) {
  Scalar acc(0.0);
  for (const SeriesTerm& term : terms) {
    if (term.coefficient == 0.0) continue;
    Scalar t(term.coefficient);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (term.degree[i] == 0) continue;
      double c = center_of(center, vars[i]);
      Scalar base(Expr::variable(vars[i]));
      if (c != 0.0) base = combine(BinaryOp::Sub, base, Scalar(c));
      t = combine(BinaryOp::Mul, t,
                  combine(BinaryOp::Pow, base,
                          Scalar(static_cast<double>(term.degree[i]))));
    }
    acc = combine(BinaryOp::Add, acc, t);
  }
  return acc.as_expr();
}

SeriesResult build_series(
    const std::vector<std::string>& vars, const Binding& center, int order,
    const std::function<double(const std::vector<int>&)>& derivative_at) {
  if (vars.empty()) throw std::invalid_argument("at least one variable");
  if (order < 0) throw std::invalid_argument("expansion order must be >= 0");

  SeriesResult res;
  res.order = order;
  res.variables = vars;
  res.center = center;
  for (const std::vector<int>& k :
       partitions(order, static_cast<int>(vars.size()), true, true, false)) {
    double value = derivative_at(k);
    if (!std::isfinite(value))
      throw EvalError("non-finite derivative at the expansion center");
    double kfact = 1.0;
    for (int d : k) kfact *= factorial(d);
    res.terms.push_back(SeriesTerm{term_label(vars, center, k),
                                   value / kfact, k, total_of(k)});
  }
  res.f = assemble_terms(res.terms, vars, center);
  return res;
}

Binding full_center(const std::vector<std::string>& vars,
                    const Binding& center) {
  Binding env = center;
  for (const std::string& v : vars) {
    if (!env.count(v)) env[v] = 0.0;
  }
  return env;
}

}  // namespace

SeriesResult taylor(const Expr& f, const std::vector<std::string>& vars,
                    const Binding& center, int order) {
  Binding env = full_center(vars, center);
  return build_series(vars, center, order, [&](const std::vector<int>& k) {
    Expr d = f;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (int t = 0; t < k[i]; ++t) d = diff(d, vars[i]);
    }
    bool bad = false;
    double v = evaluate(d, env, &bad);
    return bad ? std::numeric_limits<double>::quiet_NaN() : v;
  });
}

SeriesResult taylor(const ScalarFn& f, const std::vector<std::string>& vars,
                    const Binding& center, int order, int accuracy) {
  Binding env = full_center(vars, center);
  return build_series(vars, center, order, [&](const std::vector<int>& k) {
    DerivativeRequest req;
    req.variables = vars;
    req.order = k;
    req.point = env;
    req.accuracy = accuracy;
    return derivative_numeric(f, req)[0].number();
  });
}

std::map<std::vector<int>, SeriesResult> hermite(const HermiteRequest& req) {
  const std::vector<std::string>& vars = req.variables;
  const std::size_t d = vars.size();
  if (d == 0) throw std::invalid_argument("at least one variable");

  std::vector<std::vector<double>> sigma = req.sigma;
  if (sigma.empty()) {
    sigma.assign(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) sigma[i][i] = 1.0;
  }
  if (sigma.size() != d)
    throw std::invalid_argument("sigma dimension does not match variables");
  for (const auto& row : sigma) {
    if (row.size() != d)
      throw std::invalid_argument("sigma must be square");
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (std::fabs(sigma[i][j] - sigma[j][i]) > 1e-12)
        throw std::invalid_argument("sigma must be symmetric");
    }
  }

  int total = 0;
  if (req.order.size() == 1) {
    total = req.order[0];
  } else if (req.order.size() == d) {
    total = total_of(req.order);
  } else {
    throw std::invalid_argument("order must hold one entry or one per variable");
  }
  for (int n : req.order) {
    if (n < 0) throw std::invalid_argument("order entries must be >= 0");
  }

  bool integral_sigma = true;
  for (const auto& row : sigma) {
    for (double s : row) {
      if (s != std::floor(s)) integral_sigma = false;
    }
  }

  // kernel exp(-x' sigma x / 2); the exact subtree is reused so it can
  // be dropped structurally after differentiation
  Scalar quad(0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Scalar term = combine(
          BinaryOp::Mul,
          combine(BinaryOp::Mul, Scalar(sigma[i][j]),
                  Scalar(Expr::variable(vars[i]))),
          Scalar(Expr::variable(vars[j])));
      quad = combine(BinaryOp::Add, quad, term);
    }
  }
  Expr kernel = Expr::apply(
      "exp", {combine(BinaryOp::Mul, Scalar(-0.5), quad).as_expr()});

  Binding center0;
  for (const std::string& v : vars) center0[v] = 0.0;

  auto finish = [&](SeriesResult sr) {
    if (integral_sigma) {
      for (SeriesTerm& term : sr.terms) {
        double r = std::round(term.coefficient);
        if (std::fabs(term.coefficient - r) <= 1e-9) term.coefficient = r;
      }
      sr.f = assemble_terms(sr.terms, vars, center0);
    }
    return sr;
  };

  std::map<std::vector<int>, SeriesResult> out;
  std::vector<int> zero(d, 0);
  out[zero] = finish(taylor(Expr::constant(1.0), vars, center0, 0));

  for (int level = 1; level <= total; ++level) {
    for (const std::vector<int>& k :
         partitions(level, static_cast<int>(d), true, true, true)) {
      std::size_t i = 0;
      while (k[i] == 0) ++i;
      std::vector<int> pred = k;
      --pred[i];

      Expr e = Expr::binary(BinaryOp::Mul, out.at(pred).f, kernel);
      e = diff(e, vars[i]);
      e = simplify_zero(Expr::negate(e));
      e = replace_subtree(e, kernel, Expr::constant(1.0));
      e = simplify_zero(e);
      out[k] = finish(taylor(e, vars, center0, level));
    }
  }
  return out;
}

}  // namespace calc
