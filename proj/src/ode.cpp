#include "calcxx/ode.hpp"

#include <cmath>
#include <stdexcept>

#include "calcxx/scalar.hpp"
#include "calcxx/tensor.hpp"

namespace calc {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw std::invalid_argument("linspace needs >= 2 points");
  std::vector<double> out(count);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) /
                      static_cast<double>(count - 1);
  }
  out[count - 1] = hi;
  return out;
}

std::string OdeSolution::serialize() const {
  std::string out = time_name;
  for (const std::string& n : names) {
    out += ' ';
    out += n;
  }
  out += '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    out += to_string(Scalar(times[i]));
    for (double v : states[i]) {
      out += ' ';
      out += to_string(Scalar(v));
    }
    out += '\n';
  }
  return out;
}

namespace {

using RhsCall = std::function<void(double, const std::vector<double>&,
                                   std::vector<double>&)>;

void check_finite(const std::vector<double>& y, double t) {
  for (double v : y) {
    if (!std::isfinite(v))
      throw EvalError("non-finite state at t = " + to_string(Scalar(t)));
  }
}

}  // namespace

OdeSolution solve_ode(const OdeProblem& p) {
  const std::size_t m = p.initial.size();
  if (m == 0) throw std::invalid_argument("empty initial state");
  if (p.times.size() < 2)
    throw std::invalid_argument("time grid needs at least two points");
  for (std::size_t i = 1; i < p.times.size(); ++i) {
    if (!(p.times[i] > p.times[i - 1]))
      throw std::invalid_argument("time grid must be strictly increasing");
  }

  std::vector<std::string> names = p.state_names;
  if (names.empty()) {
    for (std::size_t i = 0; i < m; ++i)
      names.push_back("y" + std::to_string(i + 1));
  }
  if (names.size() != m)
    throw ShapeError("one state name per state component required");

  const bool symbolic = !p.rhs.empty();
  if (symbolic && p.rhs.size() != m)
    throw ShapeError("rhs dimension does not match the state dimension");
  if (!symbolic && !p.rhs_fn)
    throw std::invalid_argument("no right-hand side given");

  // one reusable binding: map nodes persist, only the values change
  Binding env;
  RhsCall rhs;
  if (symbolic) {
    rhs = [&](double t, const std::vector<double>& y,
              std::vector<double>& out) {
      env[p.time_name] = t;
      for (std::size_t i = 0; i < m; ++i) env[names[i]] = y[i];
      for (std::size_t i = 0; i < m; ++i) out[i] = evaluate(p.rhs[i], env);
    };
  } else {
    rhs = [&](double t, const std::vector<double>& y,
              std::vector<double>& out) {
      std::vector<double> r = p.rhs_fn(y, t);
      if (r.size() != m)
        throw ShapeError("rhs dimension does not match the state dimension");
      out = std::move(r);
    };
  }

  OdeSolution sol;
  sol.times = p.times;
  sol.time_name = p.time_name;
  sol.names = names;
  sol.states.reserve(p.times.size());

  std::vector<double> y = p.initial;
  check_finite(y, p.times[0]);
  sol.states.push_back(y);

  std::vector<double> k1(m), k2(m), k3(m), k4(m), probe(m);
  for (std::size_t n = 0; n + 1 < p.times.size(); ++n) {
    const double t = p.times[n];
    const double h = p.times[n + 1] - t;
    if (p.method == OdeMethod::Euler) {
      rhs(t, y, k1);
      for (std::size_t i = 0; i < m; ++i) y[i] += h * k1[i];
    } else {
      rhs(t, y, k1);
      for (std::size_t i = 0; i < m; ++i) probe[i] = y[i] + 0.5 * h * k1[i];
      rhs(t + 0.5 * h, probe, k2);
      for (std::size_t i = 0; i < m; ++i) probe[i] = y[i] + 0.5 * h * k2[i];
      rhs(t + 0.5 * h, probe, k3);
      for (std::size_t i = 0; i < m; ++i) probe[i] = y[i] + h * k3[i];
      rhs(t + h, probe, k4);
      for (std::size_t i = 0; i < m; ++i) {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
    }
    check_finite(y, p.times[n + 1]);
    sol.states.push_back(y);
  }
  return sol;
}

}  // namespace calc
