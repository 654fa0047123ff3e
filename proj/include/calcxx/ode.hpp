#ifndef CALCXX_ODE_HPP
#define CALCXX_ODE_HPP

#include <functional>
#include <string>
#include <vector>

#include "calcxx/expr.hpp"

namespace calc {

enum class OdeMethod { Euler, RK4 };

/// Callable right-hand side: maps (state, time) to dy/dt.
using OdeRhsFn =
    std::function<std::vector<double>(const std::vector<double>&, double)>;

/// First-order system dy/dt = f(t, y), y(times[0]) = initial, advanced
/// over the given grid. Exactly one of `rhs` / `rhs_fn` supplies f: the
/// symbolic route evaluates one expression per state component against a
/// binding that is reused (not rebuilt) across steps, so both routes run
/// the same stepping arithmetic and produce bit-identical trajectories.
struct OdeProblem {
  std::vector<Expr> rhs;
  OdeRhsFn rhs_fn;
  std::vector<std::string> state_names;  // synthesized y1..ym when empty
  std::vector<double> initial;
  std::vector<double> times;  // strictly increasing, length >= 2
  std::string time_name = "t";
  OdeMethod method = OdeMethod::RK4;
};

/// Trajectory table: states[i] is the state at times[i]; states[0] is the
/// initial condition verbatim.
struct OdeSolution {
  std::vector<double> times;
  std::string time_name = "t";
  std::vector<std::string> names;
  std::vector<std::vector<double>> states;

  /// Whitespace-separated table: header row with the time variable and
  /// state names, then one row per grid point.
  std::string serialize() const;
};

/// Fixed-step integration; steps are the (possibly non-uniform) grid gaps.
/// Euler: y + h f(t, y). RK4: the classical four-stage tableau. A
/// non-finite state component raises EvalError, a right-hand side of the
/// wrong dimension raises ShapeError.
OdeSolution solve_ode(const OdeProblem& p);

/// count evenly spaced points from lo to hi inclusive, endpoints exact.
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace calc

#endif
