#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "calcxx/ops.hpp"
#include "support/helpers.hpp"

using namespace calc;
using namespace testsupport;

namespace {

Tensor scalar_field(const std::string& src) {
  return Tensor(Scalar(parse(src)));
}

Tensor vector_field(const std::vector<std::string>& srcs) {
  std::vector<Scalar> data;
  for (const auto& s : srcs) data.emplace_back(parse(s));
  return make_tensor({srcs.size()}, std::move(data));
}

double num(const Scalar& s) { return s.number(); }

Binding bind3(const std::vector<std::string>& vars,
              const std::vector<double>& p) {
  Binding env;
  for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = p[i];
  return env;
}

}  // namespace

TEST_CASE("coordinate_system: built-in scale factors") {
  auto sph = coordinate_system("spherical", {"r", "th", "ph"});
  REQUIRE(sph.factors.size() == 3);
  CHECK(format(sph.factors[0]) == "1");
  CHECK(format(sph.factors[1]) == "r");
  CHECK(format(sph.factors[2]) == "r*sin(th)");

  auto par = coordinate_system("parabolic", {"u", "v", "ph"});
  CHECK(format(par.factors[0]) == "sqrt(u^2 + v^2)");
  CHECK(format(par.factors[2]) == "u*v");

  auto pc = coordinate_system("parabolic-cylindrical", {"u", "v", "z"});
  CHECK(format(pc.factors[2]) == "1");

  auto pol = coordinate_system("polar", {"r", "phi"});
  CHECK(format(pol.factors[1]) == "r");

  auto cyl = coordinate_system("cylindrical", {"r", "phi", "z"});
  CHECK(format(cyl.factors[1]) == "r");
  CHECK(format(cyl.factors[2]) == "1");

  CHECK_THROWS_AS(coordinate_system("nope", {"x"}), std::invalid_argument);
  CHECK_THROWS_AS(coordinate_system("polar", {"x"}), std::invalid_argument);
  CHECK_THROWS_AS(coordinate_system("spherical", {"x", "y"}),
                  std::invalid_argument);
}

TEST_CASE("gradient: cartesian product rule") {
  auto g = gradient(scalar_field("x*y*z"), {"x", "y", "z"});
  REQUIRE(g.extents() == std::vector<std::size_t>{3});
  CHECK(semantically_equal(g[0].expr(), parse("y*z")));
  CHECK(semantically_equal(g[1].expr(), parse("x*z")));
  CHECK(semantically_equal(g[2].expr(), parse("x*y")));
}

TEST_CASE("gradient: spherical chart divides by the scale factors") {
  std::vector<std::string> vars = {"x", "y", "z"};
  auto coords = coordinate_system("spherical", vars);
  auto g = gradient(scalar_field("x*y*z"), vars, coords);
  CHECK(semantically_equal(g[0].expr(), parse("y*z")));
  CHECK(semantically_equal(g[1].expr(), parse("(x*z)/x")));
  CHECK(semantically_equal(g[2].expr(), parse("(x*y)/(x*sin(y))")));

  // numeric value at (1, pi/2, 0)
  Binding at = bind3(vars, {1.0, M_PI / 2, 0.0});
  CHECK(evaluate(g[0].expr(), at) == doctest::Approx(0.0));
  CHECK(evaluate(g[1].expr(), at) == doctest::Approx(0.0));
  CHECK(evaluate(g[2].expr(), at) == doctest::Approx(M_PI / 2));
}

TEST_CASE("gradient: custom factors replicate the spherical builtin") {
  std::vector<std::string> vars = {"x", "y", "z"};
  auto builtin = coordinate_system("spherical", vars);
  auto custom = custom_coordinates(
      {parse("1"), parse("x"), parse("x*sin(y)")});
  auto a = gradient(scalar_field("x*y*z"), vars, builtin);
  auto b = gradient(scalar_field("x*y*z"), vars, custom);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(semantically_equal(a[i].as_expr(), b[i].as_expr()));
  }
}

TEST_CASE("gradient: callable field in spherical coordinates") {
  Field f;
  f.fn = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[1] * x[2]};
  };
  std::vector<std::string> vars = {"x", "y", "z"};
  auto g = gradient(f, vars, {1.0, M_PI / 2, 0.0},
                    coordinate_system("spherical", vars));
  REQUIRE(g.extents() == std::vector<std::size_t>{3});
  CHECK(num(g[0]) == doctest::Approx(0.0).scale(1.0));
  CHECK(num(g[1]) == doctest::Approx(0.0).scale(1.0));
  CHECK(num(g[2]) == doctest::Approx(M_PI / 2));
}

TEST_CASE("gradient: vector-valued callable in cylindrical coordinates") {
  Field f;
  f.fn = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[1] * x[2], x[0] + x[1] + x[2]};
  };
  f.extents = {2};
  std::vector<std::string> vars = {"x", "y", "z"};
  auto g = gradient(f, vars, {3.0, 2.0, 1.0},
                    coordinate_system("cylindrical", vars));
  REQUIRE(g.extents() == (std::vector<std::size_t>{2, 3}));
  CHECK(num(g.at({0, 0})) == doctest::Approx(2.0));
  CHECK(num(g.at({0, 1})) == doctest::Approx(1.0));
  CHECK(num(g.at({0, 2})) == doctest::Approx(6.0));
  CHECK(num(g.at({1, 0})) == doctest::Approx(1.0));
  CHECK(num(g.at({1, 1})) == doctest::Approx(1.0 / 3.0));
  CHECK(num(g.at({1, 2})) == doctest::Approx(1.0));
}

TEST_CASE("gradient: singular chart point raises") {
  Field f;
  f.fn = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] + x[1] + x[2]};
  };
  std::vector<std::string> vars = {"r", "th", "ph"};
  auto coords = coordinate_system("spherical", vars);
  CHECK_THROWS_AS(gradient(f, vars, {0.0, 1.0, 1.0}, coords), EvalError);
  CHECK_THROWS_AS(gradient(f, vars, {1.0, 0.0, 1.0}, coords), EvalError);
  CHECK_THROWS_AS(gradient(f, vars, {1.0, 1.0}, coords), ShapeError);
}

TEST_CASE("jacobian: always a matrix") {
  auto j1 = jacobian(scalar_field("x^2"), {"x"});
  REQUIRE(j1.extents() == (std::vector<std::size_t>{1, 1}));
  CHECK(semantically_equal(j1[0].as_expr(), parse("2*x")));

  Field f;
  f.fn = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[0]};
  };
  auto jn = jacobian(f, {"x"}, {1.0});
  REQUIRE(jn.extents() == (std::vector<std::size_t>{1, 1}));
  CHECK(num(jn[0]) == doctest::Approx(2.0));

  // identity map
  auto ji = jacobian(vector_field({"x", "y", "z"}), {"x", "y", "z"});
  REQUIRE(ji.extents() == (std::vector<std::size_t>{3, 3}));
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(num(ji.at({r, c})) == (r == c ? 1.0 : 0.0));
    }
  }

  Field fv;
  fv.fn = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[1] * x[2], x[0] + x[1] + x[2]};
  };
  fv.extents = {2};
  auto jv = jacobian(fv, {"x", "y", "z"}, {3.0, 2.0, 1.0});
  REQUIRE(jv.extents() == (std::vector<std::size_t>{2, 3}));
  CHECK(num(jv.at({0, 0})) == doctest::Approx(2.0));
  CHECK(num(jv.at({0, 1})) == doctest::Approx(3.0));
  CHECK(num(jv.at({0, 2})) == doctest::Approx(6.0));
  CHECK(num(jv.at({1, 0})) == doctest::Approx(1.0));
  CHECK(num(jv.at({1, 1})) == doctest::Approx(1.0));
  CHECK(num(jv.at({1, 2})) == doctest::Approx(1.0));
}

TEST_CASE("hessian: numeric mixed partials of xyz") {
  Field f;
  f.fn = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[1] * x[2]};
  };
  auto h = hessian(f, {"x", "y", "z"}, {3.0, 2.0, 1.0});
  REQUIRE(h.extents() == (std::vector<std::size_t>{3, 3}));
  CHECK(num(h.at({0, 1})) == doctest::Approx(1.0));
  CHECK(num(h.at({0, 2})) == doctest::Approx(2.0));
  CHECK(num(h.at({1, 2})) == doctest::Approx(3.0));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::fabs(num(h.at({i, i}))) <= 1e-8);
  }
  // exact symmetry by construction
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(num(h.at({i, j})) == num(h.at({j, i})));
    }
  }
}

TEST_CASE("hessian: component index comes first for vector fields") {
  Field f;
  f.fn = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[1] * x[2], x[0] + x[1] + x[2]};
  };
  f.extents = {2};
  auto h = hessian(f, {"x", "y", "z"}, {3.0, 2.0, 1.0});
  REQUIRE(h.extents() == (std::vector<std::size_t>{2, 3, 3}));
  CHECK(num(h.at({0, 0, 1})) == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::fabs(num(h.at({1, i, j}))) <= 1e-8);
    }
  }
}

TEST_CASE("hessian: quadratic form recovers its matrix") {
  // f = x' A x / 2 with symmetric A
  const double A[2][2] = {{3.0, -1.0}, {-1.0, 2.0}};
  Field f;
  f.fn = [&](const std::vector<double>& x) {
    double q = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) q += x[i] * A[i][j] * x[j];
    return std::vector<double>{0.5 * q};
  };
  auto h = hessian(f, {"x", "y"}, {0.4, -1.3});
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(num(h.at({i, j})) == doctest::Approx(A[i][j]).epsilon(1e-8));
    }
  }
}

TEST_CASE("hessian: symbolic route and cartesian-only guard") {
  auto h = hessian(scalar_field("x^2*y"), {"x", "y"});
  REQUIRE(h.extents() == (std::vector<std::size_t>{2, 2}));
  CHECK(semantically_equal(h.at({0, 0}).as_expr(), parse("2*y")));
  CHECK(semantically_equal(h.at({0, 1}).as_expr(), parse("2*x")));
  CHECK(semantically_equal(h.at({1, 0}).as_expr(), parse("2*x")));
  CHECK(num(h.at({1, 1})) == 0.0);

  auto polar = coordinate_system("polar", {"x", "y"});
  CHECK_THROWS_AS(hessian(scalar_field("x*y"), {"x", "y"}, polar),
                  std::invalid_argument);
  // explicit unit factors still count as cartesian
  auto unit = custom_coordinates({parse("1"), parse("1")});
  CHECK(hessian(scalar_field("x*y"), {"x", "y"}, unit).rank() == 2);
}

TEST_CASE("divergence: cartesian gives the sum of the partials") {
  auto dv = divergence(vector_field({"x^2", "y^2", "z^2"}), {"x", "y", "z"});
  CHECK(dv.rank() == 0);
  CHECK(semantically_equal(dv[0].expr(), parse("2*x + 2*y + 2*z")));
}

TEST_CASE("divergence: polar weights by the volume element") {
  std::vector<std::string> vars = {"r", "phi"};
  auto coords = coordinate_system("polar", vars);
  auto dv = divergence(vector_field({"sqrt(r)/10", "sqrt(r)"}), vars, coords);
  CHECK(dv.rank() == 0);
  Expr want = parse("(0.05*r^(-0.5)*r + sqrt(r)/10)/r");
  CHECK(semantically_equal(dv[0].expr(), want));
}

TEST_CASE("divergence: matrix-valued callable at the origin") {
  Field f;
  f.fn = [](const std::vector<double>& x) {
    // rows (x^2, y^2, z^2) and (x, y, z), column-major storage
    return std::vector<double>{x[0] * x[0], x[0], x[1] * x[1],
                               x[1],        x[2] * x[2], x[2]};
  };
  f.extents = {2, 3};
  auto dv = divergence(f, {"x", "y", "z"}, {0.0, 0.0, 0.0});
  REQUIRE(dv.extents() == std::vector<std::size_t>{2});
  CHECK(num(dv[0]) == doctest::Approx(0.0).scale(1.0));
  CHECK(num(dv[1]) == doctest::Approx(3.0));
}

TEST_CASE("divergence: trailing axis must match the variables") {
  CHECK_THROWS_AS(divergence(vector_field({"x", "y"}), {"x", "y", "z"}),
                  ShapeError);
  CHECK_THROWS_AS(divergence(scalar_field("x"), {"x"}), ShapeError);
}

TEST_CASE("curl: two dimensions give the scalar rotation") {
  auto c = curl(vector_field({"x^3*y^2", "x"}), {"x", "y"});
  CHECK(c.rank() == 0);
  CHECK(semantically_equal(c[0].as_expr(), parse("1 - 2*x^3*y")));
}

TEST_CASE("curl: irrotational three-dimensional field") {
  auto c = curl(vector_field({"x", "-y", "z"}), {"x", "y", "z"});
  REQUIRE(c.extents() == std::vector<std::size_t>{3});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(c[i].is_number());
    CHECK(num(c[i]) == 0.0);
  }
}

TEST_CASE("curl: rows of a matrix are curled independently") {
  std::vector<Scalar> data = {
      // column-major (2,3): rows (x,-y,z) and (x^3*y^2, x, 0)
      Scalar(parse("x")),      Scalar(parse("x^3*y^2")),
      Scalar(parse("-y")),     Scalar(parse("x")),
      Scalar(parse("z")),      Scalar(0.0)};
  Tensor F = make_tensor({2, 3}, std::move(data));
  auto c = curl(F, {"x", "y", "z"});
  REQUIRE(c.extents() == (std::vector<std::size_t>{2, 3}));
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(num(c.at({0, k})) == 0.0);
  }
  CHECK(num(c.at({1, 0})) == 0.0);
  CHECK(num(c.at({1, 1})) == 0.0);
  CHECK(semantically_equal(c.at({1, 2}).as_expr(), parse("1 - 2*x^3*y")));
}

TEST_CASE("curl: known rotation in the plane, numerically") {
  Field f;
  f.fn = [](const std::vector<double>& x) {
    return std::vector<double>{-x[1], x[0]};
  };
  f.extents = {2};
  auto c = curl(f, {"x", "y"}, {0.3, -0.8});
  CHECK(c.rank() == 0);
  CHECK(num(c[0]) == doctest::Approx(2.0));

  CHECK_THROWS_AS(curl(scalar_field("x"), {"x"}), std::invalid_argument);
}

TEST_CASE("laplacian: cartesian cubics") {
  auto lp = laplacian(scalar_field("x^3 + y^3 + z^3"), {"x", "y", "z"});
  CHECK(lp.rank() == 0);
  CHECK(semantically_equal(lp[0].expr(), parse("6*x + 6*y + 6*z")));

  auto harmonic = laplacian(scalar_field("x^2 - y^2"), {"x", "y"});
  CHECK(harmonic[0].is_number());
  CHECK(num(harmonic[0]) == 0.0);
}

TEST_CASE("laplacian: componentwise over arrays of scalars") {
  std::vector<Scalar> data = {
      Scalar(parse("x^3+y^3+z^3")), Scalar(parse("x^2+y^2+z^2")),
      Scalar(parse("y^2")), Scalar(parse("z*x^2"))};
  Tensor F = make_tensor({2, 2}, std::move(data));
  auto lp = laplacian(F, {"x", "y", "z"});
  REQUIRE(lp.extents() == (std::vector<std::size_t>{2, 2}));
  CHECK(semantically_equal(lp.at({0, 0}).as_expr(), parse("6*x+6*y+6*z")));
  CHECK(num(lp.at({1, 0})) == 6.0);
  CHECK(num(lp.at({0, 1})) == 2.0);
  CHECK(semantically_equal(lp.at({1, 1}).as_expr(), parse("2*z")));
}

TEST_CASE("laplacian: spherical matches the closed form") {
  // lap(r^2) = 6 in spherical coordinates
  std::vector<std::string> vars = {"r", "th", "ph"};
  auto coords = coordinate_system("spherical", vars);
  auto lp = laplacian(scalar_field("r^2"), vars, coords);
  Binding at = bind3(vars, {1.7, 0.9, 2.0});
  CHECK(evaluate(lp[0].as_expr(), at) == doctest::Approx(6.0));

  // numeric route agrees
  Field f;
  f.fn = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[0]};
  };
  auto ln = laplacian(f, vars, {1.7, 0.9, 2.0}, coords);
  CHECK(num(ln[0]) == doctest::Approx(6.0).epsilon(1e-7));
}

TEST_CASE("curl of a gradient vanishes") {
  for (int trial = 0; trial < 100; ++trial) {
    Expr f = random_smooth_expr({"x", "y", "z"}, 3);
    Tensor c = curl(gradient(Tensor(Scalar(f)), {"x", "y", "z"}),
                    {"x", "y", "z"});
    Binding at = random_binding({"x", "y", "z"}, 0.5, 2.0);
    for (std::size_t k = 0; k < 3; ++k) {
      bool bad = false;
      double v = evaluate(c[k].as_expr(), at, &bad);
      if (bad || !std::isfinite(v)) continue;
      CHECK(std::fabs(v) <= 1e-9);
    }
  }
}

TEST_CASE("curl of a gradient vanishes in spherical coordinates") {
  std::vector<std::string> vars = {"r", "th", "ph"};
  auto coords = coordinate_system("spherical", vars);
  for (int trial = 0; trial < 20; ++trial) {
    Expr f = random_smooth_expr(vars, 2);
    Tensor c = curl(gradient(Tensor(Scalar(f)), vars, coords), vars, coords);
    // interior points, theta away from the axis
    Binding at = {{"r", uniform(0.5, 2.0)},
                  {"th", uniform(0.4, M_PI - 0.4)},
                  {"ph", uniform(0.0, 2.0 * M_PI)}};
    for (std::size_t k = 0; k < 3; ++k) {
      bool bad = false;
      double v = evaluate(c[k].as_expr(), at, &bad);
      if (bad || !std::isfinite(v)) continue;
      CHECK(std::fabs(v) <= 1e-9);
    }
  }
}

TEST_CASE("divergence of a curl vanishes") {
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Scalar> comps;
    for (int k = 0; k < 3; ++k)
      comps.emplace_back(random_smooth_expr({"x", "y", "z"}, 3));
    Tensor F = make_tensor({3}, std::move(comps));
    Tensor dc = divergence(curl(F, {"x", "y", "z"}), {"x", "y", "z"});
    Binding at = random_binding({"x", "y", "z"}, 0.5, 2.0);
    bool bad = false;
    double v = evaluate(dc[0].as_expr(), at, &bad);
    if (bad || !std::isfinite(v)) continue;
    CHECK(std::fabs(v) <= 1e-9);
  }
}

TEST_CASE("laplacian equals divergence of gradient in every chart") {
  struct Case {
    std::string name;
    std::vector<std::string> vars;
  };
  std::vector<Case> cases = {
      {"cartesian", {"x", "y", "z"}},
      {"polar", {"r", "phi"}},
      {"cylindrical", {"r", "phi", "z"}},
      {"spherical", {"r", "th", "ph"}},
      {"parabolic", {"u", "v", "ph"}},
      {"parabolic-cylindrical", {"u", "v", "z"}},
  };
  for (const Case& cs : cases) {
    auto coords = coordinate_system(cs.name, cs.vars);
    for (int trial = 0; trial < 8; ++trial) {
      Expr f = random_smooth_expr(cs.vars, 2);
      Tensor lap = laplacian(Tensor(Scalar(f)), cs.vars, coords);
      Tensor divgrad =
          divergence(gradient(Tensor(Scalar(f)), cs.vars, coords),
                     cs.vars, coords);
      int checked = 0;
      for (int probe = 0; probe < 50; ++probe) {
        Binding at = random_binding(cs.vars, 0.5, 2.0);
        bool bad1 = false, bad2 = false;
        double a = evaluate(lap[0].as_expr(), at, &bad1);
        double b = evaluate(divgrad[0].as_expr(), at, &bad2);
        if (bad1 || bad2 || !std::isfinite(a) || !std::isfinite(b)) continue;
        if (std::fabs(a) > 1e6) continue;
        CHECK(a == doctest::Approx(b).epsilon(1e-6).scale(1.0));
        ++checked;
      }
      CHECK(checked > 0);
    }
  }
}

TEST_CASE("numeric hessian symmetry on a generic smooth function") {
  Field f;
  f.fn = [](const std::vector<double>& x) {
    return std::vector<double>{std::sin(x[0] * x[1]) +
                               std::exp(x[2]) * x[0] * x[0] +
                               x[1] * x[2] * x[2]};
  };
  auto h = hessian(f, {"x", "y", "z"}, {0.7, 1.1, 0.4});
  double hmax = 0.0;
  for (std::size_t i = 0; i < 9; ++i)
    hmax = std::max(hmax, std::fabs(num(h[i])));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::fabs(num(h.at({i, j})) - num(h.at({j, i}))) <=
            1e-7 * (1.0 + hmax));
    }
  }
}
