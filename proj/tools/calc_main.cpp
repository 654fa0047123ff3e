// calc: command-line front end over the library. Every subcommand prints
// a JSON document on stdout (tensor data column-major, symbolic entries
// as strings) or, with --pretty, a plain-text table. Exit codes: 0 ok,
// 2 malformed invocation, 1 domain or runtime failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "calcxx/deriv.hpp"
#include "calcxx/integrate.hpp"
#include "calcxx/matrix.hpp"
#include "calcxx/ode.hpp"
#include "calcxx/ops.hpp"
#include "calcxx/series.hpp"
#include "calcxx/tensor.hpp"

using json = nlohmann::ordered_json;
using namespace calc;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// Numeric literal with angle sugar: plain floats pass through strtod;
// anything else ("pi", "2pi", "pi/2", ...) is evaluated as a constant
// expression with pi bound.
double parse_number(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw UsageError("empty number");
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() + s.size()) return v;
  std::size_t p = s.find("pi");
  if (p != std::string::npos && p > 0 &&
      (std::isdigit(static_cast<unsigned char>(s[p - 1])) || s[p - 1] == '.'))
    s.insert(p, "*");
  try {
    Expr e = parse(s);
    if (!variables_of(e).empty())
      throw UsageError("'" + text + "' is not a numeric constant");
    return evaluate(e, {});
  } catch (const ParseError&) {
    throw UsageError("cannot read number '" + text + "'");
  }
}

// "x=1,y=2pi" -> bindings
Binding parse_binding(const std::string& text) {
  Binding env;
  if (trim(text).empty()) return env;
  for (const std::string& part : split(text, ',')) {
    std::size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw UsageError("expected name=value in '" + part + "'");
    env[trim(part.substr(0, eq))] = parse_number(part.substr(eq + 1));
  }
  return env;
}

// "i=2,j=3:1,2,3,4,5,6" -> named tensor; extent segments may omit the
// index name ("2,3:..."). Values are expressions; literals stay numeric.
Tensor parse_tensor(const std::string& text) {
  std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw UsageError("tensor literal needs 'extents:data', got '" + text +
                     "'");
  std::vector<std::size_t> extents;
  std::vector<std::string> names;
  bool any_name = false;
  for (const std::string& seg : split(text.substr(0, colon), ',')) {
    std::string name, ext = trim(seg);
    std::size_t eq = ext.find('=');
    if (eq != std::string::npos) {
      name = trim(ext.substr(0, eq));
      ext = trim(ext.substr(eq + 1));
      any_name = true;
    }
    try {
      std::size_t pos = 0;
      extents.push_back(std::stoul(ext, &pos));
      if (pos != ext.size()) throw std::invalid_argument(ext);
    } catch (const std::exception&) {
      throw UsageError("bad extent '" + seg + "'");
    }
    names.push_back(name);
  }
  std::vector<Scalar> data;
  for (const std::string& v : split(text.substr(colon + 1), ',')) {
    Expr e = parse(trim(v));
    if (e.is_constant())
      data.emplace_back(e.constant_value());
    else
      data.emplace_back(e);
  }
  return any_name ? make_tensor(extents, names, std::move(data))
                  : make_tensor(extents, std::move(data));
}

json scalar_to_json(const Scalar& s) {
  if (s.is_number()) return s.number();
  return format(s.expr());
}

json tensor_to_json(const Tensor& t) {
  if (t.rank() == 0) return scalar_to_json(t[0]);
  json doc;
  doc["extents"] = t.extents();
  bool any_name = false;
  for (const std::string& n : t.names()) any_name |= !n.empty();
  if (any_name) doc["names"] = t.names();
  json data = json::array();
  for (std::size_t i = 0; i < t.size(); ++i)
    data.push_back(scalar_to_json(t[i]));
  doc["data"] = data;  // column-major, first index fastest
  return doc;
}

std::string tensor_pretty(const Tensor& t) {
  std::ostringstream out;
  if (t.rank() == 0) {
    out << to_string(t[0]) << "\n";
    return out.str();
  }
  std::vector<std::string> cell(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) cell[i] = to_string(t[i]);
  if (t.rank() == 1) {
    for (std::size_t i = 0; i < t.size(); ++i)
      out << (i ? " " : "") << cell[i];
    out << "\n";
    return out.str();
  }
  if (t.rank() == 2) {
    std::size_t rows = t.extents()[0], cols = t.extents()[1];
    std::vector<std::size_t> width(cols, 0);
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t i = 0; i < rows; ++i)
        width[j] = std::max(width[j], cell[i + rows * j].size());
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j)
        out << (j ? "  " : "") << std::setw(static_cast<int>(width[j]))
            << cell[i + rows * j];
      out << "\n";
    }
    return out.str();
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<std::size_t> idx = t.multi_index(i);
    out << "(";
    for (std::size_t k = 0; k < idx.size(); ++k)
      out << (k ? "," : "") << idx[k];
    out << ") " << cell[i] << "\n";
  }
  return out.str();
}

bool g_pretty = false;

void emit(const json& doc, const std::string& pretty_text) {
  if (g_pretty)
    std::cout << pretty_text;
  else
    std::cout << doc.dump(2) << "\n";
}

json series_to_json(const SeriesResult& r) {
  json doc;
  doc["order"] = r.order;
  doc["variables"] = r.variables;
  json center = json::object();
  for (const auto& [k, v] : r.center) center[k] = v;
  doc["center"] = center;
  doc["f"] = format(r.f);
  json terms = json::array();
  for (const SeriesTerm& t : r.terms) {
    terms.push_back({{"label", t.label},
                     {"coefficient", t.coefficient},
                     {"degree", t.degree},
                     {"total", t.total}});
  }
  doc["terms"] = terms;
  return doc;
}

std::string series_pretty(const SeriesResult& r) {
  std::ostringstream out;
  std::size_t width = 0;
  for (const SeriesTerm& t : r.terms) width = std::max(width, t.label.size());
  for (const SeriesTerm& t : r.terms)
    out << std::left << std::setw(static_cast<int>(width)) << t.label
        << "  " << to_string(Scalar(t.coefficient)) << "\n";
  out << "f = " << format(r.f) << "\n";
  return out.str();
}

// chart from a builtin name or a comma-separated scale-factor list
CoordinateSystem parse_coords(const std::string& text,
                              const std::vector<std::string>& vars) {
  std::string s = trim(text);
  if (s.empty()) return {};
  static const char* builtin[] = {"cartesian",  "polar",
                                  "cylindrical", "spherical",
                                  "parabolic",  "parabolic-cylindrical"};
  for (const char* name : builtin)
    if (s == name) return coordinate_system(name, vars);
  // a lone word is a misspelled chart name, not a scale-factor list
  bool word = s.find(',') == std::string::npos && !std::isdigit(
      static_cast<unsigned char>(s[0]));
  for (char c : s)
    word = word && (std::isalpha(static_cast<unsigned char>(c)) || c == '-');
  if (word && vars.size() > 1)
    throw UsageError("unknown coordinate system '" + s + "'");
  std::vector<Expr> factors;
  for (const std::string& f : split(s, ',')) factors.push_back(parse(trim(f)));
  return custom_coordinates(std::move(factors));
}

// run one of grad/jacobian/hessian/div/curl/laplacian
struct FieldArgs {
  std::vector<std::string> f;
  std::vector<std::size_t> extents;
  std::vector<std::string> vars;
  std::string coords;
  std::string at;
  int accuracy = 4;
};

void run_field_op(const std::string& op, const FieldArgs& a) {
  if (a.f.empty()) throw UsageError("--f requires at least one component");
  std::vector<Expr> comps;
  for (const std::string& s : a.f) comps.push_back(parse(s));
  std::vector<std::size_t> extents = a.extents;
  if (extents.empty() && comps.size() > 1) extents = {comps.size()};
  CoordinateSystem coords = parse_coords(a.coords, a.vars);

  using Op = Tensor (*)(const Tensor&, const std::vector<std::string>&,
                        const CoordinateSystem&);
  using FOp = Tensor (*)(const Field&, const std::vector<std::string>&,
                         const std::vector<double>&, const CoordinateSystem&,
                         int);
  Op sym = nullptr;
  FOp num = nullptr;
  if (op == "grad") sym = gradient, num = gradient;
  else if (op == "jacobian") sym = jacobian, num = jacobian;
  else if (op == "hessian") sym = hessian, num = hessian;
  else if (op == "div") sym = divergence, num = divergence;
  else if (op == "curl") sym = curl, num = curl;
  else sym = laplacian, num = laplacian;

  Tensor result;
  if (!trim(a.at).empty()) {
    Binding at = parse_binding(a.at);
    std::vector<double> point;
    for (const std::string& v : a.vars) {
      auto it = at.find(v);
      if (it == at.end())
        throw UsageError("--at does not bind variable '" + v + "'");
      point.push_back(it->second);
    }
    Field field;
    field.extents = extents;
    field.fn = [&comps, &a](const std::vector<double>& q) {
      Binding env;
      for (std::size_t i = 0; i < a.vars.size(); ++i) env[a.vars[i]] = q[i];
      std::vector<double> out;
      out.reserve(comps.size());
      for (const Expr& c : comps) out.push_back(evaluate(c, env));
      return out;
    };
    result = num(field, a.vars, point, coords, a.accuracy);
  } else {
    std::vector<Scalar> data;
    for (const Expr& c : comps)
      data.emplace_back(c.is_constant() ? Scalar(c.constant_value())
                                        : Scalar(c));
    Tensor F = extents.empty() ? Tensor(data[0])
                               : make_tensor(extents, std::move(data));
    result = sym(F, a.vars, coords);
  }

  json doc;
  doc["operator"] = op;
  doc["variables"] = a.vars;
  doc["coordinates"] = coords.name.empty() ? "custom" : coords.name;
  doc["result"] = tensor_to_json(result);
  emit(doc, tensor_pretty(result));
}

// "r=0:1,theta=0:pi,phi=2" -> ordered bound list (single value = fixed)
std::vector<std::pair<std::string, Bound>> parse_bounds(
    const std::string& text) {
  std::vector<std::pair<std::string, Bound>> out;
  for (const std::string& part : split(text, ',')) {
    std::size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw UsageError("expected name=lo:hi in '" + part + "'");
    std::string name = trim(part.substr(0, eq));
    std::string range = part.substr(eq + 1);
    std::size_t colon = range.find(':');
    Bound b;
    if (colon == std::string::npos) {
      b.lo = b.hi = parse_number(range);
    } else {
      b.lo = parse_number(range.substr(0, colon));
      b.hi = parse_number(range.substr(colon + 1));
      if (b.lo > b.hi)
        throw UsageError("bound for " + name + " has lower > upper");
    }
    out.emplace_back(name, b);
  }
  return out;
}

void write_integrand_plot(const std::string& path, const IntegralRequest& req,
                          const Expr& f) {
  std::vector<std::pair<std::string, Bound>> free;
  Binding env;
  for (const auto& [name, b] : req.bounds) {
    if (b.fixed())
      env[name] = b.lo;
    else
      free.emplace_back(name, b);
  }
  if (free.size() != 1 && free.size() != 2)
    throw UsageError("--plot needs one or two non-fixed bounds");
  Scalar g(1.0);
  for (const Expr& h : req.coords.factors) g = combine(BinaryOp::Mul, g, Scalar(h));
  g = combine(BinaryOp::Mul, g, Scalar(f));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  auto value = [&](void) -> double {
    return g.is_number() ? g.number() : evaluate(g.expr(), env);
  };
  if (free.size() == 1) {
    const auto& [name, b] = free[0];
    out << "# " << name << " f\n";
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
      env[name] = b.lo + (b.hi - b.lo) * i / n;
      out << env[name] << " " << value() << "\n";
    }
    return;
  }
  const auto& [xn, xb] = free[0];
  const auto& [yn, yb] = free[1];
  out << "# " << xn << " " << yn << " f\n";
  const int n = 80;
  for (int i = 0; i <= n; ++i) {
    env[xn] = xb.lo + (xb.hi - xb.lo) * i / n;
    for (int j = 0; j <= n; ++j) {
      env[yn] = yb.lo + (yb.hi - yb.lo) * j / n;
      out << env[xn] << " " << env[yn] << " " << value() << "\n";
    }
    out << "\n";  // gnuplot grid separator
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"high-dimensional numerical and symbolic calculus"};
  app.require_subcommand(1);
  app.add_flag("--pretty", g_pretty, "human-readable tables instead of JSON");

  // ---- derive ----
  struct {
    std::vector<std::string> f, vars;
    std::vector<int> order{1};
    std::string at;
    int accuracy = 4;
  } dv;
  auto* derive = app.add_subcommand("derive", "differentiate expressions");
  derive->fallthrough();
  derive->add_option("--f", dv.f, "expression(s), comma separated")
      ->delimiter(',')
      ->required();
  derive->add_option("--vars", dv.vars, "variables to differentiate by")
      ->delimiter(',')
      ->required();
  derive->add_option("--order", dv.order,
                     "derivative order, single or one per variable")
      ->delimiter(',');
  derive->add_option("--at", dv.at, "binding x=1,y=2: evaluate numerically");
  derive->add_option("--accuracy", dv.accuracy, "finite-difference accuracy");
  derive->callback([&] {
    std::vector<Scalar> data;
    for (const std::string& s : dv.f) {
      Expr e = parse(s);
      data.emplace_back(e.is_constant() ? Scalar(e.constant_value())
                                        : Scalar(e));
    }
    Tensor F = data.size() == 1
                   ? Tensor(data[0])
                   : make_tensor({data.size()}, std::move(data));
    DerivativeRequest req;
    req.variables = dv.vars;
    req.order = dv.order;
    req.accuracy = dv.accuracy;
    req.point = parse_binding(dv.at);
    Tensor d = req.point.empty() ? derivative_symbolic(F, req)
                                 : derivative_numeric(F, req);
    json doc;
    doc["f"] = dv.f.size() == 1 ? json(dv.f[0]) : json(dv.f);
    doc["variables"] = dv.vars;
    doc["order"] = dv.order;
    doc["derivative"] = tensor_to_json(d);
    emit(doc, tensor_pretty(d));
  });

  // ---- taylor ----
  struct {
    std::string f, at;
    std::vector<std::string> vars;
    int order = 1, accuracy = 4;
    bool numeric = false;
  } ty;
  auto* taylor_cmd = app.add_subcommand("taylor", "Taylor series expansion");
  taylor_cmd->fallthrough();
  taylor_cmd->add_option("--f", ty.f, "expression")->required();
  taylor_cmd->add_option("--vars", ty.vars, "expansion variables")
      ->delimiter(',')
      ->required();
  taylor_cmd->add_option("--order", ty.order, "expansion order");
  taylor_cmd->add_option("--at", ty.at, "center binding, default zeros");
  taylor_cmd->add_flag("--numeric", ty.numeric,
                       "finite-difference coefficients");
  taylor_cmd->add_option("--accuracy", ty.accuracy,
                         "accuracy for --numeric");
  taylor_cmd->callback([&] {
    Expr e = parse(ty.f);
    Binding center = parse_binding(ty.at);
    SeriesResult r;
    if (ty.numeric) {
      ScalarFn fn = [&e](const Binding& b) { return evaluate(e, b); };
      r = taylor(fn, ty.vars, center, ty.order, ty.accuracy);
    } else {
      r = taylor(e, ty.vars, center, ty.order);
    }
    json doc = series_to_json(r);
    doc["input"] = ty.f;
    emit(doc, series_pretty(r));
  });

  // ---- hermite ----
  struct {
    std::vector<int> order{0};
    std::vector<std::string> vars{"x"};
    std::string sigma;
  } hm;
  auto* hermite_cmd =
      app.add_subcommand("hermite", "probabilists' Hermite polynomials");
  hermite_cmd->fallthrough();
  hermite_cmd->add_option("--order", hm.order,
                          "max order, single or one per variable")
      ->delimiter(',');
  hermite_cmd->add_option("--vars", hm.vars, "variables")->delimiter(',');
  hermite_cmd->add_option(
      "--sigma", hm.sigma,
      "symmetric d x d weight matrix, column-major, default identity");
  hermite_cmd->callback([&] {
    HermiteRequest req;
    req.order = hm.order;
    req.variables = hm.vars;
    if (!trim(hm.sigma).empty()) {
      std::vector<std::string> vals = split(hm.sigma, ',');
      std::size_t d = hm.vars.size();
      if (vals.size() != d * d)
        throw UsageError("--sigma needs " + std::to_string(d * d) +
                         " entries");
      req.sigma.assign(d, std::vector<double>(d));
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i)
          req.sigma[i][j] = parse_number(vals[i + d * j]);
    }
    auto polys = hermite(req);
    json doc;
    std::ostringstream pretty;
    json table = json::object();
    for (const auto& [key, series] : polys) {
      std::string label;
      for (std::size_t i = 0; i < key.size(); ++i)
        label += (i ? "," : "") + std::to_string(key[i]);
      table[label] = series_to_json(series);
      pretty << "H[" << label << "] = " << format(series.f) << "\n";
    }
    doc["polynomials"] = table;
    emit(doc, pretty.str());
  });

  // ---- partitions ----
  struct {
    int n = 0, length = -1;
    bool fill = false, perm = false, all = false;
  } pt;
  auto* part_cmd = app.add_subcommand("partitions", "integer partitions");
  part_cmd->fallthrough();
  part_cmd->add_option("n", pt.n, "number to partition")->required();
  part_cmd->add_option("--length", pt.length,
                       "max parts per partition, default n");
  part_cmd->add_flag("--fill", pt.fill, "zero-pad to exactly length parts");
  part_cmd->add_flag("--perm", pt.perm, "expand distinct orderings");
  part_cmd->add_flag("--all", pt.all, "include every total 0..n");
  part_cmd->callback([&] {
    int length = pt.length >= 1 ? pt.length : std::max(1, pt.n);
    auto rows = partitions(pt.n, length, pt.fill, pt.perm, !pt.all);
    json doc;
    doc["n"] = pt.n;
    doc["count"] = rows.size();
    doc["partitions"] = rows;
    std::ostringstream pretty;
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        pretty << (i ? " " : "") << row[i];
      pretty << "\n";
    }
    emit(doc, pretty.str());
  });

  // ---- einstein / contract / epsilon / delta / cross / det / inv ----
  struct {
    std::vector<std::string> tensors;
  } ein;
  auto* ein_cmd = app.add_subcommand(
      "einstein", "Einstein summation over named indices");
  ein_cmd->fallthrough();
  ein_cmd->add_option("tensors", ein.tensors,
                      "tensor literals i=2,j=2:1,2,3,4 (column-major)")
      ->required();
  ein_cmd->callback([&] {
    std::vector<Tensor> ops;
    for (const std::string& s : ein.tensors) ops.push_back(parse_tensor(s));
    Tensor r = einstein(ops);
    emit(json{{"result", tensor_to_json(r)}}, tensor_pretty(r));
  });

  struct {
    std::string tensor;
    bool keep = false;
  } ct;
  auto* ct_cmd =
      app.add_subcommand("contract", "sum repeated named indices");
  ct_cmd->fallthrough();
  ct_cmd->add_option("tensor", ct.tensor, "tensor literal")->required();
  ct_cmd->add_flag("--keep", ct.keep, "keep one diagonal axis per group");
  ct_cmd->callback([&] {
    Tensor r = contraction(parse_tensor(ct.tensor), !ct.keep);
    emit(json{{"result", tensor_to_json(r)}}, tensor_pretty(r));
  });

  struct {
    int n = 0;
  } ep;
  auto* ep_cmd = app.add_subcommand("epsilon", "Levi-Civita symbol");
  ep_cmd->fallthrough();
  ep_cmd->add_option("n", ep.n, "dimension")->required();
  ep_cmd->callback([&] {
    Tensor r = epsilon(static_cast<std::size_t>(ep.n));
    emit(json{{"result", tensor_to_json(r)}}, tensor_pretty(r));
  });

  struct {
    int n = 0, p = 1;
  } dl;
  auto* dl_cmd =
      app.add_subcommand("delta", "generalized Kronecker delta");
  dl_cmd->fallthrough();
  dl_cmd->add_option("n", dl.n, "dimension")->required();
  dl_cmd->add_option("p", dl.p, "index pairs, default 1");
  dl_cmd->callback([&] {
    Tensor r = delta(static_cast<std::size_t>(dl.n),
                     static_cast<std::size_t>(dl.p));
    emit(json{{"result", tensor_to_json(r)}}, tensor_pretty(r));
  });

  struct {
    std::vector<std::string> vectors;
  } cr;
  auto* cr_cmd = app.add_subcommand(
      "cross", "generalized cross product of n-1 vectors");
  cr_cmd->fallthrough();
  cr_cmd->add_option("vectors", cr.vectors, "vector literals 3:1,2,3")
      ->required();
  cr_cmd->callback([&] {
    std::vector<Tensor> vs;
    for (const std::string& s : cr.vectors) vs.push_back(parse_tensor(s));
    Tensor r = cross(vs);
    emit(json{{"result", tensor_to_json(r)}}, tensor_pretty(r));
  });

  struct {
    std::string m;
  } mx;
  auto* det_cmd = app.add_subcommand("det", "matrix determinant");
  det_cmd->fallthrough();
  det_cmd->add_option("matrix", mx.m, "matrix literal 2,2:1,3,2,4")
      ->required();
  det_cmd->callback([&] {
    Scalar r = mxdet(parse_tensor(mx.m));
    emit(json{{"result", scalar_to_json(r)}}, to_string(r) + "\n");
  });
  auto* inv_cmd = app.add_subcommand("inv", "matrix inverse");
  inv_cmd->fallthrough();
  inv_cmd->add_option("matrix", mx.m, "matrix literal 2,2:1,3,2,4")
      ->required();
  inv_cmd->callback([&] {
    Tensor r = mxinv(parse_tensor(mx.m));
    emit(json{{"result", tensor_to_json(r)}}, tensor_pretty(r));
  });

  // ---- ode ----
  struct {
    std::vector<std::string> f, vars;
    std::vector<double> init;
    std::string times, method = "rk4", time_name = "t", plot;
  } od;
  auto* ode_cmd = app.add_subcommand("ode", "fixed-grid initial value solver");
  ode_cmd->fallthrough();
  ode_cmd->add_option("--f", od.f, "right-hand sides, comma separated")
      ->delimiter(',')
      ->required();
  ode_cmd->add_option("--vars", od.vars, "state names, default y1,y2,...")
      ->delimiter(',');
  ode_cmd->add_option("--init", od.init, "initial state")
      ->delimiter(',')
      ->required();
  ode_cmd->add_option("--times", od.times, "grid start:stop:step")
      ->required();
  ode_cmd->add_option("--method", od.method, "euler or rk4")
      ->check(CLI::IsMember({"euler", "rk4"}));
  ode_cmd->add_option("--time-name", od.time_name, "time variable name");
  ode_cmd->add_option("--plot", od.plot, "write gnuplot-ready trajectory");
  ode_cmd->callback([&] {
    std::vector<std::string> parts = split(od.times, ':');
    if (parts.size() != 3)
      throw UsageError("--times expects start:stop:step");
    double lo = parse_number(parts[0]);
    double hi = parse_number(parts[1]);
    double h = parse_number(parts[2]);
    if (h <= 0 || hi <= lo) throw UsageError("--times range is empty");
    OdeProblem prob;
    for (const std::string& s : od.f) prob.rhs.push_back(parse(s));
    prob.state_names = od.vars;
    prob.initial = od.init;
    prob.time_name = od.time_name;
    prob.method = od.method == "euler" ? OdeMethod::Euler : OdeMethod::RK4;
    std::size_t n = static_cast<std::size_t>((hi - lo) / h + 1e-9) + 1;
    for (std::size_t k = 0; k < n; ++k) prob.times.push_back(lo + h * k);
    if (std::fabs(prob.times.back() - hi) < 1e-9 * h + 1e-12)
      prob.times.back() = hi;
    OdeSolution sol = solve_ode(prob);
    if (!od.plot.empty()) {
      std::ofstream out(od.plot);
      if (!out) throw std::runtime_error("cannot write '" + od.plot + "'");
      out << "# " << sol.serialize();
    }
    json doc;
    doc["time_name"] = sol.time_name;
    doc["names"] = sol.names;
    doc["times"] = sol.times;
    doc["states"] = sol.states;
    emit(doc, sol.serialize());
  });

  // ---- differential operators ----
  FieldArgs fa;
  for (const char* op :
       {"grad", "jacobian", "hessian", "div", "curl", "laplacian"}) {
    auto* cmd = app.add_subcommand(
        op, std::string(op) + " in orthogonal coordinates");
    cmd->fallthrough();
    cmd->add_option("--f", fa.f, "field components, comma separated")
        ->delimiter(',')
        ->required();
    cmd->add_option("--extents", fa.extents,
                    "component tensor shape, default vector")
        ->delimiter(',');
    cmd->add_option("--vars", fa.vars, "coordinate variables")
        ->delimiter(',')
        ->required();
    cmd->add_option("--coords", fa.coords,
                    "chart name or custom scale-factor list");
    cmd->add_option("--at", fa.at,
                    "point binding: evaluate by finite differences");
    cmd->add_option("--accuracy", fa.accuracy, "finite-difference accuracy");
    cmd->callback([&fa, name = std::string(op)] { run_field_op(name, fa); });
  }

  // ---- integrate ----
  struct {
    std::string f = "1", bounds, coords, method, plot;
    double tol = 1e-6;
    double abs_tol = 1e-12;
    std::uint64_t max_evals = 2000000, samples = 100000;
    std::optional<std::uint64_t> seed;
    bool surface = false;
  } ig;
  auto* int_cmd =
      app.add_subcommand("integrate", "multidimensional integration");
  int_cmd->fallthrough();
  int_cmd->add_option("--f", ig.f, "integrand expression, default 1");
  int_cmd->add_option("--bounds", ig.bounds,
                      "var=lo:hi list; var=value pins a coordinate")
      ->required();
  int_cmd->add_option("--coords", ig.coords,
                      "chart name or custom scale-factor list");
  int_cmd->add_option("--method", ig.method, "adaptive or mc")
      ->check(CLI::IsMember({"adaptive", "mc", "monte-carlo"}));
  int_cmd->add_option("--tol", ig.tol, "relative tolerance");
  int_cmd->add_option("--abs-tol", ig.abs_tol, "absolute tolerance");
  int_cmd->add_option("--max-evals", ig.max_evals, "adaptive budget");
  int_cmd->add_option("--samples", ig.samples, "monte-carlo samples");
  int_cmd->add_option("--seed", ig.seed, "monte-carlo seed");
  int_cmd->add_flag("--surface", ig.surface,
                    "require at least one pinned coordinate");
  int_cmd->add_option("--plot", ig.plot, "write gnuplot-ready integrand");
  int_cmd->callback([&] {
    IntegralRequest req;
    Expr f = parse(ig.f);
    req.integrand = f.is_constant() ? Scalar(f.constant_value()) : Scalar(f);
    req.bounds = parse_bounds(ig.bounds);
    std::vector<std::string> vars;
    for (const auto& [name, b] : req.bounds) vars.push_back(name);
    req.coords = parse_coords(ig.coords, vars);
    if (!ig.method.empty())
      req.method = ig.method == "adaptive" ? IntegralMethod::Adaptive
                                           : IntegralMethod::MonteCarlo;
    req.rel_tol = ig.tol;
    req.abs_tol = ig.abs_tol;
    req.max_evals = ig.max_evals;
    req.samples = ig.samples;
    req.seed = ig.seed;
    IntegralResult r = ig.surface ? surface_integral_fixed(req)
                                  : integral(req);
    if (!ig.plot.empty()) write_integrand_plot(ig.plot, req, f);
    json doc;
    doc["value"] = r.value;
    doc["error"] = r.error;
    doc["evaluations"] = r.evaluations;
    doc["method"] = r.method;
    if (r.method == "monte-carlo") doc["seed"] = r.seed;
    doc["converged"] = r.converged;
    std::ostringstream pretty;
    pretty << "value: " << to_string(Scalar(r.value)) << "\n"
           << "error: " << to_string(Scalar(r.error)) << "\n"
           << "evaluations: " << r.evaluations << "\n"
           << "method: " << r.method << "\n"
           << "converged: " << (r.converged ? "yes" : "no") << "\n";
    emit(doc, pretty.str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
