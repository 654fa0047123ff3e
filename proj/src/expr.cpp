#include "calcxx/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <utility>

namespace calc {

namespace detail {

struct ExprNode {
  Expr::Kind kind;
  double value = 0.0;             // Constant
  std::string name;               // Variable, Apply
  std::vector<Expr> children;     // Negate: 1, Binary: 2, Apply: args
  BinaryOp op = BinaryOp::Add;    // Binary
};

}  // namespace detail

using detail::ExprNode;

namespace {

const std::array<std::string, 10> kKnownFunctions = {
    "sin", "cos", "tan", "asin", "acos", "atan", "exp", "log", "sqrt", "abs"};

std::shared_ptr<const ExprNode> make_node(ExprNode node) {
  return std::make_shared<const ExprNode>(std::move(node));
}

}  // namespace

bool is_known_function(const std::string& name) {
  for (const auto& fn : kKnownFunctions) {
    if (fn == name) return true;
  }
  return false;
}

Expr::Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double value) {
  ExprNode n;
  n.kind = Kind::Constant;
  n.value = value;
  return Expr(make_node(std::move(n)));
}

Expr Expr::variable(std::string name) {
  ExprNode n;
  n.kind = Kind::Variable;
  n.name = std::move(name);
  return Expr(make_node(std::move(n)));
}

Expr Expr::negate(Expr operand) {
  ExprNode n;
  n.kind = Kind::Negate;
  n.children.push_back(std::move(operand));
  return Expr(make_node(std::move(n)));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  ExprNode n;
  n.kind = Kind::Binary;
  n.op = op;
  n.children.push_back(std::move(lhs));
  n.children.push_back(std::move(rhs));
  return Expr(make_node(std::move(n)));
}

Expr Expr::apply(std::string function, std::vector<Expr> args) {
  ExprNode n;
  n.kind = Kind::Apply;
  n.name = std::move(function);
  n.children = std::move(args);
  return Expr(make_node(std::move(n)));
}

Expr Expr::pi() { return variable("pi"); }

Expr::Kind Expr::kind() const { return node_->kind; }

bool Expr::is_constant(double value) const {
  return node_->kind == Kind::Constant && node_->value == value;
}

double Expr::constant_value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const Expr& Expr::operand() const { return node_->children[0]; }
BinaryOp Expr::op() const { return node_->op; }
const Expr& Expr::lhs() const { return node_->children[0]; }
const Expr& Expr::rhs() const { return node_->children[1]; }
const std::vector<Expr>& Expr::args() const { return node_->children; }

bool Expr::depends_on(const std::string& var) const {
  switch (kind()) {
    case Kind::Constant:
      return false;
    case Kind::Variable:
      return node_->name == var && node_->name != "pi";
    default:
      for (const Expr& c : node_->children) {
        if (c.depends_on(var)) return true;
      }
      return false;
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case Expr::Kind::Constant:
      return a.node_->value == b.node_->value;
    case Expr::Kind::Variable:
      return a.node_->name == b.node_->name;
    case Expr::Kind::Negate:
      return a.operand() == b.operand();
    case Expr::Kind::Binary:
      return a.node_->op == b.node_->op && a.lhs() == b.lhs() &&
             a.rhs() == b.rhs();
    case Expr::Kind::Apply:
      if (a.node_->name != b.node_->name ||
          a.node_->children.size() != b.node_->children.size())
        return false;
      for (std::size_t i = 0; i < a.node_->children.size(); ++i) {
        if (!(a.node_->children[i] == b.node_->children[i])) return false;
      }
      return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

ParseError::ParseError(const std::string& message, std::size_t pos)
    : std::runtime_error(message + " at position " + std::to_string(pos)),
      position(pos) {}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      skip_ws();
      if (consume('+')) {
        e = Expr::binary(BinaryOp::Add, e, parse_term());
      } else if (consume('-')) {
        e = Expr::binary(BinaryOp::Sub, e, parse_term());
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      skip_ws();
      if (consume('*')) {
        e = Expr::binary(BinaryOp::Mul, e, parse_unary());
      } else if (consume('/')) {
        e = Expr::binary(BinaryOp::Div, e, parse_unary());
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    skip_ws();
    if (consume('-')) {
      Expr inner = parse_unary();
      // Fold a negated literal so that format/parse round-trips
      // negative constants structurally.
      if (inner.is_constant()) return Expr::constant(-inner.constant_value());
      return Expr::negate(inner);
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    skip_ws();
    if (consume('^')) {
      return Expr::binary(BinaryOp::Pow, base, parse_unary());
    }
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_ident();
    }
    if (consume('(')) {
      Expr e = parse_expr();
      skip_ws();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
        ++pos_;
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to a following identifier, not to us
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_,
                                     value);
    if (ec != std::errc() || ptr != text_.data() + pos_)
      fail("malformed number", start);
    return Expr::constant(value);
  }

  Expr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      if (!is_known_function(name))
        fail("unknown function '" + name + "'", start);
      ++pos_;
      std::vector<Expr> args;
      args.push_back(parse_expr());
      skip_ws();
      while (consume(',')) args.push_back(parse_expr());
      skip_ws();
      if (!consume(')')) fail("expected ')'");
      if (args.size() != 1)
        fail("function '" + name + "' takes one argument", start);
      return Expr::apply(name, std::move(args));
    }
    return Expr::variable(std::move(name));
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) { fail(message, pos_); }
  [[noreturn]] void fail(const std::string& message, std::size_t pos) {
    throw ParseError(message, pos);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::string& text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

namespace {

// Grammar levels, ordered by containment: an atom is valid anywhere a
// power is, and so on up to a full expr.
enum GrammarLevel { kAtom = 0, kPower = 1, kUnary = 2, kTerm = 3, kExpr = 4 };

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

GrammarLevel node_level(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.constant_value() < 0 ? kUnary : kAtom;
    case Expr::Kind::Variable:
    case Expr::Kind::Apply:
      return kAtom;
    case Expr::Kind::Negate:
      return kUnary;
    case Expr::Kind::Binary:
      switch (e.op()) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return kExpr;
        case BinaryOp::Mul:
        case BinaryOp::Div:
          return kTerm;
        case BinaryOp::Pow:
          return kPower;
      }
  }
  return kExpr;
}

void format_into(const Expr& e, GrammarLevel allowed, std::string& out) {
  if (node_level(e) > allowed) {
    out += '(';
    format_into(e, kExpr, out);
    out += ')';
    return;
  }
  switch (e.kind()) {
    case Expr::Kind::Constant:
      out += format_number(e.constant_value());
      return;
    case Expr::Kind::Variable:
      out += e.name();
      return;
    case Expr::Kind::Negate:
      out += '-';
      format_into(e.operand(), kUnary, out);
      return;
    case Expr::Kind::Apply:
      out += e.name();
      out += '(';
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i > 0) out += ", ";
        format_into(e.args()[i], kExpr, out);
      }
      out += ')';
      return;
    case Expr::Kind::Binary:
      switch (e.op()) {
        case BinaryOp::Add:
          format_into(e.lhs(), kExpr, out);
          out += " + ";
          format_into(e.rhs(), kTerm, out);
          return;
        case BinaryOp::Sub:
          format_into(e.lhs(), kExpr, out);
          out += " - ";
          format_into(e.rhs(), kTerm, out);
          return;
        case BinaryOp::Mul:
          format_into(e.lhs(), kTerm, out);
          out += '*';
          format_into(e.rhs(), kUnary, out);
          return;
        case BinaryOp::Div:
          format_into(e.lhs(), kTerm, out);
          out += '/';
          format_into(e.rhs(), kUnary, out);
          return;
        case BinaryOp::Pow:
          format_into(e.lhs(), kAtom, out);
          out += '^';
          format_into(e.rhs(), kUnary, out);
          return;
      }
  }
}

}  // namespace

std::string format(const Expr& e) {
  std::string out;
  format_into(e, kExpr, out);
  return out;
}

// ---------------------------------------------------------------------------
// Simplification
// ---------------------------------------------------------------------------

namespace {

// Node-local rules; children are already simplified.
Expr simplify_node(const Expr& e) {
  if (e.kind() == Expr::Kind::Negate) {
    const Expr& x = e.operand();
    if (x.kind() == Expr::Kind::Negate) return x.operand();
    // mirror the parser, which folds unary minus into the literal
    if (x.kind() == Expr::Kind::Constant)
      return Expr::constant(-x.constant_value());
    return e;
  }
  if (e.kind() != Expr::Kind::Binary) return e;
  const Expr& a = e.lhs();
  const Expr& b = e.rhs();
  switch (e.op()) {
    case BinaryOp::Add:
      if (b.is_constant(0.0)) return a;
      if (a.is_constant(0.0)) return b;
      break;
    case BinaryOp::Sub:
      if (b.is_constant(0.0)) return a;
      if (a.is_constant(0.0)) return simplify_node(Expr::negate(b));
      break;
    case BinaryOp::Mul:
      if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(1.0)) return b;
      break;
    case BinaryOp::Div:
      if (a.is_constant(0.0)) return Expr::constant(0.0);
      if (b.is_constant(1.0)) return a;
      break;
    case BinaryOp::Pow:
      if (b.is_constant(1.0)) return a;
      if (b.is_constant(0.0)) return Expr::constant(1.0);
      break;
  }
  return e;
}

}  // namespace

Expr simplify_zero(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
    case Expr::Kind::Variable:
      return e;
    case Expr::Kind::Negate:
      return simplify_node(Expr::negate(simplify_zero(e.operand())));
    case Expr::Kind::Binary:
      return simplify_node(Expr::binary(e.op(), simplify_zero(e.lhs()),
                                        simplify_zero(e.rhs())));
    case Expr::Kind::Apply: {
      std::vector<Expr> args;
      args.reserve(e.args().size());
      for (const Expr& a : e.args()) args.push_back(simplify_zero(a));
      return Expr::apply(e.name(), std::move(args));
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

namespace {

Expr bin(BinaryOp op, Expr a, Expr b) {
  return Expr::binary(op, std::move(a), std::move(b));
}

Expr diff_raw(const Expr& e, const std::string& var);

Expr diff_apply(const Expr& e, const std::string& var) {
  const std::string& fn = e.name();
  const Expr& u = e.args()[0];
  Expr du = diff_raw(u, var);
  if (fn == "sin") return bin(BinaryOp::Mul, Expr::apply("cos", {u}), du);
  if (fn == "cos")
    return Expr::negate(bin(BinaryOp::Mul, Expr::apply("sin", {u}), du));
  if (fn == "tan")
    return bin(BinaryOp::Div, du,
               bin(BinaryOp::Pow, Expr::apply("cos", {u}), Expr::constant(2)));
  if (fn == "asin")
    return bin(BinaryOp::Div, du,
               Expr::apply("sqrt",
                           {bin(BinaryOp::Sub, Expr::constant(1),
                                bin(BinaryOp::Pow, u, Expr::constant(2)))}));
  if (fn == "acos")
    return Expr::negate(
        bin(BinaryOp::Div, du,
            Expr::apply("sqrt",
                        {bin(BinaryOp::Sub, Expr::constant(1),
                             bin(BinaryOp::Pow, u, Expr::constant(2)))})));
  if (fn == "atan")
    return bin(BinaryOp::Div, du,
               bin(BinaryOp::Add, Expr::constant(1),
                   bin(BinaryOp::Pow, u, Expr::constant(2))));
  if (fn == "exp") return bin(BinaryOp::Mul, e, du);
  if (fn == "log") return bin(BinaryOp::Div, du, u);
  if (fn == "sqrt")
    return bin(BinaryOp::Div, du,
               bin(BinaryOp::Mul, Expr::constant(2), e));
  if (fn == "abs")
    throw DiffError("cannot differentiate abs");
  throw DiffError("cannot differentiate unknown function '" + fn + "'");
}

Expr diff_pow(const Expr& e, const std::string& var) {
  const Expr& u = e.lhs();
  const Expr& v = e.rhs();
  bool u_dep = u.depends_on(var);
  bool v_dep = v.depends_on(var);
  if (!u_dep && !v_dep) return Expr::constant(0.0);
  if (!v_dep) {
    // d(u^v) = v * u^(v-1) * du  for exponents free of var
    Expr vm1 = v.is_constant()
                   ? Expr::constant(v.constant_value() - 1)
                   : bin(BinaryOp::Sub, v, Expr::constant(1));
    return bin(BinaryOp::Mul,
               bin(BinaryOp::Mul, v, bin(BinaryOp::Pow, u, vm1)),
               diff_raw(u, var));
  }
  if (!u_dep) {
    // d(u^v) = u^v * log(u) * dv
    return bin(BinaryOp::Mul, bin(BinaryOp::Mul, e, Expr::apply("log", {u})),
               diff_raw(v, var));
  }
  // General case: u^v * (dv*log(u) + v*du/u)
  return bin(
      BinaryOp::Mul, e,
      bin(BinaryOp::Add,
          bin(BinaryOp::Mul, diff_raw(v, var), Expr::apply("log", {u})),
          bin(BinaryOp::Div, bin(BinaryOp::Mul, v, diff_raw(u, var)), u)));
}

Expr diff_raw(const Expr& e, const std::string& var) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return Expr::constant(0.0);
    case Expr::Kind::Variable:
      return Expr::constant(e.name() == var && e.name() != "pi" ? 1.0 : 0.0);
    case Expr::Kind::Negate:
      return Expr::negate(diff_raw(e.operand(), var));
    case Expr::Kind::Apply:
      return diff_apply(e, var);
    case Expr::Kind::Binary: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      switch (e.op()) {
        case BinaryOp::Add:
          return bin(BinaryOp::Add, diff_raw(u, var), diff_raw(v, var));
        case BinaryOp::Sub:
          return bin(BinaryOp::Sub, diff_raw(u, var), diff_raw(v, var));
        case BinaryOp::Mul:
          return bin(BinaryOp::Add,
                     bin(BinaryOp::Mul, diff_raw(u, var), v),
                     bin(BinaryOp::Mul, u, diff_raw(v, var)));
        case BinaryOp::Div:
          return bin(BinaryOp::Div,
                     bin(BinaryOp::Sub,
                         bin(BinaryOp::Mul, diff_raw(u, var), v),
                         bin(BinaryOp::Mul, u, diff_raw(v, var))),
                     bin(BinaryOp::Pow, v, Expr::constant(2)));
        case BinaryOp::Pow:
          return diff_pow(e, var);
      }
    }
  }
  throw DiffError("unreachable expression kind");
}

}  // namespace

Expr diff(const Expr& e, const std::string& var) {
  return simplify_zero(diff_raw(e, var));
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

double eval_rec(const Expr& e, const Binding& env, bool& domain_error) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.constant_value();
    case Expr::Kind::Variable: {
      if (e.name() == "pi") return std::numbers::pi;
      auto it = env.find(e.name());
      if (it == env.end())
        throw EvalError("unbound variable '" + e.name() + "'");
      return it->second;
    }
    case Expr::Kind::Negate:
      return -eval_rec(e.operand(), env, domain_error);
    case Expr::Kind::Binary: {
      double a = eval_rec(e.lhs(), env, domain_error);
      double b = eval_rec(e.rhs(), env, domain_error);
      double r = 0.0;
      switch (e.op()) {
        case BinaryOp::Add: r = a + b; break;
        case BinaryOp::Sub: r = a - b; break;
        case BinaryOp::Mul: r = a * b; break;
        case BinaryOp::Div: r = a / b; break;
        case BinaryOp::Pow: r = std::pow(a, b); break;
      }
      if (std::isnan(r) && !std::isnan(a) && !std::isnan(b))
        domain_error = true;
      return r;
    }
    case Expr::Kind::Apply: {
      double x = eval_rec(e.args()[0], env, domain_error);
      double r = 0.0;
      const std::string& fn = e.name();
      if (fn == "sin") r = std::sin(x);
      else if (fn == "cos") r = std::cos(x);
      else if (fn == "tan") r = std::tan(x);
      else if (fn == "asin") r = std::asin(x);
      else if (fn == "acos") r = std::acos(x);
      else if (fn == "atan") r = std::atan(x);
      else if (fn == "exp") r = std::exp(x);
      else if (fn == "log") r = std::log(x);
      else if (fn == "sqrt") r = std::sqrt(x);
      else if (fn == "abs") r = std::fabs(x);
      else throw EvalError("unknown function '" + fn + "'");
      if (std::isnan(r) && !std::isnan(x)) domain_error = true;
      return r;
    }
  }
  throw EvalError("unreachable expression kind");
}

}  // namespace

double evaluate(const Expr& e, const Binding& env, bool* domain_error) {
  bool flag = false;
  double r = eval_rec(e, env, flag);
  if (domain_error) *domain_error = flag;
  return r;
}

std::vector<double> evaluate_grid(const Expr& e,
                                  const std::vector<Binding>& table,
                                  bool* domain_error) {
  std::vector<double> out;
  out.reserve(table.size());
  bool flag = false;
  for (const Binding& env : table) {
    bool f = false;
    out.push_back(evaluate(e, env, &f));
    flag = flag || f;
  }
  if (domain_error) *domain_error = flag;
  return out;
}

// ---------------------------------------------------------------------------
// Structural rewriting
// ---------------------------------------------------------------------------

Expr substitute(const Expr& e, const std::string& var,
                const Expr& replacement) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e;
    case Expr::Kind::Variable:
      return e.name() == var ? replacement : e;
    case Expr::Kind::Negate:
      return Expr::negate(substitute(e.operand(), var, replacement));
    case Expr::Kind::Binary:
      return Expr::binary(e.op(), substitute(e.lhs(), var, replacement),
                          substitute(e.rhs(), var, replacement));
    case Expr::Kind::Apply: {
      std::vector<Expr> args;
      args.reserve(e.args().size());
      for (const Expr& a : e.args())
        args.push_back(substitute(a, var, replacement));
      return Expr::apply(e.name(), std::move(args));
    }
  }
  return e;
}

Expr replace_subtree(const Expr& e, const Expr& target,
                     const Expr& replacement) {
  if (e == target) return replacement;
  switch (e.kind()) {
    case Expr::Kind::Constant:
    case Expr::Kind::Variable:
      return e;
    case Expr::Kind::Negate:
      return Expr::negate(replace_subtree(e.operand(), target, replacement));
    case Expr::Kind::Binary:
      return Expr::binary(e.op(),
                          replace_subtree(e.lhs(), target, replacement),
                          replace_subtree(e.rhs(), target, replacement));
    case Expr::Kind::Apply: {
      std::vector<Expr> args;
      args.reserve(e.args().size());
      for (const Expr& a : e.args())
        args.push_back(replace_subtree(a, target, replacement));
      return Expr::apply(e.name(), std::move(args));
    }
  }
  return e;
}

namespace {

void collect_variables(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return;
    case Expr::Kind::Variable:
      if (e.name() != "pi") out.insert(e.name());
      return;
    case Expr::Kind::Negate:
      collect_variables(e.operand(), out);
      return;
    case Expr::Kind::Binary:
      collect_variables(e.lhs(), out);
      collect_variables(e.rhs(), out);
      return;
    case Expr::Kind::Apply:
      for (const Expr& a : e.args()) collect_variables(a, out);
      return;
  }
}

}  // namespace

std::vector<std::string> variables_of(const Expr& e) {
  std::set<std::string> names;
  collect_variables(e, names);
  return std::vector<std::string>(names.begin(), names.end());
}

}  // namespace calc
