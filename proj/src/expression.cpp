#include "eulerclass/expression.hpp"

#include <cctype>
#include <cmath>
#include <map>

namespace eulerclass {

struct Expression::Node {
  enum class Op {
    Constant,
    Variable,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt
  };
  Op op = Op::Constant;
  Real value = 0;
  int var = 0;
  NodePtr a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;
using Op = Node::Op;

NodePtr constant(Real v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = v;
  return n;
}

NodePtr variable(int i) {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  n->var = i;
  return n;
}

NodePtr unary(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  return n;
}

bool is_const(const NodePtr& n, Real v) {
  return n->op == Op::Constant && n->value == v;
}

NodePtr binary(Op op, NodePtr a, NodePtr b) {
  // Light simplification keeps derivative trees small.
  if (op == Op::Add) {
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
  }
  if (op == Op::Sub && is_const(b, 0)) return a;
  if (op == Op::Mul) {
    if (is_const(a, 0) || is_const(b, 0)) return constant(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
  }
  if (op == Op::Div && is_const(a, 0)) return constant(0);
  if (op == Op::Pow && is_const(b, 1)) return a;
  if (a->op == Op::Constant && b->op == Op::Constant) {
    switch (op) {
      case Op::Add: return constant(a->value + b->value);
      case Op::Sub: return constant(a->value - b->value);
      case Op::Mul: return constant(a->value * b->value);
      default: break;
    }
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Real eval_node(const Node& n, const Vec& x) {
  switch (n.op) {
    case Op::Constant: return n.value;
    case Op::Variable: return x[n.var];
    case Op::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Op::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Op::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Op::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
    case Op::Pow: return std::pow(eval_node(*n.a, x), eval_node(*n.b, x));
    case Op::Neg: return -eval_node(*n.a, x);
    case Op::Sin: return std::sin(eval_node(*n.a, x));
    case Op::Cos: return std::cos(eval_node(*n.a, x));
    case Op::Exp: return std::exp(eval_node(*n.a, x));
    case Op::Log: return std::log(eval_node(*n.a, x));
    case Op::Sqrt: return std::sqrt(eval_node(*n.a, x));
  }
  return 0;
}

NodePtr diff_node(const NodePtr& n, int i) {
  switch (n->op) {
    case Op::Constant: return constant(0);
    case Op::Variable: return constant(n->var == i ? 1.0 : 0.0);
    case Op::Add: return binary(Op::Add, diff_node(n->a, i), diff_node(n->b, i));
    case Op::Sub: return binary(Op::Sub, diff_node(n->a, i), diff_node(n->b, i));
    case Op::Mul:
      return binary(Op::Add, binary(Op::Mul, diff_node(n->a, i), n->b),
                    binary(Op::Mul, n->a, diff_node(n->b, i)));
    case Op::Div:
      return binary(Op::Div,
                    binary(Op::Sub, binary(Op::Mul, diff_node(n->a, i), n->b),
                           binary(Op::Mul, n->a, diff_node(n->b, i))),
                    binary(Op::Mul, n->b, n->b));
    case Op::Pow: {
      if (n->b->op == Op::Constant) {
        // d(a^c) = c a^(c-1) a'
        NodePtr p = binary(Op::Pow, n->a, constant(n->b->value - 1.0));
        return binary(Op::Mul, constant(n->b->value),
                      binary(Op::Mul, p, diff_node(n->a, i)));
      }
      // a^b = exp(b log a)
      NodePtr rewritten = unary(Op::Exp, binary(Op::Mul, n->b, unary(Op::Log, n->a)));
      return diff_node(rewritten, i);
    }
    case Op::Neg: return unary(Op::Neg, diff_node(n->a, i));
    case Op::Sin: return binary(Op::Mul, unary(Op::Cos, n->a), diff_node(n->a, i));
    case Op::Cos:
      return unary(Op::Neg, binary(Op::Mul, unary(Op::Sin, n->a), diff_node(n->a, i)));
    case Op::Exp: return binary(Op::Mul, unary(Op::Exp, n->a), diff_node(n->a, i));
    case Op::Log: return binary(Op::Div, diff_node(n->a, i), n->a);
    case Op::Sqrt:
      return binary(Op::Div, diff_node(n->a, i),
                    binary(Op::Mul, constant(2.0), unary(Op::Sqrt, n->a)));
  }
  return constant(0);
}

std::string print_node(const Node& n) {
  auto wrap = [](const std::string& s) { return "(" + s + ")"; };
  switch (n.op) {
    case Op::Constant: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%g", n.value);
      return buf;
    }
    case Op::Variable: return Expression::coordinate_names()[static_cast<std::size_t>(n.var)];
    case Op::Add: return wrap(print_node(*n.a) + " + " + print_node(*n.b));
    case Op::Sub: return wrap(print_node(*n.a) + " - " + print_node(*n.b));
    case Op::Mul: return wrap(print_node(*n.a) + " * " + print_node(*n.b));
    case Op::Div: return wrap(print_node(*n.a) + " / " + print_node(*n.b));
    case Op::Pow: return wrap(print_node(*n.a) + " ^ " + print_node(*n.b));
    case Op::Neg: return "(-" + print_node(*n.a) + ")";
    case Op::Sin: return "sin" + wrap(print_node(*n.a));
    case Op::Cos: return "cos" + wrap(print_node(*n.a));
    case Op::Exp: return "exp" + wrap(print_node(*n.a));
    case Op::Log: return "log" + wrap(print_node(*n.a));
    case Op::Sqrt: return "sqrt" + wrap(print_node(*n.a));
  }
  return "?";
}

class Parser {
public:
  Parser(const std::string& text, int dim) : text_(text), dim_(dim) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      throw expression_error("unexpected trailing input", pos_);
    return e;
  }

private:
  const std::string& text_;
  int dim_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr e = parse_product();
    while (true) {
      if (consume('+')) e = binary(Op::Add, e, parse_product());
      else if (consume('-')) e = binary(Op::Sub, e, parse_product());
      else return e;
    }
  }

  NodePtr parse_product() {
    NodePtr e = parse_unary();
    while (true) {
      if (consume('*')) e = binary(Op::Mul, e, parse_unary());
      else if (consume('/')) e = binary(Op::Div, e, parse_unary());
      else return e;
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) return unary(Op::Neg, parse_unary());
    if (consume('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (consume('^')) {
      // right associative; exponent may itself be signed
      NodePtr exp = parse_unary_power();
      return binary(Op::Pow, base, exp);
    }
    return base;
  }

  NodePtr parse_unary_power() {
    if (consume('-')) return unary(Op::Neg, parse_unary_power());
    return parse_power();
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw expression_error("unexpected end of expression", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!consume(')')) throw expression_error("missing ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_symbol();
    throw expression_error(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    try {
      return constant(std::stod(text_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      throw expression_error("malformed number", start);
    }
  }

  NodePtr parse_symbol() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalnum(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "pi") return constant(M_PI);
    if (name == "e") return constant(M_E);
    static const std::map<std::string, Op> funcs = {{"sin", Op::Sin},
                                                    {"cos", Op::Cos},
                                                    {"exp", Op::Exp},
                                                    {"log", Op::Log},
                                                    {"sqrt", Op::Sqrt}};
    auto it = funcs.find(name);
    if (it != funcs.end()) {
      if (!consume('(')) throw expression_error("expected '(' after " + name, pos_);
      NodePtr arg = parse_sum();
      if (!consume(')')) throw expression_error("missing ')'", pos_);
      return unary(it->second, arg);
    }
    const auto& coords = Expression::coordinate_names();
    for (int i = 0; i < dim_; ++i)
      if (name == coords[static_cast<std::size_t>(i)]) return variable(i);
    throw expression_error("unknown symbol '" + name + "'", start);
  }
};

} // namespace

const std::vector<std::string>& Expression::coordinate_names() {
  static const std::vector<std::string> names = {"u", "v", "w", "x"};
  return names;
}

Expression Expression::parse(const std::string& text, int dim) {
  require(dim >= 1 && dim <= 4, "Expression: 1 to 4 coordinates supported");
  Parser p(text, dim);
  return Expression(p.run());
}

Real Expression::eval(const Vec& x) const {
  require(valid(), "Expression: empty");
  return eval_node(*node_, x);
}

Expression Expression::derivative(int coordinate) const {
  require(valid(), "Expression: empty");
  return Expression(diff_node(node_, coordinate));
}

std::string Expression::to_string() const {
  return valid() ? print_node(*node_) : "<empty>";
}

ScalarField expression_scalar_field(const Chart& chart, const std::string& text) {
  Expression e = Expression::parse(text, chart.dim);
  std::vector<Expression> d1(static_cast<std::size_t>(chart.dim));
  std::vector<std::vector<Expression>> d2(
      static_cast<std::size_t>(chart.dim),
      std::vector<Expression>(static_cast<std::size_t>(chart.dim)));
  for (int i = 0; i < chart.dim; ++i) {
    d1[static_cast<std::size_t>(i)] = e.derivative(i);
    for (int j = 0; j < chart.dim; ++j)
      d2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          d1[static_cast<std::size_t>(i)].derivative(j);
  }
  ScalarField f;
  f.chart = chart;
  f.value = [e](const Vec& x) { return e.eval(x); };
  f.partial = [d1](int i, const Vec& x) {
    return d1[static_cast<std::size_t>(i)].eval(x);
  };
  f.partial2 = [d2](int i, int j, const Vec& x) {
    return d2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
  };
  return f;
}

VectorField expression_one_form(const Chart& chart,
                                const std::vector<std::string>& components) {
  require(static_cast<int>(components.size()) == chart.dim,
          "expression_one_form: one component per coordinate");
  std::vector<ScalarField> comp;
  comp.reserve(components.size());
  for (const auto& s : components) comp.push_back(expression_scalar_field(chart, s));
  VectorField f;
  f.chart = chart;
  const int n = chart.dim;
  f.value = [comp, n](const Vec& x) {
    Vec r(n);
    for (int i = 0; i < n; ++i) r[i] = comp[static_cast<std::size_t>(i)].value(x);
    return r;
  };
  f.partial = [comp, n](int i, const Vec& x) {
    Vec r(n);
    for (int j = 0; j < n; ++j) r[j] = comp[static_cast<std::size_t>(j)].partial(i, x);
    return r;
  };
  f.partial2 = [comp, n](int i, int j, const Vec& x) {
    Vec r(n);
    for (int k = 0; k < n; ++k)
      r[k] = comp[static_cast<std::size_t>(k)].partial2(i, j, x);
    return r;
  };
  return f;
}

MatrixField expression_metric(const Chart& chart,
                              const std::vector<std::string>& entries) {
  const int n = chart.dim;
  require(static_cast<int>(entries.size()) == n * n,
          "expression_metric: dim*dim row-major entries expected");
  std::vector<ScalarField> comp;
  comp.reserve(entries.size());
  for (const auto& s : entries) comp.push_back(expression_scalar_field(chart, s));
  MatrixField f;
  f.chart = chart;
  f.value = [comp, n](const Vec& x) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = comp[static_cast<std::size_t>(i * n + j)].value(x);
    return m;
  };
  f.partial = [comp, n](int k, const Vec& x) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = comp[static_cast<std::size_t>(i * n + j)].partial(k, x);
    return m;
  };
  f.partial2 = [comp, n](int k, int l, const Vec& x) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = comp[static_cast<std::size_t>(i * n + j)].partial2(k, l, x);
    return m;
  };
  return f;
}

} // namespace eulerclass
