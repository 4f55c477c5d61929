#ifndef EULERCLASS_EXPRESSION_HPP
#define EULERCLASS_EXPRESSION_HPP

#include <memory>
#include <string>
#include <vector>

#include "eulerclass/field.hpp"

namespace eulerclass {

/// Parsed scalar expression in the chart coordinates. Grammar: variables
/// u, v, w, x (by coordinate position), operators + - * / ^, functions sin,
/// cos, exp, log, sqrt, constants pi and e, numeric literals. Supports
/// symbolic differentiation, so expression-built fields carry exact partial
/// callbacks.
class Expression {
public:
  Expression() = default;

  /// Parses `text` for a chart of the given dimension (<= 4 coordinates).
  static Expression parse(const std::string& text, int dim);

  Real eval(const Vec& point) const;
  Expression derivative(int coordinate) const;

  bool valid() const { return static_cast<bool>(node_); }
  std::string to_string() const;

  static const std::vector<std::string>& coordinate_names();

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  explicit Expression(NodePtr n) : node_(std::move(n)) {}

private:
  NodePtr node_;
};

/// Parse error with position information.
class expression_error : public std::invalid_argument {
public:
  expression_error(const std::string& what, std::size_t position)
      : std::invalid_argument(what), position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_ = 0;
};

/// Scalar field from one expression; exact first and second partials come
/// from symbolic differentiation.
ScalarField expression_scalar_field(const Chart& chart, const std::string& text);

/// 1-form (covector components) field from per-coordinate expressions.
VectorField expression_one_form(const Chart& chart,
                                const std::vector<std::string>& components);

/// Symmetric matrix field from row-major expressions (dim x dim entries).
MatrixField expression_metric(const Chart& chart,
                              const std::vector<std::string>& entries);

} // namespace eulerclass

#endif
