#ifndef EULERCLASS_QUADRATURE_HPP
#define EULERCLASS_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "eulerclass/chart.hpp"
#include "eulerclass/field.hpp"

namespace eulerclass {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<Real> nodes, weights;
  static const GaussLegendre& get(int n); // cached per order
};

/// One-dimensional rule mapped to [a, b].
struct MappedRule {
  std::vector<Real> nodes, weights;
};
MappedRule mapped_rule(int n, Real a, Real b);

/// Number of worker threads: min(EULERCLASS_THREADS if set, hardware).
int worker_count();

/// Evaluates f at 0..count-1 in parallel and sums the results by pairwise
/// reduction over the index-ordered values, so the total is independent of
/// the thread count.
Real parallel_sum(int count, const std::function<Real(int)>& f);

Real pairwise_sum(std::vector<Real>& values);

/// Tensor-product Gauss-Legendre integral of a scalar density over a chart
/// box. `nodes_per_axis` applies to every coordinate.
Real integrate_scalar(const Chart& chart, int nodes_per_axis,
                      const std::function<Real(const Vec&)>& density);

/// Integral of a top-degree form over its chart: the single coefficient
/// times the chart orientation sign, tensor-product quadrature.
Real integrate_form(const FormField& top_form, int nodes_per_axis);

/// A chart piece of a closed manifold together with the top form to
/// integrate on it; pieces overlap at most in measure zero.
struct AtlasPiece {
  FormField form;
  int nodes_per_axis = 64;
};

Real integrate_atlas(const std::vector<AtlasPiece>& pieces);

/// Quadrature nodes with weights for one chart, exposed for density dumps.
struct NodeSet {
  std::vector<Vec> points;
  std::vector<Real> weights;
};
NodeSet chart_nodes(const Chart& chart, int nodes_per_axis);

} // namespace eulerclass

#endif
