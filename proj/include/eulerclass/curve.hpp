#ifndef EULERCLASS_CURVE_HPP
#define EULERCLASS_CURVE_HPP

#include <functional>
#include <vector>

#include "eulerclass/field.hpp"

namespace eulerclass {

/// Parametric curve segment t in [0,1] -> chart point. The map must be
/// smooth and must not wrap across a periodic seam (coordinates are plain
/// reals; the chart wraps field evaluations itself).
struct CurveSegment {
  Chart chart;
  std::function<Vec(Real)> point;
  std::function<Vec(Real)> velocity;      // optional exact derivative
  std::function<Vec(Real)> acceleration;  // optional exact second derivative

  Vec eval_velocity(Real t) const;
  Vec eval_acceleration(Real t) const;

  /// Straight coordinate segment from a to b.
  static CurveSegment line(const Chart& chart, const Vec& a, const Vec& b);
};

/// Arclength integral int_0^1 f(x, v) |v|_g dt by Gauss-Legendre; the
/// integrand receives the (unnormalized) velocity for direction-dependent
/// terms. Throws if the speed degenerates at a quadrature node.
Real curve_integral(const CurveSegment& curve, const MatrixField& g, int nodes,
                    const std::function<Real(const Vec&, const Vec&)>& integrand);

/// Curve length in the metric g.
Real curve_length(const CurveSegment& curve, const MatrixField& g, int nodes);

/// Closed piecewise-smooth boundary with a parametric description of the
/// enclosed domain. Segments are listed positively oriented (domain on the
/// left for orientation +1 charts); the interior map sends the open unit
/// square onto the enclosed domain, smoothly, with nondegenerate Jacobian
/// except possibly on a measure-zero set.
struct CurvedPolygon {
  std::vector<CurveSegment> segments;
  std::function<Vec(Real, Real)> interior; // (s,t) in [0,1]^2 -> chart point

  /// Exterior turning angles at the vertices, from one-sided tangents in the
  /// metric g, signed by the chart orientation.
  std::vector<Real> exterior_angles(const MatrixField& g) const;

  /// Checks that segment endpoints concatenate (tolerance in chart coords).
  void validate_closed(Real tol = 1e-9) const;
};

/// Integral of a scalar density over the polygon's interior against the
/// metric area element dA_g, using the interior map and tensor quadrature.
Real polygon_interior_integral(const CurvedPolygon& polygon, const MatrixField& g,
                               int nodes,
                               const std::function<Real(const Vec&)>& density);

} // namespace eulerclass

#endif
