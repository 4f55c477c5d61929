#include "eulerclass/curve.hpp"

#include <cmath>

#include "eulerclass/quadrature.hpp"

namespace eulerclass {

namespace {

constexpr Real kCurveStep = 1e-5;

/// Central difference in t, switching to second-order one-sided stencils at
/// the parameter interval's ends.
Vec param_derivative(const std::function<Vec(Real)>& f, Real t, Real h) {
  if (t - h >= 0.0 && t + h <= 1.0)
    return (f(t + h) - f(t - h)) / (2.0 * h);
  if (t + 2.0 * h <= 1.0)
    return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h);
  return (3.0 * f(t) - 4.0 * f(t - h) + f(t - 2.0 * h)) / (2.0 * h);
}

} // namespace

Vec CurveSegment::eval_velocity(Real t) const {
  if (velocity) return velocity(t);
  return param_derivative(point, t, kCurveStep);
}

Vec CurveSegment::eval_acceleration(Real t) const {
  if (acceleration) return acceleration(t);
  if (velocity) return param_derivative(velocity, t, kCurveStep);
  auto v = [this](Real s) { return param_derivative(point, s, kCurveStep); };
  return param_derivative(v, t, 1e-4);
}

CurveSegment CurveSegment::line(const Chart& chart, const Vec& a, const Vec& b) {
  CurveSegment seg;
  seg.chart = chart;
  seg.point = [a, b](Real t) { return Vec(a + t * (b - a)); };
  seg.velocity = [a, b](Real) { return Vec(b - a); };
  seg.acceleration = [a](Real) { return Vec(Vec::Zero(a.size())); };
  return seg;
}

Real curve_integral(const CurveSegment& curve, const MatrixField& g, int nodes,
                    const std::function<Real(const Vec&, const Vec&)>& integrand) {
  MappedRule rule = mapped_rule(nodes, 0.0, 1.0);
  std::vector<Real> terms(rule.nodes.size());
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    Real t = rule.nodes[q];
    Vec x = curve.point(t);
    Vec v = curve.eval_velocity(t);
    Mat gx = g.value(g.chart.wrap(x));
    Real speed2 = v.dot(gx * v);
    if (!(speed2 > 1e-24))
      throw domain_error("curve_integral: vanishing speed at a quadrature node");
    terms[q] = rule.weights[q] * integrand(x, v) * std::sqrt(speed2);
  }
  return pairwise_sum(terms);
}

Real curve_length(const CurveSegment& curve, const MatrixField& g, int nodes) {
  return curve_integral(curve, g, nodes, [](const Vec&, const Vec&) { return 1.0; });
}

std::vector<Real> CurvedPolygon::exterior_angles(const MatrixField& g) const {
  std::vector<Real> angles;
  const std::size_t m = segments.size();
  for (std::size_t k = 0; k < m; ++k) {
    const CurveSegment& in = segments[k];
    const CurveSegment& out = segments[(k + 1) % m];
    Vec x = in.point(1.0);
    Vec vin = in.eval_velocity(1.0);
    Vec vout = out.eval_velocity(0.0);
    Mat gx = g.value(g.chart.wrap(x));
    // Signed angle from incoming to outgoing tangent: the cross term is the
    // g-area form on the pair, the dot term the g-inner product.
    Real sg = in.chart.orientation * std::sqrt(gx.determinant());
    Real cross = sg * (vin[0] * vout[1] - vin[1] * vout[0]);
    Real dot = vin.dot(gx * vout);
    angles.push_back(std::atan2(cross, dot));
  }
  return angles;
}

void CurvedPolygon::validate_closed(Real tol) const {
  require(!segments.empty(), "CurvedPolygon: no segments");
  const std::size_t m = segments.size();
  for (std::size_t k = 0; k < m; ++k) {
    Vec a = segments[k].point(1.0);
    Vec b = segments[(k + 1) % m].point(0.0);
    Vec d = segments[k].chart.wrap(a) - segments[k].chart.wrap(b);
    require(d.cwiseAbs().maxCoeff() <= tol,
            "CurvedPolygon: segments do not concatenate into a closed loop");
  }
}

Real polygon_interior_integral(const CurvedPolygon& polygon, const MatrixField& g,
                               int nodes,
                               const std::function<Real(const Vec&)>& density) {
  require(static_cast<bool>(polygon.interior),
          "polygon_interior_integral: polygon has no interior map");
  MappedRule rule = mapped_rule(nodes, 0.0, 1.0);
  const Real hmap = 1e-6;
  auto map = polygon.interior;
  std::vector<Real> terms(rule.nodes.size() * rule.nodes.size());
  int count = static_cast<int>(terms.size());
  Real total = parallel_sum(count, [&](int flat) {
    int a = flat / nodes, b = flat % nodes;
    Real s = rule.nodes[static_cast<std::size_t>(a)];
    Real t = rule.nodes[static_cast<std::size_t>(b)];
    Vec x = map(s, t);
    // Jacobian of the interior map by central differences in the unit square.
    auto col = [&](int which) {
      Real u = which == 0 ? s : t;
      Real h = std::min(hmap, std::min(u, 1.0 - u));
      if (h <= 0) h = hmap; // one-sided at the square's edge
      Real up = std::min(u + h, 1.0), dn = std::max(u - h, 0.0);
      Vec pu = which == 0 ? map(up, t) : map(s, up);
      Vec pd = which == 0 ? map(dn, t) : map(s, dn);
      return Vec((pu - pd) / (up - dn));
    };
    Vec dxds = col(0), dxdt = col(1);
    Real jac = dxds[0] * dxdt[1] - dxds[1] * dxdt[0];
    Mat gx = g.value(g.chart.wrap(x));
    Real dA = std::sqrt(gx.determinant()) * std::abs(jac);
    return rule.weights[static_cast<std::size_t>(a)] *
           rule.weights[static_cast<std::size_t>(b)] * density(x) * dA;
  });
  return total;
}

} // namespace eulerclass
