#include "eulerclass/surface.hpp"

#include <cmath>

#include "eulerclass/calculus.hpp"

namespace eulerclass {

BundleGeometry tangent_bundle(const Chart& chart, const MatrixField& g,
                              const Coeffs3Field& connection) {
  BundleGeometry b;
  b.chart = chart;
  b.rank = chart.dim;
  b.metric = g;
  b.connection = connection;
  b.frame_orientation = chart.orientation;
  return b;
}

Coeffs3Field surface_connection(const SurfaceGeometry& s, const EngineSet& engines) {
  if (s.connection) return *s.connection;
  return christoffel_field(s.metric, engines.base);
}

ScalarField gauss_curvature(const MatrixField& g, const EngineSet& engines) {
  BundleGeometry tm =
      tangent_bundle(g.chart, g, christoffel_field(g, engines.base));
  BundleGeometry onb = orthonormalize_frame(tm, engines.base);
  FormMatrixField omega = curvature(onb, engines);
  ScalarField out;
  out.chart = g.chart;
  Real s = g.chart.orientation;
  out.value = [omega, g, s](const Vec& x) {
    FormD pf = pfaffian(omega.value(x));
    return pf.top_coefficient() / (s * std::sqrt(g.value(x).determinant()));
  };
  return out;
}

Real gauss_curvature_coordinate(const MatrixField& g, const EngineSet& engines,
                                const Vec& x) {
  BundleGeometry tm =
      tangent_bundle(g.chart, g, christoffel_field(g, engines.base));
  FormMatrixD omega = curvature(tm, engines).value(x);
  Mat gx = g.value(x);
  // R_1212 = g_1m R_12{}^m{}_2 in 0-based indices (0,1).
  int idx[2] = {0, 1};
  Real r1212 = 0;
  for (int m = 0; m < 2; ++m)
    r1212 += gx(0, m) * omega(m, 1)(std::span<const int>(idx, 2));
  return r1212 / gx.determinant();
}

Coeffs3Field difference_tensor(const SurfaceGeometry& s, const EngineSet& engines) {
  Coeffs3Field lc = christoffel_field(s.metric, engines.base);
  if (!s.connection) {
    Coeffs3Field zero;
    zero.chart = s.chart;
    const int n = s.chart.dim;
    zero.value = [n](const Vec&) { return Coeffs3(n, n); };
    zero.partial = [n](int, const Vec&) { return Coeffs3(n, n); };
    return zero;
  }
  Coeffs3Field conn = *s.connection;
  Coeffs3Field out;
  out.chart = s.chart;
  out.value = [lc, conn](const Vec& x) { return lc.value(x) - conn.value(x); };
  if (lc.has_exact_partial() && conn.has_exact_partial())
    out.partial = [lc, conn](int i, const Vec& x) {
      return lc.partial(i, x) - conn.partial(i, x);
    };
  return out;
}

std::pair<Coeffs3, Coeffs3> split_difference(const Coeffs3& d, const Mat& g) {
  Mat ginv = g.inverse();
  Coeffs3 sym = d, asym = d;
  for (int i = 0; i < d.base_dim(); ++i) {
    Mat t = ginv * d[i].transpose() * g; // endomorphism transpose w.r.t. g
    sym[i] = 0.5 * (d[i] + t);
    asym[i] = 0.5 * (d[i] - t);
  }
  return {sym, asym};
}

Vec b_trace(const Coeffs3& d, const Mat& g) {
  const int n = d.base_dim();
  Mat ginv = g.inverse();
  Vec b = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    Real d_jji = 0, d_jij = 0;
    for (int p = 0; p < n; ++p) {
      d_jji += d[p](p, i);
      for (int q = 0; q < n; ++q) d_jij += ginv(p, q) * (g * d[p])(i, q);
    }
    b[i] = 0.5 * (d_jji - d_jij);
  }
  return b;
}

Vec b_trace_via_antisymmetric_part(const Coeffs3& d, const Mat& g) {
  Coeffs3 da = split_difference(d, g).second;
  const int n = d.base_dim();
  Vec b = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) b[i] += da[k](k, i);
  return b;
}

VectorField b_trace_field(const Coeffs3Field& d, const MatrixField& g) {
  VectorField out;
  out.chart = d.chart;
  out.value = [d, g](const Vec& x) { return b_trace(d.value(x), g.value(x)); };
  return out;
}

FormField gb_density(const SurfaceGeometry& s, const EngineSet& engines) {
  require(s.chart.dim == 2, "gb_density: surface charts only");
  ScalarField k = gauss_curvature(s.metric, engines);
  Coeffs3Field d = difference_tensor(s, engines);
  VectorField b = b_trace_field(d, s.metric);
  ScalarField div_b = codifferential_1(b, s.metric, engines.curvature);
  FormField out;
  out.chart = s.chart;
  const auto g = s.metric;
  Real orient = s.chart.orientation;
  out.value = [k, div_b, g, orient](const Vec& x) {
    Real density = k.value(x) - div_b.value(x);
    FormD w(2, 2);
    w.coeff_at_rank(0) = density * orient * std::sqrt(g.value(x).determinant());
    return w;
  };
  return out;
}

GlobalGBReport global_gb(const SurfaceGeometry& s, const EngineSet& engines,
                         int nodes_per_axis) {
  GlobalGBReport r;
  r.integral = integrate_form(gb_density(s, engines), nodes_per_axis);
  Real chi = r.integral / (2.0 * M_PI);
  r.euler_characteristic = 2 * std::lround(0.5 * chi);
  r.residual = std::abs(r.integral -
                        2.0 * M_PI * static_cast<Real>(r.euler_characteristic));
  return r;
}

Real signed_curvature(const MatrixField& g, const Coeffs3Field& connection,
                      const CurveSegment& curve, Real t) {
  Vec x = curve.point(t);
  Vec xw = g.chart.wrap(x);
  Vec v = curve.eval_velocity(t);
  Vec a = curve.eval_acceleration(t);
  Mat gx = g.value(xw);
  Real speed2 = v.dot(gx * v);
  if (!(speed2 > 1e-24))
    throw domain_error("signed_curvature: vanishing speed");
  Coeffs3 w = connection.value(xw);
  Vec cov = a;
  for (int i = 0; i < 2; ++i) cov += v[i] * (w[i] * v);
  Vec normal = rotate_vector(gx, g.chart.orientation, v); // |normal| = |v|
  return cov.dot(gx * normal) / std::pow(speed2, 1.5);
}

namespace {

LocalGBReport assemble_local_gb(const SurfaceGeometry& s, const VectorField& b1,
                                const CurvedPolygon& polygon, const EngineSet& engines,
                                int interior_nodes, int boundary_nodes) {
  require(s.chart.dim == 2, "local_gb: surface charts only");
  polygon.validate_closed(1e-7);

  ScalarField k = gauss_curvature(s.metric, engines);
  ScalarField div_b = codifferential_1(b1, s.metric, engines.curvature);
  LocalGBReport r;
  r.interior = polygon_interior_integral(
      polygon, s.metric, interior_nodes,
      [&](const Vec& x) { return k.value(x) - div_b.value(x); });

  Coeffs3Field lc = christoffel_field(s.metric, engines.base);
  const MatrixField& g = s.metric;
  for (const auto& seg : polygon.segments) {
    r.boundary += curve_integral(seg, g, boundary_nodes, [&](const Vec& x, const Vec& v) {
      Vec xw = g.chart.wrap(x);
      Mat gx = g.value(xw);
      // Only the B(N) part here; kappa_N is accumulated below on the same rule.
      Vec normal = rotate_vector(gx, g.chart.orientation, v);
      Real speed = std::sqrt(v.dot(gx * v));
      return b1.value(xw).dot(normal) / speed;
    });
    // kappa_N term with the same arclength weight.
    MappedRule rule = mapped_rule(boundary_nodes, 0.0, 1.0);
    std::vector<Real> terms(rule.nodes.size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      Real t = rule.nodes[q];
      Vec v = seg.eval_velocity(t);
      Mat gx = g.value(g.chart.wrap(seg.point(t)));
      Real speed = std::sqrt(v.dot(gx * v));
      terms[q] = rule.weights[q] * signed_curvature(g, lc, seg, t) * speed;
    }
    r.boundary += pairwise_sum(terms);
  }

  for (Real eps : polygon.exterior_angles(s.metric)) r.angle_sum += eps;
  r.residual = std::abs(r.interior + r.boundary + r.angle_sum - 2.0 * M_PI);
  return r;
}

} // namespace

LocalGBReport local_gb_with_b(const SurfaceGeometry& s, const VectorField& b_one_form,
                              const CurvedPolygon& polygon, const EngineSet& engines,
                              int interior_nodes, int boundary_nodes) {
  return assemble_local_gb(s, b_one_form, polygon, engines, interior_nodes,
                           boundary_nodes);
}

LocalGBReport local_gb(const SurfaceGeometry& s, const CurvedPolygon& polygon,
                       const EngineSet& engines, int interior_nodes,
                       int boundary_nodes) {
  Coeffs3Field d = difference_tensor(s, engines);
  VectorField b1 = b_trace_field(d, s.metric);
  return assemble_local_gb(s, b1, polygon, engines, interior_nodes, boundary_nodes);
}

namespace {

/// Covariant derivative of a lowered 3-tensor field t_jkl (stored as
/// Coeffs3 with blocks[j](k, l)).
Coeffs3 covariant_derivative_3tensor(const Coeffs3Field& t, const Coeffs3& gamma,
                                     int i, const Vec& x, DerivativeEngine eng) {
  Coeffs3 dt = eng.partial(t, i, x);
  Coeffs3 tx = t.value(x);
  const int n = tx.base_dim();
  Coeffs3 out = dt;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        Real corr = 0;
        for (int m = 0; m < n; ++m)
          corr += gamma[i](m, j) * tx[m](k, l) + gamma[i](m, k) * tx[j](m, l) +
                  gamma[i](m, l) * tx[j](k, m);
        out[j](k, l) -= corr;
      }
  return out;
}

} // namespace

Real curvature_relation_residual(const MatrixField& g, const Coeffs3Field& b_tensor,
                                 const Vec& x, const EngineSet& engines) {
  const int n = g.chart.dim;
  Coeffs3Field lc = christoffel_field(g, engines.base);

  // Connection nabla' = nabla_g - B and its curvature, lowered.
  Coeffs3Field conn;
  conn.chart = g.chart;
  conn.value = [lc, b_tensor](const Vec& y) { return lc.value(y) - b_tensor.value(y); };
  BundleGeometry tm = tangent_bundle(g.chart, g, conn);
  FormMatrixD h = curvature(tm, engines).value(x);
  Mat gx = g.value(x);
  Mat ginv = gx.inverse();

  BundleGeometry tm_lc = tangent_bundle(g.chart, g, lc);
  FormMatrixD rbar = curvature(tm_lc, engines).value(x);

  // Lowered B field: B_jkl = g_km B_j{}^m{}_l.
  Coeffs3Field b_low;
  b_low.chart = g.chart;
  b_low.value = [b_tensor, g](const Vec& y) {
    Coeffs3 b = b_tensor.value(y);
    Mat gy = g.value(g.chart.wrap(y));
    for (auto& blk : b.blocks) blk = gy * blk;
    return b;
  };
  Coeffs3 gamma = lc.value(x);
  std::vector<Coeffs3> nab_b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    nab_b[static_cast<std::size_t>(i)] =
        covariant_derivative_3tensor(b_low, gamma, i, x, engines.curvature);
  Coeffs3 b = b_low.value(x);

  auto lowered = [&](const FormMatrixD& omega, int i, int j, int k, int l) {
    int idx[2] = {i, j};
    Real acc = 0;
    for (int m = 0; m < n; ++m)
      acc += gx(k, m) * omega(m, l)(std::span<const int>(idx, 2));
    return acc;
  };

  Real res = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Real quad = 0;
          for (int m = 0; m < n; ++m)
            for (int p = 0; p < n; ++p)
              quad += ginv(m, p) * (b[i](k, m) * b[j](p, l) - b[j](k, m) * b[i](p, l));
          Real rhs = lowered(rbar, i, j, k, l) -
                     nab_b[static_cast<std::size_t>(i)][j](k, l) +
                     nab_b[static_cast<std::size_t>(j)][i](k, l) + quad;
          res = std::max(res, std::abs(lowered(h, i, j, k, l) - rhs));
        }
  return res;
}

BDualReport b_dual_check(const MatrixField& g, const Coeffs3Field& b_tensor,
                         const Vec& x, const EngineSet& engines) {
  require(g.chart.dim == 2, "b_dual_check: surface charts only");
  BDualReport out;
  Mat gx = g.value(x);

  // Frame component b of the endomorphism-valued 1-form B in the oriented
  // orthonormal frame: B' = [[0, b], [-b, 0]].
  BundleGeometry tm =
      tangent_bundle(g.chart, g, christoffel_field(g, engines.base));
  FrameData f = orthonormal_frame_at(tm, x, engines.base);
  Coeffs3 b = b_tensor.value(x);
  // Transform the 1-form index with P as well: B'_a = P^i_a P^{-1} B_i P.
  Vec b_frame(2);
  std::vector<Mat> bp(2, Mat::Zero(2, 2));
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i) bp[static_cast<std::size_t>(a)] += f.P(i, a) * (f.P_inv * b[i] * f.P);
  for (int a = 0; a < 2; ++a) b_frame[a] = bp[static_cast<std::size_t>(a)](0, 1);

  // Back to coordinate components: b_i = b_a (P^{-1})^a_i.
  Vec b_coord = Vec::Zero(2);
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a) b_coord[i] += b_frame[a] * f.P_inv(a, i);

  Vec b_one = b_trace(b, gx);
  // star_1 b should reproduce B_i.
  Real sg = g.chart.orientation * std::sqrt(gx.determinant());
  Vec up = gx.inverse() * b_coord;
  Vec star_b(2);
  star_b[0] = -sg * up[1];
  star_b[1] = sg * up[0];
  out.star_residual = (star_b - b_one).cwiseAbs().maxCoeff();

  // Pf(H) against (K - d*_g B) dV_g.
  Coeffs3Field lc = christoffel_field(g, engines.base);
  Coeffs3Field conn;
  conn.chart = g.chart;
  conn.value = [lc, b_tensor](const Vec& y) { return lc.value(y) - b_tensor.value(y); };
  BundleGeometry tm_b = tangent_bundle(g.chart, g, conn);
  BundleGeometry onb = orthonormalize_frame(tm_b, engines.base);
  FormD pf_h = pfaffian(curvature(onb, engines).value(x));

  SurfaceGeometry s{g.chart, g, conn};
  FormD density = gb_density(s, engines).value(x);
  out.pfaffian_residual = (pf_h - density).max_abs();
  return out;
}

} // namespace eulerclass
