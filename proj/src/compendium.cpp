#include "eulerclass/compendium.hpp"

#include <cmath>
#include <map>

namespace eulerclass {

namespace {

VectorField zero_one_form(const Chart& chart) {
  return constant_field<Vec>(chart, Vec::Zero(chart.dim), Vec::Zero(chart.dim));
}

VectorField scaled(const VectorField& f, Real c) {
  VectorField out;
  out.chart = f.chart;
  out.value = [f, c](const Vec& x) { return Vec(c * f.value(x)); };
  if (f.has_exact_partial())
    out.partial = [f, c](int i, const Vec& x) { return Vec(c * f.partial(i, x)); };
  if (f.has_exact_partial2())
    out.partial2 = [f, c](int i, int j, const Vec& x) {
      return Vec(c * f.partial2(i, j, x));
    };
  return out;
}

} // namespace

AnsatzInput make_ansatz(const MatrixField& g, const VectorField& phi, Real a, Real b,
                        Real c) {
  AnsatzInput in;
  in.g = g;
  in.alpha = scaled(phi, a);
  in.beta = scaled(phi, b);
  in.gamma = scaled(phi, c);
  in.has_scalar_coefficients = true;
  in.a = a;
  in.b = b;
  in.c = c;
  in.phi = phi;
  return in;
}

AnsatzInput make_ansatz_general(const MatrixField& g, const VectorField& alpha,
                                const VectorField& beta, const VectorField& gamma) {
  AnsatzInput in;
  in.g = g;
  in.alpha = alpha;
  in.beta = beta;
  in.gamma = gamma;
  in.phi = zero_one_form(g.chart);
  return in;
}

Coeffs3Field build_ansatz(const AnsatzInput& in, DerivativeEngine base) {
  Coeffs3Field lc = christoffel_field(in.g, base);
  Coeffs3Field out;
  out.chart = in.g.chart;
  const int n = in.g.chart.dim;
  const auto g = in.g;
  const auto alpha = in.alpha, beta = in.beta, gamma = in.gamma;
  auto addition = [n](const Mat& gx, const Vec& av, const Vec& bv, const Vec& cv) {
    Vec c_up = gx.inverse() * cv;
    Coeffs3 add(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          add[i](k, j) = av[i] * (k == j) + bv[j] * (k == i) + c_up[k] * gx(i, j);
    return add;
  };
  out.value = [lc, g, alpha, beta, gamma, addition](const Vec& x) {
    return lc.value(x) +
           addition(g.value(x), alpha.value(x), beta.value(x), gamma.value(x));
  };
  if (lc.has_exact_partial() && g.has_exact_partial() && alpha.has_exact_partial() &&
      beta.has_exact_partial() && gamma.has_exact_partial()) {
    out.partial = [lc, g, alpha, beta, gamma, n](int l, const Vec& x) {
      Coeffs3 d = lc.partial(l, x);
      Mat gx = g.value(x);
      Mat ginv = gx.inverse();
      Mat dg = g.partial(l, x);
      Mat dginv = inverse_metric_partial(ginv, dg);
      Vec av = alpha.value(x), bv = beta.value(x), cv = gamma.value(x);
      Vec dav = alpha.partial(l, x), dbv = beta.partial(l, x), dcv = gamma.partial(l, x);
      Vec c_up = ginv * cv;
      Vec dc_up = dginv * cv + ginv * dcv;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j)
            d[i](k, j) += dav[i] * (k == j) + dbv[j] * (k == i) + dc_up[k] * gx(i, j) +
                          c_up[k] * dg(i, j);
      return d;
    };
  }
  return out;
}

Coeffs3Field torsion(const Coeffs3Field& connection) {
  Coeffs3Field out;
  out.chart = connection.chart;
  out.value = [connection](const Vec& x) {
    Coeffs3 w = connection.value(x);
    Coeffs3 t = w;
    for (int i = 0; i < w.base_dim(); ++i)
      for (int k = 0; k < w.rank(); ++k)
        for (int j = 0; j < w.base_dim(); ++j) t[i](k, j) = w[i](k, j) - w[j](k, i);
    return t;
  };
  return out;
}

Coeffs3Field ansatz_torsion_closed_form(const AnsatzInput& in) {
  Coeffs3Field out;
  out.chart = in.g.chart;
  const int n = in.g.chart.dim;
  const auto alpha = in.alpha, beta = in.beta;
  out.value = [alpha, beta, n](const Vec& x) {
    Vec d = alpha.value(x) - beta.value(x);
    Coeffs3 t(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) t[i](k, j) = d[i] * (k == j) - d[j] * (k == i);
    return t;
  };
  return out;
}

Coeffs3Field ansatz_nonmetricity_closed_form(const AnsatzInput& in) {
  Coeffs3Field out;
  out.chart = in.g.chart;
  const int n = in.g.chart.dim;
  const auto g = in.g;
  const auto alpha = in.alpha, beta = in.beta, gamma = in.gamma;
  out.value = [g, alpha, beta, gamma, n](const Vec& x) {
    Mat gx = g.value(x);
    Vec av = alpha.value(x);
    Vec bc = beta.value(x) + gamma.value(x);
    Coeffs3 ng(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          ng[i](j, k) = -2.0 * av[i] * gx(j, k) - bc[j] * gx(i, k) - bc[k] * gx(i, j);
    return ng;
  };
  return out;
}

Coeffs3Field ansatz_canonical_metric_closed_form(const AnsatzInput& in,
                                                 DerivativeEngine base) {
  Coeffs3Field lc = christoffel_field(in.g, base);
  Coeffs3Field out;
  out.chart = in.g.chart;
  const int n = in.g.chart.dim;
  const auto g = in.g;
  const auto beta = in.beta, gamma = in.gamma;
  out.value = [lc, g, beta, gamma, n](const Vec& x) {
    Mat gx = g.value(x);
    Vec psi = beta.value(x) - gamma.value(x);
    Vec psi_up = gx.inverse() * psi;
    Coeffs3 eta = lc.value(x);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          eta[i](k, j) += 0.5 * psi[j] * (k == i) - 0.5 * psi_up[k] * gx(i, j);
    return eta;
  };
  return out;
}

namespace {

Tensor4 curvature_tensor4(const FormMatrixD& omega) {
  const int n = omega.dimension();
  const int rank = omega.size();
  require(rank == n, "curvature_tensor4: tangent-bundle curvature expected");
  Tensor4 t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int idx[2] = {i, j};
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          t(i, j, k, l) = omega(k, l)(std::span<const int>(idx, 2));
    }
  return t;
}

OneFormPointData one_form_point_data(const VectorField& f, const Coeffs3& gamma,
                                     const DerivativeEngine& base, const Vec& x) {
  OneFormPointData d;
  d.value = f.value(x);
  const int n = static_cast<int>(d.value.size());
  d.covd = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Vec df = base.partial(f, i, x);
    for (int j = 0; j < n; ++j) {
      Real cov = df[j];
      for (int m = 0; m < n; ++m) cov -= gamma[i](m, j) * d.value[m];
      d.covd(i, j) = cov;
    }
  }
  return d;
}

} // namespace

AnsatzPointData ansatz_point_data(const AnsatzInput& in, const EngineSet& engines,
                                  const Vec& x) {
  AnsatzPointData d;
  d.n = in.g.chart.dim;
  d.g = in.g.value(x);
  d.g_inv = d.g.inverse();
  d.sqrt_det_g = std::sqrt(d.g.determinant());
  Coeffs3Field lc = christoffel_field(in.g, engines.base);
  BundleGeometry tm;
  tm.chart = in.g.chart;
  tm.rank = d.n;
  tm.metric = in.g;
  tm.connection = lc;
  tm.frame_orientation = in.g.chart.orientation;
  d.rbar13 = curvature_tensor4(curvature(tm, engines).value(x));
  d.rbar = Mat::Zero(d.n, d.n);
  for (int j = 0; j < d.n; ++j)
    for (int l = 0; l < d.n; ++l) {
      Real acc = 0;
      for (int i = 0; i < d.n; ++i) acc += d.rbar13(i, j, i, l);
      d.rbar(j, l) = acc;
    }
  d.sbar = d.g_inv.cwiseProduct(d.rbar).sum();
  Coeffs3 gamma_lc = lc.value(x);
  d.alpha = one_form_point_data(in.alpha, gamma_lc, engines.base, x);
  d.beta = one_form_point_data(in.beta, gamma_lc, engines.base, x);
  d.gamma = one_form_point_data(in.gamma, gamma_lc, engines.base, x);
  d.has_scalar_coefficients = in.has_scalar_coefficients;
  d.a = in.a;
  d.b = in.b;
  d.c = in.c;
  d.phi = one_form_point_data(in.phi, gamma_lc, engines.base, x);
  return d;
}

TensorValue TensorValue::scalar(Real v) {
  TensorValue t;
  t.kind = Kind::Scalar;
  t.s = v;
  return t;
}
TensorValue TensorValue::matrix(Mat v) {
  TensorValue t;
  t.kind = Kind::Matrix;
  t.m = std::move(v);
  return t;
}
TensorValue TensorValue::third(Coeffs3 v) {
  TensorValue t;
  t.kind = Kind::Third;
  t.t3 = std::move(v);
  return t;
}
TensorValue TensorValue::fourth(Tensor4 v) {
  TensorValue t;
  t.kind = Kind::Fourth;
  t.t4 = std::move(v);
  return t;
}

Real TensorValue::distance(const TensorValue& o) const {
  require(kind == o.kind, "TensorValue: kind mismatch");
  switch (kind) {
    case Kind::Scalar: return std::abs(s - o.s);
    case Kind::Matrix: return (m - o.m).cwiseAbs().maxCoeff();
    case Kind::Third: {
      Real r = 0;
      for (int i = 0; i < t3.base_dim(); ++i)
        r = std::max(r, (t3[i] - o.t3[i]).cwiseAbs().maxCoeff());
      return r;
    }
    case Kind::Fourth: return (t4 - o.t4).max_abs();
  }
  return 0;
}

DirectContext make_direct_context(const AnsatzInput& in, const EngineSet& engines,
                                  const Vec& x) {
  DirectContext ctx;
  ctx.n = in.g.chart.dim;
  ctx.g = in.g.value(x);
  ctx.g_inv = ctx.g.inverse();
  Coeffs3Field conn = build_ansatz(in, engines.base);
  BundleGeometry tm;
  tm.chart = in.g.chart;
  tm.rank = ctx.n;
  tm.metric = in.g;
  tm.connection = conn;
  tm.frame_orientation = in.g.chart.orientation;
  ctx.christoffel = christoffel_field(in.g, engines.base).value(x);
  ctx.connection = conn.value(x);
  BundleGeometry canonical = canonical_metric_connection(tm, engines.base);
  ctx.canonical = canonical.connection.value(x);
  ctx.torsion = torsion(conn).value(x);
  ctx.nabla_g = non_metricity(tm, engines.base).value(x);
  ctx.r13 = curvature_tensor4(curvature(tm, engines).value(x));
  ctx.h13 = curvature_tensor4(curvature(canonical, engines).value(x));
  return ctx;
}

namespace {

// ---- shared algebra on point data ----------------------------------------

Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }
Mat antisym(const Mat& m) { return 0.5 * (m - m.transpose()); }
Real trace_g(const Mat& m, const Mat& g_inv) { return g_inv.cwiseProduct(m).sum(); }
Mat traceless_sym(const Mat& m, const Mat& g, const Mat& g_inv) {
  Mat s = sym(m);
  return s - (trace_g(s, g_inv) / static_cast<Real>(g.rows())) * g;
}

OneFormPointData combine(const OneFormPointData& a, Real ca, const OneFormPointData& b,
                         Real cb) {
  OneFormPointData out;
  out.value = ca * a.value + cb * b.value;
  out.covd = ca * a.covd + cb * b.covd;
  return out;
}

/// Ricci tensor of the general ansatz, from the trace of the closed-form
/// curvature over the first and third slots (derivation cross-checked against
/// the direct oracle; the 2-form-as-matrix convention is
/// (d xi)_ij = d_i xi_j - d_j xi_i throughout).
Mat ricci_closed(const AnsatzPointData& d) {
  const int n = d.n;
  OneFormPointData xi = combine(d.beta, static_cast<Real>(n - 1), d.gamma, 1.0);
  Real scalar_coeff = -d.codiff(d.gamma) + d.inner(xi, d.gamma);
  Mat r = d.rbar - d.alpha.d() - xi.covd +
          static_cast<Real>(n - 1) * d.beta.value * d.beta.value.transpose() -
          d.gamma.value * d.gamma.value.transpose() + scalar_coeff * d.g;
  return r;
}

Mat rho_closed(const AnsatzPointData& d) {
  const int n = d.n;
  OneFormPointData xi = combine(d.beta, 1.0, d.gamma, static_cast<Real>(n - 1));
  Real scalar_coeff = -d.codiff(d.beta) - d.inner(d.beta, xi);
  Mat r = -d.rbar - d.alpha.d() - xi.covd +
          d.beta.value * d.beta.value.transpose() -
          static_cast<Real>(n - 1) * d.gamma.value * d.gamma.value.transpose() +
          scalar_coeff * d.g;
  return r;
}

Real scalar_closed(const AnsatzPointData& d) {
  const int n = d.n;
  OneFormPointData bmg = combine(d.beta, 1.0, d.gamma, -1.0);
  return d.sbar + static_cast<Real>(n - 1) * d.codiff(bmg) +
         static_cast<Real>(n - 1) *
             (d.norm2(d.beta) + static_cast<Real>(n) * d.inner(d.beta, d.gamma) +
              d.norm2(d.gamma));
}

/// Ricci tensor of the canonical metric connection (alpha = 0 and beta, -gamma
/// both replaced by (beta - gamma)/2 in the general formula).
Mat h_ricci_closed(const AnsatzPointData& d) {
  const int n = d.n;
  OneFormPointData psi = combine(d.beta, 1.0, d.gamma, -1.0);
  Real q = 0.25 * static_cast<Real>(n - 2);
  Real scalar_coeff = 0.5 * d.codiff(psi) - q * d.norm2(psi);
  return d.rbar - 0.5 * static_cast<Real>(n - 2) * psi.covd +
         q * psi.value * psi.value.transpose() + scalar_coeff * d.g;
}

Real tau_closed(const AnsatzPointData& d) {
  const int n = d.n;
  OneFormPointData psi = combine(d.beta, 1.0, d.gamma, -1.0);
  return d.sbar + static_cast<Real>(n - 1) * d.codiff(psi) -
         0.25 * static_cast<Real>((n - 1) * (n - 2)) * d.norm2(psi);
}

Tensor4 curvature13_closed(const AnsatzPointData& d) {
  const int n = d.n;
  Mat da = d.alpha.d();
  Mat covd_b = d.beta.covd;
  Mat covd_c_up = d.gamma.covd * d.g_inv; // nabla_i gamma^k at (i, k)
  const Vec& bv = d.beta.value;
  const Vec& cv = d.gamma.value;
  Vec c_up = d.g_inv * cv;
  Real bc = d.inner(d.beta, d.gamma);
  Tensor4 t = d.rbar13;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Real v = da(i, j) * (k == l);
          v += covd_b(i, l) * (k == j) - covd_b(j, l) * (k == i);
          v += covd_c_up(i, k) * d.g(j, l) - covd_c_up(j, k) * d.g(i, l);
          v += ((k == i) * bv[j] - (k == j) * bv[i]) * bv[l];
          v += (cv[i] * d.g(j, l) - cv[j] * d.g(i, l)) * c_up[k];
          v += bc * ((k == i) * d.g(j, l) - (k == j) * d.g(i, l));
          t(i, j, k, l) += v;
        }
  return t;
}

Tensor4 lower_third_slot(const Tensor4& t13, const Mat& g) {
  const int n = t13.n;
  Tensor4 t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Real acc = 0;
          for (int m = 0; m < n; ++m) acc += g(k, m) * t13(i, j, m, l);
          t(i, j, k, l) = acc;
        }
  return t;
}

Tensor4 curvature04_closed(const AnsatzPointData& d) {
  const int n = d.n;
  Mat da = d.alpha.d();
  Mat covd_b = d.beta.covd;
  Mat covd_c = d.gamma.covd;
  const Vec& bv = d.beta.value;
  const Vec& cv = d.gamma.value;
  Real bc = d.inner(d.beta, d.gamma);
  Tensor4 t = lower_third_slot(d.rbar13, d.g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Real v = da(i, j) * d.g(k, l);
          v += covd_b(i, l) * d.g(k, j) - covd_b(j, l) * d.g(k, i);
          v += covd_c(i, k) * d.g(j, l) - covd_c(j, k) * d.g(i, l);
          v += (d.g(i, k) * bv[j] - d.g(j, k) * bv[i]) * bv[l];
          v += (cv[i] * d.g(j, l) - cv[j] * d.g(i, l)) * cv[k];
          v += bc * (d.g(i, k) * d.g(j, l) - d.g(j, k) * d.g(i, l));
          t(i, j, k, l) += v;
        }
  return t;
}

AnsatzPointData canonical_as_general(const AnsatzPointData& d) {
  // The canonical metric connection is the same family with alpha = 0 and
  // beta, -gamma replaced by (beta - gamma)/2.
  AnsatzPointData c = d;
  OneFormPointData half_psi = combine(d.beta, 0.5, d.gamma, -0.5);
  c.alpha.value = Vec::Zero(d.n);
  c.alpha.covd = Mat::Zero(d.n, d.n);
  c.beta = half_psi;
  c.gamma = combine(half_psi, -1.0, c.alpha, 0.0);
  return c;
}

Tensor4 h13_closed(const AnsatzPointData& d) {
  return curvature13_closed(canonical_as_general(d));
}

/// Kulkarni-Nomizu product (A o B)_ijkl = A_ik B_jl + A_jl B_ik - A_il B_jk
/// - A_jk B_il.
Tensor4 kulkarni_nomizu(const Mat& a, const Mat& b) {
  const int n = static_cast<int>(a.rows());
  Tensor4 t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          t(i, j, k, l) =
              a(i, k) * b(j, l) + a(j, l) * b(i, k) - a(i, l) * b(j, k) - a(j, k) * b(i, l);
  return t;
}

/// Lowered curvature of the canonical metric connection, written with the
/// Kulkarni-Nomizu product. The product's normalization is pinned so that
/// this expression lowers the (1,3) closed form exactly:
///   H_ijkl = Rbar_ijkl
///          + 1/2 (nab_i psi_l g_kj - nab_j psi_l g_ki
///                 - nab_i psi_k g_jl + nab_j psi_k g_il)
///          + 1/4 (g o psi (x) psi)_ijkl - 1/8 |psi|^2 (g o g)_ijkl.
Tensor4 h04_closed(const AnsatzPointData& d) {
  const int n = d.n;
  OneFormPointData psi = combine(d.beta, 1.0, d.gamma, -1.0);
  Mat covd = psi.covd;
  Tensor4 t = lower_third_slot(d.rbar13, d.g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          t(i, j, k, l) += 0.5 * (covd(i, l) * d.g(k, j) - covd(j, l) * d.g(k, i) -
                                  covd(i, k) * d.g(j, l) + covd(j, k) * d.g(i, l));
  Mat pp = psi.value * psi.value.transpose();
  t += 0.25 * kulkarni_nomizu(d.g, pp);
  Tensor4 gg = kulkarni_nomizu(d.g, d.g);
  t -= 0.125 * d.norm2(psi) * gg;
  return t;
}

Mat zeta_closed(const AnsatzPointData& d) {
  // Endomorphism trace of the closed-form curvature:
  // zeta = n d alpha + d(beta + gamma). (The coefficient of d(beta + gamma)
  // comes out of the trace; cross-checked against the direct oracle.)
  return static_cast<Real>(d.n) * d.alpha.d() + d.beta.d() + d.gamma.d();
}

// ---- specialized (scalar a, b, c) groupings -------------------------------

Mat ricci_specialized(const AnsatzPointData& d) {
  const int n = d.n;
  Real bb = static_cast<Real>(n - 1) * d.b + d.c;
  Real quad = static_cast<Real>(n - 1) * d.b * d.b - d.c * d.c;
  Mat pp = d.phi.value * d.phi.value.transpose();
  return d.rbar - d.a * d.phi.d() - 0.5 * bb * d.phi.d() - 0.5 * bb * d.phi.lie(d.g) +
         quad * pp +
         d.c * (-d.codiff(d.phi) + bb * d.norm2(d.phi)) * d.g;
}

Mat rho_specialized(const AnsatzPointData& d) {
  const int n = d.n;
  Real bb = d.b + static_cast<Real>(n - 1) * d.c;
  Real quad = d.b * d.b - static_cast<Real>(n - 1) * d.c * d.c;
  Mat pp = d.phi.value * d.phi.value.transpose();
  return -d.rbar - d.a * d.phi.d() - 0.5 * bb * d.phi.d() - 0.5 * bb * d.phi.lie(d.g) +
         quad * pp +
         d.b * (-d.codiff(d.phi) - bb * d.norm2(d.phi)) * d.g;
}

Real scalar_specialized(const AnsatzPointData& d) {
  const int n = d.n;
  return d.sbar + static_cast<Real>(n - 1) * (d.b - d.c) * d.codiff(d.phi) +
         static_cast<Real>(n - 1) *
             (d.b * d.b + static_cast<Real>(n) * d.b * d.c + d.c * d.c) *
             d.norm2(d.phi);
}

Mat h_ricci_specialized(const AnsatzPointData& d) {
  const int n = d.n;
  Real bc = d.b - d.c;
  Real q = 0.25 * static_cast<Real>(n - 2);
  Mat pp = d.phi.value * d.phi.value.transpose();
  return d.rbar - q * bc * d.phi.d() - q * bc * d.phi.lie(d.g) + q * bc * bc * pp +
         (0.5 * bc * d.codiff(d.phi) - q * bc * bc * d.norm2(d.phi)) * d.g;
}

Real tau_specialized(const AnsatzPointData& d) {
  const int n = d.n;
  Real bc = d.b - d.c;
  return d.sbar + static_cast<Real>(n - 1) * bc * d.codiff(d.phi) -
         0.25 * static_cast<Real>((n - 1) * (n - 2)) * bc * bc * d.norm2(d.phi);
}

Mat zeta_specialized(const AnsatzPointData& d) {
  return (static_cast<Real>(d.n) * d.a + d.b + d.c) * d.phi.d();
}

// ---- direct extraction ----------------------------------------------------

Mat ricci_of(const Tensor4& r13) {
  Mat r = Mat::Zero(r13.n, r13.n);
  for (int j = 0; j < r13.n; ++j)
    for (int l = 0; l < r13.n; ++l) {
      Real acc = 0;
      for (int i = 0; i < r13.n; ++i) acc += r13(i, j, i, l);
      r(j, l) = acc;
    }
  return r;
}

Mat rho_of(const Tensor4& r13, const Mat& g, const Mat& g_inv) {
  const int n = r13.n;
  Mat r = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Real acc = 0;
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m)
            acc += g_inv(i, l) * g(k, m) * r13(i, j, m, l);
      r(j, k) = acc;
    }
  return r;
}

Mat zeta_of(const Tensor4& r13) {
  Mat z = Mat::Zero(r13.n, r13.n);
  for (int i = 0; i < r13.n; ++i)
    for (int j = 0; j < r13.n; ++j) {
      Real acc = 0;
      for (int k = 0; k < r13.n; ++k) acc += r13(i, j, k, k);
      z(i, j) = acc;
    }
  return z;
}

std::vector<CompendiumEntry> build_registry() {
  using TV = TensorValue;
  std::vector<CompendiumEntry> reg;
  auto add = [&reg](std::string name, std::string citation, std::string description,
                    std::function<TV(const AnsatzPointData&)> closed,
                    std::function<TV(const DirectContext&)> direct,
                    std::function<TV(const AnsatzPointData&)> specialized = nullptr) {
    reg.push_back({std::move(name), std::move(citation), std::move(description),
                   std::move(closed), std::move(specialized), std::move(direct)});
  };

  add("torsion", "sec. 7.2.1", "torsion (alpha-beta)_i d^k_j - (alpha-beta)_j d^k_i",
      [](const AnsatzPointData& d) {
        const int n = d.n;
        Vec dd = d.alpha.value - d.beta.value;
        Coeffs3 t(n, n);
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) t[i](k, j) = dd[i] * (k == j) - dd[j] * (k == i);
        return TV::third(t);
      },
      [](const DirectContext& c) { return TV::third(c.torsion); });

  add("non-metricity", "sec. 7.2.1",
      "nabla_i g_jk = -2 alpha_i g_jk - (beta+gamma)_j g_ik - (beta+gamma)_k g_ij",
      [](const AnsatzPointData& d) {
        const int n = d.n;
        Vec bc = d.beta.value + d.gamma.value;
        Coeffs3 ng(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              ng[i](j, k) = -2.0 * d.alpha.value[i] * d.g(j, k) - bc[j] * d.g(i, k) -
                            bc[k] * d.g(i, j);
        return TV::third(ng);
      },
      [](const DirectContext& c) { return TV::third(c.nabla_g); });

  add("canonical-difference", "sec. 7.2.1",
      "difference nabla^g - nabla_g = -B with B_i{}^k{}_j = -(beta-gamma)_j/2 d^k_i "
      "+ (beta-gamma)^k/2 g_ij",
      [](const AnsatzPointData& d) {
        const int n = d.n;
        Vec psi = d.beta.value - d.gamma.value;
        Vec psi_up = d.g_inv * psi;
        Coeffs3 t(n, n);
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
              t[i](k, j) = 0.5 * psi[j] * (k == i) - 0.5 * psi_up[k] * d.g(i, j);
        return TV::third(t);
      },
      [](const DirectContext& c) { return TV::third(c.canonical - c.christoffel); });

  add("curvature", "sec. 7.2.2", "(1,3) curvature tensor of the ansatz connection",
      [](const AnsatzPointData& d) { return TV::fourth(curvature13_closed(d)); },
      [](const DirectContext& c) { return TV::fourth(c.r13); });

  add("curvature-lowered", "sec. 7.2.2", "(0,4) curvature tensor R_ijkl = g_km R_ij{}^m{}_l",
      [](const AnsatzPointData& d) { return TV::fourth(curvature04_closed(d)); },
      [](const DirectContext& c) { return TV::fourth(lower_third_slot(c.r13, c.g)); });

  add("ricci", "sec. 7.2.2", "Ricci tensor r_jl = R_ij{}^i{}_l",
      [](const AnsatzPointData& d) { return TV::matrix(ricci_closed(d)); },
      [](const DirectContext& c) { return TV::matrix(ricci_of(c.r13)); },
      [](const AnsatzPointData& d) { return TV::matrix(ricci_specialized(d)); });

  add("ricci-symmetric", "sec. 7.2.2", "symmetric part r_()",
      [](const AnsatzPointData& d) { return TV::matrix(sym(ricci_closed(d))); },
      [](const DirectContext& c) { return TV::matrix(sym(ricci_of(c.r13))); },
      [](const AnsatzPointData& d) { return TV::matrix(sym(ricci_specialized(d))); });

  add("ricci-antisymmetric", "sec. 7.2.2", "antisymmetric part r_[]",
      [](const AnsatzPointData& d) { return TV::matrix(antisym(ricci_closed(d))); },
      [](const DirectContext& c) { return TV::matrix(antisym(ricci_of(c.r13))); },
      [](const AnsatzPointData& d) { return TV::matrix(antisym(ricci_specialized(d))); });

  add("scalar", "sec. 7.2.2", "trace s = g^{jl} r_jl",
      [](const AnsatzPointData& d) { return TV::scalar(scalar_closed(d)); },
      [](const DirectContext& c) {
        return TV::scalar(trace_g(ricci_of(c.r13), c.g_inv));
      },
      [](const AnsatzPointData& d) { return TV::scalar(scalar_specialized(d)); });

  add("ricci-traceless-symmetric", "sec. 7.2.2", "traceless symmetric Ricci",
      [](const AnsatzPointData& d) {
        return TV::matrix(traceless_sym(ricci_closed(d), d.g, d.g_inv));
      },
      [](const DirectContext& c) {
        return TV::matrix(traceless_sym(ricci_of(c.r13), c.g, c.g_inv));
      },
      [](const AnsatzPointData& d) {
        return TV::matrix(traceless_sym(ricci_specialized(d), d.g, d.g_inv));
      });

  add("rho", "sec. 7.2.2", "second trace rho_jk = R_ijki",
      [](const AnsatzPointData& d) { return TV::matrix(rho_closed(d)); },
      [](const DirectContext& c) { return TV::matrix(rho_of(c.r13, c.g, c.g_inv)); },
      [](const AnsatzPointData& d) { return TV::matrix(rho_specialized(d)); });

  add("rho-symmetric", "sec. 7.2.2", "symmetric part rho_()",
      [](const AnsatzPointData& d) { return TV::matrix(sym(rho_closed(d))); },
      [](const DirectContext& c) {
        return TV::matrix(sym(rho_of(c.r13, c.g, c.g_inv)));
      },
      [](const AnsatzPointData& d) { return TV::matrix(sym(rho_specialized(d))); });

  add("rho-antisymmetric", "sec. 7.2.2", "antisymmetric part rho_[]",
      [](const AnsatzPointData& d) { return TV::matrix(antisym(rho_closed(d))); },
      [](const DirectContext& c) {
        return TV::matrix(antisym(rho_of(c.r13, c.g, c.g_inv)));
      },
      [](const AnsatzPointData& d) { return TV::matrix(antisym(rho_specialized(d))); });

  add("rho-trace", "sec. 7.2.2", "sigma = g^{jk} rho_jk = -s",
      [](const AnsatzPointData& d) { return TV::scalar(-scalar_closed(d)); },
      [](const DirectContext& c) {
        return TV::scalar(trace_g(rho_of(c.r13, c.g, c.g_inv), c.g_inv));
      });

  add("rho-traceless-symmetric", "sec. 7.2.2", "traceless symmetric rho",
      [](const AnsatzPointData& d) {
        return TV::matrix(traceless_sym(rho_closed(d), d.g, d.g_inv));
      },
      [](const DirectContext& c) {
        return TV::matrix(traceless_sym(rho_of(c.r13, c.g, c.g_inv), c.g, c.g_inv));
      });

  add("half-r-minus-rho-traceless-symmetric", "sec. 7.2.2",
      "traceless symmetric part of (r - rho)/2",
      [](const AnsatzPointData& d) {
        Mat m = 0.5 * (ricci_closed(d) - rho_closed(d));
        return TV::matrix(traceless_sym(m, d.g, d.g_inv));
      },
      [](const DirectContext& c) {
        Mat m = 0.5 * (ricci_of(c.r13) - rho_of(c.r13, c.g, c.g_inv));
        return TV::matrix(traceless_sym(m, c.g, c.g_inv));
      });

  add("half-r-minus-rho-antisymmetric", "sec. 7.2.2",
      "antisymmetric part of (r - rho)/2",
      [](const AnsatzPointData& d) {
        return TV::matrix(antisym(0.5 * (ricci_closed(d) - rho_closed(d))));
      },
      [](const DirectContext& c) {
        return TV::matrix(
            antisym(0.5 * (ricci_of(c.r13) - rho_of(c.r13, c.g, c.g_inv))));
      });

  add("half-r-plus-rho-symmetric", "sec. 7.2.2", "symmetric part of (r + rho)/2",
      [](const AnsatzPointData& d) {
        return TV::matrix(sym(0.5 * (ricci_closed(d) + rho_closed(d))));
      },
      [](const DirectContext& c) {
        return TV::matrix(sym(0.5 * (ricci_of(c.r13) + rho_of(c.r13, c.g, c.g_inv))));
      });

  add("half-r-plus-rho-antisymmetric", "sec. 7.2.2",
      "antisymmetric part of (r + rho)/2",
      [](const AnsatzPointData& d) {
        return TV::matrix(antisym(0.5 * (ricci_closed(d) + rho_closed(d))));
      },
      [](const DirectContext& c) {
        return TV::matrix(
            antisym(0.5 * (ricci_of(c.r13) + rho_of(c.r13, c.g, c.g_inv))));
      });

  add("zeta", "sec. 7.2.2", "endomorphism trace zeta_ij = R_ij{}^k{}_k",
      [](const AnsatzPointData& d) { return TV::matrix(zeta_closed(d)); },
      [](const DirectContext& c) { return TV::matrix(zeta_of(c.r13)); },
      [](const AnsatzPointData& d) { return TV::matrix(zeta_specialized(d)); });

  add("h-curvature", "sec. 7.2.3",
      "(1,3) curvature of the canonical metric connection",
      [](const AnsatzPointData& d) { return TV::fourth(h13_closed(d)); },
      [](const DirectContext& c) { return TV::fourth(c.h13); });

  add("h-curvature-lowered", "sec. 7.2.3",
      "(0,4) curvature of the canonical metric connection (Kulkarni-Nomizu form)",
      [](const AnsatzPointData& d) { return TV::fourth(h04_closed(d)); },
      [](const DirectContext& c) { return TV::fourth(lower_third_slot(c.h13, c.g)); });

  add("h-ricci", "sec. 7.2.3", "Ricci tensor h of the canonical metric connection",
      [](const AnsatzPointData& d) { return TV::matrix(h_ricci_closed(d)); },
      [](const DirectContext& c) { return TV::matrix(ricci_of(c.h13)); },
      [](const AnsatzPointData& d) { return TV::matrix(h_ricci_specialized(d)); });

  add("h-ricci-symmetric", "sec. 7.2.3", "symmetric part h_()",
      [](const AnsatzPointData& d) { return TV::matrix(sym(h_ricci_closed(d))); },
      [](const DirectContext& c) { return TV::matrix(sym(ricci_of(c.h13))); },
      [](const AnsatzPointData& d) { return TV::matrix(sym(h_ricci_specialized(d))); });

  add("h-ricci-antisymmetric", "sec. 7.2.3", "antisymmetric part h_[]",
      [](const AnsatzPointData& d) { return TV::matrix(antisym(h_ricci_closed(d))); },
      [](const DirectContext& c) { return TV::matrix(antisym(ricci_of(c.h13))); },
      [](const AnsatzPointData& d) {
        return TV::matrix(antisym(h_ricci_specialized(d)));
      });

  add("h-trace", "sec. 7.2.3", "trace tau = g^{jl} h_jl",
      [](const AnsatzPointData& d) { return TV::scalar(tau_closed(d)); },
      [](const DirectContext& c) {
        return TV::scalar(trace_g(ricci_of(c.h13), c.g_inv));
      },
      [](const AnsatzPointData& d) { return TV::scalar(tau_specialized(d)); });

  add("h-ricci-traceless-symmetric", "sec. 7.2.3", "traceless symmetric h",
      [](const AnsatzPointData& d) {
        return TV::matrix(traceless_sym(h_ricci_closed(d), d.g, d.g_inv));
      },
      [](const DirectContext& c) {
        return TV::matrix(traceless_sym(ricci_of(c.h13), c.g, c.g_inv));
      },
      [](const AnsatzPointData& d) {
        return TV::matrix(traceless_sym(h_ricci_specialized(d), d.g, d.g_inv));
      });

  return reg;
}

} // namespace

const std::vector<CompendiumEntry>& compendium_registry() {
  static const std::vector<CompendiumEntry> reg = build_registry();
  return reg;
}

const CompendiumEntry& compendium_entry(const std::string& name) {
  for (const auto& e : compendium_registry())
    if (e.name == name) return e;
  throw contract_error("compendium: unknown tensor name '" + name + "'");
}

std::vector<CompendiumCheck> verify_compendium(const AnsatzInput& in,
                                               const EngineSet& engines, const Vec& x,
                                               const std::vector<std::string>& names) {
  AnsatzPointData data = ansatz_point_data(in, engines, x);
  DirectContext ctx = make_direct_context(in, engines, x);

  std::vector<CompendiumCheck> out;
  auto run_entry = [&](const CompendiumEntry& e) {
    CompendiumCheck c;
    c.name = e.name;
    TensorValue closed = e.closed_form(data);
    TensorValue direct = e.direct(ctx);
    c.residual = closed.distance(direct);
    if (e.specialized && in.has_scalar_coefficients) {
      TensorValue spec = e.specialized(data);
      c.specialized_residual = closed.distance(spec);
    }
    out.push_back(std::move(c));
  };

  if (names.empty() || (names.size() == 1 && names[0] == "all")) {
    for (const auto& e : compendium_registry()) run_entry(e);
  } else {
    for (const auto& n : names) run_entry(compendium_entry(n));
  }
  return out;
}

CoefficientSolutions solve_coefficients(int n, Weight m) {
  require(n >= 2, "solve_coefficients: dimension must be at least 2");
  CoefficientSolutions sol;
  const Real nm1 = static_cast<Real>(n - 1);
  if (n == 2) {
    sol.status = CoefficientSolutions::Status::Unique;
    Real b = -0.5 * (1.0 - m.inv_m);
    Real c = -0.5 * (1.0 + m.inv_m);
    sol.roots.emplace_back(b, c);
    sol.discriminant = 0;
    return sol;
  }
  const Real nm2 = static_cast<Real>(n - 2);
  // (n-1)(n-2) b^2 + 2(n-1) b + (1 - 1/m) = 0; Delta = 4(n-1)(1 + (n-2)/m).
  sol.discriminant = 4.0 * nm1 * (1.0 + nm2 * m.inv_m);
  if (sol.discriminant < 0) {
    sol.status = CoefficientSolutions::Status::NoRealSolutions;
    return sol;
  }
  if (sol.discriminant == 0) {
    sol.status = CoefficientSolutions::Status::Unique;
    sol.roots.emplace_back(-1.0 / nm2, 1.0 / nm2);
    return sol;
  }
  sol.status = CoefficientSolutions::Status::TwoRoots;
  Real root = std::sqrt(sol.discriminant) / (2.0 * nm1); // sqrt((m+n-2)/(m(n-1)))
  for (Real sign : {+1.0, -1.0}) {
    Real b = (-1.0 + sign * root) / nm2;
    Real c = -1.0 - nm1 * b;
    sol.roots.emplace_back(b, c);
  }
  return sol;
}

Mat gmqe_residual(const MatrixField& g, const VectorField& phi, Weight m,
                  const EngineSet& engines, const Vec& x) {
  AnsatzInput in = make_ansatz(g, phi, 0, 0, 0);
  AnsatzPointData d = ansatz_point_data(in, engines, x);
  Mat q = d.rbar + 0.5 * d.phi.lie(d.g) -
          m.inv_m * d.phi.value * d.phi.value.transpose();
  Mat s = 0.5 * (q + q.transpose());
  Real tr = d.g_inv.cwiseProduct(s).sum();
  return s - (tr / static_cast<Real>(d.n)) * d.g;
}

AveragedTensors averaged_tensors(const MatrixField& g, const VectorField& phi, int n,
                                 Weight m, const EngineSet& engines, const Vec& x) {
  require(n > 2, "averaged_tensors: defined for n > 2");
  AveragedTensors out;
  CoefficientSolutions sol = solve_coefficients(n, m);
  out.real_solutions = sol.status != CoefficientSolutions::Status::NoRealSolutions;
  if (!out.real_solutions) return out;

  AnsatzInput in = make_ansatz(g, phi, 0, 0, 0);
  AnsatzPointData d = ansatz_point_data(in, engines, x);
  Real dstar = d.codiff(d.phi);
  Real phi2 = d.norm2(d.phi);
  const Real nm2 = static_cast<Real>(n - 2);
  // 1/2 (c_+ + c_-) = 1/(n-2); no root extraction enters.
  out.ricci_symmetric_average =
      d.rbar + 0.5 * d.phi.lie(d.g) - m.inv_m * d.phi.value * d.phi.value.transpose() +
      (1.0 / nm2) * (-dstar - phi2) * d.g;
  out.scalar_average = d.sbar - 2.0 * dstar - (1.0 + m.inv_m) * phi2 -
                       (2.0 / nm2) * (dstar + phi2);
  return out;
}

Real nabla_g_norm2(const BundleGeometry& tm, const EngineSet& engines, const Vec& x) {
  Coeffs3 ng = non_metricity(tm, engines.base).value(x);
  Mat gx = tm.metric.value(x);
  Mat ginv = gx.inverse();
  Real acc = 0;
  for (int i = 0; i < tm.chart.dim; ++i)
    for (int j = 0; j < tm.chart.dim; ++j)
      acc += ginv(i, j) * (ginv * ng[i] * ginv * ng[j]).trace();
  return acc;
}

FunctionalReport functionals(const BundleGeometry& tm, const EngineSet& engines,
                             int nodes_per_axis) {
  FunctionalReport r;
  const auto g = tm.metric;
  const Real half_n = 0.5 * static_cast<Real>(tm.chart.dim);
  r.volume = integrate_scalar(tm.chart, nodes_per_axis, [&](const Vec& x) {
    return std::sqrt(g.value(x).determinant());
  });
  r.k = integrate_scalar(tm.chart, nodes_per_axis, [&](const Vec& x) {
    return nabla_g_norm2(tm, engines, x) * std::sqrt(g.value(x).determinant());
  });
  r.f = integrate_scalar(tm.chart, nodes_per_axis, [&](const Vec& x) {
    return std::pow(nabla_g_norm2(tm, engines, x), half_n) *
           std::sqrt(g.value(x).determinant());
  });
  return r;
}

} // namespace eulerclass
