#include "eulerclass/metric.hpp"

#include <cmath>

namespace eulerclass {

Mat inverse_metric_partial(const Mat& g_inv, const Mat& dg) {
  return -g_inv * dg * g_inv;
}

namespace {

Coeffs3 christoffel_from(const Mat& g_inv, const std::vector<Mat>& dg) {
  const int n = static_cast<int>(dg.size());
  Coeffs3 gamma(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Real acc = 0;
        for (int m = 0; m < n; ++m)
          acc += g_inv(k, m) * (dg[static_cast<std::size_t>(i)](m, j) +
                                dg[static_cast<std::size_t>(j)](m, i) -
                                dg[static_cast<std::size_t>(m)](i, j));
        gamma[i](k, j) = 0.5 * acc;
      }
  return gamma;
}

} // namespace

Coeffs3Field christoffel_field(const MatrixField& g, DerivativeEngine base) {
  Coeffs3Field out;
  out.chart = g.chart;
  const int n = g.chart.dim;
  out.value = [g, base, n](const Vec& x) {
    Mat gx = g.value(x);
    Mat g_inv = gx.inverse();
    std::vector<Mat> dg(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) dg[static_cast<std::size_t>(i)] = base.partial(g, i, x);
    return christoffel_from(g_inv, dg);
  };
  if (g.has_exact_partial() && g.has_exact_partial2()) {
    out.partial = [g, n](int l, const Vec& x) {
      Mat gx = g.value(x);
      Mat g_inv = gx.inverse();
      Mat dgl = g.partial(l, x);
      Mat dginv = inverse_metric_partial(g_inv, dgl);
      Coeffs3 dgamma(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            Real acc = 0;
            for (int m = 0; m < n; ++m) {
              Real sym = g.partial(i, x)(m, j) + g.partial(j, x)(m, i) -
                         g.partial(m, x)(i, j);
              Real dsym = g.partial2(l, i, x)(m, j) + g.partial2(l, j, x)(m, i) -
                          g.partial2(l, m, x)(i, j);
              acc += dginv(k, m) * sym + g_inv(k, m) * dsym;
            }
            dgamma[i](k, j) = 0.5 * acc;
          }
      return dgamma;
    };
  }
  return out;
}

ScalarField sqrt_det_field(const MatrixField& g) {
  ScalarField out;
  out.chart = g.chart;
  out.value = [g](const Vec& x) { return std::sqrt(g.value(x).determinant()); };
  if (g.has_exact_partial()) {
    // d_i sqrt(det g) = 1/2 sqrt(det g) tr(g^{-1} d_i g)
    out.partial = [g](int i, const Vec& x) {
      Mat gx = g.value(x);
      Real s = std::sqrt(gx.determinant());
      return 0.5 * s * (gx.inverse() * g.partial(i, x)).trace();
    };
  }
  return out;
}

MatrixField lie_derivative_metric(const VectorField& phi, const MatrixField& g,
                                  const EngineSet& engines) {
  Coeffs3Field gamma = christoffel_field(g, engines.base);
  MatrixField out;
  out.chart = g.chart;
  const int n = g.chart.dim;
  out.value = [phi, gamma, engines, n](const Vec& x) {
    Coeffs3 gm = gamma.value(x);
    std::vector<Vec> dphi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      dphi[static_cast<std::size_t>(i)] = engines.base.partial(phi, i, x);
    Vec ph = phi.value(x);
    Mat lie(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Real cov = dphi[static_cast<std::size_t>(i)][j] +
                   dphi[static_cast<std::size_t>(j)][i];
        for (int m = 0; m < n; ++m) cov -= 2.0 * gm[i](m, j) * ph[m];
        lie(i, j) = cov;
      }
    return lie;
  };
  return out;
}

} // namespace eulerclass
