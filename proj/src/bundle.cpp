#include "eulerclass/bundle.hpp"

#include <cmath>

#include "eulerclass/metric.hpp"

namespace eulerclass {

namespace {

/// FormMatrix of degree 1 from per-direction coefficient blocks.
FormMatrixD one_form_matrix(const Coeffs3& w, int dim) {
  FormMatrixD out(w.rank(), dim, 1);
  for (int a = 0; a < w.rank(); ++a)
    for (int b = 0; b < w.rank(); ++b)
      for (int i = 0; i < dim; ++i)
        out(a, b).coeff_at_rank(i) = w[i](a, b);
  return out;
}

/// FormMatrix of degree 2 from antisymmetric per-pair blocks: value at the
/// increasing pair (i, j) is blocks(i, j).
FormMatrixD two_form_matrix(const std::vector<Mat>& pair_blocks, int rank, int dim) {
  FormMatrixD out(rank, dim, 2);
  int pair = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j, ++pair)
      for (int a = 0; a < rank; ++a)
        for (int b = 0; b < rank; ++b)
          out(a, b).coeff_at_rank(pair) = pair_blocks[static_cast<std::size_t>(pair)](a, b);
  return out;
}

/// Lower-triangular half operator of the Cholesky differential.
Mat phi_lower_half(const Mat& m) {
  Mat out = m.triangularView<Eigen::StrictlyLower>();
  out.diagonal() = 0.5 * m.diagonal();
  return out;
}

/// dL for g = L L^T under a metric perturbation dg.
Mat cholesky_derivative(const Mat& L, const Mat& dg) {
  Mat Linv = L.triangularView<Eigen::Lower>().solve(Mat::Identity(L.rows(), L.cols()));
  return L * phi_lower_half(Linv * dg * Linv.transpose());
}

Coeffs3 nabla_g_at(const Mat& g, const std::vector<Mat>& dg, const Coeffs3& w) {
  Coeffs3 out(w.base_dim(), w.rank());
  for (int i = 0; i < w.base_dim(); ++i)
    out[i] = dg[static_cast<std::size_t>(i)] - w[i].transpose() * g - g * w[i];
  return out;
}

} // namespace

FormMatrixField connection_one_form(const BundleGeometry& b) {
  FormMatrixField out;
  out.chart = b.chart;
  const int dim = b.chart.dim;
  const auto conn = b.connection;
  out.value = [conn, dim](const Vec& x) { return one_form_matrix(conn.value(x), dim); };
  return out;
}

Coeffs3Field non_metricity(const BundleGeometry& b, DerivativeEngine base) {
  Coeffs3Field out;
  out.chart = b.chart;
  const auto g = b.metric;
  const auto conn = b.connection;
  const int dim = b.chart.dim;
  out.value = [g, conn, base, dim](const Vec& x) {
    std::vector<Mat> dg(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) dg[static_cast<std::size_t>(i)] = base.partial(g, i, x);
    return nabla_g_at(g.value(x), dg, conn.value(x));
  };
  if (g.has_exact_partial() && g.has_exact_partial2() && conn.has_exact_partial()) {
    out.partial = [g, conn, dim](int l, const Vec& x) {
      Mat gx = g.value(x);
      Mat dgl = g.partial(l, x);
      Coeffs3 w = conn.value(x);
      Coeffs3 dw = conn.partial(l, x);
      Coeffs3 r(dim, w.rank());
      for (int i = 0; i < dim; ++i) {
        Mat dgi = g.partial(i, x);
        r[i] = g.partial2(l, i, x) - dw[i].transpose() * gx - w[i].transpose() * dgl -
               dgl * w[i] - gx * dw[i];
        (void)dgi;
      }
      return r;
    };
  }
  return out;
}

FormMatrixField error_term(const BundleGeometry& b, DerivativeEngine base) {
  FormMatrixField out;
  out.chart = b.chart;
  Coeffs3Field nabla_g = non_metricity(b, base);
  const auto g = b.metric;
  const int dim = b.chart.dim;
  const int rank = b.rank;
  out.value = [g, nabla_g, dim, rank](const Vec& x) {
    Mat ginv = g.value(x).inverse();
    Coeffs3 ng = nabla_g.value(x);
    std::vector<Mat> n(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) n[static_cast<std::size_t>(i)] = ginv * ng[i];
    std::vector<Mat> pairs;
    pairs.reserve(static_cast<std::size_t>(dim * (dim - 1) / 2));
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        pairs.push_back(n[static_cast<std::size_t>(i)] * n[static_cast<std::size_t>(j)] -
                        n[static_cast<std::size_t>(j)] * n[static_cast<std::size_t>(i)]);
    return two_form_matrix(pairs, rank, dim);
  };
  return out;
}

FormMatrixField curvature(const BundleGeometry& b, const EngineSet& engines) {
  FormMatrixField out;
  out.chart = b.chart;
  const auto conn = b.connection;
  const int dim = b.chart.dim;
  const int rank = b.rank;
  const DerivativeEngine eng = engines.curvature;
  out.value = [conn, eng, dim, rank](const Vec& x) {
    Coeffs3 w = conn.value(x);
    std::vector<Coeffs3> dw(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) dw[static_cast<std::size_t>(i)] = eng.partial(conn, i, x);
    std::vector<Mat> pairs;
    pairs.reserve(static_cast<std::size_t>(dim * (dim - 1) / 2));
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        pairs.push_back(dw[static_cast<std::size_t>(i)][j] -
                        dw[static_cast<std::size_t>(j)][i] + w[i] * w[j] - w[j] * w[i]);
    return two_form_matrix(pairs, rank, dim);
  };
  return out;
}

BundleGeometry canonical_metric_connection(const BundleGeometry& b,
                                           DerivativeEngine base) {
  BundleGeometry out = b;
  Coeffs3Field nabla_g = non_metricity(b, base);
  const auto g = b.metric;
  const auto conn = b.connection;
  const int dim = b.chart.dim;
  out.connection.chart = b.chart;
  out.connection.value = [g, conn, nabla_g, dim](const Vec& x) {
    Mat ginv = g.value(x).inverse();
    Coeffs3 w = conn.value(x);
    Coeffs3 ng = nabla_g.value(x);
    for (int i = 0; i < dim; ++i) w[i] += 0.5 * ginv * ng[i];
    return w;
  };
  if (g.has_exact_partial() && conn.has_exact_partial() && nabla_g.has_exact_partial()) {
    out.connection.partial = [g, conn, nabla_g, dim](int l, const Vec& x) {
      Mat ginv = g.value(x).inverse();
      Mat dginv = inverse_metric_partial(ginv, g.partial(l, x));
      Coeffs3 ng = nabla_g.value(x);
      Coeffs3 dng = nabla_g.partial(l, x);
      Coeffs3 dw = conn.partial(l, x);
      for (int i = 0; i < dim; ++i)
        dw[i] += 0.5 * (dginv * ng[i] + ginv * dng[i]);
      return dw;
    };
  }
  return out;
}

Real connection_distance(const Coeffs3& delta, const ConnectionDistanceMetric& mu,
                         const Vec& x) {
  Mat h_inv = mu.base_h.value(x).inverse();
  Mat g = mu.fibre_g.value(x);
  Mat g_inv = g.inverse();
  const int dim = delta.base_dim();
  Real acc = 0;
  // mu = h^{-1} (x) g (x) g^{-1}: contract base indices with h^{-1}, the upper
  // fibre index with g, the lower fibre index with g^{-1}.
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Mat m = g * delta[i] * g_inv * delta[j].transpose();
      acc += h_inv(i, j) * m.trace();
    }
  return std::sqrt(acc);
}

Real connection_distance(const BundleGeometry& b, const Coeffs3Field& other,
                         const ConnectionDistanceMetric& mu, const Vec& x) {
  Coeffs3 delta = b.connection.value(x) - other.value(x);
  return connection_distance(delta, mu, x);
}

FrameData orthonormal_frame_at(const BundleGeometry& b, const Vec& x,
                               DerivativeEngine base) {
  Mat g = b.metric.value(x);
  Eigen::LLT<Mat> llt(g);
  require(llt.info() == Eigen::Success,
          "orthonormal_frame_at: fibre metric is not positive definite");
  Mat L = llt.matrixL();
  FrameData f;
  // Gram-Schmidt in fibre-index order == inverse transpose Cholesky factor.
  f.P = L.transpose()
            .triangularView<Eigen::Upper>()
            .solve(Mat::Identity(b.rank, b.rank));
  f.P_inv = L.transpose();
  f.dP.resize(static_cast<std::size_t>(b.chart.dim));
  for (int i = 0; i < b.chart.dim; ++i) {
    Mat dg = base.partial(b.metric, i, x);
    Mat dL = cholesky_derivative(L, dg);
    f.dP[static_cast<std::size_t>(i)] = -f.P * dL.transpose() * f.P;
  }
  if (b.frame_orientation < 0) {
    f.P.col(b.rank - 1) *= -1.0;
    f.P_inv.row(b.rank - 1) *= -1.0;
    for (auto& d : f.dP) d.col(b.rank - 1) *= -1.0;
  }
  return f;
}

BundleGeometry orthonormalize_frame(const BundleGeometry& b, DerivativeEngine base) {
  BundleGeometry out;
  out.chart = b.chart;
  out.rank = b.rank;
  out.frame_orientation = 1.0;
  out.metric = constant_field<Mat>(b.chart, Mat::Identity(b.rank, b.rank),
                                   Mat::Zero(b.rank, b.rank));
  BundleGeometry captured = b;
  const int dim = b.chart.dim;
  out.connection.chart = b.chart;
  out.connection.value = [captured, base, dim](const Vec& x) {
    FrameData f = orthonormal_frame_at(captured, x, base);
    Coeffs3 w = captured.connection.value(x);
    Coeffs3 r(dim, captured.rank);
    for (int i = 0; i < dim; ++i)
      r[i] = f.P_inv * w[i] * f.P + f.P_inv * f.dP[static_cast<std::size_t>(i)];
    return r;
  };
  return out;
}

namespace {

FormField pfaffian_density(const BundleGeometry& orthonormal, const EngineSet& engines,
                           bool subtract_error_term) {
  FormMatrixField omega = curvature(orthonormal, engines);
  const auto conn = orthonormal.connection;
  const int dim = orthonormal.chart.dim;
  const int k = orthonormal.rank / 2;
  Real norm = std::pow(2.0 * M_PI, -k);
  FormField out;
  out.chart = orthonormal.chart;
  out.value = [omega, conn, dim, k, norm, subtract_error_term](const Vec& x) {
    FormMatrixD m = omega.value(x);
    if (subtract_error_term) {
      // In the orthonormal frame 1/4 (g^{-1} nabla g)^2 = w_S ^ w_S.
      Coeffs3 w = conn.value(x);
      std::vector<Mat> ws(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i)
        ws[static_cast<std::size_t>(i)] = 0.5 * (w[i] + w[i].transpose());
      std::vector<Mat> pairs;
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
          pairs.push_back(ws[static_cast<std::size_t>(i)] * ws[static_cast<std::size_t>(j)] -
                          ws[static_cast<std::size_t>(j)] * ws[static_cast<std::size_t>(i)]);
      m -= two_form_matrix(pairs, 2 * k, dim);
    }
    return norm * pfaffian(m);
  };
  return out;
}

} // namespace

FormField euler_form(const BundleGeometry& b, const EngineSet& engines) {
  require(b.rank % 2 == 0, "euler_form: bundle rank must be even");
  return pfaffian_density(orthonormalize_frame(b, engines.base), engines, true);
}

FormField euler_form_via_canonical(const BundleGeometry& b, const EngineSet& engines) {
  require(b.rank % 2 == 0, "euler_form_via_canonical: bundle rank must be even");
  BundleGeometry canonical = canonical_metric_connection(b, engines.base);
  return pfaffian_density(orthonormalize_frame(canonical, engines.base), engines, false);
}

EulerNumberReport euler_number(const BundleGeometry& b, const EngineSet& engines,
                               int nodes_per_axis) {
  require(b.rank == b.chart.dim,
          "euler_number: bundle rank must equal the base dimension");
  FormField density = euler_form(b, engines);
  EulerNumberReport r;
  r.value = integrate_form(density, nodes_per_axis);
  r.nearest_integer = std::lround(r.value);
  r.deviation = std::abs(r.value - static_cast<Real>(r.nearest_integer));
  return r;
}

SplitResiduals split_identities_check(const BundleGeometry& b, const Vec& x,
                                      const EngineSet& engines) {
  Mat g = b.metric.value(x);
  require((g - Mat::Identity(b.rank, b.rank)).cwiseAbs().maxCoeff() < 1e-9,
          "split_identities_check: frame is not orthonormal at x");

  auto part_field = [&](Real sign) {
    Coeffs3Field f;
    f.chart = b.chart;
    const auto conn = b.connection;
    f.value = [conn, sign](const Vec& y) {
      Coeffs3 w = conn.value(y);
      for (auto& blk : w.blocks) {
        Mat t = blk.transpose();
        blk = 0.5 * (blk + sign * t);
      }
      return w;
    };
    return f;
  };
  Coeffs3Field wa_field = part_field(-1.0);
  Coeffs3Field ws_field = part_field(+1.0);

  const int dim = b.chart.dim;
  auto d_of = [&](const Coeffs3Field& f) {
    std::vector<Coeffs3> d(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
      d[static_cast<std::size_t>(i)] = engines.curvature.partial(f, i, x);
    return d;
  };
  auto dwa = d_of(wa_field);
  auto dws = d_of(ws_field);
  Coeffs3 wa = wa_field.value(x), ws = ws_field.value(x);

  FormMatrixD omega = curvature(b, engines).value(x);
  auto [omega_a, omega_s] = symmetric_antisymmetric_split(omega);

  SplitResiduals res;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      Mat da = dwa[static_cast<std::size_t>(i)][j] - dwa[static_cast<std::size_t>(j)][i];
      Mat ds = dws[static_cast<std::size_t>(i)][j] - dws[static_cast<std::size_t>(j)][i];
      Mat rhs_a = da + (wa[i] * wa[j] - wa[j] * wa[i]) + (ws[i] * ws[j] - ws[j] * ws[i]);
      Mat rhs_s = ds + (wa[i] * ws[j] - wa[j] * ws[i]) + (ws[i] * wa[j] - ws[j] * wa[i]);
      for (int a = 0; a < b.rank; ++a)
        for (int c = 0; c < b.rank; ++c) {
          int idx[2] = {i, j};
          res.antisymmetric = std::max(
              res.antisymmetric,
              std::abs(omega_a(a, c)(std::span<const int>(idx, 2)) - rhs_a(a, c)));
          res.symmetric = std::max(
              res.symmetric,
              std::abs(omega_s(a, c)(std::span<const int>(idx, 2)) - rhs_s(a, c)));
        }
    }
  return res;
}

} // namespace eulerclass
