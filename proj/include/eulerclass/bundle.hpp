#ifndef EULERCLASS_BUNDLE_HPP
#define EULERCLASS_BUNDLE_HPP

#include "eulerclass/derivative.hpp"
#include "eulerclass/field.hpp"
#include "eulerclass/form_matrix.hpp"
#include "eulerclass/quadrature.hpp"

namespace eulerclass {

/// Vector-bundle geometry over a chart, in a fixed local frame: fibre metric
/// g_ab (symmetric positive definite), connection forms w_i{}^a{}_b, and the
/// orientation sign of the frame.
struct BundleGeometry {
  Chart chart;
  int rank = 2;
  MatrixField metric;
  Coeffs3Field connection;
  Real frame_orientation = 1.0;
};

using FormMatrixField = Field<FormMatrixD>;

/// Connection matrix as a matrix of 1-forms.
FormMatrixField connection_one_form(const BundleGeometry& b);

/// Non-metricity nabla_i g_ab = d_i g_ab - w_i{}^c{}_a g_cb - w_i{}^c{}_b g_ac;
/// symmetric in a, b, zero exactly for metric connections.
Coeffs3Field non_metricity(const BundleGeometry& b, DerivativeEngine base);

/// The endomorphism-valued 2-form (g^{-1} nabla g)^2:
///   ((g^{-1} nabla g)^2)_ij{}^a{}_b
///     = g^{ac} nabla_i g_cd g^{de} nabla_j g_eb - (i <-> j).
FormMatrixField error_term(const BundleGeometry& b, DerivativeEngine base);

/// Curvature Omega^a_b = d w^a_b + w^a_c ^ w^c_b as a matrix of 2-forms.
FormMatrixField curvature(const BundleGeometry& b, const EngineSet& engines);

/// The canonical g-metric connection nabla + 1/2 g^{-1} nabla g; its
/// non-metricity vanishes.
BundleGeometry canonical_metric_connection(const BundleGeometry& b,
                                           DerivativeEngine base);

/// Pointwise metric on connection differences: mu = h^{-1} (x) g (x) g^{-1}.
struct ConnectionDistanceMetric {
  MatrixField base_h;
  MatrixField fibre_g;
};

/// |delta|_mu at x for the difference of two connections on the same bundle.
Real connection_distance(const Coeffs3& delta, const ConnectionDistanceMetric& mu,
                         const Vec& x);
Real connection_distance(const BundleGeometry& b, const Coeffs3Field& other,
                         const ConnectionDistanceMetric& mu, const Vec& x);

/// Frame data of the Gram-Schmidt orthonormalization at a point: columns of
/// P are the orthonormal frame vectors in the original frame (P^T g P = I),
/// with the last column sign-flipped when the original frame is negatively
/// oriented, so the new frame is always positively oriented.
struct FrameData {
  Mat P, P_inv;
  std::vector<Mat> dP; // per base direction
};

FrameData orthonormal_frame_at(const BundleGeometry& b, const Vec& x,
                               DerivativeEngine base);

/// Geometry re-expressed in the orthonormal frame: metric becomes the
/// identity, the connection transforms as w' = P^{-1} w P + P^{-1} dP.
/// Connection entries stay bounded near area-element degeneracies of the
/// chart, which makes this the right frame to differentiate in.
BundleGeometry orthonormalize_frame(const BundleGeometry& b, DerivativeEngine base);

/// Euler form (2 pi)^{-k} Pf(Omega - 1/4 (g^{-1} nabla g)^2), evaluated in
/// the orthonormalized oriented frame; a 2k-form field on the base.
FormField euler_form(const BundleGeometry& b, const EngineSet& engines);

/// Euler density through the canonical metric connection instead:
/// (2 pi)^{-k} Pf(Omega_{nabla^g}). Equal to euler_form pointwise; kept as an
/// independent route for identity checks.
FormField euler_form_via_canonical(const BundleGeometry& b, const EngineSet& engines);

struct EulerNumberReport {
  Real value = 0;
  long nearest_integer = 0;
  Real deviation = 0;
};

/// Integral of the Euler form over the chart; requires rank == base dim.
EulerNumberReport euler_number(const BundleGeometry& b, const EngineSet& engines,
                               int nodes_per_axis);

/// Residuals of the curvature splitting identities in an orthonormal frame:
///   Omega_A = d w_A + w_A ^ w_A + w_S ^ w_S
///   Omega_S = d w_S + w_A ^ w_S + w_S ^ w_A
/// Precondition: b is expressed in a frame with g = identity at x.
struct SplitResiduals {
  Real antisymmetric = 0;
  Real symmetric = 0;
};

SplitResiduals split_identities_check(const BundleGeometry& b, const Vec& x,
                                      const EngineSet& engines);

} // namespace eulerclass

#endif
