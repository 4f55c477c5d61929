#ifndef EULERCLASS_SURFACE_HPP
#define EULERCLASS_SURFACE_HPP

#include <optional>

#include "eulerclass/bundle.hpp"
#include "eulerclass/curve.hpp"
#include "eulerclass/metric.hpp"

namespace eulerclass {

/// Oriented surface chart with Riemannian metric and an optional tangent
/// connection (defaults to Levi-Civita when absent).
struct SurfaceGeometry {
  Chart chart;
  MatrixField metric;
  std::optional<Coeffs3Field> connection;
};

/// Tangent-bundle geometry of a surface (or any chart) with the given
/// connection; frame orientation comes from the chart.
BundleGeometry tangent_bundle(const Chart& chart, const MatrixField& g,
                              const Coeffs3Field& connection);

/// The surface's connection, falling back to Levi-Civita.
Coeffs3Field surface_connection(const SurfaceGeometry& s, const EngineSet& engines);

/// Gauss curvature via the orthonormal-frame curvature of the Levi-Civita
/// connection: K = Pf(Omega) / dV_g. Stays well conditioned near chart
/// degeneracies, unlike coordinate-frame Christoffel differences.
ScalarField gauss_curvature(const MatrixField& g, const EngineSet& engines);

/// Coordinate-frame route K = R_1212 / det g, as an independent cross-check
/// at interior points.
Real gauss_curvature_coordinate(const MatrixField& g, const EngineSet& engines,
                                const Vec& x);

/// Difference tensor D = nabla_g - nabla of a surface connection.
Coeffs3Field difference_tensor(const SurfaceGeometry& s, const EngineSet& engines);

/// g-antisymmetric / g-symmetric split:
///   D_S = (D + g^{-1} D^T g)/2,  D_A = (D - g^{-1} D^T g)/2,
/// transposing the endomorphism slots for each base direction.
std::pair<Coeffs3, Coeffs3> split_difference(const Coeffs3& d, const Mat& g);

/// The trace 1-form B_i = 1/2 (D_jji - D_jij), repeated lower indices
/// contracted with g^{-1}. Equals the trace B_k{}^k{}_i of D_A.
Vec b_trace(const Coeffs3& d, const Mat& g);
VectorField b_trace_field(const Coeffs3Field& d, const MatrixField& g);

/// Same trace computed from D_A, for the dual-formula cross-check.
Vec b_trace_via_antisymmetric_part(const Coeffs3& d, const Mat& g);

/// Gauss-Bonnet density (K_g - d*_g B) dV_g of the surface's connection;
/// equals 2 pi times the tangent bundle's Euler form pointwise.
FormField gb_density(const SurfaceGeometry& s, const EngineSet& engines);

struct GlobalGBReport {
  Real integral = 0;
  long euler_characteristic = 0; // nearest even integer of integral / 2 pi
  Real residual = 0;             // |integral - 2 pi chi|
};

GlobalGBReport global_gb(const SurfaceGeometry& s, const EngineSet& engines,
                         int nodes_per_axis);

/// Signed curvature of gamma at parameter t with respect to a metric
/// connection: kappa = g(conn_v v, N) / |v|^2 with N the inward unit normal
/// of a positively oriented boundary (the +90 degree rotation of the
/// tangent). A round circle traversed positively has total turning +2 pi.
Real signed_curvature(const MatrixField& g, const Coeffs3Field& connection,
                      const CurveSegment& curve, Real t);

struct LocalGBReport {
  Real interior = 0;
  Real boundary = 0;
  Real angle_sum = 0;
  Real residual = 0; // |interior + boundary + angle_sum - 2 pi|
};

/// Local Gauss-Bonnet with a prescribed correction 1-form B:
///   int_D (K - d*_g B) dA + int_gamma (kappa_N + B(N)) ds + sum eps_i = 2 pi.
LocalGBReport local_gb_with_b(const SurfaceGeometry& s, const VectorField& b_one_form,
                              const CurvedPolygon& polygon, const EngineSet& engines,
                              int interior_nodes, int boundary_nodes);

/// Local Gauss-Bonnet for a general connection: B is the trace 1-form of the
/// antisymmetric part of nabla_g - nabla (the canonical metric connection's
/// difference from Levi-Civita).
LocalGBReport local_gb(const SurfaceGeometry& s, const CurvedPolygon& polygon,
                       const EngineSet& engines, int interior_nodes,
                       int boundary_nodes);

/// Residual of the curvature relation for a metric connection nabla_g - B:
///   H_ijkl = R_ijkl - nab_i B_jkl + nab_j B_ikl + B_ikm B_jml - B_jkm B_iml
/// (repeated lower indices contracted with g^{-1}), max-abs over indices.
Real curvature_relation_residual(const MatrixField& g, const Coeffs3Field& b_tensor,
                                 const Vec& x, const EngineSet& engines);

/// Residuals of the surface dualities: star_1 b = B_i for the frame
/// component b of the endomorphism B, and Pf(H) = (K - d*_g B) dV_g.
struct BDualReport {
  Real star_residual = 0;
  Real pfaffian_residual = 0;
};

BDualReport b_dual_check(const MatrixField& g, const Coeffs3Field& b_tensor,
                         const Vec& x, const EngineSet& engines);

} // namespace eulerclass

#endif
