#ifndef EULERCLASS_GEOMETRIES_HPP
#define EULERCLASS_GEOMETRIES_HPP

#include "eulerclass/compendium.hpp"
#include "eulerclass/expression.hpp"

namespace eulerclass {

/// Euclidean metric on any chart.
MatrixField euclidean_metric(const Chart& chart);

/// Round sphere of the given radius in spherical coordinates.
MatrixField round_sphere_metric(Real radius = 1.0);

/// First fundamental form of the ellipsoid (a sin u cos v, b sin u sin v,
/// c cos u) on the sphere chart.
MatrixField ellipsoid_metric(Real a, Real b, Real c);

/// Conformal rescaling exp(2 f) g, with derivatives assembled from f and g.
MatrixField conformal_metric(const ScalarField& f, const MatrixField& g);

/// Block-diagonal product metric of two surface metrics on the 4-dimensional
/// product chart (coordinates of `second` shifted to slots 2, 3).
MatrixField product_metric(const Chart& product_chart, const MatrixField& first,
                           const MatrixField& second);

/// Weyl connection of (g, phi): the ansatz with a = b = -1/2, c = +1/2;
/// nabla g = phi (x) g.
Coeffs3Field weyl_connection(const MatrixField& g, const VectorField& phi,
                             DerivativeEngine base);

/// Shifts a 1-form on a surface chart into the first or second factor of the
/// product chart.
VectorField lift_one_form_to_product(const Chart& product_chart,
                                     const VectorField& surface_form, int factor);

} // namespace eulerclass

#endif
