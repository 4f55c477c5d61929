#ifndef EULERCLASS_METRIC_HPP
#define EULERCLASS_METRIC_HPP

#include "eulerclass/derivative.hpp"
#include "eulerclass/field.hpp"

namespace eulerclass {

/// Christoffel symbols of the Levi-Civita connection of g:
///   Gamma_i{}^k{}_j = 1/2 g^{km} (d_i g_mj + d_j g_mi - d_m g_ij).
/// The returned field carries an exact partial callback whenever g provides
/// first and second partials.
Coeffs3Field christoffel_field(const MatrixField& g, DerivativeEngine base);

/// d_l g^{-1} = -g^{-1} (d_l g) g^{-1}, assembled pointwise.
Mat inverse_metric_partial(const Mat& g_inv, const Mat& dg);

/// sqrt(det g) and its partials as a scalar field.
ScalarField sqrt_det_field(const MatrixField& g);

/// Pointwise musical isomorphism helpers.
inline Vec raise_index(const Mat& g_inv, const Vec& covector) { return g_inv * covector; }
inline Vec lower_index(const Mat& g, const Vec& vector) { return g * vector; }

/// Lie derivative of the metric along the vector field dual to the 1-form
/// phi: (L_{phi#} g)_ij = nabla_i phi_j + nabla_j phi_i, Levi-Civita
/// derivatives.
MatrixField lie_derivative_metric(const VectorField& phi, const MatrixField& g,
                                  const EngineSet& engines);

} // namespace eulerclass

#endif
