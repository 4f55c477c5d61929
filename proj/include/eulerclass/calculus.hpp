#ifndef EULERCLASS_CALCULUS_HPP
#define EULERCLASS_CALCULUS_HPP

#include "eulerclass/derivative.hpp"
#include "eulerclass/field.hpp"
#include "eulerclass/form.hpp"

namespace eulerclass {

/// 1-form field from component field (and back).
FormField one_form(const VectorField& components);
VectorField one_form_components(const FormField& w);

/// Exterior derivative d omega = sum_i dx^i ^ d_i omega. Satisfies d(d.) = 0
/// up to the differentiation error of the engine.
FormField exterior_derivative(const FormField& w, DerivativeEngine engine);

/// Hodge star on 1-forms of an oriented surface: rotation by +90 degrees in
/// an oriented g-orthonormal frame. (star psi)_j = s sqrt(det g) eps_kj psi^k.
VectorField hodge_star_1(const VectorField& psi, const MatrixField& g);

/// Hodge star on 2-forms of an oriented surface: star(f dV_g) = f.
ScalarField hodge_star_2(const FormField& w, const MatrixField& g);

/// Codifferential on 1-forms, d*_g psi = -nabla^i psi_i, computed with the
/// divergence form -(1/sqrt g) d_i (sqrt g g^{ij} psi_j); stays well
/// conditioned where the chart's area element degenerates.
ScalarField codifferential_1(const VectorField& psi, const MatrixField& g,
                             DerivativeEngine engine);

/// Dual route for cross checks: d*_g psi = -star_2 d star_1 psi.
ScalarField codifferential_1_via_hodge(const VectorField& psi, const MatrixField& g,
                                       DerivativeEngine engine);

/// Rotation of a tangent vector by +90 degrees: J v = (star (v flat)) sharp.
Vec rotate_vector(const Mat& g, Real orientation, const Vec& v);

} // namespace eulerclass

#endif
