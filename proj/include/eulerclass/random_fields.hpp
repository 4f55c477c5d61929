#ifndef EULERCLASS_RANDOM_FIELDS_HPP
#define EULERCLASS_RANDOM_FIELDS_HPP

#include <cstdint>

#include "eulerclass/field.hpp"

namespace eulerclass {

/// Seeded generators for smooth random data. Periodic charts get low-order
/// Fourier modes; sphere charts get restrictions of low-degree ambient
/// polynomials (smooth across the poles that the chart itself excludes).
/// Both families carry exact partial callbacks.

/// Smooth random scalar field, amplitude-bounded by `amplitude`.
ScalarField random_scalar_field(const Chart& chart, std::uint64_t seed,
                                Real amplitude);

/// Smooth random 1-form.
VectorField random_one_form(const Chart& chart, std::uint64_t seed, Real amplitude);

/// Smooth random endomorphism-valued 1-form on the tangent bundle, built
/// from tensor products of smooth 1-forms raised with g (a connection
/// perturbation).
Coeffs3Field random_endo_one_form(const MatrixField& g, std::uint64_t seed,
                                  Real amplitude);

/// Deterministic interior sample points, kept away from non-periodic chart
/// edges by the given margin fraction of each extent.
std::vector<Vec> sample_points(const Chart& chart, int count, std::uint64_t seed,
                               Real margin_fraction = 0.12);

} // namespace eulerclass

#endif
