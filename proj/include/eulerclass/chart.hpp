#ifndef EULERCLASS_CHART_HPP
#define EULERCLASS_CHART_HPP

#include <cmath>
#include <vector>

#include "eulerclass/types.hpp"

namespace eulerclass {

/// Rectangular coordinate chart: a box [lo_i, hi_i] per coordinate, with
/// per-coordinate periodicity (lo identified with hi) and an orientation
/// sign for integration.
struct Chart {
  int dim = 2;
  Vec lo, hi;
  std::vector<bool> periodic;
  Real orientation = 1.0;
  /// polar_pair[i] >= 0 marks coordinate i as a polar axis whose endpoints
  /// are area-element degeneracies, paired with the angular coordinate
  /// polar_pair[i] (spherical theta paired with phi). Random smooth data on
  /// such charts is built from ambient polynomials of the pair.
  std::vector<int> polar_pair;
  /// Free-text note about known area-element degeneracies (chart edges where
  /// det g -> 0, e.g. the poles of spherical coordinates).
  std::string degeneracy_note;

  static Chart box(const Vec& lo, const Vec& hi, std::vector<bool> periodic,
                   Real orientation = 1.0) {
    Chart c;
    c.dim = static_cast<int>(lo.size());
    c.lo = lo;
    c.hi = hi;
    c.periodic = std::move(periodic);
    c.polar_pair.assign(static_cast<std::size_t>(c.dim), -1);
    c.orientation = orientation;
    for (int i = 0; i < c.dim; ++i)
      require(c.lo[i] < c.hi[i], "Chart: lo < hi required per coordinate");
    return c;
  }

  /// Spherical coordinates (theta, phi) on the unit sphere, poles excluded.
  static Chart sphere() {
    Chart c = box(Vec::Zero(2), (Vec(2) << M_PI, 2.0 * M_PI).finished(),
                  {false, true});
    c.polar_pair = {1, -1};
    c.degeneracy_note = "area element vanishes at theta = 0, pi (poles excluded)";
    return c;
  }

  /// Flat square torus [0, 2pi]^2, both coordinates periodic.
  static Chart torus() {
    return box(Vec::Zero(2), (Vec(2) << 2.0 * M_PI, 2.0 * M_PI).finished(),
               {true, true});
  }

  /// Product of two sphere charts: (theta1, phi1, theta2, phi2).
  static Chart product_of_spheres() {
    Vec lo = Vec::Zero(4);
    Vec hi(4);
    hi << M_PI, 2.0 * M_PI, M_PI, 2.0 * M_PI;
    Chart c = box(lo, hi, {false, true, false, true});
    c.polar_pair = {1, -1, 3, -1};
    c.degeneracy_note = "area element vanishes where either theta hits 0 or pi";
    return c;
  }

  bool contains(const Vec& x, Real slack = 0.0) const {
    for (int i = 0; i < dim; ++i) {
      if (periodic[i]) continue;
      if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    }
    return true;
  }

  /// Maps periodic coordinates back into [lo, hi).
  Vec wrap(Vec x) const {
    for (int i = 0; i < dim; ++i) {
      if (!periodic[i]) continue;
      Real span = hi[i] - lo[i];
      Real t = std::fmod(x[i] - lo[i], span);
      if (t < 0) t += span;
      x[i] = lo[i] + t;
    }
    return x;
  }

  Real extent(int i) const { return hi[i] - lo[i]; }
};

} // namespace eulerclass

#endif
