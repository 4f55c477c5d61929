#ifndef EULERCLASS_DERIVATIVE_HPP
#define EULERCLASS_DERIVATIVE_HPP

#include <algorithm>
#include <cmath>

#include "eulerclass/field.hpp"

namespace eulerclass {

/// Differentiation strategy for smooth fields.
///
/// Exact mode delegates to the field's own partial callbacks. Central mode
/// uses symmetric differences (f(x+h) - f(x-h)) / 2h, wrapping periodic
/// coordinates and shrinking the step near non-periodic chart edges so no
/// sample leaves the domain. Richardson extrapolation combines steps h and
/// h/2 for fourth-order accuracy; it is the right default when the result
/// feeds a second differentiation (curvature pipelines).
struct DerivativeEngine {
  enum class Mode { Exact, CentralFd };

  Mode mode = Mode::CentralFd;
  Real step = 1e-5;
  bool richardson = false;

  static DerivativeEngine fd(Real h = 1e-5) {
    return DerivativeEngine{Mode::CentralFd, h, false};
  }
  static DerivativeEngine fd_richardson(Real h = 1e-3) {
    return DerivativeEngine{Mode::CentralFd, h, true};
  }
  static DerivativeEngine exact() {
    return DerivativeEngine{Mode::Exact, 1e-5, false};
  }

  bool is_exact() const { return mode == Mode::Exact; }

  /// Largest step so that x_i +- h (and the h/2 sub-steps) stay strictly
  /// inside a non-periodic coordinate range.
  static Real fitted_step(const Chart& chart, int i, Real x_i, Real h) {
    if (chart.periodic[i]) return h;
    Real room = 0.5 * std::min(x_i - chart.lo[i], chart.hi[i] - x_i);
    return std::min(h, room);
  }

  template <class T>
  T partial(const Field<T>& f, int i, const Vec& x) const {
    if (mode == Mode::Exact) {
      require(f.has_exact_partial(),
              "DerivativeEngine: exact mode requires a partial callback");
      return f.partial(i, x);
    }
    Real h = fitted_step(f.chart, i, x[i], step);
    require(h > 0, "DerivativeEngine: point on a non-periodic chart edge");
    if (!richardson) return central(f, i, x, h);
    T d1 = central(f, i, x, h);
    T d2 = central(f, i, x, 0.5 * h);
    // (4 D_{h/2} - D_h) / 3
    d2 *= 4.0 / 3.0;
    d1 *= -1.0 / 3.0;
    d2 += d1;
    return d2;
  }

  /// Second partial; exact mode uses partial2, otherwise differences the
  /// first derivative.
  template <class T>
  T partial2(const Field<T>& f, int i, int j, const Vec& x) const {
    if (mode == Mode::Exact) {
      require(f.has_exact_partial2(),
              "DerivativeEngine: exact mode requires a partial2 callback");
      return f.partial2(i, j, x);
    }
    Field<T> df;
    df.chart = f.chart;
    DerivativeEngine inner = *this;
    df.value = [inner, f, j](const Vec& y) { return inner.partial(f, j, y); };
    return partial(df, i, x);
  }

private:
  template <class T>
  T central(const Field<T>& f, int i, const Vec& x, Real h) const {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    T vp = f.value(f.chart.wrap(xp));
    T vm = f.value(f.chart.wrap(xm));
    vp -= vm;
    vp *= 1.0 / (2.0 * h);
    return vp;
  }
};

/// Engines used across a pipeline: `base` for single derivatives of raw
/// fields, `curvature` for derivatives of quantities that already contain a
/// derivative (connection coefficients, frame factors).
struct EngineSet {
  DerivativeEngine base = DerivativeEngine::fd(1e-5);
  DerivativeEngine curvature = DerivativeEngine::fd_richardson(1e-3);

  static EngineSet fd_default() { return EngineSet{}; }
  static EngineSet exact() {
    return EngineSet{DerivativeEngine::exact(), DerivativeEngine::exact()};
  }
};

} // namespace eulerclass

#endif
