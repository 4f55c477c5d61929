#include "eulerclass/calculus.hpp"

#include <cmath>

#include "eulerclass/metric.hpp"

namespace eulerclass {

FormField one_form(const VectorField& components) {
  FormField out;
  out.chart = components.chart;
  const int n = components.chart.dim;
  auto to_form = [n](const Vec& c) {
    FormD w(n, 1);
    for (int i = 0; i < n; ++i) w.coeff_at_rank(i) = c[i];
    return w;
  };
  out.value = [components, to_form](const Vec& x) { return to_form(components.value(x)); };
  if (components.has_exact_partial())
    out.partial = [components, to_form](int i, const Vec& x) {
      return to_form(components.partial(i, x));
    };
  if (components.has_exact_partial2())
    out.partial2 = [components, to_form](int i, int j, const Vec& x) {
      return to_form(components.partial2(i, j, x));
    };
  return out;
}

VectorField one_form_components(const FormField& w) {
  VectorField out;
  out.chart = w.chart;
  const int n = w.chart.dim;
  out.value = [w, n](const Vec& x) {
    FormD f = w.value(x);
    require(f.degree() == 1, "one_form_components: degree-1 form expected");
    Vec c(n);
    for (int i = 0; i < n; ++i) c[i] = f.coeff_at_rank(i);
    return c;
  };
  return out;
}

FormField exterior_derivative(const FormField& w, DerivativeEngine engine) {
  FormField out;
  out.chart = w.chart;
  const int n = w.chart.dim;
  out.value = [w, engine, n](const Vec& x) {
    FormD probe = w.value(x);
    require(probe.degree() < n, "exterior_derivative: input is already top-degree");
    FormD acc(n, probe.degree() + 1);
    for (int i = 0; i < n; ++i) {
      FormD di = engine.partial(w, i, x);
      acc += wedge(FormD::basis(n, {i}), di);
    }
    return acc;
  };
  return out;
}

Vec rotate_vector(const Mat& g, Real orientation, const Vec& v) {
  // J(v)^i = -s sqrt(det g) g^{ik} eps_kl v^l, eps_01 = +1.
  require(v.size() == 2, "rotate_vector: surface charts only");
  Real sg = orientation * std::sqrt(g.determinant());
  Vec eps(2);
  eps[0] = -sg * v[1];
  eps[1] = sg * v[0];
  return g.inverse() * eps; // eps holds (J v) with index lowered
}

VectorField hodge_star_1(const VectorField& psi, const MatrixField& g) {
  require(psi.chart.dim == 2, "hodge_star_1: surface charts only");
  VectorField out;
  out.chart = psi.chart;
  Real s = psi.chart.orientation;
  out.value = [psi, g, s](const Vec& x) {
    Mat gx = g.value(x);
    Vec up = gx.inverse() * psi.value(x);
    Real sg = s * std::sqrt(gx.determinant());
    Vec r(2);
    // (star psi)_j = s sqrt(g) eps_kj psi^k
    r[0] = -sg * up[1];
    r[1] = sg * up[0];
    return r;
  };
  return out;
}

ScalarField hodge_star_2(const FormField& w, const MatrixField& g) {
  require(w.chart.dim == 2, "hodge_star_2: surface charts only");
  ScalarField out;
  out.chart = w.chart;
  Real s = w.chart.orientation;
  out.value = [w, g, s](const Vec& x) {
    FormD f = w.value(x);
    require(f.degree() == 2, "hodge_star_2: degree-2 form expected");
    return s * f.top_coefficient() / std::sqrt(g.value(x).determinant());
  };
  return out;
}

ScalarField codifferential_1(const VectorField& psi, const MatrixField& g,
                             DerivativeEngine engine) {
  VectorField flux; // F^i = sqrt(det g) g^{ij} psi_j
  flux.chart = psi.chart;
  flux.value = [psi, g](const Vec& x) {
    Mat gx = g.value(x);
    return Vec(std::sqrt(gx.determinant()) * (gx.inverse() * psi.value(x)));
  };
  if (psi.has_exact_partial() && g.has_exact_partial()) {
    flux.partial = [psi, g](int i, const Vec& x) {
      Mat gx = g.value(x);
      Mat ginv = gx.inverse();
      Mat dg = g.partial(i, x);
      Real s = std::sqrt(gx.determinant());
      Real ds = 0.5 * s * (ginv * dg).trace();
      Mat dginv = inverse_metric_partial(ginv, dg);
      return Vec(ds * (ginv * psi.value(x)) + s * (dginv * psi.value(x)) +
                 s * (ginv * psi.partial(i, x)));
    };
  }
  ScalarField out;
  out.chart = psi.chart;
  const int n = psi.chart.dim;
  out.value = [flux, g, engine, n](const Vec& x) {
    Real div = 0;
    for (int i = 0; i < n; ++i) div += engine.partial(flux, i, x)[i];
    return -div / std::sqrt(g.value(x).determinant());
  };
  return out;
}

ScalarField codifferential_1_via_hodge(const VectorField& psi, const MatrixField& g,
                                       DerivativeEngine engine) {
  FormField starred = one_form(hodge_star_1(psi, g));
  FormField d_starred = exterior_derivative(starred, engine);
  ScalarField ss = hodge_star_2(d_starred, g);
  ScalarField out;
  out.chart = psi.chart;
  out.value = [ss](const Vec& x) { return -ss.value(x); };
  return out;
}

} // namespace eulerclass
