#include "eulerclass/geometries.hpp"

#include <cmath>
#include <cstdio>

namespace eulerclass {

namespace {

std::string number(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

MatrixField euclidean_metric(const Chart& chart) {
  return constant_field<Mat>(chart, Mat::Identity(chart.dim, chart.dim),
                             Mat::Zero(chart.dim, chart.dim));
}

MatrixField round_sphere_metric(Real radius) {
  Chart c = Chart::sphere();
  std::string r2 = number(radius * radius);
  return expression_metric(c, {r2, "0", "0", r2 + "*sin(u)^2"});
}

MatrixField ellipsoid_metric(Real a, Real b, Real c) {
  Chart chart = Chart::sphere();
  std::string a2 = number(a * a), b2 = number(b * b), c2 = number(c * c);
  // r(u,v) = (a sin u cos v, b sin u sin v, c cos u)
  std::string e = a2 + "*cos(u)^2*cos(v)^2 + " + b2 + "*cos(u)^2*sin(v)^2 + " + c2 +
                  "*sin(u)^2";
  std::string f = "(" + b2 + " - " + a2 + ")*sin(u)*cos(u)*sin(v)*cos(v)";
  std::string g = a2 + "*sin(u)^2*sin(v)^2 + " + b2 + "*sin(u)^2*cos(v)^2";
  return expression_metric(chart, {e, f, f, g});
}

MatrixField conformal_metric(const ScalarField& f, const MatrixField& g) {
  MatrixField out;
  out.chart = g.chart;
  out.value = [f, g](const Vec& x) {
    return Mat(std::exp(2.0 * f.value(x)) * g.value(x));
  };
  if (f.has_exact_partial() && g.has_exact_partial()) {
    out.partial = [f, g](int i, const Vec& x) {
      Real e = std::exp(2.0 * f.value(x));
      return Mat(e * (2.0 * f.partial(i, x) * g.value(x) + g.partial(i, x)));
    };
  }
  if (f.has_exact_partial2() && g.has_exact_partial2()) {
    out.partial2 = [f, g](int i, int j, const Vec& x) {
      Real e = std::exp(2.0 * f.value(x));
      Real fi = f.partial(i, x), fj = f.partial(j, x);
      Mat gx = g.value(x);
      return Mat(e * ((4.0 * fi * fj + 2.0 * f.partial2(i, j, x)) * gx +
                      2.0 * fi * g.partial(j, x) + 2.0 * fj * g.partial(i, x) +
                      g.partial2(i, j, x)));
    };
  }
  return out;
}

namespace {

Vec first_half(const Vec& x) { return x.head(2); }
Vec second_half(const Vec& x) { return x.tail(2); }

} // namespace

MatrixField product_metric(const Chart& product_chart, const MatrixField& first,
                           const MatrixField& second) {
  require(product_chart.dim == 4, "product_metric: 4-dimensional chart expected");
  MatrixField out;
  out.chart = product_chart;
  out.value = [first, second](const Vec& x) {
    Mat m = Mat::Zero(4, 4);
    m.topLeftCorner(2, 2) = first.value(first_half(x));
    m.bottomRightCorner(2, 2) = second.value(second_half(x));
    return m;
  };
  if (first.has_exact_partial() && second.has_exact_partial()) {
    out.partial = [first, second](int i, const Vec& x) {
      Mat m = Mat::Zero(4, 4);
      if (i < 2)
        m.topLeftCorner(2, 2) = first.partial(i, first_half(x));
      else
        m.bottomRightCorner(2, 2) = second.partial(i - 2, second_half(x));
      return m;
    };
  }
  if (first.has_exact_partial2() && second.has_exact_partial2()) {
    out.partial2 = [first, second](int i, int j, const Vec& x) {
      Mat m = Mat::Zero(4, 4);
      if (i < 2 && j < 2)
        m.topLeftCorner(2, 2) = first.partial2(i, j, first_half(x));
      else if (i >= 2 && j >= 2)
        m.bottomRightCorner(2, 2) = second.partial2(i - 2, j - 2, second_half(x));
      return m;
    };
  }
  return out;
}

Coeffs3Field weyl_connection(const MatrixField& g, const VectorField& phi,
                             DerivativeEngine base) {
  return build_ansatz(make_ansatz(g, phi, -0.5, -0.5, 0.5), base);
}

VectorField lift_one_form_to_product(const Chart& product_chart,
                                     const VectorField& surface_form, int factor) {
  require(factor == 0 || factor == 1, "lift_one_form_to_product: factor is 0 or 1");
  VectorField out;
  out.chart = product_chart;
  const int off = factor == 0 ? 0 : 2;
  out.value = [surface_form, off](const Vec& x) {
    Vec r = Vec::Zero(4);
    Vec half = off == 0 ? x.head(2) : x.tail(2);
    r.segment(off, 2) = surface_form.value(half);
    return r;
  };
  if (surface_form.has_exact_partial()) {
    out.partial = [surface_form, off](int i, const Vec& x) {
      Vec r = Vec::Zero(4);
      if (i >= off && i < off + 2) {
        Vec half = off == 0 ? x.head(2) : x.tail(2);
        r.segment(off, 2) = surface_form.partial(i - off, half);
      }
      return r;
    };
  }
  return out;
}

} // namespace eulerclass
