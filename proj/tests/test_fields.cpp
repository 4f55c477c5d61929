#include "doctest.h"

#include <cmath>
#include <random>

#include "eulerclass/calculus.hpp"
#include "eulerclass/curve.hpp"
#include "eulerclass/expression.hpp"
#include "eulerclass/metric.hpp"
#include "eulerclass/quadrature.hpp"
#include "eulerclass/random_fields.hpp"

using namespace eulerclass;

namespace {

Chart plane(Real half = 2.0) {
  return Chart::box((Vec(2) << -half, -half).finished(),
                    (Vec(2) << half, half).finished(), {false, false});
}

MatrixField flat_metric(const Chart& chart) {
  return constant_field<Mat>(chart, Mat::Identity(chart.dim, chart.dim),
                             Mat::Zero(chart.dim, chart.dim));
}

MatrixField round_sphere_metric() {
  Chart c = Chart::sphere();
  return expression_metric(c, {"1", "0", "0", "sin(u)^2"});
}

Vec pt(Real a, Real b) { return (Vec(2) << a, b).finished(); }

} // namespace

TEST_CASE("gauss-legendre exactness") {
  // N nodes integrate polynomials of degree <= 2N-1 exactly.
  for (int n : {2, 5, 8, 16}) {
    MappedRule r = mapped_rule(n, 0.0, 1.0);
    int degree = 2 * n - 1;
    Real acc = 0;
    for (std::size_t q = 0; q < r.nodes.size(); ++q)
      acc += r.weights[q] * std::pow(r.nodes[q], degree);
    CHECK(acc == doctest::Approx(1.0 / (degree + 1)).epsilon(1e-12));
  }
}

TEST_CASE("partial derivative modes") {
  Chart c = plane(5.0);
  ScalarField f = expression_scalar_field(c, "u^2");
  DerivativeEngine fd = DerivativeEngine::fd(1e-5);
  CHECK(fd.partial(f, 0, pt(3.0, 0.0)) == doctest::Approx(6.0).epsilon(1e-8));

  ScalarField k = constant_scalar_field(c, 4.2);
  CHECK(fd.partial(k, 0, pt(0.3, 0.1)) == doctest::Approx(0.0));

  ScalarField s = expression_scalar_field(c, "sin(u)*cos(v)");
  DerivativeEngine exact = DerivativeEngine::exact();
  auto points = sample_points(c, 100, 7);
  for (const auto& x : points) {
    CHECK(fd.partial(s, 0, x) == doctest::Approx(exact.partial(s, 0, x)).epsilon(1e-9));
    CHECK(fd.partial(s, 1, x) == doctest::Approx(exact.partial(s, 1, x)).epsilon(1e-9));
  }
}

TEST_CASE("fd convergence order") {
  Chart c = plane(5.0);
  ScalarField s = expression_scalar_field(c, "sin(u)*exp(v/3)");
  Vec x = pt(0.7, -0.4);
  Real exact = std::cos(0.7) * std::exp(-0.4 / 3.0);

  auto err = [&](Real h, bool rich) {
    DerivativeEngine e = rich ? DerivativeEngine::fd_richardson(h) : DerivativeEngine::fd(h);
    return std::abs(e.partial(s, 0, x) - exact);
  };
  // measured order = log2(err(2h)/err(h)) should sit near the nominal order
  Real o2 = std::log2(err(2e-3, false) / err(1e-3, false));
  CHECK(std::abs(o2 - 2.0) < 0.2);
  Real o4 = std::log2(err(2e-2, true) / err(1e-2, true));
  CHECK(std::abs(o4 - 4.0) < 0.2);
}

TEST_CASE("exterior derivative basics") {
  Chart c = plane();
  // d(u dv) = du ^ dv
  VectorField w;
  w.chart = c;
  w.value = [](const Vec& x) { return (Vec(2) << 0.0, x[0]).finished(); };
  FormField dw = exterior_derivative(one_form(w), DerivativeEngine::fd(1e-6));
  FormD v = dw.value(pt(0.3, -0.7));
  int idx[2] = {0, 1};
  CHECK(v(std::span<const int>(idx, 2)) == doctest::Approx(1.0).epsilon(1e-9));

  // d(cos(u) du) = 0
  Chart t = Chart::torus();
  VectorField cu;
  cu.chart = t;
  cu.value = [](const Vec& x) { return (Vec(2) << std::cos(x[0]), 0.0).finished(); };
  FormField dcu = exterior_derivative(one_form(cu), DerivativeEngine::fd(1e-6));
  CHECK(dcu.value(pt(1.0, 2.0)).max_abs() < 1e-9);
}

TEST_CASE("d of d vanishes") {
  Chart c = Chart::torus();
  DerivativeEngine fd = DerivativeEngine::fd_richardson(1e-3);
  DerivativeEngine exact = DerivativeEngine::exact();

  ScalarField f = expression_scalar_field(c, "sin(u)*cos(v) + 0.3*cos(2*v)");
  FormField f0;
  f0.chart = c;
  f0.value = [f](const Vec& x) { return FormD::constant(2, f.value(x)); };
  f0.partial = [f](int i, const Vec& x) { return FormD::constant(2, f.partial(i, x)); };

  FormField df_exact = exterior_derivative(f0, exact);
  FormField ddf = exterior_derivative(df_exact, fd);
  CHECK(ddf.value(pt(1.3, 0.4)).max_abs() < 1e-6);

  // exact all the way: d(df) with symbolic partials
  VectorField grad;
  grad.chart = c;
  grad.value = [f](const Vec& x) {
    return (Vec(2) << f.partial(0, x), f.partial(1, x)).finished();
  };
  grad.partial = [f](int i, const Vec& x) {
    return (Vec(2) << f.partial2(i, 0, x), f.partial2(i, 1, x)).finished();
  };
  FormField ddf_exact = exterior_derivative(one_form(grad), exact);
  CHECK(ddf_exact.value(pt(1.3, 0.4)).max_abs() < 1e-10);
}

TEST_CASE("exterior derivative rejects top degree") {
  Chart c = plane();
  FormField top;
  top.chart = c;
  top.value = [](const Vec&) { return FormD::basis(2, {0, 1}); };
  FormField d = exterior_derivative(top, DerivativeEngine::fd(1e-5));
  CHECK_THROWS_AS(d.value(pt(0, 0)), contract_error);
}

TEST_CASE("hodge star and codifferential on the flat torus") {
  Chart c = Chart::torus();
  MatrixField g = flat_metric(c);
  DerivativeEngine fd = DerivativeEngine::fd(1e-5);

  // eigenfunction: f = cos(u), d*_g(df) = cos(u)
  ScalarField f = expression_scalar_field(c, "cos(u)");
  VectorField df;
  df.chart = c;
  df.value = [f](const Vec& x) {
    return (Vec(2) << f.partial(0, x), f.partial(1, x)).finished();
  };
  ScalarField lap = codifferential_1(df, g, fd);
  CHECK(lap.value(pt(0.9, 2.2)) == doctest::Approx(std::cos(0.9)).epsilon(1e-8));

  // star_1 twice is minus the identity
  VectorField psi = random_one_form(c, 5, 1.0);
  VectorField ss = hodge_star_1(hodge_star_1(psi, g), g);
  Vec x = pt(2.0, 1.1);
  CHECK((ss.value(x) + psi.value(x)).cwiseAbs().maxCoeff() < 1e-12);

  // dual route agrees
  ScalarField via_hodge = codifferential_1_via_hodge(psi, g, fd);
  ScalarField direct = codifferential_1(psi, g, fd);
  CHECK(via_hodge.value(x) == doctest::Approx(direct.value(x)).epsilon(1e-7));

  // total divergence over the closed torus vanishes
  FormField density;
  density.chart = c;
  density.value = [direct](const Vec& y) {
    FormD w(2, 2);
    w.coeff_at_rank(0) = direct.value(y);
    return w;
  };
  CHECK(std::abs(integrate_form(density, 48)) < 1e-8);
}

TEST_CASE("integration of top forms") {
  // du ^ dv over the torus
  Chart t = Chart::torus();
  FormField vol;
  vol.chart = t;
  vol.value = [](const Vec&) { return FormD::basis(2, {0, 1}); };
  CHECK(integrate_form(vol, 32) == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-12));

  // round sphere area
  Chart s = Chart::sphere();
  MatrixField g = round_sphere_metric();
  FormField area;
  area.chart = s;
  area.value = [g](const Vec& x) {
    FormD w(2, 2);
    w.coeff_at_rank(0) = std::sqrt(g.value(x).determinant());
    return w;
  };
  CHECK(integrate_form(area, 64) == doctest::Approx(4.0 * M_PI).epsilon(1e-10));

  // exact forms integrate to zero over the torus
  ScalarField h = expression_scalar_field(t, "sin(u)*sin(v)");
  VectorField dh;
  dh.chart = t;
  dh.value = [h](const Vec& x) {
    return (Vec(2) << h.partial(0, x), h.partial(1, x)).finished();
  };
  FormField dform = exterior_derivative(one_form(dh), DerivativeEngine::fd(1e-5));
  CHECK(std::abs(integrate_form(dform, 48)) < 1e-8);
}

TEST_CASE("lie derivative of the metric") {
  Chart c = plane();
  MatrixField flat = flat_metric(c);
  EngineSet engines;

  VectorField zero = constant_field<Vec>(c, Vec::Zero(2), Vec::Zero(2));
  MatrixField lz = lie_derivative_metric(zero, flat, engines);
  CHECK(lz.value(pt(0.2, 0.4)).cwiseAbs().maxCoeff() < 1e-12);

  VectorField du = constant_field<Vec>(c, (Vec(2) << 1.0, 0.0).finished(), Vec::Zero(2));
  MatrixField ldu = lie_derivative_metric(du, flat, engines);
  CHECK(ldu.value(pt(0.2, 0.4)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("lie derivative against the flow oracle") {
  Chart c = Chart::sphere();
  MatrixField g = round_sphere_metric();
  EngineSet engines = EngineSet::exact();
  VectorField phi = expression_one_form(c, {"0.3*cos(u)*cos(v)", "-0.3*sin(u)*sin(v)"});
  MatrixField lie = lie_derivative_metric(phi, g, engines);

  // pullback difference quotient of g under the flow of phi#
  auto vector_at = [&](const Vec& x) { return Vec(g.value(x).inverse() * phi.value(x)); };
  auto flow = [&](Vec x, Real eps) {
    // one RK4 step of size eps along phi#
    Vec k1 = vector_at(x);
    Vec k2 = vector_at(x + 0.5 * eps * k1);
    Vec k3 = vector_at(x + 0.5 * eps * k2);
    Vec k4 = vector_at(x + eps * k3);
    return Vec(x + eps / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };
  Real eps = 1e-4;
  Vec x = pt(1.1, 2.0);
  // d Phi_eps by finite differences of the flow map
  Mat jac(2, 2);
  Real h = 1e-5;
  for (int j = 0; j < 2; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    jac.col(j) = (flow(xp, eps) - flow(xm, eps)) / (2.0 * h);
  }
  Mat pulled = jac.transpose() * g.value(flow(x, eps)) * jac;
  Mat quotient = (pulled - g.value(x)) / eps;
  CHECK((quotient - lie.value(x)).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("curve integrals") {
  // equator of the unit sphere has length 2 pi
  Chart s = Chart::sphere();
  MatrixField g = round_sphere_metric();
  CurveSegment equator;
  equator.chart = s;
  equator.point = [](Real t) { return pt(0.5 * M_PI, 2.0 * M_PI * t); };
  equator.velocity = [](Real) { return pt(0.0, 2.0 * M_PI); };
  CHECK(curve_length(equator, g, 64) == doctest::Approx(2.0 * M_PI).epsilon(1e-12));

  // reparametrization invariance
  CurveSegment warped;
  warped.chart = s;
  warped.point = [](Real t) {
    Real tau = t * t * (3.0 - 2.0 * t); // smooth monotone reparametrization
    return pt(0.5 * M_PI, 2.0 * M_PI * tau);
  };
  CHECK(curve_length(warped, g, 96) ==
        doctest::Approx(2.0 * M_PI).epsilon(1e-9));

  // vanishing speed is rejected
  CurveSegment degenerate;
  degenerate.chart = s;
  degenerate.point = [](Real) { return pt(1.0, 1.0); };
  CHECK_THROWS_AS(curve_length(degenerate, g, 16), domain_error);
}

TEST_CASE("divergence theorem on a disk with inward normal") {
  Chart c = plane();
  MatrixField g = flat_metric(c);
  DerivativeEngine fd = DerivativeEngine::fd(1e-6);
  VectorField psi = random_one_form(c, 17, 0.8);

  // interior: int_D div(psi#) dA = -int_D d* psi dA
  ScalarField dstar = codifferential_1(psi, g, fd);
  CurvedPolygon disk;
  CurveSegment boundary;
  boundary.chart = c;
  boundary.point = [](Real t) {
    return pt(std::cos(2.0 * M_PI * t), std::sin(2.0 * M_PI * t));
  };
  disk.segments = {boundary};
  disk.interior = [](Real a, Real b) {
    return pt(a * std::cos(2.0 * M_PI * b), a * std::sin(2.0 * M_PI * b));
  };
  Real interior = polygon_interior_integral(disk, g, 80, [&](const Vec& x) {
    return -dstar.value(x);
  });

  // boundary: flux through the inward normal
  Real flux = curve_integral(boundary, g, 128, [&](const Vec& x, const Vec& v) {
    Vec n = rotate_vector(g.value(x), c.orientation, v);
    Real speed = n.norm();
    Vec vec = g.value(x).inverse() * psi.value(x);
    return vec.dot(n) / speed;
  });
  CHECK(std::abs(interior + flux) < 1e-6);
}
