#include "doctest.h"

#include <cmath>

#include "eulerclass/geometries.hpp"
#include "eulerclass/random_fields.hpp"
#include "eulerclass/surface.hpp"

using namespace eulerclass;

namespace {

Vec pt(Real a, Real b) { return (Vec(2) << a, b).finished(); }

BundleGeometry sphere_lc_bundle(const EngineSet& engines) {
  MatrixField g = round_sphere_metric();
  return tangent_bundle(g.chart, g, christoffel_field(g, engines.base));
}

BundleGeometry sphere_ansatz_bundle(Real a, Real b, Real c, std::uint64_t seed,
                                    const EngineSet& engines, Real amplitude = 0.4) {
  MatrixField g = round_sphere_metric();
  VectorField phi = random_one_form(g.chart, seed, amplitude);
  return tangent_bundle(g.chart, g,
                        build_ansatz(make_ansatz(g, phi, a, b, c), engines.base));
}

BundleGeometry torus_ansatz_bundle(Real a, Real b, Real c, std::uint64_t seed,
                                   const EngineSet& engines) {
  Chart chart = Chart::torus();
  MatrixField g = euclidean_metric(chart);
  VectorField phi = random_one_form(chart, seed, 0.5);
  return tangent_bundle(chart, g,
                        build_ansatz(make_ansatz(g, phi, a, b, c), engines.base));
}

} // namespace

TEST_CASE("non-metricity") {
  EngineSet engines;
  Chart chart = Chart::torus();
  MatrixField g = euclidean_metric(chart);

  // constant antisymmetric connection in an orthonormal frame is metric
  Coeffs3 w(2, 2);
  w[0] << 0, 0.7, -0.7, 0;
  w[1] << 0, -0.2, 0.2, 0;
  BundleGeometry b{chart, 2, g, constant_field<Coeffs3>(chart, w, Coeffs3(2, 2)), 1.0};
  CHECK(non_metricity(b, engines.base).value(pt(1, 2)).max_abs() < 1e-12);

  // Weyl connection: nabla g = phi (x) g
  MatrixField gs = round_sphere_metric();
  VectorField phi = random_one_form(gs.chart, 3, 0.7);
  BundleGeometry weyl = tangent_bundle(gs.chart, gs,
                                       weyl_connection(gs, phi, engines.base));
  for (const auto& x : sample_points(gs.chart, 20, 11)) {
    Coeffs3 ng = non_metricity(weyl, engines.base).value(x);
    Mat gx = gs.value(x);
    Vec ph = phi.value(x);
    Real res = 0;
    for (int i = 0; i < 2; ++i)
      res = std::max(res, (ng[i] - ph[i] * gx).cwiseAbs().maxCoeff());
    CHECK(res < 1e-9);
    // symmetric in the fibre indices
    for (int i = 0; i < 2; ++i)
      CHECK((ng[i] - ng[i].transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("error term") {
  EngineSet engines;
  // Weyl connections have (g^{-1} nabla g)^2 = 0
  MatrixField g = round_sphere_metric();
  VectorField phi = random_one_form(g.chart, 5, 0.8);
  BundleGeometry weyl = tangent_bundle(g.chart, g, weyl_connection(g, phi, engines.base));
  FormMatrixField err = error_term(weyl, engines.base);
  for (const auto& x : sample_points(g.chart, 10, 23))
    CHECK(err.value(x).max_abs() < 1e-9);

  // generic connection: agrees with matrix_wedge(g^{-1} nabla g, itself)
  BundleGeometry any = sphere_ansatz_bundle(0.3, -0.2, 0.5, 7, engines);
  FormMatrixField err2 = error_term(any, engines.base);
  for (const auto& x : sample_points(g.chart, 10, 29)) {
    Coeffs3 ng = non_metricity(any, engines.base).value(x);
    Mat ginv = any.metric.value(x).inverse();
    FormMatrixD as_forms(2, 2, 1);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int i = 0; i < 2; ++i)
          as_forms(a, b).coeff_at_rank(i) = (ginv * ng[i])(a, b);
    FormMatrixD squared = matrix_wedge(as_forms, as_forms);
    CHECK((squared - err2.value(x)).max_abs() < 1e-9);
  }
}

TEST_CASE("curvature basics") {
  EngineSet engines;
  Chart chart = Chart::torus();
  MatrixField g = euclidean_metric(chart);

  BundleGeometry zero{chart, 2, g,
                      constant_field<Coeffs3>(chart, Coeffs3(2, 2), Coeffs3(2, 2)), 1.0};
  CHECK(curvature(zero, engines).value(pt(1, 1)).max_abs() < 1e-12);

  // constant connection: Omega = w ^ w
  Coeffs3 w(2, 2);
  w[0] << 0.3, 0.7, -0.1, 0.2;
  w[1] << -0.4, 0.05, 0.6, -0.2;
  BundleGeometry constw{chart, 2, g, constant_field<Coeffs3>(chart, w, Coeffs3(2, 2)),
                        1.0};
  FormMatrixD omega = curvature(constw, engines).value(pt(2, 3));
  Mat commutator = w[0] * w[1] - w[1] * w[0];
  int idx[2] = {0, 1};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      CHECK(omega(a, b)(std::span<const int>(idx, 2)) ==
            doctest::Approx(commutator(a, b)).epsilon(1e-9));
}

TEST_CASE("round sphere curvature in the orthonormal frame") {
  EngineSet engines;
  BundleGeometry onb = orthonormalize_frame(sphere_lc_bundle(engines), engines.base);
  FormMatrixField omega = curvature(onb, engines);
  for (const auto& x : sample_points(Chart::sphere(), 12, 31)) {
    FormMatrixD o = omega.value(x);
    int idx[2] = {0, 1};
    CHECK(o(0, 1)(std::span<const int>(idx, 2)) ==
          doctest::Approx(std::sin(x[0])).epsilon(1e-7));
    CHECK(o(0, 0).max_abs() < 1e-8);
  }
}

TEST_CASE("split identities") {
  EngineSet engines;
  // metric connection: w_S = 0 branch
  BundleGeometry lc_onb = orthonormalize_frame(sphere_lc_bundle(engines), engines.base);
  SplitResiduals r1 = split_identities_check(lc_onb, pt(1.2, 0.8), engines);
  CHECK(r1.antisymmetric < 1e-8);
  CHECK(r1.symmetric < 1e-8);

  // generic ansatz connection on the sphere
  BundleGeometry any = sphere_ansatz_bundle(0.25, -0.35, 0.15, 13, engines);
  BundleGeometry onb = orthonormalize_frame(any, engines.base);
  for (const auto& x : sample_points(Chart::sphere(), 5, 37)) {
    SplitResiduals r = split_identities_check(onb, x, engines);
    CHECK(r.antisymmetric < 1e-6);
    CHECK(r.symmetric < 1e-6);
  }

  // constant connection on a flat chart: d terms drop, pure algebra
  Chart chart = Chart::torus();
  MatrixField g = euclidean_metric(chart);
  Coeffs3 w(2, 2);
  w[0] << 0.3, 0.7, -0.1, 0.2;
  w[1] << -0.4, 0.05, 0.6, -0.2;
  BundleGeometry constw{chart, 2, g, constant_field<Coeffs3>(chart, w, Coeffs3(2, 2)),
                        1.0};
  SplitResiduals rc = split_identities_check(constw, pt(1, 1), engines);
  CHECK(rc.antisymmetric < 1e-9);
  CHECK(rc.symmetric < 1e-9);

  // non-orthonormal frame is rejected
  BundleGeometry raw = sphere_lc_bundle(engines);
  CHECK_THROWS_AS(split_identities_check(raw, pt(1.0, 1.0), engines), contract_error);
}

TEST_CASE("canonical metric connection") {
  EngineSet engines;

  // already metric: unchanged
  BundleGeometry lc = sphere_lc_bundle(engines);
  BundleGeometry fixed = canonical_metric_connection(lc, engines.base);
  for (const auto& x : sample_points(Chart::sphere(), 8, 41))
    CHECK((fixed.connection.value(x) - lc.connection.value(x)).max_abs() < 1e-9);

  // Weyl: eta = w + 1/2 phi_i id
  MatrixField g = round_sphere_metric();
  VectorField phi = random_one_form(g.chart, 19, 0.6);
  BundleGeometry weyl = tangent_bundle(g.chart, g, weyl_connection(g, phi, engines.base));
  BundleGeometry weyl_fixed = canonical_metric_connection(weyl, engines.base);
  for (const auto& x : sample_points(g.chart, 8, 43)) {
    Coeffs3 expected = weyl.connection.value(x);
    Vec ph = phi.value(x);
    for (int i = 0; i < 2; ++i) expected[i] += 0.5 * ph[i] * Mat::Identity(2, 2);
    CHECK((weyl_fixed.connection.value(x) - expected).max_abs() < 1e-9);
  }

  // generic: the result is metric
  BundleGeometry any = sphere_ansatz_bundle(0.45, -0.15, 0.3, 29, engines);
  BundleGeometry any_fixed = canonical_metric_connection(any, engines.base);
  Coeffs3Field ng = non_metricity(any_fixed, engines.base);
  for (const auto& x : sample_points(g.chart, 100, 47))
    CHECK(ng.value(x).max_abs() < 1e-7);
}

TEST_CASE("connection distance and projection") {
  EngineSet engines;
  MatrixField g = round_sphere_metric();
  BundleGeometry any = sphere_ansatz_bundle(0.4, -0.3, 0.2, 53, engines);
  BundleGeometry canonical = canonical_metric_connection(any, engines.base);
  ConnectionDistanceMetric mu{g, g};

  Vec x = pt(1.3, 2.4);
  CHECK(connection_distance(any, any.connection, mu, x) == doctest::Approx(0.0));

  Real d_canonical = connection_distance(any, canonical.connection, mu, x);
  for (std::uint64_t s = 0; s < 50; ++s) {
    // random metric connection: canonical + g-antisymmetric endomorphism form
    Coeffs3Field pert = random_endo_one_form(g, 100 + s, 0.5);
    Coeffs3Field other;
    other.chart = g.chart;
    const auto base_conn = canonical.connection;
    other.value = [base_conn, pert, g](const Vec& y) {
      Coeffs3 w = base_conn.value(y);
      Coeffs3 p = pert.value(y);
      Mat gy = g.value(y);
      Mat ginv = gy.inverse();
      for (int i = 0; i < 2; ++i)
        w[i] += 0.5 * (p[i] - ginv * p[i].transpose() * gy); // g-antisymmetric part
      return w;
    };
    BundleGeometry other_geom{g.chart, 2, g, other, 1.0};
    CHECK(non_metricity(other_geom, engines.base).value(x).max_abs() < 1e-8);

    Real d_other = connection_distance(any, other, mu, x);
    CHECK(d_other >= d_canonical - 1e-12);

    // Pythagoras: |nabla - other|^2 = |nabla - nabla^g|^2 + |nabla^g - other|^2
    Real d_leg = connection_distance(canonical, other, mu, x);
    CHECK(std::abs(d_other * d_other - d_canonical * d_canonical - d_leg * d_leg) <
          1e-9);
  }
}

TEST_CASE("orthonormalize frame") {
  EngineSet engines;
  Chart chart = Chart::torus();

  // already orthonormal: identity transform
  MatrixField id_metric = euclidean_metric(chart);
  BundleGeometry b{chart, 2, id_metric,
                   constant_field<Coeffs3>(chart, Coeffs3(2, 2), Coeffs3(2, 2)), 1.0};
  FrameData f = orthonormal_frame_at(b, pt(1, 1), engines.base);
  CHECK((f.P - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  // diag(4, 9): scaling frame, transformed metric is the identity
  MatrixField diag_metric = constant_field<Mat>(
      chart, (Mat(2, 2) << 4, 0, 0, 9).finished(), Mat::Zero(2, 2));
  BundleGeometry bd{chart, 2, diag_metric,
                    constant_field<Coeffs3>(chart, Coeffs3(2, 2), Coeffs3(2, 2)), 1.0};
  FrameData fd = orthonormal_frame_at(bd, pt(1, 1), engines.base);
  Mat transformed = fd.P.transpose() * diag_metric.value(pt(1, 1)) * fd.P;
  CHECK((transformed - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(fd.P(0, 0) == doctest::Approx(0.5));
  CHECK(fd.P(1, 1) == doctest::Approx(1.0 / 3.0));

  // curvature transforms by conjugation
  EngineSet eng;
  BundleGeometry any = sphere_ansatz_bundle(0.3, 0.2, -0.25, 59, eng);
  BundleGeometry onb = orthonormalize_frame(any, eng.base);
  FormMatrixField omega_raw = curvature(any, eng);
  FormMatrixField omega_onb = curvature(onb, eng);
  for (const auto& x : sample_points(Chart::sphere(), 6, 61)) {
    FrameData fr = orthonormal_frame_at(any, x, eng.base);
    FormMatrixD raw = omega_raw.value(x);
    FormMatrixD conj(2, 2, 2);
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c) {
        FormD acc(2, 2);
        for (int m = 0; m < 2; ++m)
          for (int l = 0; l < 2; ++l)
            acc += fr.P_inv(a, m) * fr.P(l, c) * raw(m, l);
        conj(a, c) = acc;
      }
    CHECK((conj - omega_onb.value(x)).max_abs() < 1e-7);
  }
}

TEST_CASE("euler numbers on surfaces") {
  EngineSet engines;

  // TS^2 with Levi-Civita: chi = 2
  EulerNumberReport lc = euler_number(sphere_lc_bundle(engines), engines, 64);
  CHECK(lc.nearest_integer == 2);
  CHECK(lc.deviation < 1e-6);

  // flat torus, generic ansatz connection: chi = 0
  EulerNumberReport torus =
      euler_number(torus_ansatz_bundle(0.3, -0.45, 0.2, 67, engines), engines, 48);
  CHECK(torus.nearest_integer == 0);
  CHECK(torus.deviation < 1e-6);
}

TEST_CASE("euler number with non-metric sphere connections") {
  EngineSet engines;
  // Weyl
  MatrixField g = round_sphere_metric();
  VectorField phi = random_one_form(g.chart, 71, 0.5);
  BundleGeometry weyl = tangent_bundle(g.chart, g, weyl_connection(g, phi, engines.base));
  EulerNumberReport rw = euler_number(weyl, engines, 64);
  CHECK(rw.nearest_integer == 2);
  CHECK(rw.deviation < 1e-5);

  // generic ansatz
  EulerNumberReport ra =
      euler_number(sphere_ansatz_bundle(0.35, -0.2, 0.4, 73, engines), engines, 64);
  CHECK(ra.nearest_integer == 2);
  CHECK(ra.deviation < 1e-5);
}

TEST_CASE("euler form equals the canonical-connection pfaffian pointwise") {
  EngineSet engines;
  BundleGeometry any = sphere_ansatz_bundle(0.3, -0.4, 0.25, 79, engines);
  FormField direct = euler_form(any, engines);
  FormField via = euler_form_via_canonical(any, engines);
  for (const auto& x : sample_points(Chart::sphere(), 20, 83))
    CHECK((direct.value(x) - via.value(x)).max_abs() < 1e-6 / (2.0 * M_PI));
}

TEST_CASE("euler number invariances") {
  EngineSet engines;
  MatrixField g = round_sphere_metric();

  // perturb the Levi-Civita connection by a random endomorphism-valued 1-form
  Coeffs3Field lc = christoffel_field(g, engines.base);
  Coeffs3Field pert = random_endo_one_form(g, 89, 0.35);
  Coeffs3Field perturbed;
  perturbed.chart = g.chart;
  perturbed.value = [lc, pert](const Vec& x) { return lc.value(x) + pert.value(x); };
  BundleGeometry bp = tangent_bundle(g.chart, g, perturbed);
  EulerNumberReport rp = euler_number(bp, engines, 64);
  CHECK(rp.nearest_integer == 2);
  CHECK(rp.deviation < 2e-5);

  // conformally rescale the fibre metric, keep the connection
  ScalarField f = random_scalar_field(g.chart, 97, 0.3);
  MatrixField g_conf = conformal_metric(f, g);
  BundleGeometry bc = tangent_bundle(g.chart, g_conf, lc);
  EulerNumberReport rc = euler_number(bc, engines, 64);
  CHECK(rc.nearest_integer == 2);
  CHECK(rc.deviation < 2e-5);
}

TEST_CASE("weyl connections need no error term") {
  EngineSet engines;
  MatrixField g = round_sphere_metric();
  VectorField phi = random_one_form(g.chart, 101, 0.5);
  BundleGeometry weyl = tangent_bundle(g.chart, g, weyl_connection(g, phi, engines.base));

  // Pf(Omega) alone integrates to the Euler number
  BundleGeometry onb = orthonormalize_frame(weyl, engines.base);
  FormMatrixField omega = curvature(onb, engines);
  FormField density;
  density.chart = g.chart;
  density.value = [omega](const Vec& x) {
    return (1.0 / (2.0 * M_PI)) * pfaffian(omega.value(x));
  };
  Real total = integrate_form(density, 64);
  CHECK(total == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("euler operations validate rank") {
  EngineSet engines;
  Chart chart = Chart::torus();
  MatrixField g3 = constant_field<Mat>(chart, Mat::Identity(3, 3), Mat::Zero(3, 3));
  BundleGeometry odd{chart, 3, g3,
                     constant_field<Coeffs3>(chart, Coeffs3(2, 3), Coeffs3(2, 3)), 1.0};
  CHECK_THROWS_AS(euler_form(odd, engines), contract_error);
  CHECK_THROWS_AS(euler_number(odd, engines, 8), contract_error);
}
