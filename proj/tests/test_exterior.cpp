#include "doctest.h"

#include <random>

#include "eulerclass/form.hpp"
#include "eulerclass/form_matrix.hpp"

using namespace eulerclass;

namespace {

std::mt19937_64 rng(20240811);

Real uniform() {
  return std::uniform_real_distribution<Real>(-1.0, 1.0)(rng);
}

FormD random_form(int dim, int degree) {
  FormD f(dim, degree);
  for (int r = 0; r < f.terms(); ++r) f.coeff_at_rank(r) = uniform();
  return f;
}

FormMatrixD random_form_matrix(int size, int dim, int degree) {
  FormMatrixD m(size, dim, degree);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) m(i, j) = random_form(dim, degree);
  return m;
}

Mat random_antisymmetric(int n) {
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = uniform();
      m(j, i) = -m(i, j);
    }
  return m;
}

/// Independent permutation-sum Pfaffian oracle: recursive enumeration of
/// S_2k with the sign tracked by explicit inversion counting, entries
/// multiplied with the library wedge (the only shared ingredient).
void pf_oracle_rec(const FormMatrixD& m, std::vector<int>& perm,
                   std::vector<bool>& used, FormD& acc) {
  const int size = m.size();
  if (static_cast<int>(perm.size()) == size) {
    int inv = 0;
    for (std::size_t a = 0; a < perm.size(); ++a)
      for (std::size_t b = a + 1; b < perm.size(); ++b)
        if (perm[a] > perm[b]) ++inv;
    FormD term = m(perm[0], perm[1]);
    for (int s = 1; s < size / 2; ++s)
      term = wedge(term, m(perm[2 * s], perm[2 * s + 1]));
    acc += (inv % 2 == 0 ? 1.0 : -1.0) * term;
    return;
  }
  for (int v = 0; v < size; ++v) {
    if (used[static_cast<std::size_t>(v)]) continue;
    used[static_cast<std::size_t>(v)] = true;
    perm.push_back(v);
    pf_oracle_rec(m, perm, used, acc);
    perm.pop_back();
    used[static_cast<std::size_t>(v)] = false;
  }
}

FormD pf_oracle(const FormMatrixD& m) {
  const int k = m.size() / 2;
  int out_deg = k * m.degree();
  FormD acc(m.dimension(), std::min(out_deg, m.dimension()));
  std::vector<int> perm;
  std::vector<bool> used(static_cast<std::size_t>(m.size()), false);
  pf_oracle_rec(m, perm, used, acc);
  Real norm = 1;
  for (int i = 1; i <= k; ++i) norm *= 2.0 * i;
  return acc * (1.0 / norm);
}

} // namespace

TEST_CASE("wedge basics") {
  FormD dx = FormD::basis(3, {0});
  FormD dy = FormD::basis(3, {1});
  FormD dz = FormD::basis(3, {2});

  CHECK(wedge(dx, dx).max_abs() == 0.0);

  FormD xy = wedge(dx, dy);
  FormD yx = wedge(dy, dx);
  CHECK(approx_equal(xy, -yx, 0.0));
  int idx[2] = {0, 1};
  CHECK(xy(std::span<const int>(idx, 2)) == 1.0);

  // bilinearity: (2 dx) ^ (3 dy + dz) = 6 dx^dy + 2 dx^dz
  FormD lhs = wedge(2.0 * dx, 3.0 * dy + dz);
  FormD rhs = 6.0 * wedge(dx, dy) + 2.0 * wedge(dx, dz);
  CHECK(approx_equal(lhs, rhs, 1e-15));
}

TEST_CASE("wedge graded commutativity and associativity") {
  for (int trial = 0; trial < 50; ++trial) {
    int n = 4;
    int p = 1 + (trial % 2), q = 1 + ((trial / 2) % 2);
    FormD a = random_form(n, p), b = random_form(n, q);
    Real sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
    CHECK(approx_equal(wedge(a, b), sign * wedge(b, a), 1e-13));

    FormD c = random_form(n, 1);
    FormD left = wedge(wedge(a, b), c);
    FormD right = wedge(a, wedge(b, c));
    CHECK(approx_equal(left, right, 1e-12));
  }
}

TEST_CASE("antisymmetrized evaluation") {
  FormD w = random_form(4, 2);
  int ij[2] = {2, 1};
  int ji[2] = {1, 2};
  CHECK(w(std::span<const int>(ij, 2)) ==
        doctest::Approx(-w(std::span<const int>(ji, 2))));
  int rep[2] = {3, 3};
  CHECK(w(std::span<const int>(rep, 2)) == 0.0);
}

TEST_CASE("matrix_wedge") {
  FormMatrixD zero(3, 4, 1);
  FormMatrixD b = random_form_matrix(3, 4, 1);
  CHECK(matrix_wedge(zero, b).max_abs() == 0.0);

  // antisymmetric 2x2 single-entry matrices square to zero
  FormD f = random_form(4, 1);
  FormMatrixD a(2, 4, 1);
  a(0, 1) = f;
  a(1, 0) = -f;
  CHECK(matrix_wedge(a, a).max_abs() < 1e-15);

  // random 4x4 of 1-forms against the elementwise triple loop
  FormMatrixD m = random_form_matrix(4, 4, 1);
  FormMatrixD n = random_form_matrix(4, 4, 1);
  FormMatrixD prod = matrix_wedge(m, n);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      FormD acc(4, 2);
      for (int k = 0; k < 4; ++k) acc += wedge(m(i, k), n(k, j));
      CHECK(approx_equal(prod(i, j), acc, 1e-13));
    }
}

TEST_CASE("symmetric antisymmetric split") {
  FormMatrixD m = random_form_matrix(3, 3, 1);
  auto [ma, ms] = symmetric_antisymmetric_split(m);
  CHECK((ma + ms - m).max_abs() < 1e-15);
  CHECK((transpose(ma) + ma).max_abs() < 1e-15);
  CHECK((transpose(ms) - ms).max_abs() < 1e-15);

  // M = [[0, a], [b, 0]]
  FormD a = random_form(3, 1), b = random_form(3, 1);
  FormMatrixD two(2, 3, 1);
  two(0, 1) = a;
  two(1, 0) = b;
  auto [ta, ts] = symmetric_antisymmetric_split(two);
  CHECK(approx_equal(ta(0, 1), 0.5 * (a - b), 1e-15));
  CHECK(approx_equal(ts(0, 1), 0.5 * (a + b), 1e-15));
}

TEST_CASE("pfaffian of 2x2 form matrix") {
  FormD f = random_form(4, 2);
  FormMatrixD m(2, 4, 2);
  m(0, 1) = f;
  m(1, 0) = -f;
  CHECK(approx_equal(pfaffian(m), f, 1e-14));
}

TEST_CASE("pfaffian of block-diagonal 4x4") {
  FormD a = random_form(4, 2), b = random_form(4, 2);
  FormMatrixD m(4, 4, 2);
  m(0, 1) = a;
  m(1, 0) = -a;
  m(2, 3) = b;
  m(3, 2) = -b;
  CHECK(approx_equal(pfaffian(m), wedge(a, b), 1e-13));
  CHECK(approx_equal(pfaffian(m), pf_oracle(m), 1e-13));
}

TEST_CASE("pfaffian ignores symmetric part") {
  for (int trial = 0; trial < 100; ++trial) {
    FormMatrixD m = random_form_matrix(4, 4, 2);
    FormMatrixD ma = antisymmetric_part(m);
    CHECK((pfaffian(m) - pfaffian(ma)).max_abs() < 1e-10);

    FormMatrixD s = random_form_matrix(4, 4, 2);
    FormMatrixD sym = symmetric_part(s);
    CHECK((pfaffian(m + sym) - pfaffian(m)).max_abs() < 1e-10);
  }
}

TEST_CASE("pfaffian against independent oracle") {
  for (int trial = 0; trial < 20; ++trial) {
    FormMatrixD m = random_form_matrix(4, 4, 2);
    CHECK((pfaffian(m) - pf_oracle(m)).max_abs() < 1e-12);
  }
}

TEST_CASE("pfaffian rejects bad inputs") {
  CHECK_THROWS_AS(pfaffian(random_form_matrix(3, 4, 2)), contract_error);
  CHECK_THROWS_AS(pfaffian(random_form_matrix(2, 4, 1)), contract_error);
}

TEST_CASE("pfaffian_multi properties") {
  // k = 1 reduces to the plain Pfaffian
  FormMatrixD m2 = random_form_matrix(2, 4, 2);
  std::vector<FormMatrixD> one{m2};
  CHECK((pfaffian_multi(std::span<const FormMatrixD>(one)) - pfaffian(m2)).max_abs() <
        1e-14);

  // transposing one argument negates
  FormMatrixD m = random_form_matrix(4, 4, 2);
  FormMatrixD n = random_form_matrix(4, 4, 2);
  std::vector<FormMatrixD> mn{m, n};
  std::vector<FormMatrixD> mtn{transpose(m), n};
  FormD pf_mn = pfaffian_multi(std::span<const FormMatrixD>(mn));
  FormD pf_mtn = pfaffian_multi(std::span<const FormMatrixD>(mtn));
  CHECK((pf_mn + pf_mtn).max_abs() < 1e-12);

  // multilinearity in each slot
  FormMatrixD p = random_form_matrix(4, 4, 2);
  Real c = 0.37;
  std::vector<FormMatrixD> sum_slot{m + c * p, n};
  std::vector<FormMatrixD> mn2{p, n};
  FormD lhs = pfaffian_multi(std::span<const FormMatrixD>(sum_slot));
  FormD rhs = pf_mn + c * pfaffian_multi(std::span<const FormMatrixD>(mn2));
  CHECK((lhs - rhs).max_abs() < 1e-12);

  // diagonal recovers Pf
  std::vector<FormMatrixD> mm{m, m};
  CHECK((pfaffian_multi(std::span<const FormMatrixD>(mm)) - pfaffian(m)).max_abs() <
        1e-12);
}

TEST_CASE("pfaffian_multi polarization on scalar matrices") {
  for (int trial = 0; trial < 25; ++trial) {
    Mat a = random_antisymmetric(4), b = random_antisymmetric(4);
    FormMatrixD fa = FormMatrixD::from_scalar_matrix(a, 1);
    FormMatrixD fb = FormMatrixD::from_scalar_matrix(b, 1);
    std::vector<FormMatrixD> ab{fa, fb};
    Real lhs = pfaffian_multi(std::span<const FormMatrixD>(ab)).scalar_value();
    Real rhs = 0.5 * (pfaffian(Mat(a + b)) - pfaffian(a) - pfaffian(b));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("pfaffian squared equals determinant") {
  for (int trial = 0; trial < 50; ++trial) {
    for (int n : {2, 4}) {
      Mat m = random_antisymmetric(n);
      Real pf = pfaffian(m);
      Real det = m.determinant();
      CHECK(pf * pf == doctest::Approx(det).epsilon(1e-10));
    }
  }
}

TEST_CASE("pfaffian of odd-degree entries is rejected") {
  FormMatrixD m = random_form_matrix(2, 4, 1);
  CHECK_THROWS_AS(pfaffian(m), contract_error);
}
