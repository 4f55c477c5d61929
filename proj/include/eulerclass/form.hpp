#ifndef EULERCLASS_FORM_HPP
#define EULERCLASS_FORM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <span>

#include <Eigen/Dense>

#include "eulerclass/combinatorics.hpp"
#include "eulerclass/types.hpp"

namespace eulerclass {

/// Exterior p-form at a point of an n-dimensional chart.
///
/// Coefficients are stored only on strictly increasing index tuples, in
/// lexicographic order; evaluation on arbitrary tuples antisymmetrizes.
/// The wedge uses the determinant convention: for 1-forms a, b,
/// (a ^ b)(e_i, e_j) = a_i b_j - a_j b_i, with no 1/2 factor.
template <typename Scalar>
class Form {
public:
  Form() = default;

  Form(int dim, int degree)
      : dim_(dim), degree_(degree),
        coeff_(Eigen::VectorX<Scalar>::Zero(binomial(dim, degree))) {
    require(dim >= 1, "Form: dimension must be positive");
    require(degree >= 0 && degree <= dim, "Form: degree out of range");
  }

  static Form zero(int dim, int degree) { return Form(dim, degree); }

  static Form constant(int dim, Scalar v) {
    Form f(dim, 0);
    f.coeff_[0] = v;
    return f;
  }

  /// Basis monomial dx^{i1} ^ ... ^ dx^{ip} (indices need not be sorted).
  static Form basis(int dim, std::initializer_list<int> indices) {
    std::vector<int> idx(indices);
    Form f(dim, static_cast<int>(idx.size()));
    int sign = sort_with_sign(idx);
    if (sign != 0) f.coeff_[subset_rank(dim, idx)] = Scalar(sign);
    return f;
  }

  int dimension() const { return dim_; }
  int degree() const { return degree_; }
  int terms() const { return static_cast<int>(coeff_.size()); }

  const Eigen::VectorX<Scalar>& coefficients() const { return coeff_; }
  Eigen::VectorX<Scalar>& coefficients() { return coeff_; }

  Scalar& coeff_at_rank(int r) { return coeff_[r]; }
  Scalar coeff_at_rank(int r) const { return coeff_[r]; }

  /// Coefficient slot for an increasing tuple.
  Scalar& operator[](std::span<const int> increasing) {
    return coeff_[subset_rank(dim_, increasing)];
  }

  /// Evaluation on an arbitrary index tuple, antisymmetrized.
  Scalar operator()(std::span<const int> indices) const {
    require(static_cast<int>(indices.size()) == degree_,
            "Form: index tuple length must equal the degree");
    std::array<int, 8> buf{};
    std::copy(indices.begin(), indices.end(), buf.begin());
    std::span<int> s(buf.data(), indices.size());
    int sign = sort_with_sign(s);
    if (sign == 0) return Scalar(0);
    return Scalar(sign) * coeff_[subset_rank(dim_, s)];
  }

  Scalar operator()(std::initializer_list<int> indices) const {
    std::vector<int> idx(indices);
    return (*this)(std::span<const int>(idx));
  }

  /// Value of a 0-form.
  Scalar scalar_value() const {
    require(degree_ == 0, "Form: scalar_value requires degree 0");
    return coeff_[0];
  }

  /// Coefficient of the (unique) top-degree monomial dx^0 ^ ... ^ dx^{n-1}.
  Scalar top_coefficient() const {
    require(degree_ == dim_, "Form: top_coefficient requires top degree");
    return coeff_[0];
  }

  Form& operator+=(const Form& o) {
    require(dim_ == o.dim_ && degree_ == o.degree_, "Form: shape mismatch in +");
    coeff_ += o.coeff_;
    return *this;
  }
  Form& operator-=(const Form& o) {
    require(dim_ == o.dim_ && degree_ == o.degree_, "Form: shape mismatch in -");
    coeff_ -= o.coeff_;
    return *this;
  }
  Form& operator*=(Scalar s) {
    coeff_ *= s;
    return *this;
  }

  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Scalar s, Form a) { return a *= s; }
  friend Form operator*(Form a, Scalar s) { return a *= s; }
  friend Form operator-(Form a) { return a *= Scalar(-1); }

  Scalar max_abs() const {
    Scalar m = 0;
    for (int i = 0; i < coeff_.size(); ++i)
      m = std::max(m, std::abs(coeff_[i]));
    return m;
  }

private:
  int dim_ = 1;
  int degree_ = 0;
  Eigen::VectorX<Scalar> coeff_ = Eigen::VectorX<Scalar>::Zero(1);
};

/// Wedge product. Degrees add; when p + q exceeds the dimension the product
/// is identically zero and is returned as the zero top-degree form.
template <typename Scalar>
Form<Scalar> wedge(const Form<Scalar>& a, const Form<Scalar>& b) {
  require(a.dimension() == b.dimension(), "wedge: dimension mismatch");
  const int n = a.dimension();
  const int p = a.degree(), q = b.degree();
  if (p + q > n) return Form<Scalar>::zero(n, n); // identically zero
  Form<Scalar> out(n, p + q);
  std::array<int, 8> ia{}, ib{}, merged{};
  for (int ra = 0; ra < a.terms(); ++ra) {
    Scalar ca = a.coeff_at_rank(ra);
    if (ca == Scalar(0)) continue;
    subset_unrank(n, p, ra, std::span<int>(ia.data(), p));
    for (int rb = 0; rb < b.terms(); ++rb) {
      Scalar cb = b.coeff_at_rank(rb);
      if (cb == Scalar(0)) continue;
      subset_unrank(n, q, rb, std::span<int>(ib.data(), q));
      std::copy_n(ia.begin(), p, merged.begin());
      std::copy_n(ib.begin(), q, merged.begin() + p);
      std::span<int> m(merged.data(), p + q);
      int sign = sort_with_sign(m);
      if (sign == 0) continue;
      out.coeff_at_rank(subset_rank(n, m)) += Scalar(sign) * ca * cb;
    }
  }
  return out;
}

template <typename Scalar>
bool approx_equal(const Form<Scalar>& a, const Form<Scalar>& b, Scalar tol) {
  if (a.dimension() != b.dimension() || a.degree() != b.degree()) return false;
  return (a.coefficients() - b.coefficients()).cwiseAbs().maxCoeff() <= tol;
}

using FormD = Form<Real>;

} // namespace eulerclass

#endif
