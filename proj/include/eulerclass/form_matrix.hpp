#ifndef EULERCLASS_FORM_MATRIX_HPP
#define EULERCLASS_FORM_MATRIX_HPP

#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "eulerclass/form.hpp"

namespace eulerclass {

/// Square matrix whose entries are differential forms of one common degree
/// over one common chart dimension. Used for connection matrices (degree 1)
/// and curvature matrices (degree 2); degree-0 entries make it a plain
/// scalar matrix.
template <typename Scalar>
class FormMatrix {
public:
  FormMatrix() = default;

  FormMatrix(int size, int dim, int degree)
      : size_(size), dim_(dim), degree_(degree),
        entries_(static_cast<std::size_t>(size) * size, Form<Scalar>(dim, degree)) {
    require(size >= 1, "FormMatrix: size must be positive");
  }

  static FormMatrix zero(int size, int dim, int degree) {
    return FormMatrix(size, dim, degree);
  }

  /// Degree-0 matrix from a plain scalar matrix.
  static FormMatrix from_scalar_matrix(const Eigen::MatrixX<Scalar>& m, int dim) {
    require(m.rows() == m.cols(), "FormMatrix: scalar matrix must be square");
    FormMatrix out(static_cast<int>(m.rows()), dim, 0);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        out(i, j) = Form<Scalar>::constant(dim, m(i, j));
    return out;
  }

  int size() const { return size_; }
  int dimension() const { return dim_; }
  int degree() const { return degree_; }

  Form<Scalar>& operator()(int i, int j) { return entries_[i * size_ + j]; }
  const Form<Scalar>& operator()(int i, int j) const { return entries_[i * size_ + j]; }

  FormMatrix& operator+=(const FormMatrix& o) {
    require(same_shape(o), "FormMatrix: shape mismatch in +");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
  }
  FormMatrix& operator-=(const FormMatrix& o) {
    require(same_shape(o), "FormMatrix: shape mismatch in -");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
  }
  FormMatrix& operator*=(Scalar s) {
    for (auto& e : entries_) e *= s;
    return *this;
  }

  friend FormMatrix operator+(FormMatrix a, const FormMatrix& b) { return a += b; }
  friend FormMatrix operator-(FormMatrix a, const FormMatrix& b) { return a -= b; }
  friend FormMatrix operator*(Scalar s, FormMatrix a) { return a *= s; }
  friend FormMatrix operator-(FormMatrix a) { return a *= Scalar(-1); }

  Scalar max_abs() const {
    Scalar m = 0;
    for (const auto& e : entries_) m = std::max(m, e.max_abs());
    return m;
  }

  bool same_shape(const FormMatrix& o) const {
    return size_ == o.size_ && dim_ == o.dim_ && degree_ == o.degree_;
  }

private:
  int size_ = 1;
  int dim_ = 1;
  int degree_ = 0;
  std::vector<Form<Scalar>> entries_{Form<Scalar>(1, 0)};
};

template <typename Scalar>
FormMatrix<Scalar> transpose(const FormMatrix<Scalar>& m) {
  FormMatrix<Scalar> out(m.size(), m.dimension(), m.degree());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j)
      out(i, j) = m(j, i);
  return out;
}

/// Matrix product with wedge multiplication of entries:
/// (A ^ B)^i_j = sum_m A^i_m ^ B^m_j.
template <typename Scalar>
FormMatrix<Scalar> matrix_wedge(const FormMatrix<Scalar>& a, const FormMatrix<Scalar>& b) {
  require(a.size() == b.size(), "matrix_wedge: size mismatch");
  require(a.dimension() == b.dimension(), "matrix_wedge: dimension mismatch");
  const int n = a.dimension();
  const int deg = std::min(a.degree() + b.degree(), n);
  FormMatrix<Scalar> out(a.size(), n, deg);
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) {
      Form<Scalar> acc(n, deg);
      for (int m = 0; m < a.size(); ++m)
        acc += wedge(a(i, m), b(m, j));
      out(i, j) = acc;
    }
  return out;
}

/// Splits M into (antisymmetric, symmetric) parts: M_A = (M - M^T)/2,
/// M_S = (M + M^T)/2.
template <typename Scalar>
std::pair<FormMatrix<Scalar>, FormMatrix<Scalar>>
symmetric_antisymmetric_split(const FormMatrix<Scalar>& m) {
  FormMatrix<Scalar> mt = transpose(m);
  FormMatrix<Scalar> a = m, s = m;
  a -= mt;
  a *= Scalar(0.5);
  s += mt;
  s *= Scalar(0.5);
  return {a, s};
}

template <typename Scalar>
FormMatrix<Scalar> antisymmetric_part(const FormMatrix<Scalar>& m) {
  return symmetric_antisymmetric_split(m).first;
}

template <typename Scalar>
FormMatrix<Scalar> symmetric_part(const FormMatrix<Scalar>& m) {
  return symmetric_antisymmetric_split(m).second;
}

namespace detail {

/// Shared permutation sum for the (multilinear) Pfaffian:
///   1/(2^k k!) * sum_{sigma in S_2k} sign(sigma)
///     (M_1)^{sigma(1)}_{sigma(2)} ^ ... ^ (M_k)^{sigma(2k-1)}_{sigma(2k)}.
/// Direct enumeration; fine through 2k = 6.
template <typename Scalar>
Form<Scalar> pfaffian_sum(std::span<const FormMatrix<Scalar>> ms) {
  const int k = static_cast<int>(ms.size());
  const int m = 2 * k;
  const int n = ms[0].dimension();
  const int entry_deg = ms[0].degree();
  require(entry_deg % 2 == 0,
          "pfaffian: entries must have even degree (odd-degree entries do not commute)");
  for (const auto& mat : ms) {
    require(mat.size() == m, "pfaffian: matrices must be 2k x 2k");
    require(mat.dimension() == n && mat.degree() == entry_deg,
            "pfaffian: matrices must share dimension and degree");
  }
  if (k * entry_deg > n) return Form<Scalar>::zero(n, n); // identically zero
  const int out_deg = k * entry_deg;

  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  Form<Scalar> acc(n, out_deg);
  do {
    int sign = permutation_sign(std::span<const int>(perm));
    Form<Scalar> term = ms[0](perm[0], perm[1]);
    for (int s = 1; s < k; ++s)
      term = wedge(term, ms[s](perm[2 * s], perm[2 * s + 1]));
    acc += Scalar(sign) * term;
  } while (std::next_permutation(perm.begin(), perm.end()));

  Scalar norm = 1;
  for (int i = 1; i <= k; ++i) norm *= Scalar(2 * i); // 2^k k!
  return acc * (Scalar(1) / norm);
}

} // namespace detail

/// Pfaffian of a 2k x 2k matrix of even-degree forms.
template <typename Scalar>
Form<Scalar> pfaffian(const FormMatrix<Scalar>& m) {
  require(m.size() % 2 == 0, "pfaffian: matrix size must be even");
  std::vector<FormMatrix<Scalar>> ms(static_cast<std::size_t>(m.size() / 2), m);
  return detail::pfaffian_sum(std::span<const FormMatrix<Scalar>>(ms));
}

/// Multilinear Pfaffian Pf(M_1, ..., M_k); all matrices 2k x 2k.
template <typename Scalar>
Form<Scalar> pfaffian_multi(std::span<const FormMatrix<Scalar>> ms) {
  require(!ms.empty(), "pfaffian_multi: need at least one matrix");
  require(ms[0].size() == 2 * static_cast<int>(ms.size()),
          "pfaffian_multi: k matrices must be 2k x 2k");
  return detail::pfaffian_sum(ms);
}

/// Pfaffian of a plain antisymmetric scalar matrix.
template <typename Scalar>
Scalar pfaffian(const Eigen::MatrixX<Scalar>& m) {
  require(m.rows() == m.cols() && m.rows() % 2 == 0,
          "pfaffian: matrix must be square of even size");
  return pfaffian(FormMatrix<Scalar>::from_scalar_matrix(m, 1)).scalar_value();
}

using FormMatrixD = FormMatrix<Real>;

} // namespace eulerclass

#endif
