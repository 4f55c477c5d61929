#ifndef EULERCLASS_FIELD_HPP
#define EULERCLASS_FIELD_HPP

#include <functional>
#include <vector>

#include "eulerclass/chart.hpp"
#include "eulerclass/form.hpp"
#include "eulerclass/types.hpp"

namespace eulerclass {

/// Coefficients of a connection-like object: one rank x rank matrix per base
/// direction, block(i)(a, b) = w_i{}^a{}_b. Also reused for any 3-index
/// quantity whose first index runs over base directions (non-metricity,
/// difference tensors, lowered variants).
struct Coeffs3 {
  std::vector<Mat> blocks;

  Coeffs3() = default;
  Coeffs3(int base_dim, int rank)
      : blocks(static_cast<std::size_t>(base_dim), Mat::Zero(rank, rank)) {}

  int base_dim() const { return static_cast<int>(blocks.size()); }
  int rank() const { return blocks.empty() ? 0 : static_cast<int>(blocks[0].rows()); }

  Mat& operator[](int i) { return blocks[static_cast<std::size_t>(i)]; }
  const Mat& operator[](int i) const { return blocks[static_cast<std::size_t>(i)]; }

  Coeffs3& operator+=(const Coeffs3& o) {
    for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] += o.blocks[i];
    return *this;
  }
  Coeffs3& operator-=(const Coeffs3& o) {
    for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] -= o.blocks[i];
    return *this;
  }
  Coeffs3& operator*=(Real s) {
    for (auto& b : blocks) b *= s;
    return *this;
  }
  friend Coeffs3 operator+(Coeffs3 a, const Coeffs3& b) { return a += b; }
  friend Coeffs3 operator-(Coeffs3 a, const Coeffs3& b) { return a -= b; }
  friend Coeffs3 operator*(Real s, Coeffs3 a) { return a *= s; }

  Real max_abs() const {
    Real m = 0;
    for (const auto& b : blocks)
      if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
    return m;
  }
};

/// Pointwise-evaluable field of values of type T over a chart. Evaluation
/// must be deterministic. `partial` and `partial2` are optional exact
/// derivative callbacks used by the exact differentiation mode; absent
/// callbacks leave only finite differencing available.
template <class T>
struct Field {
  Chart chart;
  std::function<T(const Vec&)> value;
  std::function<T(int, const Vec&)> partial;
  std::function<T(int, int, const Vec&)> partial2;

  bool has_exact_partial() const { return static_cast<bool>(partial); }
  bool has_exact_partial2() const { return static_cast<bool>(partial2); }

  T operator()(const Vec& x) const { return value(x); }
};

using ScalarField = Field<Real>;
using VectorField = Field<Vec>;   // covector or vector components
using MatrixField = Field<Mat>;   // metrics, endomorphisms
using Coeffs3Field = Field<Coeffs3>;
using FormField = Field<FormD>;

/// Constant field with zero exact derivatives.
template <class T>
Field<T> constant_field(const Chart& chart, T v, T zero) {
  Field<T> f;
  f.chart = chart;
  f.value = [v](const Vec&) { return v; };
  f.partial = [zero](int, const Vec&) { return zero; };
  f.partial2 = [zero](int, int, const Vec&) { return zero; };
  return f;
}

inline ScalarField constant_scalar_field(const Chart& chart, Real v) {
  return constant_field<Real>(chart, v, 0.0);
}

} // namespace eulerclass

#endif
