#ifndef EULERCLASS_TENSOR4_HPP
#define EULERCLASS_TENSOR4_HPP

#include <vector>

#include "eulerclass/types.hpp"

namespace eulerclass {

/// Dense 4-index tensor over a single small dimension.
struct Tensor4 {
  int n = 0;
  std::vector<Real> v;

  Tensor4() = default;
  explicit Tensor4(int dim) : n(dim), v(static_cast<std::size_t>(dim * dim * dim * dim), 0.0) {}

  Real& operator()(int i, int j, int k, int l) {
    return v[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)];
  }
  Real operator()(int i, int j, int k, int l) const {
    return v[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)];
  }

  Tensor4& operator+=(const Tensor4& o) {
    for (std::size_t s = 0; s < v.size(); ++s) v[s] += o.v[s];
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    for (std::size_t s = 0; s < v.size(); ++s) v[s] -= o.v[s];
    return *this;
  }
  Tensor4& operator*=(Real c) {
    for (auto& x : v) x *= c;
    return *this;
  }
  friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
  friend Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
  friend Tensor4 operator*(Real c, Tensor4 a) { return a *= c; }

  Real max_abs() const {
    Real m = 0;
    for (Real x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

} // namespace eulerclass

#endif
