#include "eulerclass/random_fields.hpp"

#include <cmath>

#include "eulerclass/metric.hpp"

namespace eulerclass {

namespace {

/// splitmix64; fixed algorithm so seeded scenarios are stable across
/// platforms and standard libraries.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [-1, 1].
  Real sym() {
    return 2.0 * (static_cast<Real>(next_u64() >> 11) * 0x1.0p-53) - 1.0;
  }
  int index(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }
};

/// Scalar function with exact first and second partials.
struct SmoothFn {
  std::function<Real(const Vec&)> v;
  std::function<Real(int, const Vec&)> d1;
  std::function<Real(int, int, const Vec&)> d2;
};

SmoothFn constant_fn(Real c) {
  return {[c](const Vec&) { return c; }, [](int, const Vec&) { return 0.0; },
          [](int, int, const Vec&) { return 0.0; }};
}

SmoothFn product_fn(SmoothFn a, SmoothFn b) {
  SmoothFn p;
  p.v = [a, b](const Vec& x) { return a.v(x) * b.v(x); };
  p.d1 = [a, b](int i, const Vec& x) {
    return a.d1(i, x) * b.v(x) + a.v(x) * b.d1(i, x);
  };
  p.d2 = [a, b](int i, int j, const Vec& x) {
    return a.d2(i, j, x) * b.v(x) + a.d1(i, x) * b.d1(j, x) +
           a.d1(j, x) * b.d1(i, x) + a.v(x) * b.d2(i, j, x);
  };
  return p;
}

SmoothFn sum_fn(std::vector<SmoothFn> terms) {
  SmoothFn s;
  s.v = [terms](const Vec& x) {
    Real acc = 0;
    for (const auto& t : terms) acc += t.v(x);
    return acc;
  };
  s.d1 = [terms](int i, const Vec& x) {
    Real acc = 0;
    for (const auto& t : terms) acc += t.d1(i, x);
    return acc;
  };
  s.d2 = [terms](int i, int j, const Vec& x) {
    Real acc = 0;
    for (const auto& t : terms) acc += t.d2(i, j, x);
    return acc;
  };
  return s;
}

/// sin / cos of (k (x_c - lo) * 2 pi / span + phase) along one coordinate.
SmoothFn harmonic_fn(int c, Real lo, Real span, int k, Real phase, bool use_sin) {
  Real omega = 2.0 * M_PI * static_cast<Real>(k) / span;
  auto arg = [c, lo, omega, phase](const Vec& x) { return omega * (x[c] - lo) + phase; };
  SmoothFn f;
  if (use_sin) {
    f.v = [arg](const Vec& x) { return std::sin(arg(x)); };
    f.d1 = [arg, c, omega](int i, const Vec& x) {
      return i == c ? omega * std::cos(arg(x)) : 0.0;
    };
    f.d2 = [arg, c, omega](int i, int j, const Vec& x) {
      return (i == c && j == c) ? -omega * omega * std::sin(arg(x)) : 0.0;
    };
  } else {
    f.v = [arg](const Vec& x) { return std::cos(arg(x)); };
    f.d1 = [arg, c, omega](int i, const Vec& x) {
      return i == c ? -omega * std::sin(arg(x)) : 0.0;
    };
    f.d2 = [arg, c, omega](int i, int j, const Vec& x) {
      return (i == c && j == c) ? -omega * omega * std::cos(arg(x)) : 0.0;
    };
  }
  return f;
}

/// Monomial t^k of the axis coordinate scaled to [-1, 1].
SmoothFn monomial_fn(int c, Real lo, Real span, int k) {
  Real scale = 2.0 / span;
  auto t = [c, lo, scale](const Vec& x) { return scale * (x[c] - lo) - 1.0; };
  SmoothFn f;
  f.v = [t, k](const Vec& x) { return std::pow(t(x), k); };
  f.d1 = [t, k, c, scale](int i, const Vec& x) {
    if (i != c || k == 0) return 0.0;
    return static_cast<Real>(k) * std::pow(t(x), k - 1) * scale;
  };
  f.d2 = [t, k, c, scale](int i, int j, const Vec& x) {
    if (i != c || j != c || k < 2) return 0.0;
    return static_cast<Real>(k * (k - 1)) * std::pow(t(x), k - 2) * scale * scale;
  };
  return f;
}

/// Ambient coordinates of a polar pair (theta at t_axis, phi at p_axis):
/// X = sin t cos p, Y = sin t sin p, Z = cos t. Restrictions of ambient
/// polynomials are smooth across the poles the chart excludes.
SmoothFn ambient_fn(int which, int t_axis, int p_axis) {
  SmoothFn f;
  f.v = [which, t_axis, p_axis](const Vec& x) {
    Real t = x[t_axis], p = x[p_axis];
    switch (which) {
      case 0: return std::sin(t) * std::cos(p);
      case 1: return std::sin(t) * std::sin(p);
      default: return std::cos(t);
    }
  };
  f.d1 = [which, t_axis, p_axis](int i, const Vec& x) {
    Real t = x[t_axis], p = x[p_axis];
    if (i != t_axis && i != p_axis) return 0.0;
    bool by_t = (i == t_axis);
    switch (which) {
      case 0: return by_t ? std::cos(t) * std::cos(p) : -std::sin(t) * std::sin(p);
      case 1: return by_t ? std::cos(t) * std::sin(p) : std::sin(t) * std::cos(p);
      default: return by_t ? -std::sin(t) : 0.0;
    }
  };
  f.d2 = [which, t_axis, p_axis](int i, int j, const Vec& x) {
    Real t = x[t_axis], p = x[p_axis];
    auto axis_kind = [&](int a) { return a == t_axis ? 0 : (a == p_axis ? 1 : 2); };
    int ai = axis_kind(i), aj = axis_kind(j);
    if (ai == 2 || aj == 2) return 0.0;
    // second derivatives of sin t cos p etc.
    if (which == 2) {
      if (ai == 0 && aj == 0) return -std::cos(t);
      return 0.0;
    }
    Real trig_p = (which == 0) ? std::cos(p) : std::sin(p);
    Real dtrig_p = (which == 0) ? -std::sin(p) : std::cos(p);
    if (ai == 0 && aj == 0) return -std::sin(t) * trig_p;
    if (ai == 1 && aj == 1) return -std::sin(t) * trig_p;
    return std::cos(t) * dtrig_p; // mixed t, p
  };
  return f;
}

/// Random smooth scalar as a sum of products of per-group basis functions.
SmoothFn random_smooth(const Chart& chart, Rng& rng, Real amplitude, int terms) {
  // Group axes: polar pairs versus single axes.
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> singles;
  std::vector<bool> used(static_cast<std::size_t>(chart.dim), false);
  for (int i = 0; i < chart.dim; ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    int p = chart.polar_pair[static_cast<std::size_t>(i)];
    if (p >= 0) {
      pairs.emplace_back(i, p);
      used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(p)] = true;
    } else {
      singles.push_back(i);
      used[static_cast<std::size_t>(i)] = true;
    }
  }
  std::vector<SmoothFn> sum_terms;
  for (int t = 0; t < terms; ++t) {
    SmoothFn term = constant_fn(rng.sym() * amplitude / static_cast<Real>(terms));
    for (const auto& [ta, pa] : pairs) {
      // Low-degree ambient polynomial: one or two coordinate factors.
      SmoothFn f = ambient_fn(rng.index(3), ta, pa);
      if (rng.index(2) == 1) f = product_fn(f, ambient_fn(rng.index(3), ta, pa));
      term = product_fn(term, f);
    }
    for (int axis : singles) {
      Real lo = chart.lo[axis], span = chart.extent(axis);
      SmoothFn f = chart.periodic[static_cast<std::size_t>(axis)]
                       ? harmonic_fn(axis, lo, span, 1 + rng.index(2),
                                     0.5 * M_PI * rng.sym(), rng.index(2) == 1)
                       : monomial_fn(axis, lo, span, rng.index(4));
      term = product_fn(term, f);
    }
    sum_terms.push_back(std::move(term));
  }
  return sum_fn(std::move(sum_terms));
}

ScalarField to_field(const Chart& chart, const SmoothFn& f) {
  ScalarField out;
  out.chart = chart;
  out.value = f.v;
  out.partial = f.d1;
  out.partial2 = f.d2;
  return out;
}

} // namespace

ScalarField random_scalar_field(const Chart& chart, std::uint64_t seed,
                                Real amplitude) {
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 0x51ed2701ULL);
  return to_field(chart, random_smooth(chart, rng, amplitude, 6));
}

VectorField random_one_form(const Chart& chart, std::uint64_t seed, Real amplitude) {
  Rng rng(seed * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL);
  // phi = sum_k f_k d(g_k): components f d_i g, a smooth global 1-form when
  // f and g are smooth global functions.
  const int terms = 3;
  std::vector<SmoothFn> fs, gs;
  for (int k = 0; k < terms; ++k) {
    fs.push_back(random_smooth(chart, rng, amplitude / terms, 3));
    gs.push_back(random_smooth(chart, rng, 1.0, 3));
  }
  VectorField out;
  out.chart = chart;
  const int n = chart.dim;
  out.value = [fs, gs, n, terms](const Vec& x) {
    Vec r = Vec::Zero(n);
    for (int k = 0; k < terms; ++k)
      for (int i = 0; i < n; ++i)
        r[i] += fs[static_cast<std::size_t>(k)].v(x) *
                gs[static_cast<std::size_t>(k)].d1(i, x);
    return r;
  };
  out.partial = [fs, gs, n, terms](int j, const Vec& x) {
    Vec r = Vec::Zero(n);
    for (int k = 0; k < terms; ++k) {
      const auto& f = fs[static_cast<std::size_t>(k)];
      const auto& g = gs[static_cast<std::size_t>(k)];
      for (int i = 0; i < n; ++i)
        r[i] += f.d1(j, x) * g.d1(i, x) + f.v(x) * g.d2(j, i, x);
    }
    return r;
  };
  return out;
}

Coeffs3Field random_endo_one_form(const MatrixField& g, std::uint64_t seed,
                                  Real amplitude) {
  const Chart& chart = g.chart;
  Rng rng(seed * 0xA24BAED4963EE407ULL + 0x9FB21C651E98DF25ULL);
  // A_i{}^k{}_j = sum_t xi_i zeta^k eta_j with smooth random 1-forms and the
  // middle slot raised by g.
  const int terms = 3;
  std::vector<VectorField> xis, zetas, etas;
  for (int t = 0; t < terms; ++t) {
    xis.push_back(random_one_form(chart, rng.next_u64(), amplitude));
    zetas.push_back(random_one_form(chart, rng.next_u64(), 1.0));
    etas.push_back(random_one_form(chart, rng.next_u64(), 1.0));
  }
  Coeffs3Field out;
  out.chart = chart;
  const int n = chart.dim;
  out.value = [g, xis, zetas, etas, n, terms](const Vec& x) {
    Mat ginv = g.value(x).inverse();
    Coeffs3 a(n, n);
    for (int t = 0; t < terms; ++t) {
      Vec xi = xis[static_cast<std::size_t>(t)].value(x);
      Vec zeta_up = ginv * zetas[static_cast<std::size_t>(t)].value(x);
      Vec eta = etas[static_cast<std::size_t>(t)].value(x);
      for (int i = 0; i < n; ++i) a[i] += xi[i] * (zeta_up * eta.transpose());
    }
    return a;
  };
  if (g.has_exact_partial()) {
    out.partial = [g, xis, zetas, etas, n, terms](int l, const Vec& x) {
      Mat gx = g.value(x);
      Mat ginv = gx.inverse();
      Mat dginv = inverse_metric_partial(ginv, g.partial(l, x));
      Coeffs3 a(n, n);
      for (int t = 0; t < terms; ++t) {
        Vec xi = xis[static_cast<std::size_t>(t)].value(x);
        Vec dxi = xis[static_cast<std::size_t>(t)].partial(l, x);
        Vec zeta = zetas[static_cast<std::size_t>(t)].value(x);
        Vec dzeta = zetas[static_cast<std::size_t>(t)].partial(l, x);
        Vec eta = etas[static_cast<std::size_t>(t)].value(x);
        Vec deta = etas[static_cast<std::size_t>(t)].partial(l, x);
        Vec zu = ginv * zeta;
        Vec dzu = dginv * zeta + ginv * dzeta;
        for (int i = 0; i < n; ++i)
          a[i] += dxi[i] * (zu * eta.transpose()) + xi[i] * (dzu * eta.transpose()) +
                  xi[i] * (zu * deta.transpose());
      }
      return a;
    };
  }
  return out;
}

std::vector<Vec> sample_points(const Chart& chart, int count, std::uint64_t seed,
                               Real margin_fraction) {
  Rng rng(seed * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL);
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vec x(chart.dim);
    for (int i = 0; i < chart.dim; ++i) {
      Real m = chart.periodic[static_cast<std::size_t>(i)] ? 0.0 : margin_fraction;
      Real lo = chart.lo[i] + m * chart.extent(i);
      Real hi = chart.hi[i] - m * chart.extent(i);
      x[i] = lo + 0.5 * (rng.sym() + 1.0) * (hi - lo);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

} // namespace eulerclass
