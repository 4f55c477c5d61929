#include "eulerclass/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace eulerclass {

namespace {

/// Legendre polynomial value and derivative by the three-term recurrence.
std::pair<Real, Real> legendre(int n, Real x) {
  Real p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  Real dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

GaussLegendre build_rule(int n) {
  GaussLegendre r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n / 2 + n % 2; ++i) {
    // Tricomi initial guess, then Newton.
    Real x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(n, x);
      Real dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    auto [p, dp] = legendre(n, x);
    (void)p;
    Real w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.weights[i] = w;
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

} // namespace

const GaussLegendre& GaussLegendre::get(int n) {
  require(n >= 1, "GaussLegendre: order must be positive");
  static std::map<int, GaussLegendre> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

MappedRule mapped_rule(int n, Real a, Real b) {
  const auto& gl = GaussLegendre::get(n);
  MappedRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const Real mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * gl.nodes[i];
    r.weights[i] = half * gl.weights[i];
  }
  return r;
}

int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("EULERCLASS_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

Real pairwise_sum(std::vector<Real>& values) {
  // In-place reduction tree; order independent of how values were produced.
  std::size_t n = values.size();
  while (n > 1) {
    std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i + half < n; ++i) values[i] += values[i + half];
    n = half;
  }
  return n == 0 ? 0.0 : values[0];
}

Real parallel_sum(int count, const std::function<Real(int)>& f) {
  std::vector<Real> values(static_cast<std::size_t>(count), 0.0);
  int workers = std::min(worker_count(), std::max(count, 1));
  if (workers <= 1 || count < 64) {
    for (int i = 0; i < count; ++i) values[static_cast<std::size_t>(i)] = f(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (int i = w; i < count; i += workers)
          values[static_cast<std::size_t>(i)] = f(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return pairwise_sum(values);
}

NodeSet chart_nodes(const Chart& chart, int nodes_per_axis) {
  std::vector<MappedRule> axes;
  axes.reserve(static_cast<std::size_t>(chart.dim));
  for (int i = 0; i < chart.dim; ++i)
    axes.push_back(mapped_rule(nodes_per_axis, chart.lo[i], chart.hi[i]));
  long total = 1;
  for (int i = 0; i < chart.dim; ++i) total *= nodes_per_axis;
  NodeSet out;
  out.points.reserve(static_cast<std::size_t>(total));
  out.weights.reserve(static_cast<std::size_t>(total));
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    Vec x(chart.dim);
    Real w = 1.0;
    for (int i = chart.dim - 1; i >= 0; --i) {
      int k = static_cast<int>(rem % nodes_per_axis);
      rem /= nodes_per_axis;
      x[i] = axes[static_cast<std::size_t>(i)].nodes[static_cast<std::size_t>(k)];
      w *= axes[static_cast<std::size_t>(i)].weights[static_cast<std::size_t>(k)];
    }
    out.points.push_back(std::move(x));
    out.weights.push_back(w);
  }
  return out;
}

Real integrate_scalar(const Chart& chart, int nodes_per_axis,
                      const std::function<Real(const Vec&)>& density) {
  NodeSet ns = chart_nodes(chart, nodes_per_axis);
  int count = static_cast<int>(ns.points.size());
  return parallel_sum(count, [&](int i) {
    auto k = static_cast<std::size_t>(i);
    return ns.weights[k] * density(ns.points[k]);
  });
}

Real integrate_form(const FormField& top_form, int nodes_per_axis) {
  const Chart& chart = top_form.chart;
  Real value = integrate_scalar(chart, nodes_per_axis, [&](const Vec& x) {
    FormD w = top_form.value(x);
    require(w.degree() == chart.dim, "integrate_form: form must be top-degree");
    return w.top_coefficient();
  });
  return chart.orientation * value;
}

Real integrate_atlas(const std::vector<AtlasPiece>& pieces) {
  Real total = 0.0;
  for (const auto& p : pieces) total += integrate_form(p.form, p.nodes_per_axis);
  return total;
}

} // namespace eulerclass
