#pragma once

#include <algorithm>
#include <array>
#include <cstddef>

namespace remctl {

template <std::size_t Dim>
struct SimplexResult {
  std::array<double, Dim> point;
  double value;
  int iterations;
};

/// Nelder-Mead minimization with the standard coefficients (reflection 1,
/// expansion 2, contraction 1/2, shrink 1/2). The initial simplex is `start`
/// plus `scale` along each axis. The returned value is never worse than f(start).
template <std::size_t Dim, class F>
SimplexResult<Dim> nelder_mead(F&& f, const std::array<double, Dim>& start, double scale,
                               int max_iterations) {
  using Point = std::array<double, Dim>;
  struct Vertex {
    Point x;
    double fx;
  };

  std::array<Vertex, Dim + 1> s;
  s[0] = {start, f(start)};
  for (std::size_t k = 0; k < Dim; ++k) {
    Point p = start;
    p[k] += scale;
    s[k + 1] = {p, f(p)};
  }

  const auto blend = [](const Point& a, const Point& b, double t) {
    // a + t (b - a)
    Point out;
    for (std::size_t k = 0; k < Dim; ++k) out[k] = a[k] + t * (b[k] - a[k]);
    return out;
  };

  int it = 0;
  for (; it < max_iterations; ++it) {
    std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });

    Point centroid{};
    for (std::size_t v = 0; v < Dim; ++v)
      for (std::size_t k = 0; k < Dim; ++k) centroid[k] += s[v].x[k] / static_cast<double>(Dim);

    Vertex& worst = s[Dim];
    const Point xr = blend(centroid, worst.x, -1.0);
    const double fr = f(xr);

    if (fr < s[0].fx) {
      const Point xe = blend(centroid, worst.x, -2.0);
      const double fe = f(xe);
      worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
      continue;
    }
    if (fr < s[Dim - 1].fx) {
      worst = {xr, fr};
      continue;
    }
    // Contract toward the better of the reflected and worst points.
    const bool outside = fr < worst.fx;
    const Point xc = outside ? blend(centroid, xr, 0.5) : blend(centroid, worst.x, 0.5);
    const double fc = f(xc);
    if (fc < std::min(fr, worst.fx)) {
      worst = {xc, fc};
      continue;
    }
    for (std::size_t v = 1; v <= Dim; ++v) {
      s[v].x = blend(s[0].x, s[v].x, 0.5);
      s[v].fx = f(s[v].x);
    }
  }

  const auto best = std::min_element(s.begin(), s.end(),
                                     [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
  return {best->x, best->fx, it};
}

}  // namespace remctl
