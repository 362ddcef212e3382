#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "circloids/grid.hpp"

namespace fixtures {

using circloids::GridSpec;
using circloids::RasterSet;
using circloids::Vec2;

inline const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

/// Rows at y = 0 and y = 0.5 joined by a vertical arc at x = 0.5.
inline RasterSet theta(int res) {
  GridSpec spec(res, 1, -0.5, 1.0);
  RasterSet r = circloids::row_raster(spec, 0.0) | circloids::row_raster(spec, 0.5);
  r.draw_segment({0.5, 0.0}, {0.5, 0.5});
  return r;
}

/// Row y = 0 with a whisker of length 0.3 at x = 0.5, up or down.
inline RasterSet whisker(int res, bool up) {
  GridSpec spec(res, 1, -0.5, 1.0);
  RasterSet r = circloids::row_raster(spec, 0.0);
  r.draw_segment({0.5, 0.0}, {0.5, up ? 0.3 : -0.3});
  return r;
}

/// Axis-parallel square outline with corners (x0, y0), (x1, y1).
inline RasterSet square_outline(const GridSpec& spec, double x0, double y0, double x1, double y1) {
  RasterSet r(spec);
  r.draw_polyline({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}});
  return r;
}

/// Random 8-connected walk of `steps` cells starting at (i, j), staying at
/// least `margin` rows inside the window.
inline RasterSet random_walk(const GridSpec& spec, std::mt19937_64& rng, long i, int j, int steps, int margin,
                             int drift = 0) {
  RasterSet r(spec);
  std::uniform_int_distribution<int> step(-1, 1);
  r.set(i, j);
  for (int k = 0; k < steps; ++k) {
    long ni = i + step(rng) + drift;
    int nj = j + step(rng);
    if (nj < margin || nj >= spec.height() - margin) nj = j;
    i = ni;
    j = nj;
    r.set(i, j);
  }
  return r;
}

/// Row y = 0 plus random vertical whiskers (at least two empty columns
/// apart) on a one-period annulus.
inline RasterSet random_whiskered_row(int res, std::mt19937_64& rng, int whiskers) {
  GridSpec spec(res, 1, -0.5, 0.5);
  RasterSet r = circloids::row_raster(spec, 0.0);
  std::uniform_int_distribution<int> slot(0, res / 3 - 1);
  std::uniform_real_distribution<double> len(-0.3, 0.3);
  for (int k = 0; k < whiskers; ++k) {
    const double x = (3 * slot(rng) + 0.5) / res;
    r.draw_segment({x, 0.0}, {x, len(rng)});
  }
  return r;
}

}  // namespace fixtures
