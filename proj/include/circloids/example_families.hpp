#pragma once

// Explicit maps and continua: product and skew-product maps, the hyperbola and
// spiral strips, the leaf-sliding map f_{g,alpha}, and vertical orbit families.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "circle_maps.hpp"
#include "circloid_lab.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "grid_topology.hpp"
#include "semiconjugacy.hpp"
#include "torus_maps.hpp"

namespace circloids {

/// The leaf L_p = graph of y = 1/(x - p), x > p.
struct LeafChart {
  double p = 0.0;
  double y(double x) const { return 1.0 / (x - p); }
  double x(double y) const { return p + 1.0 / y; }
  static double p_of(double x, double y) { return x - 1.0 / y; }
};

struct ProductExample {
  LiftedPlaneMap map;
  SemiconjugacyLift h;
};

/// f(x, y) = (x + rho1, y) with the semiconjugacy h(x, y) = x + alpha(y).
inline ProductExample product_example(double rho1, std::function<double(double)> alpha_profile) {
  LiftedPlaneMap f([rho1](Vec2 z) { return Vec2{z.x + rho1, z.y}; },
                   [rho1](Vec2 z) { return Vec2{z.x - rho1, z.y}; }, true);
  SemiconjugacyLift h;
  h.eval = [a = std::move(alpha_profile)](Vec2 z) { return z.x + a(z.y); };
  return {std::move(f), std::move(h)};
}

/// F(x, y) = (x + rho, y + q(x)), q of period 1.
inline LiftedPlaneMap skew_product(double rho, std::function<double(double)> q) {
  auto fwd = [rho, q](Vec2 z) { return Vec2{z.x + rho, z.y + q(z.x)}; };
  auto inv = [rho, q](Vec2 z) { return Vec2{z.x - rho, z.y - q(z.x - rho)}; };
  return LiftedPlaneMap(fwd, inv, true);
}

namespace detail {
inline void require_window(const GridSpec& spec, double lo, double hi) {
  require(spec.y_min() <= lo && spec.y_max() >= hi, ErrorKind::WindowTooSmall,
          "window must contain y in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}
}  // namespace detail

/// Row y = 0 plus, in every period m, the branch y = 1/(x - m) for
/// x in [m + 1, m + 1 + K] (K = cover periods), closed off by a vertical
/// segment down to the row at its far end.
inline StripRaster hyperbola_spike_continuum(const GridSpec& spec) {
  detail::require_window(spec, -0.2, 1.2);
  const int K = spec.x_period();
  RasterSet r = row_raster(spec, 0.0);
  for (int m = 0; m < K; ++m) {
    const double end = m + 1.0 + K;
    r.draw_curve([m](double t) { return Vec2{t, 1.0 / (t - m)}; }, m + 1.0, end);
    r.draw_segment({end, 1.0 / (K + 1.0)}, {end, 0.0});
  }
  return StripRaster(std::move(r));
}

/// K = J u I u T(J) with J = {0} x [0, 1], I = [0, 1] x {0}, plus a curve
/// gamma of nested U-shaped passes, the k-th at distance 1/(k + 3) from K,
/// joined to J at mid-height. A stub on the far side stops one cell short of
/// T(J).
inline StripRaster spiral_generator_continuum(const GridSpec& spec, int n_turns) {
  require(n_turns >= 3, ErrorKind::InvalidArgument, "need at least 3 turns");
  detail::require_window(spec, -0.2, 1.2);
  const double h = spec.cell();
  auto inset = [](int k) { return 1.0 / (k + 3.0); };
  require(inset(n_turns - 1) - inset(n_turns) >= 2.0 * h, ErrorKind::InvalidArgument,
          "passes closer than two cells; lower n_turns or raise the resolution");
  const double y0 = 0.5;

  std::vector<Vec2> gamma;
  for (int k = 1; k <= n_turns; ++k) {
    const double d = inset(k);
    // the last pass ends on the left, passes alternate direction
    const bool ends_left = ((n_turns - k) % 2) == 0;
    const double xs = ends_left ? 1.0 - d : d;
    const double xe = ends_left ? d : 1.0 - d;
    for (const Vec2 p : {Vec2{xs, y0}, Vec2{xs, d}, Vec2{xe, d}, Vec2{xe, y0}}) gamma.push_back(p);
  }
  gamma.push_back({0.0, y0});
  const double stub_from = 1.0 - inset(n_turns);
  const double stub_to = (spec.resolution() - 1.5) * h;

  RasterSet r = row_raster(spec, 0.0);
  for (int m = 0; m < spec.x_period(); ++m) {
    const Vec2 shift{static_cast<double>(m), 0.0};
    r.draw_segment(Vec2{0.0, 0.0} + shift, Vec2{0.0, 1.0} + shift);
    std::vector<Vec2> g;
    for (const auto& p : gamma) g.push_back(p + shift);
    r.draw_polyline(g);
    r.draw_segment(Vec2{stub_from, y0} + shift, Vec2{stub_to, y0} + shift);
  }
  return StripRaster(std::move(r));
}

inline double spiral_reference_diameter() { return std::sqrt(2.0); }

enum class GlueProfile { Linear, Reciprocal };

struct FgAlphaParams {
  CircleLift g;
  double alpha = 0.0;
  double y0 = 1.0 / 3.0;
  GlueProfile profile = GlueProfile::Linear;
  bool profile_retried = false;

  /// s(y0) = 1, s(2/3) = 0, strictly decreasing.
  double s(double y) const {
    if (profile == GlueProfile::Linear) return (2.0 / 3.0 - y) / (2.0 / 3.0 - y0);
    return (1.0 / y - 1.5) / (1.0 / y0 - 1.5);
  }
};

namespace fga {

inline double v(const FgAlphaParams& P, double x, double y) {
  const double p = LeafChart::p_of(x, y);
  return P.g(p) - p;
}

/// Upper zone: slide along leaves, L_p -> L_{G(p)}, keeping y.
inline Vec2 f1(const FgAlphaParams& P, Vec2 z) {
  const double p = LeafChart::p_of(z.x, z.y);
  return {P.g(p) + 1.0 / z.y, z.y};
}

/// Lower zone: L_p -> L_{G(p)} with horizontal displacement exactly alpha.
inline Vec2 f2(const FgAlphaParams& P, Vec2 z) {
  const double p = LeafChart::p_of(z.x, z.y);
  const double x = z.x + P.alpha;
  return {x, 1.0 / (x - P.g(p))};
}

/// Glue zone: point of L_{G(p)} at horizontal coordinate x + v + s(y)(alpha - v).
inline Vec2 glue(const FgAlphaParams& P, Vec2 z) {
  const double p = LeafChart::p_of(z.x, z.y);
  const double gp = P.g(p);
  const double vv = gp - p;
  const double x = z.x + vv + P.s(z.y) * (P.alpha - vv);
  return {x, 1.0 / (x - gp)};
}

inline Vec2 bottom(const FgAlphaParams& P, Vec2 z) { return {z.x + P.alpha, z.y}; }

inline Vec2 eval(const FgAlphaParams& P, Vec2 z) {
  if (z.y >= 2.0 / 3.0) return f1(P, z);
  if (z.y >= P.y0) return glue(P, z);
  if (z.y > 0.0) return f2(P, z);
  return bottom(P, z);
}

/// Whether y -> image height is strictly monotone along 100 leaves.
inline bool glue_monotone(const FgAlphaParams& P) {
  for (int k = 0; k < 100; ++k) {
    const double p = k / 100.0;
    double prev = -INFINITY;
    for (int t = 0; t <= 200; ++t) {
      const double y = P.y0 + (2.0 / 3.0 - P.y0) * t / 200.0;
      const double h = glue(P, {p + 1.0 / y, y}).y;
      if (!(h > prev) || !std::isfinite(h) || h <= 0.0) return false;
      prev = h;
    }
  }
  return true;
}

}  // namespace fga

/// Chooses y0 so that F2 maps the line y = y0 into (0, 1/3], then a glue
/// profile whose leafwise monotonicity checks out.
inline FgAlphaParams make_fg_alpha_params(const CircleLift& g, double alpha) {
  FgAlphaParams P{g, alpha};
  const double vmax = g.displacement_range().second;
  P.y0 = 1.0 / std::max(3.0, 3.0 + vmax - alpha);
  for (int k = 0; k < 1000; ++k) {
    const double x = k / 1000.0;
    const double y = fga::f2(P, {x, P.y0}).y;
    require(y > 0.0 && y <= 1.0 / 3.0, ErrorKind::InvalidArgument, "line y = y0 leaves (0, 1/3] under F2");
  }
  if (!fga::glue_monotone(P)) {
    P.profile = GlueProfile::Reciprocal;
    P.profile_retried = true;
    require(fga::glue_monotone(P), ErrorKind::InjectivityViolation, "glue zone is not injective along leaves");
  }
  return P;
}

/// Largest jump across the zone boundaries y = 2/3, y = y0 and y -> 0.
inline double zone_discontinuity(const FgAlphaParams& P, int samples = 1000) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double x = static_cast<double>(k) / samples;
    worst = std::max(worst, distance(fga::glue(P, {x, 2.0 / 3.0}), fga::f1(P, {x, 2.0 / 3.0})));
    worst = std::max(worst, distance(fga::glue(P, {x, P.y0}), fga::f2(P, {x, P.y0})));
    worst = std::max(worst, distance(fga::f2(P, {x, 1e-9}), fga::bottom(P, {x, 0.0})));
  }
  return worst;
}

/// Omega(g) = circle minus the open gaps, with interval queries.
class NonwanderingSet {
 public:
  explicit NonwanderingSet(const GapSystem& gs) {
    for (const auto& g : gs.gaps) gaps_.emplace_back(g.left, g.right);
    std::sort(gaps_.begin(), gaps_.end());
  }

  /// Whether [a, b] (b - a < 1, read mod 1) meets the set.
  bool meets(double a, double b) const {
    if (b - a >= 1.0) return true;
    const double s = frac(a);
    const double e = s + (b - a);
    auto it = std::upper_bound(gaps_.begin(), gaps_.end(), std::make_pair(s, static_cast<double>(INFINITY)));
    if (it == gaps_.begin()) return true;
    --it;
    return !(it->first < s && e < it->second);
  }

  bool contains(double x) const { return meets(x, x); }

 private:
  std::vector<std::pair<double, double>> gaps_;
};

struct FgAlphaExample {
  FgAlphaParams params;
  LiftedPlaneMap map;
  RasterSet a;        // row plus the leaves over Omega(g), y in (0, 1]
  StripRaster core;   // the row
};

inline LiftedPlaneMap fg_alpha_map(const FgAlphaParams& P) {
  const double jump = zone_discontinuity(P);
  require(jump <= 1e-6, ErrorKind::ZoneDiscontinuity,
          "zones disagree on their common boundary by " + std::to_string(jump));
  return LiftedPlaneMap([P](Vec2 z) { return fga::eval(P, z); });
}

/// Raster of pi(R_0 u T): cells on the row, and cells meeting a leaf L_p with
/// p in Omega(g) at some height y in (0, 1].
inline RasterSet fg_alpha_continuum(const GapSystem& gs, const GridSpec& spec) {
  detail::require_window(spec, -0.2, 1.2);
  const NonwanderingSet omega(gs);
  const double h = spec.cell();
  RasterSet r = row_raster(spec, 0.0);
  for (int j = 0; j < spec.height(); ++j) {
    const double y_lo = spec.y_of(j);
    if (y_lo <= 0.0 || y_lo > 1.0) continue;
    const double y_hi = std::min(y_lo + h, 1.0);
    for (int i = 0; i < spec.width(); ++i) {
      const double x_lo = i * h;
      const double a = x_lo - 1.0 / y_lo;
      const double b = x_lo + h - 1.0 / y_hi;
      if (omega.meets(a, b)) r.set(i, j);
    }
  }
  return r;
}

inline FgAlphaExample f_g_alpha(const FgAlphaParams& P, const GapSystem& gs, const GridSpec& spec) {
  LiftedPlaneMap f = fg_alpha_map(P);
  RasterSet a = fg_alpha_continuum(gs, spec);
  return {P, std::move(f), std::move(a), StripRaster(row_raster(spec, 0.0))};
}

/// Points of A: on the row, and on leaves over Omega(g) at heights in
/// [y_lo, 1]. Leaf parameters come from a fixed low-discrepancy scan.
inline std::vector<Vec2> fg_alpha_seeds(const GapSystem& gs, int on_row, int on_leaves, double y_lo = 0.05) {
  const NonwanderingSet omega(gs);
  std::vector<Vec2> out;
  for (int k = 0; k < on_row; ++k) out.push_back({(k + 0.5) / on_row, 0.0});
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  long t = 0;
  for (int k = 0; k < on_leaves; ++k) {
    double p;
    do {
      p = frac(++t * phi);
    } while (!omega.contains(p));
    const double y = y_lo + (1.0 - y_lo) * (k + 0.5) / on_leaves;
    out.push_back({p + 1.0 / y, y});
  }
  return out;
}

/// Vertical circles x = G^n(x0) + m, written in the frame (u, v) = (y, x)
/// where they are horizontal: F(u, v) = (u, G(v)).
inline std::shared_ptr<CircloidOrbitFamily> vertical_circle_family(const CircleLift& g, double rho, double x0,
                                                                   int n_range, int m_range, int resolution) {
  const CircleLift inv = g.inverse();
  LiftedPlaneMap f([g](Vec2 z) { return Vec2{z.x, g(z.y)}; }, [inv](Vec2 z) { return Vec2{z.x, inv(z.y)}; }, true);
  const long row = static_cast<long>(std::floor(x0 * resolution));
  const GridSpec spec(resolution, 1, static_cast<double>(row - 8) / resolution, static_cast<double>(row + 9) / resolution);
  RasterSet base(spec);
  for (int i = 0; i < resolution; ++i) base.mark({(i + 0.5) / resolution, x0});
  return std::make_shared<CircloidOrbitFamily>(std::move(base), std::move(f), rho, n_range, m_range);
}

/// Parameters shared by the named examples.
struct ExampleConfig {
  int resolution = 128;
  int periods = 3;
  double y_min = -0.25;
  double y_max = 1.25;
  double alpha = 0.25;
  double rho = 0.6180339887498949;
  int gaps = 200;
  double gap_mass = 0.5;
  int turns = 3;
  double q_mean = 0.3;
  double q_amplitude = 0.1;
};

inline const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names{"row", "hyperbola", "spiral", "fga", "product", "skew", "denjoy", "rigid"};
  return names;
}

inline bool is_example(const std::string& name) {
  const auto& n = example_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

inline GridSpec example_grid(const ExampleConfig& c) { return GridSpec(c.resolution, c.periods, c.y_min, c.y_max); }

/// Raster of a named example, or nullopt for examples that are maps only.
inline std::optional<RasterSet> example_raster(const std::string& name, const ExampleConfig& c) {
  require(is_example(name), ErrorKind::InvalidArgument, "unknown example: " + name);
  const GridSpec spec = example_grid(c);
  if (name == "row") return row_raster(spec, 0.0);
  if (name == "hyperbola") return hyperbola_spike_continuum(spec).raster();
  if (name == "spiral") return spiral_generator_continuum(spec, c.turns).raster();
  if (name == "fga") return fg_alpha_continuum(denjoy_map(c.rho, c.gaps, c.gap_mass).gaps, spec);
  return std::nullopt;
}

/// Lifted map of a named example, or nullopt for continua without dynamics.
inline std::optional<LiftedPlaneMap> example_map(const std::string& name, const ExampleConfig& c) {
  require(is_example(name), ErrorKind::InvalidArgument, "unknown example: " + name);
  if (name == "fga") {
    const auto d = denjoy_map(c.rho, c.gaps, c.gap_mass);
    return fg_alpha_map(make_fg_alpha_params(d.lift, c.alpha));
  }
  if (name == "product") return product_example(c.rho, [](double) { return 0.0; }).map;
  if (name == "skew") {
    const double mean = c.q_mean;
    const double amp = c.q_amplitude;
    return skew_product(c.rho, [mean, amp](double x) { return mean + amp * std::sin(2.0 * M_PI * x); });
  }
  if (name == "denjoy") {
    const auto d = denjoy_map(c.rho, c.gaps, c.gap_mass);
    const CircleLift inv = d.lift.inverse();
    return LiftedPlaneMap([g = d.lift](Vec2 z) { return Vec2{g(z.x), z.y}; },
                          [inv](Vec2 z) { return Vec2{inv(z.x), z.y}; }, true);
  }
  if (name == "rigid") return rigid_translation({c.rho, 0.0});
  if (name == "row") {
    const double a = c.alpha;
    return LiftedPlaneMap([a](Vec2 z) { return Vec2{z.x + a, 0.5 * z.y}; },
                          [a](Vec2 z) { return Vec2{z.x - a, 2.0 * z.y}; });
  }
  return std::nullopt;
}

}  // namespace circloids
