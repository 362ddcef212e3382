#pragma once

// Lifts of annulus and torus homeomorphisms to the plane: orbits, displacement
// averages and finite-horizon rotation-set estimates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "geometry.hpp"
#include "grid.hpp"

namespace circloids {

using PlaneFn = std::function<Vec2(Vec2)>;

inline constexpr long kMaxHorizon = 10'000'000;

/// Plane map commuting with T1 : (x, y) -> (x + 1, y), and with
/// T2 : (x, y) -> (x, y + 1) when it descends to the torus.
class LiftedPlaneMap {
 public:
  struct Validation {
    int samples = 1000;
    double x_lo = -2.0, x_hi = 2.0;
    double y_lo = -2.0, y_hi = 2.0;
    std::uint64_t seed = 1;
  };

  LiftedPlaneMap(PlaneFn forward, std::optional<PlaneFn> inverse = std::nullopt, bool torus = false)
      : LiftedPlaneMap(std::move(forward), std::move(inverse), torus, Validation{}) {}

  LiftedPlaneMap(PlaneFn forward, std::optional<PlaneFn> inverse, bool torus, const Validation& v)
      : f_(std::move(forward)), inv_(std::move(inverse)), torus_(torus) {
    require(static_cast<bool>(f_), ErrorKind::InvalidArgument, "forward rule missing");
    validate(v);
  }

  Vec2 operator()(Vec2 z) const { return f_(z); }
  bool has_inverse() const { return inv_.has_value(); }
  Vec2 inverse(Vec2 z) const {
    require(inv_.has_value(), ErrorKind::InvalidArgument, "no inverse rule declared");
    return (*inv_)(z);
  }
  bool descends_to_torus() const { return torus_; }
  const PlaneFn& forward() const { return f_; }
  const std::optional<PlaneFn>& inverse_rule() const { return inv_; }

  /// Largest deck-commutation defect over the sample points.
  double commutation_defect(const Validation& v) const {
    std::mt19937_64 rng(v.seed);
    std::uniform_real_distribution<double> ux(v.x_lo, v.x_hi);
    std::uniform_real_distribution<double> uy(v.y_lo, v.y_hi);
    double worst = 0.0;
    for (int k = 0; k < v.samples; ++k) {
      const Vec2 z{ux(rng), uy(rng)};
      const Vec2 fz = f_(z);
      worst = std::max(worst, norm(f_(z + Vec2{1, 0}) - fz - Vec2{1, 0}));
      if (torus_) worst = std::max(worst, norm(f_(z + Vec2{0, 1}) - fz - Vec2{0, 1}));
    }
    return worst;
  }

 private:
  void validate(const Validation& v) {
    const double d = commutation_defect(v);
    require(std::isfinite(d) && d <= 1e-9, ErrorKind::InvalidArgument,
            "map does not commute with the declared integer translations");
  }

  PlaneFn f_;
  std::optional<PlaneFn> inv_;
  bool torus_ = false;
};

inline Vec2 swap(Vec2 z) { return {z.y, z.x}; }

/// Conjugate by (x, y) -> (y, x), exchanging the angular and radial roles.
/// The result is validated against T1 in the new frame, so only maps that
/// commute with vertical translations can be swapped.
inline LiftedPlaneMap swap_axes(const LiftedPlaneMap& f) {
  PlaneFn fwd = [g = f.forward()](Vec2 z) { return swap(g(swap(z))); };
  std::optional<PlaneFn> inv;
  if (f.inverse_rule()) inv = [g = *f.inverse_rule()](Vec2 z) { return swap(g(swap(z))); };
  return LiftedPlaneMap(fwd, inv, f.descends_to_torus());
}

/// T1^k o F, another lift of the same annulus map.
inline LiftedPlaneMap shift_lift(const LiftedPlaneMap& f, int k) {
  PlaneFn fwd = [g = f.forward(), k](Vec2 z) { return g(z) + Vec2{static_cast<double>(k), 0.0}; };
  std::optional<PlaneFn> inv;
  if (f.inverse_rule())
    inv = [g = *f.inverse_rule(), k](Vec2 z) { return g(z - Vec2{static_cast<double>(k), 0.0}); };
  return LiftedPlaneMap(fwd, inv, f.descends_to_torus());
}

inline LiftedPlaneMap rigid_translation(Vec2 v) {
  return LiftedPlaneMap([v](Vec2 z) { return z + v; }, [v](Vec2 z) { return z - v; }, true);
}

namespace detail {
inline void check_orbit_point(Vec2 z) {
  require(std::isfinite(z.x) && std::isfinite(z.y) && std::abs(z.x) <= 1e12 && std::abs(z.y) <= 1e12,
          ErrorKind::NonFinite, "orbit left the representable range");
}
inline void check_horizon(long n) {
  require(n >= 1 && n <= kMaxHorizon, ErrorKind::InvalidArgument, "horizon must lie in [1, 1e7]");
}
}  // namespace detail

/// (F^n(z) - z) / n.
inline Vec2 displacement_average(const LiftedPlaneMap& f, Vec2 z, long n) {
  detail::check_horizon(n);
  detail::check_orbit_point(z);
  Vec2 w = z;
  for (long k = 0; k < n; ++k) {
    w = f(w);
    detail::check_orbit_point(w);
  }
  return (w - z) / static_cast<double>(n);
}

inline std::vector<Vec2> orbit(const LiftedPlaneMap& f, Vec2 z, long n) {
  detail::check_horizon(n);
  std::vector<Vec2> out{z};
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k < n; ++k) {
    z = f(z);
    detail::check_orbit_point(z);
    out.push_back(z);
  }
  return out;
}

inline std::string orbit_csv(const std::vector<Vec2>& pts) {
  std::ostringstream out;
  out << "k,x,y\n";
  char buf[128];
  for (std::size_t k = 0; k < pts.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k, pts[k].x, pts[k].y);
    out << buf;
  }
  return out.str();
}

struct RotationEstimate {
  long horizon = 0;
  std::vector<Vec2> seeds;
  std::vector<Vec2> averages;
  double hull_x_lo = 0.0;
  double hull_x_hi = 0.0;
  std::vector<Vec2> hull;  // convex polygon, counter-clockwise
  double spread = 0.0;     // max pairwise distance of averages
};

inline RotationEstimate rotation_set_estimate(const LiftedPlaneMap& f, const std::vector<Vec2>& seeds, long n) {
  require(!seeds.empty(), ErrorKind::InvalidArgument, "need at least one seed");
  RotationEstimate est;
  est.horizon = n;
  est.seeds = seeds;
  for (const auto& z : seeds) est.averages.push_back(displacement_average(f, z, n));
  // Vertices closer than 1e-12 are rounding noise of one average.
  for (const auto& v : convex_hull(est.averages)) {
    bool dup = false;
    for (const auto& k : est.hull) dup = dup || distance(k, v) < 1e-12;
    if (!dup) est.hull.push_back(v);
  }
  est.hull_x_lo = est.hull_x_hi = est.averages.front().x;
  for (const auto& a : est.averages) {
    est.hull_x_lo = std::min(est.hull_x_lo, a.x);
    est.hull_x_hi = std::max(est.hull_x_hi, a.x);
  }
  // The diameter of a point set is attained on its hull.
  for (std::size_t a = 0; a < est.hull.size(); ++a)
    for (std::size_t b = a + 1; b < est.hull.size(); ++b)
      est.spread = std::max(est.spread, distance(est.hull[a], est.hull[b]));
  return est;
}

inline nlohmann::json to_json(const RotationEstimate& e) {
  nlohmann::json avgs = nlohmann::json::array();
  for (const auto& a : e.averages) avgs.push_back({a.x, a.y});
  return {{"horizon", e.horizon}, {"averages", avgs}, {"hull_x", {e.hull_x_lo, e.hull_x_hi}}, {"spread", e.spread}};
}

/// Max over k <= n and seed pairs of the gap between first-coordinate
/// displacements.
inline double orbit_spread(const LiftedPlaneMap& f, const std::vector<Vec2>& seeds, long n) {
  require(seeds.size() >= 2, ErrorKind::InvalidArgument, "need at least two seeds");
  detail::check_horizon(n);
  std::vector<Vec2> w = seeds;
  double worst = 0.0;
  for (long k = 1; k <= n; ++k) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t s = 0; s < w.size(); ++s) {
      w[s] = f(w[s]);
      detail::check_orbit_point(w[s]);
      const double d = w[s].x - seeds[s].x;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

struct ConvergenceRow {
  long horizon = 0;
  double dev_x = 0.0;  // sup over seeds of |avg_n - avg_2n|, first coordinate
  double dev_y = 0.0;
};

inline std::vector<ConvergenceRow> uniform_convergence_probe(const LiftedPlaneMap& f, const std::vector<Vec2>& seeds,
                                                             const std::vector<long>& horizons) {
  require(!seeds.empty(), ErrorKind::InvalidArgument, "need at least one seed");
  for (std::size_t k = 1; k < horizons.size(); ++k)
    require(horizons[k] > horizons[k - 1], ErrorKind::InvalidArgument, "horizons must increase");
  std::vector<ConvergenceRow> rows;
  for (long n : horizons) {
    detail::check_horizon(2 * n);
    ConvergenceRow row{n, 0.0, 0.0};
    for (const auto& z : seeds) {
      Vec2 w = z;
      Vec2 at_n;
      for (long k = 1; k <= 2 * n; ++k) {
        w = f(w);
        detail::check_orbit_point(w);
        if (k == n) at_n = w;
      }
      const Vec2 a = (at_n - z) / static_cast<double>(n);
      const Vec2 b = (w - z) / static_cast<double>(2 * n);
      row.dev_x = std::max(row.dev_x, std::abs(a.x - b.x));
      row.dev_y = std::max(row.dev_y, std::abs(a.y - b.y));
    }
    rows.push_back(row);
  }
  return rows;
}

namespace detail {

struct Box {
  double x0, x1, y0, y1;
};

/// Both displacement coordinates attain values of both signs on a 3x3 sample
/// of the box.
inline bool straddles(const LiftedPlaneMap& f, const Box& b) {
  double lx = INFINITY, hx = -INFINITY, ly = INFINITY, hy = -INFINITY;
  for (int a = 0; a <= 2; ++a)
    for (int c = 0; c <= 2; ++c) {
      const Vec2 z{b.x0 + 0.5 * a * (b.x1 - b.x0), b.y0 + 0.5 * c * (b.y1 - b.y0)};
      const Vec2 d = f(z) - z;
      if (!std::isfinite(d.x) || !std::isfinite(d.y)) return false;
      lx = std::min(lx, d.x);
      hx = std::max(hx, d.x);
      ly = std::min(ly, d.y);
      hy = std::max(hy, d.y);
    }
  return lx <= 0.0 && hx >= 0.0 && ly <= 0.0 && hy >= 0.0;
}

inline std::optional<Vec2> refine(const LiftedPlaneMap& f, const Box& start, double residual, long& budget) {
  std::vector<Box> stack{start};
  while (!stack.empty() && budget > 0) {
    const Box b = stack.back();
    stack.pop_back();
    --budget;
    const Vec2 mid{0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)};
    if (norm(f(mid) - mid) <= residual) return mid;
    if (b.x1 - b.x0 < 1e-13 || !straddles(f, b)) continue;
    stack.push_back({b.x0, mid.x, b.y0, mid.y});
    stack.push_back({mid.x, b.x1, b.y0, mid.y});
    stack.push_back({b.x0, mid.x, mid.y, b.y1});
    stack.push_back({mid.x, b.x1, mid.y, b.y1});
  }
  return std::nullopt;
}

}  // namespace detail

/// Searches the cells of `region` for a sign change of F(z) - z in both
/// coordinates across the cell's 8-neighbourhood, then bisects. An empty
/// result is inconclusive.
inline std::optional<Vec2> fixed_point_search(const LiftedPlaneMap& f, const RasterSet& region,
                                              double residual = 1e-7) {
  require(!region.empty(), ErrorKind::InvalidArgument, "search region is empty");
  const GridSpec& spec = region.spec();
  const double h = spec.cell();
  long budget = 200000;
  for (const auto& c : region.cells()) {
    const Vec2 ctr = spec.center(c.i, c.j);
    const detail::Box box{ctr.x - 1.5 * h, ctr.x + 1.5 * h, ctr.y - 1.5 * h, ctr.y + 1.5 * h};
    if (!detail::straddles(f, box)) continue;
    if (auto z = detail::refine(f, box, residual, budget)) return z;
    if (budget <= 0) break;
  }
  return std::nullopt;
}

}  // namespace circloids
