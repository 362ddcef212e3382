#pragma once

// Degree-one lifts of orientation-preserving circle homeomorphisms, their
// rotation numbers, and a piecewise-linear Denjoy construction.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <numeric>
#include <optional>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"

namespace circloids {

/// Strictly increasing piecewise-linear G : R -> R with G(x + 1) = G(x) + 1,
/// stored as breakpoints x_0 < ... < x_{k-1} in [0, 1) and their values.
class CircleLift {
 public:
  CircleLift(std::vector<double> xs, std::vector<double> gs) : xs_(std::move(xs)), gs_(std::move(gs)) {
    require(!xs_.empty() && xs_.size() == gs_.size(), ErrorKind::InvalidArgument,
            "breakpoint lists must be nonempty and of equal length");
    require(xs_.front() >= 0.0 && xs_.back() < 1.0, ErrorKind::InvalidArgument,
            "breakpoints must lie in [0, 1)");
    for (std::size_t k = 0; k < xs_.size(); ++k)
      require(std::isfinite(xs_[k]) && std::isfinite(gs_[k]), ErrorKind::NonFinite, "non-finite breakpoint");
    for (std::size_t k = 1; k < xs_.size(); ++k)
      require(xs_[k] > xs_[k - 1] && gs_[k] > gs_[k - 1], ErrorKind::InvalidArgument,
              "lift must be strictly increasing");
    require(gs_.back() < gs_.front() + 1.0, ErrorKind::InvalidArgument,
            "lift must be strictly increasing across the period");
  }

  static CircleLift rigid(double rho) { return CircleLift({0.0}, {rho}); }

  /// Piecewise-linear interpolation of f at n equally spaced breakpoints.
  static CircleLift sampled(const std::function<double(double)>& f, int n) {
    require(n >= 1, ErrorKind::InvalidArgument, "need at least one breakpoint");
    std::vector<double> xs(n);
    std::vector<double> gs(n);
    for (int k = 0; k < n; ++k) {
      xs[k] = static_cast<double>(k) / n;
      gs[k] = f(xs[k]);
    }
    return CircleLift(std::move(xs), std::move(gs));
  }

  const std::vector<double>& breakpoints() const { return xs_; }
  const std::vector<double>& values() const { return gs_; }

  double operator()(double x) const {
    const double base = std::floor(x);
    return base + eval_unit(x - base);
  }

  /// G^n(x) - x, tracking the integer part separately so that long orbits do
  /// not lose precision.
  double displacement(double x, long n) const {
    const double base0 = std::floor(x);
    const double t0 = x - base0;
    double t = t0;
    double shift = 0.0;
    for (long k = 0; k < n; ++k) {
      const double y = eval_unit(t);
      const double fl = std::floor(y);
      shift += fl;
      t = y - fl;
    }
    return shift + (t - t0);
  }

  double iterate(double x, long n) const { return x + displacement(x, n); }

  CircleLift inverse() const {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(xs_.size());
    for (std::size_t k = 0; k < xs_.size(); ++k) {
      double fl = std::floor(gs_[k]);
      double x = gs_[k] - fl;
      if (x >= 1.0) {  // gs_[k] a hair below an integer
        x = 0.0;
        fl += 1.0;
      }
      pts.emplace_back(x, xs_[k] - fl);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> xs;
    std::vector<double> gs;
    for (const auto& [x, g] : pts) {
      xs.push_back(x);
      gs.push_back(g);
    }
    return CircleLift(std::move(xs), std::move(gs));
  }

  /// Range of G(x) - x over one period (attained at breakpoints).
  std::pair<double, double> displacement_range() const {
    double lo = gs_[0] - xs_[0];
    double hi = lo;
    for (std::size_t k = 1; k < xs_.size(); ++k) {
      lo = std::min(lo, gs_[k] - xs_[k]);
      hi = std::max(hi, gs_[k] - xs_[k]);
    }
    return {lo, hi};
  }

 private:
  double eval_unit(double t) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
    double x0;
    double g0;
    double x1;
    double g1;
    if (it == xs_.begin()) {
      x0 = xs_.back() - 1.0;
      g0 = gs_.back() - 1.0;
      x1 = xs_.front();
      g1 = gs_.front();
    } else {
      const auto k = static_cast<std::size_t>(it - xs_.begin()) - 1;
      x0 = xs_[k];
      g0 = gs_[k];
      if (k + 1 < xs_.size()) {
        x1 = xs_[k + 1];
        g1 = gs_[k + 1];
      } else {
        x1 = xs_.front() + 1.0;
        g1 = gs_.front() + 1.0;
      }
    }
    if (t == x0) return g0;
    return g0 + (t - x0) * (g1 - g0) / (x1 - x0);
  }

  std::vector<double> xs_;
  std::vector<double> gs_;
};

struct RotationNumberEstimate {
  double value = 0.0;
  double error_bound = 0.0;
};

/// (G^n(x0) - x0) / n; for a degree-one monotone lift the true rotation number
/// lies within 1/n of it.
inline RotationNumberEstimate rotation_number(const CircleLift& g, double x0, long n) {
  require(n >= 1, ErrorKind::InvalidArgument, "need at least one iteration");
  return {g.displacement(x0, n) / static_cast<double>(n), 1.0 / static_cast<double>(n)};
}

struct Gap {
  int n = 0;  // orbit position
  double left = 0.0;
  double right = 0.0;
  double length() const { return right - left; }
};

/// Wandering intervals of a Denjoy example, indexed by orbit position.
struct GapSystem {
  double rho = 0.0;
  int n_gaps = 0;
  std::vector<Gap> gaps;  // ordered by n, from -n_gaps to n_gaps

  double total_length() const {
    return std::accumulate(gaps.begin(), gaps.end(), 0.0,
                           [](double acc, const Gap& g) { return acc + g.length(); });
  }

  const Gap& gap(int n) const { return gaps.at(static_cast<std::size_t>(n + n_gaps)); }

  /// Orbit position of the open gap containing x (mod 1), if any.
  std::optional<int> gap_containing(double x) const {
    const double t = frac(x);
    for (const auto& g : gaps)
      if (t > g.left && t < g.right) return g.n;
    return std::nullopt;
  }
};

/// Rejects rho within 1e-9 of a rational with denominator <= 100.
inline bool irrational_to_machine_precision(double rho) {
  for (int q = 1; q <= 100; ++q)
    if (std::abs(rho - std::round(rho * q) / q) <= 1e-9) return false;
  return true;
}

struct DenjoyMap {
  CircleLift lift;
  GapSystem gaps;
};

/// Piecewise-linear Denjoy example: gaps of length proportional to
/// 1/(|n| + 2)^2 blown up along the R_rho-orbit of 0, affine on each gap and
/// order-isomorphic to R_rho on the complement.
inline DenjoyMap denjoy_map(double rho, int n_gaps, double gap_mass) {
  require(irrational_to_machine_precision(rho), ErrorKind::RationalRho,
          "rotation number is rational to machine precision");
  require(n_gaps >= 10, ErrorKind::InvalidArgument, "need at least 10 gaps on each side");
  require(gap_mass > 0.0 && gap_mass < 1.0, ErrorKind::InvalidArgument, "gap mass must lie in (0, 1)");

  const int count = 2 * n_gaps + 1;
  std::vector<double> theta(count + 1);  // slot count holds theta_{N+1}
  std::vector<double> len(count);
  double weight = 0.0;
  for (int n = -n_gaps; n <= n_gaps; ++n) weight += 1.0 / ((std::abs(n) + 2.0) * (std::abs(n) + 2.0));
  for (int n = -n_gaps; n <= n_gaps; ++n) {
    theta[n + n_gaps] = frac(n * rho);
    len[n + n_gaps] = gap_mass / weight / ((std::abs(n) + 2.0) * (std::abs(n) + 2.0));
  }
  theta[count] = frac((n_gaps + 1) * rho);

  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return theta[a] < theta[b]; });
  for (int k = 1; k < count; ++k)
    require((1.0 - gap_mass) * (theta[order[k]] - theta[order[k - 1]]) > 1e-12, ErrorKind::TooManyGaps,
            "orbit points too close to separate the requested gaps");

  // phi: R_rho coordinate -> Denjoy coordinate (gaps collapse to orbit points).
  std::vector<double> left(count);
  double mass_before = 0.0;
  for (int idx : order) {
    left[idx] = (1.0 - gap_mass) * theta[idx] + mass_before;
    mass_before += len[idx];
  }
  auto phi = [&](double t) {
    double m = 0.0;
    for (int k = 0; k < count; ++k)
      if (theta[k] < t) m += len[k];
    return (1.0 - gap_mass) * t + m;
  };

  GapSystem gs{rho, n_gaps, {}};
  for (int n = -n_gaps; n <= n_gaps; ++n) gs.gaps.push_back({n, left[n + n_gaps], left[n + n_gaps] + len[n + n_gaps]});
  require(gs.gaps.back().right <= 1.0, ErrorKind::TooManyGaps, "gaps exceed the circle");

  // Breakpoints: both ends of every gap. gap(n) -> gap(n+1); the last gap is
  // squeezed onto a short interval at phi(theta_{N+1}).
  struct Bp {
    double x;
    double image;
  };
  std::vector<Bp> bps;
  const double end_image = phi(theta[count]);
  double clearance = 1.0;
  for (int k = 0; k < count; ++k) {
    clearance = std::min(clearance, circle_distance(end_image, left[k]));
    clearance = std::min(clearance, circle_distance(end_image, left[k] + len[k]));
  }
  const double squeeze = std::min(len[count - 1], 0.25 * clearance);
  for (int n = -n_gaps; n <= n_gaps; ++n) {
    const Gap& g = gs.gap(n);
    if (n < n_gaps) {
      const Gap& next = gs.gap(n + 1);
      bps.push_back({g.left, next.left});
      bps.push_back({g.right, next.right});
    } else {
      bps.push_back({g.left, end_image});
      bps.push_back({g.right, end_image + squeeze});
    }
  }
  std::sort(bps.begin(), bps.end(), [](const Bp& a, const Bp& b) { return a.x < b.x; });
  std::vector<double> xs;
  std::vector<double> gvals;
  for (const auto& bp : bps) {
    if (bp.x >= 1.0) continue;
    double v = bp.image;
    if (!gvals.empty())
      while (v <= gvals.back()) v += 1.0;
    xs.push_back(bp.x);
    gvals.push_back(v);
  }
  require(gvals.back() < gvals.front() + 1.0, ErrorKind::TooManyGaps,
          "breakpoint images are not cyclically ordered");
  return {CircleLift(std::move(xs), std::move(gvals)), std::move(gs)};
}

/// One-dimensional raster of the circle.
struct CircleRaster {
  int resolution = 0;
  std::vector<std::uint8_t> cells;

  double occupied_fraction() const {
    return static_cast<double>(std::count(cells.begin(), cells.end(), 1)) / resolution;
  }
  double center(int k) const { return (k + 0.5) / resolution; }
  int cell_of(double x) const {
    return std::min(resolution - 1, static_cast<int>(std::floor(frac(x) * resolution)));
  }
};

/// Circle minus the open gaps, sampled at cell centres.
inline CircleRaster nonwandering_raster(const GapSystem& gs, int resolution) {
  require(resolution >= 8, ErrorKind::InvalidArgument, "resolution must be >= 8");
  CircleRaster r{resolution, std::vector<std::uint8_t>(resolution, 1)};
  for (const auto& g : gs.gaps) {
    const int first = static_cast<int>(std::floor(g.left * resolution - 0.5));
    const int last = static_cast<int>(std::ceil(g.right * resolution - 0.5));
    for (int k = first; k <= last; ++k) {
      const int kk = ((k % resolution) + resolution) % resolution;
      const double c = (k + 0.5) / resolution;
      if (c > g.left && c < g.right) r.cells[kk] = 0;
    }
  }
  return r;
}

/// Hausdorff distance, in cells, between a circle raster and the raster of the
/// images of its occupied cell centres under g.
inline double lift_invariance_defect(const CircleRaster& r, const CircleLift& g) {
  CircleRaster image{r.resolution, std::vector<std::uint8_t>(r.resolution, 0)};
  for (int k = 0; k < r.resolution; ++k)
    if (r.cells[k]) image.cells[image.cell_of(g(r.center(k)))] = 1;
  auto directed = [](const CircleRaster& a, const CircleRaster& b) {
    std::vector<int> occ;
    for (int k = 0; k < b.resolution; ++k)
      if (b.cells[k]) occ.push_back(k);
    int worst = 0;
    if (occ.empty()) return b.resolution;
    for (int k = 0; k < a.resolution; ++k) {
      if (!a.cells[k]) continue;
      auto it = std::lower_bound(occ.begin(), occ.end(), k);
      int best = a.resolution;
      for (auto c : {it == occ.end() ? occ.begin() : it, it == occ.begin() ? occ.end() - 1 : it - 1}) {
        int d = std::abs(*c - k);
        best = std::min({best, d, a.resolution - d});
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(r, image), directed(image, r));
}

inline std::string to_csv(const GapSystem& gs) {
  std::ostringstream out;
  out << "n,left,right\n";
  char buf[128];
  for (const auto& g : gs.gaps) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", g.n, g.left, g.right);
    out << buf;
  }
  return out.str();
}

inline std::string to_csv(const CircleLift& g) {
  std::ostringstream out;
  out << "x,Gx\n";
  char buf[128];
  for (std::size_t k = 0; k < g.breakpoints().size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.breakpoints()[k], g.values()[k]);
    out << buf;
  }
  return out.str();
}

inline CircleLift lift_from_csv(std::istream& in) {
  std::string line;
  std::getline(in, line);
  require(line == "x,Gx", ErrorKind::Io, "expected header x,Gx");
  std::vector<double> xs;
  std::vector<double> gs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorKind::Io, "malformed breakpoint row");
    xs.push_back(std::stod(line.substr(0, comma)));
    gs.push_back(std::stod(line.substr(comma + 1)));
  }
  return CircleLift(std::move(xs), std::move(gs));
}

}  // namespace circloids
