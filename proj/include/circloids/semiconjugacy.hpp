#pragma once

// Semiconjugacies to irrational rotations built from a wandering family of
// essential continua: H(z) = sup{n rho + m | z in U+(C_{n,m})}.
//
// Families live in a frame where the continua are horizontal: the first
// coordinate is angular (period 1) and the family translation is
// T(u, v) = (u, v + 1). Vertical families are brought here with swap_axes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "grid_topology.hpp"
#include "torus_maps.hpp"

namespace circloids {

/// C_{n,m} = T^m(F^n(C_{0,0})) for |n| <= N, |m| <= M. Each C_{n,0} is
/// rasterized in its own narrow window on first use.
class CircloidOrbitFamily {
 public:
  struct Member {
    RasterSet raster;  // C_{n,0}
    RasterSet upper;   // U+(C_{n,0}) inside the member's window
    long row_lo = 0;   // global rows (v * resolution) spanned by the raster
    long row_hi = 0;
  };

  CircloidOrbitFamily(RasterSet base, LiftedPlaneMap f, double rho, int n_range, int m_range, int margin_cells = 8)
      : base_(std::move(base)), f_(std::move(f)), rho_(rho), n_(n_range), m_(m_range), margin_(margin_cells) {
    require(!base_.empty(), ErrorKind::EmptySet, "base continuum is empty");
    require(base_.spec().x_period() == 1, ErrorKind::InvalidArgument, "family rasters live on the annulus itself");
    require(n_ >= 1 && m_ >= 1, ErrorKind::InvalidArgument, "index ranges must be positive");
    require(margin_ >= 3, ErrorKind::InvalidArgument, "member windows need at least 3 margin cells");
    require(n_ <= 1 || f_.has_inverse(), ErrorKind::InvalidArgument, "negative iterates need an inverse rule");
  }

  double rho() const { return rho_; }
  int n_range() const { return n_; }
  int m_range() const { return m_; }
  int resolution() const { return base_.spec().resolution(); }
  const LiftedPlaneMap& map() const { return f_; }

  const Member& member(int n) const {
    require(std::abs(n) <= n_, ErrorKind::InvalidArgument, "iterate outside the family range");
    {
      std::shared_lock lock(mutex_);
      auto it = cache_.find(n);
      if (it != cache_.end()) return *it->second;
    }
    auto built = std::make_unique<Member>(build(n));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = cache_.emplace(n, std::move(built));
    return *it->second;
  }

  /// C_{n,m} in a window translated by m.
  RasterSet raster(int n, int m) const {
    const RasterSet& r = member(n).raster;
    const GridSpec& s = r.spec();
    return RasterSet(GridSpec(s.resolution(), 1, s.y_min() + m, s.y_max() + m), r.mask());
  }

  /// Whether z lies in U+(C_{n,m}).
  bool in_upper(int n, int m, Vec2 z) const {
    const Member& mem = member(n);
    const GridSpec& s = mem.upper.spec();
    const double v = z.y - m;
    if (v >= s.y_max()) return true;
    if (v < s.y_min()) return false;
    const auto j = s.row_of(v);
    if (!j) return v >= s.y_max();
    return mem.upper.at(s.column_of(z.x), *j);
  }

 private:
  /// Subsampled base cells pushed through F^n. Iteration resumes from the
  /// furthest iterate computed so far on the same side, which gives the same
  /// floating-point result as starting over.
  std::vector<Vec2> points(int n) const {
    const int side = n >= 0 ? 1 : -1;
    int start = 0;
    std::vector<Vec2> pts;
    {
      std::lock_guard lock(frontier_mutex_);
      auto it = frontier_.find(side);
      if (it != frontier_.end() && std::abs(it->second.first) <= std::abs(n)) {
        start = it->second.first;
        pts = it->second.second;
      }
    }
    if (start == 0) {
      const GridSpec& bs = base_.spec();
      const int res = bs.resolution();
      for (const auto& c : base_.cells())
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            pts.push_back({(c.i + (a + 0.5) / 3.0) / res, bs.y_of(c.j) + (b + 0.5) / 3.0 / res});
    }
    for (auto& z : pts) {
      for (int k = std::abs(start); k < std::abs(n); ++k) z = n > 0 ? f_(z) : f_.inverse(z);
      require(std::isfinite(z.x) && std::isfinite(z.y), ErrorKind::NonFinite, "family member left the plane");
    }
    std::lock_guard lock(frontier_mutex_);
    auto& slot = frontier_[side];
    if (std::abs(n) >= std::abs(slot.first)) slot = {n, pts};
    return pts;
  }

  Member build(int n) const {
    const int res = base_.spec().resolution();
    const std::vector<Vec2> pts = points(n);
    double lo = pts.front().y;
    double hi = lo;
    for (const auto& p : pts) {
      lo = std::min(lo, p.y);
      hi = std::max(hi, p.y);
    }
    const long r_lo = static_cast<long>(std::floor(lo * res)) - margin_;
    const long r_hi = static_cast<long>(std::floor(hi * res)) + margin_ + 1;
    const GridSpec spec(res, 1, static_cast<double>(r_lo) / res, static_cast<double>(r_hi) / res);
    Member mem{RasterSet(spec), RasterSet(spec), 0, 0};
    for (const auto& p : pts) mem.raster.mark(p);
    mem.upper = upper_component(mem.raster);
    mem.row_lo = static_cast<long>(std::floor(lo * res));
    mem.row_hi = static_cast<long>(std::floor(hi * res));
    return mem;
  }

  RasterSet base_;
  LiftedPlaneMap f_;
  double rho_;
  int n_;
  int m_;
  int margin_;
  mutable std::shared_mutex mutex_;
  mutable std::map<int, std::unique_ptr<Member>> cache_;
  mutable std::mutex frontier_mutex_;
  mutable std::map<int, std::pair<int, std::vector<Vec2>>> frontier_;
};

/// Largest gap of {n rho mod 1 : |n| <= N} on the circle.
inline double orbit_mesh(double rho, int n_range) {
  std::vector<double> pts;
  for (int n = -n_range; n <= n_range; ++n) pts.push_back(frac(n * rho));
  std::sort(pts.begin(), pts.end());
  double gap = pts.front() + 1.0 - pts.back();
  for (std::size_t k = 1; k < pts.size(); ++k) gap = std::max(gap, pts[k] - pts[k - 1]);
  return gap;
}

struct CombinatoricsReport {
  bool ok = false;
  double rho_fit = 0.0;
};

/// Radial arcs of the members must be pairwise disjoint mod 1 and cyclically
/// ordered like {n rho mod 1}.
inline CombinatoricsReport check_irrational_combinatorics(const CircloidOrbitFamily& fam) {
  const int N = fam.n_range();
  const long res = fam.resolution();
  const int count = 2 * N + 1;
  std::vector<long> start(count);
  std::vector<long> len(count);
  for (int k = 0; k < count; ++k) {
    const int n = k <= N ? k : N - k;  // 0, 1, ..., N, -1, ..., -N
    const auto& m = fam.member(n);
    require(m.row_hi - m.row_lo + 1 < res, ErrorKind::Overlap, "member wraps the whole circle radially");
    start[n + N] = ((m.row_lo % res) + res) % res;
    len[n + N] = m.row_hi - m.row_lo + 1;
  }
  std::vector<int> by_arc(count);
  for (int k = 0; k < count; ++k) by_arc[k] = k;
  std::sort(by_arc.begin(), by_arc.end(), [&](int a, int b) { return start[a] < start[b]; });
  for (int k = 0; k < count; ++k) {
    const int a = by_arc[k];
    const int b = by_arc[(k + 1) % count];
    const long gap = ((start[b] - start[a]) % res + res) % res;
    require(gap >= len[a], ErrorKind::Overlap,
            "members " + std::to_string(a - N) + " and " + std::to_string(b - N) + " share cells");
  }

  // Positions relative to member 0.
  std::vector<double> arc_pos(count);
  std::vector<double> rot_pos(count);
  for (int k = 0; k < count; ++k) {
    arc_pos[k] = static_cast<double>(((start[k] - start[N]) % res + res) % res);
    rot_pos[k] = frac((k - N) * fam.rho());
  }
  std::vector<int> by_rot(count);
  for (int k = 0; k < count; ++k) by_rot[k] = k;
  std::sort(by_rot.begin(), by_rot.end(), [&](int a, int b) { return rot_pos[a] < rot_pos[b]; });
  std::sort(by_arc.begin(), by_arc.end(), [&](int a, int b) { return arc_pos[a] < arc_pos[b]; });
  if (by_arc != by_rot) {
    auto orient = [](const std::vector<double>& p, int a, int b, int c) {
      return frac(p[b] - p[a] + 1e-15) < frac(p[c] - p[a] + 1e-15);
    };
    for (int a = 0; a < count; ++a)
      for (int b = 0; b < count; ++b)
        for (int c = 0; c < count; ++c) {
          if (a == b || b == c || a == c) continue;
          std::vector<double> ap(arc_pos);
          for (auto& x : ap) x /= static_cast<double>(res);
          if (orient(ap, a, b, c) != orient(rot_pos, a, b, c))
            throw Error(ErrorKind::OrderViolation, "cyclic order differs on members " + std::to_string(a - N) + ", " +
                                                       std::to_string(b - N) + ", " + std::to_string(c - N));
        }
    throw Error(ErrorKind::OrderViolation, "cyclic order of members differs from the rotation order");
  }
  return {true, fam.rho()};
}

/// Evaluation rule for a lift of a semiconjugacy to R_rho.
struct SemiconjugacyLift {
  std::function<double(Vec2)> eval;
  int n_range = 0;
  int m_range = 0;
  double epsilon = 0.0;
  double operator()(Vec2 z) const { return eval(z); }
};

/// H(z) = max{n rho + m | z in U+(C_{n,m}), |n| <= N, |m| <= M}.
inline SemiconjugacyLift build_semiconjugacy(std::shared_ptr<const CircloidOrbitFamily> fam) {
  check_irrational_combinatorics(*fam);
  const int N = fam->n_range();
  const int M = fam->m_range();
  for (int n = -N; n <= N; ++n) fam->member(n);
  SemiconjugacyLift h;
  h.n_range = N;
  h.m_range = M;
  h.epsilon = orbit_mesh(fam->rho(), N);
  h.eval = [fam, N, M](Vec2 z) {
    double best = -INFINITY;
    for (int n = -N; n <= N; ++n) {
      const auto& s = fam->member(n).upper.spec();
      // z - (0, m) is above the window for every m <= m0.
      long m = static_cast<long>(std::floor(z.y - s.y_max()));
      m = std::clamp<long>(m, -M - 1, M);
      while (m + 1 <= M && fam->in_upper(n, static_cast<int>(m + 1), z)) ++m;
      if (m < -M) continue;
      best = std::max(best, n * fam->rho() + static_cast<double>(m));
    }
    return best;
  };
  return h;
}

struct DefectReport {
  double max_defect = 0.0;
  double epsilon = 0.0;
  std::size_t samples = 0;
};

inline DefectReport check_semiconjugacy(const SemiconjugacyLift& h, const LiftedPlaneMap& f, double rho,
                                        const std::vector<Vec2>& samples) {
  DefectReport rep{0.0, h.epsilon, samples.size()};
  for (const auto& z : samples) rep.max_defect = std::max(rep.max_defect, std::abs(h(f(z)) - h(z) - rho));
  return rep;
}

inline nlohmann::json to_json(const DefectReport& r) {
  return {{"max_defect", r.max_defect}, {"epsilon", r.epsilon}, {"samples", r.samples}};
}

/// inf over c of sup over samples of the circle distance between h1 and h2 + c.
inline double modulo_rotation_distance(const SemiconjugacyLift& h1, const SemiconjugacyLift& h2,
                                       const std::vector<Vec2>& samples, int scan_steps = 4096) {
  require(!samples.empty(), ErrorKind::InvalidArgument, "need samples");
  std::vector<double> diff;
  diff.reserve(samples.size());
  for (const auto& z : samples) diff.push_back(h1(z) - h2(z));
  double best = INFINITY;
  for (int k = 0; k < scan_steps; ++k) {
    const double c = static_cast<double>(k) / scan_steps;
    double worst = 0.0;
    for (double d : diff) {
      worst = std::max(worst, circle_distance(d, c));
      if (worst >= best) break;
    }
    best = std::min(best, worst);
  }
  return best;
}

inline std::string sample_csv(const SemiconjugacyLift& h, const std::vector<Vec2>& pts) {
  std::ostringstream out;
  out << "x,y,H\n";
  char buf[160];
  for (const auto& z : pts) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", z.x, z.y, h(z));
    out << buf;
  }
  return out.str();
}

/// Cells whose corner values of h straddle xi.
inline RasterSet fibre_raster(const std::function<double(Vec2)>& h, const GridSpec& spec, double xi) {
  const int w = spec.width();
  const int ht = spec.height();
  const double step = spec.cell();
  std::vector<double> corner(static_cast<std::size_t>(w + 1) * (ht + 1));
  for (int j = 0; j <= ht; ++j)
    for (int i = 0; i <= w; ++i)
      corner[static_cast<std::size_t>(j) * (w + 1) + i] = h({i * step, spec.y_of(j)});
  RasterSet r(spec);
  for (int j = 0; j < ht; ++j)
    for (int i = 0; i < w; ++i) {
      double lo = INFINITY;
      double hi = -INFINITY;
      for (int b = 0; b <= 1; ++b)
        for (int a = 0; a <= 1; ++a) {
          const double v = corner[static_cast<std::size_t>(j + b) * (w + 1) + i + a];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      if (lo <= xi && xi <= hi) r.set(i, j);
    }
  return r;
}

/// Cells of the fibre adjacent to its lower complement component.
inline RasterSet lower_boundary(const RasterSet& fibre) {
  return fibre & lower_component(fibre).dilated();
}

}  // namespace circloids
