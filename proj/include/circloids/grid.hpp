#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"

namespace circloids {

/// Discretization of the annulus T x [y_min, y_max] (or of its x_period-fold
/// cyclic cover). Columns wrap around; rows are truncated at the window.
class GridSpec {
 public:
  GridSpec() = default;

  GridSpec(int resolution, int x_period, double y_min, double y_max)
      : resolution_(resolution), x_period_(x_period), y_min_(y_min), y_max_(y_max) {
    require(resolution >= 8, ErrorKind::InvalidArgument, "resolution must be >= 8");
    require(x_period >= 1, ErrorKind::InvalidArgument, "x_period must be >= 1");
    require(y_min < y_max, ErrorKind::InvalidArgument, "y_min must be below y_max");
    const double lo = y_min * resolution;
    const double hi = y_max * resolution;
    require(std::abs(lo - std::round(lo)) < 1e-9 && std::abs(hi - std::round(hi)) < 1e-9,
            ErrorKind::InvalidArgument, "window endpoints must be multiples of the cell size");
    row_offset_ = static_cast<long>(std::llround(lo));
    height_ = static_cast<int>(std::llround(hi) - row_offset_);
  }

  int resolution() const { return resolution_; }
  int x_period() const { return x_period_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }

  int width() const { return resolution_ * x_period_; }
  int height() const { return height_; }
  std::size_t size() const { return static_cast<std::size_t>(width()) * height_; }
  double cell() const { return 1.0 / resolution_; }

  /// Wrapped column index of an arbitrary integer column.
  int wrap(long i) const {
    const long w = width();
    long r = i % w;
    return static_cast<int>(r < 0 ? r + w : r);
  }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * width() + static_cast<std::size_t>(i);
  }

  double x_of(double column) const { return column / resolution_; }
  double y_of(double row) const { return static_cast<double>(row + row_offset_) / resolution_; }

  Vec2 center(long i, int j) const {
    return {(static_cast<double>(i) + 0.5) / resolution_,
            (static_cast<double>(j + row_offset_) + 0.5) / resolution_};
  }

  /// Unwrapped column containing x.
  long column_of(double x) const { return static_cast<long>(std::floor(x * resolution_)); }

  /// Row containing y, or nullopt when y lies outside the window.
  std::optional<int> row_of(double y) const {
    const long j = static_cast<long>(std::floor(y * resolution_)) - row_offset_;
    if (j < 0 || j >= height_) return std::nullopt;
    return static_cast<int>(j);
  }

  bool operator==(const GridSpec& o) const {
    return resolution_ == o.resolution_ && x_period_ == o.x_period_ &&
           row_offset_ == o.row_offset_ && height_ == o.height_;
  }

 private:
  int resolution_ = 8;
  int x_period_ = 1;
  double y_min_ = 0.0;
  double y_max_ = 1.0;
  long row_offset_ = 0;
  int height_ = 8;
};

struct Cell {
  long i = 0;  // column, possibly unwrapped
  int j = 0;   // row
  bool operator==(const Cell&) const = default;
};

/// A closed subset of the annulus: the union of its occupied closed cells.
class RasterSet {
 public:
  RasterSet() = default;
  explicit RasterSet(GridSpec spec) : spec_(spec), cells_(spec.size(), 0) {}
  RasterSet(GridSpec spec, std::vector<std::uint8_t> mask) : spec_(spec), cells_(std::move(mask)) {
    require(cells_.size() == spec_.size(), ErrorKind::InvalidArgument,
            "mask dimensions do not match grid spec");
    for (auto& c : cells_) c = c ? 1 : 0;
  }

  const GridSpec& spec() const { return spec_; }
  int width() const { return spec_.width(); }
  int height() const { return spec_.height(); }
  bool closed_convention() const { return true; }
  const std::vector<std::uint8_t>& mask() const { return cells_; }

  bool at(long i, int j) const {
    if (j < 0 || j >= height()) return false;
    return cells_[spec_.index(spec_.wrap(i), j)] != 0;
  }
  bool at(Cell c) const { return at(c.i, c.j); }

  void set(long i, int j, bool value = true) {
    if (j < 0 || j >= height()) return;
    cells_[spec_.index(spec_.wrap(i), j)] = value ? 1 : 0;
  }

  /// Occupy the cell containing p; points outside the y-window are ignored.
  void mark(Vec2 p) {
    if (auto j = spec_.row_of(p.y)) set(spec_.column_of(p.x), *j);
  }

  /// Dense sampling of the segment [a, b] (quarter-cell steps).
  void draw_segment(Vec2 a, Vec2 b) {
    const double len = distance(a, b);
    const int steps = std::max(1, static_cast<int>(std::ceil(len * spec_.resolution() * 4.0)));
    for (int k = 0; k <= steps; ++k) mark(a + (b - a) * (static_cast<double>(k) / steps));
  }

  void draw_polyline(const std::vector<Vec2>& pts) {
    for (std::size_t k = 1; k < pts.size(); ++k) draw_segment(pts[k - 1], pts[k]);
  }

  /// Rasterize a parametrized curve, subdividing until consecutive samples are
  /// a quarter cell apart.
  void draw_curve(const std::function<Vec2(double)>& curve, double t0, double t1) {
    const double step_limit = 0.25 * spec_.cell();
    Vec2 prev = curve(t0);
    mark(prev);
    double t = t0;
    double dt = (t1 - t0) / 64.0;
    while (t < t1) {
      double next_t = std::min(t1, t + dt);
      Vec2 next = curve(next_t);
      while (distance(next, prev) > step_limit && next_t - t > 1e-14) {
        next_t = t + 0.5 * (next_t - t);
        next = curve(next_t);
      }
      mark(next);
      dt = 2.0 * (next_t - t);
      t = next_t;
      prev = next;
    }
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto c : cells_) n += c;
    return n;
  }
  bool empty() const { return count() == 0; }

  std::vector<Cell> cells() const {
    std::vector<Cell> out;
    for (int j = 0; j < height(); ++j)
      for (int i = 0; i < width(); ++i)
        if (cells_[spec_.index(i, j)]) out.push_back({i, j});
    return out;
  }

  RasterSet complement() const {
    RasterSet r(spec_);
    for (std::size_t k = 0; k < cells_.size(); ++k) r.cells_[k] = cells_[k] ? 0 : 1;
    return r;
  }

  RasterSet operator|(const RasterSet& o) const { return combine(o, [](int a, int b) { return a | b; }); }
  RasterSet operator&(const RasterSet& o) const { return combine(o, [](int a, int b) { return a & b; }); }
  RasterSet operator-(const RasterSet& o) const { return combine(o, [](int a, int b) { return a & (b ^ 1); }); }

  bool subset_of(const RasterSet& o) const {
    check_same(o);
    for (std::size_t k = 0; k < cells_.size(); ++k)
      if (cells_[k] && !o.cells_[k]) return false;
    return true;
  }

  bool intersects(const RasterSet& o) const {
    check_same(o);
    for (std::size_t k = 0; k < cells_.size(); ++k)
      if (cells_[k] && o.cells_[k]) return true;
    return false;
  }

  /// Translate by whole columns (wrapping).
  RasterSet shifted(long columns) const {
    RasterSet r(spec_);
    for (int j = 0; j < height(); ++j)
      for (int i = 0; i < width(); ++i)
        if (cells_[spec_.index(i, j)]) r.set(i + columns, j);
    return r;
  }

  /// 8-neighbourhood dilation by `radius` cells (the grid closure operator).
  RasterSet dilated(int radius = 1) const {
    RasterSet r = *this;
    for (int step = 0; step < radius; ++step) {
      RasterSet next(spec_);
      for (int j = 0; j < height(); ++j)
        for (int i = 0; i < width(); ++i) {
          if (!r.cells_[spec_.index(i, j)]) continue;
          for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) next.set(i + di, j + dj);
        }
      r = std::move(next);
    }
    return r;
  }

  /// True when the mask is invariant under a shift by one fundamental period.
  bool period_invariant() const {
    const int r = spec_.resolution();
    for (int j = 0; j < height(); ++j)
      for (int i = 0; i < width(); ++i)
        if (at(i, j) != at(i + r, j)) return false;
    return true;
  }

  /// Smallest distance (in rows) between an occupied cell and either y-margin,
  /// or -1 for the empty set.
  int margin_clearance() const {
    int best = -1;
    for (int j = 0; j < height(); ++j)
      for (int i = 0; i < width(); ++i)
        if (cells_[spec_.index(i, j)]) {
          const int d = std::min(j, height() - 1 - j);
          if (best < 0 || d < best) best = d;
        }
    return best;
  }

  bool operator==(const RasterSet& o) const { return spec_ == o.spec_ && cells_ == o.cells_; }

 private:
  void check_same(const RasterSet& o) const {
    require(spec_ == o.spec_, ErrorKind::InvalidArgument, "rasters live on different grids");
  }

  template <class Op>
  RasterSet combine(const RasterSet& o, Op op) const {
    check_same(o);
    RasterSet r(spec_);
    for (std::size_t k = 0; k < cells_.size(); ++k)
      r.cells_[k] = static_cast<std::uint8_t>(op(cells_[k], o.cells_[k]));
    return r;
  }

  GridSpec spec_;
  std::vector<std::uint8_t> cells_;
};

/// Raster of a horizontal line y = const (one row).
inline RasterSet row_raster(const GridSpec& spec, double y) {
  RasterSet r(spec);
  auto j = spec.row_of(y);
  require(j.has_value(), ErrorKind::WindowTooSmall, "row lies outside the window");
  for (int i = 0; i < spec.width(); ++i) r.set(i, *j);
  return r;
}

}  // namespace circloids
