#pragma once

// Lifted thin annular continua on a K-fold cyclic cover: nu, compact
// generators, spikes and the generated / infinite-spike classification.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "grid_topology.hpp"
#include "torus_maps.hpp"

namespace circloids {

/// A period-invariant horizontal strip on a cover with at least 3 periods.
class StripRaster {
 public:
  explicit StripRaster(RasterSet r) : r_(std::move(r)) {
    require(r_.spec().x_period() >= 3, ErrorKind::InvalidArgument, "strip needs a cover with at least 3 periods");
    require(!r_.empty(), ErrorKind::EmptySet, "strip is empty");
    require(r_.period_invariant(), ErrorKind::InvalidArgument, "strip is not invariant under the unit shift");
    detail::check_window(r_);
    const auto rep = is_essential_annular_continuum(r_);
    require(rep.essential, ErrorKind::NotEssential, "strip does not separate top from bottom");
  }

  const RasterSet& raster() const { return r_; }
  const GridSpec& spec() const { return r_.spec(); }
  int periods() const { return r_.spec().x_period(); }
  int resolution() const { return r_.spec().resolution(); }

 private:
  RasterSet r_;
};

namespace detail {

inline long long cell_key(long i, int j) { return static_cast<long long>(i) * (1LL << 24) + j; }

using CellSet = std::unordered_set<long long>;

inline CellSet cell_set(const std::vector<Cell>& cells) {
  CellSet s;
  s.reserve(cells.size() * 2);
  for (const auto& c : cells) s.insert(cell_key(c.i, c.j));
  return s;
}

/// Whether b shifted by `shift` columns shares or touches a cell of a.
inline bool touches(const CellSet& a, const std::vector<Cell>& b, long shift) {
  for (const auto& c : b)
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di)
        if (a.count(cell_key(c.i + shift + di, c.j + dj))) return true;
  return false;
}

/// Rewrites a bounded wrapped raster in unwrapped columns by cutting the cover
/// at its longest run of empty columns.
inline std::vector<Cell> unwrap_cells(const RasterSet& b) {
  const int w = b.width();
  std::vector<std::uint8_t> used(w, 0);
  for (const auto& c : b.cells()) used[c.i] = 1;
  int best_len = -1;
  int best_end = 0;  // first occupied column after the longest empty run
  for (int start = 0; start < w; ++start) {
    if (used[start] || used[(start + w - 1) % w] == 0) continue;
    // start is the first column of an empty run
    int len = 0;
    while (len < w && !used[(start + len) % w]) ++len;
    if (len > best_len) {
      best_len = len;
      best_end = (start + len) % w;
    }
  }
  std::vector<Cell> out;
  for (const auto& c : b.cells()) {
    long i = c.i;
    if (best_len > 0 && i < best_end) i += w;
    out.push_back({i, c.j});
  }
  return out;
}

inline double cells_diameter(const std::vector<Cell>& cells, double h, long row_offset) {
  std::vector<Vec2> corners;
  corners.reserve(cells.size() * 4);
  for (const auto& c : cells)
    for (int a = 0; a <= 1; ++a)
      for (int b = 0; b <= 1; ++b)
        corners.push_back({(static_cast<double>(c.i) + a) * h, (static_cast<double>(c.j + row_offset) + b) * h});
  const auto hull = convex_hull(corners);
  double d = 0.0;
  for (std::size_t a = 0; a < hull.size(); ++a)
    for (std::size_t b = a + 1; b < hull.size(); ++b) d = std::max(d, distance(hull[a], hull[b]));
  return d;
}

struct UnwrappedGroup {
  std::vector<Cell> cells;  // unwrapped columns
  long min_col = 0;
  long max_col = 0;
  bool wraps = false;  // some cell is reachable at two different lifts
};

/// Groups of occupied cells linked by chains with steps of Chebyshev length at
/// most `radius`, traced in unwrapped columns.
inline std::vector<UnwrappedGroup> unwrapped_groups(const RasterSet& s, int radius) {
  const GridSpec& spec = s.spec();
  const long sentinel = std::numeric_limits<long>::min();
  std::vector<long> lift(spec.size(), sentinel);
  std::vector<UnwrappedGroup> out;
  std::vector<Cell> stack;
  for (int j = 0; j < spec.height(); ++j)
    for (int i = 0; i < spec.width(); ++i) {
      if (!s.at(i, j) || lift[spec.index(i, j)] != sentinel) continue;
      UnwrappedGroup g;
      g.min_col = g.max_col = i;
      lift[spec.index(i, j)] = i;
      stack.push_back({i, j});
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        g.cells.push_back(c);
        g.min_col = std::min(g.min_col, c.i);
        g.max_col = std::max(g.max_col, c.i);
        for (int dj = -radius; dj <= radius; ++dj)
          for (int di = -radius; di <= radius; ++di) {
            const long ni = c.i + di;
            const int nj = c.j + dj;
            if (!s.at(ni, nj)) continue;
            long& seen = lift[spec.index(spec.wrap(ni), nj)];
            if (seen == sentinel) {
              seen = ni;
              stack.push_back({ni, nj});
            } else if (seen != ni) {
              g.wraps = true;
            }
          }
      }
      out.push_back(std::move(g));
    }
  return out;
}

}  // namespace detail

/// Largest n >= 1 such that b and its shift by n periods share or touch a
/// cell; 0 when none does. Cells are in unwrapped columns.
inline int nu(const std::vector<Cell>& cells, int resolution) {
  require(!cells.empty(), ErrorKind::EmptySet, "nu of an empty set");
  long lo = cells.front().i;
  long hi = lo;
  for (const auto& c : cells) {
    lo = std::min(lo, c.i);
    hi = std::max(hi, c.i);
  }
  const auto set = detail::cell_set(cells);
  int best = 0;
  for (int n = 1; static_cast<long>(n - 1) * resolution <= hi - lo + 1; ++n)
    if (detail::touches(set, cells, static_cast<long>(n) * resolution)) best = n;
  return best;
}

/// nu of a bounded raster; it must leave some column of the cover empty.
inline int nu(const RasterSet& b) {
  const auto cells = detail::unwrap_cells(b);
  return nu(cells, b.spec().resolution());
}

struct GeneratorReport {
  bool found = false;
  RasterSet generator;            // wrapped onto the cover
  std::vector<Cell> cells;        // unwrapped columns
  double diameter = 0.0;          // real units, closed cells
  int nu = 0;
  double width_tried = 0.0;       // width at success, or largest width tried
  long offset = 0;                // first column of the window
};

/// Scans windows of width 1, 1.5, ..., max_width periods at every column
/// offset within one period; the first connected candidate wins. Failure is
/// inconclusive.
inline GeneratorReport find_generator(const StripRaster& s, double max_width) {
  require(max_width >= 1.0, ErrorKind::InvalidArgument, "max_width must be at least one period");
  const RasterSet& r = s.raster();
  const GridSpec& spec = s.spec();
  const int res = spec.resolution();
  const int height = spec.height();
  const long cover = spec.width();

  std::vector<std::vector<int>> column_rows(cover);
  for (int j = 0; j < height; ++j)
    for (int i = 0; i < cover; ++i)
      if (r.at(i, j)) column_rows[i].push_back(j);

  GeneratorReport rep;
  std::vector<int> stamp;
  int stamp_id = 0;
  std::vector<Cell> stack;
  std::vector<Cell> visited;

  for (int step = 0;; ++step) {
    const double w = 1.0 + 0.5 * step;
    if (w > max_width + 1e-9) break;
    const long cols = std::lround(w * res);
    if (cols > cover) break;
    rep.width_tried = w;
    stamp.assign(static_cast<std::size_t>(cols) * height, 0);
    stamp_id = 0;
    for (long o = 0; o < res; ++o) {
      std::size_t total = 0;
      long first_col = -1;
      for (long c = 0; c < cols; ++c) {
        const auto& rows = column_rows[spec.wrap(o + c)];
        total += rows.size();
        if (first_col < 0 && !rows.empty()) first_col = c;
      }
      if (total == 0) continue;
      ++stamp_id;
      visited.clear();
      const int first_row = column_rows[spec.wrap(o + first_col)].front();
      stamp[static_cast<std::size_t>(first_row) * cols + first_col] = stamp_id;
      stack.push_back({first_col, first_row});
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        visited.push_back(c);
        for (int dj = -1; dj <= 1; ++dj)
          for (int di = -1; di <= 1; ++di) {
            const long ni = c.i + di;
            const int nj = c.j + dj;
            if (ni < 0 || ni >= cols || nj < 0 || nj >= height) continue;
            int& st = stamp[static_cast<std::size_t>(nj) * cols + ni];
            if (st == stamp_id || !r.at(o + ni, nj)) continue;
            st = stamp_id;
            stack.push_back({ni, nj});
          }
      }
      if (visited.size() != total) continue;

      rep.found = true;
      rep.offset = o;
      rep.generator = RasterSet(spec);
      rep.cells.clear();
      for (const auto& c : visited) {
        rep.cells.push_back({c.i + o, c.j});
        rep.generator.set(c.i + o, c.j);
      }
      std::sort(rep.cells.begin(), rep.cells.end(),
                [](const Cell& a, const Cell& b) { return a.j < b.j || (a.j == b.j && a.i < b.i); });
      const long row_offset = std::lround(spec.y_min() * res);
      rep.diameter = detail::cells_diameter(rep.cells, spec.cell(), row_offset);
      rep.nu = nu(rep.cells, res);
      return rep;
    }
  }
  return rep;
}

/// Whether the generator shares or touches a cell with its unit translate.
inline bool adjacent_generator_check(const GeneratorReport& g) {
  require(g.found, ErrorKind::InvalidArgument, "no generator to check");
  return detail::touches(detail::cell_set(g.cells), g.cells, g.generator.spec().resolution());
}

/// Cells (unwrapped columns) hit by images of the corners and centre of every
/// cell. Image points outside the window are dropped.
inline std::vector<Cell> image_cells(const LiftedPlaneMap& f, const std::vector<Cell>& cells, const GridSpec& spec) {
  const double h = spec.cell();
  const long row_offset = std::lround(spec.y_min() * spec.resolution());
  detail::CellSet seen;
  std::vector<Cell> out;
  for (const auto& c : cells) {
    const double x0 = static_cast<double>(c.i) * h;
    const double y0 = static_cast<double>(c.j + row_offset) * h;
    for (const Vec2 p : {Vec2{x0 + 0.5 * h, y0 + 0.5 * h}, Vec2{x0, y0}, Vec2{x0 + h, y0}, Vec2{x0, y0 + h},
                         Vec2{x0 + h, y0 + h}}) {
      const Vec2 q = f(p);
      const auto j = spec.row_of(q.y);
      if (!j) continue;
      const long i = spec.column_of(q.x);
      if (seen.insert(detail::cell_key(i, *j)).second) out.push_back({i, *j});
    }
  }
  return out;
}

/// Number of integer shifts of the generator that share or touch a cell of the
/// image (both in unwrapped columns).
inline int translate_intersection_count(const std::vector<Cell>& image, const GeneratorReport& g2) {
  require(!image.empty(), ErrorKind::EmptySet, "image is empty");
  require(g2.found && !g2.cells.empty(), ErrorKind::InvalidArgument, "no generator");
  const long res = g2.generator.spec().resolution();
  long ilo = image.front().i, ihi = ilo, glo = g2.cells.front().i, ghi = glo;
  for (const auto& c : image) {
    ilo = std::min(ilo, c.i);
    ihi = std::max(ihi, c.i);
  }
  for (const auto& c : g2.cells) {
    glo = std::min(glo, c.i);
    ghi = std::max(ghi, c.i);
  }
  const auto image_set = detail::cell_set(image);
  const long n_lo = static_cast<long>(std::floor(static_cast<double>(ilo - ghi - 1) / res)) - 1;
  const long n_hi = static_cast<long>(std::ceil(static_cast<double>(ihi - glo + 1) / res)) + 1;
  int count = 0;
  for (long n = n_lo; n <= n_hi; ++n)
    if (detail::touches(image_set, g2.cells, n * res)) ++count;
  return count;
}

struct Spike {
  std::vector<Cell> cells;  // unwrapped columns
  double width = 0.0;       // horizontal extent h(S), real units
  bool wraps = false;
  bool possibly_infinite = false;
};

struct SpikeReport {
  std::vector<Spike> spikes;    // 8-components of the strip minus its core
  std::vector<Spike> families;  // spikes joined across one-cell gaps
  double h_sup = 0.0;

  bool any_infinite() const {
    auto inf = [](const Spike& s) { return s.possibly_infinite; };
    return std::any_of(spikes.begin(), spikes.end(), inf) || std::any_of(families.begin(), families.end(), inf);
  }
};

namespace detail {
inline std::vector<Spike> to_spikes(const RasterSet& rest, int radius) {
  const GridSpec& spec = rest.spec();
  const double h = spec.cell();
  const double cover = spec.x_period();
  std::vector<Spike> out;
  for (auto& g : unwrapped_groups(rest, radius)) {
    Spike sp;
    sp.wraps = g.wraps;
    sp.width = g.wraps ? cover : static_cast<double>(g.max_col - g.min_col + 1) * h;
    sp.possibly_infinite = g.wraps || sp.width >= cover - 2.0 * h;
    sp.cells = std::move(g.cells);
    out.push_back(std::move(sp));
  }
  return out;
}
}  // namespace detail

inline SpikeReport spikes(const StripRaster& s) {
  const RasterSet core = core_circloid(s.raster());
  const RasterSet rest = s.raster() - core;
  SpikeReport rep;
  rep.spikes = detail::to_spikes(rest, 1);
  rep.families = detail::to_spikes(rest, 2);
  for (const auto& sp : rep.spikes) rep.h_sup = std::max(rep.h_sup, sp.width);
  return rep;
}

enum class Classification {
  CompactlyGenerated,
  CoreGeneratedInfiniteSpike,
  CoreNotGenerated,  // no generator found for the core; inconclusive
  Inconclusive,
};

inline std::string to_string(Classification c) {
  switch (c) {
    case Classification::CompactlyGenerated: return "CompactlyGenerated";
    case Classification::CoreGeneratedInfiniteSpike: return "CoreGeneratedInfiniteSpike";
    case Classification::CoreNotGenerated: return "CoreNotGenerated?";
    case Classification::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

struct StripAnalysis {
  Classification kind = Classification::Inconclusive;
  GeneratorReport strip_generator;
  GeneratorReport core_generator;
  SpikeReport spike_report;
  bool infinite_spike = false;
};

inline StripAnalysis classify(const StripRaster& s, double max_width) {
  require(is_thin(s.raster()), ErrorKind::NotThin, "classification needs a thin strip");
  StripAnalysis a;
  a.spike_report = spikes(s);
  a.infinite_spike = a.spike_report.any_infinite();
  a.strip_generator = find_generator(s, max_width);
  a.core_generator = find_generator(StripRaster(core_circloid(s.raster())), max_width);
  if (a.strip_generator.found) {
    require(a.core_generator.found, ErrorKind::PostconditionViolated,
            "strip is generated but no generator was found for its core");
    a.kind = Classification::CompactlyGenerated;
  } else if (!a.core_generator.found) {
    a.kind = Classification::CoreNotGenerated;
  } else if (a.infinite_spike) {
    a.kind = Classification::CoreGeneratedInfiniteSpike;
  } else {
    a.kind = Classification::Inconclusive;
  }
  return a;
}

inline nlohmann::json to_json(const GeneratorReport& g) {
  return {{"found", g.found}, {"diameter", g.diameter}, {"nu", g.nu}, {"width_tried", g.width_tried}};
}

inline nlohmann::json to_json(const SpikeReport& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : r.spikes) arr.push_back({{"width", s.width}, {"possibly_infinite", s.possibly_infinite}});
  return arr;
}

}  // namespace circloids
