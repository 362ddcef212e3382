#pragma once

// Digital topology on periodic grids. Sets use 8-adjacency, complements use
// 4-adjacency; "unbounded" means reaching the top or bottom row of the window.

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <vector>

#include "grid.hpp"

namespace circloids {

enum class Adjacency { Four = 4, Eight = 8 };

struct ComponentLabeling {
  GridSpec spec;
  std::vector<int> labels;           // 0 = not in the queried set, else 1..count
  std::vector<bool> touches_top;     // indexed by label - 1
  std::vector<bool> touches_bottom;  // indexed by label - 1
  int count = 0;

  int at(long i, int j) const { return labels[spec.index(spec.wrap(i), j)]; }

  RasterSet component(int label) const {
    RasterSet r(spec);
    for (int j = 0; j < spec.height(); ++j)
      for (int i = 0; i < spec.width(); ++i)
        if (labels[spec.index(i, j)] == label) r.set(i, j);
    return r;
  }
};

inline ComponentLabeling connected_components(const RasterSet& s, Adjacency adjacency) {
  const GridSpec& spec = s.spec();
  const int w = spec.width();
  const int h = spec.height();
  ComponentLabeling out{spec, std::vector<int>(spec.size(), 0), {}, {}, 0};
  const bool eight = adjacency == Adjacency::Eight;
  std::vector<std::size_t> stack;
  for (int j0 = 0; j0 < h; ++j0) {
    for (int i0 = 0; i0 < w; ++i0) {
      const std::size_t start = spec.index(i0, j0);
      if (!s.mask()[start] || out.labels[start]) continue;
      const int label = ++out.count;
      bool top = false;
      bool bottom = false;
      out.labels[start] = label;
      stack.assign(1, start);
      while (!stack.empty()) {
        const std::size_t k = stack.back();
        stack.pop_back();
        const int i = static_cast<int>(k % w);
        const int j = static_cast<int>(k / w);
        top = top || j == h - 1;
        bottom = bottom || j == 0;
        for (int dj = -1; dj <= 1; ++dj) {
          const int nj = j + dj;
          if (nj < 0 || nj >= h) continue;
          for (int di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            if (!eight && di != 0 && dj != 0) continue;
            const std::size_t nk = spec.index(spec.wrap(i + di), nj);
            if (s.mask()[nk] && !out.labels[nk]) {
              out.labels[nk] = label;
              stack.push_back(nk);
            }
          }
        }
      }
      out.touches_top.push_back(top);
      out.touches_bottom.push_back(bottom);
    }
  }
  return out;
}

inline ComponentLabeling complement_components(const RasterSet& s) {
  return connected_components(s.complement(), Adjacency::Four);
}

namespace detail {

inline void check_window(const RasterSet& s) {
  const int clearance = s.margin_clearance();
  require(clearance < 0 || clearance >= 2, ErrorKind::WindowTooSmall,
          "set comes within 2 cells of the y-window margin");
}

/// The unique 4-component of `free_cells` touching the given margin.
inline RasterSet margin_component(const RasterSet& free_cells, bool top) {
  const auto lab = connected_components(free_cells, Adjacency::Four);
  int found = 0;
  for (int l = 1; l <= lab.count; ++l) {
    const bool touches = top ? lab.touches_top[l - 1] : lab.touches_bottom[l - 1];
    if (!touches) continue;
    require(found == 0, ErrorKind::WindowTooSmall,
            "several complement components touch the same margin");
    found = l;
  }
  require(found != 0, ErrorKind::WindowTooSmall, "no complement component touches the margin");
  const bool other = top ? lab.touches_bottom[found - 1] : lab.touches_top[found - 1];
  require(!other, ErrorKind::WindowTooSmall, "set does not separate the window");
  return lab.component(found);
}

inline bool has_thick_block(const RasterSet& s) {
  for (int j = 1; j + 1 < s.height(); ++j)
    for (int i = 0; i < s.width(); ++i) {
      bool full = true;
      for (int dj = -1; dj <= 1 && full; ++dj)
        for (int di = -1; di <= 1 && full; ++di) full = s.at(i + di, j + dj);
      if (full) return true;
    }
  return false;
}

}  // namespace detail

/// U+(s): the complement component unbounded above.
inline RasterSet upper_component(const RasterSet& s) {
  detail::check_window(s);
  return detail::margin_component(s.complement(), true);
}

/// U-(s): the complement component unbounded below.
inline RasterSet lower_component(const RasterSet& s) {
  detail::check_window(s);
  return detail::margin_component(s.complement(), false);
}

struct AnnularReport {
  bool essential = false;
  bool annular = false;
  bool connected = false;
  bool operator==(const AnnularReport&) const = default;
};

inline AnnularReport is_essential_annular_continuum(const RasterSet& s) {
  detail::check_window(s);
  AnnularReport rep;
  rep.connected = connected_components(s, Adjacency::Eight).count == 1;
  const auto comp = complement_components(s);
  std::set<int> top;
  std::set<int> bottom;
  for (int l = 1; l <= comp.count; ++l) {
    if (comp.touches_top[l - 1]) top.insert(l);
    if (comp.touches_bottom[l - 1]) bottom.insert(l);
  }
  rep.essential = top.size() == 1 && bottom.size() == 1 && *top.begin() != *bottom.begin();
  rep.annular = rep.essential && comp.count == 2;
  return rep;
}

/// s together with all bounded complement components.
inline RasterSet fill(const RasterSet& s) {
  detail::check_window(s);
  const auto comp = complement_components(s);
  RasterSet out = s;
  for (int j = 0; j < s.height(); ++j)
    for (int i = 0; i < s.width(); ++i) {
      const int l = comp.at(i, j);
      if (l && !comp.touches_top[l - 1] && !comp.touches_bottom[l - 1]) out.set(i, j);
    }
  return out;
}

inline int unbounded_complement_count(const RasterSet& s) {
  detail::check_window(s);
  const auto comp = complement_components(s);
  int n = 0;
  for (int l = 1; l <= comp.count; ++l) n += (comp.touches_top[l - 1] || comp.touches_bottom[l - 1]) ? 1 : 0;
  return n;
}

namespace detail {

/// Alternating fill-on-complement-of-closure: first fill from `first_top`'s side.
inline RasterSet circloid_operator(const RasterSet& s, bool first_top) {
  check_window(s);
  const auto rep = is_essential_annular_continuum(s);
  require(rep.connected && rep.essential, ErrorKind::NotEssential,
          "circloid operators need an essential continuum");
  const RasterSet f1 = margin_component(s.complement(), first_top);
  const RasterSet f2 = margin_component(f1.dilated().complement(), !first_top);
  const RasterSet f3 = margin_component(f2.dilated().complement(), first_top);
  RasterSet result = (f2 | f3).complement();

  const auto post = is_essential_annular_continuum(result);
  require(post.essential && post.annular, ErrorKind::PostconditionViolated,
          "circloid operator output is not an essential annular set");
  const RasterSet interior = result - result.complement().dilated();
  const RasterSet edge = result - interior;
  require(edge.subset_of(s.dilated()), ErrorKind::PostconditionViolated,
          "boundary of circloid operator output leaves the closure of the input");
  return result;
}

}  // namespace detail

/// C+(s) = complement of (U^{+-} u U^{+-+}).
inline RasterSet circloid_plus(const RasterSet& s) { return detail::circloid_operator(s, true); }

/// C-(s) = complement of (U^{-+} u U^{-+-}).
inline RasterSet circloid_minus(const RasterSet& s) { return detail::circloid_operator(s, false); }

/// Whether the raster is thin at grid scale (no 3x3 block of occupied cells).
inline bool is_thin(const RasterSet& s) { return !detail::has_thick_block(s); }

/// C_s = cl(U+(s)) n cl(U-(s)), closures taken as 1-cell dilations inside s.
inline RasterSet core_circloid(const RasterSet& s) {
  detail::check_window(s);
  const auto rep = is_essential_annular_continuum(s);
  require(rep.connected && rep.essential && rep.annular, ErrorKind::NotEssential,
          "core circloid needs an essential annular continuum");
  require(is_thin(s), ErrorKind::NotThin, "set contains a 3x3 block of interior cells");
  const RasterSet up = detail::margin_component(s.complement(), true);
  const RasterSet down = detail::margin_component(s.complement(), false);
  RasterSet core = s & up.dilated() & down.dilated();
  const auto post = is_essential_annular_continuum(core);
  require(post.connected && post.essential && post.annular, ErrorKind::PostconditionViolated,
          "core circloid is not an essential annular continuum");
  return core;
}

namespace detail {

/// sup over cells of `from` of the distance to `to`, in cells.
inline double directed_hausdorff_cells(const RasterSet& from, const RasterSet& to) {
  const GridSpec& spec = from.spec();
  const long w = spec.width();
  std::vector<std::vector<int>> rows(spec.height());
  for (int j = 0; j < spec.height(); ++j)
    for (int i = 0; i < w; ++i)
      if (to.at(i, j)) rows[j].push_back(i);

  double worst = 0.0;
  for (int j = 0; j < spec.height(); ++j) {
    for (int i = 0; i < w; ++i) {
      if (!from.at(i, j)) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int dj = 0; dj < spec.height(); ++dj) {
        if (dj >= best) break;
        for (int sign : {1, -1}) {
          if (dj == 0 && sign < 0) continue;
          const int r = j + sign * dj;
          if (r < 0 || r >= spec.height() || rows[r].empty()) continue;
          const auto& cols = rows[r];
          auto it = std::lower_bound(cols.begin(), cols.end(), i);
          for (auto cand : {it, it == cols.begin() ? cols.end() - 1 : it - 1}) {
            if (cand == cols.end()) cand = cols.begin();
            long dx = std::labs(static_cast<long>(*cand) - i);
            dx = std::min(dx, w - dx);
            best = std::min(best, std::hypot(static_cast<double>(dx), static_cast<double>(dj)));
          }
        }
      }
      worst = std::max(worst, best);
    }
  }
  return worst;
}

}  // namespace detail

/// Hausdorff distance between cell-centre sets under the annulus metric, in
/// real units (multiply by the resolution for cells).
inline double hausdorff_distance(const RasterSet& a, const RasterSet& b) {
  require(!a.empty() && !b.empty(), ErrorKind::EmptySet, "Hausdorff distance of an empty raster");
  require(a.spec() == b.spec(), ErrorKind::InvalidArgument, "rasters live on different grids");
  const double cells = std::max(detail::directed_hausdorff_cells(a, b), detail::directed_hausdorff_cells(b, a));
  return cells * a.spec().cell();
}

/// Whether k separates u from v: no complement component of k meets both.
inline bool separates(const RasterSet& k, const RasterSet& u, const RasterSet& v) {
  require(!k.intersects(u) && !k.intersects(v), ErrorKind::NotDisjoint,
          "separating set must be disjoint from both regions");
  const auto comp = complement_components(k);
  std::vector<std::uint8_t> meets_u(comp.count + 1, 0);
  std::vector<std::uint8_t> meets_v(comp.count + 1, 0);
  for (std::size_t idx = 0; idx < comp.labels.size(); ++idx) {
    const int l = comp.labels[idx];
    if (!l) continue;
    if (u.mask()[idx]) meets_u[l] = 1;
    if (v.mask()[idx]) meets_v[l] = 1;
  }
  for (int l = 1; l <= comp.count; ++l)
    if (meets_u[l] && meets_v[l]) return false;
  return true;
}

}  // namespace circloids
