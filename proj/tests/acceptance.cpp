// Runs the acceptance criteria and prints one PASS/FAIL line for each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "circloids/circloids.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace circloids;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

const double kRho = fixtures::kGolden;

LiftedPlaneMap row_map(const CircleLift& g) {
  const CircleLift inv = g.inverse();
  return LiftedPlaneMap([g](Vec2 z) { return Vec2{g(z.x), 0.5 * z.y}; },
                        [inv](Vec2 z) { return Vec2{inv(z.x), 2.0 * z.y}; });
}

void ac1(Outcome& o) {
  const auto rigid = rotation_number(CircleLift::rigid(kRho), 0.0, 100000);
  o.note << "rigid err " << std::abs(rigid.value - kRho) << " bound " << rigid.error_bound;
  o.check(std::abs(rigid.value - kRho) <= 1e-5 && rigid.error_bound <= 1e-5, "rigid rotation number");
  const auto d = denjoy_map(kRho, 200, 0.5);
  const auto den = rotation_number(d.lift, 0.0, 100000);
  const double oracle_rho = oracle::rotation_number(d.lift, 0.0, 100000);
  o.note << "; denjoy err " << std::abs(den.value - kRho);
  o.check(std::abs(den.value - kRho) <= 1e-4, "denjoy rotation number");
  o.check(std::abs(den.value - oracle_rho) <= 1e-9, "denjoy vs long-orbit oracle");
}

void ac2(Outcome& o) {
  std::mt19937_64 rng(2024);
  const GridSpec spec(64, 1, -0.5, 0.5);
  int checked = 0;
  int bad = 0;
  while (checked < 100) {
    const RasterSet a = fixtures::random_walk(spec, rng, 0, 32, 200, 4, 1);
    const RasterSet b = fixtures::random_walk(spec, rng, 32, 32, 200, 4, 1);
    if (a.dilated().intersects(b)) continue;
    if (unbounded_complement_count(a) != 1 || unbounded_complement_count(b) != 1) continue;
    if (unbounded_complement_count(a | b) != 1 || oracle::margin_complement_components(a | b) != 1) ++bad;
    ++checked;
  }
  o.note << checked << " pairs, " << bad << " violations";
  o.check(bad == 0, "union with more than one unbounded component");
}

RasterSet operator_fixpoint(RasterSet s) {
  for (int k = 0; k < 10; ++k) {
    RasterSet next = circloid_plus(circloid_minus(s));
    if (next == s) break;
    s = std::move(next);
  }
  return s;
}

void ac3(Outcome& o) {
  int cases = 0;
  for (int res : {128, 256}) {
    const GridSpec cover(res, 3, -0.25, 1.25);
    const std::vector<std::pair<std::string, RasterSet>> family{
        {"theta", fixtures::theta(res)},
        {"whisker", fixtures::whisker(res, true)},
        {"hyperbola", hyperbola_spike_continuum(cover).raster()},
        {"spiral", spiral_generator_continuum(cover, 3).raster()}};
    for (const auto& [name, s] : family) {
      const std::string tag = name + "@" + std::to_string(res);
      const RasterSet c = circloid_plus(s);
      const auto rep = is_essential_annular_continuum(c);
      o.check(rep.essential && rep.annular && rep.connected, tag + " essential annular");
      o.check(hausdorff_distance(circloid_plus(c), c) * res <= 1.0, tag + " fixpoint");
      const RasterSet edge = c & c.complement().dilated();
      o.check(edge.subset_of(s.dilated()), tag + " boundary inclusion");
      if (is_essential_annular_continuum(s).annular) {
        const double d = hausdorff_distance(core_circloid(s), operator_fixpoint(s)) * res;
        o.check(d <= 1.0, tag + " core vs fixpoint");
      }
      ++cases;
    }
  }
  o.note << cases << " rasters";
}

std::shared_ptr<CircloidOrbitFamily> denjoy_family(const DenjoyMap& d) {
  return vertical_circle_family(d.lift, kRho, d.gaps.gap(0).left, 50, 50, 1024);
}

void ac4(Outcome& o) {
  const auto d = denjoy_map(kRho, 200, 0.5);
  const auto fam = denjoy_family(d);
  o.check(check_irrational_combinatorics(*fam).ok, "combinatorics");
  const auto h = build_semiconjugacy(fam);
  const double budget = h.epsilon + 2.0 / 1024;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> samples;
  for (int k = 0; k < 10000; ++k) samples.push_back({u(rng), u(rng)});
  const auto rep = check_semiconjugacy(h, fam->map(), kRho, samples);
  o.note << "defect " << rep.max_defect << " budget " << budget;
  o.check(rep.max_defect <= budget, "H o F - H - rho");
  double deck = 0.0;
  for (const auto& z : samples) deck = std::max(deck, std::abs(h({z.x, z.y + 1.0}) - h(z) - 1.0));
  o.check(deck <= budget, "H o T - H - 1");
  const GridSpec spec(128, 1, -1.0, 2.0);
  int essential = 0;
  for (double xi : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto r = is_essential_annular_continuum(fibre_raster(h, spec, xi));
    essential += (r.essential && r.annular && r.connected) ? 1 : 0;
  }
  o.note << ", " << essential << "/5 fibres essential";
  o.check(essential == 5, "fibres");
}

void ac5(Outcome& o) {
  const GridSpec cover(128, 3, -0.25, 1.25);
  const StripRaster row(row_raster(cover, 0.0));
  const auto spiral = spiral_generator_continuum(cover, 3);
  const auto d = denjoy_map(kRho, 200, 0.5);
  const LiftedPlaneMap fga = fg_alpha_map(make_fg_alpha_params(d.lift, 0.25));
  const LiftedPlaneMap id([](Vec2 z) { return z; });
  const LiftedPlaneMap shift = rigid_translation({0.4, 0.0});

  struct Case {
    std::string name;
    const StripRaster* strip;
    const LiftedPlaneMap* map;
  };
  const std::vector<Case> cases{{"row/id", &row, &id},          {"row/rigid", &row, &shift},
                                {"row/fga", &row, &fga},        {"spiral/id", &spiral, &id},
                                {"spiral/rigid", &spiral, &shift}};
  for (const auto& c : cases) {
    const auto g = find_generator(*c.strip, 3);
    o.check(g.found, c.name + " generator");
    if (!g.found) continue;
    o.check(adjacent_generator_check(g), c.name + " meets unit translate");
    const int count = translate_intersection_count(image_cells(*c.map, g.cells, c.strip->spec()), g);
    const int bound = g.nu + g.nu + 1;
    o.note << c.name << " " << count << "<=" << bound << " ";
    o.check(count <= bound, c.name + " translate count");
  }
}

void ac6(Outcome& o) {
  const auto d = denjoy_map(kRho, 200, 0.5);
  const auto f = row_map(d.lift);
  const GridSpec cover(128, 3, -0.25, 1.25);
  const auto g = find_generator(StripRaster(row_raster(cover, 0.0)), 3);
  o.check(g.found, "generator");
  const double bound = g.diameter + 2.0 * g.nu + 1.0;
  std::vector<Vec2> seeds;
  for (int k = 0; k < 20; ++k) seeds.push_back({(k + 0.5) / 20.0, 0.0});
  const double spread = orbit_spread(f, seeds, 10000);
  o.note << "spread " << spread << " bound " << bound;
  o.check(spread <= bound, "orbit spread");
  for (long n : {10L, 100L, 1000L, 10000L}) {
    const auto est = rotation_set_estimate(f, seeds, n);
    o.check(est.hull_x_hi - est.hull_x_lo <= 2.0 * bound / n, "averages at n=" + std::to_string(n));
  }
}

void ac7(Outcome& o) {
  const CircleLift g = CircleLift::sampled([](double x) { return x + 0.05 * std::sin(4 * M_PI * (x - 0.25)); }, 64);
  const auto f = row_map(g);
  o.check(rotation_number(g, 0.1, 1000).value == 0.0 || std::abs(rotation_number(g, 0.1, 1000).value) < 1e-3,
          "zero rotation");
  const auto z = fixed_point_search(f, row_raster(GridSpec(64, 1, -0.5, 0.5), 0.0), 1e-7);
  o.check(z.has_value(), "found");
  if (z) {
    const double r = norm(f(*z) - *z);
    o.note << "z = (" << z->x << ", " << z->y << ") residual " << r;
    o.check(r <= 1e-6, "residual");
  }
}

void ac8(Outcome& o) {
  for (int res : {128, 256}) {
    const auto h = classify(hyperbola_spike_continuum(GridSpec(res, 6, -0.25, 1.25)), 6);
    const auto s = classify(spiral_generator_continuum(GridSpec(res, 3, -0.25, 1.25), 3), 3);
    const auto r = classify(StripRaster(row_raster(GridSpec(res, 3, -0.25, 1.25), 0.0)), 3);
    o.note << res << ": " << to_string(h.kind) << "/" << to_string(s.kind) << "/" << to_string(r.kind) << " ";
    o.check(h.kind == Classification::CoreGeneratedInfiniteSpike, "hyperbola@" + std::to_string(res));
    o.check(s.kind == Classification::CompactlyGenerated && s.infinite_spike, "spiral@" + std::to_string(res));
    o.check(r.kind == Classification::CompactlyGenerated, "row@" + std::to_string(res));
  }
}

void ac9(Outcome& o) {
  const auto d = denjoy_map(kRho, 200, 0.5);
  const auto f = fg_alpha_map(make_fg_alpha_params(d.lift, 0.25));
  const auto all = rotation_set_estimate(f, fg_alpha_seeds(d.gaps, 50, 150), 10000);
  o.note << "hull_x [" << all.hull_x_lo << ", " << all.hull_x_hi << "]";
  o.check(std::abs(all.hull_x_lo - 0.25) <= 1e-2 && std::abs(all.hull_x_hi - kRho) <= 1e-2, "interval endpoints");
  const auto row = rotation_set_estimate(f, fg_alpha_seeds(d.gaps, 20, 0), 10000);
  o.check(std::abs(row.hull_x_lo - 0.25) <= 1e-3 && std::abs(row.hull_x_hi - 0.25) <= 1e-3, "row seeds");
  const auto leaves = rotation_set_estimate(f, fg_alpha_seeds(d.gaps, 0, 20, 2.0 / 3.0), 10000);
  o.check(std::abs(leaves.hull_x_lo - kRho) <= 1e-3 && std::abs(leaves.hull_x_hi - kRho) <= 1e-3, "leaf seeds");
}

void ac10(Outcome& o) {
  auto q = [](double x) { return 0.3 + 0.1 * std::sin(2 * M_PI * x); };
  const auto f = skew_product(kRho, q);
  std::vector<Vec2> seeds;
  for (int k = 0; k < 100; ++k) seeds.push_back({(k + 0.5) / 100.0, 0.0});
  const auto rows = uniform_convergence_probe(f, std::vector<Vec2>(seeds.begin(), seeds.begin() + 20), {100, 1000, 10000});
  o.note << "dev_y";
  for (const auto& r : rows) o.note << " " << r.dev_y;
  o.check(rows[0].dev_y > rows[1].dev_y && rows[1].dev_y > rows[2].dev_y, "monotone deviations");
  o.check(rows[2].dev_y <= 1e-2, "final deviation");
  // for reference, not a pass condition: distance of the averages to the mean of q
  o.note << "; sup|avg_n - 0.3|";
  for (long n : {100L, 1000L, 10000L}) {
    double d = 0.0;
    for (int k = 0; k < 20; ++k) d = std::max(d, std::abs(displacement_average(f, seeds[k], n).y - 0.3));
    o.note << " " << d;
  }
  const auto est = rotation_set_estimate(f, seeds, 10000);
  o.note << "; spread " << est.spread;
  o.check(est.spread <= 1e-2, "spread");
  double worst = 0.0;
  for (std::size_t k = 0; k < seeds.size(); ++k)
    worst = std::max(worst, std::abs(est.averages[k].y - oracle::birkhoff_average(kRho, q, seeds[k].x, 10000)));
  o.check(worst <= 1e-9, "Birkhoff oracle");
}

void ac11(Outcome& o) {
  const int res = 1024;
  const GridSpec spec(res, 1, 0.0, 1.5);
  // skew-product fibres {x = xi} in the swapped frame
  auto h = [](Vec2 z) { return z.y; };
  const double xi = 0.75;
  const RasterSet target = lower_boundary(fibre_raster(h, spec, xi));
  double prev = INFINITY;
  o.note << "cells";
  for (double d : {0.1, 0.01, 0.001}) {
    const double dist = hausdorff_distance(lower_boundary(fibre_raster(h, spec, xi - d)), target) * res;
    o.note << " " << dist;
    o.check(dist < prev, "strict decrease");
    prev = dist;
  }
  o.check(prev <= 3.0, "final distance");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"AC1 rotation numbers", ac1},
      {"AC2 unbounded components of unions", ac2},
      {"AC3 circloid operators and core", ac3},
      {"AC4 semiconjugacy from a Denjoy family", ac4},
      {"AC5 generators and translate counts", ac5},
      {"AC6 bounded deviation on an invariant row", ac6},
      {"AC7 fixed point of a zero-rotation map", ac7},
      {"AC8 strip classification", ac8},
      {"AC9 rotation interval of f_{g,alpha}", ac9},
      {"AC10 skew product convergence", ac10},
      {"AC11 fibre convergence", ac11},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.note.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
