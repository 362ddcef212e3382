// circloid: build example continua, estimate rotation sets, classify strips
// and check semiconjugacies. Reports are one JSON object per line.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "circloids/circloids.hpp"

namespace fs = std::filesystem;
using namespace circloids;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonFinite:
    case ErrorKind::Overlap:
    case ErrorKind::OrderViolation:
    case ErrorKind::ZoneDiscontinuity:
    case ErrorKind::InjectivityViolation:
    case ErrorKind::PostconditionViolated:
      return kExitNumerical;
    default:
      return kExitValidation;
  }
}

struct Options {
  std::string example;
  std::string raster;
  int resolution = 128;
  std::vector<double> window{-0.25, 1.25};
  int periods = 3;
  double alpha = 0.25;
  double rho = 0.6180339887498949;
  int gaps = 200;
  double gap_mass = 0.5;
  int turns = 3;
  int seeds = 200;
  long horizon = 10000;
  double max_width = 3.0;
  int n_range = 50;
  int m_range = 50;
  double perturb = 0.0;
  std::string out;
  std::string svg;
  unsigned long long seed = 1;
};

/// Files are staged next to their destination and renamed only when every
/// output of the command has been written.
class StagedOutputs {
 public:
  ~StagedOutputs() {
    for (const auto& [tmp, dst] : files_) {
      std::error_code ec;
      fs::remove(tmp, ec);
    }
  }

  std::ostream& open(const fs::path& dst) {
    const fs::path tmp = dst.string() + ".partial";
    streams_.push_back(std::make_unique<std::ofstream>(tmp, std::ios::binary));
    require(static_cast<bool>(*streams_.back()), ErrorKind::Io, "cannot write " + tmp.string());
    files_.emplace_back(tmp, dst);
    return *streams_.back();
  }

  void commit() {
    for (auto& s : streams_) {
      s->close();
      require(!s->fail(), ErrorKind::Io, "write failed");
    }
    for (const auto& [tmp, dst] : files_) fs::rename(tmp, dst);
    files_.clear();
  }

 private:
  std::vector<std::unique_ptr<std::ofstream>> streams_;
  std::vector<std::pair<fs::path, fs::path>> files_;
};

ExampleConfig to_config(const Options& o) {
  require(o.window.size() == 2, ErrorKind::InvalidArgument, "--window takes two values");
  require(o.resolution >= 8 && o.resolution <= 4096, ErrorKind::InvalidArgument, "--resolution must lie in [8, 4096]");
  require(o.periods >= 1 && o.periods <= 64, ErrorKind::InvalidArgument, "--periods must lie in [1, 64]");
  require(o.seeds >= 1, ErrorKind::InvalidArgument, "--seeds must be positive");
  require(o.horizon >= 1 && o.horizon <= kMaxHorizon, ErrorKind::InvalidArgument, "--horizon must lie in [1, 1e7]");
  require(std::isfinite(o.alpha) && std::isfinite(o.rho), ErrorKind::InvalidArgument, "non-finite parameter");
  ExampleConfig c;
  c.resolution = o.resolution;
  c.periods = o.periods;
  c.y_min = o.window[0];
  c.y_max = o.window[1];
  c.alpha = o.alpha;
  c.rho = o.rho;
  c.gaps = o.gaps;
  c.gap_mass = o.gap_mass;
  c.turns = o.turns;
  // validate the grid before any computation
  (void)example_grid(c);
  return c;
}

fs::path out_dir(const Options& o) {
  fs::path d = o.out.empty() ? fs::path(".") : fs::path(o.out);
  require(fs::is_directory(d), ErrorKind::Io, "output directory does not exist: " + d.string());
  return d;
}

void emit(const json& j, const Options& o, const std::string& name) {
  if (!o.out.empty()) {
    StagedOutputs staged;
    staged.open(out_dir(o) / name) << j.dump() << "\n";
    staged.commit();
  }
  std::cout << j.dump() << std::endl;
}

std::vector<Vec2> seed_grid(int count, unsigned long long seed) {
  const int side = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count)))));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::vector<Vec2> out;
  for (int k = 0; k < count; ++k) {
    const int a = k % side;
    const int b = k / side;
    out.push_back({(a + jitter(rng)) / side, (b + jitter(rng)) / side});
  }
  return out;
}

std::string orbit_svg(const LiftedPlaneMap& f, const std::vector<Vec2>& seeds, long n) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 1 1\">\n";
  s << "<rect width=\"1\" height=\"1\" fill=\"white\"/>\n<path fill=\"none\" stroke=\"black\" stroke-width=\"0.002\" d=\"";
  char buf[64];
  const long steps = std::min<long>(n, 2000);
  for (const auto& z0 : seeds) {
    Vec2 z = z0;
    for (long k = 0; k < steps; ++k) {
      z = f(z);
      const double x = frac(z.x);
      const double y = 1.0 - frac(z.y);
      std::snprintf(buf, sizeof buf, "M%.5f %.5fh0.001", x, y);
      s << buf;
    }
  }
  s << "\"/>\n</svg>\n";
  return s.str();
}

int cmd_build(const Options& o) {
  const ExampleConfig c = to_config(o);
  const auto raster = example_raster(o.example, c);
  json meta{{"command", "build"}, {"example", o.example}, {"resolution", c.resolution}, {"periods", c.periods},
            {"window", {c.y_min, c.y_max}}};
  if (o.example == "fga") {
    const auto d = denjoy_map(c.rho, c.gaps, c.gap_mass);
    const auto params = make_fg_alpha_params(d.lift, c.alpha);
    (void)fg_alpha_map(params);
    meta["map"] = {{"alpha", params.alpha},
                   {"rho", c.rho},
                   {"y0", params.y0},
                   {"glue_profile", params.profile == GlueProfile::Linear ? "linear" : "reciprocal"},
                   {"zone_discontinuity", zone_discontinuity(params)}};
  } else if (!raster) {
    (void)example_map(o.example, c);
  }
  const fs::path dir = out_dir(o);
  StagedOutputs staged;
  if (raster) {
    const fs::path pgm = dir / (o.example + ".pgm");
    write_pgm(staged.open(pgm), *raster);
    staged.open(sidecar_path(pgm.string())) << format_header(raster->spec());
    meta["raster"] = pgm.filename().string();
    meta["cells"] = raster->count();
  }
  staged.open(dir / (o.example + ".json")) << meta.dump() << "\n";
  staged.commit();
  std::cout << meta.dump() << std::endl;
  return 0;
}

int cmd_rotset(const Options& o) {
  const ExampleConfig c = to_config(o);
  const auto f = example_map(o.example, c);
  require(f.has_value(), ErrorKind::InvalidArgument, "example has no dynamics: " + o.example);
  std::vector<Vec2> seeds;
  if (o.example == "fga") {
    const int on_row = std::max(1, o.seeds / 4);
    seeds = fg_alpha_seeds(denjoy_map(c.rho, c.gaps, c.gap_mass).gaps, on_row, std::max(1, o.seeds - on_row));
  } else if (o.example == "row") {
    for (int k = 0; k < o.seeds; ++k) seeds.push_back({(k + 0.5) / o.seeds, 0.0});
  } else {
    seeds = seed_grid(o.seeds, o.seed);
  }
  const auto est = rotation_set_estimate(*f, seeds, o.horizon);
  json j = to_json(est);
  j["command"] = "rotset";
  j["example"] = o.example;
  json hull = json::array();
  for (const auto& v : est.hull) hull.push_back({v.x, v.y});
  j["hull"] = hull;
  std::vector<long> horizons;
  for (long n = 100; n <= o.horizon; n *= 10) horizons.push_back(n);
  json table = json::array();
  if (!horizons.empty()) {
    std::vector<Vec2> probe_seeds(seeds.begin(), seeds.begin() + std::min<std::size_t>(seeds.size(), 20));
    for (const auto& row : uniform_convergence_probe(*f, probe_seeds, horizons))
      table.push_back({{"horizon", row.horizon}, {"dev_x", row.dev_x}, {"dev_y", row.dev_y}});
  }
  j["horizons"] = table;
  if (!o.svg.empty()) {
    StagedOutputs staged;
    staged.open(o.svg) << orbit_svg(*f, std::vector<Vec2>(seeds.begin(), seeds.begin() + std::min<std::size_t>(seeds.size(), 10)), o.horizon);
    staged.commit();
  }
  emit(j, o, o.example + ".rotset.json");
  return 0;
}

int cmd_classify(const Options& o) {
  std::string name = o.example;
  RasterSet r;
  if (!o.raster.empty()) {
    r = load_raster(o.raster);
    name = fs::path(o.raster).stem().string();
  } else {
    const ExampleConfig c = to_config(o);
    const auto built = example_raster(o.example, c);
    require(built.has_value(), ErrorKind::InvalidArgument, "example has no continuum: " + o.example);
    r = *built;
  }
  const auto a = classify(StripRaster(r), o.max_width);
  json j{{"command", "classify"},
         {"example", name},
         {"kind", to_string(a.kind)},
         {"infinite_spike", a.infinite_spike},
         {"strip", to_json(a.strip_generator)},
         {"core", to_json(a.core_generator)},
         {"spikes", to_json(a.spike_report)}};
  emit(j, o, name + ".classify.json");
  return 0;
}

int cmd_semiconj(const Options& o) {
  const ExampleConfig c = to_config(o);
  require(o.example == "denjoy" || o.example == "rigid", ErrorKind::InvalidArgument,
          "semiconj supports the denjoy and rigid families");
  require(o.n_range >= 1 && o.n_range <= 500 && o.m_range >= 1 && o.m_range <= 500, ErrorKind::InvalidArgument,
          "-N and -M must lie in [1, 500]");
  const int res = std::max(c.resolution, 1024);
  CircleLift g = CircleLift::rigid(c.rho);
  double x0 = 0.0;
  if (o.example == "denjoy") {
    auto d = denjoy_map(c.rho, c.gaps, c.gap_mass);
    x0 = d.gaps.gap(0).left;
    g = d.lift;
  } else {
    require(irrational_to_machine_precision(c.rho), ErrorKind::RationalRho, "rotation number is rational");
  }
  const auto fam = vertical_circle_family(g, c.rho, x0, o.n_range, o.m_range, res);
  const auto h = build_semiconjugacy(fam);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> samples;
  for (int k = 0; k < o.seeds; ++k) samples.push_back({u(rng), u(rng)});
  const auto rep = check_semiconjugacy(h, fam->map(), c.rho + o.perturb, samples);
  json j = to_json(rep);
  j["command"] = "semiconj";
  j["example"] = o.example;
  j["tolerance"] = rep.epsilon + 2.0 / res;
  j["within_tolerance"] = rep.max_defect <= rep.epsilon + 2.0 / res;
  emit(j, o, o.example + ".semiconj.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Annular continua, rotation sets and semiconjugacies on the annulus and torus"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI file of key=value defaults; flags override");
  app.add_option("--example", o.example, "Example name");
  app.add_option("--resolution", o.resolution, "Cells per unit length");
  app.add_option("--window", o.window, "Vertical window: lo hi")->expected(2)->delimiter(',');
  app.add_option("--periods", o.periods, "Periods of the cyclic cover");
  app.add_option("--alpha", o.alpha, "Horizontal drift on the row (fga)");
  app.add_option("--rho", o.rho, "Rotation number");
  app.add_option("--gaps", o.gaps, "Denjoy gaps on each side of the orbit");
  app.add_option("--gap-mass", o.gap_mass, "Total length of the Denjoy gaps");
  app.add_option("--turns", o.turns, "Spiral passes");
  app.add_option("--seeds", o.seeds, "Seed points or samples");
  app.add_option("--horizon", o.horizon, "Orbit length");
  app.add_option("--max-width", o.max_width, "Largest generator window, in periods");
  app.add_option("-N,--n-range", o.n_range, "Family iterates |n| <= N");
  app.add_option("-M,--m-range", o.m_range, "Family translates |m| <= M");
  app.add_option("--perturb", o.perturb, "Offset added to rho when checking the semiconjugacy");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--svg", o.svg, "Write an orbit scatter plot (rotset)");
  app.add_option("--seed", o.seed, "Random seed");

  auto* build = app.add_subcommand("build", "Rasterize an example and write PGM + metadata");
  auto* rotset = app.add_subcommand("rotset", "Estimate the rotation set of an example map");
  auto* classify_cmd = app.add_subcommand("classify", "Generators, spikes and classification of a strip");
  auto* semiconj = app.add_subcommand("semiconj", "Build H for a vertical circle family and report its defect");
  for (auto* sub : {build, rotset, classify_cmd, semiconj}) sub->add_option("example", o.example, "Example name");
  classify_cmd->add_option("--raster", o.raster, "PGM file (with .hdr sidecar) instead of an example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (o.raster.empty()) {
      require(!o.example.empty(), ErrorKind::InvalidArgument, "no example given");
      require(is_example(o.example), ErrorKind::InvalidArgument, "unknown example: " + o.example);
    }
    if (*build) return cmd_build(o);
    if (*rotset) return cmd_rotset(o);
    if (*classify_cmd) return cmd_classify(o);
    if (*semiconj) return cmd_semiconj(o);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
