#pragma once

// Rasters as binary PGM (0 = complement, 255 = set, top image row = highest y)
// plus a sidecar text header carrying the grid spec.

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "grid.hpp"

namespace circloids {

inline void write_pgm(std::ostream& out, const RasterSet& s) {
  out << "P5\n" << s.width() << ' ' << s.height() << "\n255\n";
  std::string row(static_cast<std::size_t>(s.width()), '\0');
  for (int j = s.height() - 1; j >= 0; --j) {
    for (int i = 0; i < s.width(); ++i) row[i] = s.at(i, j) ? static_cast<char>(255) : '\0';
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

inline std::string format_header(const GridSpec& spec) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "resolution=%d x_period=%d y_min=%.17g y_max=%.17g\n",
                spec.resolution(), spec.x_period(), spec.y_min(), spec.y_max());
  return buf;
}

inline GridSpec parse_header(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    require(eq != std::string::npos, ErrorKind::Io, "malformed header token '" + token + "'");
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  for (const char* key : {"resolution", "x_period", "y_min", "y_max"})
    require(kv.count(key) == 1, ErrorKind::Io, std::string("header lacks ") + key);
  try {
    return GridSpec(std::stoi(kv["resolution"]), std::stoi(kv["x_period"]), std::stod(kv["y_min"]),
                    std::stod(kv["y_max"]));
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Io, "unparsable header value");
  }
}

inline RasterSet read_pgm(std::istream& in, const GridSpec& spec) {
  std::string magic;
  int w = 0;
  int h = 0;
  int maxval = 0;
  in >> magic >> w >> h >> maxval;
  require(in && magic == "P5" && maxval == 255, ErrorKind::Io, "not an 8-bit binary PGM");
  in.get();
  require(w == spec.width() && h == spec.height(), ErrorKind::Io, "PGM size does not match header");
  RasterSet s(spec);
  std::string row(static_cast<std::size_t>(w), '\0');
  for (int j = h - 1; j >= 0; --j) {
    in.read(row.data(), w);
    require(in.gcount() == w, ErrorKind::Io, "truncated PGM");
    for (int i = 0; i < w; ++i) {
      const auto v = static_cast<unsigned char>(row[i]);
      require(v == 0 || v == 255, ErrorKind::Io, "PGM pixel is neither 0 nor 255");
      s.set(i, j, v == 255);
    }
  }
  return s;
}

inline std::string sidecar_path(const std::string& pgm_path) { return pgm_path + ".hdr"; }

inline void save_raster(const std::string& pgm_path, const RasterSet& s) {
  std::ofstream img(pgm_path, std::ios::binary);
  require(img.good(), ErrorKind::Io, "cannot open " + pgm_path);
  write_pgm(img, s);
  std::ofstream hdr(sidecar_path(pgm_path));
  require(hdr.good(), ErrorKind::Io, "cannot open " + sidecar_path(pgm_path));
  hdr << format_header(s.spec());
  require(img.good() && hdr.good(), ErrorKind::Io, "write failed for " + pgm_path);
}

inline RasterSet load_raster(const std::string& pgm_path) {
  std::ifstream hdr(sidecar_path(pgm_path));
  require(hdr.good(), ErrorKind::Io, "cannot open " + sidecar_path(pgm_path));
  std::stringstream text;
  text << hdr.rdbuf();
  const GridSpec spec = parse_header(text.str());
  std::ifstream img(pgm_path, std::ios::binary);
  require(img.good(), ErrorKind::Io, "cannot open " + pgm_path);
  return read_pgm(img, spec);
}

}  // namespace circloids
