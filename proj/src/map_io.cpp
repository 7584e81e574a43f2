#include "navgen/map_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "navgen/errors.hpp"

namespace navgen {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

fs::path meta_path(const fs::path& path) {
  fs::path p = path;
  p.replace_extension(".meta");
  return p;
}

void write_meta(const fs::path& path, const GridSpec& spec,
                const std::string& layer, const std::string& semantics) {
  std::ofstream out(meta_path(path));
  if (!out) throw IoError("cannot write " + meta_path(path).string());
  out << "resolution = " << fmt(spec.resolution) << "\n"
      << "origin_x = " << fmt(spec.origin_x) << "\n"
      << "origin_y = " << fmt(spec.origin_y) << "\n"
      << "width = " << spec.width << "\n"
      << "height = " << spec.height << "\n"
      << "layer = " << layer << "\n"
      << "semantics = " << semantics << "\n";
}

struct Meta {
  GridSpec spec;
  std::string layer;
  std::string semantics;
};

Meta read_meta(const fs::path& path) {
  std::ifstream in(meta_path(path));
  if (!in) throw MissingFile("missing " + meta_path(path).string());
  Meta meta;
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(val);
    try {
      if (key == "resolution") meta.spec.resolution = std::stod(val);
      else if (key == "origin_x") meta.spec.origin_x = std::stod(val);
      else if (key == "origin_y") meta.spec.origin_y = std::stod(val);
      else if (key == "width") meta.spec.width = std::stoi(val);
      else if (key == "height") meta.spec.height = std::stoi(val);
      else if (key == "layer") meta.layer = val;
      else if (key == "semantics") meta.semantics = val;
      else throw FormatError("unknown meta key: " + key);
    } catch (const std::invalid_argument&) {
      throw FormatError("bad meta value for " + key);
    }
  }
  if (meta.spec.width <= 0 || meta.spec.height <= 0 || meta.spec.resolution <= 0) {
    throw FormatError("incomplete meta in " + meta_path(path).string());
  }
  return meta;
}

}  // namespace

void write_binary_map(const BinaryLayer& layer, const fs::path& path,
                      const std::string& layer_name,
                      const std::string& semantics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << layer.spec.width << " " << layer.spec.height << "\n255\n";
  std::vector<unsigned char> row(layer.spec.width);
  for (int j = 0; j < layer.spec.height; ++j) {
    for (int i = 0; i < layer.spec.width; ++i) {
      row[i] = layer.at(i, j) ? 255 : 0;
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  write_meta(path, layer.spec, layer_name, semantics);
}

BinaryLayer read_binary_map(const fs::path& path) {
  const Meta meta = read_meta(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("missing " + path.string());
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P5" || maxval != 255) {
    throw FormatError("not an 8-bit P5 PGM: " + path.string());
  }
  if (w != meta.spec.width || h != meta.spec.height) {
    throw FormatError("PGM size disagrees with meta for " + path.string());
  }
  in.get();  // single whitespace after the header
  BinaryLayer layer(meta.spec);
  std::vector<unsigned char> row(w);
  for (int j = 0; j < h; ++j) {
    in.read(reinterpret_cast<char*>(row.data()), row.size());
    if (!in) throw FormatError("truncated PGM payload: " + path.string());
    for (int i = 0; i < w; ++i) layer.set(i, j, row[i] != 0);
  }
  return layer;
}

void write_scalar_grid(const ScalarGrid& grid, const fs::path& path,
                       const std::string& layer_name,
                       const std::string& semantics) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (int j = 0; j < grid.spec.height; ++j) {
    for (int i = 0; i < grid.spec.width; ++i) {
      if (i) out << ",";
      const auto& c = grid.cells[grid.spec.index(i, j)];
      out << (c ? fmt(*c) : "NaN");
    }
    out << "\n";
  }
  write_meta(path, grid.spec, layer_name, semantics);
}

ScalarGrid read_scalar_grid(const fs::path& path) {
  const Meta meta = read_meta(path);
  std::ifstream in(path);
  if (!in) throw MissingFile("missing " + path.string());
  ScalarGrid grid(meta.spec);
  std::string line;
  for (int j = 0; j < meta.spec.height; ++j) {
    if (!std::getline(in, line)) throw FormatError("truncated CSV: " + path.string());
    std::istringstream ss(line);
    std::string field;
    for (int i = 0; i < meta.spec.width; ++i) {
      if (!std::getline(ss, field, ',')) {
        throw FormatError("short CSV row in " + path.string());
      }
      if (field != "NaN" && field != "nan") {
        try {
          grid.cells[meta.spec.index(i, j)] = std::stod(field);
        } catch (const std::exception&) {
          throw FormatError("bad CSV value '" + field + "' in " + path.string());
        }
      }
    }
  }
  return grid;
}

void write_elevation_map(const ElevationMap& map, const fs::path& stem) {
  const char* names[4] = {"avg", "min", "max", "var"};
  for (int s = 0; s < 4; ++s) {
    ScalarGrid grid(map.spec);
    for (std::size_t k = 0; k < map.cells.size(); ++k) {
      if (!map.cells[k]) continue;
      const auto& c = *map.cells[k];
      double v = s == 0 ? c.avg : s == 1 ? c.min : s == 2 ? c.max : c.var;
      grid.cells[k] = v;
    }
    fs::path p = stem;
    p += std::string(".") + names[s] + ".csv";
    write_scalar_grid(grid, p, std::string("elevation_") + names[s],
                      s == 3 ? "meters^2" : "meters");
  }
}

ElevationMap read_elevation_map(const fs::path& stem) {
  const char* names[4] = {"avg", "min", "max", "var"};
  ScalarGrid grids[4];
  for (int s = 0; s < 4; ++s) {
    fs::path p = stem;
    p += std::string(".") + names[s] + ".csv";
    grids[s] = read_scalar_grid(p);
  }
  ElevationMap map(grids[0].spec);
  for (std::size_t k = 0; k < map.cells.size(); ++k) {
    if (!grids[0].cells[k]) continue;
    ElevationCell c;
    c.avg = *grids[0].cells[k];
    c.min = *grids[1].cells[k];
    c.max = *grids[2].cells[k];
    c.var = *grids[3].cells[k];
    map.cells[k] = c;
  }
  return map;
}

ScalarGrid index_map_to_grid(const IndexMap& map) {
  ScalarGrid grid(map.spec);
  for (int j = 0; j < map.spec.height; ++j) {
    for (int i = 0; i < map.spec.width; ++i) {
      grid.cells[map.spec.index(i, j)] = map.average(i, j);
    }
  }
  return grid;
}

}  // namespace navgen
