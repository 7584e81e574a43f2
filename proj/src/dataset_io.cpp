#include "navgen/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "navgen/errors.hpp"

namespace navgen {

namespace fs = std::filesystem;

namespace {

double parse_number(const std::string& field, const std::string& context) {
  try {
    std::size_t pos = 0;
    double v = std::stod(field, &pos);
    if (pos != field.size() || !std::isfinite(v)) {
      throw MalformedRecord("non-numeric field '" + field + "' in " + context);
    }
    return v;
  } catch (const std::exception&) {
    throw MalformedRecord("non-numeric field '" + field + "' in " + context);
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Trajectory load_trajectory(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw MissingFile("missing " + file.string());
  Trajectory traj;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty trajectory file");
  if (strip(line) != "t,x,y,z,qx,qy,qz,qw") {
    throw FormatError("unexpected trajectory header: " + line);
  }
  int row = 1;
  double prev_t = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    if (strip(line).empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 8) {
      throw MalformedRecord("trajectory row " + std::to_string(row) +
                            " has " + std::to_string(fields.size()) + " fields");
    }
    const std::string ctx = "trajectory row " + std::to_string(row);
    double t = parse_number(fields[0], ctx);
    Pose pose;
    pose.translation = Point3(parse_number(fields[1], ctx),
                              parse_number(fields[2], ctx),
                              parse_number(fields[3], ctx));
    Eigen::Quaterniond q(parse_number(fields[7], ctx), parse_number(fields[4], ctx),
                         parse_number(fields[5], ctx), parse_number(fields[6], ctx));
    if (std::abs(q.norm() - 1.0) > 1e-6) {
      throw MalformedRecord("non-unit quaternion in " + ctx);
    }
    pose.rotation = q.normalized();
    if (t <= prev_t) {
      throw MalformedRecord("non-increasing timestamp in " + ctx);
    }
    prev_t = t;
    traj.stamps.push_back(t);
    traj.poses.push_back(pose);
    ++row;
  }
  return traj;
}

PointCloud load_scan(const fs::path& file, int channels) {
  std::ifstream in(file);
  if (!in) throw MissingFile("missing " + file.string());
  PointCloud cloud;
  cloud.frame = Frame::sensor;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty scan file " + file.string());
  if (strip(line) != "ring,x,y,z") {
    throw FormatError("unexpected scan header in " + file.string());
  }
  int row = 1;
  while (std::getline(in, line)) {
    if (strip(line).empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 4) {
      throw MalformedRecord("scan row " + std::to_string(row) + " in " +
                            file.filename().string());
    }
    const std::string ctx = file.filename().string() + " row " + std::to_string(row);
    double ring = parse_number(fields[0], ctx);
    int ring_id = static_cast<int>(ring);
    if (ring_id != ring || ring_id < 0 || ring_id >= channels) {
      throw MalformedRecord("ring id out of range in " + ctx);
    }
    cloud.rings.push_back(ring_id);
    cloud.points.emplace_back(parse_number(fields[1], ctx),
                              parse_number(fields[2], ctx),
                              parse_number(fields[3], ctx));
    ++row;
  }
  return cloud;
}

}  // namespace

Dataset load_dataset(const fs::path& root) {
  Dataset ds;
  const fs::path meta = root / "sensor.meta";
  {
    std::ifstream in(meta);
    if (!in) throw MissingFile("missing " + meta.string());
    std::string line;
    while (std::getline(in, line)) {
      line = strip(line);
      if (line.empty() || line[0] == '#') continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw FormatError("bad sensor.meta line: " + line);
      std::string key = strip(line.substr(0, eq));
      std::string val = strip(line.substr(eq + 1));
      if (key == "channels") {
        ds.lidar.channels = static_cast<int>(parse_number(val, "sensor.meta"));
      } else if (key == "vertical_fov_deg") {
        ds.lidar.vertical_fov_deg = parse_number(val, "sensor.meta");
      } else if (key == "mount_height") {
        ds.mount_height = parse_number(val, "sensor.meta");
      } else {
        throw FormatError("unknown sensor.meta key: " + key);
      }
    }
  }

  ds.trajectory = load_trajectory(root / "trajectory.csv");

  const fs::path scan_dir = root / "scans";
  if (!fs::is_directory(scan_dir)) throw MissingFile("missing " + scan_dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(scan_dir)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.size() != ds.trajectory.size()) {
    throw RowCountMismatch("trajectory has " + std::to_string(ds.trajectory.size()) +
                           " rows but scans/ holds " + std::to_string(files.size()) +
                           " files");
  }
  ds.scans.reserve(files.size());
  for (const auto& f : files) ds.scans.push_back(load_scan(f, ds.lidar.channels));
  return ds;
}

void save_dataset(const Dataset& ds, const fs::path& root) {
  fs::create_directories(root / "scans");
  {
    std::ofstream out(root / "sensor.meta");
    out << "channels = " << ds.lidar.channels << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", ds.lidar.vertical_fov_deg);
    out << "vertical_fov_deg = " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", ds.mount_height);
    out << "mount_height = " << buf << "\n";
  }
  {
    std::ofstream out(root / "trajectory.csv");
    out << "t,x,y,z,qx,qy,qz,qw\n";
    char buf[512];
    for (std::size_t n = 0; n < ds.trajectory.size(); ++n) {
      const auto& pose = ds.trajectory.poses[n];
      std::snprintf(buf, sizeof(buf),
                    "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    ds.trajectory.stamps[n], pose.translation.x(),
                    pose.translation.y(), pose.translation.z(),
                    pose.rotation.x(), pose.rotation.y(), pose.rotation.z(),
                    pose.rotation.w());
      out << buf;
    }
  }
  char name[32];
  for (std::size_t n = 0; n < ds.scans.size(); ++n) {
    std::snprintf(name, sizeof(name), "%06zu.csv", n);
    std::ofstream out(root / "scans" / name);
    out << "ring,x,y,z\n";
    const auto& scan = ds.scans[n];
    char buf[256];
    for (std::size_t k = 0; k < scan.points.size(); ++k) {
      int ring = scan.has_rings() ? scan.rings[k] : 0;
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", ring,
                    scan.points[k].x(), scan.points[k].y(), scan.points[k].z());
      out << buf;
    }
  }
}

}  // namespace navgen
