#include "voxplane/frame_io.hpp"

#include "voxplane/errors.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace voxplane {
namespace {

constexpr char kMagic[4] = {'V', 'X', 'P', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("frame stream: truncated file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f32(std::ostream& os, float v) {
  std::uint32_t u;
  std::memcpy(&u, &v, 4);
  put_u32(os, u);
}

float get_f32(std::istream& is) {
  const std::uint32_t u = get_u32(is);
  float v;
  std::memcpy(&v, &u, 4);
  return v;
}

void put_pose(std::ostream& os, const Pose& pose) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) put_f32(os, static_cast<float>(pose.rotation(r, c)));
    put_f32(os, static_cast<float>(pose.translation[r]));
  }
}

Pose get_pose(std::istream& is) {
  Pose pose;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) pose.rotation(r, c) = get_f32(is);
    pose.translation[r] = get_f32(is);
  }
  return pose;
}

}  // namespace

Pose quantize_pose(const Pose& pose) {
  Pose q;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c)
      q.rotation(r, c) = static_cast<double>(static_cast<float>(pose.rotation(r, c)));
    q.translation[r] = static_cast<double>(static_cast<float>(pose.translation[r]));
  }
  return q;
}

void write_frames_binary(const std::string& path, const std::vector<SensorFrame>& frames) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw OutputError("frame stream: cannot open for write: " + path);
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  for (const SensorFrame& f : frames) {
    put_u32(os, static_cast<std::uint32_t>(f.points.size()));
    put_pose(os, f.pose);
    for (const Vec3f& p : f.points) {
      put_f32(os, p.x());
      put_f32(os, p.y());
      put_f32(os, p.z());
    }
  }
  if (!os) throw OutputError("frame stream: write failed: " + path);
}

std::vector<SensorFrame> read_frames_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MissingInputError("frame stream: cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("frame stream: bad magic in " + path);
  if (get_u32(is) != kVersion) throw std::runtime_error("frame stream: unsupported version");

  std::vector<SensorFrame> frames;
  for (;;) {
    if (is.peek() == EOF) break;
    SensorFrame f;
    const std::uint32_t n = get_u32(is);
    f.pose = get_pose(is);
    f.points.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      f.points[i].x() = get_f32(is);
      f.points[i].y() = get_f32(is);
      f.points[i].z() = get_f32(is);
    }
    f.timestamp = static_cast<double>(frames.size());
    frames.push_back(std::move(f));
  }
  return frames;
}

void write_frames_text(const std::string& path, const std::vector<SensorFrame>& frames) {
  std::ofstream os(path);
  if (!os) throw OutputError("frame stream: cannot open for write: " + path);
  char buf[64];
  for (const SensorFrame& f : frames) {
    os << "frame " << f.points.size() << "\n";
    os << "pose";
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        std::snprintf(buf, sizeof buf, " %.9g", f.pose.rotation(r, c));
        os << buf;
      }
      std::snprintf(buf, sizeof buf, " %.9g", f.pose.translation[r]);
      os << buf;
    }
    os << "\n";
    for (const Vec3f& p : f.points) {
      std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g\n", static_cast<double>(p.x()),
                    static_cast<double>(p.y()), static_cast<double>(p.z()));
      os << buf;
    }
  }
  if (!os) throw OutputError("frame stream: write failed: " + path);
}

std::vector<SensorFrame> read_frames_text(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw MissingInputError("frame stream: cannot open: " + path);
  std::vector<SensorFrame> frames;
  std::string line;
  const auto next_content_line = [&](std::string& out) -> bool {
    while (std::getline(is, out)) {
      std::size_t i = out.find_first_not_of(" \t\r");
      if (i == std::string::npos || out[i] == '#') continue;
      return true;
    }
    return false;
  };

  while (next_content_line(line)) {
    std::istringstream hs(line);
    std::string kw;
    std::size_t n = 0;
    hs >> kw >> n;
    if (kw != "frame" || !hs)
      throw std::runtime_error("frame stream: expected 'frame <count>' in " + path);

    SensorFrame f;
    if (!next_content_line(line))
      throw std::runtime_error("frame stream: missing pose line in " + path);
    std::istringstream ps(line);
    ps >> kw;
    if (kw != "pose") throw std::runtime_error("frame stream: expected 'pose' in " + path);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) ps >> f.pose.rotation(r, c);
      ps >> f.pose.translation[r];
    }
    if (!ps) throw std::runtime_error("frame stream: malformed pose in " + path);

    f.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!next_content_line(line))
        throw std::runtime_error("frame stream: truncated point list in " + path);
      std::istringstream ls(line);
      ls >> f.points[i].x() >> f.points[i].y() >> f.points[i].z();
      if (!ls) throw std::runtime_error("frame stream: malformed point in " + path);
    }
    f.timestamp = static_cast<double>(frames.size());
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace voxplane
