#pragma once

#include <string>
#include <vector>

#include "voxplane/types.hpp"

namespace voxplane {

// Frame stream formats.
//
// Binary (little-endian): magic "VXPF", u32 version = 1, then per frame
//   u32 point_count,
//   12 x f32 pose, the [R|t] matrix row-major
//     (r00 r01 r02 tx  r10 r11 r12 ty  r20 r21 r22 tz),
//   point_count x 3 f32 sensor-frame xyz.
// Frames repeat until end of file; a short read is an error.
//
// Text (for hand-written fixtures): per frame
//   frame <point_count>
//   pose <12 numbers, same order as binary>
//   <point_count lines of "x y z">
// Blank lines and lines starting with '#' are ignored.

void write_frames_binary(const std::string& path, const std::vector<SensorFrame>& frames);
std::vector<SensorFrame> read_frames_binary(const std::string& path);

void write_frames_text(const std::string& path, const std::vector<SensorFrame>& frames);
std::vector<SensorFrame> read_frames_text(const std::string& path);

/// Round a pose through the file format's f32 precision. The simulator
/// emits poses already quantized so a written-then-replayed stream drives
/// the pipeline bit-identically to the live run.
Pose quantize_pose(const Pose& pose);

}  // namespace voxplane
