/*
Copyright 2026 The HIVC Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef HIVC_IO_H_
#define HIVC_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hivc/error.h"
#include "hivc/image.h"

namespace hivc {

// File could not be opened, read, written, or parsed as the expected format.
class IoError : public Error {
 public:
  using Error::Error;
};

// PNM: P5 (gray, 1 channel) and P6 (RGB, 3 channels), maxval 255.
Frame read_pnm(const std::filesystem::path& path);
void write_pnm(const std::filesystem::path& path, const Frame& frame);

struct VideoInfo {
  int width = 0;
  int height = 0;
  int fps_num = 24;
  int fps_den = 1;
};

struct Video {
  VideoInfo info;
  std::vector<Frame> frames;  // RGB
};

// YUV4MPEG2 reader. Accepts C444, the 4:2:0 variants (chroma replicated to
// full resolution) and mono. Samples are converted to RGB with the full-range
// BT.601 (JFIF) matrix so the codec always sees RGB input.
Video read_y4m(const std::filesystem::path& path);

// Writes C444 with the inverse JFIF conversion.
void write_y4m(const std::filesystem::path& path, const Video& video);

// Loads a .y4m file, a single .ppm/.pgm, or a directory of .ppm files
// (sorted by name) as a video.
Video read_video(const std::filesystem::path& path);
void write_video(const std::filesystem::path& path, const Video& video);

std::vector<uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                const std::vector<uint8_t>& bytes);

}  // namespace hivc

#endif  // HIVC_IO_H_
