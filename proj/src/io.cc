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

#include "hivc/io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hivc {
namespace fs = std::filesystem;

namespace {

int clamp_byte(double v) {
  return static_cast<int>(std::clamp(std::lround(v), 0L, 255L));
}

Rgb ycbcr_to_rgb(int y, int cb, int cr) {
  const double d_cb = cb - 128.0;
  const double d_cr = cr - 128.0;
  return {clamp_byte(y + 1.402 * d_cr),
          clamp_byte(y - 0.344136 * d_cb - 0.714136 * d_cr),
          clamp_byte(y + 1.772 * d_cb)};
}

void rgb_to_ycbcr(int r, int g, int b, uint8_t* y, uint8_t* cb, uint8_t* cr) {
  *y = static_cast<uint8_t>(clamp_byte(0.299 * r + 0.587 * g + 0.114 * b));
  *cb = static_cast<uint8_t>(
      clamp_byte(128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b));
  *cr = static_cast<uint8_t>(
      clamp_byte(128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b));
}

// Reads the next whitespace-separated PNM header token, skipping comments.
std::string pnm_token(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

int parse_int(const std::string& s, const fs::path& path) {
  try {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError(path.string() + ": malformed number '" + s + "'");
  }
}

}  // namespace

std::vector<uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

Frame read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pnm_token(in);
  if (magic != "P5" && magic != "P6") {
    throw IoError(path.string() + ": not a binary PGM/PPM file");
  }
  const int w = parse_int(pnm_token(in), path);
  const int h = parse_int(pnm_token(in), path);
  const int maxval = parse_int(pnm_token(in), path);
  if (w <= 0 || h <= 0 || maxval != 255) {
    throw IoError(path.string() + ": unsupported PNM geometry or maxval");
  }
  const int channels = magic == "P5" ? 1 : 3;
  std::vector<uint8_t> raw(static_cast<size_t>(w) * h * channels);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw IoError(path.string() + ": truncated pixel data");
  }
  Frame f(w, h, channels, channels == 1 ? ColorSpace::kGray : ColorSpace::kRgb);
  for (size_t i = 0; i < static_cast<size_t>(w) * h; ++i) {
    for (int c = 0; c < channels; ++c) f.planes[c][i] = raw[i * channels + c];
  }
  return f;
}

void write_pnm(const fs::path& path, const Frame& frame) {
  const int channels = frame.channels();
  if (channels != 1 && channels != 3) {
    throw InvalidArgument("write_pnm needs 1 or 3 channels");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << (channels == 1 ? "P5" : "P6") << "\n"
      << frame.width << " " << frame.height << "\n255\n";
  const size_t n = static_cast<size_t>(frame.width) * frame.height;
  std::vector<uint8_t> raw(n * channels);
  for (size_t i = 0; i < n; ++i) {
    for (int c = 0; c < channels; ++c) {
      raw[i * channels + c] =
          static_cast<uint8_t>(std::clamp(frame.planes[c][i], 0, 255));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

Video read_y4m(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string header;
  if (!std::getline(in, header) || header.rfind("YUV4MPEG2", 0) != 0) {
    throw IoError(path.string() + ": missing YUV4MPEG2 signature");
  }
  Video video;
  std::string chroma = "420jpeg";
  std::istringstream fields(header.substr(9));
  std::string field;
  while (fields >> field) {
    const char tag = field[0];
    const std::string value = field.substr(1);
    if (tag == 'W') {
      video.info.width = parse_int(value, path);
    } else if (tag == 'H') {
      video.info.height = parse_int(value, path);
    } else if (tag == 'F') {
      const size_t colon = value.find(':');
      if (colon == std::string::npos) {
        throw IoError(path.string() + ": bad frame rate " + value);
      }
      video.info.fps_num = parse_int(value.substr(0, colon), path);
      video.info.fps_den = parse_int(value.substr(colon + 1), path);
    } else if (tag == 'C') {
      chroma = value;
    }
  }
  const int w = video.info.width;
  const int h = video.info.height;
  if (w <= 0 || h <= 0) throw IoError(path.string() + ": missing W/H");

  int cw = w, ch = h;
  bool mono = false;
  if (chroma.rfind("420", 0) == 0) {
    cw = (w + 1) / 2;
    ch = (h + 1) / 2;
  } else if (chroma == "mono") {
    mono = true;
  } else if (chroma != "444") {
    throw IoError(path.string() + ": unsupported chroma format C" + chroma);
  }
  const size_t luma_size = static_cast<size_t>(w) * h;
  const size_t chroma_size = mono ? 0 : static_cast<size_t>(cw) * ch;
  std::vector<uint8_t> buf(luma_size + 2 * chroma_size);

  std::string frame_line;
  while (std::getline(in, frame_line)) {
    if (frame_line.rfind("FRAME", 0) != 0) {
      throw IoError(path.string() + ": expected FRAME marker");
    }
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
      throw IoError(path.string() + ": truncated frame " +
                    std::to_string(video.frames.size()));
    }
    Frame f(w, h, 3, ColorSpace::kRgb);
    const uint8_t* py = buf.data();
    const uint8_t* pu = py + luma_size;
    const uint8_t* pv = pu + chroma_size;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const size_t ci =
            static_cast<size_t>(y * ch / h) * cw + static_cast<size_t>(x * cw / w);
        const int cb = mono ? 128 : pu[ci];
        const int cr = mono ? 128 : pv[ci];
        const Rgb p = ycbcr_to_rgb(py[static_cast<size_t>(y) * w + x], cb, cr);
        f.planes[0].at(x, y) = p.r;
        f.planes[1].at(x, y) = p.g;
        f.planes[2].at(x, y) = p.b;
      }
    }
    video.frames.push_back(std::move(f));
  }
  return video;
}

void write_y4m(const fs::path& path, const Video& video) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "YUV4MPEG2 W" << video.info.width << " H" << video.info.height
      << " F" << video.info.fps_num << ":" << video.info.fps_den
      << " Ip A1:1 C444\n";
  const size_t n = static_cast<size_t>(video.info.width) * video.info.height;
  std::vector<uint8_t> buf(3 * n);
  for (const Frame& f : video.frames) {
    if (f.width != video.info.width || f.height != video.info.height ||
        f.channels() != 3) {
      throw InvalidArgument("write_y4m: frame does not match video geometry");
    }
    for (size_t i = 0; i < n; ++i) {
      rgb_to_ycbcr(f.planes[0][i], f.planes[1][i], f.planes[2][i], &buf[i],
                   &buf[n + i], &buf[2 * n + i]);
    }
    out << "FRAME\n";
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw IoError("write failed for " + path.string());
}

Video read_video(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file: " + path.string());
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path)) {
      const auto ext = e.path().extension();
      if (ext == ".ppm" || ext == ".pnm") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError(path.string() + ": no .ppm frames");
    Video v;
    for (const auto& f : files) v.frames.push_back(read_pnm(f));
    v.info.width = v.frames[0].width;
    v.info.height = v.frames[0].height;
    return v;
  }
  const auto ext = path.extension();
  if (ext == ".y4m") return read_y4m(path);
  Video v;
  Frame f = read_pnm(path);
  if (f.channels() == 1) {
    Frame rgb(f.width, f.height, 3, ColorSpace::kRgb);
    for (int c = 0; c < 3; ++c) rgb.planes[c] = f.planes[0];
    f = std::move(rgb);
  }
  v.info.width = f.width;
  v.info.height = f.height;
  v.frames.push_back(std::move(f));
  return v;
}

void write_video(const fs::path& path, const Video& video) {
  if (path.extension() == ".y4m") {
    write_y4m(path, video);
    return;
  }
  if (video.frames.size() == 1) {
    write_pnm(path, video.frames[0]);
    return;
  }
  fs::create_directories(path);
  for (size_t i = 0; i < video.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05zu.ppm", i);
    write_pnm(path / name, video.frames[i]);
  }
}

}  // namespace hivc
