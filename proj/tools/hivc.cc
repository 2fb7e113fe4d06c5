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

// hivc: command-line front end for the codec.
//
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 codec, 4 corrupt stream.

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hivc/bitstream.h"
#include "hivc/codec.h"
#include "hivc/config.h"
#include "hivc/io.h"
#include "hivc/parallel.h"
#include "hivc/synthetic.h"

namespace {

using namespace hivc;

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kCodec = 3, kCorrupt = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key=value report, printed to stdout and optionally saved.
class Report {
 public:
  template <typename T>
  void add(const std::string& key, const T& value) {
    std::ostringstream ss;
    ss << value;
    lines_.push_back(key + "=" + ss.str());
  }
  void add_double(const std::string& key, double v, int digits = 4) {
    if (std::isinf(v)) {
      lines_.push_back(key + "=inf");
      return;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    lines_.push_back(key + "=" + buf);
  }
  void add_block(const std::string& prefix, const std::string& text) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) lines_.push_back(prefix + line);
    }
  }
  void emit(const std::string& path) const {
    std::string text;
    for (const auto& l : lines_) text += l + "\n";
    std::cout << text;
    if (!path.empty()) {
      std::ofstream out(path, std::ios::binary);
      if (!out || !(out << text)) throw IoError("cannot write report: " + path);
    }
  }

 private:
  std::vector<std::string> lines_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string machine_note() {
  std::string cpu = "unknown";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(colon + 2);
      break;
    }
  }
  utsname u{};
  std::string os = uname(&u) == 0 ? std::string(u.sysname) + " " + u.machine : "unknown";
  return cpu + "; " + os + "; " + std::to_string(hardware_threads()) + " hw threads";
}

// --threads wins, then HIVC_THREADS, then the subcommand default.
int resolve_threads(int flag, int fallback) {
  int n = flag;
  if (n <= 0) {
    if (const char* env = std::getenv("HIVC_THREADS")) {
      try {
        n = std::stoi(env);
      } catch (const std::exception&) {
        throw UsageError(std::string("HIVC_THREADS is not a number: ") + env);
      }
      if (n <= 0) throw UsageError("HIVC_THREADS must be positive");
    }
  }
  if (n <= 0) n = fallback;
  set_threads(n);
  return max_threads();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void add_frame_psnr(Report& r, const std::vector<Frame>& a,
                    const std::vector<Frame>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    r.add_double("psnr.frame." + std::to_string(i), psnr(a[i], b[i]));
  }
  r.add_double("psnr.mean", sequence_psnr(a, b));
}

struct EncodeArgs {
  std::string input, output, config, report, recon;
  std::vector<std::string> sets;
  double target_ratio = -1.0;
  bool self_check = false;
  int threads = 0;
};

int cmd_encode(const EncodeArgs& a) {
  EncoderConfig cfg;
  try {
    if (!a.config.empty()) cfg = load_config(a.config);
    for (const auto& kv : a.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value: " + kv);
      set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (a.target_ratio >= 0.0) cfg.target_ratio = a.target_ratio;
    cfg.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const int threads = resolve_threads(a.threads, 1);
  const Video video = read_video(a.input);
  const auto t0 = std::chrono::steady_clock::now();
  const EncodeResult enc = encode(video, cfg);
  const double encode_seconds = seconds_since(t0);
  write_file(a.output, enc.bytes);

  Report r;
  r.add("command", "encode");
  r.add("input", a.input);
  r.add("output", a.output);
  r.add_block("config.", dump_config(cfg));
  r.add("width", video.info.width);
  r.add("height", video.info.height);
  r.add("frames", video.frames.size());
  r.add("bytes", enc.bytes.size());
  r.add("bytes.intra", enc.stats.intra_bytes);
  r.add("bytes.flow", enc.stats.flow_bytes);
  r.add("bytes.residual", enc.stats.residual_bytes);
  r.add_double("ratio", compression_ratio(video.info, video.frames.size(), enc.bytes.size()));
  r.add_double("budget_multiplier", enc.stats.multiplier, 6);
  r.add("rate_iterations", enc.stats.rate_iterations);
  add_frame_psnr(r, video.frames, enc.reconstruction);
  r.add_double("encode_seconds", encode_seconds);
  r.add_double("flow_seconds", enc.stats.flow_seconds);
  if (a.self_check) {
    const auto td = std::chrono::steady_clock::now();
    self_check(enc);
    const double ds = seconds_since(td);
    r.add("self_check", "pass");
    r.add_double("decode_seconds", ds);
    r.add_double("decode_fps", static_cast<double>(video.frames.size()) / ds, 2);
  }
  if (!a.recon.empty()) write_video(a.recon, Video{video.info, enc.reconstruction});
  r.add("threads", threads);
  r.add("machine", machine_note());
  r.emit(a.report);
  return kOk;
}

struct DecodeArgs {
  std::string input, output, report;
  bool bench = false;
  int runs = 5;
  int threads = 0;
};

int cmd_decode(const DecodeArgs& a) {
  if (a.bench && a.runs < 5) throw UsageError("--runs must be at least 5");
  const int threads = resolve_threads(a.threads, a.bench ? hardware_threads() : 1);
  const auto bytes = read_file(a.input);
  const int runs = a.bench ? a.runs : 1;
  std::vector<DecodeStats> stats;
  DecodeResult last;
  for (int i = 0; i < runs; ++i) {
    last = decode(bytes);
    stats.push_back(last.stats);
  }
  if (!a.output.empty()) {
    VideoInfo info{last.header.width, last.header.height, last.header.fps_num,
                   last.header.fps_den};
    write_video(a.output, Video{info, last.frames});
  }
  Report r;
  r.add("command", "decode");
  r.add("input", a.input);
  if (!a.output.empty()) r.add("output", a.output);
  r.add("width", last.header.width);
  r.add("height", last.header.height);
  r.add("frames", last.frames.size());
  r.add("bytes", bytes.size());
  r.add("runs", runs);
  auto stage = [&](const std::string& name, double DecodeStats::*m) {
    std::vector<double> v;
    for (const auto& s : stats) v.push_back(s.*m);
    r.add_double("stage." + name + "_seconds", median(v), 6);
  };
  std::vector<double> totals, entropy;
  for (const auto& s : stats) {
    totals.push_back(s.total);
    entropy.push_back(s.entropy());
  }
  const double t = median(totals);
  r.add_double("decode_seconds", t, 6);
  r.add_double("fps", t > 0.0 ? last.frames.size() / t : 0.0, 2);
  if (a.bench) {
    for (size_t i = 0; i < totals.size(); ++i) {
      r.add_double("run." + std::to_string(i) + ".seconds", totals[i], 6);
    }
  }
  stage("intra_parse", &DecodeStats::intra_parse);
  stage("intra_solve", &DecodeStats::intra_solve);
  stage("flow_parse", &DecodeStats::flow_parse);
  stage("warp", &DecodeStats::warp);
  stage("residual_parse", &DecodeStats::residual_parse);
  stage("residual_dct", &DecodeStats::residual_dct);
  stage("color", &DecodeStats::color);
  r.add_double("stage.entropy_seconds", median(entropy), 6);
  r.add("threads", threads);
  r.add("machine", machine_note());
  r.emit(a.report);
  return kOk;
}

int cmd_inspect(const std::string& input, const std::string& report) {
  const auto bytes = read_file(input);
  Report r;
  r.add("command", "inspect");
  r.add("input", input);
  r.add("file_bytes", bytes.size());
  StreamLayout layout;
  try {
    layout = inspect_stream(bytes);
  } catch (const TruncatedStreamError& e) {
    std::cerr << "hivc: truncated stream: " << e.what()
              << "; last valid GOP: " << e.last_valid_gop() << "\n";
    return kCorrupt;
  }
  const StreamHeader& h = layout.header;
  r.add("header.version", static_cast<int>(kStreamVersion));
  r.add("header.width", h.width);
  r.add("header.height", h.height);
  r.add("header.frame_count", h.frame_count);
  r.add("header.fps", std::to_string(h.fps_num) + "/" + std::to_string(h.fps_den));
  r.add("header.gop_size", static_cast<int>(h.gop_size));
  r.add("header.intra_levels", h.intra_levels);
  r.add("header.flow_levels", h.flow_levels);
  r.add("header.residual_levels", h.residual_levels);
  r.add("header_bytes", layout.header_bytes);
  r.add("gops", layout.gops.size());
  GopLayout sum;
  for (size_t g = 0; g < layout.gops.size(); ++g) {
    const GopLayout& l = layout.gops[g];
    const std::string p = "gop." + std::to_string(g) + ".";
    r.add(p + "offset", l.offset);
    r.add(p + "frames", l.frames);
    r.add(p + "bytes", l.total);
    r.add(p + "framing", l.framing);
    r.add(p + "intra", l.intra);
    r.add(p + "intra_residual", l.intra_residual);
    r.add(p + "flow", l.flow);
    r.add(p + "residual", l.residual);
    sum.framing += l.framing;
    sum.intra += l.intra;
    sum.intra_residual += l.intra_residual;
    sum.flow += l.flow;
    sum.residual += l.residual;
  }
  const double total = static_cast<double>(bytes.size());
  auto share = [&](const std::string& name, size_t n) {
    r.add("bytes." + name, n);
    r.add_double("share." + name, total > 0 ? n / total : 0.0, 6);
  };
  share("header", layout.header_bytes);
  share("framing", sum.framing);
  share("intra", sum.intra);
  share("intra_residual", sum.intra_residual);
  share("flow", sum.flow);
  share("residual", sum.residual);
  r.add("bytes.total", layout.total_bytes());
  r.emit(report);
  return kOk;
}

int cmd_metrics(const std::string& original, const std::string& decoded,
                const std::string& report) {
  const Video a = read_video(original);
  const Video b = read_video(decoded);
  if (a.frames.size() != b.frames.size() || a.info.width != b.info.width ||
      a.info.height != b.info.height) {
    throw InvalidArgument("metrics: videos differ in size or frame count");
  }
  if (a.frames.empty()) throw InvalidArgument("metrics: no frames");
  Report r;
  r.add("command", "metrics");
  r.add("original", original);
  r.add("decoded", decoded);
  r.add("frames", a.frames.size());
  add_frame_psnr(r, a.frames, b.frames);
  r.add("identical", std::isinf(sequence_psnr(a.frames, b.frames)) ? "true" : "false");
  r.emit(report);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HIVC hybrid inpainting video codec"};
  app.require_subcommand(1);

  EncodeArgs ea;
  auto* enc = app.add_subcommand("encode", "Encode a .y4m / PNM video");
  enc->add_option("input", ea.input, "Input .y4m, .ppm/.pgm, or directory of .ppm")->required();
  enc->add_option("-o,--output", ea.output, "Output stream")->required();
  enc->add_option("-c,--config", ea.config, "key=value config file");
  enc->add_option("--set", ea.sets, "Override one config key (key=value)");
  enc->add_option("--target-ratio", ea.target_ratio, "Rate control to this ratio");
  enc->add_flag("--self-check", ea.self_check, "Verify decoder output bit-exactly");
  enc->add_option("--recon", ea.recon, "Write the encoder reconstruction");
  enc->add_option("--report", ea.report, "Also save the report here");
  enc->add_option("--threads", ea.threads, "Worker threads");

  DecodeArgs da;
  auto* dec = app.add_subcommand("decode", "Decode a stream");
  dec->add_option("input", da.input, "Input stream")->required();
  dec->add_option("-o,--output", da.output, "Output .y4m, .ppm or directory");
  dec->add_flag("--bench", da.bench, "Decode repeatedly and report median timings");
  dec->add_option("--runs", da.runs, "Benchmark runs (>= 5)");
  dec->add_option("--report", da.report, "Also save the report here");
  dec->add_option("--threads", da.threads, "Worker threads");

  std::string ins_input, ins_report;
  auto* ins = app.add_subcommand("inspect", "Dump stream structure and byte shares");
  ins->add_option("input", ins_input, "Input stream")->required();
  ins->add_option("--report", ins_report, "Also save the report here");

  std::string met_a, met_b, met_report;
  auto* met = app.add_subcommand("metrics", "PSNR between two videos");
  met->add_option("original", met_a)->required();
  met->add_option("decoded", met_b)->required();
  met->add_option("--report", met_report, "Also save the report here");

  std::string syn_out;
  int syn_w = 480, syn_h = 205, syn_frames = 8;
  uint64_t syn_seed = 1;
  bool syn_static = false;
  auto* syn = app.add_subcommand("synth", "Write the deterministic synthetic test clip");
  syn->add_option("-o,--output", syn_out)->required();
  syn->add_option("--width", syn_w);
  syn->add_option("--height", syn_h);
  syn->add_option("--frames", syn_frames);
  syn->add_option("--seed", syn_seed);
  syn->add_flag("--static", syn_static, "Repeat the first frame");

  auto* cfg = app.add_subcommand("config", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*enc) return cmd_encode(ea);
    if (*dec) return cmd_decode(da);
    if (*ins) return cmd_inspect(ins_input, ins_report);
    if (*met) return cmd_metrics(met_a, met_b, met_report);
    if (*syn) {
      const Video v = syn_static ? static_clip(syn_w, syn_h, syn_frames, syn_seed)
                                 : synthetic_clip(syn_w, syn_h, syn_frames, syn_seed);
      write_video(syn_out, v);
      return kOk;
    }
    if (*cfg) {
      std::cout << dump_config(EncoderConfig());
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "hivc: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "hivc: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "hivc: " << e.what() << "\n";
    return kIo;
  } catch (const DecodeError& e) {
    std::cerr << "hivc: corrupt stream: " << e.what() << "\n";
    return kCorrupt;
  } catch (const Error& e) {
    std::cerr << "hivc: " << e.what() << "\n";
    return kCodec;
  }
  return kUsage;
}
