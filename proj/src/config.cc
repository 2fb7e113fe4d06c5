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

#include "hivc/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace hivc {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
    throw ConfigError("config: " + std::string(key) + ": not a number: '" +
                      std::string(v) + "'");
  }
  return out;
}

int parse_int(std::string_view key, std::string_view v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
    throw ConfigError("config: " + std::string(key) + ": not an integer: '" +
                      std::string(v) + "'");
  }
  return out;
}

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

struct Field {
  std::function<void(EncoderConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const EncoderConfig&)> get;
};

template <typename T>
Field int_field(T EncoderConfig::*m) {
  return {[m](EncoderConfig& c, std::string_view k, std::string_view v) {
            c.*m = parse_int(k, v);
          },
          [m](const EncoderConfig& c) { return std::to_string(c.*m); }};
}

Field double_field(double EncoderConfig::*m) {
  return {[m](EncoderConfig& c, std::string_view k, std::string_view v) {
            c.*m = parse_double(k, v);
          },
          [m](const EncoderConfig& c) { return format_double(c.*m); }};
}

Field brox_double(double BroxParams::*m) {
  return {[m](EncoderConfig& c, std::string_view k, std::string_view v) {
            c.brox.*m = parse_double(k, v);
          },
          [m](const EncoderConfig& c) { return format_double(c.brox.*m); }};
}

Field brox_int(int BroxParams::*m) {
  return {[m](EncoderConfig& c, std::string_view k, std::string_view v) {
            c.brox.*m = parse_int(k, v);
          },
          [m](const EncoderConfig& c) { return std::to_string(c.brox.*m); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"gop_size", int_field(&EncoderConfig::gop_size)},
      {"intra_density", double_field(&EncoderConfig::intra_density)},
      {"chroma_ratio", double_field(&EncoderConfig::chroma_ratio)},
      {"flow_density", double_field(&EncoderConfig::flow_density)},
      {"residual_points", double_field(&EncoderConfig::residual_points)},
      {"tonal_iterations", int_field(&EncoderConfig::tonal_iterations)},
      {"intra_mask_rounds", int_field(&EncoderConfig::intra_mask_rounds)},
      {"residual_rd_lambda", double_field(&EncoderConfig::residual_rd_lambda)},
      {"intra_levels", int_field(&EncoderConfig::intra_levels)},
      {"flow_levels", int_field(&EncoderConfig::flow_levels)},
      {"residual_levels", int_field(&EncoderConfig::residual_levels)},
      {"flow_method",
       {[](EncoderConfig& c, std::string_view k, std::string_view v) {
          if (v == "brox") {
            c.flow_method = FlowMethod::kBrox;
          } else if (v == "horn_schunck") {
            c.flow_method = FlowMethod::kHornSchunck;
          } else {
            throw ConfigError("config: " + std::string(k) +
                              ": expected brox or horn_schunck");
          }
        },
        [](const EncoderConfig& c) {
          return std::string(flow_method_name(c.flow_method));
        }}},
      {"brox.alpha", brox_double(&BroxParams::alpha)},
      {"brox.gamma", brox_double(&BroxParams::gamma)},
      {"brox.presmooth", brox_double(&BroxParams::presmooth)},
      {"brox.scale", brox_double(&BroxParams::scale)},
      {"brox.min_size", brox_int(&BroxParams::min_size)},
      {"brox.warps", brox_int(&BroxParams::warps)},
      {"brox.inner", brox_int(&BroxParams::inner)},
      {"brox.sor_iterations", brox_int(&BroxParams::sor_iterations)},
      {"brox.omega", brox_double(&BroxParams::omega)},
      {"brox.epsilon", brox_double(&BroxParams::epsilon)},
      {"hs_alpha", double_field(&EncoderConfig::hs_alpha)},
      {"hs_iterations", int_field(&EncoderConfig::hs_iterations)},
      {"target_ratio", double_field(&EncoderConfig::target_ratio)},
      {"ratio_tolerance", double_field(&EncoderConfig::ratio_tolerance)},
  };
  return table;
}

}  // namespace

const char* flow_method_name(FlowMethod m) {
  return m == FlowMethod::kBrox ? "brox" : "horn_schunck";
}

void set_config_value(EncoderConfig& cfg, std::string_view key,
                      std::string_view value) {
  for (const auto& [name, field] : fields()) {
    if (name == key) {
      field.set(cfg, key, value);
      return;
    }
  }
  throw ConfigError("config: unknown key '" + std::string(key) + "'");
}

EncoderConfig parse_config(std::string_view text, const EncoderConfig& base) {
  EncoderConfig cfg = base;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) +
                        ": expected key=value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError("config: line " + std::to_string(line_no) +
                        ": repeated key '" + std::string(key) + "'");
    }
    set_config_value(cfg, key, value);
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

EncoderConfig load_config(const std::string& path, const EncoderConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

std::string dump_config(const EncoderConfig& cfg) {
  std::string out;
  for (const auto& [name, field] : fields()) {
    out += name + "=" + field.get(cfg) + "\n";
  }
  return out;
}

}  // namespace hivc
