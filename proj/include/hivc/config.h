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


#ifndef HIVC_CONFIG_H_
#define HIVC_CONFIG_H_

#include <string>
#include <string_view>

#include "hivc/codec.h"

namespace hivc {

// Flat key=value text. '#' starts a comment; blank lines are ignored.
// Keys not listed by dump_config are rejected, as are repeated keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Applies the keys in `text` on top of `base`. The result is validated.
EncoderConfig parse_config(std::string_view text,
                           const EncoderConfig& base = EncoderConfig());
EncoderConfig load_config(const std::string& path,
                          const EncoderConfig& base = EncoderConfig());

// Every field, one per line, in a fixed order. parse_config(dump_config(c))
// reproduces c exactly.
std::string dump_config(const EncoderConfig& cfg);

// Sets a single key; throws ConfigError for unknown keys or bad values.
void set_config_value(EncoderConfig& cfg, std::string_view key,
                      std::string_view value);

const char* flow_method_name(FlowMethod m);

}  // namespace hivc

#endif  // HIVC_CONFIG_H_
