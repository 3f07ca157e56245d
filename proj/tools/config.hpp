// Copyright 2026 The qdfusion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdfusion/qdfusion.h"

namespace qdcli {

// Exit 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exit 3.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat "section.key" -> value store. Every key has a default, so the echo
// in the report metadata is always complete.
class RunConfig {
 public:
  RunConfig();

  // INI file; unknown sections or keys are errors.
  void load_file(const std::string &path);
  // "section.key=value" overrides.
  void set(const std::string &assignment);
  void set(const std::string &key, const std::string &value);

  const std::map<std::string, std::string> &values() const { return values_; }
  std::string str(const std::string &key) const;
  double num(const std::string &key) const;
  long long integer(const std::string &key) const;
  std::uint64_t u64(const std::string &key) const;
  bool flag(const std::string &key) const;

  qdf_emitter emitter() const;
  qdf_grid grid() const;
  qdf_fusion_config fusion() const;
  qdf_imperfections imperfections() const;
  qdf_source_model model() const;
  qdf_loop_config loop() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace qdcli
