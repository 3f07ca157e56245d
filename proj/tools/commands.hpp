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

#include <string>

#include "config.hpp"
#include "report.hpp"

namespace qdcli {

struct CommandOptions {
  // pair: sample every `stride`-th bin of the density grid (0 = auto).
  int stride = 0;
  int spectrum_points = 64;
  // fuse: closed-form lattice path instead of the mode engine.
  bool analytic = false;
  // ghz: all three schemes.
  bool compare = false;
  // tomo
  std::string counts_file;
  std::string synthesize;
  std::string write_counts;
};

Report cmd_pair(const RunConfig &c, const CommandOptions &o);
Report cmd_hom(const RunConfig &c, const CommandOptions &o);
Report cmd_fuse(const RunConfig &c, const CommandOptions &o);
Report cmd_ghz(const RunConfig &c, const CommandOptions &o);
Report cmd_tomo(const RunConfig &c, const CommandOptions &o);
Report cmd_loop(const RunConfig &c, const CommandOptions &o);
// Sets `passed` to false when any criterion fails.
Report cmd_reproduce(const RunConfig &c, const CommandOptions &o,
                     bool &passed);

// Counts file: `setting_label,count` rows; '#' comments, blank lines and
// one optional header row are skipped. Throws DataError naming the line.
struct CountsFile {
  std::vector<std::string> labels;
  std::vector<long long> counts;
};
CountsFile read_counts(const std::string &path);
std::string format_counts(const CountsFile &f);

}  // namespace qdcli
