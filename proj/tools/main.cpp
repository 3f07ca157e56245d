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


#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "config.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitAcceptance = 4;

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Quantum-dot cascade and PBS fusion simulator"};
  app.set_version_flag("--version", std::string(qdf_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file, output, format;
  std::vector<std::string> overrides;
  std::string seed, workers, shots, scheme;
  app.add_option("-c,--config", config_file, "INI config file")
      ->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override, section.key=value");
  app.add_option("--seed", seed, "RNG seed (run.seed)");
  app.add_option("--workers", workers, "Worker threads (run.workers)");
  app.add_option("--shots", shots, "Shots per setting (experiment.shots)");
  app.add_option("--scheme", scheme, "Fusion scheme (fusion.scheme)");
  app.add_option("--format", format, "csv or json (run.format)");
  app.add_option("-o,--output", output, "Write the report here");

  qdcli::CommandOptions opt;
  auto *pair = app.add_subcommand("pair", "Two-photon amplitude, spectrum, "
                                          "purity and Schmidt spectrum");
  pair->add_option("--stride", opt.stride, "Density grid sampling stride");
  pair->add_option("--spectrum-points", opt.spectrum_points,
                   "Points per spectrum axis");
  app.add_subcommand("hom", "PBS two-photon interference per line");
  auto *fuse = app.add_subcommand("fuse", "Fuse two pairs");
  fuse->add_flag("--analytic", opt.analytic, "Use the closed-form lattice path");
  auto *ghz = app.add_subcommand("ghz", "Sampled GHZ population, coherence "
                                        "and fidelity");
  ghz->add_flag("--compare", opt.compare, "All three schemes");
  auto *tomo = app.add_subcommand("tomo", "Two-qubit state tomography");
  tomo->add_option("counts", opt.counts_file, "setting_label,count file");
  tomo->add_option("--synthesize", opt.synthesize,
                   "bell, product or werner:<p>");
  tomo->add_option("--write-counts", opt.write_counts,
                   "Save synthesized counts");
  app.add_subcommand("loop", "Fiber-loop multiplexed GHZ source");
  app.add_subcommand("reproduce", "Evaluate every acceptance criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    qdcli::RunConfig config;
    if (!config_file.empty()) config.load_file(config_file);
    for (const auto &o : overrides) config.set(o);
    if (!seed.empty()) config.set("run.seed", seed);
    if (!workers.empty()) config.set("run.workers", workers);
    if (!shots.empty()) config.set("experiment.shots", shots);
    if (!scheme.empty()) config.set("fusion.scheme", scheme);
    if (!format.empty()) config.set("run.format", format);
    // Resolve every derived block once so bad values fail before output.
    config.emitter();
    config.grid();
    config.fusion();

    bool passed = true;
    qdcli::Report report("");
    if (command == "pair") report = qdcli::cmd_pair(config, opt);
    else if (command == "hom") report = qdcli::cmd_hom(config, opt);
    else if (command == "fuse") report = qdcli::cmd_fuse(config, opt);
    else if (command == "ghz") report = qdcli::cmd_ghz(config, opt);
    else if (command == "tomo") report = qdcli::cmd_tomo(config, opt);
    else if (command == "loop") report = qdcli::cmd_loop(config, opt);
    else report = qdcli::cmd_reproduce(config, opt, passed);

    const std::string text = report.render(config.str("run.format"));
    if (output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(output, std::ios::binary);
      out << text;
      if (!out) {
        std::cerr << "error: cannot write " << output << "\n";
        return 1;
      }
    }
    return passed ? 0 : kExitAcceptance;
  } catch (const qdcli::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qdcli::DataError &e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
