// Copyright 2026 The qswap Authors
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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qswap/scenario.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      out.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw qswap::ConfigError("config error: invalid sweep value '" + token + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit swap-gate decoherence simulator"};
  app.require_subcommand(1);

  std::string config_path, output_path, dump_path, param, values_csv;
  double t_max_kernel = 1.0;
  int kernel_points = 1000;

  auto* run = app.add_subcommand("run", "Evolve one scenario and write the observable CSV");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--output", output_path, "Override output_path from the config");
  run->add_option("--dump-config", dump_path, "Write the effective configuration to this file");

  auto* sweep = app.add_subcommand("sweep", "Run one scenario per parameter value");
  sweep->add_option("--config", config_path, "Configuration file")->required();
  sweep->add_option("--param", param, "Parameter to sweep (lambda2_eta, temperature, omega_c, j0)")
      ->required();
  sweep->add_option("--values", values_csv, "Comma-separated parameter values")->required();

  auto* kernel = app.add_subcommand("kernel", "Dump (u, Gamma, Delta) samples as CSV");
  kernel->add_option("--config", config_path, "Configuration file")->required();
  kernel->add_option("--t-max", t_max_kernel, "Kernel horizon in units of tau_s")->required();
  kernel->add_option("--points", kernel_points, "Number of samples")->required();
  kernel->add_option("--output", output_path, "Override output_path from the config");

  CLI11_PARSE(app, argc, argv);

  try {
    qswap::ScenarioConfig cfg = qswap::parse_config_file(config_path);
    if (!output_path.empty()) cfg.output_path = output_path;

    if (run->parsed()) {
      if (!dump_path.empty()) {
        std::ofstream out(dump_path, std::ios::binary);
        if (!out)
          throw qswap::ConfigError("config error: cannot open dump file '" + dump_path + "'");
        qswap::dump_config(cfg, out);
      }
      const qswap::ScenarioResult result = qswap::run_scenario(cfg);
      qswap::write_csv_file(result, cfg.output_path);
      std::cout << "wrote " << result.records.size() << " rows to " << cfg.output_path << "\n";
    } else if (sweep->parsed()) {
      const qswap::SweepResult result = qswap::sweep_scenario(cfg, param, parse_values(values_csv));
      for (const auto& path : result.csv_paths) std::cout << "wrote " << path << "\n";
    } else if (kernel->parsed()) {
      std::ofstream out(cfg.output_path, std::ios::binary);
      if (!out)
        throw qswap::ConfigError("config error: cannot open output file '" + cfg.output_path +
                                 "'");
      qswap::kernel_dump(cfg, t_max_kernel, kernel_points, out);
      std::cout << "wrote " << cfg.output_path << "\n";
    }
  } catch (const qswap::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const qswap::NumericalIntegrityError& e) {
    std::cerr << "numerical integrity failure: " << e.what() << "\n";
    return kExitNumericalError;
  } catch (const qswap::QuadratureError& e) {
    std::cerr << "numerical integrity failure: " << e.what() << "\n";
    return kExitNumericalError;
  }
  return 0;
}
