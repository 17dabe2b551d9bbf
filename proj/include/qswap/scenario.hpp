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

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qswap/algebra.hpp"
#include "qswap/bath.hpp"
#include "qswap/observables.hpp"
#include "qswap/propagator.hpp"

namespace qswap {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitialStateChoice { mixed_up, singlet, custom };

/// Flat `key = value` configuration; see parse_config for the format.
/// Times (t_max) are in units of tau_s.
struct ScenarioConfig {
  double j0 = 1.0;                 // Kelvin
  double lambda2_eta = 1.8e-5;     // dimensionless
  double temperature = 300.0;      // Kelvin
  double omega_c = 400.0;          // Kelvin
  double t_max = 4.0;              // units of tau_s
  int n_points = 400;
  BathMode bath_mode = BathMode::exact;
  InitialStateChoice initial_state = InitialStateChoice::mixed_up;
  std::array<complexd, 16> custom_state{};  // row-major, multiplet basis
  bool has_custom_state = false;
  std::string output_path = "out.csv";
  int kernel_du_divisor = 40;
  std::uint64_t seed = 12345;

  void validate() const {
    if (!(j0 > 0.0)) throw ConfigError("config error: j0 must be positive");
    if (lambda2_eta < 0.0) throw ConfigError("config error: lambda2_eta must be non-negative");
    if (!(temperature > 0.0)) throw ConfigError("config error: temperature must be positive");
    if (!(omega_c > 0.0)) throw ConfigError("config error: omega_c must be positive");
    if (!(t_max > 0.0)) throw ConfigError("config error: t_max must be positive");
    if (n_points < 2) throw ConfigError("config error: n_points must be at least 2");
    if (kernel_du_divisor < 20)
      throw ConfigError("config error: kernel_du_divisor must be at least 20");
    if (initial_state == InitialStateChoice::custom && !has_custom_state)
      throw ConfigError("config error: custom_state is required when initial_state = custom");
    if (initial_state != InitialStateChoice::custom && has_custom_state)
      throw ConfigError("config error: custom_state is only allowed when initial_state = custom");
  }

  BathParams bath_params() const { return {lambda2_eta, temperature, omega_c, bath_mode}; }
};

namespace detail_cfg {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// "re+imi" / "re-imi" / bare real.
inline complexd parse_complex(const std::string& token, const std::string& key) {
  std::string s = trim(token);
  if (s.empty()) throw ConfigError("config error: empty complex entry in " + key);
  if (s.back() == 'i' || s.back() == 'I') {
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
    }
    if (split == std::string::npos)
      throw ConfigError("config error: malformed complex entry '" + token + "' in " + key);
    try {
      std::size_t p1 = 0, p2 = 0;
      const std::string re = s.substr(0, split), im = s.substr(split);
      const complexd z(std::stod(re, &p1), std::stod(im, &p2));
      if (p1 != re.size() || p2 != im.size()) throw std::invalid_argument("trailing");
      return z;
    } catch (const std::exception&) {
      throw ConfigError("config error: malformed complex entry '" + token + "' in " + key);
    }
  }
  try {
    std::size_t pos = 0;
    const double re = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return complexd(re, 0.0);
  } catch (const std::exception&) {
    throw ConfigError("config error: malformed complex entry '" + token + "' in " + key);
  }
}

inline double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config error: invalid numeric value for " + key);
  }
}

inline long parse_long(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config error: invalid integer value for " + key);
  }
}

}  // namespace detail_cfg

inline ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail_cfg::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config error: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = detail_cfg::trim(line.substr(0, eq));
    const std::string value = detail_cfg::trim(line.substr(eq + 1));
    using detail_cfg::parse_double;
    using detail_cfg::parse_long;
    if (key == "j0") cfg.j0 = parse_double(value, key);
    else if (key == "lambda2_eta") cfg.lambda2_eta = parse_double(value, key);
    else if (key == "temperature") cfg.temperature = parse_double(value, key);
    else if (key == "omega_c") cfg.omega_c = parse_double(value, key);
    else if (key == "t_max") cfg.t_max = parse_double(value, key);
    else if (key == "n_points") cfg.n_points = static_cast<int>(parse_long(value, key));
    else if (key == "kernel_du_divisor")
      cfg.kernel_du_divisor = static_cast<int>(parse_long(value, key));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(value, key));
    else if (key == "output_path") cfg.output_path = value;
    else if (key == "bath_mode") {
      if (value == "exact") cfg.bath_mode = BathMode::exact;
      else if (value == "high_t") cfg.bath_mode = BathMode::high_t;
      else if (value == "markov") cfg.bath_mode = BathMode::markov;
      else throw ConfigError("config error: bath_mode must be exact, high_t or markov");
    } else if (key == "initial_state") {
      if (value == "mixed_up") cfg.initial_state = InitialStateChoice::mixed_up;
      else if (value == "singlet") cfg.initial_state = InitialStateChoice::singlet;
      else if (value == "custom") cfg.initial_state = InitialStateChoice::custom;
      else throw ConfigError("config error: initial_state must be mixed_up, singlet or custom");
    } else if (key == "custom_state") {
      std::stringstream ss(value);
      std::string token;
      int i = 0;
      while (std::getline(ss, token, ',')) {
        if (i >= 16) throw ConfigError("config error: custom_state needs exactly 16 entries");
        cfg.custom_state[i++] = detail_cfg::parse_complex(token, key);
      }
      if (i != 16) throw ConfigError("config error: custom_state needs exactly 16 entries");
      cfg.has_custom_state = true;
    } else {
      throw ConfigError("config error: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

inline ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open config file '" + path + "'");
  return parse_config(in);
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", x);
  return buf;
}

inline void dump_config(const ScenarioConfig& cfg, std::ostream& out) {
  auto mode = [&] {
    switch (cfg.bath_mode) {
      case BathMode::exact: return "exact";
      case BathMode::high_t: return "high_t";
      case BathMode::markov: return "markov";
    }
    return "exact";
  }();
  auto init = [&] {
    switch (cfg.initial_state) {
      case InitialStateChoice::mixed_up: return "mixed_up";
      case InitialStateChoice::singlet: return "singlet";
      case InitialStateChoice::custom: return "custom";
    }
    return "mixed_up";
  }();
  out << "# effective configuration\n";
  out << "j0 = " << format_double(cfg.j0) << "\n";
  out << "lambda2_eta = " << format_double(cfg.lambda2_eta) << "\n";
  out << "temperature = " << format_double(cfg.temperature) << "\n";
  out << "omega_c = " << format_double(cfg.omega_c) << "\n";
  out << "t_max = " << format_double(cfg.t_max) << "\n";
  out << "n_points = " << cfg.n_points << "\n";
  out << "bath_mode = " << mode << "\n";
  out << "initial_state = " << init << "\n";
  if (cfg.has_custom_state) {
    out << "custom_state = ";
    for (int i = 0; i < 16; ++i) {
      if (i) out << ", ";
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%.12e%+.12ei", cfg.custom_state[i].real(),
                    cfg.custom_state[i].imag());
      out << buf;
    }
    out << "\n";
  }
  out << "output_path = " << cfg.output_path << "\n";
  out << "kernel_du_divisor = " << cfg.kernel_du_divisor << "\n";
  out << "seed = " << cfg.seed << "\n";
}

struct ScenarioResult {
  std::vector<ObservableRecord> records;
  double tau_s = 0.0;
};

inline Matrix4c scenario_initial_state(const ScenarioConfig& cfg) {
  switch (cfg.initial_state) {
    case InitialStateChoice::mixed_up: return initial_state(InitialStateKind::mixed_up);
    case InitialStateChoice::singlet: return initial_state(InitialStateKind::singlet);
    case InitialStateChoice::custom: {
      Matrix4c rho;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) rho(a, b) = cfg.custom_state[a * 4 + b];
      try {
        return custom_initial_state(rho);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config error: custom_state: ") + e.what());
      }
    }
  }
  throw ConfigError("config error: invalid initial_state");
}

/// Pure-state vector when the initial state has a unit eigenvalue; empty
/// otherwise (state_fidelity is then not reported).
inline std::optional<Vector4c> pure_component(const Matrix4c& rho) {
  if (state_purity(rho) < 1.0 - 1e-9) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
  int imax = 0;
  es.eigenvalues().maxCoeff(&imax);
  Vector4c v = es.eigenvectors().col(imax);
  v.normalize();
  return v;
}

inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const EnergySpectrum spectrum = energies(cfg.j0);
  const GateSchedule schedule = make_schedule(cfg.j0);
  const Matrix4c rho0 = scenario_initial_state(cfg);
  const std::optional<Vector4c> psi0 = pure_component(rho0);
  const double horizon = cfg.t_max * schedule.tau_s;
  const BathKernelTable table(cfg.bath_params(), spectrum, horizon, cfg.kernel_du_divisor);

  // Times snapped to the kernel grid so region boundaries fall on nodes.
  std::vector<double> times(cfg.n_points);
  for (int i = 0; i < cfg.n_points; ++i) {
    const double t = horizon * i / (cfg.n_points - 1);
    times[i] = table.du() * std::llround(t / table.du());
  }
  const auto series =
      evolve_series(times, rho0, table, default_m_tensor(), spectrum, schedule);
  ScenarioResult result;
  result.tau_s = schedule.tau_s;
  result.records.reserve(series.size());
  for (const auto& pt : series)
    result.records.push_back(make_record(pt, spectrum, schedule, psi0));
  return result;
}

/// Fixed CSV contract: '.' decimal separator, ',' field separator, LF line
/// endings; >= 12 significant digits; state_fidelity empty for mixed inputs.
inline void write_csv(const ScenarioResult& result, std::ostream& out) {
  out << "t,tbar,s1,s2,gate_fidelity,gate_purity,state_fidelity,state_purity,"
         "entropy_bits,trace_error,herm_error,t_over_taus\n";
  for (const auto& r : result.records) {
    out << format_double(r.t) << ',' << format_double(r.tbar) << ',' << format_double(r.s1)
        << ',' << format_double(r.s2) << ',' << format_double(r.gate_fidelity) << ','
        << format_double(r.gate_purity) << ','
        << (r.state_fidelity ? format_double(*r.state_fidelity) : std::string()) << ','
        << format_double(r.state_purity) << ',' << format_double(r.entropy_bits) << ','
        << format_double(r.trace_error) << ',' << format_double(r.herm_error) << ','
        << format_double(r.t / result.tau_s) << '\n';
  }
}

inline void write_csv_file(const ScenarioResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("config error: cannot open output file '" + path + "'");
  write_csv(result, out);
}

/// Observables at t = tau_s for a single parameter value (sweep summary row).
struct SweepPoint {
  double value = 0.0;
  double s1_at_taus = 0.0;
  double gate_fidelity_at_taus = 0.0;
  double gate_purity_at_taus = 0.0;
  double entropy_at_taus = 0.0;
};

inline ScenarioConfig with_param(const ScenarioConfig& base, const std::string& param,
                                 double value) {
  ScenarioConfig cfg = base;
  if (param == "lambda2_eta") cfg.lambda2_eta = value;
  else if (param == "temperature") cfg.temperature = value;
  else if (param == "omega_c") cfg.omega_c = value;
  else if (param == "j0") cfg.j0 = value;
  else throw ConfigError("config error: unknown sweep parameter '" + param + "'");
  cfg.validate();
  cfg.bath_params().validate();
  return cfg;
}

struct SweepResult {
  std::vector<SweepPoint> summary;
  std::vector<std::string> csv_paths;
};

inline SweepResult sweep_scenario(const ScenarioConfig& base, const std::string& param,
                                  const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("config error: sweep values list is empty");
  if (base.t_max < 1.0)
    throw ConfigError("config error: sweep requires t_max >= 1 (summary is taken at tau_s)");
  SweepResult result;
  const std::filesystem::path base_path(base.output_path);
  const std::string stem = (base_path.parent_path() / base_path.stem()).string();
  const std::string ext = base_path.extension().string().empty() ? ".csv"
                                                                 : base_path.extension().string();
  for (std::size_t i = 0; i < values.size(); ++i) {
    ScenarioConfig cfg = with_param(base, param, values[i]);
    char suffix[64];
    std::snprintf(suffix, sizeof(suffix), "_%s_%zu", param.c_str(), i);
    cfg.output_path = stem + suffix + ext;
    const ScenarioResult run = run_scenario(cfg);
    write_csv_file(run, cfg.output_path);
    result.csv_paths.push_back(cfg.output_path);

    // Row nearest tau_s (tau_s is always on the snapped time grid).
    const auto it = std::min_element(
        run.records.begin(), run.records.end(), [&](const auto& a, const auto& b) {
          return std::abs(a.t - run.tau_s) < std::abs(b.t - run.tau_s);
        });
    result.summary.push_back({values[i], it->s1, it->gate_fidelity, it->gate_purity,
                              it->entropy_bits});
  }
  const std::string summary_path = stem + "_summary" + ext;
  std::ofstream out(summary_path, std::ios::binary);
  if (!out) throw ConfigError("config error: cannot open output file '" + summary_path + "'");
  out << "value,s1_at_taus,gate_fidelity_at_taus,gate_purity_at_taus,entropy_at_taus\n";
  for (const auto& p : result.summary)
    out << format_double(p.value) << ',' << format_double(p.s1_at_taus) << ','
        << format_double(p.gate_fidelity_at_taus) << ',' << format_double(p.gate_purity_at_taus)
        << ',' << format_double(p.entropy_at_taus) << '\n';
  result.csv_paths.push_back(summary_path);
  return result;
}

/// (u, Gamma, Delta) dump of the configured kernel mode. t_max_kernel is in
/// units of tau_s, column u in 1/Kelvin.
inline void kernel_dump(const ScenarioConfig& cfg, double t_max_kernel, int n,
                        std::ostream& out) {
  cfg.validate();
  if (!(t_max_kernel > 0.0)) throw ConfigError("config error: kernel t_max must be positive");
  if (n < 2) throw ConfigError("config error: kernel points must be at least 2");
  const GateSchedule schedule = make_schedule(cfg.j0);
  const BathParams params = cfg.bath_params();
  out << "u,gamma,delta\n";
  for (int i = 0; i < n; ++i) {
    const double u = t_max_kernel * schedule.tau_s * i / (n - 1);
    const KernelSample s = kernel_sample(u, params);
    out << format_double(u) << ',' << format_double(s.gamma) << ',' << format_double(s.delta)
        << '\n';
  }
}

}  // namespace qswap
