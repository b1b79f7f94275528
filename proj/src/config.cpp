/*
 * Copyright 2026 the dsmclb authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dsmc/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "dsmc/csv.hpp"

namespace dsmc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("parseConfig: line " + std::to_string(line) + ": " + what);
}

double parseDouble(const std::string& v, int line, const std::string& key) {
  double out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    fail(line, "invalid number for '" + key + "'");
  return out;
}

template <typename Int>
Int parseInteger(const std::string& v, int line, const std::string& key) {
  Int out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    fail(line, "invalid integer for '" + key + "'");
  return out;
}

bool parseBool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(line, "invalid boolean for '" + key + "' (use true/false)");
}

Vector3d parseVector3(const std::string& v, int line, const std::string& key) {
  std::string spaced = v;
  for (char& c : spaced)
    if (c == ',') c = ' ';
  std::istringstream ss(spaced);
  std::vector<std::string> tokens;
  for (std::string tok; ss >> tok;) tokens.push_back(tok);
  if (tokens.size() != 3) fail(line, "'" + key + "' needs exactly 3 components");
  Vector3d out;
  for (int k = 0; k < 3; ++k) out[k] = parseDouble(tokens[k], line, key);
  return out;
}

bool knownSection(const std::string& name) {
  return name == "domain" || name == "gas" || name == "inlet" || name == "run" ||
         name == "balance" || name == "synthetic" || name == "output";
}

}  // namespace

ExperimentConfig parseConfig(const std::string& text) {
  ExperimentConfig cfg;
  Vector3d domainLo = cfg.sim.domain.lo;
  Vector3d domainHi = cfg.sim.domain.hi;
  std::optional<double> fnum, fnumPerRank, damping;

  std::istringstream stream(text);
  std::string rawLine;
  std::string section;  // empty until the first header; bare keys belong to [run]
  int lineNo = 0;
  while (std::getline(stream, rawLine)) {
    ++lineNo;
    if (!rawLine.empty() && rawLine.back() == '\r') rawLine.pop_back();
    if (const auto hash = rawLine.find('#'); hash != std::string::npos) rawLine.erase(hash);
    const std::string line = trim(rawLine);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(lineNo, "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!knownSection(name)) fail(lineNo, "unknown section '[" + name + "]'");
      section = name;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineNo, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineNo, "missing key before '='");
    if (value.empty()) fail(lineNo, "empty value for '" + key + "'");

    const std::string sec = section.empty() ? "run" : section;
    if (sec == "domain") {
      if (key == "lo")
        domainLo = parseVector3(value, lineNo, key);
      else if (key == "hi")
        domainHi = parseVector3(value, lineNo, key);
      else
        fail(lineNo, "unknown key '" + key + "' in [domain]");
    } else if (sec == "gas") {
      if (key == "mass")
        cfg.sim.gas.molecularMass = parseDouble(value, lineNo, key);
      else if (key == "vhs_diameter")
        cfg.sim.gas.vhsDiameterRef = parseDouble(value, lineNo, key);
      else if (key == "vhs_t_ref")
        cfg.sim.gas.vhsTemperatureRef = parseDouble(value, lineNo, key);
      else if (key == "vhs_omega")
        cfg.sim.gas.vhsOmega = parseDouble(value, lineNo, key);
      else if (key == "fnum")
        fnum = parseDouble(value, lineNo, key);
      else if (key == "fnum_per_rank")
        fnumPerRank = parseDouble(value, lineNo, key);
      else
        fail(lineNo, "unknown key '" + key + "' in [gas]");
    } else if (sec == "inlet") {
      if (key == "center")
        cfg.sim.inlet.center = parseVector3(value, lineNo, key);
      else if (key == "radius")
        cfg.sim.inlet.radius = parseDouble(value, lineNo, key);
      else if (key == "velocity")
        cfg.sim.inlet.bulkVelocity = parseVector3(value, lineNo, key);
      else if (key == "density")
        cfg.sim.inlet.density = parseDouble(value, lineNo, key);
      else if (key == "temperature")
        cfg.sim.inlet.temperature = parseDouble(value, lineNo, key);
      else
        fail(lineNo, "unknown key '" + key + "' in [inlet]");
    } else if (sec == "run") {
      if (key == "ranks")
        cfg.sim.numRanks = parseInteger<int>(value, lineNo, key);
      else if (key == "steps")
        cfg.sim.nSteps = parseInteger<long long>(value, lineNo, key);
      else if (key == "dt")
        cfg.sim.dt = parseDouble(value, lineNo, key);
      else if (key == "seed")
        cfg.sim.seed = parseInteger<unsigned long long>(value, lineNo, key);
      else if (key == "timer") {
        if (value == "wall")
          cfg.sim.timerMode = TimerMode::Wall;
        else if (value == "synthetic")
          cfg.sim.timerMode = TimerMode::Synthetic;
        else
          fail(lineNo, "timer must be 'wall' or 'synthetic'");
      } else if (key == "collision_cells_per_rank")
        cfg.sim.collisionCellsPerRank = parseInteger<int>(value, lineNo, key);
      else if (key == "workers")
        cfg.sim.workers = parseInteger<int>(value, lineNo, key);
      else if (key == "ramp_steps")
        cfg.sim.rampSteps = parseInteger<long long>(value, lineNo, key);
      else if (key == "ramp_fraction")
        cfg.sim.rampFraction = parseDouble(value, lineNo, key);
      else
        fail(lineNo, "unknown key '" + key + "' in [run]");
    } else if (sec == "balance") {
      if (key == "strategy") {
        try {
          cfg.sim.strategy.kind = strategyKindFromName(value);
        } catch (const std::invalid_argument&) {
          fail(lineNo, "unknown strategy '" + value + "'");
        }
      } else if (key == "damping")
        damping = parseDouble(value, lineNo, key);
      else if (key == "early_interval")
        cfg.sim.schedule.earlyInterval = parseInteger<long long>(value, lineNo, key);
      else if (key == "early_until")
        cfg.sim.schedule.earlyUntil = parseInteger<long long>(value, lineNo, key);
      else if (key == "late_interval")
        cfg.sim.schedule.lateInterval = parseInteger<long long>(value, lineNo, key);
      else if (key == "stop_at")
        cfg.sim.schedule.stopAt = parseInteger<long long>(value, lineNo, key);
      else if (key == "particle_cap")
        cfg.sim.schedule.particleCap = parseInteger<long long>(value, lineNo, key);
      else if (key == "cells_per_rank_map")
        cfg.sim.mapCellsPerRank = parseInteger<int>(value, lineNo, key);
      else if (key == "tacf_floor_beta")
        cfg.sim.strategy.tacfFloorBeta = parseDouble(value, lineNo, key);
      else if (key == "timing_window")
        cfg.sim.strategy.timingWindow = parseInteger<int>(value, lineNo, key);
      else
        fail(lineNo, "unknown key '" + key + "' in [balance]");
    } else if (sec == "synthetic") {
      if (key == "a_move")
        cfg.sim.synthetic.aMove = parseDouble(value, lineNo, key);
      else if (key == "a_pair")
        cfg.sim.synthetic.aPair = parseDouble(value, lineNo, key);
      else if (key == "a_create")
        cfg.sim.synthetic.aCreate = parseDouble(value, lineNo, key);
      else if (key == "a_fixed")
        cfg.sim.synthetic.aFixed = parseDouble(value, lineNo, key);
      else
        fail(lineNo, "unknown key '" + key + "' in [synthetic]");
    } else {  // output
      if (key == "dir")
        cfg.output.dir = value;
      else if (key == "dump_costmaps")
        cfg.output.dumpCostmaps = parseBool(value, lineNo, key);
      else if (key == "rank_dump_interval")
        cfg.output.rankDumpInterval = parseInteger<long long>(value, lineNo, key);
      else if (key == "summary_window")
        cfg.output.summaryWindow = parseInteger<long long>(value, lineNo, key);
      else
        fail(lineNo, "unknown key '" + key + "' in [output]");
    }
  }

  cfg.sim.domain = Box3d(domainLo, domainHi);  // validity checked below

  if (fnum && fnumPerRank)
    throw ConfigError("parseConfig: set exactly one of fnum and fnum_per_rank");
  if (fnum) {
    cfg.fnumPerRank.reset();
    cfg.sim.gas.fnum = *fnum;
  } else if (fnumPerRank) {
    cfg.fnumPerRank = *fnumPerRank;
  }
  cfg.resolveFnum();

  if (damping) cfg.sim.strategy.damping = damping;
  if (cfg.sim.strategy.kind == StrategyKind::TimerDamped && !cfg.sim.strategy.damping)
    cfg.sim.strategy.damping = 0.5;

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("parseConfig: ") + e.what());
  }
  return cfg;
}

ExperimentConfig loadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("loadConfigFile: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseConfig(buf.str());
}

std::string serializeConfig(const ExperimentConfig& config) {
  const SimulationConfig& sim = config.sim;
  std::ostringstream out;
  const auto vec = [](const Vector3d& v) {
    return formatDouble(v[0]) + " " + formatDouble(v[1]) + " " + formatDouble(v[2]);
  };

  out << "[domain]\n";
  out << "lo = " << vec(sim.domain.lo) << '\n';
  out << "hi = " << vec(sim.domain.hi) << '\n';

  out << "\n[gas]\n";
  out << "mass = " << formatDouble(sim.gas.molecularMass) << '\n';
  out << "vhs_diameter = " << formatDouble(sim.gas.vhsDiameterRef) << '\n';
  out << "vhs_t_ref = " << formatDouble(sim.gas.vhsTemperatureRef) << '\n';
  out << "vhs_omega = " << formatDouble(sim.gas.vhsOmega) << '\n';
  if (config.fnumPerRank)
    out << "fnum_per_rank = " << formatDouble(*config.fnumPerRank) << '\n';
  else
    out << "fnum = " << formatDouble(sim.gas.fnum) << '\n';

  out << "\n[inlet]\n";
  out << "center = " << vec(sim.inlet.center) << '\n';
  out << "radius = " << formatDouble(sim.inlet.radius) << '\n';
  out << "velocity = " << vec(sim.inlet.bulkVelocity) << '\n';
  out << "density = " << formatDouble(sim.inlet.density) << '\n';
  out << "temperature = " << formatDouble(sim.inlet.temperature) << '\n';

  out << "\n[run]\n";
  out << "ranks = " << sim.numRanks << '\n';
  out << "steps = " << sim.nSteps << '\n';
  out << "dt = " << formatDouble(sim.dt) << '\n';
  out << "seed = " << sim.seed << '\n';
  out << "timer = " << (sim.timerMode == TimerMode::Wall ? "wall" : "synthetic") << '\n';
  out << "collision_cells_per_rank = " << sim.collisionCellsPerRank << '\n';
  out << "workers = " << sim.workers << '\n';
  out << "ramp_steps = " << sim.rampSteps << '\n';
  out << "ramp_fraction = " << formatDouble(sim.rampFraction) << '\n';

  out << "\n[balance]\n";
  out << "strategy = " << strategyKindName(sim.strategy.kind) << '\n';
  if (sim.strategy.damping) out << "damping = " << formatDouble(*sim.strategy.damping) << '\n';
  out << "early_interval = " << sim.schedule.earlyInterval << '\n';
  out << "early_until = " << sim.schedule.earlyUntil << '\n';
  out << "late_interval = " << sim.schedule.lateInterval << '\n';
  out << "stop_at = " << sim.schedule.stopAt << '\n';
  out << "particle_cap = " << sim.schedule.particleCap << '\n';
  out << "cells_per_rank_map = " << sim.mapCellsPerRank << '\n';
  out << "tacf_floor_beta = " << formatDouble(sim.strategy.tacfFloorBeta) << '\n';
  out << "timing_window = " << sim.strategy.timingWindow << '\n';

  out << "\n[synthetic]\n";
  out << "a_move = " << formatDouble(sim.synthetic.aMove) << '\n';
  out << "a_pair = " << formatDouble(sim.synthetic.aPair) << '\n';
  out << "a_create = " << formatDouble(sim.synthetic.aCreate) << '\n';
  out << "a_fixed = " << formatDouble(sim.synthetic.aFixed) << '\n';

  out << "\n[output]\n";
  out << "dir = " << config.output.dir << '\n';
  out << "dump_costmaps = " << (config.output.dumpCostmaps ? "true" : "false") << '\n';
  out << "rank_dump_interval = " << config.output.rankDumpInterval << '\n';
  out << "summary_window = " << config.output.summaryWindow << '\n';
  return out.str();
}

}  // namespace dsmc
